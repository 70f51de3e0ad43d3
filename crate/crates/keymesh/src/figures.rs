//! Parameterizations of the published figures, emitted as plot data.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use keymesh_core::analysis::{NetworkModel, SettingSpec};
use keymesh_core::attack::{capture_order, resilience_profile_full_visibility};
use keymesh_core::formulas::solve_pool_size;
use keymesh_core::keys::assign_keys;
use keymesh_core::stats::Proportion;
use keymesh_core::{ChannelParams, GeoParams, RegionKind, RngStream, SchemeParams, TrialPlan, TrialRunner};

use crate::config::{ExperimentConfig, Measure, Sweep, SweepVar, DEFAULT_TRIALS};
use crate::csv::{Cell, Table};
use crate::error::{config_err, HarnessError, Result};
use crate::sweep::run_sweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Con1,
    Con2,
    Mobility,
    Res,
    Res2,
    Res3,
}

impl Figure {
    pub const ALL: [Figure; 6] =
        [Figure::Con1, Figure::Con2, Figure::Mobility, Figure::Res, Figure::Res2, Figure::Res3];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Con1 => "con1",
            Figure::Con2 => "con2",
            Figure::Mobility => "mobility",
            Figure::Res => "res",
            Figure::Res2 => "res2",
            Figure::Res3 => "res3",
        }
    }

    /// Default values of the swept variable.
    pub fn default_range(self) -> Vec<f64> {
        let span = |lo: u32, hi: u32, step: usize| (lo..=hi).step_by(step).map(f64::from).collect();
        match self {
            Figure::Con1 | Figure::Con2 => span(20, 60, 2),
            Figure::Mobility => span(1, 10, 1),
            Figure::Res => span(1, 5, 1),
            Figure::Res2 => span(1, 60, 1),
            Figure::Res3 => span(5, 100, 5),
        }
    }

    /// Fixed CSV header.
    pub fn header(self) -> &'static [&'static str] {
        match self {
            Figure::Con1 => &["K", "r", "estimate", "ci_low", "ci_high", "trials"],
            Figure::Con2 => &["K", "n", "estimate", "ci_low", "ci_high", "trials"],
            Figure::Mobility => &["K", "T", "estimate", "ci_low", "ci_high", "trials"],
            Figure::Res => &["m", "q", "P", "estimate", "ci_low", "ci_high", "trials", "tau_mean", "analytic"],
            Figure::Res2 => &["p_target", "q", "P", "m_required", "estimate", "trials"],
            Figure::Res3 => &["q", "m", "estimate", "ci_low", "ci_high", "trials", "tau_mean", "analytic"],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            HarnessError::Config(format!("unknown figure {s:?} (expected con1, con2, mobility, res, res2 or res3)"))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub master_seed: u64,
    pub trials: u64,
    /// Overrides [`Figure::default_range`].
    pub range: Option<Vec<f64>>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self { master_seed: 0, trials: DEFAULT_TRIALS, range: None }
    }
}

/// One curve: fixed label columns plus a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub labels: Vec<(&'static str, f64)>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub figure: Figure,
    pub curves: Vec<Curve>,
    /// Compromise targets, for the required-capture figure only.
    pub targets: Vec<f64>,
}

/// Key ring size and key-setup probability held fixed across `q` in the resilience figures.
pub const RES_RING: usize = 40;
pub const RES_KEY_SETUP: f64 = 0.1;
/// Network size for the resilience figures.
pub const RES_NODES: usize = 1000;

fn config(
    measure: Measure,
    setting: SettingSpec,
    scheme: SchemeParams,
    geo: GeoParams,
    chan: ChannelParams,
    sweep: Sweep,
    opts: &FigureOptions,
) -> ExperimentConfig {
    ExperimentConfig {
        measure,
        setting,
        scheme,
        geo,
        chan,
        capture: None,
        slots: 1,
        sweep,
        trials: opts.trials,
        master_seed: opts.master_seed,
    }
}

fn with_capture(mut c: ExperimentConfig, m: usize) -> ExperimentConfig {
    c.capture = Some(keymesh_core::attack::CaptureStrategy::Random { m });
    c
}

pub fn figure_preset(figure: Figure, opts: &FigureOptions) -> Result<FigurePreset> {
    if opts.trials == 0 {
        return config_err("trials must be at least 1");
    }
    let values = opts.range.clone().unwrap_or_else(|| figure.default_range());
    let sweep = |variable| Sweep { variable, values: values.clone() };
    let reliable = ChannelParams::reliable();
    let full = SettingSpec::new(RegionKind::FullVisibility, false, false)?;
    let mut curves = Vec::new();
    let mut targets = Vec::new();
    match figure {
        Figure::Con1 => {
            let setting = SettingSpec::new(RegionKind::UnitTorus, false, false)?;
            for r in [0.2, 0.3] {
                let scheme = SchemeParams::new(2000, 20, 5000, 2)?;
                let geo = GeoParams::disk(RegionKind::UnitTorus, r)?;
                let c = config(Measure::Connectivity, setting, scheme, geo, reliable, sweep(SweepVar::RingSize), opts);
                curves.push(Curve { labels: vec![("r", r)], config: c });
            }
        }
        Figure::Con2 => {
            let setting = SettingSpec::new(RegionKind::UnitTorus, true, false)?;
            for n in [1000usize, 900, 800] {
                let scheme = SchemeParams::new(n, 20, 5000, 2)?;
                let geo = GeoParams::disk(RegionKind::UnitTorus, 0.3)?;
                let chan = ChannelParams::new(0.9)?;
                let c = with_capture(
                    config(Measure::Connectivity, setting, scheme, geo, chan, sweep(SweepVar::RingSize), opts),
                    10,
                );
                curves.push(Curve { labels: vec![("n", n as f64)], config: c });
            }
        }
        Figure::Mobility => {
            let setting = SettingSpec::new(RegionKind::UnitSquare, false, true)?;
            for k in [44usize, 50, 60] {
                let scheme = SchemeParams::new(1000, k, 6000, 2)?;
                let geo = GeoParams::disk(RegionKind::UnitSquare, 0.25)?;
                let c = config(Measure::Mobility, setting, scheme, geo, reliable, sweep(SweepVar::Slots), opts);
                curves.push(Curve { labels: vec![("K", k as f64)], config: c });
            }
        }
        Figure::Res => {
            for m in [15usize, 40] {
                for &q in &values {
                    let q = whole(q, "q")?;
                    let p = solve_pool_size(RES_RING, q, RES_KEY_SETUP)?;
                    let scheme = SchemeParams::new(RES_NODES, RES_RING, p, q)?;
                    let one = Sweep { variable: SweepVar::Overlap, values: vec![q as f64] };
                    let c = with_capture(
                        config(Measure::Resilience, full, scheme, GeoParams::full_visibility(), reliable, one, opts),
                        m,
                    );
                    curves.push(Curve { labels: vec![("m", m as f64), ("P", p as f64)], config: c });
                }
            }
        }
        Figure::Res2 => {
            targets = vec![0.03, 0.1];
            for q in 1..=5usize {
                let p = solve_pool_size(RES_RING, q, RES_KEY_SETUP)?;
                let scheme = SchemeParams::new(RES_NODES, RES_RING, p, q)?;
                let c = config(
                    Measure::Resilience,
                    full,
                    scheme,
                    GeoParams::full_visibility(),
                    reliable,
                    sweep(SweepVar::Captured),
                    opts,
                );
                curves.push(Curve { labels: vec![("q", q as f64), ("P", p as f64)], config: c });
            }
        }
        Figure::Res3 => {
            for q in [2usize, 3] {
                let scheme = SchemeParams::new(RES_NODES, 50, 10_000, q)?;
                let c = config(
                    Measure::Resilience,
                    full,
                    scheme,
                    GeoParams::full_visibility(),
                    reliable,
                    sweep(SweepVar::Captured),
                    opts,
                );
                curves.push(Curve { labels: vec![("q", q as f64)], config: c });
            }
        }
    }
    for curve in &curves {
        curve.config.validate()?;
    }
    Ok(FigurePreset { figure, curves, targets })
}

fn whole(v: f64, what: &str) -> Result<usize> {
    if v < 1.0 || v.fract() != 0.0 {
        return config_err(format!("{what} must be a positive integer, got {v}"));
    }
    Ok(v as usize)
}

pub fn run_figure<R: TrialRunner>(preset: &FigurePreset, runner: &R) -> Result<Table> {
    let figure = preset.figure;
    let header = figure.header();
    let mut table = Table::new(header);
    if figure == Figure::Res2 {
        required_capture_rows(preset, runner, &mut table)?;
        return Ok(table);
    }
    for curve in &preset.curves {
        let records = run_sweep(&curve.config, runner)?;
        for rec in records {
            let mut named: BTreeMap<&str, Cell> = curve.labels.iter().map(|&(k, v)| (k, Cell::Float(v))).collect();
            named.insert(curve.config.sweep.variable.name(), Cell::Float(rec.value));
            named.insert("estimate", rec.estimate.into());
            named.insert("ci_low", rec.ci_low.into());
            named.insert("ci_high", rec.ci_high.into());
            named.insert("trials", rec.trials.into());
            for (k, v) in &rec.aux {
                named.insert(k, (*v).into());
            }
            let row = header.iter().map(|h| named.remove(h).expect("every header column is produced")).collect();
            table.push(row);
        }
    }
    Ok(table)
}

/// Smallest `m` in the swept range whose pooled compromise rate reaches each
/// target. Every trial captures along one random order, so all `m` share trials.
fn required_capture_rows<R: TrialRunner>(preset: &FigurePreset, runner: &R, table: &mut Table) -> Result<()> {
    let mut per_curve = Vec::new();
    for (ci, curve) in preset.curves.iter().enumerate() {
        let c = &curve.config;
        let values: Vec<usize> = c.sweep.values.iter().map(|&v| whole(v, "m")).collect::<Result<_>>()?;
        let max_m = values.iter().copied().max().unwrap_or(0);
        if max_m >= c.scheme.n() {
            return config_err(format!("m = {max_m} leaves no network of n = {}", c.scheme.n()));
        }
        let plan = TrialPlan::new(c.master_seed, c.trials).starting_at(ci as u64 * c.trials);
        let model = NetworkModel::new(c.setting, c.scheme, c.geo, c.chan)?;
        let profiles = runner.run(plan.streams(), |s| {
            let stream = RngStream::new(plan.master_seed, s);
            let assignment = assign_keys(model.scheme(), &stream);
            let order = capture_order(model.scheme().n(), max_m, &stream)?;
            resilience_profile_full_visibility(&assignment, &order, model.scheme().overlap())
        });
        let mut pooled = vec![Proportion::default(); max_m + 1];
        for profile in profiles {
            for (m, r) in profile?.into_iter().enumerate() {
                pooled[m].successes += r.compromised_links as u64;
                pooled[m].trials += r.secure_links as u64;
            }
        }
        per_curve.push((values, pooled));
    }
    for &target in &preset.targets {
        for (curve, (values, pooled)) in preset.curves.iter().zip(&per_curve) {
            let hit = values.iter().copied().find(|&m| pooled[m].trials > 0 && pooled[m].estimate() >= target);
            let mut row: Vec<Cell> = vec![target.into()];
            row.extend(curve.labels.iter().map(|&(_, v)| Cell::Float(v)));
            match hit {
                Some(m) => row.extend([Cell::from(m), Cell::from(pooled[m].estimate())]),
                None => row.extend([Cell::Missing, Cell::Missing]),
            }
            row.push(curve.config.trials.into());
            table.push(row);
        }
    }
    Ok(())
}
