//! Sweep orchestration: one record per swept value.

use keymesh_core::analysis::{estimate_connectivity, NetworkModel};
use keymesh_core::attack::{estimate_resilience, CaptureStrategy};
use keymesh_core::mobility::estimate_t_slot_prob;
use keymesh_core::{TrialPlan, TrialRunner};

use crate::config::{ExperimentConfig, Measure};
use crate::csv::{Cell, Table};
use crate::error::{config_err, Result};

/// Aggregate of `trials` trials at one swept value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    /// `None` when no trial produced anything to measure.
    pub estimate: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub trials: u64,
    pub aux: Vec<(&'static str, Option<f64>)>,
}

/// Builds the sampling model for one configuration (random capture included
/// for connectivity and mobility).
pub fn network_model(c: &ExperimentConfig) -> Result<NetworkModel> {
    let model = NetworkModel::new(c.setting, c.scheme, c.geo, c.chan)?;
    let m = c.captured_count();
    Ok(if m > 0 && c.measure != Measure::Resilience { model.with_random_capture(m)? } else { model })
}

/// Stream layout: value `i`, trial `j` runs on stream `i * trials + j`.
pub fn plan_for(config: &ExperimentConfig, value_index: usize) -> TrialPlan {
    TrialPlan::new(config.master_seed, config.trials).starting_at(value_index as u64 * config.trials)
}

pub fn run_sweep<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let mut out = Vec::with_capacity(config.sweep.values.len());
    for (i, &value) in config.sweep.values.iter().enumerate() {
        let c = config.at(value)?;
        let plan = plan_for(config, i);
        let model = network_model(&c)?;
        let record = match c.measure {
            Measure::Connectivity => {
                let est = estimate_connectivity(&model, &plan, runner);
                let (lo, hi) = est.connected.wilson95();
                SweepRecord {
                    value,
                    estimate: Some(est.connected.estimate()),
                    ci_low: Some(lo),
                    ci_high: Some(hi),
                    trials: c.trials,
                    aux: vec![
                        ("isolated_mean", Some(est.isolated_mean)),
                        ("components_mean", Some(est.components_mean)),
                    ],
                }
            }
            Measure::Mobility => {
                let est = estimate_t_slot_prob(&model, c.slots, &plan, runner)?;
                let (lo, hi) = est.wilson95();
                SweepRecord {
                    value,
                    estimate: Some(est.estimate()),
                    ci_low: Some(lo),
                    ci_high: Some(hi),
                    trials: c.trials,
                    aux: Vec::new(),
                }
            }
            Measure::Resilience => {
                let Some(strategy @ CaptureStrategy::Random { .. }) = &c.capture else {
                    return config_err("resilience sweeps need a random capture size m");
                };
                let est = estimate_resilience(&model, strategy, &plan, runner)?;
                let seen = est.pooled.trials > 0;
                let (lo, hi) = est.pooled.wilson95();
                SweepRecord {
                    value,
                    estimate: seen.then(|| est.pooled.estimate()),
                    ci_low: seen.then_some(lo),
                    ci_high: seen.then_some(hi),
                    trials: c.trials,
                    aux: vec![("tau_mean", Some(est.tau_mean)), ("analytic", est.analytic)],
                }
            }
        };
        out.push(record);
    }
    Ok(out)
}

/// Header: swept variable, `estimate,ci_low,ci_high,trials`, then auxiliary columns.
pub fn sweep_table(config: &ExperimentConfig, records: &[SweepRecord]) -> Table {
    let mut header: Vec<String> = [config.sweep.variable.name(), "estimate", "ci_low", "ci_high", "trials"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(aux_names(config.measure).iter().map(|s| s.to_string()));
    let mut table = Table::new(&header);
    for r in records {
        let mut row = vec![Cell::Float(r.value), r.estimate.into(), r.ci_low.into(), r.ci_high.into(), r.trials.into()];
        row.extend(r.aux.iter().map(|(_, v)| Cell::from(*v)));
        table.push(row);
    }
    table
}

fn aux_names(measure: Measure) -> &'static [&'static str] {
    match measure {
        Measure::Connectivity => &["isolated_mean", "components_mean"],
        Measure::Resilience => &["tau_mean", "analytic"],
        Measure::Mobility => &[],
    }
}
