//! Experiment configuration: `key=value` pairs from an optional file, overridden by flags.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use keymesh_core::analysis::SettingSpec;
use keymesh_core::attack::CaptureStrategy;
use keymesh_core::{ChannelParams, GeoParams, RegionKind, SchemeParams};

use crate::error::{config_err, HarnessError, Result};

pub const DEFAULT_TRIALS: u64 = 500;

/// Raw settings, keyed by name. Later insertions win.
pub type Settings = BTreeMap<String, String>;

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_settings(text: &str) -> Result<Settings> {
    let mut out = Settings::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return config_err(format!("line {}: expected key=value, got {line:?}", no + 1));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return config_err(format!("line {}: empty key", no + 1));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// Inclusive `lo:hi:step`.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return config_err(format!("range must be lo:hi:step, got {text:?}"));
    };
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if step <= 0.0 || hi < lo {
        return config_err(format!("range {text:?} is empty or has a non-positive step"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

/// Comma-separated numbers.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(|v| num(v.trim())).collect()
}

fn num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| HarnessError::Config(format!("not a number: {s:?}")))
}

fn count(v: f64, what: &str) -> Result<usize> {
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return config_err(format!("{what} must be a non-negative integer, got {v}"));
    }
    Ok(v as usize)
}

fn flag(s: &str) -> Result<bool> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => config_err(format!("not a boolean: {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Connectivity,
    Resilience,
    Mobility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    RingSize,
    PoolSize,
    Overlap,
    Captured,
    Radius,
    LinkActivity,
    Slots,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::RingSize => "K",
            SweepVar::PoolSize => "P",
            SweepVar::Overlap => "q",
            SweepVar::Captured => "m",
            SweepVar::Radius => "r",
            SweepVar::LinkActivity => "t",
            SweepVar::Slots => "T",
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "K" => SweepVar::RingSize,
            "P" => SweepVar::PoolSize,
            "q" => SweepVar::Overlap,
            "m" => SweepVar::Captured,
            "r" => SweepVar::Radius,
            "t" => SweepVar::LinkActivity,
            "T" => SweepVar::Slots,
            _ => return config_err(format!("unknown sweep variable {s:?} (expected K, P, q, m, r, t or T)")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVar,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub measure: Measure,
    pub setting: SettingSpec,
    pub scheme: SchemeParams,
    pub geo: GeoParams,
    pub chan: ChannelParams,
    pub capture: Option<CaptureStrategy>,
    /// Consecutive slots required under mobility.
    pub slots: usize,
    pub sweep: Sweep,
    pub trials: u64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// Builds a configuration from settings. Required keys: `n`, `K`, `P`, and
    /// `r` unless `region=full`. Without `sweep`, the run is a single row swept
    /// over `K`.
    pub fn from_settings(measure: Measure, s: &Settings) -> Result<Self> {
        for key in s.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return config_err(format!("unknown key {key:?}"));
            }
        }
        let get = |k: &str| s.get(k).map(String::as_str);
        let need = |k: &str| get(k).ok_or_else(|| HarnessError::Config(format!("missing required key {k:?}")));

        let region: RegionKind = get("region")
            .unwrap_or("torus")
            .parse()
            .map_err(|_| HarnessError::Config(format!("unknown region {:?}", get("region").unwrap_or(""))))?;
        let unreliable = get("unreliable").map(flag).transpose()?.unwrap_or(false);
        let mobile = get("mobile").map(flag).transpose()?.unwrap_or(measure == Measure::Mobility);
        let setting = SettingSpec::new(region, unreliable, mobile)?;

        let n = count(num(need("n")?)?, "n")?;
        let k = count(num(need("K")?)?, "K")?;
        let p = count(num(need("P")?)?, "P")?;
        let q = get("q").map(|v| num(v).and_then(|v| count(v, "q"))).transpose()?.unwrap_or(1);
        let scheme = SchemeParams::new(n, k, p, q)?;

        let geo = if region.is_disk() {
            GeoParams::disk(region, num(need("r")?)?)?
        } else {
            if s.contains_key("r") {
                return config_err("a radius makes no sense under full visibility");
            }
            GeoParams::full_visibility()
        };
        let chan = match get("t") {
            Some(t) => {
                if !unreliable {
                    return config_err("t needs unreliable=true");
                }
                ChannelParams::new(num(t)?)?
            }
            None => ChannelParams::reliable(),
        };
        let capture =
            get("m").map(|m| num(m).and_then(|m| count(m, "m"))).transpose()?.map(|m| CaptureStrategy::Random { m });
        let slots = get("T").map(|v| num(v).and_then(|v| count(v, "T"))).transpose()?.unwrap_or(1);
        let trials = get("trials")
            .map(|v| num(v).and_then(|v| count(v, "trials")))
            .transpose()?
            .map_or(DEFAULT_TRIALS, |v| v as u64);
        let master_seed = get("seed")
            .map(|v| v.parse::<u64>().map_err(|_| HarnessError::Config(format!("seed must be a u64, got {v:?}"))))
            .transpose()?
            .unwrap_or(0);

        let variable: SweepVar = get("sweep").unwrap_or("K").parse()?;
        let values = match (get("values"), get("range")) {
            (Some(_), Some(_)) => return config_err("give either values or range, not both"),
            (Some(v), None) => parse_values(v)?,
            (None, Some(r)) => parse_range(r)?,
            (None, None) if get("sweep").is_none() => vec![k as f64],
            (None, None) => return config_err("a sweep needs values or range"),
        };

        let config = Self {
            measure,
            setting,
            scheme,
            geo,
            chan,
            capture,
            slots,
            sweep: Sweep { variable, values },
            trials,
            master_seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return config_err("trials must be at least 1");
        }
        if self.sweep.values.is_empty() {
            return config_err("sweep has no values");
        }
        let var = self.sweep.variable;
        match var {
            SweepVar::LinkActivity if !self.setting.unreliable() => {
                return config_err("sweeping t needs unreliable links")
            }
            SweepVar::Radius if !self.setting.visibility().is_disk() => {
                return config_err("sweeping r needs a disk model")
            }
            SweepVar::Slots if self.measure != Measure::Mobility => {
                return config_err("sweeping T only applies to mobility")
            }
            _ => {}
        }
        if self.measure == Measure::Resilience && self.capture.is_none() && var != SweepVar::Captured {
            return config_err("resilience needs a capture size m");
        }
        for &v in &self.sweep.values {
            self.at(v)?;
        }
        Ok(())
    }

    /// This configuration with the swept variable set to `value`.
    pub fn at(&self, value: f64) -> Result<Self> {
        let mut c = self.clone();
        match self.sweep.variable {
            SweepVar::RingSize => c.scheme = c.scheme.with_ring_size(count(value, "K")?)?,
            SweepVar::PoolSize => c.scheme = c.scheme.with_pool_size(count(value, "P")?)?,
            SweepVar::Overlap => c.scheme = c.scheme.with_overlap(count(value, "q")?)?,
            SweepVar::Captured => c.capture = Some(CaptureStrategy::Random { m: count(value, "m")? }),
            SweepVar::Radius => c.geo = GeoParams::disk(c.geo.region(), value)?,
            SweepVar::LinkActivity => c.chan = ChannelParams::new(value)?,
            SweepVar::Slots => c.slots = count(value, "T")?,
        }
        if let Some(CaptureStrategy::Random { m }) = c.capture {
            if m >= c.scheme.n() {
                return config_err(format!("capturing m = {m} of n = {} leaves no network", c.scheme.n()));
            }
        }
        if c.measure == Measure::Mobility && c.slots == 0 {
            return config_err("T must be at least 1");
        }
        Ok(c)
    }

    pub fn captured_count(&self) -> usize {
        match &self.capture {
            Some(CaptureStrategy::Random { m }) => *m,
            _ => 0,
        }
    }
}

/// Every key the configuration format accepts.
pub const KNOWN_KEYS: &[&str] = &[
    "region",
    "unreliable",
    "mobile",
    "n",
    "K",
    "P",
    "q",
    "r",
    "t",
    "m",
    "T",
    "sweep",
    "values",
    "range",
    "trials",
    "seed",
];

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Settings {
        parse_settings("n = 200\nK=10 # ring\nP=500\nr=0.2\n\n# comment only\n").unwrap()
    }

    #[test]
    fn parses_file_format() {
        let s = base();
        assert_eq!(s["K"], "10");
        assert_eq!(s.len(), 4);
        assert!(parse_settings("novalue\n").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("20:26:2").unwrap(), vec![20.0, 22.0, 24.0, 26.0]);
        assert_eq!(parse_range("0.1:0.3:0.1").unwrap().len(), 3);
        assert!(parse_range("3:1:1").is_err());
        assert!(parse_range("1:2").is_err());
    }

    #[test]
    fn defaults_to_single_k_row() {
        let c = ExperimentConfig::from_settings(Measure::Connectivity, &base()).unwrap();
        assert_eq!(c.sweep.variable, SweepVar::RingSize);
        assert_eq!(c.sweep.values, vec![10.0]);
        assert_eq!(c.trials, DEFAULT_TRIALS);
    }

    #[test]
    fn rejects_inconsistent_sweeps() {
        let mut s = base();
        s.insert("sweep".into(), "t".into());
        s.insert("values".into(), "0.5".into());
        assert!(ExperimentConfig::from_settings(Measure::Connectivity, &s).is_err());
        s.insert("unreliable".into(), "true".into());
        assert!(ExperimentConfig::from_settings(Measure::Connectivity, &s).is_ok());
        s.insert("values".into(), "0.5,1.5".into());
        assert!(ExperimentConfig::from_settings(Measure::Connectivity, &s).is_err());

        let mut s = base();
        s.insert("sweep".into(), "K".into());
        s.insert("values".into(), "5,600".into());
        assert!(ExperimentConfig::from_settings(Measure::Connectivity, &s).is_err());
        let mut s = base();
        s.insert("bogus".into(), "1".into());
        assert!(ExperimentConfig::from_settings(Measure::Connectivity, &s).is_err());
    }

    #[test]
    fn resilience_needs_capture() {
        assert!(ExperimentConfig::from_settings(Measure::Resilience, &base()).is_err());
        let mut s = base();
        s.insert("m".into(), "5".into());
        assert!(ExperimentConfig::from_settings(Measure::Resilience, &s).is_ok());
    }
}
