//! Parameter selection from the scaling guidelines
//! `K = c1 (ln n)^{1+ε1}`, `P = c2 n (ln n)^{1+ε2}`.

use keymesh_core::analysis::{achieved_c, SettingSpec};
use keymesh_core::attack::unassailability_margin;
use keymesh_core::formulas::key_setup_proxy;
use keymesh_core::{ChannelParams, GeoParams, RegionKind, SchemeParams};

use crate::error::{config_err, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignInputs {
    pub n: usize,
    pub q: usize,
    pub c: f64,
    pub c1: f64,
    pub eps1: f64,
    pub c2: f64,
    pub eps2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design {
    pub ring_size: usize,
    pub pool_size: usize,
    pub radius: f64,
    /// The radius hit the 1/2 cap, so `achieved_c < c`.
    pub capped: bool,
    /// Connectivity constant of the rounded triple on the torus.
    pub achieved_c: f64,
    pub margin: f64,
}

/// The radius is the smallest one for which the rounded `(K, P)` reach
/// `proxy · πr² ≥ c ln n / n`.
pub fn design_guidelines(inp: &DesignInputs) -> Result<Design> {
    let DesignInputs { n, q, c, c1, eps1, c2, eps2 } = *inp;
    if c.is_nan() || c <= 1.0 {
        return config_err(format!("c must exceed 1, got {c}"));
    }
    if !(eps1 > 0.0 && eps2 > eps1) {
        return config_err(format!("need eps2 > eps1 > 0, got eps1 = {eps1}, eps2 = {eps2}"));
    }
    if !(c1 > 0.0 && c2 > 0.0) {
        return config_err("c1 and c2 must be positive");
    }
    if n < 3 {
        return config_err("n must be at least 3");
    }
    let ln_n = (n as f64).ln();
    let ring_size = (c1 * ln_n.powf(1.0 + eps1)).ceil() as usize;
    let pool_size = (c2 * n as f64 * ln_n.powf(1.0 + eps2)).ceil() as usize;
    let scheme = SchemeParams::new(n, ring_size, pool_size, q)?;

    let target = c * ln_n / n as f64 / key_setup_proxy(&scheme);
    // Nudge up so rounding never leaves the achieved constant below `c`.
    let mut radius = (target / std::f64::consts::PI).sqrt() * (1.0 + 1e-12);
    let capped = radius > 0.5;
    if capped {
        radius = 0.5;
    }
    let setting = SettingSpec::new(RegionKind::UnitTorus, false, false)?;
    let geo = GeoParams::disk(RegionKind::UnitTorus, radius)?;
    let achieved = achieved_c(&setting, &scheme, &geo, &ChannelParams::reliable())?;
    Ok(Design {
        ring_size,
        pool_size,
        radius,
        capped,
        achieved_c: achieved.c,
        margin: unassailability_margin(n, ring_size, pool_size),
    })
}
