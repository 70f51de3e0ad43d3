use crate::error::{bail, Result};
use crate::formulas::key_setup_proxy;
use crate::params::{ChannelParams, GeoParams, RegionKind, SchemeParams};

use super::network::SettingSpec;

fn log_n(n: f64) -> Result<f64> {
    if n.is_nan() || n < 2.0 {
        bail!(FormulaDomain, "threshold needs n >= 2, got {n}");
    }
    Ok(libm::log(n))
}

fn threshold_from(excess: f64, ln_n: f64) -> f64 {
    (1.0 + excess / ln_n).max(4.0 * excess / ln_n)
}

/// `max{1 + ln(P/K²)/ln n, 4 ln(P/K²)/ln n}`.
pub fn c_star(n: usize, ring_size: usize, pool_size: usize) -> Result<f64> {
    c_star_at(n as f64, ring_size, pool_size)
}

fn c_star_at(n: f64, ring_size: usize, pool_size: usize) -> Result<f64> {
    let ln_n = log_n(n)?;
    let k = ring_size as f64;
    Ok(threshold_from(libm::log(pool_size as f64 / (k * k)), ln_n))
}

/// Square-region threshold under unreliable links:
/// `max{1 + (q ln(P/K²) + ln(1/t))/ln n, 4 (q ln(P/K²) + ln(1/t))/ln n}`.
pub fn c_pound(n: usize, ring_size: usize, pool_size: usize, t: f64, q: usize) -> Result<f64> {
    c_pound_at(n as f64, ring_size, pool_size, t, q)
}

fn c_pound_at(n: f64, ring_size: usize, pool_size: usize, t: f64, q: usize) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        bail!(FormulaDomain, "link activity t must lie in (0, 1], got {t}");
    }
    let ln_n = log_n(n)?;
    let k = ring_size as f64;
    let excess = q as f64 * libm::log(pool_size as f64 / (k * k)) - libm::log(t);
    Ok(threshold_from(excess, ln_n))
}

/// Which constant the achieved `c` is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    One,
    CStar,
    CPound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AchievedC {
    /// `proxy · n / ln n`, with `n` the number of nodes left after capture.
    pub c: f64,
    pub proxy: f64,
    pub threshold: f64,
    pub kind: ThresholdKind,
    pub satisfied: bool,
}

/// Solves `proxy = c · ln n / n` for `c`, where the proxy is
/// `K^{2q}/(q! P^q)`, times `πr²` under the disk model and `t` under unreliable links.
pub fn achieved_c(
    setting: &SettingSpec,
    scheme: &SchemeParams,
    geo: &GeoParams,
    chan: &ChannelParams,
) -> Result<AchievedC> {
    achieved_c_after_capture(setting, scheme, geo, chan, 0)
}

/// As [`achieved_c`], for the `n - m` nodes that survive a random capture of `m`.
pub fn achieved_c_after_capture(
    setting: &SettingSpec,
    scheme: &SchemeParams,
    geo: &GeoParams,
    chan: &ChannelParams,
    captured: usize,
) -> Result<AchievedC> {
    if geo.region() != setting.visibility() {
        bail!(RegionMismatch, "setting is {} but geometry is {}", setting.visibility().name(), geo.region().name());
    }
    if captured >= scheme.n() {
        bail!(InvalidParameter, "capturing {captured} of {} nodes leaves nobody", scheme.n());
    }
    let n = (scheme.n() - captured) as f64;
    let ln_n = log_n(n)?;
    let mut proxy = key_setup_proxy(scheme);
    if let Some(r) = geo.radius() {
        proxy *= core::f64::consts::PI * r * r;
    }
    let t = if setting.unreliable() { chan.t() } else { 1.0 };
    proxy *= t;
    let (k, p, q) = (scheme.ring_size(), scheme.pool_size(), scheme.overlap());
    let (kind, threshold) = match (setting.visibility(), setting.unreliable()) {
        (RegionKind::UnitSquare, false) => (ThresholdKind::CStar, c_star_at(n, k, p)?),
        (RegionKind::UnitSquare, true) => (ThresholdKind::CPound, c_pound_at(n, k, p, t, q)?),
        _ => (ThresholdKind::One, 1.0),
    };
    let c = proxy * n / ln_n;
    Ok(AchievedC { c, proxy, threshold, kind, satisfied: c > threshold })
}

/// Limits for the finite-n reading of the scaling conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaThresholds {
    pub min_ring_over_ln_n: f64,
    pub max_ring_sq_over_pool: f64,
    pub max_ring_n_over_pool: f64,
    pub max_radius: f64,
}

impl Default for LambdaThresholds {
    fn default() -> Self {
        Self { min_ring_over_ln_n: 3.0, max_ring_sq_over_pool: 0.2, max_ring_n_over_pool: 0.2, max_radius: 0.3 }
    }
}

/// Advisory report; nothing here should block an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaReport {
    pub ring_over_ln_n: f64,
    pub ring_sq_over_pool: f64,
    pub ring_n_over_pool: f64,
    pub radius: Option<f64>,
    pub ring_over_ln_n_ok: bool,
    pub ring_sq_over_pool_ok: bool,
    pub ring_n_over_pool_ok: bool,
    pub radius_ok: bool,
}

impl LambdaReport {
    pub fn all_pass(&self) -> bool {
        self.ring_over_ln_n_ok && self.ring_sq_over_pool_ok && self.ring_n_over_pool_ok && self.radius_ok
    }
}

pub fn lambda_condition_check(scheme: &SchemeParams, geo: &GeoParams, limits: &LambdaThresholds) -> LambdaReport {
    let (n, k, p) = (scheme.n() as f64, scheme.ring_size() as f64, scheme.pool_size() as f64);
    let ln_n = libm::log(n);
    let ring_over_ln_n = if ln_n > 0.0 { k / ln_n } else { f64::INFINITY };
    let ring_sq_over_pool = k * k / p;
    let ring_n_over_pool = k * n / p;
    let radius = geo.radius();
    LambdaReport {
        ring_over_ln_n,
        ring_sq_over_pool,
        ring_n_over_pool,
        radius,
        ring_over_ln_n_ok: ring_over_ln_n >= limits.min_ring_over_ln_n,
        ring_sq_over_pool_ok: ring_sq_over_pool <= limits.max_ring_sq_over_pool,
        ring_n_over_pool_ok: ring_n_over_pool <= limits.max_ring_n_over_pool,
        radius_ok: radius.is_none_or(|r| r <= limits.max_radius),
    }
}

/// Asymptotic mean number of isolated nodes, `n e^{-π r² p n}`, on the torus.
pub fn expected_isolated_torus(n: usize, p: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        bail!(FormulaDomain, "edge probability {p} outside [0, 1]");
    }
    if !(r > 0.0 && r <= 0.5) {
        bail!(FormulaDomain, "radius {r} outside (0, 1/2]");
    }
    let n = n as f64;
    Ok(n * libm::exp(-core::f64::consts::PI * r * r * p * n))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E10: usize = 22026;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Ring and pool with `P/K² = e^x` up to integer rounding.
    fn pool_for(k: usize, x: f64) -> usize {
        (libm::exp(x) * (k * k) as f64).round() as usize
    }

    #[test]
    fn c_star_examples() {
        let k = 1000;
        assert!(close(c_star(E10, k, pool_for(k, 2.0)).unwrap(), 1.2, 1e-5));
        assert!(close(c_star(E10, k, pool_for(k, 5.0)).unwrap(), 2.0, 1e-5));
        assert_eq!(c_star(500, 30, 900).unwrap(), 1.0);
        assert!(c_star(1, 3, 9).is_err());
    }

    #[test]
    fn c_pound_examples() {
        let k = 1000;
        let inv_e = libm::exp(-1.0);
        assert!(close(c_pound(E10, k, pool_for(k, 2.0), inv_e, 2).unwrap(), 2.0, 1e-5));
        for q in 1..5 {
            assert!(close(c_pound(E10, 30, 900, inv_e, q).unwrap(), 1.1, 1e-5));
        }
        assert!(c_pound(E10, 30, 900, 0.0, 1).is_err());
        for (n, k, p) in [(100, 5, 70), (5000, 40, 50_000), (2, 1, 1)] {
            assert_eq!(c_pound(n, k, p, 1.0, 1).unwrap(), c_star(n, k, p).unwrap());
        }
    }

    #[test]
    fn achieved_c_examples() {
        let n = 1000usize;
        let ln_n = libm::log(n as f64);
        let scheme = SchemeParams::new(n, 10, 500, 1).unwrap();
        let target = key_setup_proxy(&scheme);
        let full = SettingSpec::new(RegionKind::FullVisibility, false, false).unwrap();
        let got = achieved_c(&full, &scheme, &GeoParams::full_visibility(), &ChannelParams::reliable()).unwrap();
        assert!(close(got.c, target * n as f64 / ln_n, 1e-12));
        assert_eq!(got.kind, ThresholdKind::One);
        assert_eq!(got.satisfied, got.c > 1.0);

        let torus = SettingSpec::new(RegionKind::UnitTorus, false, false).unwrap();
        let geo = GeoParams::disk(RegionKind::UnitTorus, 0.1).unwrap();
        let got = achieved_c(&torus, &scheme, &geo, &ChannelParams::reliable()).unwrap();
        let expect = target * core::f64::consts::PI * 0.01 * n as f64 / ln_n;
        assert!(close(got.c, expect, 1e-12));

        assert!(achieved_c(&torus, &scheme, &GeoParams::full_visibility(), &ChannelParams::reliable()).is_err());
    }

    #[test]
    fn achieved_c_square_against_c_star() {
        // P/K² = e², proxy chosen so that c = 1.3.
        let k = 1000;
        let p = pool_for(k, 2.0);
        let scheme = SchemeParams::new(E10, k, p, 1).unwrap();
        let ln_n = libm::log(E10 as f64);
        let pi_r2 = 1.3 * ln_n / E10 as f64 / key_setup_proxy(&scheme);
        let r = libm::sqrt(pi_r2 / core::f64::consts::PI);
        let square = SettingSpec::new(RegionKind::UnitSquare, false, false).unwrap();
        let geo = GeoParams::disk(RegionKind::UnitSquare, r).unwrap();
        let got = achieved_c(&square, &scheme, &geo, &ChannelParams::reliable()).unwrap();
        assert!(close(got.c, 1.3, 1e-9));
        assert_eq!(got.kind, ThresholdKind::CStar);
        assert!(close(got.threshold, 1.2, 1e-5));
        assert!(got.satisfied);
    }

    #[test]
    fn achieved_c_linear_in_t() {
        let scheme = SchemeParams::new(2000, 40, 5000, 2).unwrap();
        let setting = SettingSpec::new(RegionKind::UnitTorus, true, false).unwrap();
        let geo = GeoParams::disk(RegionKind::UnitTorus, 0.2).unwrap();
        let half = achieved_c(&setting, &scheme, &geo, &ChannelParams::new(0.4).unwrap()).unwrap();
        let full = achieved_c(&setting, &scheme, &geo, &ChannelParams::new(0.8).unwrap()).unwrap();
        assert!(close(full.c, 2.0 * half.c, 1e-12 * full.c));
    }

    #[test]
    fn lambda_examples() {
        let d = LambdaThresholds::default();
        let r =
            lambda_condition_check(&SchemeParams::new(2000, 40, 5000, 1).unwrap(), &GeoParams::full_visibility(), &d);
        assert!(close(r.ring_over_ln_n, 5.2625, 1e-3) && r.ring_over_ln_n_ok);
        assert!(close(r.ring_sq_over_pool, 0.32, 1e-12) && !r.ring_sq_over_pool_ok);
        let r = lambda_condition_check(&SchemeParams::new(10, 7, 7, 1).unwrap(), &GeoParams::full_visibility(), &d);
        assert!(!r.ring_sq_over_pool_ok);
        let r = lambda_condition_check(
            &SchemeParams::new(1000, 60, 1_000_000, 1).unwrap(),
            &GeoParams::full_visibility(),
            &d,
        );
        assert!(r.all_pass());
        let geo = GeoParams::disk(RegionKind::UnitTorus, 0.35).unwrap();
        assert!(!lambda_condition_check(&SchemeParams::new(1000, 60, 1_000_000, 1).unwrap(), &geo, &d).radius_ok);
    }

    #[test]
    fn isolated_examples() {
        let n = 5000usize;
        let ln_n = libm::log(n as f64);
        let r = libm::sqrt(ln_n / (core::f64::consts::PI * n as f64));
        assert!(close(expected_isolated_torus(n, 1.0, r).unwrap(), 1.0, 1e-9));
        assert_eq!(expected_isolated_torus(n, 0.0, 0.1).unwrap(), n as f64);
        let r = libm::sqrt((ln_n + 1.0) / (core::f64::consts::PI * n as f64));
        assert!(close(expected_isolated_torus(n, 1.0, r).unwrap(), libm::exp(-1.0), 1e-9));
        assert!(expected_isolated_torus(n, 1.0, 0.6).is_err());
    }
}
