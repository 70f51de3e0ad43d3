use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::formulas::{ln_choose, rho};
use crate::params::SchemeParams;

/// Advisory cut-off for [`unassailability_margin`].
pub const DEFAULT_MARGIN: f64 = 1.0;

/// Probability that a secure link between non-captured nodes is compromised,
/// given that the captured rings expose `tau` distinct keys:
/// `Σ_{u≥q} [C(τ,u)/C(P,u)] ρ_u / p_q`.
pub fn analytic_p_compromised_tau(scheme: &SchemeParams, tau: usize) -> Result<f64> {
    let (k, p, q) = (scheme.ring_size(), scheme.pool_size(), scheme.overlap());
    if tau > p {
        bail!(FormulaDomain, "tau = {tau} exceeds the pool size {p}");
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for u in q..=k {
        let r = rho(k, p, u);
        den += r;
        if u <= tau {
            let ratio = libm::exp(ln_choose(tau as u64, u as u64) - ln_choose(p as u64, u as u64));
            num += ratio.min(1.0) * r;
        }
    }
    if den <= 0.0 {
        bail!(FormulaDomain, "p_q underflows to zero for K = {k}, P = {p}, q = {q}");
    }
    Ok((num / den).clamp(0.0, 1.0))
}

/// `(mK/(P-K))^q`, unclamped.
pub fn p_comp_upper_bound(scheme: &SchemeParams, m: usize) -> Result<f64> {
    let (k, p) = (scheme.ring_size(), scheme.pool_size());
    if p <= k {
        bail!(FormulaDomain, "bound needs P > K, got P = {p}, K = {k}");
    }
    let base = (m * k) as f64 / (p - k) as f64;
    Ok(libm::pow(base, scheme.overlap() as f64))
}

/// `(mK/P)^q`.
pub fn p_comp_asymptotic_random(scheme: &SchemeParams, m: usize) -> f64 {
    let base = (m * scheme.ring_size()) as f64 / scheme.pool_size() as f64;
    libm::pow(base, scheme.overlap() as f64)
}

/// `q! (m/K)^q`.
pub fn f_of_q(q: usize, m: usize, ring_size: usize) -> f64 {
    let step = m as f64 / ring_size as f64;
    (1..=q).fold(1.0, |acc, i| acc * i as f64 * step)
}

/// Overlaps minimizing [`f_of_q`] for fixed `m` and `K`, ascending.
///
/// `f(q+1)/f(q) = m(q+1)/K`, so `f` falls while `q + 1 < K/m` and ties when
/// `q + 1 = K/m`.
pub fn optimal_q(m: usize, ring_size: usize) -> Vec<usize> {
    assert!(m >= 1 && ring_size >= 1, "optimal_q needs m >= 1 and K >= 1");
    let (k, m) = (ring_size, m);
    if k < 2 * m {
        vec![1]
    } else if k % m == 0 {
        vec![k / m - 1, k / m]
    } else {
        vec![k / m]
    }
}

/// `(P/K)/n`; values at or above [`DEFAULT_MARGIN`] suggest the pool is large enough.
pub fn unassailability_margin(n: usize, ring_size: usize, pool_size: usize) -> f64 {
    pool_size as f64 / ring_size as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(k: usize, p: usize, q: usize) -> SchemeParams {
        SchemeParams::new(100, k, p, q).unwrap()
    }

    #[test]
    fn tau_examples() {
        assert!((analytic_p_compromised_tau(&s(2, 4, 1), 2).unwrap() - 13.0 / 30.0).abs() < 1e-12);
        assert_eq!(analytic_p_compromised_tau(&s(40, 5000, 2), 5000).unwrap(), 1.0);
        assert_eq!(analytic_p_compromised_tau(&s(40, 5000, 3), 2).unwrap(), 0.0);
        assert!(analytic_p_compromised_tau(&s(2, 4, 1), 5).is_err());
    }

    #[test]
    fn tau_monotone_and_bounded() {
        for (k, p, q) in [(5, 30, 1), (5, 30, 3), (12, 100, 2), (50, 10_000, 2)] {
            let sc = s(k, p, q);
            let mut prev = 0.0;
            for tau in 0..=p {
                let v = analytic_p_compromised_tau(&sc, tau).unwrap();
                assert!(v + 1e-15 >= prev);
                let bound = libm::pow(tau as f64 / (p - k) as f64, q as f64);
                assert!(v <= bound * (1.0 + 1e-9), "{k} {p} {q} {tau}");
                prev = v;
            }
        }
    }

    #[test]
    fn bound_examples() {
        let sc = s(50, 10_000, 2);
        assert_eq!(p_comp_upper_bound(&sc, 0).unwrap(), 0.0);
        assert!((p_comp_upper_bound(&sc, 10).unwrap() - (500.0f64 / 9950.0).powi(2)).abs() < 1e-15);
        assert!((p_comp_asymptotic_random(&sc, 10) - 0.0025).abs() < 1e-15);
        assert_eq!(p_comp_asymptotic_random(&sc, 0), 0.0);
        assert!(p_comp_upper_bound(&s(5, 5, 1), 1).is_err());
    }

    #[test]
    fn f_examples() {
        assert!((f_of_q(1, 15, 40) - 0.375).abs() < 1e-15);
        assert!((f_of_q(2, 15, 40) - 0.28125).abs() < 1e-15);
        assert!((f_of_q(3, 15, 40) - 0.31640625).abs() < 1e-15);
        for q in 1..10 {
            let ratio = f_of_q(q + 1, 7, 33) / f_of_q(q, 7, 33);
            assert!((ratio - 7.0 * (q + 1) as f64 / 33.0).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_examples() {
        assert_eq!(optimal_q(15, 40), vec![2]);
        assert_eq!(optimal_q(20, 40), vec![1, 2]);
        assert_eq!(optimal_q(10, 40), vec![3, 4]);
        assert_eq!(optimal_q(40, 40), vec![1]);
    }

    #[test]
    fn margin_examples() {
        assert!((unassailability_margin(1000, 50, 10_000) - 0.2).abs() < 1e-15);
        assert!((unassailability_margin(1000, 10, 1_000_000) - 100.0).abs() < 1e-12);
        assert_eq!(unassailability_margin(7, 3, 21), 1.0);
    }
}
