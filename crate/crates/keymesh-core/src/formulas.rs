//! Exact and asymptotic edge probabilities.
//!
//! Binomial ratios are evaluated in log space. `ln C(n, k)` is a sum of
//! `ln((n-k+i)/i)` terms when `min(k, n-k)` is small (every consumer here has
//! `k ≤ K`), which keeps the relative error near `K` ulps; larger arguments
//! fall back to log-gamma.

use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::params::{GeoParams, RegionKind, SchemeParams};

/// Above this many terms `ln_choose` switches to log-gamma.
const DIRECT_SUM_LIMIT: u64 = 1024;

/// Largest `C(P, K)` that [`rho_brute_force`] agrees to enumerate.
pub const ENUMERATION_LIMIT: u128 = 100_000;

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k <= DIRECT_SUM_LIMIT {
        let base = (n - k) as f64;
        (1..=k).map(|i| libm::log((base + i as f64) / i as f64)).sum()
    } else {
        libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
    }
}

/// Exact `C(n, k)` if it does not exceed `limit`, else `None`.
pub fn choose_bounded(n: u64, k: u64, limit: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > limit {
            return None;
        }
    }
    Some(acc)
}

pub(crate) fn rho(ring: usize, pool: usize, u: usize) -> f64 {
    let (k, p, u) = (ring as u64, pool as u64, u as u64);
    if u > k || k - u > p - k {
        return 0.0;
    }
    libm::exp(ln_choose(k, u) + ln_choose(p - k, k - u) - ln_choose(p, k))
}

pub(crate) fn key_setup(ring: usize, pool: usize, q: usize) -> f64 {
    (q..=ring).map(|u| rho(ring, pool, u)).sum::<f64>().min(1.0)
}

/// Probability that two rings share exactly `u` keys:
/// `C(K,u)·C(P−K, K−u) / C(P,K)`.
pub fn rho_u(params: &SchemeParams, u: usize) -> Result<f64> {
    if u > params.ring_size() {
        bail!(OutOfRange, "overlap u = {u} exceeds ring size {}", params.ring_size());
    }
    Ok(rho(params.ring_size(), params.pool_size(), u))
}

/// `ρ_0, …, ρ_K`.
pub fn rho_distribution(params: &SchemeParams) -> Vec<f64> {
    (0..=params.ring_size()).map(|u| rho(params.ring_size(), params.pool_size(), u)).collect()
}

/// Key-setup probability `p_q = Σ_{u ≥ q} ρ_u`.
pub fn p_q_exact(params: &SchemeParams) -> f64 {
    key_setup(params.ring_size(), params.pool_size(), params.overlap())
}

/// `(1/q!)·K^{2q}/P^q` without clamping; the edge-probability proxy used by
/// the connectivity conditions.
pub fn key_setup_proxy(params: &SchemeParams) -> f64 {
    let x = params.ring_size() as f64 * params.ring_size() as f64 / params.pool_size() as f64;
    (1..=params.overlap()).fold(1.0, |acc, i| acc * x / i as f64)
}

/// Asymptotic key-setup probability `(1/q!)·K^{2q}/P^q`, clamped to `[0, 1]`.
pub fn p_q_asymptotic(params: &SchemeParams) -> f64 {
    key_setup_proxy(params).clamp(0.0, 1.0)
}

/// Probability that two uniform nodes fall within the transmission radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeProbability {
    Exact(f64),
    /// Square: `(1−2r)²·πr² ≤ μ ≤ πr²`, with `πr²` as the asymptotic value.
    Bounds {
        lower: f64,
        upper: f64,
        asymptotic: f64,
    },
}

impl EdgeProbability {
    /// The exact value, or the asymptotic one for the square.
    pub fn point(&self) -> f64 {
        match *self {
            EdgeProbability::Exact(v) => v,
            EdgeProbability::Bounds { asymptotic, .. } => asymptotic,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        match *self {
            EdgeProbability::Exact(v) => v == value,
            EdgeProbability::Bounds { lower, upper, .. } => (lower..=upper).contains(&value),
        }
    }
}

/// Geometric edge probability on the torus or square.
pub fn mu_region(geo: &GeoParams) -> Result<EdgeProbability> {
    let r = match geo.radius() {
        None => return Ok(EdgeProbability::Exact(1.0)),
        Some(r) => r,
    };
    if r > 0.5 {
        bail!(FormulaDomain, "edge-probability formulas require r <= 1/2, got {r}");
    }
    let disk = core::f64::consts::PI * r * r;
    Ok(match geo.region() {
        RegionKind::UnitTorus => EdgeProbability::Exact(disk),
        _ => EdgeProbability::Bounds { lower: (1.0 - 2.0 * r) * (1.0 - 2.0 * r) * disk, upper: disk, asymptotic: disk },
    })
}

/// Largest pool size `P ≥ K` whose key-setup probability is still at least
/// `target`; `p_q` is non-increasing in `P`, so this is a bisection.
///
/// The comparison allows a relative slack of `1e-12` so that targets equal to
/// an exact rational value of `p_q` are hit despite rounding. A target of 1 is
/// answered exactly: overlap `q` is certain iff `P <= 2K - q`.
pub fn solve_pool_size(ring_size: usize, overlap: usize, target: f64) -> Result<usize> {
    if overlap == 0 || overlap > ring_size {
        bail!(InvalidParameter, "need 1 <= q <= K, got q = {overlap}, K = {ring_size}");
    }
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::Unattainable { target, ring_size, overlap });
    }
    if target == 1.0 {
        return Ok(2 * ring_size - overlap);
    }
    let meets = |pool: usize| key_setup(ring_size, pool, overlap) >= target * (1.0 - 1e-12);
    if !meets(ring_size) {
        return Err(Error::Unattainable { target, ring_size, overlap });
    }
    let ceiling = u32::MAX as usize;
    let mut lo = ring_size;
    let mut hi = ring_size.max(1) * 2;
    while meets(hi) {
        lo = hi;
        if hi == ceiling {
            return Ok(hi);
        }
        hi = (hi * 2).min(ceiling);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Exact overlap histogram by enumeration: entry `u` counts the `K`-subsets of
/// `[0, P)` meeting the fixed ring `{0, …, K−1}` in exactly `u` keys. Returns
/// the histogram and `C(P, K)`.
pub fn overlap_histogram(ring_size: usize, pool_size: usize) -> Result<(Vec<u64>, u64)> {
    let (k, p) = (ring_size, pool_size);
    if k > p {
        bail!(InvalidParameter, "ring size exceeds pool size");
    }
    let total = choose_bounded(p as u64, k as u64, ENUMERATION_LIMIT).ok_or(Error::EnumerationTooLarge {
        count: choose_bounded(p as u64, k as u64, u128::MAX).unwrap_or(u128::MAX),
        limit: ENUMERATION_LIMIT,
    })?;
    let mut hist = alloc::vec![0u64; k + 1];
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        let overlap = comb.iter().filter(|&&x| x < k).count();
        hist[overlap] += 1;
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                debug_assert_eq!(hist.iter().sum::<u64>() as u128, total);
                return Ok((hist, total as u64));
            }
            i -= 1;
            if comb[i] < p - k + i {
                break;
            }
        }
        comb[i] += 1;
        for j in i + 1..k {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// `ρ_u` by exhaustive enumeration (independent of the closed form).
pub fn rho_brute_force(params: &SchemeParams, u: usize) -> Result<f64> {
    if u > params.ring_size() {
        bail!(OutOfRange, "overlap u = {u} exceeds ring size {}", params.ring_size());
    }
    let (hist, total) = overlap_histogram(params.ring_size(), params.pool_size())?;
    Ok(hist[u] as f64 / total as f64)
}
