//! Node capture, link compromise and resilience metrics.

mod analytic;
mod estimate;
mod resilient;
mod split;

pub use analytic::{
    analytic_p_compromised_tau, f_of_q, optimal_q, p_comp_asymptotic_random, p_comp_upper_bound,
    unassailability_margin, DEFAULT_MARGIN,
};
pub use estimate::{estimate_resilience, resilience_trial, ResilienceEstimate};
pub use resilient::{core_alpha, resilient_core, ResilientCore};
pub use split::{split_attack, SplitOutcome};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::generators::{common_keys, for_each_sharing_pair};
use crate::geometry::Placement;
use crate::graph::AdjacencyGraph;
use crate::keys::{sample_distinct, KeyAssignment};
use crate::rng::{label, RngStream};

use rand::seq::SliceRandom;

/// Which nodes the adversary takes.
#[derive(Debug, Clone, PartialEq)]
pub enum CaptureStrategy {
    /// A uniform random `m`-subset.
    Random {
        m: usize,
    },
    ChosenSet {
        nodes: Vec<u32>,
    },
    /// Every node with `x_low <= x <= x_high`.
    Region {
        x_low: f64,
        x_high: f64,
    },
}

/// Captured nodes and the keys they expose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptureState {
    captured: Vec<u32>,
    captured_mask: Vec<bool>,
    key_bits: Vec<u64>,
    tau: usize,
}

impl CaptureState {
    /// Captures exactly `nodes` (any order, no repeats).
    pub fn from_nodes(assignment: &KeyAssignment, nodes: &[u32]) -> Result<Self> {
        let n = assignment.n();
        let mut captured_mask = vec![false; n];
        for &v in nodes {
            if v as usize >= n {
                bail!(OutOfRange, "node {v} does not exist among {n}");
            }
            if core::mem::replace(&mut captured_mask[v as usize], true) {
                bail!(InvalidParameter, "node {v} listed twice");
            }
        }
        let mut captured = nodes.to_vec();
        captured.sort_unstable();
        let mut key_bits = vec![0u64; assignment.pool_size().div_ceil(64)];
        for &v in &captured {
            for &k in assignment.ring(v as usize) {
                key_bits[(k / 64) as usize] |= 1 << (k % 64);
            }
        }
        let tau = key_bits.iter().map(|w| w.count_ones() as usize).sum();
        Ok(Self { captured, captured_mask, key_bits, tau })
    }

    /// Captured node ids, ascending.
    pub fn captured(&self) -> &[u32] {
        &self.captured
    }

    pub fn captured_mask(&self) -> &[bool] {
        &self.captured_mask
    }

    pub fn is_captured(&self, node: usize) -> bool {
        self.captured_mask[node]
    }

    #[inline]
    pub fn is_compromised(&self, key: u32) -> bool {
        self.key_bits[(key / 64) as usize] >> (key % 64) & 1 == 1
    }

    /// The union of the captured rings, ascending.
    pub fn compromised_keys(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.tau);
        for (w, &bits) in self.key_bits.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                out.push(w as u32 * 64 + b.trailing_zeros());
                b &= b - 1;
            }
        }
        out
    }

    /// Number of distinct compromised keys.
    pub fn tau(&self) -> usize {
        self.tau
    }
}

/// Applies a capture strategy. `Region` needs the node placement.
pub fn capture(
    strategy: &CaptureStrategy,
    assignment: &KeyAssignment,
    placement: Option<&Placement>,
    stream: &RngStream,
) -> Result<CaptureState> {
    let n = assignment.n();
    match strategy {
        CaptureStrategy::Random { m } => {
            if *m > n {
                bail!(InvalidParameter, "cannot capture {m} of {n} nodes");
            }
            let nodes = sample_distinct(&mut stream.fork(label::CAPTURE), *m, n);
            CaptureState::from_nodes(assignment, &nodes)
        }
        CaptureStrategy::ChosenSet { nodes } => CaptureState::from_nodes(assignment, nodes),
        CaptureStrategy::Region { x_low, x_high } => {
            if !(0.0 <= *x_low && x_low <= x_high && *x_high <= 1.0) {
                bail!(InvalidParameter, "capture band [{x_low}, {x_high}] is not inside [0, 1]");
            }
            let Some(placement) = placement else {
                bail!(RegionMismatch, "a region capture needs node positions");
            };
            if placement.len() != n {
                return Err(Error::NodeCountMismatch { expected: n, found: placement.len() });
            }
            let nodes = band_members(placement, *x_low, *x_high);
            CaptureState::from_nodes(assignment, &nodes)
        }
    }
}

pub(crate) fn band_members(placement: &Placement, lo: f64, hi: f64) -> Vec<u32> {
    placement.coords().iter().enumerate().filter(|(_, p)| lo <= p.x && p.x <= hi).map(|(i, _)| i as u32).collect()
}

/// A secure link is compromised iff every key the endpoints share is compromised.
pub fn link_compromised(
    i: usize,
    j: usize,
    assignment: &KeyAssignment,
    state: &CaptureState,
    q: usize,
) -> Result<bool> {
    let n = assignment.n();
    if i >= n || j >= n || i == j {
        bail!(InvalidLink, "({i}, {j}) is not a pair of distinct nodes below {n}");
    }
    if state.is_captured(i) || state.is_captured(j) {
        bail!(InvalidLink, "({i}, {j}) has a captured endpoint");
    }
    let (a, b) = (assignment.ring(i), assignment.ring(j));
    if common_keys(a, b) < q {
        bail!(InvalidLink, "nodes {i} and {j} share fewer than {q} keys");
    }
    Ok(shared_all_compromised(a, b, state))
}

fn shared_all_compromised(a: &[u32], b: &[u32], state: &CaptureState) -> bool {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            core::cmp::Ordering::Less => x += 1,
            core::cmp::Ordering::Greater => y += 1,
            core::cmp::Ordering::Equal => {
                if !state.is_compromised(a[x]) {
                    return false;
                }
                x += 1;
                y += 1;
            }
        }
    }
    true
}

/// A uniformly random sequence of `count` distinct nodes; every prefix is a
/// uniform random subset of its size.
pub fn capture_order(n: usize, count: usize, stream: &RngStream) -> Result<Vec<u32>> {
    if count > n {
        bail!(InvalidParameter, "cannot capture {count} of {n} nodes");
    }
    let mut nodes: Vec<u32> = (0..n as u32).collect();
    nodes.partial_shuffle(&mut stream.fork(label::CAPTURE), count);
    nodes.truncate(count);
    Ok(nodes)
}

/// Full-visibility resilience for every prefix of `order`: entry `m` treats the
/// first `m` nodes of `order` as captured, for `m` in `0..=order.len()`.
pub fn resilience_profile_full_visibility(
    assignment: &KeyAssignment,
    order: &[u32],
    q: usize,
) -> Result<Vec<ResilienceReport>> {
    let n = assignment.n();
    let steps = order.len();
    // Capture size from which a node is gone / a key is exposed.
    let mut gone_at = vec![usize::MAX; n];
    let mut exposed_at = vec![usize::MAX; assignment.pool_size()];
    for (idx, &v) in order.iter().enumerate() {
        if v as usize >= n || gone_at[v as usize] != usize::MAX {
            bail!(InvalidParameter, "capture order repeats or overruns node {v}");
        }
        gone_at[v as usize] = idx + 1;
        for &k in assignment.ring(v as usize) {
            let e = &mut exposed_at[k as usize];
            *e = (*e).min(idx + 1);
        }
    }
    let mut secure = vec![0i64; steps + 2];
    let mut compromised = vec![0i64; steps + 2];
    for_each_sharing_pair(
        n,
        assignment.pool_size(),
        |i| assignment.ring(i),
        q.max(1),
        |_| false,
        |i, j, _, _| {
            // Present while m < gone_at of both endpoints.
            let last = gone_at[i as usize].min(gone_at[j as usize]).min(steps + 1) - 1;
            secure[0] += 1;
            secure[last + 1] -= 1;
            let (a, b) = (assignment.ring(i as usize), assignment.ring(j as usize));
            let from = shared_exposure(a, b, &exposed_at);
            if from <= last {
                compromised[from] += 1;
                compromised[last + 1] -= 1;
            }
        },
    );
    let mut taus = vec![0i64; steps + 2];
    for &e in &exposed_at {
        if e <= steps {
            taus[e] += 1;
        }
    }
    let (mut s, mut c, mut t) = (0i64, 0i64, 0i64);
    Ok((0..=steps)
        .map(|m| {
            s += secure[m];
            c += compromised[m];
            t += taus[m];
            ResilienceReport { secure_links: s as usize, compromised_links: c as usize, tau: t as usize }
        })
        .collect())
}

/// Smallest capture size at which every shared key is exposed.
fn shared_exposure(a: &[u32], b: &[u32], exposed_at: &[usize]) -> usize {
    let (mut x, mut y, mut worst) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            core::cmp::Ordering::Less => x += 1,
            core::cmp::Ordering::Greater => y += 1,
            core::cmp::Ordering::Equal => {
                worst = worst.max(exposed_at[a[x] as usize]);
                x += 1;
                y += 1;
            }
        }
    }
    worst
}

/// Compromise counts over secure links between non-captured nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResilienceReport {
    pub secure_links: usize,
    pub compromised_links: usize,
    pub tau: usize,
}

impl ResilienceReport {
    /// `None` when no secure link survives the capture.
    pub fn p_compromised(&self) -> Option<f64> {
        (self.secure_links > 0).then(|| self.compromised_links as f64 / self.secure_links as f64)
    }
}

/// Counts compromised links among the edges of `graph` whose endpoints were
/// not captured. Every such edge must be a secure link (`≥ q` shared keys).
pub fn measure_resilience(
    graph: &AdjacencyGraph,
    assignment: &KeyAssignment,
    state: &CaptureState,
    q: usize,
) -> Result<ResilienceReport> {
    if graph.n() != assignment.n() {
        return Err(Error::NodeCountMismatch { expected: assignment.n(), found: graph.n() });
    }
    let mut report = ResilienceReport { secure_links: 0, compromised_links: 0, tau: state.tau() };
    for (i, j) in graph.edges() {
        let (i, j) = (i as usize, j as usize);
        if state.is_captured(i) || state.is_captured(j) {
            continue;
        }
        report.secure_links += 1;
        if link_compromised(i, j, assignment, state, q)? {
            report.compromised_links += 1;
        }
    }
    Ok(report)
}

/// [`measure_resilience`] on the full-visibility key graph, without
/// materializing the graph.
pub fn measure_resilience_full_visibility(
    assignment: &KeyAssignment,
    state: &CaptureState,
    q: usize,
) -> ResilienceReport {
    let mut report = ResilienceReport { secure_links: 0, compromised_links: 0, tau: state.tau() };
    for_each_sharing_pair(
        assignment.n(),
        assignment.pool_size(),
        |i| assignment.ring(i),
        q.max(1),
        |k| state.is_compromised(k),
        |i, j, shared, flagged| {
            if !state.is_captured(i as usize) && !state.is_captured(j as usize) {
                report.secure_links += 1;
                if flagged == shared {
                    report.compromised_links += 1;
                }
            }
        },
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{key_graph, key_graph_brute_force};
    use crate::keys::assign_keys;
    use crate::params::SchemeParams;

    fn rings() -> KeyAssignment {
        KeyAssignment::from_rings(10, &[[3u32, 7, 9], [3, 7, 1], [0, 2, 4], [3, 5, 6]]).unwrap()
    }

    #[test]
    fn subset_semantics() {
        let a = rings();
        let none = CaptureState::from_nodes(&a, &[]).unwrap();
        assert_eq!(none.tau(), 0);
        assert!(!link_compromised(0, 1, &a, &none, 2).unwrap());
        // Node 3 exposes key 3 only from the {3, 7} overlap.
        let partial = CaptureState::from_nodes(&a, &[3]).unwrap();
        assert!(!link_compromised(0, 1, &a, &partial, 2).unwrap());
        let both = CaptureState::from_nodes(&a, &[3, 2]).unwrap();
        assert!(!link_compromised(0, 1, &a, &both, 1).unwrap());
        let everything = KeyAssignment::from_rings(10, &[[3u32, 7, 9], [3, 7, 1], [0, 3, 7]]).unwrap();
        let st = CaptureState::from_nodes(&everything, &[2]).unwrap();
        assert!(link_compromised(0, 1, &everything, &st, 2).unwrap());
    }

    #[test]
    fn link_query_errors() {
        let a = rings();
        let st = CaptureState::from_nodes(&a, &[3]).unwrap();
        assert!(link_compromised(0, 3, &a, &st, 1).is_err());
        assert!(link_compromised(0, 2, &a, &st, 1).is_err());
        assert!(link_compromised(0, 0, &a, &st, 1).is_err());
    }

    #[test]
    fn capture_union_and_errors() {
        let a = rings();
        let all = CaptureState::from_nodes(&a, &[0, 1, 2, 3]).unwrap();
        assert_eq!(all.compromised_keys(), vec![0, 1, 2, 3, 4, 5, 6, 7, 9]);
        assert_eq!(all.tau(), 9);
        assert!(CaptureState::from_nodes(&a, &[1, 1]).is_err());
        assert!(CaptureState::from_nodes(&a, &[4]).is_err());
        let s = RngStream::new(1, 0);
        assert!(capture(&CaptureStrategy::Random { m: 5 }, &a, None, &s).is_err());
        assert!(capture(&CaptureStrategy::Region { x_low: 0.1, x_high: 0.2 }, &a, None, &s).is_err());
        let zero = capture(&CaptureStrategy::Random { m: 0 }, &a, None, &s).unwrap();
        assert!(zero.captured().is_empty() && zero.tau() == 0);
    }

    #[test]
    fn fused_matches_graph_path() {
        let scheme = SchemeParams::new(300, 8, 120, 2).unwrap();
        for seed in 0..5 {
            let stream = RngStream::new(seed, 0);
            let a = assign_keys(&scheme, &stream);
            let st = capture(&CaptureStrategy::Random { m: 12 }, &a, None, &stream).unwrap();
            let g = key_graph(&a, 2);
            assert_eq!(g, key_graph_brute_force(&a, 2));
            let slow = measure_resilience(&g, &a, &st, 2).unwrap();
            let fast = measure_resilience_full_visibility(&a, &st, 2);
            assert_eq!(slow, fast);
            assert!(fast.compromised_links > 0);
        }
    }

    #[test]
    fn profile_matches_per_size_measurement() {
        let scheme = SchemeParams::new(250, 10, 200, 2).unwrap();
        for seed in 0..3 {
            let stream = RngStream::new(seed, 4);
            let a = assign_keys(&scheme, &stream);
            let order = capture_order(250, 30, &stream).unwrap();
            let profile = resilience_profile_full_visibility(&a, &order, 2).unwrap();
            assert_eq!(profile.len(), 31);
            for (m, got) in profile.iter().enumerate() {
                let st = CaptureState::from_nodes(&a, &order[..m]).unwrap();
                assert_eq!(*got, measure_resilience_full_visibility(&a, &st, 2), "m = {m}");
            }
        }
    }

    #[test]
    fn extremes() {
        let scheme = SchemeParams::new(40, 5, 30, 1).unwrap();
        let stream = RngStream::new(2, 0);
        let a = assign_keys(&scheme, &stream);
        let empty = CaptureState::from_nodes(&a, &[]).unwrap();
        assert_eq!(measure_resilience_full_visibility(&a, &empty, 1).p_compromised(), Some(0.0));
        let all: Vec<u32> = (0..40).collect();
        let st = CaptureState::from_nodes(&a, &all).unwrap();
        assert_eq!(measure_resilience_full_visibility(&a, &st, 1).p_compromised(), None);
    }
}
