use alloc::vec::Vec;

use crate::analysis::components;
use crate::error::{bail, Result};
use crate::generators::for_each_sharing_pair;
use crate::graph::AdjacencyGraph;
use crate::keys::KeyAssignment;

use super::CaptureState;

/// Nodes that kept most of their keys, linked through uncompromised keys only.
#[derive(Debug, Clone, PartialEq)]
pub struct ResilientCore {
    /// Core node ids, ascending; node `i` of `graph` is `core[i]`.
    pub core: Vec<u32>,
    pub graph: AdjacencyGraph,
    pub connected: bool,
}

impl ResilientCore {
    pub fn size(&self) -> usize {
        self.core.len()
    }
}

/// `1 - c^{-1/(6q)}`.
pub fn core_alpha(c: f64, q: usize) -> f64 {
    1.0 - libm::pow(c, -1.0 / (6.0 * q as f64))
}

/// Keeps non-captured nodes holding at least `⌈(1-α)K⌉` uncompromised keys and
/// joins two of them iff they share at least `q` uncompromised keys.
pub fn resilient_core(assignment: &KeyAssignment, state: &CaptureState, q: usize, alpha: f64) -> Result<ResilientCore> {
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!(InvalidParameter, "alpha must lie in (0, 1), got {alpha}");
    }
    let need = libm::ceil((1.0 - alpha) * assignment.ring_size() as f64) as usize;
    let mut core = Vec::new();
    let mut offsets = Vec::from([0usize]);
    let mut keys = Vec::new();
    for v in 0..assignment.n() {
        if state.is_captured(v) {
            continue;
        }
        let start = keys.len();
        keys.extend(assignment.ring(v).iter().copied().filter(|&k| !state.is_compromised(k)));
        if keys.len() - start >= need {
            core.push(v as u32);
            offsets.push(keys.len());
        } else {
            keys.truncate(start);
        }
    }
    let size = core.len();
    let mut edges = Vec::new();
    for_each_sharing_pair(
        size,
        assignment.pool_size(),
        |i| &keys[offsets[i]..offsets[i + 1]],
        q.max(1),
        |_| false,
        |i, j, _, _| edges.push((i, j)),
    );
    let graph = AdjacencyGraph::from_sorted_edges(size, &edges);
    let connected = size > 0 && components(&graph).is_ok_and(|r| r.connected);
    Ok(ResilientCore { core, graph, connected })
}
