use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::graph::AdjacencyGraph;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n], sets: n }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn set_size(&mut self, x: u32) -> usize {
        let r = self.find(x);
        self.size[r as usize] as usize
    }
}

/// Component structure of a graph (or of the nodes a capture left behind).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub connected: bool,
    /// Component sizes, largest first.
    pub component_sizes: Vec<usize>,
    pub isolated_count: usize,
}

impl ConnectivityReport {
    pub fn nodes(&self) -> usize {
        self.component_sizes.iter().sum()
    }

    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }
}

pub fn components(graph: &AdjacencyGraph) -> Result<ConnectivityReport> {
    if graph.n() == 0 {
        bail!(InvalidParameter, "connectivity of an empty node set is undefined");
    }
    Ok(report_from_edges(graph.n(), graph.edges(), None))
}

/// Components of the subgraph left after deleting the nodes flagged in `removed`.
pub fn components_excluding(graph: &AdjacencyGraph, removed: &[bool]) -> Result<ConnectivityReport> {
    if removed.len() != graph.n() {
        bail!(InvalidParameter, "removal mask has {} entries for {} nodes", removed.len(), graph.n());
    }
    if removed.iter().all(|&r| r) {
        bail!(InvalidParameter, "connectivity of an empty node set is undefined");
    }
    Ok(report_from_edges(graph.n(), graph.edges(), Some(removed)))
}

pub(crate) fn report_from_edges<I>(n: usize, edges: I, removed: Option<&[bool]>) -> ConnectivityReport
where
    I: IntoIterator<Item = (u32, u32)>,
{
    let gone = |v: usize| removed.is_some_and(|m| m[v]);
    let mut uf = UnionFind::new(n);
    for (a, b) in edges {
        if !gone(a as usize) && !gone(b as usize) {
            uf.union(a, b);
        }
    }
    let mut component_sizes = Vec::new();
    for v in 0..n {
        if !gone(v) && uf.find(v as u32) == v as u32 {
            component_sizes.push(uf.set_size(v as u32));
        }
    }
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let isolated_count = component_sizes.iter().filter(|&&s| s == 1).count();
    ConnectivityReport { connected: component_sizes.len() == 1, component_sizes, isolated_count }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = components(&AdjacencyGraph::complete(5)).unwrap();
        assert!(r.connected);
        assert_eq!(r.component_sizes, vec![5]);
        assert_eq!(r.isolated_count, 0);

        let r = components(&AdjacencyGraph::empty(4)).unwrap();
        assert!(!r.connected);
        assert_eq!(r.component_sizes, vec![1, 1, 1, 1]);
        assert_eq!(r.isolated_count, 4);

        let g = AdjacencyGraph::from_edges(3, [(0, 1)]).unwrap();
        let r = components(&g).unwrap();
        assert_eq!(r.component_sizes, vec![2, 1]);
        assert_eq!(r.isolated_count, 1);
    }

    #[test]
    fn degenerate_sizes() {
        assert!(components(&AdjacencyGraph::empty(1)).unwrap().connected);
        assert!(components(&AdjacencyGraph::empty(0)).is_err());
    }

    #[test]
    fn removal() {
        let g = AdjacencyGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = components_excluding(&g, &[false, true, false, false]).unwrap();
        assert_eq!(r.component_sizes, vec![2, 1]);
        assert!(components_excluding(&g, &[true; 4]).is_err());
    }
}
