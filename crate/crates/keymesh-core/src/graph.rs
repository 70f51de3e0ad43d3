//! Undirected simple graphs in compressed sparse row form.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};

/// Undirected simple graph on nodes `0..n`; each neighbor list is ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl AdjacencyGraph {
    pub fn empty(n: usize) -> Self {
        Self { offsets: vec![0; n + 1], neighbors: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(n * n.saturating_sub(1));
        offsets.push(0);
        for i in 0..n as u32 {
            neighbors.extend((0..n as u32).filter(|&j| j != i));
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors }
    }

    /// Builds a graph from an arbitrary edge list. Endpoint order does not
    /// matter and duplicates collapse; self-loops and out-of-range ids are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                bail!(InvalidParameter, "self-loop at node {a}");
            }
            if a as usize >= n || b as usize >= n {
                bail!(OutOfRange, "edge ({a}, {b}) references a node >= {n}");
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_edges(n, &list))
    }

    /// `edges` must be strictly ascending pairs `(i, j)` with `i < j < n`.
    pub(crate) fn from_sorted_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &(i, j) in edges {
            degree[i as usize] += 1;
            degree[j as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in &degree[..n] {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; acc];
        // With edges sorted by (i, j), every node receives its smaller
        // neighbors before its larger ones, each group ascending.
        for &(i, j) in edges {
            neighbors[cursor[i as usize]] = j;
            cursor[i as usize] += 1;
            neighbors[cursor[j as usize]] = i;
            cursor[j as usize] += 1;
        }
        Self { offsets, neighbors }
    }

    /// Sorts and deduplicates `(i, j)` pairs with `i < j` before building.
    pub(crate) fn from_upper_edges(n: usize, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n() && b < self.n() && self.neighbors(a).binary_search(&(b as u32)).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i).iter().filter(move |&&j| (j as usize) > i).map(move |&j| (i as u32, j))
        })
    }

    /// Fraction of the `C(n, 2)` pairs that are edges.
    pub fn density(&self) -> f64 {
        let n = self.n() as f64;
        if n < 2.0 {
            return 0.0;
        }
        self.edge_count() as f64 / (n * (n - 1.0) / 2.0)
    }

    /// Edge set intersection by per-node sorted merge.
    pub fn intersect(&self, other: &AdjacencyGraph) -> Result<AdjacencyGraph> {
        if self.n() != other.n() {
            return Err(Error::NodeCountMismatch { expected: self.n(), found: other.n() });
        }
        let mut offsets = Vec::with_capacity(self.n() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for v in 0..self.n() {
            let (a, b) = (self.neighbors(v), other.neighbors(v));
            let (mut x, mut y) = (0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    core::cmp::Ordering::Less => x += 1,
                    core::cmp::Ordering::Greater => y += 1,
                    core::cmp::Ordering::Equal => {
                        neighbors.push(a[x]);
                        x += 1;
                        y += 1;
                    }
                }
            }
            offsets.push(neighbors.len());
        }
        Ok(AdjacencyGraph { offsets, neighbors })
    }

    /// Subgraph induced by `keep` (ascending node ids), relabelled to `0..keep.len()`.
    pub fn induced(&self, keep: &[u32]) -> AdjacencyGraph {
        let mut index = vec![u32::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            index[old as usize] = new as u32;
        }
        let mut edges = Vec::new();
        for (new_i, &old) in keep.iter().enumerate() {
            for &j in self.neighbors(old as usize) {
                let new_j = index[j as usize];
                if new_j != u32::MAX && new_j as usize > new_i {
                    edges.push((new_i as u32, new_j));
                }
            }
        }
        AdjacencyGraph::from_upper_edges(keep.len(), edges)
    }
}

/// An edge survives iff it is present in every input graph.
pub fn intersect_graphs(graphs: &[&AdjacencyGraph]) -> Result<AdjacencyGraph> {
    let (first, rest) = match graphs.split_first() {
        Some(split) => split,
        None => bail!(InvalidParameter, "cannot intersect an empty list of graphs"),
    };
    let mut acc = (*first).clone();
    for g in rest {
        acc = acc.intersect(g)?;
    }
    Ok(acc)
}
