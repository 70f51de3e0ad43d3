//! Random graph generators: key graph, geometric graph, Erdős–Rényi graph and
//! the link-unreliability overlay.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Result};
use crate::geometry::{within, Placement};
use crate::graph::AdjacencyGraph;
use crate::keys::KeyAssignment;
use crate::rng::{label, RngStream, StreamRng};

/// Number of keys two ascending rings have in common (linear merge).
pub fn common_keys(a: &[u32], b: &[u32]) -> usize {
    let (mut x, mut y, mut count) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            core::cmp::Ordering::Less => x += 1,
            core::cmp::Ordering::Greater => y += 1,
            core::cmp::Ordering::Equal => {
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    count
}

/// `|R_i ∩ R_j|`.
pub fn shared_key_count(assignment: &KeyAssignment, i: usize, j: usize) -> usize {
    debug_assert!(i != j);
    common_keys(assignment.ring(i), assignment.ring(j))
}

/// Inverted index from key id to the nodes holding it.
///
/// Keys are hashed into `2^b ≥ min(P, total entries)` buckets by their low
/// bits; when the pool fits, every key owns its bucket.
pub(crate) struct KeyIndex {
    mask: u32,
    starts: Vec<u32>,
    entries: Vec<(u32, u32)>,
}

impl KeyIndex {
    pub(crate) fn build<'a, F>(n: usize, pool: usize, ring: F) -> Self
    where
        F: Fn(usize) -> &'a [u32],
    {
        let total: usize = (0..n).map(|i| ring(i).len()).sum();
        let buckets = pool.min(total).max(1).next_power_of_two();
        let mask = (buckets - 1) as u32;
        let mut starts = vec![0u32; buckets + 1];
        for i in 0..n {
            for &k in ring(i) {
                starts[(k & mask) as usize + 1] += 1;
            }
        }
        for b in 0..buckets {
            starts[b + 1] += starts[b];
        }
        let mut cursor = starts.clone();
        let mut entries = vec![(0u32, 0u32); total];
        for i in 0..n {
            for &k in ring(i) {
                let slot = &mut cursor[(k & mask) as usize];
                entries[*slot as usize] = (k, i as u32);
                *slot += 1;
            }
        }
        Self { mask, starts, entries }
    }

    #[inline]
    fn holders(&self, key: u32) -> impl Iterator<Item = u32> + '_ {
        let b = (key & self.mask) as usize;
        self.entries[self.starts[b] as usize..self.starts[b + 1] as usize]
            .iter()
            .filter(move |e| e.0 == key)
            .map(|e| e.1)
    }
}

/// Visits every pair `i < j` sharing at least `min_shared` keys, in ascending
/// `(i, j)` order, with the shared-key count and how many of the shared keys
/// satisfy `flag`.
pub(crate) fn for_each_sharing_pair<'a, F, G, V>(
    n: usize,
    pool: usize,
    ring: F,
    min_shared: usize,
    flag: G,
    mut visit: V,
) where
    F: Fn(usize) -> &'a [u32] + Copy,
    G: Fn(u32) -> bool,
    V: FnMut(u32, u32, usize, usize),
{
    let index = KeyIndex::build(n, pool, ring);
    let mut shared = vec![0u32; n];
    let mut flagged = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    for i in 0..n {
        for &key in ring(i) {
            let f = flag(key) as u32;
            for j in index.holders(key) {
                if j as usize > i {
                    let c = &mut shared[j as usize];
                    if *c == 0 {
                        touched.push(j);
                    }
                    *c += 1;
                    flagged[j as usize] += f;
                }
            }
        }
        touched.sort_unstable();
        for &j in &touched {
            let s = shared[j as usize] as usize;
            if s >= min_shared {
                visit(i as u32, j, s, flagged[j as usize] as usize);
            }
            shared[j as usize] = 0;
            flagged[j as usize] = 0;
        }
        touched.clear();
    }
}

/// Edges `(i, j)`, ascending, of pairs sharing at least `q` keys.
pub(crate) fn key_graph_edges(assignment: &KeyAssignment, q: usize) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for_each_sharing_pair(
        assignment.n(),
        assignment.pool_size(),
        |i| assignment.ring(i),
        q.max(1),
        |_| false,
        |i, j, _, _| edges.push((i, j)),
    );
    edges
}

/// The q-composite key graph: `{i, j}` is an edge iff the rings share `≥ q` keys.
pub fn key_graph(assignment: &KeyAssignment, q: usize) -> AdjacencyGraph {
    AdjacencyGraph::from_sorted_edges(assignment.n(), &key_graph_edges(assignment, q))
}

/// All-pairs reference construction of [`key_graph`].
pub fn key_graph_brute_force(assignment: &KeyAssignment, q: usize) -> AdjacencyGraph {
    let n = assignment.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if shared_key_count(assignment, i, j) >= q {
                edges.push((i as u32, j as u32));
            }
        }
    }
    AdjacencyGraph::from_sorted_edges(n, &edges)
}

/// Geometric graph: `{i, j}` is an edge iff the nodes are within `radius`.
///
/// Candidate pairs come from a uniform grid with cells no smaller than the
/// radius, scanning the 3×3 block around each node's cell (wrapping on the torus).
pub fn geometric_graph(placement: &Placement, radius: f64) -> AdjacencyGraph {
    AdjacencyGraph::from_upper_edges(placement.len(), geometric_edges(placement, radius))
}

pub(crate) fn geometric_edges(placement: &Placement, radius: f64) -> Vec<(u32, u32)> {
    let pts = placement.coords();
    let n = pts.len();
    let region = placement.region();
    let torus = region == crate::params::RegionKind::UnitTorus;
    let r2 = radius * radius;

    let by_radius = if radius >= 1.0 { 1 } else { libm::floor(1.0 / radius) as usize };
    let cap = libm::ceil(2.0 * libm::sqrt(n as f64)) as usize + 1;
    let g = by_radius.clamp(1, cap);
    let cell_of = |v: f64| ((v * g as f64) as usize).min(g - 1);

    let mut starts = vec![0u32; g * g + 1];
    let cells: Vec<usize> = pts.iter().map(|p| cell_of(p.y) * g + cell_of(p.x)).collect();
    for &c in &cells {
        starts[c + 1] += 1;
    }
    for c in 0..g * g {
        starts[c + 1] += starts[c];
    }
    let mut cursor = starts.clone();
    let mut members = vec![0u32; n];
    for (i, &c) in cells.iter().enumerate() {
        members[cursor[c] as usize] = i as u32;
        cursor[c] += 1;
    }

    let mut edges = Vec::new();
    let mut around: Vec<usize> = Vec::with_capacity(9);
    for (i, p) in pts.iter().enumerate() {
        let (cx, cy) = (cell_of(p.x) as isize, cell_of(p.y) as isize);
        around.clear();
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let (mut x, mut y) = (cx + dx, cy + dy);
                if torus {
                    x = x.rem_euclid(g as isize);
                    y = y.rem_euclid(g as isize);
                } else if x < 0 || y < 0 || x >= g as isize || y >= g as isize {
                    continue;
                }
                let c = y as usize * g + x as usize;
                if !around.contains(&c) {
                    around.push(c);
                }
            }
        }
        for &c in &around {
            for &j in &members[starts[c] as usize..starts[c + 1] as usize] {
                if j as usize > i && within(*p, pts[j as usize], region, r2) {
                    edges.push((i as u32, j));
                }
            }
        }
    }
    edges
}

/// All-pairs reference construction of [`geometric_graph`].
pub fn geometric_graph_brute_force(placement: &Placement, radius: f64) -> AdjacencyGraph {
    let n = placement.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if placement.distance(i, j) <= radius {
                edges.push((i as u32, j as u32));
            }
        }
    }
    AdjacencyGraph::from_sorted_edges(n, &edges)
}

/// Erdős–Rényi graph: every pair independently an edge with probability `p`.
///
/// Uses geometric skipping over the pair sequence, so the cost is linear in
/// `n` plus the number of edges.
pub fn er_graph(n: usize, p: f64, stream: &RngStream) -> Result<AdjacencyGraph> {
    if !(0.0..=1.0).contains(&p) {
        bail!(InvalidParameter, "edge probability must lie in [0, 1], got {p}");
    }
    if p == 0.0 || n < 2 {
        return Ok(AdjacencyGraph::empty(n));
    }
    if p == 1.0 {
        return Ok(AdjacencyGraph::complete(n));
    }
    let mut rng = stream.fork(label::ER);
    let log_q = libm::log1p(-p);
    let mut edges = Vec::new();
    // Pairs (v, w) with w < v, enumerated row by row.
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let u: f64 = rng.random();
        let skip = libm::floor(libm::log1p(-u) / log_q);
        w += 1 + if skip >= i64::MAX as f64 { i64::MAX / 2 } else { skip as i64 };
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as u32, v as u32));
        }
    }
    Ok(AdjacencyGraph::from_upper_edges(n, edges))
}

/// Keeps each edge independently with probability `t` (one coin per edge, in order).
pub(crate) fn thin_edges(edges: &mut Vec<(u32, u32)>, t: f64, rng: &mut StreamRng) {
    if t >= 1.0 {
        return;
    }
    edges.retain(|_| rng.random::<f64>() < t);
}

/// Link-unreliability overlay applied to an existing graph.
///
/// Equal in distribution to intersecting with an independent `er_graph(n, t)`.
pub fn thin(graph: &AdjacencyGraph, t: f64, stream: &RngStream) -> Result<AdjacencyGraph> {
    if !(t > 0.0 && t <= 1.0) {
        bail!(InvalidParameter, "link-active probability must lie in (0, 1], got {t}");
    }
    let mut edges: Vec<(u32, u32)> = graph.edges().collect();
    thin_edges(&mut edges, t, &mut stream.fork(label::LINKS));
    Ok(AdjacencyGraph::from_sorted_edges(graph.n(), &edges))
}
