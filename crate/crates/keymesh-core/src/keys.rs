//! Key ring assignment.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Result};
use crate::params::SchemeParams;
use crate::rng::{label, RngStream};

/// Per-node key rings, each a strictly ascending list of `K` key ids in `[0, P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyAssignment {
    ring_size: usize,
    pool_size: usize,
    keys: Vec<u32>,
}

impl KeyAssignment {
    /// Builds an assignment from explicit rings. Rings are sorted here; every
    /// ring must hold `ring_size` distinct ids below `pool_size`.
    pub fn from_rings<R: AsRef<[u32]>>(pool_size: usize, rings: &[R]) -> Result<Self> {
        let ring_size = rings.first().map_or(0, |r| r.as_ref().len());
        let mut keys = Vec::with_capacity(ring_size * rings.len());
        for (node, ring) in rings.iter().enumerate() {
            let ring = ring.as_ref();
            if ring.len() != ring_size {
                bail!(InvalidParameter, "ring {node} has {} keys, expected {ring_size}", ring.len());
            }
            let start = keys.len();
            keys.extend_from_slice(ring);
            let slot = &mut keys[start..];
            slot.sort_unstable();
            if slot.windows(2).any(|w| w[0] == w[1]) {
                bail!(InvalidParameter, "ring {node} repeats a key");
            }
            if slot.last().is_some_and(|&k| k as usize >= pool_size) {
                bail!(InvalidParameter, "ring {node} holds a key outside the pool");
            }
        }
        Ok(Self { ring_size, pool_size, keys })
    }

    pub fn n(&self) -> usize {
        self.keys.len().checked_div(self.ring_size).unwrap_or(0)
    }

    pub fn ring_size(&self) -> usize {
        self.ring_size
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    pub fn ring(&self, node: usize) -> &[u32] {
        &self.keys[node * self.ring_size..(node + 1) * self.ring_size]
    }

    pub fn rings(&self) -> impl Iterator<Item = &[u32]> {
        self.keys.chunks_exact(self.ring_size.max(1))
    }
}

/// Draws a uniform `count`-subset of `[0, pool)`, returned ascending.
///
/// Floyd's algorithm: `count` draws regardless of the pool size.
pub(crate) fn sample_distinct<R: Rng + ?Sized>(rng: &mut R, count: usize, pool: usize) -> Vec<u32> {
    debug_assert!(count <= pool);
    let mut chosen: Vec<u32> = Vec::with_capacity(count);
    for j in (pool - count)..pool {
        let j = j as u32;
        let t = rng.random_range(0..=j);
        let pick = match chosen.binary_search(&t) {
            Ok(_) => j,
            Err(_) => t,
        };
        // `j` is larger than everything drawn so far, so it lands at the end.
        let at = chosen.binary_search(&pick).unwrap_err();
        chosen.insert(at, pick);
    }
    chosen
}

/// Gives every node an independent uniform `K`-subset of the key pool.
pub fn assign_keys(params: &SchemeParams, stream: &RngStream) -> KeyAssignment {
    let mut rng = stream.fork(label::KEYS);
    let (n, k, p) = (params.n(), params.ring_size(), params.pool_size());
    let mut keys = Vec::with_capacity(n * k);
    for _ in 0..n {
        keys.extend(sample_distinct(&mut rng, k, p));
    }
    KeyAssignment { ring_size: k, pool_size: p, keys }
}
