//! Scheme, deployment and channel parameters.

use crate::error::{bail, Result};

/// Parameters of the q-composite scheme: `n` sensors, rings of `K` keys drawn
/// from a pool of `P` keys, and a secure link needing at least `q` shared keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    nodes: usize,
    ring_size: usize,
    pool_size: usize,
    overlap: usize,
}

impl SchemeParams {
    /// Validates `n ≥ 1` and `1 ≤ q ≤ K ≤ P`.
    pub fn new(nodes: usize, ring_size: usize, pool_size: usize, overlap: usize) -> Result<Self> {
        if nodes == 0 {
            bail!(InvalidParameter, "node count must be positive");
        }
        if overlap == 0 {
            bail!(InvalidParameter, "overlap q must be at least 1");
        }
        if overlap > ring_size {
            bail!(InvalidParameter, "overlap q = {overlap} exceeds ring size K = {ring_size}");
        }
        if ring_size > pool_size {
            bail!(InvalidParameter, "ring size K = {ring_size} exceeds pool size P = {pool_size}");
        }
        if pool_size > u32::MAX as usize || nodes > u32::MAX as usize {
            bail!(InvalidParameter, "node and key ids must fit in 32 bits");
        }
        Ok(Self { nodes, ring_size, pool_size, overlap })
    }

    pub fn n(&self) -> usize {
        self.nodes
    }

    pub fn ring_size(&self) -> usize {
        self.ring_size
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn with_nodes(self, nodes: usize) -> Result<Self> {
        Self::new(nodes, self.ring_size, self.pool_size, self.overlap)
    }

    pub fn with_ring_size(self, ring_size: usize) -> Result<Self> {
        Self::new(self.nodes, ring_size, self.pool_size, self.overlap)
    }

    pub fn with_pool_size(self, pool_size: usize) -> Result<Self> {
        Self::new(self.nodes, self.ring_size, pool_size, self.overlap)
    }

    pub fn with_overlap(self, overlap: usize) -> Result<Self> {
        Self::new(self.nodes, self.ring_size, self.pool_size, overlap)
    }
}

/// Where nodes live and which pairs can hear each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    /// Unit square with wrap-around on both axes (no boundary effect).
    UnitTorus,
    /// Unit square with the boundary effect.
    UnitSquare,
    /// Every pair is within range; no positions at all.
    FullVisibility,
}

impl RegionKind {
    pub fn is_disk(self) -> bool {
        !matches!(self, RegionKind::FullVisibility)
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionKind::UnitTorus => "torus",
            RegionKind::UnitSquare => "square",
            RegionKind::FullVisibility => "full",
        }
    }
}

impl core::str::FromStr for RegionKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "torus" | "unit-torus" => Ok(RegionKind::UnitTorus),
            "square" | "unit-square" => Ok(RegionKind::UnitSquare),
            "full" | "full-visibility" => Ok(RegionKind::FullVisibility),
            other => bail!(InvalidParameter, "unknown region '{other}'"),
        }
    }
}

/// Deployment region plus transmission radius (absent under full visibility).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoParams {
    region: RegionKind,
    radius: Option<f64>,
}

impl GeoParams {
    /// Disk model on a torus or square. Radii up to `√2` are accepted; larger
    /// ones would be equivalent anyway.
    pub fn disk(region: RegionKind, radius: f64) -> Result<Self> {
        if !region.is_disk() {
            bail!(RegionMismatch, "full visibility carries no radius");
        }
        if !radius.is_finite() || radius <= 0.0 {
            bail!(InvalidParameter, "radius must be positive and finite, got {radius}");
        }
        Ok(Self { region, radius: Some(radius) })
    }

    pub fn full_visibility() -> Self {
        Self { region: RegionKind::FullVisibility, radius: None }
    }

    pub fn region(&self) -> RegionKind {
        self.region
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }
}

/// Link unreliability: each link is independently active with probability `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    active: f64,
}

impl ChannelParams {
    pub fn new(active: f64) -> Result<Self> {
        if !(active > 0.0 && active <= 1.0) {
            bail!(InvalidParameter, "link-active probability must lie in (0, 1], got {active}");
        }
        Ok(Self { active })
    }

    pub fn reliable() -> Self {
        Self { active: 1.0 }
    }

    pub fn t(&self) -> f64 {
        self.active
    }
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self::reliable()
    }
}
