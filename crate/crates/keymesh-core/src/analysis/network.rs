use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::generators::{common_keys, geometric_edges, key_graph_edges, thin_edges};
use crate::geometry::{place_nodes_in_slot, within, Placement};
use crate::graph::AdjacencyGraph;
use crate::keys::{assign_keys, sample_distinct, KeyAssignment};
use crate::params::{ChannelParams, GeoParams, RegionKind, SchemeParams};
use crate::rng::{label, RngStream};

/// Communication model: visibility region plus optional link failures and mobility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SettingSpec {
    visibility: RegionKind,
    unreliable: bool,
    mobile: bool,
}

impl SettingSpec {
    pub fn new(visibility: RegionKind, unreliable: bool, mobile: bool) -> Result<Self> {
        if !visibility.is_disk() && (unreliable || mobile) {
            bail!(InvalidParameter, "full visibility does not combine with unreliable links or mobility");
        }
        Ok(Self { visibility, unreliable, mobile })
    }

    pub fn visibility(&self) -> RegionKind {
        self.visibility
    }

    pub fn unreliable(&self) -> bool {
        self.unreliable
    }

    pub fn mobile(&self) -> bool {
        self.mobile
    }
}

/// Everything needed to sample one secure topology, optionally after a random
/// capture of `captured` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    setting: SettingSpec,
    scheme: SchemeParams,
    geo: GeoParams,
    chan: ChannelParams,
    captured: usize,
}

/// One sampled topology.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSample {
    pub assignment: KeyAssignment,
    pub placement: Option<Placement>,
    pub graph: AdjacencyGraph,
    /// Randomly captured nodes, ascending; empty without capture.
    pub captured: Vec<u32>,
}

/// Per-trial state that stays fixed across mobility slots.
pub(crate) struct StaticPart {
    pub(crate) assignment: KeyAssignment,
    key_edges: Option<Vec<(u32, u32)>>,
    pub(crate) removed: Option<Vec<bool>>,
    pub(crate) captured: Vec<u32>,
}

impl NetworkModel {
    /// Link failures are only applied when the setting is unreliable; `chan` is
    /// ignored otherwise.
    pub fn new(setting: SettingSpec, scheme: SchemeParams, geo: GeoParams, chan: ChannelParams) -> Result<Self> {
        if geo.region() != setting.visibility() {
            bail!(RegionMismatch, "setting is {} but geometry is {}", setting.visibility().name(), geo.region().name());
        }
        Ok(Self { setting, scheme, geo, chan, captured: 0 })
    }

    /// Removes a uniform random `m`-subset of nodes before connectivity is judged.
    pub fn with_random_capture(mut self, m: usize) -> Result<Self> {
        if m >= self.scheme.n() {
            bail!(InvalidParameter, "capturing {m} of {} nodes leaves nobody", self.scheme.n());
        }
        self.captured = m;
        Ok(self)
    }

    pub fn setting(&self) -> &SettingSpec {
        &self.setting
    }

    pub fn scheme(&self) -> &SchemeParams {
        &self.scheme
    }

    pub fn geo(&self) -> &GeoParams {
        &self.geo
    }

    pub fn chan(&self) -> &ChannelParams {
        &self.chan
    }

    pub fn captured(&self) -> usize {
        self.captured
    }

    /// Probability that a topological link is active.
    pub fn link_activity(&self) -> f64 {
        if self.setting.unreliable() {
            self.chan.t()
        } else {
            1.0
        }
    }

    pub fn sample(&self, stream: &RngStream) -> NetworkSample {
        let fixed = self.static_part(stream);
        let (placement, edges) = self.slot_edges(&fixed, stream, 0);
        NetworkSample {
            graph: AdjacencyGraph::from_sorted_edges(self.scheme.n(), &edges),
            assignment: fixed.assignment,
            placement,
            captured: fixed.captured,
        }
    }

    /// Key-graph-first filtering pays per shared-key incidence; geometry-first
    /// pays a ring merge per in-range pair.
    fn keys_first(&self) -> bool {
        let (k, p) = (self.scheme.ring_size(), self.scheme.pool_size());
        if k == p {
            return false;
        }
        let Some(r) = self.geo.radius() else {
            return true;
        };
        let n = self.scheme.n() as f64;
        let (k, p) = (k as f64, p as f64);
        let key_cost = n * n * k * k / p;
        let geo_cost = n * n * core::f64::consts::PI * r * r * k;
        key_cost <= geo_cost
    }

    pub(crate) fn static_part(&self, stream: &RngStream) -> StaticPart {
        let assignment = assign_keys(&self.scheme, stream);
        let key_edges =
            if self.keys_first() { Some(key_graph_edges(&assignment, self.scheme.overlap())) } else { None };
        let n = self.scheme.n();
        let (captured, removed) = if self.captured > 0 {
            let nodes = sample_distinct(&mut stream.fork(label::CAPTURE), self.captured, n);
            let mut mask = vec![false; n];
            for &v in &nodes {
                mask[v as usize] = true;
            }
            (nodes, Some(mask))
        } else {
            (Vec::new(), None)
        };
        StaticPart { assignment, key_edges, removed, captured }
    }

    /// Composed topology for one slot, as ascending `(i, j)` pairs.
    pub(crate) fn slot_edges(
        &self,
        fixed: &StaticPart,
        stream: &RngStream,
        slot: u64,
    ) -> (Option<Placement>, Vec<(u32, u32)>) {
        let n = self.scheme.n();
        let q = self.scheme.overlap();
        let placement = self
            .geo
            .radius()
            .map(|_| place_nodes_in_slot(n, &self.geo, stream, slot).expect("disk geometry checked at construction"));
        let mut edges = match (&fixed.key_edges, placement.as_ref().zip(self.geo.radius())) {
            (Some(key_edges), Some((pl, r))) => {
                let (pts, region, r2) = (pl.coords(), pl.region(), r * r);
                key_edges
                    .iter()
                    .copied()
                    .filter(|&(i, j)| within(pts[i as usize], pts[j as usize], region, r2))
                    .collect()
            }
            (Some(key_edges), None) => key_edges.clone(),
            (None, Some((pl, r))) => {
                let mut e = geometric_edges(pl, r);
                if self.scheme.ring_size() != self.scheme.pool_size() {
                    let a = &fixed.assignment;
                    e.retain(|&(i, j)| common_keys(a.ring(i as usize), a.ring(j as usize)) >= q);
                }
                e.sort_unstable();
                e
            }
            (None, None) => {
                let mut e = Vec::with_capacity(n * n.saturating_sub(1) / 2);
                for i in 0..n as u32 {
                    e.extend((i + 1..n as u32).map(|j| (i, j)));
                }
                e
            }
        };
        let t = self.link_activity();
        if t < 1.0 {
            thin_edges(&mut edges, t, &mut stream.fork_slot(label::LINKS, slot));
        }
        (placement, edges)
    }
}
