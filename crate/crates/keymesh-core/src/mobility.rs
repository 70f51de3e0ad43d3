//! Multi-slot simulation under i.i.d. mobility.
//!
//! Key rings are drawn once per trial; every slot redraws node positions and
//! link-failure coins from slot-specific sub-streams.

use alloc::vec::Vec;

use crate::analysis::components::report_from_edges;
use crate::analysis::NetworkModel;
use crate::error::{bail, Error, Result};
use crate::rng::RngStream;
use crate::runner::{TrialPlan, TrialRunner};
use crate::stats::Proportion;

/// Per-slot connectivity of one mobile network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobilityRun {
    pub per_slot_connected: Vec<bool>,
    /// Number of leading connected slots.
    pub prefix_run: usize,
}

impl MobilityRun {
    pub fn slots(&self) -> usize {
        self.per_slot_connected.len()
    }
}

fn check_mobile(model: &NetworkModel, slots: usize) -> Result<()> {
    if slots == 0 {
        bail!(InvalidParameter, "need at least one time slot");
    }
    if !model.setting().visibility().is_disk() {
        bail!(RegionMismatch, "mobility is meaningless under full visibility");
    }
    if !model.setting().mobile() {
        bail!(InvalidParameter, "setting is not mobile");
    }
    Ok(())
}

/// Simulates `slots` slots. With `stop_early` the run ends at the first
/// disconnected slot, so `per_slot_connected` may be shorter than `slots`.
fn run_slots(model: &NetworkModel, slots: usize, stream: &RngStream, stop_early: bool) -> MobilityRun {
    let fixed = model.static_part(stream);
    let n = model.scheme().n();
    let mut per_slot_connected = Vec::with_capacity(slots);
    let mut prefix_run = 0;
    for slot in 0..slots as u64 {
        let (_, edges) = model.slot_edges(&fixed, stream, slot);
        let connected = report_from_edges(n, edges, fixed.removed.as_deref()).connected;
        per_slot_connected.push(connected);
        if connected && prefix_run == per_slot_connected.len() - 1 {
            prefix_run += 1;
        }
        if stop_early && !connected {
            break;
        }
    }
    MobilityRun { per_slot_connected, prefix_run }
}

pub fn simulate_slots(model: &NetworkModel, slots: usize, stream: &RngStream) -> Result<MobilityRun> {
    check_mobile(model, slots)?;
    Ok(run_slots(model, slots, stream, false))
}

/// Fraction of trials connected in each of the first `slots` slots.
pub fn estimate_t_slot_prob<R: TrialRunner>(
    model: &NetworkModel,
    slots: usize,
    plan: &TrialPlan,
    runner: &R,
) -> Result<Proportion> {
    check_mobile(model, slots)?;
    let seed = plan.master_seed;
    let flags =
        runner.run(plan.streams(), |s| run_slots(model, slots, &RngStream::new(seed, s), true).prefix_run == slots);
    Ok(Proportion::from_flags(flags))
}

/// `⌊n^{c - threshold - ε}⌋`, the guaranteed number of consecutive connected slots.
pub fn t_slot_bound(n: usize, c: f64, epsilon: f64, threshold: f64) -> Result<u64> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        bail!(InvalidParameter, "epsilon must be positive, got {epsilon}");
    }
    if c <= threshold {
        return Err(Error::VacuousBound { c, threshold });
    }
    let e = c - threshold - epsilon;
    // Guard against 10^0.5 landing a hair under an exact integer.
    let v = libm::pow(n as f64, e);
    let rounded = libm::round(v);
    let v = if (v - rounded).abs() <= 1e-9 * rounded.max(1.0) { rounded } else { v };
    Ok(libm::floor(v) as u64)
}
