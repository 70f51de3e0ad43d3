use alloc::vec::Vec;

use crate::analysis::NetworkModel;
use crate::error::Result;
use crate::keys::assign_keys;
use crate::rng::RngStream;
use crate::runner::{TrialPlan, TrialRunner};
use crate::stats::{Moments, Proportion};

use super::{
    analytic_p_compromised_tau, capture, measure_resilience, measure_resilience_full_visibility, CaptureStrategy,
    ResilienceReport,
};

/// Pooled compromise statistics over independent trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ResilienceEstimate {
    /// Compromised links out of secure links, summed over trials.
    pub pooled: Proportion,
    pub tau_mean: f64,
    /// The τ-conditioned formula averaged over trials, weighted by each
    /// trial's secure-link count; `None` if no trial kept a secure link.
    pub analytic: Option<f64>,
    pub reports: Vec<ResilienceReport>,
}

/// One capture on stream `stream`, measured on the composed topology.
///
/// The model's own random capture (if any) is ignored; `strategy` decides.
pub fn resilience_trial(
    model: &NetworkModel,
    strategy: &CaptureStrategy,
    stream: &RngStream,
) -> Result<ResilienceReport> {
    let q = model.scheme().overlap();
    if model.setting().visibility().is_disk() {
        let sample = model.sample(stream);
        let state = capture(strategy, &sample.assignment, sample.placement.as_ref(), stream)?;
        measure_resilience(&sample.graph, &sample.assignment, &state, q)
    } else {
        let assignment = assign_keys(model.scheme(), stream);
        let state = capture(strategy, &assignment, None, stream)?;
        Ok(measure_resilience_full_visibility(&assignment, &state, q))
    }
}

pub fn estimate_resilience<R: TrialRunner>(
    model: &NetworkModel,
    strategy: &CaptureStrategy,
    plan: &TrialPlan,
    runner: &R,
) -> Result<ResilienceEstimate> {
    let seed = plan.master_seed;
    let reports = runner
        .run(plan.streams(), |s| resilience_trial(model, strategy, &RngStream::new(seed, s)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (mut bad, mut links, mut weighted) = (0u64, 0u64, 0.0);
    let mut taus = Moments::default();
    for r in &reports {
        bad += r.compromised_links as u64;
        links += r.secure_links as u64;
        taus.push(r.tau as f64);
        if r.secure_links > 0 {
            weighted += r.secure_links as f64 * analytic_p_compromised_tau(model.scheme(), r.tau)?;
        }
    }
    Ok(ResilienceEstimate {
        pooled: Proportion::new(bad, links),
        tau_mean: taus.mean(),
        analytic: (links > 0).then(|| weighted / links as f64),
        reports,
    })
}
