use crate::rng::RngStream;
use crate::runner::{TrialPlan, TrialRunner};
use crate::stats::{Moments, Proportion};

use super::components::{report_from_edges, ConnectivityReport};
use super::network::NetworkModel;

/// Monte Carlo connectivity estimate with per-trial averages.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityEstimate {
    pub connected: Proportion,
    pub isolated_mean: f64,
    pub components_mean: f64,
}

/// Samples one topology on stream `(master_seed, stream_index)` and reports
/// the components among nodes that were not captured.
pub fn connectivity_trial(model: &NetworkModel, stream: &RngStream) -> ConnectivityReport {
    let fixed = model.static_part(stream);
    let (_, edges) = model.slot_edges(&fixed, stream, 0);
    report_from_edges(model.scheme().n(), edges, fixed.removed.as_deref())
}

pub fn estimate_connectivity<R: TrialRunner>(
    model: &NetworkModel,
    plan: &TrialPlan,
    runner: &R,
) -> ConnectivityEstimate {
    let seed = plan.master_seed;
    let reports = runner.run(plan.streams(), |s| {
        let r = connectivity_trial(model, &RngStream::new(seed, s));
        (r.connected, r.isolated_count, r.component_count())
    });
    let connected = Proportion::from_flags(reports.iter().map(|r| r.0));
    let isolated: Moments = reports.iter().map(|r| r.1 as f64).collect();
    let comps: Moments = reports.iter().map(|r| r.2 as f64).collect();
    ConnectivityEstimate { connected, isolated_mean: isolated.mean(), components_mean: comps.mean() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::SettingSpec;
    use crate::params::{ChannelParams, GeoParams, RegionKind, SchemeParams};
    use crate::runner::Sequential;

    #[test]
    fn complete_key_graph_always_connected() {
        let s = SettingSpec::new(RegionKind::FullVisibility, false, false).unwrap();
        let scheme = SchemeParams::new(50, 4, 4, 1).unwrap();
        let model = NetworkModel::new(s, scheme, GeoParams::full_visibility(), ChannelParams::reliable()).unwrap();
        let est = estimate_connectivity(&model, &TrialPlan::new(5, 20), &Sequential);
        assert_eq!(est.connected.estimate(), 1.0);
        assert_eq!(est.isolated_mean, 0.0);
        assert_eq!(est.components_mean, 1.0);
    }

    #[test]
    fn deterministic_per_seed() {
        let s = SettingSpec::new(RegionKind::UnitTorus, true, false).unwrap();
        let scheme = SchemeParams::new(200, 8, 100, 1).unwrap();
        let geo = GeoParams::disk(RegionKind::UnitTorus, 0.15).unwrap();
        let model = NetworkModel::new(s, scheme, geo, ChannelParams::new(0.8).unwrap()).unwrap();
        let a = estimate_connectivity(&model, &TrialPlan::new(9, 30), &Sequential);
        let b = estimate_connectivity(&model, &TrialPlan::new(9, 30), &Sequential);
        assert_eq!(a, b);
    }

    #[test]
    fn capture_removes_nodes() {
        let s = SettingSpec::new(RegionKind::FullVisibility, false, false).unwrap();
        let scheme = SchemeParams::new(30, 2, 2, 1).unwrap();
        let model = NetworkModel::new(s, scheme, GeoParams::full_visibility(), ChannelParams::reliable())
            .unwrap()
            .with_random_capture(10)
            .unwrap();
        let r = connectivity_trial(&model, &RngStream::new(1, 1));
        assert_eq!(r.component_sizes, alloc::vec![20]);
    }
}
