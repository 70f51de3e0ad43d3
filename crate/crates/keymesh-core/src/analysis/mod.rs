//! Connectivity metrics, threshold constants and connectivity estimation.

pub(crate) mod components;
mod estimate;
mod network;
mod thresholds;

pub use components::{components, components_excluding, ConnectivityReport, UnionFind};
pub use estimate::{connectivity_trial, estimate_connectivity, ConnectivityEstimate};
pub use network::{NetworkModel, NetworkSample, SettingSpec};
pub use thresholds::{
    achieved_c, achieved_c_after_capture, c_pound, c_star, expected_isolated_torus, lambda_condition_check, AchievedC,
    LambdaReport, LambdaThresholds, ThresholdKind,
};
