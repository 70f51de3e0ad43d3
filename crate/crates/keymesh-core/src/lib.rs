//! Random graph models and metrics for wireless sensor networks secured with
//! the q-composite random key predistribution scheme.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs and an [`RngStream`]; parallel execution is plugged
//! in through [`TrialRunner`].
//!
//! Layout:
//!
//! * [`params`], [`rng`], [`keys`], [`geometry`]: scheme parameters, seeded
//!   streams, key rings and node placement.
//! * [`graph`], [`generators`], [`formulas`]: graph construction and the exact
//!   and asymptotic edge probabilities.
//! * [`analysis`]: components, threshold constants, connectivity estimation.
//! * [`attack`]: node capture, link compromise, resilience metrics and the
//!   splitting attack.
//! * [`mobility`]: multi-slot simulation under i.i.d. mobility.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod analysis;
pub mod attack;
mod error;
pub mod formulas;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod keys;
pub mod mobility;
pub mod params;
pub mod rng;
pub mod runner;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{Placement, Point};
pub use graph::AdjacencyGraph;
pub use keys::KeyAssignment;
pub use params::{ChannelParams, GeoParams, RegionKind, SchemeParams};
pub use rng::RngStream;
pub use runner::{Sequential, TrialPlan, TrialRunner};
