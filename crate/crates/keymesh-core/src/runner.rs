//! Trial execution.
//!
//! Estimators in this crate describe *what* each trial computes; a
//! [`TrialRunner`] decides how trials are scheduled. Results always come back
//! in stream order, so aggregates do not depend on the scheduler.

use alloc::vec::Vec;
use core::ops::Range;

pub trait TrialRunner {
    /// Evaluates `trial` on every stream index in `streams`, returning results
    /// in index order.
    fn run<T, F>(&self, streams: Range<u64>, trial: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;
}

/// Runs trials one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run<T, F>(&self, streams: Range<u64>, trial: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        streams.map(trial).collect()
    }
}

/// Which streams a batch of trials uses: indices
/// `first_stream .. first_stream + trials` under `master_seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub master_seed: u64,
    pub first_stream: u64,
    pub trials: u64,
}

impl TrialPlan {
    pub fn new(master_seed: u64, trials: u64) -> Self {
        Self { master_seed, first_stream: 0, trials }
    }

    pub fn starting_at(self, first_stream: u64) -> Self {
        Self { first_stream, ..self }
    }

    pub fn streams(&self) -> Range<u64> {
        self.first_stream..self.first_stream + self.trials
    }
}
