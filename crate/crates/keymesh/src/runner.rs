use std::ops::Range;

use keymesh_core::TrialRunner;
use rayon::prelude::*;

use crate::error::{config_err, Result};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "KEYMESH_THREADS";

/// Runs trials on a dedicated rayon pool; results come back in stream order.
pub struct RayonRunner {
    pool: rayon::ThreadPool,
}

impl RayonRunner {
    /// `threads = 0` means one worker per available core.
    pub fn new(threads: usize) -> Result<Self> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map(|pool| Self { pool })
            .or_else(|e| config_err(format!("cannot start worker pool: {e}")))
    }

    /// Honors `KEYMESH_THREADS` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(THREADS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) => Self::new(n),
                Err(_) => config_err(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")),
            },
            Err(_) => Self::new(0),
        }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TrialRunner for RayonRunner {
    fn run<T, F>(&self, streams: Range<u64>, trial: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.pool.install(|| streams.into_par_iter().map(&trial).collect())
    }
}
