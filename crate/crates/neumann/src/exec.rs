//! Thread-pool executor for the core pipeline.

use neumann_core::exec::Executor;
use rayon::prelude::*;

/// Environment variable holding the worker count; unset or `0` means one
/// worker per CPU.
pub const THREADS_ENV: &str = "NEUMANN_THREADS";

/// Runs jobs on a dedicated rayon pool. Results keep their index order, so
/// output does not depend on the worker count.
pub struct Pool {
    pool: rayon::ThreadPool,
}

impl Pool {
    /// A pool with `threads` workers (`0` for the rayon default).
    pub fn new(threads: usize) -> anyhow::Result<Self> {
        Ok(Pool { pool: rayon::ThreadPoolBuilder::new().num_threads(threads).build()? })
    }

    /// A pool sized by [`THREADS_ENV`].
    pub fn from_env() -> anyhow::Result<Self> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => {
                v.trim().parse().map_err(|_| anyhow::anyhow!("{THREADS_ENV} must be a non-negative integer"))?
            }
            _ => 0,
        };
        Self::new(threads)
    }

    /// Worker count.
    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Pool {
    fn map<R: Send, F: Fn(usize) -> R + Sync + Send>(&self, n: usize, f: F) -> Vec<R> {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
