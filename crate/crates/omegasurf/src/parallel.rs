//! Rayon-backed executor.

use omegasurf_core::Executor;
use rayon::prelude::*;

pub const THREADS_ENV: &str = "OMEGASURF_THREADS";

/// Runs `map` on a dedicated pool. Output order always follows input order,
/// so results do not depend on the thread count.
pub struct Pool {
    pool: rayon::ThreadPool,
}

impl Pool {
    /// `threads == 0` lets rayon pick.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Pool { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Pool {
    fn map<T: Sync, R: Send>(&self, items: &[T], f: &(dyn Fn(&T) -> R + Sync)) -> Vec<R> {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

/// Thread count after applying the environment override.
pub fn resolve_threads(requested: usize) -> usize {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                log::warn!("ignoring {THREADS_ENV}={s:?}: not a thread count");
                requested
            }
        },
        Err(_) => requested,
    }
}
