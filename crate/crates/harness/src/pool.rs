use rayon::ThreadPool;

use crate::error::{HarnessError, Result};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "HANKEL_RECOVER_THREADS";

/// Worker count from `HANKEL_RECOVER_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(HarnessError::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
            Ok(k) => Ok(Some(k)),
        },
        Err(_) => Ok(None),
    }
}

pub fn build_pool() -> Result<ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_cap()? {
        builder = builder.num_threads(k);
    }
    builder
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))
}
