pub mod classify;
pub mod hyp2f1;
pub mod solve;
pub mod table;
pub mod validate;

use crate::error::CliError;

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    /// Pass threshold for `solve`; from `FRW_DEFAULT_TOL` when set.
    pub default_tol: f64,
    /// `FRW_DEFAULT_TOL` itself, used by `validate` as a global override.
    pub env_tol: Option<f64>,
}

/// A pool with `jobs` threads (1 when unset).
pub fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let jobs = jobs.unwrap_or(1);
    if jobs == 0 {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))
}
