//! Execution strategy for embarrassingly parallel work.
//!
//! Diffusion runs, cascade trials and pipeline cells are independent given
//! their derived seeds, so they map cleanly onto a data-parallel pool. With
//! the `parallel` feature (default) the work is spread over rayon; without
//! it, or with [`Execution::Sequential`], everything runs on the calling
//! thread. Results are always collected in index order, so outputs do not
//! depend on the strategy.

/// How to schedule a batch of independent jobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// Use the rayon pool when the `parallel` feature is enabled; otherwise
    /// identical to `Sequential`.
    #[default]
    Parallel,
    /// Run jobs one after another on the calling thread.
    Sequential,
}

/// Maps `job` over `0..n`, returning results in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(job).collect(),
        Execution::Parallel => map_parallel(n, job),
    }
}

#[cfg(feature = "parallel")]
fn map_parallel<T, F>(n: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(job).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_parallel<T, F>(n: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(job).collect()
}
