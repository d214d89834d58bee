//! Execution strategy for the embarrassingly parallel scans.
//!
//! Every scan builds its output through [`map_indexed`], so results are
//! assembled in index order regardless of how many workers ran.

use serde::{Deserialize, Serialize};

/// How a scan distributes its independent cells.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    /// Parallel when the `parallel` feature is enabled, sequential otherwise.
    #[default]
    Auto,
    Sequential,
    Parallel,
}

impl Exec {
    /// True if this strategy will actually use the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Exec::Sequential
    }
}

/// Evaluate `f(0..n)` and collect the results in index order.
pub fn map_indexed<T, F>(n: usize, exec: Exec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Run `f` inside a pool of `jobs` workers. `None` or `Some(0)` uses the global pool.
///
/// Without the `parallel` feature the closure simply runs on the calling thread.
pub fn with_jobs<R, F>(jobs: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    if let Some(n) = jobs.filter(|&n| n > 0) {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            return pool.install(f);
        }
    }
    let _ = jobs;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_strategy() {
        let seq = map_indexed(100, Exec::Sequential, |i| i * i);
        let par = map_indexed(100, Exec::Parallel, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(with_jobs(Some(2), || map_indexed(10, Exec::Auto, |i| i)), (0..10).collect::<Vec<_>>());
    }
}
