//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (the default) [`Execution::Parallel`] fans
//! work out over the rayon pool. Without it every request runs sequentially.
//! Results are always assembled in index order, so the choice never changes
//! a returned value.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work will actually be distributed across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0), ..., f(n - 1)` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
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

/// Evaluates `f` at each point and returns the values in input order.
pub fn map_points<F>(points: &[f64], exec: Execution, f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    map_indexed(points.len(), exec, |i| f(points[i]))
}
