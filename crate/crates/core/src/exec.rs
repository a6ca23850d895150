//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (default) independent work items run on the
//! rayon global pool; without it, or with [`Execution::Sequential`], they run
//! in order on the calling thread. Results are always returned in index order,
//! so outputs do not depend on the execution mode.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
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

pub fn try_map_indexed<T, E, F>(exec: Execution, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_indexed(exec, n, f).into_iter().collect()
}

/// Sizes the global worker pool. Must be called before any parallel work;
/// later calls are ignored. `0` keeps the default (logical cores).
pub fn configure_threads(threads: usize) -> crate::Result<()> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    let _ = threads;
    Ok(())
}

pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let p = map_indexed(Execution::Parallel, 100, |i| i * i);
        let s = map_indexed(Execution::Sequential, 100, |i| i * i);
        assert_eq!(p, s);
    }

    #[test]
    fn first_error_in_index_order() {
        let r: Result<Vec<usize>, usize> =
            try_map_indexed(Execution::Parallel, 10, |i| if i % 4 == 3 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(3));
    }
}
