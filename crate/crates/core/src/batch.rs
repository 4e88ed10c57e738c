//! Execution helpers for the brute-force scans used throughout the crate.
//!
//! Subset scans, semicharacter searches and randomized batch checks are all
//! embarrassingly parallel, so the hot operations accept an [`ExecMode`].
//! With the `parallel` feature (the default) `ExecMode::auto()` runs on the
//! rayon thread pool; without it everything degrades to plain iterators.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Rayon-backed when the `parallel` feature is enabled, otherwise
    /// identical to `Sequential`.
    Parallel,
}

impl ExecMode {
    pub fn auto() -> Self {
        #[cfg(feature = "parallel")]
        {
            ExecMode::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            ExecMode::Sequential
        }
    }
}

/// Applies `f` to every index in `0..n` and collects the `Some` results,
/// preserving index order.
pub fn filter_map_range<T, F>(n: u64, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..n).filter_map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..n).into_par_iter().filter_map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).filter_map(f).collect()
            }
        }
    }
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<T, U, F>(items: &[T], mode: ExecMode, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.iter().map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.iter().map(f).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: u64| if i % 3 == 0 { Some(i * i) } else { None };
        assert_eq!(
            filter_map_range(100, ExecMode::Sequential, f),
            filter_map_range(100, ExecMode::Parallel, f)
        );
        let xs: Vec<u64> = (0..50).collect();
        assert_eq!(
            map_slice(&xs, ExecMode::Sequential, |x| x + 1),
            map_slice(&xs, ExecMode::Parallel, |x| x + 1)
        );
    }
}
