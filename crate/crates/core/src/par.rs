//! Data-parallel helpers with a sequential fallback.
//!
//! Every exhaustive check in the crate funnels through these functions. With
//! the `parallel` feature (default) [`Exec::Parallel`] dispatches to rayon;
//! without it both variants run the same sequential loop.

/// Execution strategy for exhaustive loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

pub fn map_range<U, F>(exec: Exec, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

pub fn all<T, F>(exec: Exec, items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().all(f),
        _ => items.iter().all(f),
    }
}

/// Smallest index in `0..n` for which `f` returns `Some`, with its value.
/// Deterministic regardless of strategy.
pub fn find_first_range<U, F>(exec: Exec, n: usize, f: F) -> Option<(usize, U)>
where
    U: Send,
    F: Fn(usize) -> Option<U> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n)
            .into_par_iter()
            .filter_map(|i| f(i).map(|u| (i, u)))
            .min_by_key(|(i, _)| *i),
        _ => (0..n).find_map(|i| f(i).map(|u| (i, u))),
    }
}

/// Every index in `0..n` for which `f` returns `Some`, in index order.
pub fn filter_map_range<U, F>(exec: Exec, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> Option<U> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().filter_map(f).collect(),
        _ => (0..n).filter_map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(map_range(exec, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(
                find_first_range(exec, 100, |i| (i % 7 == 6).then_some(i)),
                Some((6, 6))
            );
            assert_eq!(
                filter_map_range(exec, 10, |i| (i % 3 == 0).then_some(i)),
                vec![0, 3, 6, 9]
            );
            assert!(all(exec, &[2, 4, 6], |x| x % 2 == 0));
        }
    }
}
