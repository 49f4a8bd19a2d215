//! Data-parallel helpers.
//!
//! Every grid sweep, lattice scan and Monte Carlo batch in the crate goes
//! through [`map_range`]. With the `parallel` feature (on by default) the work
//! is spread over the rayon pool; without it, or when [`Exec::Sequential`] is
//! requested explicitly, the same closure runs in a plain loop. Results are
//! always returned in index order so both paths produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for index-parallel work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy will actually use worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Evaluates `f(i)` for `i in 0..n` and collects the results in order.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel && n > 64 {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Evaluates `f` on each element of `items`, preserving order.
pub fn map_slice<S, T, F>(exec: Exec, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_range(exec, items.len(), |i| f(&items[i]))
}

/// Order-independent maximum of `f(i)` over `0..n`; `f64::NEG_INFINITY` when empty.
pub fn max_range<F>(exec: Exec, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_range(exec, n, f)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let a = map_range(Exec::Sequential, 1000, |i| (i as f64).sqrt());
        let b = map_range(Exec::Parallel, 1000, |i| (i as f64).sqrt());
        assert_eq!(a, b);
        assert_eq!(max_range(Exec::Parallel, 0, |_| 1.0), f64::NEG_INFINITY);
    }
}
