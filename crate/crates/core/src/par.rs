//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] fans work out over
//! the rayon pool. Without it every strategy runs sequentially. Results are
//! always collected in input order and reductions are done sequentially on
//! the collected values, so output is bit-identical across strategies and
//! thread counts.

/// Execution strategy for batch evaluations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy actually runs on the thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Order-preserving fallible map; the first error in input order wins.
pub fn try_map<T, R, E, F>(exec: Exec, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(exec, items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.37).collect();
        let seq = map(Exec::Sequential, &xs, |x| x.sin());
        let par = map(Exec::Parallel, &xs, |x| x.sin());
        assert_eq!(seq, par);
        let r = map_range(Exec::Parallel, 5, |i| i * i);
        assert_eq!(r, vec![0, 1, 4, 9, 16]);
    }

    #[test]
    fn try_map_reports_first_error() {
        let xs = [1, 2, 3, 4];
        let r: Result<Vec<i32>, i32> =
            try_map(
                Exec::Parallel,
                &xs,
                |&x| if x >= 3 { Err(x) } else { Ok(x) },
            );
        assert_eq!(r, Err(3));
    }
}
