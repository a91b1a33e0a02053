//! Order-preserving data parallelism with a sequential fallback.
//!
//! With the `parallel` feature, [`Exec::Parallel`] runs on the rayon pool;
//! without it every mode runs sequentially. Results are always returned in
//! input order, so output never depends on scheduling.

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
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

impl Exec {
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            _ => items.into_iter().map(f).collect(),
        }
    }
}

/// Sizes the global pool; a no-op without the `parallel` feature or when the
/// pool already exists.
pub fn set_jobs(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(v.clone(), |x| x * x);
        let b = Exec::Parallel.map(v, |x| x * x);
        assert_eq!(a, b);
    }
}
