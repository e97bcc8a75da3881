//! Data-parallel map helpers. With the `parallel` feature (default) the
//! maps run on rayon; without it they fall back to plain sequential
//! iteration. Results always come back in input order, so downstream
//! reductions are deterministic regardless of thread count.

/// How many worker threads corpus-level operations may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Jobs {
    /// Plain sequential iteration on the calling thread.
    Sequential,
    /// The default rayon pool (or sequential without the `parallel` feature).
    Auto,
    /// A dedicated pool with exactly this many threads.
    Threads(usize),
}

impl Jobs {
    /// Parses a `--jobs` style count: 1 means sequential, 0 means auto.
    pub fn from_count(n: usize) -> Jobs {
        match n {
            0 => Jobs::Auto,
            1 => Jobs::Sequential,
            n => Jobs::Threads(n),
        }
    }
}

impl Default for Jobs {
    fn default() -> Self {
        Jobs::Auto
    }
}

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(jobs: Jobs, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match jobs {
        Jobs::Sequential => items.iter().map(f).collect(),
        Jobs::Auto => items.par_iter().map(f).collect(),
        Jobs::Threads(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("failed to build thread pool");
            pool.install(|| items.par_iter().map(f).collect())
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(_jobs: Jobs, items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_modes_agree_and_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_ordered(Jobs::Sequential, &items, |x| x * 3 + 1);
        let auto = map_ordered(Jobs::Auto, &items, |x| x * 3 + 1);
        let two = map_ordered(Jobs::from_count(2), &items, |x| x * 3 + 1);
        assert_eq!(seq, auto);
        assert_eq!(seq, two);
        assert_eq!(seq[10], 31);
    }
}
