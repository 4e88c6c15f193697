//! Term-level data parallelism with a sequential fallback.
//!
//! With the `parallel` feature the mode can be switched at runtime, which is
//! what the benches use to compare both paths on the same build.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

static MODE: AtomicU8 = AtomicU8::new(1);

pub fn set_parallelism(p: Parallelism) {
    MODE.store(matches!(p, Parallelism::Parallel) as u8, Ordering::Relaxed);
}

pub fn parallelism() -> Parallelism {
    if cfg!(feature = "parallel") && MODE.load(Ordering::Relaxed) == 1 {
        Parallelism::Parallel
    } else {
        Parallelism::Sequential
    }
}

/// `items.iter().map(f).collect()`, in parallel when enabled. Output order
/// matches input order either way.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallelism() == Parallelism::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let xs: Vec<u64> = (0..1000).collect();
        let ys = map(&xs, |x| x * x);
        assert_eq!(ys[999], 999 * 999);
        assert!(ys.windows(2).all(|w| w[0] < w[1]));
    }
}
