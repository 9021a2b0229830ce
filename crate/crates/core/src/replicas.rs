//! Independent replicas over seeds, in parallel when the `parallel` feature
//! is on. Results always come back in seed order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Parallel,
    Sequential,
}

pub fn map_seeds<T, F>(seeds: &[u64], mode: Mode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            seeds.par_iter().map(|&s| f(s)).collect()
        }
        _ => seeds.iter().map(|&s| f(s)).collect(),
    }
}

/// Seeds `base, base + 1, …` for `count` replicas.
pub fn seed_range(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base.wrapping_add(i)).collect()
}
