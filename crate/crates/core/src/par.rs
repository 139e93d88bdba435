//! Data-parallel map over a slice. Work runs on the rayon pool when the
//! `parallel` feature is compiled in and the caller asks for it; otherwise
//! it runs sequentially. Output order always matches input order.

/// Whether this build can run work on a thread pool.
pub const PARALLEL: bool = cfg!(feature = "parallel");

pub fn par_map<T: Sync, R: Send>(parallel: bool, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}
