//! Worker-count control for the data-parallel kernels.
//!
//! Kernels partition work by output row only, so results never depend on
//! how many workers run them.

use crate::error::{Error, Result};

/// Runs `f` on a dedicated pool of `workers` threads, or on the ambient
/// pool when `workers` is `None`.
#[cfg(feature = "parallel")]
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Config("worker count must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == Some(0) {
        return Err(Error::Config("worker count must be positive".into()));
    }
    Ok(f())
}

/// Applies `op(row_index, row)` to every `width`-sized chunk of `out`.
#[cfg(feature = "parallel")]
pub(crate) fn for_each_row<T, S, I, F>(out: &mut [T], width: usize, init: I, op: F)
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, &mut [T]) + Sync + Send,
{
    use rayon::prelude::*;
    if width == 0 {
        return;
    }
    out.par_chunks_mut(width)
        .enumerate()
        .for_each_init(init, |scratch, (r, row)| op(scratch, r, row));
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn for_each_row<T, S, I, F>(out: &mut [T], width: usize, init: I, op: F)
where
    I: Fn() -> S,
    F: Fn(&mut S, usize, &mut [T]),
{
    if width == 0 {
        return;
    }
    let mut scratch = init();
    for (r, row) in out.chunks_mut(width).enumerate() {
        op(&mut scratch, r, row);
    }
}
