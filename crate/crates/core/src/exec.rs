//! Scheduling of independent Monte Carlo tasks.
//!
//! Library routines cut their work into fixed-size chunks, hand each chunk to
//! an [`Executor`] and merge the partial results in chunk order. Chunk
//! boundaries and random streams depend only on the problem size, so the
//! output is identical whether the chunks run serially or on a thread pool.

use alloc::vec::Vec;
use core::ops::Range;

/// Runs `tasks` independent closures and returns their results in task order.
pub trait Executor: Sync {
    fn run<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every task on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl Executor for Serial {
    fn run<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..tasks).map(f).collect()
    }
}

/// Default number of Monte Carlo draws per scheduled chunk.
pub const CHUNK: usize = 2048;

/// Splits `0..total` into consecutive ranges of length `size` (the last may be shorter).
pub fn chunks(total: usize, size: usize) -> Vec<Range<usize>> {
    let size = size.max(1);
    (0..total.div_ceil(size))
        .map(|c| c * size..((c + 1) * size).min(total))
        .collect()
}

/// Maps `f` over the chunks of `0..total` on `exec`, results in chunk order.
pub fn map_chunks<E, T, F>(exec: &E, total: usize, f: F) -> Vec<T>
where
    E: Executor + ?Sized,
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let ranges = chunks(total, CHUNK);
    exec.run(ranges.len(), |c| f(ranges[c].clone()))
}

/// Maps `f` over every index of `0..total`, chunked, results in index order.
pub fn map_indexed<E, T, F>(exec: &E, total: usize, f: F) -> Vec<T>
where
    E: Executor + ?Sized,
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_chunks(exec, total, |r| r.map(&f).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}
