//! Minimal parallel-for machinery: dynamically scheduled index chunks over a
//! fixed set of worker threads, plus an atomic f64 built on `AtomicU64`.
//!
//! Vertex loops in the engine follow the same pattern: grab the next chunk of
//! indices from a shared counter, process it with per-thread scratch state,
//! repeat until the range is exhausted. With one worker the loop runs inline
//! on the calling thread and chunks are visited in order, which makes
//! single-threaded runs bit-reproducible.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

/// An `f64` with atomic load/store/add/CAS, stored as raw bits in an
/// `AtomicU64`. Ordering is `Relaxed` throughout; community weights tolerate
/// stale reads.
#[derive(Debug)]
pub struct AtomicF64(AtomicU64);

impl AtomicF64 {
    pub fn new(value: f64) -> Self {
        AtomicF64(AtomicU64::new(value.to_bits()))
    }

    #[inline]
    pub fn load(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    #[inline]
    pub fn store(&self, value: f64) {
        self.0.store(value.to_bits(), Ordering::Relaxed);
    }

    #[inline]
    pub fn fetch_add(&self, delta: f64) -> f64 {
        let mut current = self.0.load(Ordering::Relaxed);
        loop {
            let next = (f64::from_bits(current) + delta).to_bits();
            match self
                .0
                .compare_exchange_weak(current, next, Ordering::Relaxed, Ordering::Relaxed)
            {
                Ok(prev) => return f64::from_bits(prev),
                Err(observed) => current = observed,
            }
        }
    }

    #[inline]
    pub fn fetch_sub(&self, delta: f64) -> f64 {
        self.fetch_add(-delta)
    }

    /// Bitwise compare-and-swap: replaces `expected` with `new` only if the
    /// stored bits equal `expected` exactly. Returns true on success.
    #[inline]
    pub fn compare_exchange(&self, expected: f64, new: f64) -> bool {
        self.0
            .compare_exchange(
                expected.to_bits(),
                new.to_bits(),
                Ordering::Relaxed,
                Ordering::Relaxed,
            )
            .is_ok()
    }
}

impl Clone for AtomicF64 {
    fn clone(&self) -> Self {
        AtomicF64::new(self.load())
    }
}

/// Runs `body` over `0..len` in chunks of `chunk`, one worker per scratch
/// slot. Chunks are handed out dynamically from a shared counter; each worker
/// keeps exclusive access to its scratch value for the whole loop.
pub fn parallel_for_chunks<S, F>(len: usize, chunk: usize, scratch: &mut [S], body: F)
where
    S: Send,
    F: Fn(&mut S, Range<usize>) + Sync,
{
    assert!(chunk > 0, "chunk size must be positive");
    assert!(!scratch.is_empty(), "need at least one worker slot");
    if len == 0 {
        return;
    }
    if scratch.len() == 1 || len <= chunk {
        let state = &mut scratch[0];
        let mut start = 0;
        while start < len {
            let end = (start + chunk).min(len);
            body(state, start..end);
            start = end;
        }
        return;
    }
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for state in scratch.iter_mut() {
            scope.spawn(|| loop {
                let start = cursor.fetch_add(chunk, Ordering::Relaxed);
                if start >= len {
                    break;
                }
                let end = (start + chunk).min(len);
                body(state, start..end);
            });
        }
    });
}

/// Splits `0..len` into `parts` near-equal contiguous ranges.
pub fn ownership_ranges(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1);
    let per = len.div_ceil(parts).max(1);
    let mut ranges = Vec::with_capacity(parts);
    let mut start = 0;
    while start < len {
        let end = (start + per).min(len);
        ranges.push(start..end);
        start = end;
    }
    if ranges.is_empty() {
        ranges.push(0..0);
    }
    ranges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_f64_add_and_cas() {
        let v = AtomicF64::new(1.5);
        assert_eq!(v.fetch_add(2.0), 1.5);
        assert_eq!(v.load(), 3.5);
        assert!(v.compare_exchange(3.5, 0.0));
        assert!(!v.compare_exchange(3.5, 1.0));
        assert_eq!(v.load(), 0.0);
    }

    #[test]
    fn parallel_for_visits_every_index_once() {
        let n = 10_000;
        let hits: Vec<AtomicUsize> = (0..n).map(|_| AtomicUsize::new(0)).collect();
        let mut scratch = vec![(); 4];
        parallel_for_chunks(n, 64, &mut scratch, |_, range| {
            for i in range {
                hits[i].fetch_add(1, Ordering::Relaxed);
            }
        });
        assert!(hits.iter().all(|h| h.load(Ordering::Relaxed) == 1));
    }

    #[test]
    fn single_worker_runs_in_order() {
        let mut seen = vec![Vec::new()];
        parallel_for_chunks(10, 3, &mut seen, |acc, range| acc.extend(range));
        assert_eq!(seen[0], (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn ownership_ranges_cover_everything() {
        let ranges = ownership_ranges(11, 4);
        let total: usize = ranges.iter().map(|r| r.len()).sum();
        assert_eq!(total, 11);
        assert_eq!(ranges[0].start, 0);
        assert_eq!(ranges.last().unwrap().end, 11);
    }
}
