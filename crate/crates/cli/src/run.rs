//! Worker pool for computing `f(n)` over a range of orders.
//!
//! Workers pull orders from a shared counter and send results back over a
//! channel. The calling thread is the only writer: it hands each fresh result
//! to the store callback as it arrives and emits rows strictly in order of `n`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use farey_core::counting::Sieve;
use farey_core::scanner::{self, merge_witnesses, plan_chunks, scan_chunk, upper_bound};
use farey_core::{FResult, FareyOrder};
use thiserror::Error;

use crate::cache::CacheError;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] farey_core::Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

/// `f(n)` with its chunks scanned on `parts` threads. Bit-identical to the
/// sequential scan.
pub fn f_of_n_split(n: FareyOrder, parts: u64) -> Result<FResult, farey_core::Error> {
    let n = FareyOrder::for_threshold(n.get())?;
    let sieve = Sieve::new(n.get())?;
    let chunks = plan_chunks(n, parts, &sieve);
    let ceiling = upper_bound(n.get()) + 1;
    let found = thread::scope(|s| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|c| s.spawn(move || scan_chunk(n, c, ceiling)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let witness = merge_witnesses(found.into_iter().flatten())
        .ok_or(farey_core::Error::NoBadPair { n: n.get() })?;
    Ok(FResult {
        n: n.get(),
        f: witness.distance() - 1,
        witness,
        elapsed_millis: 0,
    })
}

/// Computes `f(n)` and records the wall time.
pub fn timed_f(n: u64, split: u64) -> Result<FResult, farey_core::Error> {
    let start = Instant::now();
    let order = FareyOrder::for_threshold(n)?;
    let mut r = if split > 1 {
        f_of_n_split(order, split)?
    } else {
        scanner::f_of_n(order)?
    };
    r.elapsed_millis = start.elapsed().as_millis() as u64;
    Ok(r)
}

/// Produces `f(n)` for every `n` in `orders`.
///
/// Orders present in `cached` are not recomputed. `store` sees each newly
/// computed result in completion order; `emit` sees every result in
/// ascending `n`.
pub fn run_orders<S, E>(
    orders: RangeInclusive<u64>,
    jobs: usize,
    split: u64,
    cached: &BTreeMap<u64, FResult>,
    mut store: S,
    mut emit: E,
) -> Result<(), RunError>
where
    S: FnMut(&FResult) -> Result<(), RunError>,
    E: FnMut(&FResult) -> Result<(), RunError>,
{
    let pending: Vec<u64> = orders.clone().filter(|n| !cached.contains_key(n)).collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();

    thread::scope(|s| {
        let workers = jobs.max(1).min(pending.len());
        for _ in 0..workers {
            let tx = tx.clone();
            let (pending, next) = (&pending, &next);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&n) = pending.get(i) else { break };
                if tx.send((n, timed_f(n, split))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut cursor = *orders.start();
        let end = *orders.end();
        let mut ready: BTreeMap<u64, FResult> = BTreeMap::new();
        let mut flush = |ready: &mut BTreeMap<u64, FResult>, cursor: &mut u64| {
            while *cursor <= end {
                let r = match cached.get(cursor) {
                    Some(r) => *r,
                    None => match ready.remove(cursor) {
                        Some(r) => r,
                        None => break,
                    },
                };
                emit(&r)?;
                *cursor += 1;
            }
            Ok::<(), RunError>(())
        };

        flush(&mut ready, &mut cursor)?;
        for (n, result) in rx {
            let result = result?;
            store(&result)?;
            ready.insert(n, result);
            flush(&mut ready, &mut cursor)?;
        }
        Ok(())
    })
}
