//! Parallel range scanning with output in increasing `d` for any job count.
//!
//! The range is cut into blocks of [`BLOCK_WIDTH`]; a window of blocks is
//! scanned in parallel, then drained into the sink in block order before the
//! next window starts. Memory stays proportional to the window.

use std::num::NonZeroUsize;

use caliber_core::scan::{scan_block, ScanContext};
use caliber_core::{ScanFilter, ScanRecord};
use rayon::prelude::*;

use crate::RunError;

pub const BLOCK_WIDTH: i64 = 1 << 12;

/// Blocks in flight per worker.
const WINDOW_PER_JOB: usize = 4;

/// `CALIBER_JOBS` is read by the CLI; library callers pass `jobs` explicitly.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

pub(crate) fn pool(jobs: usize) -> Result<rayon::ThreadPool, RunError> {
    if jobs == 0 {
        return Err(RunError::ZeroJobs);
    }
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

pub(crate) fn check_range(lo: i64, hi: i64) -> Result<(), RunError> {
    use caliber_core::{scan::SCAN_MAX_D, Error};
    if lo < 2 || lo > hi {
        return Err(Error::OutOfRange {
            what: "range lower bound",
            value: lo as i128,
        }
        .into());
    }
    if hi > SCAN_MAX_D {
        return Err(Error::OutOfRange {
            what: "range upper bound",
            value: hi as i128,
        }
        .into());
    }
    Ok(())
}

pub(crate) fn blocks(lo: i64, hi: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + BLOCK_WIDTH - 1).min(hi);
        out.push((start, end));
        start = end + 1;
    }
    out
}

/// Feeds every record for square-free `d ∈ [lo, hi]` passing `filter` to
/// `sink`, in increasing `d`. Returns the number of records.
pub fn scan_range(
    lo: i64,
    hi: i64,
    filter: &ScanFilter,
    jobs: usize,
    mut sink: impl FnMut(&ScanRecord) -> Result<(), RunError>,
) -> Result<u64, RunError> {
    check_range(lo, hi)?;
    let pool = pool(jobs)?;
    let ctx = ScanContext::new(hi)?;
    let mut emitted = 0;
    for window in blocks(lo, hi).chunks(jobs * WINDOW_PER_JOB) {
        let results: Vec<_> = pool.install(|| {
            window
                .par_iter()
                .map(|&(a, b)| scan_block(a, b, filter, &ctx))
                .collect()
        });
        for block in results {
            for record in block? {
                sink(&record)?;
                emitted += 1;
            }
        }
    }
    Ok(emitted)
}

/// [`scan_range`] collected into memory.
pub fn scan_range_vec(
    lo: i64,
    hi: i64,
    filter: &ScanFilter,
    jobs: usize,
) -> Result<Vec<ScanRecord>, RunError> {
    let mut out = Vec::new();
    scan_range(lo, hi, filter, jobs, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}
