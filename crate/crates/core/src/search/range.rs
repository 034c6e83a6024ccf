//! Bulk verification of every interval index in [n_lo, n_hi), with
//! parallel chunk execution and an append-only, fsync'd checkpoint that
//! makes long runs resumable.
//!
//! Chunks are fixed windows of the index range, so the work partition —
//! and therefore the final report — is independent of thread count,
//! completion order, and interruption points. The checkpoint writer is
//! the only shared state; chunk computation itself is pure.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write as _};
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use super::interval::{scan_pass, IntervalSpec};
use crate::arith::{FactorConfig, FactorError};

/// Indices per checkpoint chunk.
pub const CHUNK_LEN: u64 = 1024;

#[derive(Debug, Error)]
pub enum RangeError {
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
}

/// Aggregated outcome of a range verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeReport {
    pub n_lo: u64,
    pub n_hi: u64,
    /// Largest factor count accepted as a witness.
    pub k_max: u32,
    /// `counts[j]` = number of indices whose interval minimum Ω equals `j+1`.
    pub counts: Vec<u64>,
    /// `(n, min Ω, smallest witness)` with the largest minimum; earliest
    /// index on ties.
    pub worst_case: Option<(u64, u32, u128)>,
    /// Indices with no witness at Ω ≤ k_max. Expected empty; any entry is
    /// the headline result.
    pub failures: Vec<u64>,
    /// Next index not covered by the verified prefix (`n_hi` on completion).
    pub cursor: u64,
}

impl RangeReport {
    /// Counts plus failures must account for every index exactly once.
    pub fn is_complete(&self) -> bool {
        let total: u64 = self.counts.iter().sum::<u64>() + self.failures.len() as u64;
        total == self.n_hi - self.n_lo && self.cursor == self.n_hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ChunkResult {
    start: u64,
    end: u64,
    counts: Vec<u64>,
    worst: Option<(u64, u32, u128)>,
    failures: Vec<u64>,
}

/// Verifies that every index in `[n_lo, n_hi)` admits a witness with
/// Ω ≤ k, aggregating minimum-Ω statistics.
///
/// When `checkpoint_path` is given, finished chunks found in the file are
/// reused and every newly finished chunk is appended and fsync'd, so an
/// interrupted run resumed with the same arguments produces an identical
/// report.
pub fn verify_range(
    n_lo: u64,
    n_hi: u64,
    k: u32,
    checkpoint_path: Option<&Path>,
) -> Result<RangeReport, RangeError> {
    assert!(n_lo >= 1 && n_lo < n_hi, "need 1 <= n_lo < n_hi");
    assert!(k >= 1);

    let mut done: BTreeMap<u64, ChunkResult> = BTreeMap::new();
    if let Some(path) = checkpoint_path {
        if path.exists() {
            done = read_checkpoint(path, n_lo, n_hi, k)?;
        }
    }

    let todo: Vec<(u64, u64)> = chunk_bounds(n_lo, n_hi)
        .filter(|(start, _)| !done.contains_key(start))
        .collect();

    let writer = match checkpoint_path {
        Some(path) => Some(Mutex::new(
            OpenOptions::new().create(true).append(true).open(path)?,
        )),
        None => None,
    };

    let config = FactorConfig::default();
    let fresh: Vec<ChunkResult> = todo
        .par_iter()
        .map(|&(start, end)| {
            let chunk = compute_chunk(start, end, k, &config)?;
            if let Some(w) = &writer {
                let mut file = w.lock().expect("checkpoint writer poisoned");
                file.write_all(render_chunk(&chunk).as_bytes())
                    .and_then(|_| file.sync_data())
                    .map_err(RangeError::Io)?;
            }
            Ok(chunk)
        })
        .collect::<Result<_, RangeError>>()?;

    for chunk in fresh {
        done.insert(chunk.start, chunk);
    }
    Ok(merge(n_lo, n_hi, k, &done))
}

fn chunk_bounds(n_lo: u64, n_hi: u64) -> impl Iterator<Item = (u64, u64)> {
    (n_lo..n_hi)
        .step_by(CHUNK_LEN as usize)
        .map(move |start| (start, n_hi.min(start + CHUNK_LEN)))
}

fn compute_chunk(
    start: u64,
    end: u64,
    k: u32,
    config: &FactorConfig,
) -> Result<ChunkResult, RangeError> {
    let mut counts = vec![0u64; k as usize];
    let mut worst: Option<(u64, u32, u128)> = None;
    let mut failures = Vec::new();
    for n in start..end {
        let spec = IntervalSpec::new(n);
        let mut found = None;
        for cutoff in 1..=k {
            if let Some(a) = scan_pass(&spec, cutoff, config)? {
                found = Some((a, cutoff));
                break;
            }
        }
        match found {
            Some((a, w)) => {
                counts[(w - 1) as usize] += 1;
                if worst.map_or(true, |(_, bw, _)| w > bw) {
                    worst = Some((n, w, a));
                }
            }
            None => failures.push(n),
        }
    }
    Ok(ChunkResult { start, end, counts, worst, failures })
}

fn merge(n_lo: u64, n_hi: u64, k: u32, done: &BTreeMap<u64, ChunkResult>) -> RangeReport {
    let mut counts = vec![0u64; k as usize];
    let mut worst: Option<(u64, u32, u128)> = None;
    let mut failures = Vec::new();
    let mut cursor = n_lo;
    for chunk in done.values() {
        for (total, c) in counts.iter_mut().zip(&chunk.counts) {
            *total += c;
        }
        if let Some((n, w, a)) = chunk.worst {
            // ascending chunk order and per-chunk earliest index make a
            // strict comparison keep the first occurrence
            if worst.map_or(true, |(_, bw, _)| w > bw) {
                worst = Some((n, w, a));
            }
        }
        failures.extend_from_slice(&chunk.failures);
        if chunk.start == cursor {
            cursor = chunk.end;
        }
    }
    RangeReport { n_lo, n_hi, k_max: k, counts, worst_case: worst, failures, cursor }
}

fn render_chunk(chunk: &ChunkResult) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    for &n in &chunk.failures {
        writeln!(out, "FAILURE {n}").unwrap();
    }
    let (wn, ww, wa) = chunk.worst.unwrap_or((0, 0, 0));
    write!(out, "{} {}", chunk.start, chunk.end).unwrap();
    for c in &chunk.counts {
        write!(out, " {c}").unwrap();
    }
    writeln!(out, " {wn} {ww} {wa}").unwrap();
    out
}

/// Reads back the chunk records that match the current grid: correct
/// alignment, correct column count, bounds inside [n_lo, n_hi). Records
/// from runs with other parameters are ignored, which simply causes their
/// chunks to be recomputed.
fn read_checkpoint(
    path: &Path,
    n_lo: u64,
    n_hi: u64,
    k: u32,
) -> Result<BTreeMap<u64, ChunkResult>, RangeError> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut chunks = BTreeMap::new();
    let mut failed: BTreeSet<u64> = BTreeSet::new();
    for line in reader.lines() {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() == Some(&"FAILURE") {
            if let Some(Ok(n)) = tokens.get(1).map(|t| t.parse()) {
                failed.insert(n);
            }
            continue;
        }
        if tokens.len() != k as usize + 5 {
            continue;
        }
        let nums: Option<Vec<u128>> = tokens.iter().map(|t| t.parse().ok()).collect();
        let Some(nums) = nums else { continue };
        let (start, end) = (nums[0] as u64, nums[1] as u64);
        let aligned = start >= n_lo
            && start < n_hi
            && (start - n_lo) % CHUNK_LEN == 0
            && end == n_hi.min(start + CHUNK_LEN);
        if !aligned {
            continue;
        }
        let counts: Vec<u64> = nums[2..2 + k as usize].iter().map(|&c| c as u64).collect();
        let (wn, ww, wa) = (
            nums[2 + k as usize] as u64,
            nums[3 + k as usize] as u32,
            nums[4 + k as usize],
        );
        let worst = if wa == 0 { None } else { Some((wn, ww, wa)) };
        chunks.insert(start, ChunkResult { start, end, counts, worst, failures: Vec::new() });
    }
    // attach recorded failures to the chunk lines that cover them; hits in
    // uncovered ranges are crash remnants and will be recomputed
    for n in failed {
        let covering = chunks.values_mut().find(|c| c.start <= n && n < c.end);
        if let Some(chunk) = covering {
            chunk.failures.push(n);
        }
    }
    for chunk in chunks.values_mut() {
        chunk.failures.sort_unstable();
        chunk.failures.dedup();
    }
    Ok(chunks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn trivial_range_reports_its_single_interval() {
        let r = verify_range(1, 2, 1, None).unwrap();
        assert_eq!(r.worst_case, Some((1, 1, 2)));
        assert_eq!(r.counts, vec![1]);
        assert!(r.failures.is_empty());
        assert!(r.is_complete());
    }

    #[test]
    fn ten_thousand_all_minima_are_one() {
        let r = verify_range(1, 10_000, 3, None).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(r.counts, vec![9_999, 0, 0]);
        assert_eq!(r.worst_case.map(|(_, w, _)| w), Some(1));
        assert!(r.is_complete());
    }

    #[test]
    fn failure_records_survive_the_checkpoint_round_trip() {
        // No desk-scale range genuinely fails (that is the point of the
        // whole computation), so exercise the failure plumbing through a
        // synthetic checkpoint record: a finished chunk claiming index 34
        // had no witness.
        let dir = tempdir().unwrap();
        let path = dir.path().join("ckpt.txt");
        std::fs::write(&path, "FAILURE 34\n33 35 1 33 1 1091\n").unwrap();
        let r = verify_range(33, 35, 1, Some(&path)).unwrap();
        assert_eq!(r.failures, vec![34]);
        assert_eq!(r.counts, vec![1]);
        assert_eq!(r.worst_case, Some((33, 1, 1091)));
        assert!(r.is_complete());

        // the same range computed honestly has no failures
        let honest = verify_range(33, 35, 1, None).unwrap();
        assert!(honest.failures.is_empty());
        assert_eq!(honest.counts, vec![2]);
    }

    #[test]
    fn resume_matches_uninterrupted_run() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("ckpt.txt");

        // phase 1: only the first half of the range, leaving its chunks
        // in the checkpoint file
        let _ = verify_range(1, 2_000, 2, Some(&path)).unwrap();
        // phase 2: the full range resumes over the same file
        let resumed = verify_range(1, 4_000, 2, Some(&path)).unwrap();
        let oneshot = verify_range(1, 4_000, 2, None).unwrap();
        assert_eq!(resumed, oneshot);

        // and a third run over the finished file recomputes nothing yet
        // still reproduces the report
        let replay = verify_range(1, 4_000, 2, Some(&path)).unwrap();
        assert_eq!(replay, oneshot);
    }

    #[test]
    fn report_is_independent_of_thread_count() {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| verify_range(1, 3_000, 2, None))
            .unwrap();
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| verify_range(1, 3_000, 2, None))
            .unwrap();
        assert_eq!(single, many);
    }

    #[test]
    fn checkpoint_lines_have_the_documented_shape() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("ckpt.txt");
        let _ = verify_range(1, 1_500, 2, Some(&path)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut starts: Vec<u64> = Vec::new();
        for line in text.lines() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(tokens.len(), 7, "start end c1 c2 worst_n worst_w worst_a");
            starts.push(tokens[0].parse().unwrap());
        }
        starts.sort_unstable();
        assert_eq!(starts, vec![1, 1_025]);
    }

    #[test]
    fn foreign_checkpoint_records_are_ignored() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("ckpt.txt");
        // stale lines: wrong alignment, wrong column count, garbage
        std::fs::write(&path, "7 9 1 0 0 0 0\nnot a record\n1 1025 1024 7 3 9\n").unwrap();
        let r = verify_range(1, 1_025, 2, Some(&path)).unwrap();
        let clean = verify_range(1, 1_025, 2, None).unwrap();
        assert_eq!(r, clean);
    }
}
