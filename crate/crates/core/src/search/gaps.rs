//! Maximal prime-gap scanning on a streaming sieve.

use crate::arith::segmented_primes;

/// Largest gap between consecutive primes whose starting prime is below
/// `x`, together with the first starting prime attaining it.
///
/// The successor prime may itself lie at or above `x`; only the start of
/// the gap is constrained. Ties keep the earliest occurrence.
pub fn max_gap_below(x: u64) -> (u64, u64) {
    assert!(x >= 5, "need at least the primes 2 and 3 below x");
    let mut best_gap = 0u64;
    let mut best_start = 0u64;
    let mut prev: Option<u64> = None;

    // Sieve beyond x so the successor of the last qualifying start is
    // seen; widen (rarely) if a record gap spans the margin.
    let mut margin = 3_000u64;
    loop {
        let hi = x.saturating_add(margin);
        for p in segmented_primes(2, hi, 0) {
            if let Some(q) = prev {
                if q >= x {
                    return (best_gap, best_start);
                }
                let gap = p - q;
                if gap > best_gap {
                    best_gap = gap;
                    best_start = q;
                }
            }
            prev = Some(p);
        }
        match prev {
            Some(q) if q >= x => return (best_gap, best_start),
            _ => {
                // no prime at or past x yet: the tail gap is still open
                prev = None;
                best_gap = 0;
                best_start = 0;
                margin = margin.saturating_mul(4);
            }
        }
    }
}
