//! Exact semiprime witnesses: for an index n and a chosen prime p, the
//! rational interval I = (n²/p, (n+1)²/p) contains an integer prime q
//! whenever I is long enough, and then p·q lands strictly between the
//! squares. All inequality checks run in exact integer/rational
//! arithmetic; nothing here rounds.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::is_prime;

/// Outcome of the two exact interval checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessChecks {
    /// |I| = (2n+1)/p exceeds the prime-gap bound.
    pub length_gt_gap_bound: bool,
    /// The right endpoint (n+1)²/p stays below the gap-record range limit.
    pub endpoint_lt_gap_limit: bool,
    /// p·q lies strictly between n² and (n+1)² (only set after a search).
    pub product_in_window: bool,
}

/// A constructed (or partially checked) semiprime witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiprimeWitness {
    pub n: u64,
    pub p: u64,
    /// Least prime in I, present only when a search was performed.
    pub q: Option<u128>,
    /// p·q, present exactly when `q` is.
    pub product: Option<u128>,
    /// Exact endpoints of I = (n²/p, (n+1)²/p).
    pub interval: (BigRational, BigRational),
    pub checks: WitnessChecks,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    /// One of the exact inequality checks failed; names which one.
    #[error("witness check failed: {check} (n = {n}, p = {p})")]
    CheckFailed {
        check: &'static str,
        n: u64,
        p: u64,
    },
    /// The interval was searched exhaustively and held no prime. Given a
    /// passing length check this would contradict the gap-record bound,
    /// so it is surfaced as a hard error rather than an empty result.
    #[error("no prime found in ({lo}, {hi}) — contradicts the gap hypothesis")]
    NoPrimeFound { lo: u128, hi: u128 },
    /// The requested search range exceeds the prime-search budget.
    #[error("prime search endpoint {endpoint} exceeds budget {budget}")]
    SearchBudgetExceeded { endpoint: u128, budget: u128 },
    /// p failed its primality re-check.
    #[error("{p} is not prime")]
    PNotPrime { p: u64 },
}

/// Builds the witness interval for (n, p) and runs its exact checks.
///
/// With `search` unset this only evaluates the two inequalities —
/// mirroring the conditional use of an external gap record, which
/// guarantees a prime in any interval of length > `gap_bound` lying below
/// `gap_limit`. With `search` set, the least prime q ∈ I is located by
/// direct scan and the product p·q is re-verified to sit strictly between
/// the squares.
pub fn semiprime_witness(
    n: u64,
    p: u64,
    gap_bound: u64,
    gap_limit: u128,
    search: bool,
) -> Result<SemiprimeWitness, WitnessError> {
    assert!(n >= 1, "witness index must be positive");
    if !is_prime(u128::from(p)) {
        return Err(WitnessError::PNotPrime { p });
    }

    let n_big = BigUint::from(n);
    let p_big = BigUint::from(p);
    let lo_sq = &n_big * &n_big; // n²
    let hi_sq = (&n_big + 1u32) * (&n_big + 1u32); // (n+1)²

    let interval = (
        ratio(lo_sq.clone(), p_big.clone()),
        ratio(hi_sq.clone(), p_big.clone()),
    );

    // |I| > gap_bound ⟺ 2n+1 > gap_bound·p, exactly.
    let length_ok = BigUint::from(2 * u128::from(n) + 1)
        > BigUint::from(gap_bound) * &p_big;
    // (n+1)²/p < gap_limit ⟺ (n+1)² < gap_limit·p, exactly.
    let endpoint_ok = hi_sq < BigUint::from(gap_limit) * &p_big;

    let mut checks = WitnessChecks {
        length_gt_gap_bound: length_ok,
        endpoint_lt_gap_limit: endpoint_ok,
        product_in_window: false,
    };

    if !length_ok {
        return Err(WitnessError::CheckFailed { check: "length_gt_gap_bound", n, p });
    }
    if !endpoint_ok {
        return Err(WitnessError::CheckFailed { check: "endpoint_lt_gap_limit", n, p });
    }

    let (mut q, mut product) = (None, None);
    if search {
        let found = least_prime_in_interval(n, p)?;
        let prod = u128::from(p) * found;
        // exact window re-check: n² < p·q < (n+1)²
        let n128 = u128::from(n);
        checks.product_in_window = n128 * n128 < prod && prod < (n128 + 1) * (n128 + 1);
        if !checks.product_in_window {
            return Err(WitnessError::CheckFailed { check: "product_in_window", n, p });
        }
        q = Some(found);
        product = Some(prod);
    }

    Ok(SemiprimeWitness { n, p, q, product, interval, checks })
}

/// Budget on the right endpoint of a searched interval, sized so the scan
/// stays in comfortably testable territory.
pub const PRIME_SEARCH_BUDGET: u128 = 100_000_000_000_000;

fn least_prime_in_interval(n: u64, p: u64) -> Result<u128, WitnessError> {
    let n = u128::from(n);
    let p = u128::from(p);
    let lo_sq = n * n;
    let hi_sq = (n + 1) * (n + 1);
    // least integer strictly above n²/p and greatest strictly below (n+1)²/p
    let first = lo_sq / p + 1;
    let last = hi_sq.div_ceil(p) - 1;
    if last > PRIME_SEARCH_BUDGET {
        return Err(WitnessError::SearchBudgetExceeded {
            endpoint: last,
            budget: PRIME_SEARCH_BUDGET,
        });
    }
    for m in first..=last {
        if is_prime(m) {
            return Ok(m);
        }
    }
    Err(WitnessError::NoPrimeFound { lo: first, hi: last })
}

/// Decides, in exact integer arithmetic, whether
/// `(N + 2·√N + 1) / p < limit`, i.e. whether the right endpoint stays
/// below the limit for every index n with n² ≤ N (since then
/// (n+1)² ≤ (√N + 1)² = N + 2√N + 1, with √N real).
pub fn sup_endpoint_lt_limit(n_cap: &BigUint, p: u64, limit: u128) -> bool {
    // N + 2√N + 1 < L·p ⟺ 2√N < L·p − N − 1 ⟺ (t positive and) 4N < t²
    let lp = BigInt::from(BigUint::from(limit) * BigUint::from(p));
    let t = lp - BigInt::from(n_cap.clone()) - BigInt::one();
    if t <= BigInt::zero() {
        return false;
    }
    let t = t.to_biguint().expect("positive by the guard above");
    BigUint::from(4u32) * n_cap < &t * &t
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
