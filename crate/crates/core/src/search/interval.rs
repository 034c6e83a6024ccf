//! Minimum-Ω search inside a single interval (n², (n+1)²).

use crate::arith::{is_prime, omega_up_to, FactorConfig, FactorError, OmegaBound};

/// The open interval between two consecutive squares, indexed by `n`.
///
/// Its integer points are `n²+1, …, (n+1)²−1`; there are exactly `2n` of
/// them, and they coincide with the sieve window `(n², n²+2n]` shifted to
/// exclude the right square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalSpec {
    n: u64,
    lo: u128,
    hi: u128,
}

impl IntervalSpec {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "interval index must be positive");
        let m = u128::from(n);
        IntervalSpec { n, lo: m * m, hi: (m + 1) * (m + 1) }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Left endpoint `n²` (excluded from the window).
    pub fn lo(&self) -> u128 {
        self.lo
    }

    /// Right endpoint `(n+1)²` (excluded from the window).
    pub fn hi(&self) -> u128 {
        self.hi
    }

    /// Number of integers strictly between the squares: `2n`.
    pub fn len(&self) -> u64 {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        false // 2n ≥ 2 for every valid index
    }

    /// True when `a` lies strictly between the squares.
    pub fn contains(&self, a: u128) -> bool {
        self.lo < a && a < self.hi
    }

    /// The integers of the window in increasing order.
    pub fn candidates(&self) -> impl Iterator<Item = u128> {
        (self.lo + 1)..self.hi
    }
}

/// Scans the window in ascending order for the first integer with
/// Ω ≤ `cutoff`. For `cutoff == 1` a 2·3·5 wheel discards integers with an
/// obvious second factor before the primality test runs.
pub(crate) fn scan_pass(
    spec: &IntervalSpec,
    cutoff: u32,
    config: &FactorConfig,
) -> Result<Option<u128>, FactorError> {
    if cutoff == 1 {
        for a in spec.candidates() {
            if a > 5 && (a % 2 == 0 || a % 3 == 0 || a % 5 == 0) {
                continue; // a = b·c with b ∈ {2,3,5} and c > 1, so Ω ≥ 2
            }
            if is_prime(a) {
                return Ok(Some(a));
            }
        }
        return Ok(None);
    }
    for a in spec.candidates() {
        if let OmegaBound::Exact(w) = omega_up_to(a, cutoff, config)? {
            if w <= cutoff {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}

/// Finds the minimum of Ω over the open interval (n², (n+1)²) together
/// with the smallest integer attaining it.
///
/// Runs one ascending scan per candidate minimum: the pass at cutoff `k`
/// only starts after the pass at `k−1` proved the interval holds nothing
/// with Ω < k, so the first hit is exact and ties resolve to the smallest
/// witness.
pub fn min_omega_in_interval(n: u64) -> Result<(u128, u32), FactorError> {
    min_omega_with_config(n, &FactorConfig::default())
}

pub fn min_omega_with_config(
    n: u64,
    config: &FactorConfig,
) -> Result<(u128, u32), FactorError> {
    let spec = IntervalSpec::new(n);
    let max_k = 128 - spec.hi.leading_zeros(); // Ω(a) ≤ log₂ a
    for k in 1..=max_k {
        if let Some(a) = scan_pass(&spec, k, config)? {
            return Ok((a, k));
        }
    }
    unreachable!("every integer ≥ 2 has Ω ≤ log₂ of itself")
}

/// Finds the smallest integer in (n², (n+1)²) with Ω ≤ k, if any.
///
/// Each candidate is abandoned as soon as its partial factor count
/// provably exceeds `k`, so hard cofactors are only split when the verdict
/// genuinely depends on them.
pub fn find_almost_prime(n: u64, k: u32) -> Result<Option<u128>, FactorError> {
    assert!(k >= 1, "the factor-count threshold must be positive");
    let spec = IntervalSpec::new(n);
    scan_pass(&spec, k, &FactorConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::omega_exact;

    #[test]
    fn interval_geometry() {
        let s = IntervalSpec::new(10);
        assert_eq!(s.lo(), 100);
        assert_eq!(s.hi(), 121);
        assert_eq!(s.len(), 20);
        assert!(s.contains(101) && s.contains(120));
        assert!(!s.contains(100) && !s.contains(121));
        assert_eq!(s.candidates().count(), 20);
    }

    #[test]
    fn smallest_cases() {
        assert_eq!(min_omega_in_interval(1).unwrap(), (2, 1));
        assert_eq!(min_omega_in_interval(2).unwrap(), (5, 1));
    }

    #[test]
    fn million_interval_contains_a_prime() {
        let (a, omega) = min_omega_in_interval(1_000_000).unwrap();
        assert_eq!(omega, 1);
        assert!(a > 1_000_000_000_000u128 && a < 1_000_002_000_001u128);
        assert!(is_prime(a));
    }

    #[test]
    fn almost_prime_examples() {
        assert_eq!(find_almost_prime(3, 1).unwrap(), Some(11));
        assert_eq!(find_almost_prime(4, 2).unwrap(), Some(17));
        assert_eq!(find_almost_prime(1, 4).unwrap(), Some(2));
    }

    #[test]
    fn matches_brute_force_minimum_and_tie_break() {
        for n in 1..=200u64 {
            let spec = IntervalSpec::new(n);
            let mut best: Option<(u128, u32)> = None;
            for a in spec.candidates() {
                let w = omega_exact(a);
                if best.map_or(true, |(_, bw)| w < bw) {
                    best = Some((a, w));
                }
            }
            assert_eq!(min_omega_in_interval(n).unwrap(), best.unwrap(), "n = {n}");
        }
    }

    #[test]
    fn witness_exists_iff_minimum_at_most_k() {
        for n in [1u64, 2, 7, 31, 100, 999, 4096, 10_000] {
            let (_, min_w) = min_omega_in_interval(n).unwrap();
            for k in 1..=4 {
                let found = find_almost_prime(n, k).unwrap();
                assert_eq!(found.is_some(), min_w <= k, "n = {n}, k = {k}");
                if let Some(a) = found {
                    assert!(IntervalSpec::new(n).contains(a));
                    assert!(omega_exact(a) <= k);
                }
            }
        }
    }
}
