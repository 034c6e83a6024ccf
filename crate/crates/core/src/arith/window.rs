//! A materialized window of primes for repeated indexed access.

use super::primality::is_prime;
use super::sieve::segmented_primes;

/// The primes in `[lo, hi)`, held in memory in increasing order. Used where
/// an algorithm needs random access or repeated passes (the direct Mertens
/// verification, prefix products over prime boundaries), in contrast to the
/// streaming sieve.
#[derive(Clone, Debug)]
pub struct PrimeWindow {
    lo: u64,
    hi: u64,
    primes: Vec<u64>,
}

impl PrimeWindow {
    /// Sieves and stores every prime in `[lo, hi)`.
    pub fn new(lo: u64, hi: u64) -> Self {
        let primes: Vec<u64> = segmented_primes(lo, hi, 0).collect();
        PrimeWindow { lo, hi, primes }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    /// Index of the first prime ≥ `x`, i.e. the insertion point of `x`.
    pub fn partition_point(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p < x)
    }

    /// Validates the structural invariants: strict increase, and primality
    /// of a deterministic pseudo-random sample of `samples` members.
    pub fn validate(&self, samples: usize) -> bool {
        if !self.primes.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        if self.primes.is_empty() {
            return true;
        }
        // xorshift64* — cheap deterministic sampling, no RNG dependency
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        for _ in 0..samples {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let idx = (state % self.primes.len() as u64) as usize;
            let p = self.primes[idx];
            if !(self.lo..self.hi).contains(&p) || !is_prime(u128::from(p)) {
                return false;
            }
        }
        true
    }
}
