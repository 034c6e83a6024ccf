//! Brute-force oracles at enumerable N: the sifting function S, the
//! weighted sum W over the square-free-restricted set A′, the witness
//! count r_k, and the square-divisor sum. These are definitional
//! enumerations — no analytic shortcuts — and serve as ground truth for
//! the certified bounds.

use num_bigint::BigUint;

use super::params::{Scales, SieveParams};
use crate::arith::{omega_exact, simple_primes};
use crate::certified::{CertifiedReal, Enclosure};

/// The set A(N) = {N+1, …, N+⌊2√N⌋} as an inclusive integer range.
pub fn a_range(n: u64) -> (u64, u64) {
    assert!(n >= 1);
    let len = (4 * u128::from(n)).isqrt() as u64; // ⌊2√N⌋ < 2⁶⁵ for u64 N
    (n + 1, n + len)
}

/// Exact S(A, P, z): elements of A with no prime factor below `z`.
pub fn s_direct(n: u64, z: f64) -> u64 {
    let (lo, hi) = a_range(n);
    let sifters = primes_below(z);
    (lo..=hi).filter(|&a| coprime_to_all(a, &sifters)).count() as u64
}

/// Exact S(A_p, P, z): multiples of `p` in A with no prime factor below
/// `z` besides those of `p` itself (p ≥ z, so p is never sifted).
pub fn s_ap_direct(n: u64, p: u64, z: f64) -> u64 {
    let (lo, hi) = a_range(n);
    let sifters = primes_below(z);
    (lo..=hi)
        .filter(|&a| a % p == 0 && coprime_to_all(a, &sifters))
        .count() as u64
}

/// Exact r_k(A): elements with at most k prime factors, multiplicity
/// counted. r_0 = 0 since A contains no unit.
pub fn rk_direct(n: u64, k: u32) -> u64 {
    let (lo, hi) = a_range(n);
    (lo..=hi)
        .filter(|&a| omega_exact(u128::from(a)) <= k)
        .count() as u64
}

/// Exact Σ_{z ≤ p < y} |A_{p²}|: total count, over the sifting primes, of
/// elements divisible by p².
pub fn q0_exact(n: u64, z: f64, y: f64) -> u64 {
    let (lo, hi) = a_range(n);
    let mut total = 0u64;
    for p in primes_in(z, y) {
        let p2 = match p.checked_mul(p) {
            Some(v) if v <= hi => v,
            _ => continue,
        };
        total += hi / p2 - (lo - 1) / p2;
    }
    total
}

/// The weight w(a) = λ − Σ_{z ≤ p < y, p | a} (1 − log p / log y), summed
/// over distinct prime divisors (divisibility, not multiplicity).
pub fn richert_weight<R: CertifiedReal>(a: u64, z: f64, y: f64, lambda: &R) -> R {
    let log_y = R::point(y).ln();
    let mut w = lambda.clone();
    for p in distinct_prime_divisors(a) {
        let pf = p as f64;
        if pf >= z && pf < y {
            let term = R::from_int(1).sub(&R::from_int(p as i64).ln().div(&log_y));
            w = w.sub(&term);
        }
    }
    w
}

/// Exact W(A′, P, z): the Richert-weighted count over the sifted elements
/// of A′ = A minus every element divisible by p² for some sifting prime,
/// with z, y, λ drawn from `params` at this N.
pub fn w_direct(n: u64, params: &SieveParams) -> Enclosure {
    let (z, y) = oracle_cutoffs(n, params);
    let lambda: Enclosure = params.lambda();
    w_direct_at(n, z, y, &lambda)
}

/// W(A′, P, z) at explicit cutoffs.
pub fn w_direct_at(n: u64, z: f64, y: f64, lambda: &Enclosure) -> Enclosure {
    let (lo, hi) = a_range(n);
    let sifters = primes_below(z);
    let range_primes = primes_in(z, y);
    let mut total = Enclosure::point(0.0);
    for a in lo..=hi {
        if !coprime_to_all(a, &sifters) {
            continue;
        }
        if range_primes.iter().any(|&p| p * p <= a && a % (p * p) == 0) {
            continue; // excluded from A′
        }
        total = total.add(&richert_weight(a, z, y, lambda));
    }
    total
}

/// Resolves the sifting cutoffs z = X^{1/k1}, y = X^{1/k2} at a small N
/// to plain f64 values for enumeration. Panics if an endpoint enclosure
/// straddles a prime, which would make the integer cutoff ambiguous —
/// callers choose parameters that keep clear of that (measure-zero) case.
pub fn oracle_cutoffs(n: u64, params: &SieveParams) -> (f64, f64) {
    let scales: Scales<Enclosure> = Scales::new(&BigUint::from(n), params);
    for bound in [&scales.z, &scales.y] {
        let (lo, hi) = (bound.lo_f64(), bound.hi_f64());
        assert_eq!(
            primes_below(lo).len(),
            primes_below(hi).len(),
            "cutoff enclosure straddles a prime"
        );
    }
    (scales.z.lo_f64(), scales.y.lo_f64())
}

fn primes_below(z: f64) -> Vec<u64> {
    if z <= 2.0 {
        return Vec::new();
    }
    simple_primes((z.ceil() as u64).max(2))
        .into_iter()
        .filter(|&p| (p as f64) < z)
        .collect()
}

fn primes_in(z: f64, y: f64) -> Vec<u64> {
    if y <= z || y <= 2.0 {
        return Vec::new();
    }
    simple_primes(y.ceil() as u64)
        .into_iter()
        .filter(|&p| (p as f64) >= z && (p as f64) < y)
        .collect()
}

fn coprime_to_all(a: u64, primes: &[u64]) -> bool {
    primes.iter().all(|&p| a % p != 0)
}

fn distinct_prime_divisors(a: u64) -> Vec<u64> {
    crate::arith::factorize(u128::from(a), &crate::arith::FactorConfig::default())
        .expect("oracle inputs stay within the factor budget")
        .factors
        .into_iter()
        .map(|(p, _)| p as u64)
        .collect()
}
