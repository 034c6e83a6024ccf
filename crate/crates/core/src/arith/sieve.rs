//! Segmented prime sieving, exact prime counting, and Möbius/squarefree
//! counts.
//!
//! The segmented sieve streams primes from arbitrarily placed windows; only
//! the base primes up to √hi and one segment of odd-number flags are held
//! in memory, so ranges far beyond RAM are fine.

/// Default segment width (odd numbers per segment ≈ 2ⁱ⁹).
const DEFAULT_SEGMENT: u64 = 1 << 20;

/// Simple sieve of all primes `< limit`.
pub fn simple_primes(limit: u64) -> Vec<u64> {
    if limit <= 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for p in 2..n {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m < n {
                composite[m] = true;
                m += p;
            }
        }
    }
    out
}

/// Streaming iterator over the primes in `[lo, hi)`, in increasing order.
pub struct SegmentedPrimes {
    base: Vec<u64>,
    hi: u64,
    segment_size: u64,
    seg_lo: u64,
    buf: Vec<u64>,
    buf_pos: usize,
}

/// Primes in `[lo, hi)` as a lazy stream. `segment_size` bounds the flag
/// buffer; pass 0 for the default.
pub fn segmented_primes(lo: u64, hi: u64, segment_size: u64) -> SegmentedPrimes {
    let segment_size = if segment_size == 0 { DEFAULT_SEGMENT } else { segment_size.max(64) };
    let base = if hi <= 4 { Vec::new() } else { simple_primes(hi.isqrt() + 1) };
    SegmentedPrimes {
        base,
        hi,
        segment_size,
        seg_lo: lo.max(2),
        buf: Vec::new(),
        buf_pos: 0,
    }
}

impl SegmentedPrimes {
    fn fill_next_segment(&mut self) -> bool {
        if self.seg_lo >= self.hi {
            return false;
        }
        let lo = self.seg_lo;
        let hi = self.hi.min(lo.saturating_add(self.segment_size));
        let len = (hi - lo) as usize;
        let mut composite = vec![false; len];
        for &p in &self.base {
            let p2 = match p.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
            if p2 >= hi {
                break;
            }
            // first multiple of p in [lo, hi) that is ≥ p²
            let start = p2.max(lo.div_ceil(p) * p);
            let mut m = start;
            while m < hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        self.buf.clear();
        for i in 0..len {
            if !composite[i] {
                let v = lo + i as u64;
                if v >= 2 {
                    self.buf.push(v);
                }
            }
        }
        self.buf_pos = 0;
        self.seg_lo = hi;
        true
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.buf_pos < self.buf.len() {
                let v = self.buf[self.buf_pos];
                self.buf_pos += 1;
                return Some(v);
            }
            if !self.fill_next_segment() {
                return None;
            }
        }
    }
}

/// Exact π(x): the number of primes ≤ x.
pub fn pi_exact(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    segmented_primes(2, x + 1, 0).count() as u64
}

/// Möbius function for every index in `0..=n` by factored sieve.
pub fn mobius_up_to(n: u64) -> Vec<i8> {
    let n = n as usize;
    let mut mu = vec![1i8; n + 1];
    if n == 0 {
        mu[0] = 0;
        return mu;
    }
    mu[0] = 0;
    let mut least_factor = vec![0u32; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=n {
        if least_factor[i] == 0 {
            least_factor[i] = i as u32;
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if p > least_factor[i] as usize || ip > n {
                break;
            }
            least_factor[ip] = p as u32;
            mu[ip] = if p == least_factor[i] as usize { 0 } else { -mu[i] };
        }
    }
    mu
}

/// Exact count of squarefree integers in `[1, x]`, via
/// `Σ_{d ≤ √x} μ(d) ⌊x/d²⌋`.
pub fn squarefree_count_exact(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let root = x.isqrt();
    let mu = mobius_up_to(root);
    let mut acc: i128 = 0;
    for d in 1..=root {
        let m = mu[d as usize];
        if m != 0 {
            acc += i128::from(m) * i128::from(x / (d * d));
        }
    }
    u64::try_from(acc).expect("squarefree count is nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primality::is_prime;

    #[test]
    fn first_primes_stream_in_order() {
        let got: Vec<u64> = segmented_primes(2, 20, 0).collect();
        assert_eq!(got, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn window_above_seven_thousand() {
        // no primes in [7080, 7100); the first prime past 7080 is 7103
        let got: Vec<u64> = segmented_primes(7080, 7100, 0).collect();
        assert!(got.is_empty());
        let first = segmented_primes(7080, 7200, 0).next().unwrap();
        assert_eq!(first, 7103);
    }

    #[test]
    fn tiny_segments_agree_with_one_shot() {
        let a: Vec<u64> = segmented_primes(1, 3000, 64).collect();
        let b: Vec<u64> = segmented_primes(1, 3000, 1 << 20).collect();
        assert_eq!(a, b);
        assert_eq!(a, simple_primes(3000));
    }

    #[test]
    fn high_window_matches_primality_test() {
        let lo = 1_000_000_007_000u64;
        let from_sieve: Vec<u64> = segmented_primes(lo, lo + 2_000, 256).collect();
        let from_tests: Vec<u64> =
            (lo..lo + 2_000).filter(|&m| is_prime(u128::from(m))).collect();
        assert_eq!(from_sieve, from_tests);
    }

    #[test]
    fn pi_reference_values() {
        assert_eq!(pi_exact(0), 0);
        assert_eq!(pi_exact(1), 0);
        assert_eq!(pi_exact(2), 1);
        assert_eq!(pi_exact(10), 4);
        assert_eq!(pi_exact(1_000), 168);
        assert_eq!(pi_exact(1_000_000), 78_498);
    }

    #[test]
    fn prime_count_in_shifted_billion_window() {
        let count = segmented_primes(1_000_000_001, 1_000_000_000 + 1_000_001, 0).count();
        assert_eq!(count, 48_155);
    }

    #[test]
    fn mobius_small_table() {
        let mu = mobius_up_to(12);
        assert_eq!(
            &mu[1..],
            &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0][..]
        );
    }

    #[test]
    fn mobius_matches_factorization() {
        let mu = mobius_up_to(2_000);
        for m in 1..=2_000u64 {
            let f = crate::arith::factor::factorize(
                u128::from(m),
                &crate::arith::factor::FactorConfig::default(),
            )
            .unwrap();
            let squarefree = f.factors.iter().all(|&(_, e)| e == 1);
            let expected = if !squarefree {
                0
            } else if f.factors.len() % 2 == 0 {
                1
            } else {
                -1
            };
            assert_eq!(i32::from(mu[m as usize]), expected, "mu({m})");
        }
    }

    #[test]
    fn squarefree_counts() {
        assert_eq!(squarefree_count_exact(1), 1);
        assert_eq!(squarefree_count_exact(100), 61);
        // naive cross-check at 10⁴
        let mu = mobius_up_to(10_000);
        let naive = (1..=10_000u64).filter(|&m| mu[m as usize] != 0).count() as u64;
        assert_eq!(squarefree_count_exact(10_000), naive);
    }
}
