//! Deterministic primality testing up to 128 bits.
//!
//! Below 2⁶⁴ a fixed seven-base Miller–Rabin witness set decides primality
//! outright (the set has been exhaustively verified against every 64-bit
//! integer). At and above 2⁶⁴ no such set is known, so the test combines
//! strong-probable-prime checks to the twelve prime bases up to 37 with a
//! strong Lucas test; a pass is reported as [`Primality::ProbablePrime`]
//! and downstream reports flag it as industrial-grade rather than proven.
//!
//! All modular arithmetic runs in Montgomery form on two 64-bit limbs, so
//! the same code path serves both ranges.

/// Verdict of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Composite,
    /// Proven prime (deterministic witness set, below 2⁶⁴).
    Prime,
    /// Passed strong-probable-prime and strong Lucas tests (≥ 2⁶⁴); no
    /// counterexample to this combination is known, but it is not a proof.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }

    /// True only for the proven verdict.
    pub fn is_proven(self) -> bool {
        matches!(self, Primality::Prime)
    }
}

/// Deterministic witnesses covering all of `u64` (Sinclair's set).
const BASES_U64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Prime bases for the strong-probable-prime stage above 64 bits.
const BASES_WIDE: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// Full 256-bit product of two 128-bit integers as `(hi, lo)`.
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let a0 = a as u64 as u128;
    let a1 = (a >> 64) as u64 as u128;
    let b0 = b as u64 as u128;
    let b1 = (b >> 64) as u64 as u128;
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let lo = ((mid as u64 as u128) << 64) | (p00 as u64 as u128);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

pub(crate) fn add_mod(a: u128, b: u128, n: u128) -> u128 {
    debug_assert!(a < n && b < n);
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= n {
        s.wrapping_sub(n)
    } else {
        s
    }
}

fn sub_mod(a: u128, b: u128, n: u128) -> u128 {
    debug_assert!(a < n && b < n);
    if a >= b {
        a - b
    } else {
        n - b + a
    }
}

/// Halve a residue modulo an odd modulus.
fn half_mod(a: u128, n: u128) -> u128 {
    if a & 1 == 0 {
        a >> 1
    } else {
        // (a + n)/2 without overflow: both summands odd
        (a >> 1) + (n >> 1) + 1
    }
}

/// Montgomery arithmetic context for an odd modulus, R = 2¹²⁸.
pub(crate) struct Montgomery {
    pub(crate) n: u128,
    /// −n⁻¹ mod 2¹²⁸.
    neg_inv: u128,
    /// R mod n — the Montgomery image of 1.
    one: u128,
    /// R² mod n — converts into Montgomery form by one multiplication.
    r2: u128,
}

impl Montgomery {
    pub(crate) fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n > 1);
        // Newton–Hensel: x ← x(2 − nx) doubles the trailing bits of
        // correctness; n itself inverts n modulo 2³ for odd n.
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert!(n.wrapping_mul(inv) == 1);
        let one = n.wrapping_neg() % n;
        let mut r2 = one;
        for _ in 0..128 {
            r2 = add_mod(r2, r2, n);
        }
        Montgomery { n, neg_inv: inv.wrapping_neg(), one, r2 }
    }

    /// REDC: given `t = hi·2¹²⁸ + lo < n·2¹²⁸`, returns `t·R⁻¹ mod n`.
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mn_hi, mn_lo) = mul_wide(m, self.n);
        // lo + mn_lo ≡ 0 (mod 2¹²⁸) by construction of m
        let carry = u128::from(lo.overflowing_add(mn_lo).1);
        let (sum, c1) = hi.overflowing_add(mn_hi);
        let (sum, c2) = sum.overflowing_add(carry);
        if c1 || c2 || sum >= self.n {
            sum.wrapping_sub(self.n)
        } else {
            sum
        }
    }

    pub(crate) fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    pub(crate) fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    fn pow(&self, base_m: u128, mut exp: u128) -> u128 {
        let mut acc = self.one;
        let mut b = base_m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}

/// One strong-probable-prime round; `n` odd, `n − 1 = d·2^s`.
fn sprp_round(mont: &Montgomery, d: u128, s: u32, base: u64) -> bool {
    let n = mont.n;
    let b = u128::from(base) % n;
    if b == 0 {
        return true;
    }
    let minus_one = n - mont.one;
    let mut x = mont.pow(mont.to_mont(b), d);
    if x == mont.one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = mont.mul(x, x);
        if x == minus_one {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a | n) for odd n ≥ 3; `a` may be negative.
fn jacobi(mut a: i64, n: u128) -> i32 {
    debug_assert!(n & 1 == 1);
    let mut n = n;
    let mut sign = 1i32;
    if a < 0 {
        a = -a;
        // (−1 | n) = (−1)^((n−1)/2)
        if n % 4 == 3 {
            sign = -sign;
        }
    }
    let mut a = a as u128 % n;
    while a != 0 {
        while a & 1 == 0 {
            a >>= 1;
            // (2 | n) = (−1)^((n²−1)/8)
            let r = n % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
/// Requires `n` odd, not a perfect square, with no factor below 100.
fn strong_lucas(mont: &Montgomery) -> bool {
    let n = mont.n;
    // Selfridge method A: first D in 5, −7, 9, −11, … with (D | n) = −1.
    let mut d: i64 = 5;
    loop {
        match jacobi(d, n) {
            -1 => break,
            0 => return false, // shares a factor with D
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -(d - 2) };
        debug_assert!(d.unsigned_abs() < 1_000_000, "square check should have fired");
    }
    let q: i64 = (1 - d) / 4;

    let to_residue = |v: i64| -> u128 {
        if v >= 0 {
            v as u128 % n
        } else {
            n - (v.unsigned_abs() as u128 % n)
        }
    };
    let d_m = mont.to_mont(to_residue(d));
    let q_m = mont.to_mont(to_residue(q));

    // n + 1 = t·2^s with t odd; n < 2¹²⁸ − 1 in practice but handle the
    // extreme carefully via u128 arithmetic on n itself.
    let np1 = n.wrapping_add(1);
    debug_assert!(np1 != 0, "modulus 2^128-1 is divisible by 3");
    let s = np1.trailing_zeros();
    let t = np1 >> s;

    // Lucas chain for U_t, V_t with P = 1, tracking Q^k alongside.
    let mut u = mont.one; // U_1
    let mut v = mont.one; // V_1 = P
    let mut qk = q_m; // Q^1
    let bits = 128 - t.leading_zeros();
    for i in (0..bits - 1).rev() {
        // double: k → 2k
        u = mont.mul(u, v);
        v = sub_mod(mont.mul(v, v), add_mod(qk, qk, n), n);
        qk = mont.mul(qk, qk);
        if (t >> i) & 1 == 1 {
            // increment: 2k → 2k+1 (P = 1)
            let new_u = half_mod(add_mod(u, v, n), n);
            let new_v = half_mod(add_mod(mont.mul(d_m, u), v, n), n);
            u = new_u;
            v = new_v;
            qk = mont.mul(qk, q_m);
        }
    }

    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(mont.mul(v, v), add_mod(qk, qk, n), n);
        qk = mont.mul(qk, qk);
        if v == 0 {
            return true;
        }
    }
    false
}

/// Classifies `m` as composite, proven prime, or industrial-grade probable
/// prime. Total cost is a handful of modular exponentiations.
pub fn classify(m: u128) -> Primality {
    if m < 2 {
        return Primality::Composite;
    }
    for p in SMALL_PRIMES {
        let p = u128::from(p);
        if m == p {
            return Primality::Prime;
        }
        if m % p == 0 {
            return Primality::Composite;
        }
    }
    // m is odd and > 97² here? No — only > 97; but all factors ≤ 97 are gone,
    // so any m ≤ 9409 remaining is prime.
    if m <= 97 * 97 {
        return Primality::Prime;
    }

    let mont = Montgomery::new(m);
    let d = (m - 1) >> (m - 1).trailing_zeros();
    let s = (m - 1).trailing_zeros();

    if m < 1u128 << 64 {
        for base in BASES_U64 {
            if !sprp_round(&mont, d, s, base) {
                return Primality::Composite;
            }
        }
        return Primality::Prime;
    }

    for base in BASES_WIDE {
        if !sprp_round(&mont, d, s, base) {
            return Primality::Composite;
        }
    }
    // The Lucas test presupposes m is not a perfect square (otherwise no
    // suitable discriminant exists).
    let r = m.isqrt();
    if r * r == m {
        return Primality::Composite;
    }
    if strong_lucas(&mont) {
        Primality::ProbablePrime
    } else {
        Primality::Composite
    }
}

/// True iff `m` is prime (treating an industrial-grade pass above 2⁶⁴ as
/// prime; use [`classify`] where the distinction matters).
pub fn is_prime(m: u128) -> bool {
    classify(m).is_prime()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(!is_prime(4));
        assert!(is_prime(97));
        assert!(!is_prime(9409)); // 97²
        assert!(is_prime(9419));
    }

    #[test]
    fn matches_trial_division_to_ten_thousand() {
        let naive = |m: u64| -> bool {
            if m < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= m {
                if m % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        };
        for m in 0..10_000u64 {
            assert_eq!(is_prime(u128::from(m)), naive(m), "disagree at {m}");
        }
    }

    #[test]
    fn interval_witness_primes_are_proven() {
        assert_eq!(classify(14_706_000_011), Primality::Prime);
        assert_eq!(classify(147_058_823_551), Primality::Prime);
        assert_eq!(classify(990_099_009_923), Primality::Prime);
        assert!(!is_prime(14_706_000_011 * 147_058_823_551));
    }

    #[test]
    fn strong_pseudoprimes_are_caught() {
        // strong pseudoprimes to several small bases
        for c in [2047u128, 1373653, 25326001, 3215031751, 3474749660383] {
            assert!(!is_prime(c), "{c} wrongly accepted");
        }
        // Carmichael numbers
        for c in [561u128, 1105, 1729, 41041, 825265] {
            assert!(!is_prime(c), "{c} wrongly accepted");
        }
    }

    #[test]
    fn boundary_at_sixty_four_bits() {
        assert_eq!(classify(u128::from(u64::MAX - 58)), Primality::Prime); // 2⁶⁴ − 59
        assert!(!is_prime(u128::from(u64::MAX)));

        // First primes above 2⁶⁴: 2⁶⁴ + 13 is prime, and gets the
        // industrial-grade verdict rather than the proven one.
        let p = (1u128 << 64) + 13;
        assert_eq!(classify(p), Primality::ProbablePrime);
        assert!(is_prime(p));
        assert!(!is_prime(1u128 << 64));
        assert!(!is_prime((1u128 << 64) + 1)); // 274177 · 67280421310721
    }

    #[test]
    fn wide_range_known_values() {
        // Mersenne exponents: 2⁸⁹ − 1 and 2¹⁰⁷ − 1 are prime, 2¹⁰¹ − 1 is not.
        assert!(is_prime((1u128 << 89) - 1));
        assert!(is_prime((1u128 << 107) - 1));
        assert!(!is_prime((1u128 << 101) - 1));
        // perfect square of a prime just above 2⁶³
        let r = (1u128 << 63) + 29; // 9223372036854775837 is prime
        assert!(is_prime(r));
        assert!(!is_prime(r * r));
        // product of two large probable primes
        assert!(!is_prime(((1u128 << 64) + 13) * 999_999_937));
    }

    #[test]
    fn jacobi_agrees_with_eulers_criterion_for_primes() {
        for &p in &[101u128, 997, 7919] {
            let mont = Montgomery::new(p);
            for a in 1..50i64 {
                let j = jacobi(a, p);
                let e = mont.pow(mont.to_mont(a as u128 % p), (p - 1) / 2);
                let expected = if e == mont.one {
                    1
                } else if e == p - mont.one {
                    -1
                } else {
                    0
                };
                assert_eq!(j, expected, "jacobi({a}, {p})");
            }
        }
    }

    #[test]
    fn montgomery_roundtrip_and_pow() {
        let n = 0xffff_ffff_ffff_ffff_ffff_ffff_ffff_ff61u128; // odd
        let mont = Montgomery::new(n);
        for a in [1u128, 2, 3, 12345678901234567890, n - 1] {
            let m = mont.to_mont(a);
            assert_eq!(mont.redc(0, m), a % n, "round trip of {a}");
        }
        // Fermat: 2^(p−1) ≡ 1 mod p for prime p = 2⁶⁴ − 59
        let p = u128::from(u64::MAX - 58);
        let mont = Montgomery::new(p);
        assert_eq!(mont.pow(mont.to_mont(2), p - 1), mont.one);
    }
}
