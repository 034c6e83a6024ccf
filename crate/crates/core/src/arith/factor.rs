//! Complete factorization with multiplicity, and early-exit counting of
//! prime factors.
//!
//! Strategy: strip small primes by trial division, then split what remains
//! with Brent's variant of Pollard's rho (batched gcd), recursing on
//! composite parts. Rho work is metered by a configurable iteration budget;
//! exceeding it surfaces the partially factored state instead of spinning
//! forever on an adversarial semiprime.

use thiserror::Error;

use super::primality::{add_mod, is_prime, Montgomery};

/// Iteration budget and trial-division depth for [`factorize`].
#[derive(Clone, Copy, Debug)]
pub struct FactorConfig {
    /// Maximum rho iterations spent per remaining cofactor.
    pub rho_budget: u64,
    /// Trial-divide by every prime below this before switching to rho.
    pub trial_limit: u32,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig { rho_budget: 1 << 24, trial_limit: 10_000 }
    }
}

/// A complete factorization: `value = ∏ pᵉ`, with `omega = Σ e` counting
/// prime factors with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub value: u128,
    /// `(prime, exponent)` pairs in increasing prime order.
    pub factors: Vec<(u128, u32)>,
    pub omega: u32,
}

impl Factorization {
    /// Multiplies the factorization back together (u128 cannot overflow
    /// since `value` fit to begin with).
    pub fn reconstruct(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * p.pow(e))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FactorError {
    /// The rho budget ran out. Carries everything learned so far: the
    /// factors already extracted and the unfactored remaining cofactor.
    #[error("factorization budget exhausted on cofactor {remaining} of {value}")]
    Timeout {
        value: u128,
        partial: Vec<(u128, u32)>,
        remaining: u128,
    },
}

/// Result of [`omega_up_to`]: either the exact prime-factor count, or a
/// certified lower bound that already exceeds the caller's threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaBound {
    Exact(u32),
    AtLeast(u32),
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's cycle-finding rho with batched gcd, iterating in Montgomery
/// form (the represented sequence is still x ← x² + c, and gcds of value
/// differences are unchanged because R is a unit mod n). Returns a
/// nontrivial factor of composite odd `n`, or `None` on budget exhaustion.
fn brent_rho(n: u128, budget: &mut u64) -> Option<u128> {
    debug_assert!(n & 1 == 1 && n > 3);
    let mont = Montgomery::new(n);
    let mut c: u128 = 1;
    while *budget > 0 {
        let c_m = mont.to_mont(c);
        let f = |x: u128| add_mod(mont.mul(x, x), c_m, n);
        let mut y = mont.to_mont(2);
        let mut cycle_len: u64 = 1;
        let mut q: u128 = mont.to_mont(1);
        'attempt: loop {
            let x = y;
            for _ in 0..cycle_len {
                y = f(y);
            }
            let mut k: u64 = 0;
            while k < cycle_len {
                let batch_start = y;
                let batch = 128.min(cycle_len - k);
                for _ in 0..batch {
                    y = f(y);
                    let diff = if x > y { x - y } else { y - x };
                    q = mont.mul(q, diff);
                }
                if *budget < batch {
                    *budget = 0;
                    return None;
                }
                *budget -= batch;
                let g = gcd(q, n);
                if g > 1 {
                    if g < n {
                        return Some(g);
                    }
                    // the batch product collapsed to 0 mod n; replay the
                    // batch one step at a time to isolate the factor
                    let mut ys = batch_start;
                    let mut g = 1;
                    while g == 1 {
                        ys = f(ys);
                        let diff = if x > ys { x - ys } else { ys - x };
                        g = gcd(diff, n);
                    }
                    if g < n {
                        return Some(g);
                    }
                    // exact collision: cycle exhausted for this polynomial
                    break 'attempt;
                }
                k += batch;
            }
            cycle_len *= 2;
        }
        c += 1;
    }
    None
}

/// Splits an odd composite with no prime factor below the trial limit.
/// Pushes the primes found into `out`; returns the unfactored remainder
/// (1 on full success).
fn split_recursive(n: u128, budget: &mut u64, out: &mut Vec<u128>) -> u128 {
    if n == 1 {
        return 1;
    }
    if is_prime(n) {
        out.push(n);
        return 1;
    }
    let Some(d) = brent_rho(n, budget) else {
        return n;
    };
    let rest = split_recursive(d, budget, out);
    if rest != 1 {
        // propagate the stuck part together with the untouched cofactor
        return rest * (n / d);
    }
    split_recursive(n / d, budget, out)
}

fn collect(value: u128, mut primes: Vec<u128>) -> Factorization {
    primes.sort_unstable();
    let mut factors: Vec<(u128, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    let omega = factors.iter().map(|&(_, e)| e).sum();
    Factorization { value, factors, omega }
}

/// Trial division by 2 and odd numbers below `limit`, pushing each prime
/// factor (with multiplicity) and returning the remaining cofactor.
fn strip_small(mut m: u128, limit: u32, out: &mut Vec<u128>) -> u128 {
    while m & 1 == 0 {
        out.push(2);
        m >>= 1;
    }
    let mut d: u128 = 3;
    let limit = u128::from(limit);
    while d < limit && d * d <= m {
        while m % d == 0 {
            out.push(d);
            m /= d;
        }
        d += 2;
    }
    if m > 1 && d * d > m {
        // cofactor is prime by exhaustion of divisors up to √m
        out.push(m);
        return 1;
    }
    m
}

/// Complete factorization of `m ≥ 1`. `1` factors as the empty product.
pub fn factorize(m: u128, config: &FactorConfig) -> Result<Factorization, FactorError> {
    assert!(m >= 1, "factorize requires a positive integer");
    let mut primes = Vec::new();
    let cofactor = strip_small(m, config.trial_limit, &mut primes);
    if cofactor > 1 {
        let mut budget = config.rho_budget;
        let remaining = split_recursive(cofactor, &mut budget, &mut primes);
        if remaining != 1 {
            let partial = collect(m, primes).factors;
            return Err(FactorError::Timeout { value: m, partial, remaining });
        }
    }
    Ok(collect(m, primes))
}

/// Counts Ω(m) only as far as needed to compare against `cutoff`.
///
/// Returns `Exact(ω)` when the full count is determined, or `AtLeast(c)`
/// with `c > cutoff` as soon as the count provably exceeds the cutoff —
/// in particular a composite cofactor contributes 2 without being split.
pub fn omega_up_to(
    m: u128,
    cutoff: u32,
    config: &FactorConfig,
) -> Result<OmegaBound, FactorError> {
    assert!(m >= 1);
    let mut count: u32 = 0;
    let mut rest = m;

    // factor 2, then odd trial division with early exit
    while rest & 1 == 0 {
        rest >>= 1;
        count += 1;
        if count > cutoff && rest > 1 {
            return Ok(OmegaBound::AtLeast(count + 1));
        }
    }
    let mut d: u128 = 3;
    let limit = u128::from(config.trial_limit);
    while d < limit && d * d <= rest {
        while rest % d == 0 {
            rest /= d;
            count += 1;
            if count > cutoff && rest > 1 {
                return Ok(OmegaBound::AtLeast(count + 1));
            }
        }
        d += 2;
    }
    if rest == 1 {
        return Ok(OmegaBound::Exact(count));
    }
    if d * d > rest {
        return Ok(OmegaBound::Exact(count + 1));
    }
    if count + 1 > cutoff {
        // any cofactor adds at least one more factor
        return Ok(OmegaBound::AtLeast(count + 1));
    }
    if is_prime(rest) {
        return Ok(OmegaBound::Exact(count + 1));
    }
    if count + 2 > cutoff {
        // composite cofactor adds at least two
        return Ok(OmegaBound::AtLeast(count + 2));
    }
    // must split the cofactor to decide
    let mut primes = Vec::new();
    let mut budget = config.rho_budget;
    let remaining = split_recursive(rest, &mut budget, &mut primes);
    if remaining != 1 {
        // rare path: reconstruct the small-prime part (cheap trial
        // division) and append whatever rho managed to split off
        let split_product: u128 = primes.iter().product();
        let mut all = Vec::new();
        let small_rest =
            strip_small(m / remaining / split_product, config.trial_limit, &mut all);
        debug_assert_eq!(small_rest, 1, "small part must fully factor");
        all.extend_from_slice(&primes);
        return Err(FactorError::Timeout {
            value: m,
            partial: collect(m / remaining, all).factors,
            remaining,
        });
    }
    Ok(OmegaBound::Exact(count + primes.len() as u32))
}

/// Ω by full factorization; panics on timeout (for oracles on small inputs).
pub fn omega_exact(m: u128) -> u32 {
    factorize(m, &FactorConfig::default())
        .expect("factorization within budget")
        .omega
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(m: u128) -> Factorization {
        factorize(m, &FactorConfig::default()).unwrap()
    }

    #[test]
    fn small_cases_by_hand() {
        assert_eq!(fac(1).factors, vec![]);
        assert_eq!(fac(1).omega, 0);
        assert_eq!(fac(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(fac(12).omega, 3);
        assert_eq!(fac(2u128.pow(10)).omega, 10);
        assert_eq!(fac(97).factors, vec![(97, 1)]);
    }

    #[test]
    fn reconstructs_and_matches_naive_omega_to_twenty_thousand() {
        let naive_omega = |mut m: u64| -> u32 {
            let mut c = 0;
            let mut d = 2;
            while d * d <= m {
                while m % d == 0 {
                    m /= d;
                    c += 1;
                }
                d += 1;
            }
            if m > 1 {
                c += 1;
            }
            c
        };
        for m in 1..20_000u64 {
            let f = fac(u128::from(m));
            assert_eq!(f.reconstruct(), u128::from(m), "reconstruct {m}");
            assert_eq!(f.omega, naive_omega(m), "omega {m}");
            for &(p, _) in &f.factors {
                assert!(is_prime(p), "non-prime factor {p} of {m}");
            }
        }
    }

    #[test]
    fn semiprime_of_verified_primes() {
        let p = 14_706_000_011u128;
        let q = 147_058_823_551u128;
        let f = fac(p * q);
        assert_eq!(f.omega, 2);
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn prime_just_below_sixty_four_bits() {
        let p = u128::from(u64::MAX - 58);
        let f = fac(p);
        assert_eq!(f.factors, vec![(p, 1)]);
        assert_eq!(f.omega, 1);
    }

    #[test]
    fn rho_splits_mid_size_semiprimes() {
        // both factors far above the trial-division limit
        let a = 1_000_003u128;
        let b = 999_999_937u128;
        let f = fac(a * b);
        assert_eq!(f.factors, vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn timeout_carries_partial_state() {
        // A product of two ~2⁶⁰ primes with essentially no budget must fail,
        // and the partial state must still multiply back into the value.
        let p = (1u128 << 61) - 1; // Mersenne prime
        let q = 2_305_843_009_213_693_967u128; // next prime above 2⁶¹
        let m = 4 * p * q;
        let cfg = FactorConfig { rho_budget: 16, trial_limit: 100 };
        match factorize(m, &cfg) {
            Err(FactorError::Timeout { value, partial, remaining }) => {
                assert_eq!(value, m);
                let partial_product: u128 =
                    partial.iter().fold(1, |acc, &(p, e)| acc * p.pow(e));
                assert_eq!(partial_product * remaining, m);
                assert_eq!(remaining, p * q);
            }
            other => panic!("expected timeout, got {other:?}"),
        }
    }

    #[test]
    fn omega_up_to_early_exits_match_exact_counts() {
        let cfg = FactorConfig::default();
        for m in 2..5_000u128 {
            let exact = fac(m).omega;
            for cutoff in 0..6u32 {
                match omega_up_to(m, cutoff, &cfg).unwrap() {
                    OmegaBound::Exact(e) => assert_eq!(e, exact, "m={m} cutoff={cutoff}"),
                    OmegaBound::AtLeast(l) => {
                        assert!(l > cutoff, "m={m}: AtLeast({l}) not beyond cutoff {cutoff}");
                        assert!(l <= exact, "m={m}: AtLeast({l}) overshoots Ω={exact}");
                    }
                }
            }
        }
    }

    #[test]
    fn omega_up_to_skips_hard_cofactors_when_cutoff_allows() {
        // 4·p·q with huge p, q: cutoff 3 only needs "composite cofactor ⇒ +2"
        let p = (1u128 << 61) - 1;
        let q = 2_305_843_009_213_693_967u128;
        let cfg = FactorConfig { rho_budget: 16, trial_limit: 100 };
        let m = 4 * p * q;
        assert_eq!(omega_up_to(m, 3, &cfg).unwrap(), OmegaBound::AtLeast(4));
        // cutoff 4 must actually split it — and times out under this budget
        assert!(omega_up_to(m, 4, &cfg).is_err());
    }
}
