//! High-precision certified backend on 192-bit MPFR floats.
//!
//! [`MpReal`] keeps a `[lo, hi]` pair of `rug::Float` values and rounds every
//! operation outward with MPFR's directed rounding modes, so results are
//! correct to the last of 192 bits rather than widened by ulp padding. It is
//! roughly two orders of magnitude slower than the `f64` backend and is only
//! invoked to settle inequalities that `f64` enclosures decide too narrowly.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer};

use super::real::CertifiedReal;

/// Working precision in bits; gives ~58 correct decimal digits.
const PREC: u32 = 192;

/// A certified interval with MPFR endpoints and directed rounding.
#[derive(Clone)]
pub struct MpReal {
    lo: Float,
    hi: Float,
}

fn round_new<T>(v: T, r: Round) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let mut f = Float::new(PREC);
    f.assign_round(v, r);
    f
}

fn fmin(a: &Float, b: &Float) -> Float {
    if a < b {
        a.clone()
    } else {
        b.clone()
    }
}

fn fmax(a: &Float, b: &Float) -> Float {
    if a > b {
        a.clone()
    } else {
        b.clone()
    }
}

impl MpReal {
    fn check(self) -> Self {
        debug_assert!(!self.lo.is_nan() && !self.hi.is_nan());
        debug_assert!(self.lo <= self.hi, "inverted interval");
        self
    }

    /// Interval width as an upper-rounded `f64`.
    pub fn width_f64(&self) -> f64 {
        round_new(&self.hi - &self.lo, Round::Up).to_f64_round(Round::Up)
    }

    /// Decimal rendering of the midpoint, for diagnostics.
    pub fn mid_string(&self, digits: usize) -> String {
        let mut mid = round_new(&self.lo + &self.hi, Round::Nearest);
        mid /= 2u32;
        mid.to_string_radix(10, Some(digits))
    }
}

impl CertifiedReal for MpReal {
    fn point(x: f64) -> Self {
        // f64 -> 192-bit is exact.
        MpReal { lo: Float::with_val(PREC, x), hi: Float::with_val(PREC, x) }
    }

    fn from_int(n: i64) -> Self {
        MpReal { lo: Float::with_val(PREC, n), hi: Float::with_val(PREC, n) }
    }

    fn from_biguint(n: &BigUint) -> Self {
        let int = Integer::from_str_radix(&n.to_str_radix(16), 16)
            .expect("hex round-trip of a natural number cannot fail");
        MpReal {
            lo: round_new(&int, Round::Down),
            hi: round_new(&int, Round::Up),
        }
        .check()
    }

    fn from_decimal(s: &str) -> Self {
        // `Float::parse` yields a one-shot lazy value, so parse twice to
        // materialize each rounding direction.
        let down = Float::parse(s).expect("invalid decimal literal");
        let up = Float::parse(s).expect("invalid decimal literal");
        MpReal {
            lo: round_new(down, Round::Down),
            hi: round_new(up, Round::Up),
        }
        .check()
    }

    fn add(&self, o: &Self) -> Self {
        MpReal {
            lo: round_new(&self.lo + &o.lo, Round::Down),
            hi: round_new(&self.hi + &o.hi, Round::Up),
        }
        .check()
    }

    fn sub(&self, o: &Self) -> Self {
        MpReal {
            lo: round_new(&self.lo - &o.hi, Round::Down),
            hi: round_new(&self.hi - &o.lo, Round::Up),
        }
        .check()
    }

    fn mul(&self, o: &Self) -> Self {
        let d = |a: &Float, b: &Float| round_new(a * b, Round::Down);
        let u = |a: &Float, b: &Float| round_new(a * b, Round::Up);
        let lo = fmin(
            &fmin(&d(&self.lo, &o.lo), &d(&self.lo, &o.hi)),
            &fmin(&d(&self.hi, &o.lo), &d(&self.hi, &o.hi)),
        );
        let hi = fmax(
            &fmax(&u(&self.lo, &o.lo), &u(&self.lo, &o.hi)),
            &fmax(&u(&self.hi, &o.lo), &u(&self.hi, &o.hi)),
        );
        MpReal { lo, hi }.check()
    }

    fn div(&self, o: &Self) -> Self {
        assert!(
            o.lo.is_sign_positive() && !o.lo.is_zero() || o.hi.is_sign_negative() && !o.hi.is_zero(),
            "division by an interval containing zero"
        );
        let d = |a: &Float, b: &Float| round_new(a / b, Round::Down);
        let u = |a: &Float, b: &Float| round_new(a / b, Round::Up);
        let lo = fmin(
            &fmin(&d(&self.lo, &o.lo), &d(&self.lo, &o.hi)),
            &fmin(&d(&self.hi, &o.lo), &d(&self.hi, &o.hi)),
        );
        let hi = fmax(
            &fmax(&u(&self.lo, &o.lo), &u(&self.lo, &o.hi)),
            &fmax(&u(&self.hi, &o.lo), &u(&self.hi, &o.hi)),
        );
        MpReal { lo, hi }.check()
    }

    fn neg(&self) -> Self {
        MpReal {
            lo: round_new(-self.hi.clone(), Round::Down),
            hi: round_new(-self.lo.clone(), Round::Up),
        }
        .check()
    }

    fn ln(&self) -> Self {
        assert!(self.lo.is_sign_positive() && !self.lo.is_zero(), "ln of nonpositive interval");
        let mut lo = self.lo.clone();
        lo.ln_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.ln_round(Round::Up);
        MpReal { lo, hi }.check()
    }

    fn exp(&self) -> Self {
        let mut lo = self.lo.clone();
        lo.exp_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.exp_round(Round::Up);
        MpReal { lo, hi }.check()
    }

    fn sqrt(&self) -> Self {
        assert!(!self.lo.is_sign_negative(), "sqrt of interval reaching below zero");
        let mut lo = self.lo.clone();
        lo.sqrt_round(Round::Down);
        let mut hi = self.hi.clone();
        hi.sqrt_round(Round::Up);
        MpReal { lo, hi }.check()
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::from_int(1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn min(&self, o: &Self) -> Self {
        MpReal { lo: fmin(&self.lo, &o.lo), hi: fmin(&self.hi, &o.hi) }.check()
    }

    fn max(&self, o: &Self) -> Self {
        MpReal { lo: fmax(&self.lo, &o.lo), hi: fmax(&self.hi, &o.hi) }.check()
    }

    fn hull(&self, o: &Self) -> Self {
        MpReal { lo: fmin(&self.lo, &o.lo), hi: fmax(&self.hi, &o.hi) }.check()
    }

    fn euler_gamma() -> Self {
        MpReal {
            lo: round_new(Constant::Euler, Round::Down),
            hi: round_new(Constant::Euler, Round::Up),
        }
        .check()
    }

    fn exp_gamma() -> Self {
        Self::euler_gamma().exp()
    }

    fn pi() -> Self {
        MpReal {
            lo: round_new(Constant::Pi, Round::Down),
            hi: round_new(Constant::Pi, Round::Up),
        }
        .check()
    }

    fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_bracket_is_tight_and_correct() {
        let g = MpReal::euler_gamma();
        // 0.57721566490153286060651209008240243104215933593992...
        assert!(g.lo_f64() <= 0.577_215_664_901_532_9);
        assert!(g.hi_f64() >= 0.577_215_664_901_532_8);
        assert!(g.width_f64() <= 1e-20, "gamma bracket too wide: {}", g.width_f64());
        assert!(g.mid_string(30).starts_with("5.7721566490153286060651209008"));
    }

    #[test]
    fn exp_gamma_digits() {
        let eg = MpReal::exp_gamma();
        // 1.7810724179901979852365041031071795491696452143034...
        assert!(eg.mid_string(30).starts_with("1.781072417990197985236504103"));
        assert!(eg.width_f64() < 1e-50);
    }

    #[test]
    fn directed_ops_stay_ordered_and_narrow() {
        let x = MpReal::from_decimal("3.1400000000000001");
        let y = x.ln().exp().sub(&x);
        assert!(y.lo_f64() <= 0.0 && y.hi_f64() >= 0.0);
        assert!(y.width_f64() < 1e-50);
    }

    #[test]
    fn from_biguint_is_exactly_representable() {
        let n = num_bigint::BigUint::parse_bytes(b"10000000000000000000000000000000", 10).unwrap();
        let x = MpReal::from_biguint(&n);
        // 10^31 needs 103 bits < 192, so both endpoints are exact and equal.
        assert_eq!(x.width_f64(), 0.0);
        assert!(x.mid_string(10).starts_with("1.0000000"));
    }

    #[test]
    fn division_respects_direction() {
        let a = MpReal::from_int(1);
        let b = MpReal::from_int(3);
        let q = a.div(&b);
        // the f64 nearest to 1/3 sits just below the true value, so the
        // down-rounded endpoint lands exactly on it
        assert!(q.lo_f64() <= 1.0 / 3.0);
        assert!(q.hi_f64() > 1.0 / 3.0);
        assert!(q.width_f64() < 1e-55);
    }
}
