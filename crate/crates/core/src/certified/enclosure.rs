//! Double-precision interval arithmetic with outward rounding.
//!
//! An [`Enclosure`] is a pair `[lo, hi]` of `f64` endpoints guaranteed to
//! bracket the exact real value of the expression it was built from. Basic
//! arithmetic widens each result by one unit in the last place (covering the
//! half-ulp rounding error of the underlying IEEE operation); `ln`, `exp`
//! and derived powers widen by four ulps, which covers the worst-case error
//! of the platform libm on top of argument rounding.
//!
//! Every inequality decided on enclosures uses the safe endpoint: an upper
//! bound is proven with `.hi`, a lower bound with `.lo`. Comparisons whose
//! endpoints overlap are *indeterminate*, never silently decided.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Widening applied after every libm call (`ln`, `exp`), in ulps.
const TRANSCENDENTAL_ULPS: u32 = 4;

/// A closed interval `[lo, hi]` certified to contain an exact real value.
#[derive(Clone, Copy, PartialEq)]
pub struct Enclosure {
    lo: f64,
    hi: f64,
}

/// Outcome of comparing two enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    /// The relation holds for every pair of points in the two intervals.
    Holds,
    /// The relation fails for every pair of points in the two intervals.
    Fails,
    /// The intervals overlap; the relation cannot be decided at this precision.
    Indeterminate,
}

fn down_ulps(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up_ulps(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

impl Enclosure {
    /// Compile-time constructor for frozen constant intervals.
    ///
    /// Endpoint validity (ordering, bracketing of the intended constant) is
    /// enforced by the tests next to each constant definition.
    pub(crate) const fn const_new(lo: f64, hi: f64) -> Self {
        Enclosure { lo, hi }
    }

    /// Builds an enclosure from explicit endpoints.
    ///
    /// Panics if `lo > hi` or either endpoint is NaN; infinite endpoints are
    /// allowed and represent one-sided overflow.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(!lo.is_nan() && !hi.is_nan(), "enclosure endpoint is NaN");
        assert!(lo <= hi, "inverted enclosure: [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    /// The degenerate interval `[x, x]`; `x` is taken as exact.
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "enclosure endpoint is NaN");
        Enclosure { lo: x, hi: x }
    }

    pub fn from_int(n: i64) -> Self {
        // i64 -> f64 is exact up to 2^53; widen outward past that.
        let x = n as f64;
        if x as i64 == n && x.abs() < 9.007_199_254_740_992e15 {
            Self::point(x)
        } else {
            Enclosure::new(x.next_down(), x.next_up())
        }
    }

    /// Tight two-sided rounding of an arbitrary-size natural number.
    pub fn from_biguint(n: &BigUint) -> Self {
        if let Some(small) = n.to_u64() {
            if small <= (1u64 << 53) {
                return Enclosure::point(small as f64); // exactly representable
            }
        }
        let approx = n.to_f64().unwrap_or(f64::INFINITY);
        if approx.is_infinite() {
            return Enclosure::new(f64::MAX, f64::INFINITY);
        }
        // `to_f64` truncates the 53-bit mantissa, so the true value lies in
        // [approx, approx + ulp); widen one ulp on each side to be safe
        // against either rounding convention.
        Enclosure::new(approx.next_down(), approx.next_up())
    }

    pub fn from_u128(n: u128) -> Self {
        if n <= (1u128 << 53) {
            return Enclosure::point(n as f64); // exactly representable
        }
        let x = n as f64; // rounds to nearest
        Enclosure::new(x.next_down(), x.next_up())
    }

    /// Encloses the exact value of a decimal literal such as `"1.13e-3"`.
    ///
    /// Rust's float parsing is correctly rounded to nearest, so the true
    /// decimal lies within half an ulp of the parsed value.
    pub fn from_decimal(s: &str) -> Result<Self, std::num::ParseFloatError> {
        let x: f64 = s.parse()?;
        Ok(Enclosure::new(x.next_down(), x.next_up()))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Width relative to the midpoint magnitude; 0 for the zero interval.
    pub fn rel_width(&self) -> f64 {
        let mid = (self.lo.abs() + self.hi.abs()) / 2.0;
        if mid == 0.0 {
            self.width()
        } else {
            self.width() / mid
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new((self.lo - o.hi).next_down(), (self.hi - o.lo).next_up())
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure::new(-self.hi, -self.lo)
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Enclosure::new(lo.next_down(), hi.next_up())
    }

    /// Interval division. Panics if the divisor contains zero; every formula
    /// in this crate divides by quantities bounded away from zero.
    pub fn div(&self, o: &Enclosure) -> Enclosure {
        assert!(
            o.lo > 0.0 || o.hi < 0.0,
            "division by an interval containing zero: [{}, {}]",
            o.lo,
            o.hi
        );
        let q = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Enclosure::new(lo.next_down(), hi.next_up())
    }

    pub fn recip(&self) -> Enclosure {
        Enclosure::point(1.0).div(self)
    }

    /// Square root; requires `lo >= 0`. IEEE sqrt is correctly rounded, so a
    /// single-ulp widening suffices.
    pub fn sqrt(&self) -> Enclosure {
        assert!(self.lo >= 0.0, "sqrt of an interval reaching below zero");
        Enclosure::new(self.lo.sqrt().next_down().max(0.0), self.hi.sqrt().next_up())
    }

    /// Natural logarithm; requires `lo > 0`.
    pub fn ln(&self) -> Enclosure {
        assert!(self.lo > 0.0, "ln of an interval reaching zero or below");
        Enclosure::new(
            down_ulps(self.lo.ln(), TRANSCENDENTAL_ULPS),
            up_ulps(self.hi.ln(), TRANSCENDENTAL_ULPS),
        )
    }

    pub fn exp(&self) -> Enclosure {
        Enclosure::new(
            down_ulps(self.lo.exp(), TRANSCENDENTAL_ULPS).max(0.0),
            up_ulps(self.hi.exp(), TRANSCENDENTAL_ULPS),
        )
    }

    /// Integer power by repeated interval multiplication (`k >= 0`).
    pub fn powi(&self, k: u32) -> Enclosure {
        let mut acc = Enclosure::point(1.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Elementwise minimum: encloses `min(x, y)` for `x` in self, `y` in `o`.
    pub fn min(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.min(o.lo), self.hi.min(o.hi))
    }

    /// Elementwise maximum: encloses `max(x, y)`.
    pub fn max(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.min(o.lo), self.hi.max(o.hi))
    }

    /// Decides `self <= other` (as a statement about the exact values).
    pub fn decide_le(&self, other: &Enclosure) -> Decision {
        if self.hi <= other.lo {
            Decision::Holds
        } else if self.lo > other.hi {
            Decision::Fails
        } else {
            Decision::Indeterminate
        }
    }

    /// Decides `self < other` strictly.
    pub fn decide_lt(&self, other: &Enclosure) -> Decision {
        if self.hi < other.lo {
            Decision::Holds
        } else if self.lo >= other.hi {
            Decision::Fails
        } else {
            Decision::Indeterminate
        }
    }

    /// Margin by which a `<=` decision clears, relative to the magnitudes
    /// involved; used to route near-ties to the high-precision fallback.
    pub fn le_margin(&self, other: &Enclosure) -> f64 {
        let gap = other.lo - self.hi;
        let scale = self.hi.abs().max(other.lo.abs()).max(1.0);
        gap / scale
    }
}

impl std::fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl std::fmt::Display for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;

    #[test]
    fn point_arithmetic_brackets_exact_values() {
        let a = Enclosure::point(0.1);
        let b = Enclosure::point(0.2);
        let s = a.add(&b);
        assert!(s.contains(0.1 + 0.2));
        assert!(s.width() <= 4.0 * f64::EPSILON);

        let p = a.mul(&b);
        assert!(p.contains(0.1 * 0.2));
    }

    #[test]
    fn ln_exp_enclose_reference_digits() {
        // ln 2 = 0.69314718055994530941..., e = 2.71828182845904523536...
        let l = Enclosure::point(2.0).ln();
        assert!(l.contains(0.693_147_180_559_945_3));
        assert!(l.width() < 1e-14);
        let e = Enclosure::point(1.0).exp();
        assert!(e.contains(2.718_281_828_459_045));
        // round trip stays a superset of the argument
        let rt = Enclosure::point(3.5).ln().exp();
        assert!(rt.contains(3.5));
    }

    #[test]
    fn sqrt_of_exact_square_is_tight() {
        let r = Enclosure::point(1.0e31).sqrt();
        assert!(r.contains(3.162_277_660_168_379_3e15));
        assert!(r.rel_width() < 1e-15);
    }

    #[test]
    fn division_by_zero_straddling_interval_panics() {
        let res = std::panic::catch_unwind(|| {
            Enclosure::point(1.0).div(&Enclosure::new(-1.0, 1.0))
        });
        assert!(res.is_err());
    }

    #[test]
    fn from_decimal_brackets_exact_rational() {
        let e = Enclosure::from_decimal("1.13e-3").unwrap();
        let exact = BigRational::new(113.into(), 100_000.into());
        let lo = BigRational::from_f64(e.lo()).unwrap();
        let hi = BigRational::from_f64(e.hi()).unwrap();
        assert!(lo <= exact && exact <= hi);
        assert!(e.width() < 1e-18);
    }

    #[test]
    fn from_biguint_brackets_huge_integers() {
        let n = BigUint::parse_bytes(b"10000000000000000000000000000000", 10).unwrap();
        let e = Enclosure::from_biguint(&n);
        assert!(e.lo() <= 1.0e31 && 1.0e31 <= e.hi());
        assert!(e.rel_width() < 1e-15);
    }

    #[test]
    fn decisions_use_safe_endpoints() {
        let a = Enclosure::new(1.0, 2.0);
        let b = Enclosure::new(2.0, 3.0);
        assert_eq!(a.decide_le(&b), Decision::Holds);
        assert_eq!(a.decide_lt(&b), Decision::Indeterminate);
        assert_eq!(b.decide_lt(&a), Decision::Fails);
    }

    #[test]
    fn min_max_hull_are_elementwise() {
        let a = Enclosure::new(1.0, 4.0);
        let b = Enclosure::new(2.0, 3.0);
        assert_eq!(a.min(&b), Enclosure::new(1.0, 3.0));
        assert_eq!(a.max(&b), Enclosure::new(2.0, 4.0));
        assert_eq!(a.hull(&b), Enclosure::new(1.0, 4.0));
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let x = Enclosure::point(1.1);
        let p = x.powi(3);
        assert!(p.contains(1.1 * 1.1 * 1.1));
    }
}
