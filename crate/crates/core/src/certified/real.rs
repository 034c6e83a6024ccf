//! Abstraction over certified interval backends.
//!
//! Every bound formula in this crate is written once, generically over
//! [`CertifiedReal`], and evaluated with two backends: fast `f64` enclosures
//! ([`Enclosure`](super::enclosure::Enclosure)) for the common case, and
//! 192-bit directed-rounding floats ([`MpReal`](super::hp::MpReal)) to
//! re-decide any inequality that the fast backend settles by less than a
//! configurable margin.

use num_bigint::BigUint;

use super::enclosure::{Decision, Enclosure};

/// An interval number type with outward-rounded arithmetic.
///
/// Implementations must guarantee the containment invariant: if the inputs
/// enclose exact reals, the output encloses the exact result.
pub trait CertifiedReal: Clone {
    fn point(x: f64) -> Self;
    fn from_int(n: i64) -> Self;
    fn from_biguint(n: &BigUint) -> Self;
    /// Encloses the exact value denoted by a decimal literal.
    fn from_decimal(s: &str) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;

    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powi(&self, k: u32) -> Self;

    fn min(&self, o: &Self) -> Self;
    fn max(&self, o: &Self) -> Self;
    fn hull(&self, o: &Self) -> Self;

    /// Euler–Mascheroni constant, enclosed.
    fn euler_gamma() -> Self;
    /// `exp(euler_gamma)`, enclosed.
    fn exp_gamma() -> Self;
    /// The circle constant π, enclosed.
    fn pi() -> Self;

    /// Lower endpoint, rounded down into `f64` if the backend is wider.
    fn lo_f64(&self) -> f64;
    /// Upper endpoint, rounded up into `f64` if the backend is wider.
    fn hi_f64(&self) -> f64;

    /// Collapses to an `f64` enclosure (used for reporting).
    fn to_enclosure(&self) -> Enclosure {
        Enclosure::new(self.lo_f64(), self.hi_f64())
    }

    fn decide_le(&self, o: &Self) -> Decision {
        if self.hi_f64() <= o.lo_f64() {
            Decision::Holds
        } else if self.lo_f64() > o.hi_f64() {
            Decision::Fails
        } else {
            Decision::Indeterminate
        }
    }

    fn decide_lt(&self, o: &Self) -> Decision {
        if self.hi_f64() < o.lo_f64() {
            Decision::Holds
        } else if self.lo_f64() >= o.hi_f64() {
            Decision::Fails
        } else {
            Decision::Indeterminate
        }
    }
}

impl CertifiedReal for Enclosure {
    fn point(x: f64) -> Self {
        Enclosure::point(x)
    }

    fn from_int(n: i64) -> Self {
        Enclosure::from_int(n)
    }

    fn from_biguint(n: &BigUint) -> Self {
        Enclosure::from_biguint(n)
    }

    fn from_decimal(s: &str) -> Self {
        Enclosure::from_decimal(s).expect("invalid decimal literal")
    }

    fn add(&self, o: &Self) -> Self {
        Enclosure::add(self, o)
    }

    fn sub(&self, o: &Self) -> Self {
        Enclosure::sub(self, o)
    }

    fn mul(&self, o: &Self) -> Self {
        Enclosure::mul(self, o)
    }

    fn div(&self, o: &Self) -> Self {
        Enclosure::div(self, o)
    }

    fn neg(&self) -> Self {
        Enclosure::neg(self)
    }

    fn ln(&self) -> Self {
        Enclosure::ln(self)
    }

    fn exp(&self) -> Self {
        Enclosure::exp(self)
    }

    fn sqrt(&self) -> Self {
        Enclosure::sqrt(self)
    }

    fn powi(&self, k: u32) -> Self {
        Enclosure::powi(self, k)
    }

    fn min(&self, o: &Self) -> Self {
        Enclosure::min(self, o)
    }

    fn max(&self, o: &Self) -> Self {
        Enclosure::max(self, o)
    }

    fn hull(&self, o: &Self) -> Self {
        Enclosure::hull(self, o)
    }

    fn euler_gamma() -> Self {
        super::constants::GAMMA_F64
    }

    fn exp_gamma() -> Self {
        super::constants::EXP_GAMMA_F64
    }

    fn pi() -> Self {
        super::constants::PI_F64
    }

    fn lo_f64(&self) -> f64 {
        self.lo()
    }

    fn hi_f64(&self) -> f64 {
        self.hi()
    }

    fn to_enclosure(&self) -> Enclosure {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_expr<R: CertifiedReal>() -> R {
        // (ln 10)^2 / sqrt(4) = 2.65094905523...
        let ten = R::from_int(10);
        ten.ln().powi(2).div(&R::from_int(4).sqrt())
    }

    #[test]
    fn trait_dispatch_matches_direct_enclosure() {
        let via_trait: Enclosure = generic_expr();
        assert!(via_trait.contains(2.650_949_055_239_199));
        assert!(via_trait.rel_width() < 1e-13);
    }

    #[test]
    fn gamma_constants_are_consistent() {
        let g: Enclosure = <Enclosure as CertifiedReal>::euler_gamma();
        let eg: Enclosure = <Enclosure as CertifiedReal>::exp_gamma();
        // exp(gamma) computed from gamma must overlap the stored constant
        let eg2 = g.exp();
        assert!(eg2.lo() <= eg.hi() && eg.lo() <= eg2.hi());
    }
}
