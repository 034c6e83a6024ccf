//! Frozen numerical constants shared across the bound machinery.
//!
//! The interval endpoints here were chosen to bracket the true constants
//! with a few ulps of slack; the tests in this module re-derive each one
//! from MPFR at 192 bits and check containment, so a typo in an endpoint
//! cannot survive `cargo test`.

use super::enclosure::Enclosure;
use super::hp::MpReal;
use super::real::CertifiedReal;

/// Euler–Mascheroni constant γ = 0.5772156649015328606...
pub const GAMMA_F64: Enclosure =
    Enclosure::const_new(0.577_215_664_901_532_8, 0.577_215_664_901_533_0);

/// e^γ = 1.7810724179901979852...
pub const EXP_GAMMA_F64: Enclosure =
    Enclosure::const_new(1.781_072_417_990_197_7, 1.781_072_417_990_198_2);

/// e^-γ = 0.5614594835668851698...
pub const EXP_NEG_GAMMA_F64: Enclosure =
    Enclosure::const_new(0.561_459_483_566_885_1, 0.561_459_483_566_885_3);

/// π = 3.1415926535897932384...
pub const PI_F64: Enclosure =
    Enclosure::const_new(3.141_592_653_589_793, 3.141_592_653_589_793_6);

/// Default slack in the truncated Euler-product comparison.
pub const EPSILON_DEFAULT: &str = "1.13e-3";

/// Scale constants multiplying the epsilon slack in the main-term estimates.
pub const C_UPPER: u32 = 115;
pub const C_LOWER: u32 = 116;

/// Every gap between consecutive primes below [`MAX_GAP_LIMIT`] is at most
/// this, per exhaustive computation; it caps the distance from any point
/// under the limit to the next prime.
pub const MAX_GAP_BOUND: u64 = 1724;

/// Upper limit (6.8e19, within `u64` range would overflow — kept as `u128`)
/// up to which [`MAX_GAP_BOUND`] has been exhaustively verified.
pub const MAX_GAP_LIMIT: u128 = 68_000_000_000_000_000_000;

/// Exhaustive-search frontier for the squarefree-semiprime construction:
/// below this every interval between consecutive squares has been checked
/// directly, so the analytic argument only needs to cover larger inputs.
pub const SEMIPRIME_SEARCH_LIMIT: u64 = 70_500_000_000_000;

/// A bracket on γ at 192-bit precision, guaranteed narrower than 1e-20.
pub fn gamma_tight() -> MpReal {
    let g = MpReal::euler_gamma();
    assert!(g.width_f64() <= 1e-20, "gamma bracket unexpectedly wide");
    g
}

/// Bundle of all frozen constants, for callers that want one handle.
#[derive(Clone, Debug)]
pub struct Constants {
    pub gamma: Enclosure,
    pub e_gamma: Enclosure,
    pub c1: u32,
    pub c2: u32,
    pub eps: Enclosure,
    pub gap_bound: u64,
    pub gap_limit: u128,
    pub sw_limit: u64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            gamma: GAMMA_F64,
            e_gamma: EXP_GAMMA_F64,
            c1: C_UPPER,
            c2: C_LOWER,
            eps: Enclosure::from_decimal(EPSILON_DEFAULT).expect("frozen literal parses"),
            gap_bound: MAX_GAP_BOUND,
            gap_limit: MAX_GAP_LIMIT,
            sw_limit: SEMIPRIME_SEARCH_LIMIT,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Each frozen `f64` interval must contain the 192-bit MPFR bracket of
    /// the same constant (which is itself certified by directed rounding).
    #[test]
    fn f64_constants_contain_mpfr_brackets() {
        let g = MpReal::euler_gamma();
        assert!(GAMMA_F64.lo() <= g.lo_f64() && g.hi_f64() <= GAMMA_F64.hi());

        let eg = MpReal::exp_gamma();
        assert!(EXP_GAMMA_F64.lo() <= eg.lo_f64() && eg.hi_f64() <= EXP_GAMMA_F64.hi());

        let eng = MpReal::from_int(1).div(&MpReal::exp_gamma());
        assert!(EXP_NEG_GAMMA_F64.lo() <= eng.lo_f64() && eng.hi_f64() <= EXP_NEG_GAMMA_F64.hi());

        let pi = MpReal::pi();
        assert!(PI_F64.lo() <= pi.lo_f64() && pi.hi_f64() <= PI_F64.hi());
    }

    #[test]
    fn f64_constants_are_tight() {
        assert!(GAMMA_F64.rel_width() < 1e-15);
        assert!(EXP_GAMMA_F64.rel_width() < 1e-15);
        assert!(EXP_NEG_GAMMA_F64.rel_width() < 1e-15);
    }

    #[test]
    fn gamma_tight_meets_width_contract() {
        let g = gamma_tight();
        assert!(g.width_f64() <= 1e-20);
        // digit 40 of the mantissa rounds 421|59… up to 422
        assert!(g.mid_string(40).starts_with("5.772156649015328606065120900824024310422"));
    }

    #[test]
    fn reciprocal_identity_between_gamma_exponentials() {
        let prod = EXP_GAMMA_F64.mul(&EXP_NEG_GAMMA_F64);
        assert!(prod.contains(1.0));
        assert!(prod.rel_width() < 1e-14);
    }
}
