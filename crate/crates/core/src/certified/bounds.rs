//! Certified evaluation of the explicit analytic estimates.
//!
//! Each function here encloses a closed-form bound from the literature on
//! prime products, prime counting, and the linear sieve. All of them are
//! generic over the interval backend, so a decision that comes out too close
//! at `f64` precision can be re-run verbatim at 192 bits.
//!
//! Domain preconditions are enforced conservatively: an argument interval
//! must lie entirely inside the validity region, otherwise the call returns
//! a [`DomainError`] instead of an unsound value.

use thiserror::Error;

use super::real::CertifiedReal;

/// An argument fell outside the validity region of a bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{function}: argument outside validity domain ({condition})")]
pub struct DomainError {
    pub function: &'static str,
    pub condition: &'static str,
}

fn require(ok: bool, function: &'static str, condition: &'static str) -> Result<(), DomainError> {
    if ok {
        Ok(())
    } else {
        Err(DomainError { function, condition })
    }
}

/// The four-branch sieve weight function
///
/// ```text
///        { 1/(s e²)      0 < s ≤ 1
/// h(s) = { e⁻²           1 ≤ s ≤ 2
///        { e⁻ˢ           2 ≤ s ≤ 3
///        { 3 e⁻ˢ / s     s ≥ 3
/// ```
///
/// The branches agree at the breakpoints, so an argument interval spanning a
/// breakpoint is evaluated branch-by-branch on the clipped pieces and hulled.
pub fn sieve_h<R: CertifiedReal>(s: &R) -> Result<R, DomainError> {
    require(s.lo_f64() > 0.0, "sieve_h", "s > 0")?;
    let e_m2 = R::from_int(-2).exp();
    let mut acc: Option<R> = None;
    let mut push = |piece: R| {
        acc = Some(match &acc {
            None => piece,
            Some(prev) => prev.hull(&piece),
        });
    };

    let (lo, hi) = (s.lo_f64(), s.hi_f64());
    if lo < 1.0 {
        // clip to [lo, 1]: elementwise min maps points above the breakpoint
        // onto it, where the neighbouring branch takes over continuously
        let sc = s.min(&R::from_int(1));
        push(e_m2.div(&sc));
    }
    if lo <= 2.0 && hi >= 1.0 {
        push(e_m2.clone());
    }
    if lo <= 3.0 && hi >= 2.0 {
        let sc = s.max(&R::from_int(2)).min(&R::from_int(3));
        push(sc.neg().exp());
    }
    if hi > 3.0 {
        let sc = s.max(&R::from_int(3));
        push(R::from_int(3).mul(&sc.neg().exp()).div(&sc));
    }
    Ok(acc.expect("at least one branch always intersects"))
}

/// Upper linear-sieve function `F(s) = 2e^γ / s`, valid on `0 < s ≤ 3`.
pub fn f_upper<R: CertifiedReal>(s: &R) -> Result<R, DomainError> {
    require(s.lo_f64() > 0.0 && s.hi_f64() <= 3.0, "f_upper", "0 < s <= 3")?;
    Ok(R::from_int(2).mul(&R::exp_gamma()).div(s))
}

/// Lower linear-sieve function `f(s) = 2e^γ ln(s−1) / s`, valid on `2 ≤ s ≤ 4`.
pub fn f_lower<R: CertifiedReal>(s: &R) -> Result<R, DomainError> {
    require(s.lo_f64() >= 2.0 && s.hi_f64() <= 4.0, "f_lower", "2 <= s <= 4")?;
    let sm1 = s.sub(&R::from_int(1));
    Ok(R::from_int(2).mul(&R::exp_gamma()).mul(&sm1.ln()).div(s))
}

/// Main-term coefficient of the sieve lower bound after folding in the
/// truncation penalty:
///
/// ```text
/// C(s) = (2e^γ ln(s−1) − eps·c2·e²·h(s)·s) / s,   h(s) = 3e⁻ˢ/s on s ≥ 3,
/// ```
///
/// i.e. the penalty term reduces to `3·eps·c2·e^{2−s}`. Valid on `3 ≤ s ≤ 4`.
pub fn c_of_s<R: CertifiedReal>(s: &R, eps: &R, c2: &R) -> Result<R, DomainError> {
    require(s.lo_f64() >= 3.0 && s.hi_f64() <= 4.0, "c_of_s", "3 <= s <= 4")?;
    let main = R::from_int(2).mul(&R::exp_gamma()).mul(&s.sub(&R::from_int(1)).ln());
    let penalty = R::from_int(3)
        .mul(eps)
        .mul(c2)
        .mul(&R::from_int(2).sub(s).exp());
    Ok(main.sub(&penalty).div(s))
}

/// Two-sided bracket for the prime product `∏_{p<z} (1 − 1/p)`.
#[derive(Clone, Debug)]
pub struct MertensBracket<R> {
    /// `e^{−γ}/ln z · (1 − 1/(2 ln² z))`; only sound for `z ≥ 285`.
    pub lower: Option<R>,
    /// `e^{−γ}/ln z · (1 + 1/(2 ln² z))`; sound for all `z > 1`.
    pub upper: R,
}

/// Classical bracket around the Mertens product. The upper estimate holds
/// for every `z > 1`; the lower one only from `z = 285` on, so it is omitted
/// below that point rather than returned unsoundly.
pub fn mertens_bracket<R: CertifiedReal>(z: &R) -> Result<MertensBracket<R>, DomainError> {
    require(z.lo_f64() > 1.0, "mertens_bracket", "z > 1")?;
    let ln_z = z.ln();
    let base = R::from_int(1).div(&R::exp_gamma()).div(&ln_z);
    let half_inv_sq = R::from_int(1).div(&R::from_int(2).mul(&ln_z).mul(&ln_z));
    let upper = base.mul(&R::from_int(1).add(&half_inv_sq));
    let lower = if z.lo_f64() >= 285.0 {
        Some(base.mul(&R::from_int(1).sub(&half_inv_sq)))
    } else {
        None
    };
    Ok(MertensBracket { lower, upper })
}

/// Tail bound `Σ_{p ≥ a} 1/p² ≤ 2.22/(a ln a)`, valid for `a ≥ 12`.
pub fn glasby_tail_upper<R: CertifiedReal>(a: &R) -> Result<R, DomainError> {
    require(a.lo_f64() >= 12.0, "glasby_tail_upper", "a >= 12")?;
    Ok(R::from_decimal("2.22").div(&a.mul(&a.ln())))
}

/// Prime-reciprocal partial sum bound
/// `Σ_{a ≤ p < b} 1/p ≤ ln ln b − ln ln a + 5/ln³ a`, valid for `b > a > 1000`.
pub fn vanlalngaia_upper<R: CertifiedReal>(a: &R, b: &R) -> Result<R, DomainError> {
    require(a.lo_f64() > 1000.0, "vanlalngaia_upper", "a > 1000")?;
    require(b.lo_f64() > a.hi_f64(), "vanlalngaia_upper", "b > a")?;
    let ln_a = a.ln();
    let tail = R::from_int(5).div(&ln_a.powi(3));
    Ok(b.ln().ln().sub(&ln_a.ln()).add(&tail))
}

/// Chebyshev-type bound `π(x) < x/ln x · (1 + 3/(2 ln x))`, valid for `x > 1`.
pub fn rosser_pi_upper<R: CertifiedReal>(x: &R) -> Result<R, DomainError> {
    require(x.lo_f64() > 1.0, "rosser_pi_upper", "x > 1")?;
    let ln_x = x.ln();
    let corr = R::from_int(3).div(&R::from_int(2).mul(&ln_x));
    Ok(x.div(&ln_x).mul(&R::from_int(1).add(&corr)))
}

/// Squarefree-counting bound `Σ_{d ≤ x} μ²(d) ≤ (6/π²)x + 0.5√x`, for `x ≥ 10`.
pub fn squarefree_count_upper<R: CertifiedReal>(x: &R) -> Result<R, DomainError> {
    require(x.lo_f64() >= 10.0, "squarefree_count_upper", "x >= 10")?;
    let density = R::from_int(6).div(&R::pi().powi(2));
    Ok(density.mul(x).add(&R::from_decimal("0.5").mul(&x.sqrt())))
}
