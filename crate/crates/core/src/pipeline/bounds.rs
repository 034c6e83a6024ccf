//! The certified inequality chain at a given N: lower bound for the
//! sifted count S, upper bound for the weighted sifting sum (M₁, M₂, 𝓔),
//! the square-divisor condition, and the assembled witness-count margin.
//!
//! Every quantity is produced in the paper-facing scale √N/log X, via the
//! generic certified-real interface so the same formulas run on fast
//! `f64` intervals and on the high-precision backend.

use num_bigint::BigUint;
use thiserror::Error;

use super::params::{AdmissibilityError, Scales, SieveParams};
use crate::certified::bounds::{
    c_of_s, glasby_tail_upper, mertens_bracket, rosser_pi_upper, sieve_h, DomainError,
};
use crate::certified::{CertifiedReal, Decision};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("the certified pipeline requires N >= 10^31 (got {n})")]
    ScaleTooSmall { n: BigUint },
    #[error("epsilon-constant validity requires D-tilde >= 7080 (got about {d_tilde})")]
    EpsValidity { d_tilde: f64 },
    #[error("hypothesis failed: {what}")]
    Hypothesis { what: &'static str },
    #[error("C(s) is not certifiably positive, so the sifted lower bound collapses")]
    NonpositiveCs,
}

/// Upper bound for the weighted sifting sum, component by component.
/// All fields are in units √N/log X except the dimensionless prefactor.
#[derive(Clone, Debug)]
pub struct WeightedSumBound<R> {
    /// k₁e^{−γ}(1 + 1/(2 log²D̃))/k — multiplies M₁ + M₂.
    pub prefactor: R,
    pub m1_scaled: R,
    pub m2_scaled: R,
    pub e_scaled: R,
    /// prefactor·(M₁ + M₂) + 𝓔/k.
    pub total_scaled: R,
}

/// The square-divisor condition Σ_{z≤p<y} |A_{p²}| ≤ c·|A|^{1−δ},
/// expressed through coefficients of |A|^{1−δ}.
#[derive(Clone, Debug)]
pub struct Q0Bound<R> {
    /// |A|^{δ}·(tail bound for Σ_{p≥z} p⁻²).
    pub z_term: R,
    /// (prime-count bound at y)/|A|^{1−δ}.
    pub pi_term: R,
    pub lhs: R,
    pub rhs: R,
    pub decision: Decision,
}

/// Everything r₃ needs, prior to report formatting.
#[derive(Clone, Debug)]
pub struct MarginParts<R> {
    pub s_lower_scaled: R,
    pub weighted: WeightedSumBound<R>,
    pub q0_remainder_scaled: R,
    pub q0: Q0Bound<R>,
    pub margin: R,
}

pub(crate) fn require_scale(n: &BigUint) -> Result<(), PipelineError> {
    if *n < BigUint::from(10u32).pow(31) {
        return Err(PipelineError::ScaleTooSmall { n: n.clone() });
    }
    Ok(())
}

fn ensure_hypotheses<R: CertifiedReal>(sc: &Scales<R>) -> Result<(), PipelineError> {
    if sc.z.lo_f64() <= 1000.0 {
        return Err(PipelineError::Hypothesis { what: "z > 1000" });
    }
    if sc.z.decide_le(&sc.y) != Decision::Holds {
        return Err(PipelineError::Hypothesis { what: "z <= y" });
    }
    if sc.d_tilde.lo_f64() < 7080.0 {
        return Err(PipelineError::EpsValidity { d_tilde: sc.d_tilde.lo_f64() });
    }
    Ok(())
}

fn require_positive<R: CertifiedReal>(x: &R, what: &'static str) -> Result<(), PipelineError> {
    if x.lo_f64() > 0.0 {
        Ok(())
    } else {
        Err(PipelineError::Hypothesis { what })
    }
}

/// X^e as exp(e·log X).
fn x_pow<R: CertifiedReal>(sc: &Scales<R>, exponent: &R) -> R {
    sc.log_x.mul(exponent).exp()
}

/// Converts a raw count bound to √N/log X units.
fn to_scaled<R: CertifiedReal>(raw: &R, sc: &Scales<R>) -> R {
    raw.mul(&sc.log_x).div(&sc.sqrt_n)
}

/// Certified lower bound for (λ/k)·S(A, P, z) in units √N/log X:
/// (λ/k)·[e^{−γ}(2√N−1)/log z·(1 − 1/(2log²z))·C(s) − 1.22·X^{s/k₁}].
pub fn s_lower_bound<R: CertifiedReal>(
    n: &BigUint,
    params: &SieveParams,
) -> Result<R, PipelineError> {
    params.check_admissible()?;
    require_scale(n)?;
    let sc: Scales<R> = Scales::new(n, params);
    ensure_hypotheses(&sc)?;
    let raw = s_lower_raw(&sc, params)?;
    Ok(to_scaled(&raw, &sc))
}

pub(crate) fn s_lower_raw<R: CertifiedReal>(
    sc: &Scales<R>,
    params: &SieveParams,
) -> Result<R, PipelineError> {
    let eps = R::from_decimal(&params.eps_decimal);
    let c2 = R::from_int(i64::from(params.c2));
    let cs = c_of_s(&R::point(params.s), &eps, &c2)?;
    if cs.lo_f64() <= 0.0 {
        return Err(PipelineError::NonpositiveCs);
    }
    let bracket = mertens_bracket(&sc.z)?;
    let mert_lower = bracket
        .lower
        .ok_or(PipelineError::Hypothesis { what: "z >= 285 for the two-sided Mertens bound" })?;
    let two_sqrt_n_minus_1 = R::from_int(2).mul(&sc.sqrt_n).sub(&R::from_int(1));
    let main = mert_lower.mul(&two_sqrt_n_minus_1).mul(&cs);
    // squarefree remainder: Σ_{d<2D} μ²(d) ≤ 1.22·D at D = X^{s/k₁}
    let level = x_pow(sc, &R::point(params.s).div(&R::point(params.k1)));
    let remainder = R::from_decimal("1.22").mul(&level);
    let lambda_over_k = params.lambda::<R>().div(&R::from_int(i64::from(params.k)));
    Ok(lambda_over_k.mul(&main.sub(&remainder)))
}

/// Certified upper bound for (1/k)·Σ_{z≤p<y}(1 − log p/log y)·S(A_p, P, z)
/// in units √N/log X, with M₁, M₂, 𝓔 and the prefactor reported
/// separately.
pub fn weighted_sum_upper<R: CertifiedReal>(
    n: &BigUint,
    params: &SieveParams,
) -> Result<WeightedSumBound<R>, PipelineError> {
    params.check_admissible()?;
    require_scale(n)?;
    let sc: Scales<R> = Scales::new(n, params);
    ensure_hypotheses(&sc)?;
    weighted_sum_raw(&sc, params)
}

pub(crate) fn weighted_sum_raw<R: CertifiedReal>(
    sc: &Scales<R>,
    params: &SieveParams,
) -> Result<WeightedSumBound<R>, PipelineError> {
    let one = R::from_int(1);
    let two = R::from_int(2);
    let k = R::from_int(i64::from(params.k));
    let k1 = R::point(params.k1);
    let k2 = R::point(params.k2);
    let alpha = R::point(params.alpha);

    let one_minus_2a = one.sub(&two.mul(&alpha));
    let t_k1 = one_minus_2a.sub(&two.div(&k1));
    let t_k2 = one_minus_2a.sub(&two.div(&k2));
    require_positive(&t_k2, "1 - 2*alpha - 2/k2 > 0")?;
    require_positive(&t_k1, "1 - 2*alpha - 2/k1 > 0")?;
    let ln_ratio = k1.div(&k2).ln();
    let one_minus_ratio = one.sub(&k2.div(&k1));

    // i1 = (2·log(k1/k2) + (k2(1−2α)−2)·log(t_k2/t_k1)) / (1−2α)
    let i1 = two
        .mul(&ln_ratio)
        .add(&k2.mul(&one_minus_2a).sub(&two).mul(&t_k2.div(&t_k1).ln()))
        .div(&one_minus_2a);

    // i2 = 5k1³/((1/2 − α − 1/k1)·log³X)·(1 − k2/k1)
    let denom = R::point(0.5).sub(&alpha).sub(&one.div(&k1));
    require_positive(&denom, "1/2 - alpha - 1/k1 > 0")?;
    let log_x_cubed = sc.log_x.powi(3);
    let five_k1_cubed = R::from_int(5).mul(&k1.powi(3));
    let i2 = five_k1_cubed
        .div(&denom.mul(&log_x_cubed))
        .mul(&one_minus_ratio);

    // weighted reciprocal prime sum bound:
    // log(k1/k2) − 1 + k2/k1 + 5k1³/log³X·(1 − k2/k1)
    let wrs = ln_ratio
        .sub(&one)
        .add(&k2.div(&k1))
        .add(&five_k1_cubed.div(&log_x_cubed).mul(&one_minus_ratio));

    let eps = R::from_decimal(&params.eps_decimal);
    let c1 = R::from_int(i64::from(params.c1));
    let e_squared = two.exp();
    let k_alpha: R = params.k_alpha();
    let h_ka = sieve_h(&k_alpha)?;
    let eps_term = eps.mul(&c1).mul(&e_squared).mul(&h_ka);
    let exp_gamma = R::exp_gamma();

    // M₁·(log X/√N) = 2·[(2e^γ/k1)·(i1 + i2) + εC₁e²h(k_α)·wrs]
    let m1_scaled = two.mul(
        &two.mul(&exp_gamma)
            .div(&k1)
            .mul(&i1.add(&i2))
            .add(&eps_term.mul(&wrs)),
    );

    // M₂·(log X/√N) = (y/√N)·(1 − k2/k1)·(2e^γ/k_α + εC₁e²h(k_α))
    let m2_scaled = sc
        .y
        .div(&sc.sqrt_n)
        .mul(&one_minus_ratio)
        .mul(&two.mul(&exp_gamma).div(&k_alpha).add(&eps_term));

    // 𝓔·(log X/√N) = Q·X^{1/2−α}·wrs·log X/√N
    let half_minus_alpha = R::point(0.5).sub(&alpha);
    let e_scaled = R::from_int(i64::from(params.q))
        .mul(&x_pow(sc, &half_minus_alpha))
        .mul(&wrs)
        .mul(&sc.log_x)
        .div(&sc.sqrt_n);

    // prefactor = k₁e^{−γ}(1 + 1/(2 log²D̃))/k
    let ln_dt = sc.d_tilde.ln();
    let prefactor = k1
        .div(&exp_gamma)
        .mul(&one.add(&one.div(&two.mul(&ln_dt).mul(&ln_dt))))
        .div(&k);

    let total_scaled = prefactor
        .mul(&m1_scaled.add(&m2_scaled))
        .add(&e_scaled.div(&k));

    Ok(WeightedSumBound { prefactor, m1_scaled, m2_scaled, e_scaled, total_scaled })
}

/// Certified square-divisor condition at N: bounds
/// Σ_{z≤p<y}|A_{p²}| ≤ |A|·Σ_{p≥z}p⁻² + π(y) against c·|A|^{1−δ},
/// comparing coefficients of |A|^{1−δ}.
pub fn q0_check<R: CertifiedReal>(
    n: &BigUint,
    params: &SieveParams,
) -> Result<Q0Bound<R>, PipelineError> {
    params.check_admissible()?;
    require_scale(n)?;
    let sc: Scales<R> = Scales::new(n, params);
    q0_raw(&sc, params)
}

pub(crate) fn q0_raw<R: CertifiedReal>(
    sc: &Scales<R>,
    params: &SieveParams,
) -> Result<Q0Bound<R>, PipelineError> {
    let rhs = R::from_decimal(&params.c_decimal);
    if params.k1 <= params.k2 {
        // z = y: the sifting prime range is empty and the sum is zero
        let zero = R::from_int(0);
        let decision = zero.decide_le(&rhs);
        return Ok(Q0Bound {
            z_term: zero.clone(),
            pi_term: zero.clone(),
            lhs: zero,
            rhs,
            decision,
        });
    }
    let delta = R::from_decimal(&params.delta_decimal);
    // |A|·tail/|A|^{1−δ} = |A|^{δ}·tail
    let a_delta = sc.a_len.ln().mul(&delta).exp();
    let z_term = a_delta.mul(&glasby_tail_upper(&sc.z)?);
    let one_minus_delta = R::from_int(1).sub(&delta);
    let a_pow = sc.a_len.ln().mul(&one_minus_delta).exp();
    let pi_term = rosser_pi_upper(&sc.y)?.div(&a_pow);
    let lhs = z_term.add(&pi_term);
    let decision = lhs.decide_le(&rhs);
    Ok(Q0Bound { z_term, pi_term, lhs, rhs, decision })
}

/// (λc/k)·|A|^{1−δ} in units √N/log X — the loss from restricting A to A′.
pub(crate) fn q0_remainder_raw<R: CertifiedReal>(sc: &Scales<R>, params: &SieveParams) -> R {
    let one_minus_delta = R::from_int(1).sub(&R::from_decimal(&params.delta_decimal));
    let a_pow = sc.a_len.ln().mul(&one_minus_delta).exp();
    let lam_c_over_k = params
        .lambda::<R>()
        .mul(&R::from_decimal(&params.c_decimal))
        .div(&R::from_int(i64::from(params.k)));
    to_scaled(&lam_c_over_k.mul(&a_pow), sc)
}

/// Runs the whole chain at N on one backend.
pub fn margin_parts<R: CertifiedReal>(
    n: &BigUint,
    params: &SieveParams,
) -> Result<MarginParts<R>, PipelineError> {
    params.check_admissible()?;
    require_scale(n)?;
    let sc: Scales<R> = Scales::new(n, params);
    ensure_hypotheses(&sc)?;

    let q0 = q0_raw(&sc, params)?;
    if q0.decision != Decision::Holds {
        return Err(PipelineError::Hypothesis {
            what: "square-divisor condition lhs <= c",
        });
    }
    let s_lower_scaled = to_scaled(&s_lower_raw(&sc, params)?, &sc);
    let weighted = weighted_sum_raw(&sc, params)?;
    let q0_remainder_scaled = q0_remainder_raw(&sc, params);
    let margin = s_lower_scaled
        .sub(&weighted.total_scaled)
        .sub(&q0_remainder_scaled);
    Ok(MarginParts { s_lower_scaled, weighted, q0_remainder_scaled, q0, margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::{Enclosure, MpReal};

    fn n31() -> BigUint {
        BigUint::from(10u32).pow(31)
    }

    fn assert_digits(e: &Enclosure, value: f64, rel: f64) {
        assert!(e.contains(value), "{e} should contain {value}");
        assert!(e.rel_width() < rel, "{e} too wide for {value}");
    }

    #[test]
    fn s_lower_at_the_reference_point() {
        let b: Enclosure = s_lower_bound(&n31(), &SieveParams::default()).unwrap();
        assert_digits(&b, 2.096_570_090_025_172, 1e-10);
        assert!(b.lo() >= 2.095);
    }

    #[test]
    fn s_lower_at_s_equal_3_is_smaller_but_positive() {
        let mut p = SieveParams::default();
        p.s = 3.0;
        let b: Enclosure = s_lower_bound(&n31(), &p).unwrap();
        assert_digits(&b, 1.910_397_287_569_118_5, 1e-10);
        assert!(b.lo() > 0.0);
    }

    #[test]
    fn weighted_sum_components_at_the_reference_point() {
        let w: WeightedSumBound<Enclosure> =
            weighted_sum_upper(&n31(), &SieveParams::default()).unwrap();
        assert_digits(&w.prefactor, 1.506_697_833_481_052_7, 1e-10);
        assert_digits(&w.m1_scaled, 1.229_232_707_365_918_5, 1e-9);
        assert_digits(&w.m2_scaled, 4.255_023_212_062_687e-6, 1e-9);
        assert_digits(&w.e_scaled, 0.642_842_045_989_010_2, 1e-9);
        assert_digits(&w.total_scaled, 2.066_369_350_062_870_1, 1e-9);
        assert!(w.prefactor.hi() <= 1.507);
        assert!(w.m1_scaled.hi() <= 1.230);
        assert!(w.m2_scaled.hi() <= 4.6e-6);
        assert!(w.e_scaled.hi() / 3.0 <= 0.215);
        assert!(w.total_scaled.hi() <= 2.0687);
    }

    #[test]
    fn q0_coefficients_at_the_reference_point() {
        let q: Q0Bound<Enclosure> = q0_check(&n31(), &SieveParams::default()).unwrap();
        assert_digits(&q.z_term, 0.295_885_087_769_394_5, 1e-9);
        assert_digits(&q.pi_term, 4.016_954_844_164_352_9e-4, 1e-9);
        assert_digits(&q.lhs, 0.296_286_783_253_811, 1e-9);
        assert!(q.z_term.hi() <= 0.296);
        assert!(q.pi_term.hi() <= 6.5e-4);
        assert_eq!(q.decision, Decision::Holds);
    }

    #[test]
    fn q0_with_collapsed_prime_range_is_trivially_zero() {
        let mut p = SieveParams::default();
        p.k1 = p.k2; // z = y, empty range — still admissible
        let q: Q0Bound<Enclosure> = q0_check(&n31(), &p).unwrap();
        assert_eq!(q.lhs.hi(), 0.0);
        assert_eq!(q.decision, Decision::Holds);
    }

    #[test]
    fn margin_at_the_reference_point() {
        let parts: MarginParts<Enclosure> =
            margin_parts(&n31(), &SieveParams::default()).unwrap();
        assert_digits(&parts.margin, 0.028_885_323_822_430_24, 1e-7);
        assert!(parts.margin.lo() >= 0.0249);
        assert_digits(&parts.q0_remainder_scaled, 1.315_416_139_871_699e-3, 1e-9);
        assert!(parts.q0_remainder_scaled.hi() <= 0.0014);
    }

    #[test]
    fn margin_grows_with_n_on_the_sweep_endpoints() {
        let p = SieveParams::default();
        let at_31: MarginParts<Enclosure> = margin_parts(&n31(), &p).unwrap();
        let at_32: MarginParts<Enclosure> =
            margin_parts(&BigUint::from(10u32).pow(32), &p).unwrap();
        let at_50: MarginParts<Enclosure> =
            margin_parts(&BigUint::from(10u32).pow(50), &p).unwrap();
        assert_digits(&at_32.margin, 0.063_475_972_479_507_22, 1e-7);
        assert_digits(&at_50.margin, 0.308_775_041_491_972_25, 1e-7);
        assert!(at_31.margin.hi() < at_32.margin.lo());
        assert!(at_32.margin.hi() < at_50.margin.lo());
    }

    #[test]
    fn high_precision_backend_agrees_and_refines() {
        let p = SieveParams::default();
        let fast: MarginParts<Enclosure> = margin_parts(&n31(), &p).unwrap();
        let slow: MarginParts<MpReal> = margin_parts(&n31(), &p).unwrap();
        // the 192-bit enclosure must land inside the f64 one
        assert!(fast.margin.lo() <= slow.margin.lo_f64());
        assert!(slow.margin.hi_f64() <= fast.margin.hi());
        assert!(slow.margin.width_f64() < 1e-30);
    }

    #[test]
    fn scale_floor_is_enforced() {
        let err =
            s_lower_bound::<Enclosure>(&BigUint::from(10u32).pow(30), &SieveParams::default())
                .unwrap_err();
        assert!(matches!(err, PipelineError::ScaleTooSmall { .. }));
    }

    #[test]
    fn inadmissible_parameters_error_by_name() {
        let mut p = SieveParams::default();
        p.k2 = 4.2;
        let err = margin_parts::<Enclosure>(&n31(), &p).unwrap_err();
        assert!(matches!(
            err,
            PipelineError::Admissibility(AdmissibilityError::K2OutOfRange { .. })
        ));
    }

    #[test]
    fn eps_validity_floor_triggers_on_large_alpha() {
        // push alpha up: D_y = X^{1/2−α}/y shrinks below 7080 while the
        // rest stays admissible
        let mut p = SieveParams::default();
        p.alpha = 0.061;
        let result = weighted_sum_upper::<Enclosure>(&n31(), &p);
        assert!(matches!(result, Err(PipelineError::EpsValidity { .. })));
    }
}
