//! Sieve parameters, admissibility checking, and the derived scales
//! (X, z, y, D_y, D̃, w-cutoff) at a given N.

use num_bigint::BigUint;
use thiserror::Error;

use crate::certified::{CertifiedReal, Decision, Enclosure};

/// The tunable constants of the weighted-sieve argument.
///
/// `k` is the factor-count target (witnesses satisfy Ω ≤ k); `k1`, `k2`
/// set the sifting exponents z = X^{1/k1}, y = X^{1/k2}; `alpha` controls
/// the sieve level D_p = X^{1/2−α}/p; `s` is the sieve-function argument
/// for the lower bound; `eps`, `c1`, `c2` are the linear-sieve error
/// constants; `q` is the product of excluded moduli; `c`, `delta` are the
/// square-divisor condition constants; `n_ref` is the reference scale at
/// which z ≥ 7080 must hold.
#[derive(Clone, Debug, PartialEq)]
pub struct SieveParams {
    pub k: u32,
    pub k1: f64,
    pub k2: f64,
    pub alpha: f64,
    pub s: f64,
    /// Exact decimal literal for ε (kept as text so exact-rational
    /// consumers can parse it losslessly).
    pub eps_decimal: String,
    pub c1: u32,
    pub c2: u32,
    pub q: u32,
    /// Exact decimal literal for the square-divisor constant c.
    pub c_decimal: String,
    /// Exact decimal literal for δ.
    pub delta_decimal: String,
    pub n_ref: BigUint,
}

impl Default for SieveParams {
    /// The reference parameter point: k = 3, k₁ = 8, k₂ = 3.17, α = 0.06,
    /// s = 3.33, ε = 1.13·10⁻³, (C₁, C₂) = (115, 116), Q = 2, c = 0.297,
    /// δ = 1/4, N_ref = 10³¹.
    fn default() -> Self {
        SieveParams {
            k: 3,
            k1: 8.0,
            k2: 3.17,
            alpha: 0.06,
            s: 3.33,
            eps_decimal: "1.13e-3".to_string(),
            c1: 115,
            c2: 116,
            q: 2,
            c_decimal: "0.297".to_string(),
            delta_decimal: "0.25".to_string(),
            n_ref: BigUint::from(10u32).pow(31),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AdmissibilityError {
    #[error("k1 must satisfy k2 <= k1 <= 8 (got k1 = {k1}, k2 = {k2})")]
    K1OutOfRange { k1: f64, k2: f64 },
    #[error("k2 must satisfy 1 <= k2 < k+1 (got k2 = {k2}, k = {k})")]
    K2OutOfRange { k2: f64, k: u32 },
    #[error("alpha must satisfy 0 < alpha < 1/2 - 1/k2 (got alpha = {alpha}, k2 = {k2})")]
    AlphaOutOfRange { alpha: f64, k2: f64 },
    #[error("s must lie in [3, 4] (got {s})")]
    SOutOfRange { s: f64 },
    #[error("lambda = k+1-k2 must lie in (0, k] (got {lambda})")]
    LambdaOutOfRange { lambda: f64 },
    #[error("z = X^(1/k1) must be at least 7080 at the reference N (got z near {z})")]
    ZBelowFloor { z: f64 },
    #[error("only the excluded-modulus product q = 2 is supported (got {q})")]
    UnsupportedQ { q: u32 },
    #[error("k must be positive")]
    KZero,
}

impl SieveParams {
    /// λ = k + 1 − k₂, the weight offset.
    pub fn lambda<R: CertifiedReal>(&self) -> R {
        R::from_int(i64::from(self.k) + 1).sub(&R::point(self.k2))
    }

    /// k_α = k₁(1/2 − 1/k₂ − α), the argument fed to h.
    pub fn k_alpha<R: CertifiedReal>(&self) -> R {
        let half = R::point(0.5);
        let inv_k2 = R::from_int(1).div(&R::point(self.k2));
        R::point(self.k1).mul(&half.sub(&inv_k2).sub(&R::point(self.alpha)))
    }

    /// Validates every admissibility constraint, including the sifting
    /// floor z ≥ 7080 at the reference scale.
    pub fn check_admissible(&self) -> Result<(), AdmissibilityError> {
        if self.k == 0 {
            return Err(AdmissibilityError::KZero);
        }
        if !(self.k2 >= 1.0 && self.k2 < f64::from(self.k) + 1.0) {
            return Err(AdmissibilityError::K2OutOfRange { k2: self.k2, k: self.k });
        }
        if !(self.k1 >= self.k2 && self.k1 <= 8.0) {
            return Err(AdmissibilityError::K1OutOfRange { k1: self.k1, k2: self.k2 });
        }
        let alpha_sup = 0.5 - 1.0 / self.k2;
        if !(self.alpha > 0.0 && self.alpha < alpha_sup) {
            return Err(AdmissibilityError::AlphaOutOfRange { alpha: self.alpha, k2: self.k2 });
        }
        if !(3.0..=4.0).contains(&self.s) {
            return Err(AdmissibilityError::SOutOfRange { s: self.s });
        }
        let lambda = f64::from(self.k) + 1.0 - self.k2;
        if !(lambda > 0.0 && lambda <= f64::from(self.k)) {
            return Err(AdmissibilityError::LambdaOutOfRange { lambda });
        }
        if self.q != 2 {
            return Err(AdmissibilityError::UnsupportedQ { q: self.q });
        }
        // z = X(N_ref)^{1/k1} ≥ 7080, decided on certified endpoints
        let scales: Scales<Enclosure> = Scales::new(&self.n_ref, self);
        match Enclosure::point(7080.0).decide_le(&scales.z) {
            Decision::Holds => Ok(()),
            _ => Err(AdmissibilityError::ZBelowFloor { z: scales.z.lo_f64() }),
        }
    }
}

/// The derived scales at a given N, exact where integers allow
/// (X and |A| as big integers) and certified elsewhere.
#[derive(Clone, Debug)]
pub struct Scales<R: CertifiedReal> {
    /// X = N + ⌊2√N⌋, the largest element of A.
    pub x_exact: BigUint,
    /// |A| = ⌊2√N⌋.
    pub a_len_exact: BigUint,
    pub x: R,
    pub log_x: R,
    pub sqrt_n: R,
    pub a_len: R,
    /// z = X^{1/k1}.
    pub z: R,
    /// y = X^{1/k2}.
    pub y: R,
    /// D_y = X^{1/2−α}/y, the smallest sieve level over the prime range.
    pub d_y: R,
    /// D̃ = min(D_y, z).
    pub d_tilde: R,
    /// w = X^{1/2−α−1/k1}, the weight-sum cutoff scale.
    pub w_cut: R,
}

impl<R: CertifiedReal> Scales<R> {
    pub fn new(n: &BigUint, params: &SieveParams) -> Self {
        let four_n = n * 4u32;
        let a_len_exact = four_n.sqrt(); // ⌊2√N⌋ exactly
        let x_exact = n + &a_len_exact;

        let x = R::from_biguint(&x_exact);
        let log_x = x.ln();
        let sqrt_n = R::from_biguint(n).sqrt();
        let a_len = R::from_biguint(&a_len_exact);

        let z = log_x.div(&R::point(params.k1)).exp();
        let y = log_x.div(&R::point(params.k2)).exp();
        let half_minus_alpha = R::point(0.5).sub(&R::point(params.alpha));
        let d_y = log_x.mul(&half_minus_alpha).exp().div(&y);
        let d_tilde = d_y.min(&z);
        let inv_k1 = R::from_int(1).div(&R::point(params.k1));
        let w_cut = log_x.mul(&half_minus_alpha.sub(&inv_k1)).exp();

        Scales { x_exact, a_len_exact, x, log_x, sqrt_n, a_len, z, y, d_y, d_tilde, w_cut }
    }
}
