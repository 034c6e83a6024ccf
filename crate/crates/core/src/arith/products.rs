//! Exact and certified prime products and prime-reciprocal sums.
//!
//! The enclosure variants accumulate with outward rounding, so their results
//! are certified supersets of the exact values; the `BigRational` variant is
//! the exact oracle used by tests (practical only for modest prime counts).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::sieve::segmented_primes;
use crate::certified::enclosure::Enclosure;

/// Which function of the prime product to enclose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductTransform {
    /// `∏_{p<z} (1 − 1/p)`
    OneMinusInv,
    /// `∏_{p<z} (1 − 1/p)⁻¹`
    InvOfThat,
}

/// Certified enclosure of the prime product `∏_{p<z} (1 − 1/p)` (or its
/// reciprocal), accumulated with outward rounding. Requires `z ≥ 2`.
pub fn prime_product_enclosure(z: u64, transform: ProductTransform) -> Enclosure {
    assert!(z >= 2, "prime products start at z = 2");
    let one = Enclosure::point(1.0);
    let mut acc = one;
    for p in segmented_primes(2, z, 0) {
        // p < 2⁵³ always holds here, so the conversion is exact
        let term = one.sub(&one.div(&Enclosure::point(p as f64)));
        acc = acc.mul(&term);
    }
    match transform {
        ProductTransform::OneMinusInv => acc,
        ProductTransform::InvOfThat => one.div(&acc),
    }
}

/// Exact rational `∏_{p<z} (1 − 1/p)`; oracle-grade, intended for z ≤ 10⁵.
pub fn prime_product_exact(z: u64) -> BigRational {
    let mut acc = BigRational::one();
    for p in segmented_primes(2, z, 0) {
        let p = BigInt::from(p);
        acc *= BigRational::new(&p - 1, p);
    }
    acc
}

/// Certified enclosure of `Σ_{lo ≤ p < hi} 1/p`.
pub fn prime_recip_sum_enclosure(lo: u64, hi: u64) -> Enclosure {
    let one = Enclosure::point(1.0);
    let mut acc = Enclosure::point(0.0);
    for p in segmented_primes(lo, hi, 0) {
        acc = acc.add(&one.div(&Enclosure::point(p as f64)));
    }
    acc
}

/// Certified enclosure of `Σ_{lo ≤ p < hi} 1/p²`.
pub fn prime_recip_sq_sum_enclosure(lo: u64, hi: u64) -> Enclosure {
    let one = Enclosure::point(1.0);
    let mut acc = Enclosure::point(0.0);
    for p in segmented_primes(lo, hi, 0) {
        let pe = Enclosure::point(p as f64);
        acc = acc.add(&one.div(&pe.mul(&pe)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn single_factor_product() {
        let e = prime_product_enclosure(3, ProductTransform::OneMinusInv);
        assert!(e.contains(0.5));
        assert!(e.width() < 1e-15);
    }

    #[test]
    fn product_to_ten_is_eight_thirty_fifths() {
        let e = prime_product_enclosure(10, ProductTransform::OneMinusInv);
        assert!(e.contains(8.0 / 35.0));
        let exact = prime_product_exact(10);
        assert_eq!(exact, BigRational::new(8.into(), 35.into()));
        let inv = prime_product_enclosure(10, ProductTransform::InvOfThat);
        assert!(inv.contains(35.0 / 8.0));
    }

    #[test]
    fn enclosure_contains_exact_rational_product() {
        for z in [2u64, 3, 10, 100, 285, 1000, 7919] {
            let e = prime_product_enclosure(z, ProductTransform::OneMinusInv);
            let exact = prime_product_exact(z).to_f64().unwrap();
            assert!(
                e.lo() <= exact && exact <= e.hi(),
                "z={z}: {e:?} misses {exact}"
            );
            assert!(e.rel_width() < 1e-10, "z={z}: too wide {e:?}");
        }
    }

    #[test]
    fn reciprocal_sum_reference_values() {
        // Σ 1/p over [1009, 10⁶) = 0.68924797239258517...
        let s = prime_recip_sum_enclosure(1_009, 1_000_000);
        assert!(s.lo() <= 0.689_247_972_392_585_2 && 0.689_247_972_392_585_2 <= s.hi());
        assert!(s.rel_width() < 1e-9);
    }

    #[test]
    fn reciprocal_square_sum_reference_values() {
        // Σ 1/p² over [100, 10⁷) = 0.0018186259172565941...
        let s = prime_recip_sq_sum_enclosure(100, 10_000_000);
        assert!(s.lo() <= 1.818_625_917_256_594e-3 && 1.818_625_917_256_594e-3 <= s.hi());
        assert!(s.rel_width() < 1e-8);
    }
}
