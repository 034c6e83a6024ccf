//! Exact integer arithmetic: primality, factorization, prime sieves, and
//! exact prime sums/products.
//!
//! Everything here is deterministic and allocation-light; these routines
//! back both the interval search engine and the brute-force oracles that
//! cross-check the certified analytic bounds.

pub mod factor;
pub mod primality;
pub mod products;
pub mod sieve;
pub mod window;

pub use factor::{
    factorize, omega_exact, omega_up_to, FactorConfig, FactorError, Factorization, OmegaBound,
};
pub use primality::{classify, is_prime, Primality};
pub use products::{
    prime_product_enclosure, prime_product_exact, prime_recip_sq_sum_enclosure,
    prime_recip_sum_enclosure, ProductTransform,
};
pub use sieve::{
    mobius_up_to, pi_exact, segmented_primes, simple_primes, squarefree_count_exact,
    SegmentedPrimes,
};
pub use window::PrimeWindow;
