//! Exact searches and certified analytic bounds for almost-primes in the
//! gaps between consecutive squares.
//!
//! The library has four layers:
//!
//! * [`arith`] — deterministic primality, factorization, segmented prime
//!   sieves, and exact prime sums/products on machine integers.
//! * [`certified`] — outward-rounded interval arithmetic (`f64` and 192-bit
//!   MPFR backends) and the explicit analytic estimates evaluated on it.
//! * [`search`] — the exhaustive verifier: for each `n` it finds the least
//!   number of prime factors attained strictly between `n²` and `(n+1)²`,
//!   with parallel range driving, checkpoints, and semiprime witnesses.
//! * [`pipeline`] — the certified inequality chain that proves the interval
//!   property outright for inputs beyond exhaustive reach, together with a
//!   parameter optimizer and machine-readable reports.
//!
//! Everything user-facing is re-exported from the crate root by module; the
//! `intersquare` binary in this package is a thin CLI over these calls.

pub mod arith;
pub mod certified;
pub mod manifest;
pub mod pipeline;
pub mod search;
