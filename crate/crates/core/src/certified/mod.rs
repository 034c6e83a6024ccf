//! Certified interval arithmetic and analytic bound evaluation.
//!
//! The submodules are layered: [`enclosure`] provides the fast `f64`
//! backend, [`hp`] the 192-bit MPFR backend, [`real`] the trait both
//! implement, [`constants`] the frozen constants, [`bounds`] the analytic
//! estimates written generically over the trait, [`mertens`] the
//! exhaustive verifier for the truncated Euler-product comparison, and
//! [`decimal`] exact decimal-to-rational parsing.

pub mod bounds;
pub mod constants;
pub mod decimal;
pub mod enclosure;
pub mod hp;
pub mod mertens;
pub mod real;

pub use enclosure::{Decision, Enclosure};
pub use hp::MpReal;
pub use real::CertifiedReal;
