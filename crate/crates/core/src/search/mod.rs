//! Search engines over the open intervals between consecutive squares:
//! per-interval minimum-Ω search, bulk range verification with durable
//! checkpoints, exact semiprime witness construction, and prime-gap
//! scanning.

pub mod gaps;
pub mod interval;
pub mod range;
pub mod witness;

pub use gaps::max_gap_below;
pub use interval::{find_almost_prime, min_omega_in_interval, IntervalSpec};
pub use range::{verify_range, RangeError, RangeReport};
pub use witness::{
    semiprime_witness, sup_endpoint_lt_limit, SemiprimeWitness, WitnessChecks, WitnessError,
};
