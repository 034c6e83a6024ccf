//! The explicit weighted-sieve pipeline: admissible parameter points,
//! scale quantities at a given N, exact small-N reference computations,
//! the certified inequality chain, margin reports, and the parameter
//! optimizer.

pub mod bounds;
pub mod exact;
pub mod optimizer;
pub mod params;
pub mod report;

pub use bounds::{
    margin_parts, q0_check, s_lower_bound, weighted_sum_upper, MarginParts, PipelineError,
    Q0Bound, WeightedSumBound,
};
pub use exact::{
    a_range, q0_exact, richert_weight, rk_direct, s_ap_direct, s_direct, w_direct, w_direct_at,
};
pub use optimizer::{
    optimize, render_trace, sensitivity, sensitivity_with_steps, OptimizeOutcome,
    OptimizerError, SearchSpace, SensitivityRow, SensitivitySteps, Stencil, TraceEntry,
};
pub use params::{AdmissibilityError, Scales, SieveParams};
pub use report::{margin_sweep, r3_margin, BoundReport, Direction, ReportField, SweepReport};
