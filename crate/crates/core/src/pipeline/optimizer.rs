//! Constrained search over (k1, k2, alpha, s) maximizing the certified
//! margin at a reference N: seeded coarse grid scan plus coordinate
//! descent, with an evaluation trace, and finite-difference sensitivity
//! estimates around a point.
//!
//! The objective is always the *lower* endpoint of the certified margin
//! enclosure, so any reported optimum is sound by construction. ε and
//! (C₁, C₂) stay fixed: their validity table is external data, and the
//! z ≥ 7080 floor it requires is enforced by the admissibility check at
//! every sampled point.

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use super::bounds::{require_scale, PipelineError};
use super::params::SieveParams;
use super::report::{r3_margin, refined_margin_parts, BoundReport};
use crate::certified::Enclosure;

/// Axis boxes plus sampling resolution for [`optimize`].
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub k1: (f64, f64),
    pub k2: (f64, f64),
    pub alpha: (f64, f64),
    pub s: (f64, f64),
    /// Grid points per axis in the coarse scan (1 = axis midpoint only).
    pub grid: usize,
    /// Coordinate-descent rounds; the step halves after each round.
    pub depth: u32,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace {
            k1: (6.0, 8.0),
            k2: (2.4, 3.9),
            alpha: (0.01, 0.12),
            s: (3.0, 4.0),
            grid: 5,
            depth: 3,
        }
    }
}

impl SearchSpace {
    /// A space holding exactly one point, for consistency checks.
    pub fn collapsed(params: &SieveParams) -> SearchSpace {
        SearchSpace {
            k1: (params.k1, params.k1),
            k2: (params.k2, params.k2),
            alpha: (params.alpha, params.alpha),
            s: (params.s, params.s),
            grid: 1,
            depth: 0,
        }
    }

    fn contains(&self, p: &Point) -> bool {
        self.k1.0 <= p.k1
            && p.k1 <= self.k1.1
            && self.k2.0 <= p.k2
            && p.k2 <= self.k2.1
            && self.alpha.0 <= p.alpha
            && p.alpha <= self.alpha.1
            && self.s.0 <= p.s
            && p.s <= self.s.1
    }

    fn validate(&self) -> Result<(), OptimizerError> {
        for (name, (lo, hi)) in [
            ("k1", self.k1),
            ("k2", self.k2),
            ("alpha", self.alpha),
            ("s", self.s),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(OptimizerError::InvalidSpace { what: name });
            }
        }
        if self.grid == 0 {
            return Err(OptimizerError::InvalidSpace { what: "grid" });
        }
        Ok(())
    }

    fn axis_values(range: (f64, f64), grid: usize) -> Vec<f64> {
        if grid == 1 || range.0 == range.1 {
            return vec![(range.0 + range.1) / 2.0];
        }
        (0..grid)
            .map(|i| range.0 + (range.1 - range.0) * i as f64 / (grid - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error("search space is degenerate: bad {what}")]
    InvalidSpace { what: &'static str },
    #[error("no admissible point in the search space")]
    NoAdmissiblePoint,
    #[error("finite-difference step for {parameter} must be positive")]
    ZeroStep { parameter: &'static str },
    #[error("margin is not evaluable on either side of {parameter}")]
    NotDifferentiable { parameter: &'static str },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Point {
    k1: f64,
    k2: f64,
    alpha: f64,
    s: f64,
}

impl Point {
    fn lex_key(&self) -> [f64; 4] {
        [self.k1, self.k2, self.alpha, self.s]
    }

    fn lex_less(&self, other: &Point) -> bool {
        let (a, b) = (self.lex_key(), other.lex_key());
        for i in 0..4 {
            match a[i].partial_cmp(&b[i]).expect("finite axis values") {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        false
    }
}

/// One evaluation in the optimize trace.
#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub k1: f64,
    pub k2: f64,
    pub alpha: f64,
    pub s: f64,
    /// Present for successful evaluations.
    pub margin: Option<Enclosure>,
    /// `ok`, or `skipped:<reason>` — always a single space-free token.
    pub status: String,
}

impl TraceEntry {
    /// `k1 k2 alpha s margin_lo margin_hi status`
    pub fn render(&self) -> String {
        match &self.margin {
            Some(m) => format!(
                "{} {} {} {} {:e} {:e} {}",
                self.k1,
                self.k2,
                self.alpha,
                self.s,
                m.lo(),
                m.hi(),
                self.status
            ),
            None => format!(
                "{} {} {} {} - - {}",
                self.k1, self.k2, self.alpha, self.s, self.status
            ),
        }
    }
}

pub fn render_trace(trace: &[TraceEntry]) -> String {
    let mut out = String::new();
    for entry in trace {
        out.push_str(&entry.render());
        out.push('\n');
    }
    out
}

#[derive(Debug)]
pub struct OptimizeOutcome {
    pub best: SieveParams,
    /// Fresh `r3_margin` evaluation of `best` — never a cached value.
    pub report: BoundReport,
    pub trace: Vec<TraceEntry>,
}

fn skip_token(err: &PipelineError) -> String {
    use super::params::AdmissibilityError as A;
    let token = match err {
        PipelineError::Admissibility(a) => match a {
            A::K1OutOfRange { .. } => "k1-out-of-range",
            A::K2OutOfRange { .. } => "k2-out-of-range",
            A::AlphaOutOfRange { .. } => "alpha-out-of-range",
            A::SOutOfRange { .. } => "s-out-of-range",
            A::LambdaOutOfRange { .. } => "lambda-out-of-range",
            A::ZBelowFloor { .. } => "z-below-floor",
            A::UnsupportedQ { .. } => "unsupported-q",
            A::KZero => "k-zero",
        },
        PipelineError::Domain(_) => "domain",
        PipelineError::ScaleTooSmall { .. } => "scale-too-small",
        PipelineError::EpsValidity { .. } => "eps-validity",
        PipelineError::Hypothesis { .. } => "hypothesis",
        PipelineError::NonpositiveCs => "nonpositive-cs",
    };
    format!("skipped:{token}")
}

fn params_at(point: &Point, n_ref: &BigUint) -> SieveParams {
    let mut p = SieveParams::default();
    p.k1 = point.k1;
    p.k2 = point.k2;
    p.alpha = point.alpha;
    p.s = point.s;
    p.n_ref = n_ref.clone();
    p
}

fn evaluate(point: &Point, n_ref: &BigUint) -> TraceEntry {
    let params = params_at(point, n_ref);
    match refined_margin_parts(n_ref, &params) {
        Ok((parts, _)) => TraceEntry {
            k1: point.k1,
            k2: point.k2,
            alpha: point.alpha,
            s: point.s,
            margin: Some(parts.margin),
            status: "ok".to_string(),
        },
        Err(err) => TraceEntry {
            k1: point.k1,
            k2: point.k2,
            alpha: point.alpha,
            s: point.s,
            margin: None,
            status: skip_token(&err),
        },
    }
}

/// `candidate` replaces `incumbent` iff its certified margin.lo is
/// strictly larger, or equal with a lexicographically smaller
/// (k1, k2, alpha, s).
fn improves(candidate: (&Point, f64), incumbent: (&Point, f64)) -> bool {
    if candidate.1 != incumbent.1 {
        return candidate.1 > incumbent.1;
    }
    candidate.0.lex_less(incumbent.0)
}

/// Maximizes the certified margin at `n_ref` over `space`.
///
/// Seed points (the reference parameter point and the box midpoint, when
/// inside the box) are evaluated first, then a `grid`⁴ coarse scan, then
/// `depth` rounds of coordinate descent with per-round step halving.
/// Inadmissible samples are skipped with a logged reason. The result
/// never falls below the best seed, ties break to the lexicographically
/// smallest point, and the reported optimum is re-evaluated fresh.
pub fn optimize(
    n_ref: &BigUint,
    space: &SearchSpace,
) -> Result<OptimizeOutcome, OptimizerError> {
    space.validate()?;
    require_scale(n_ref).map_err(OptimizerError::Pipeline)?;

    let reference = SieveParams::default();
    let mut seeds: Vec<Point> = Vec::new();
    let paper_point = Point {
        k1: reference.k1,
        k2: reference.k2,
        alpha: reference.alpha,
        s: reference.s,
    };
    if space.contains(&paper_point) {
        seeds.push(paper_point);
    }
    let midpoint = Point {
        k1: (space.k1.0 + space.k1.1) / 2.0,
        k2: (space.k2.0 + space.k2.1) / 2.0,
        alpha: (space.alpha.0 + space.alpha.1) / 2.0,
        s: (space.s.0 + space.s.1) / 2.0,
    };
    if seeds.iter().all(|s| s != &midpoint) {
        seeds.push(midpoint);
    }

    let mut trace: Vec<TraceEntry> = seeds.iter().map(|p| evaluate(p, n_ref)).collect();

    let mut grid_points: Vec<Point> = Vec::new();
    for &k1 in &SearchSpace::axis_values(space.k1, space.grid) {
        for &k2 in &SearchSpace::axis_values(space.k2, space.grid) {
            for &alpha in &SearchSpace::axis_values(space.alpha, space.grid) {
                for &s in &SearchSpace::axis_values(space.s, space.grid) {
                    let p = Point { k1, k2, alpha, s };
                    if seeds.iter().all(|q| q != &p) {
                        grid_points.push(p);
                    }
                }
            }
        }
    }
    // ordered collect keeps the trace deterministic under any thread count
    let grid_entries: Vec<(Point, TraceEntry)> = grid_points
        .par_iter()
        .map(|p| (*p, evaluate(p, n_ref)))
        .collect();

    let mut best: Option<(Point, f64)> = None;
    let consider = |point: &Point, entry: &TraceEntry, best: &mut Option<(Point, f64)>| {
        if let Some(m) = &entry.margin {
            let cand = (point, m.lo());
            match best {
                None => *best = Some((*point, m.lo())),
                Some((bp, bm)) => {
                    if improves(cand, (bp, *bm)) {
                        *best = Some((*point, m.lo()));
                    }
                }
            }
        }
    };
    for (point, entry) in trace.iter().enumerate().map(|(i, e)| (seeds[i], e)) {
        consider(&point, entry, &mut best);
    }
    let best_seed_margin = best.map(|(_, m)| m);
    for (point, entry) in &grid_entries {
        consider(point, entry, &mut best);
        trace.push(entry.clone());
    }

    let (mut best_point, mut best_margin) = best.ok_or(OptimizerError::NoAdmissiblePoint)?;

    // coordinate descent, one move per axis per round, halving steps
    let spacing = |range: (f64, f64)| {
        if space.grid > 1 {
            (range.1 - range.0) / (space.grid - 1) as f64
        } else {
            0.0
        }
    };
    let mut steps = [
        spacing(space.k1),
        spacing(space.k2),
        spacing(space.alpha),
        spacing(space.s),
    ];
    let boxes = [space.k1, space.k2, space.alpha, space.s];
    for _ in 0..space.depth {
        for axis in 0..4 {
            if steps[axis] <= 0.0 {
                continue;
            }
            let current = best_point.lex_key();
            for dir in [-1.0, 1.0] {
                let raw = current[axis] + dir * steps[axis];
                let value = raw.clamp(boxes[axis].0, boxes[axis].1);
                if value == current[axis] {
                    continue;
                }
                let mut candidate = best_point;
                match axis {
                    0 => candidate.k1 = value,
                    1 => candidate.k2 = value,
                    2 => candidate.alpha = value,
                    _ => candidate.s = value,
                }
                let entry = evaluate(&candidate, n_ref);
                if let Some(m) = &entry.margin {
                    if improves((&candidate, m.lo()), (&best_point, best_margin)) {
                        best_point = candidate;
                        best_margin = m.lo();
                    }
                }
                trace.push(entry);
            }
        }
        for step in &mut steps {
            *step /= 2.0;
        }
    }

    if let Some(seed_margin) = best_seed_margin {
        debug_assert!(best_margin >= seed_margin);
    }
    let best_params = params_at(&best_point, n_ref);
    let report = r3_margin(n_ref, &best_params).map_err(OptimizerError::Pipeline)?;
    Ok(OptimizeOutcome { best: best_params, report, trace })
}

/// Which finite-difference stencil produced an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    Central,
    /// The decrement was inadmissible or not evaluable; forward
    /// difference substituted.
    ForwardOnly,
    /// The increment was inadmissible or not evaluable; backward
    /// difference substituted.
    BackwardOnly,
}

#[derive(Clone, Debug)]
pub struct SensitivityRow {
    pub parameter: &'static str,
    pub step: f64,
    /// Estimated d(margin.lo)/d(parameter).
    pub estimate: f64,
    pub stencil: Stencil,
}

/// Finite-difference steps for [`sensitivity`].
#[derive(Clone, Copy, Debug)]
pub struct SensitivitySteps {
    pub k1: f64,
    pub k2: f64,
    pub alpha: f64,
    pub s: f64,
}

impl Default for SensitivitySteps {
    fn default() -> Self {
        SensitivitySteps { k1: 0.01, k2: 0.01, alpha: 0.001, s: 0.01 }
    }
}

/// Estimates the margin's sensitivity to each parameter at `params` by
/// central differences, substituting a flagged one-sided difference when
/// a neighbor is inadmissible or outside a validity floor.
pub fn sensitivity(
    params: &SieveParams,
    n_ref: &BigUint,
) -> Result<Vec<SensitivityRow>, OptimizerError> {
    sensitivity_with_steps(params, n_ref, &SensitivitySteps::default())
}

pub fn sensitivity_with_steps(
    params: &SieveParams,
    n_ref: &BigUint,
    steps: &SensitivitySteps,
) -> Result<Vec<SensitivityRow>, OptimizerError> {
    let base_point = Point {
        k1: params.k1,
        k2: params.k2,
        alpha: params.alpha,
        s: params.s,
    };
    let margin_lo_at = |p: &Point| -> Option<f64> {
        refined_margin_parts(n_ref, &params_at(p, n_ref))
            .ok()
            .map(|(parts, _)| parts.margin.lo())
    };
    let base = margin_lo_at(&base_point).ok_or(OptimizerError::Pipeline(
        PipelineError::Hypothesis { what: "sensitivity base point must be evaluable" },
    ))?;

    let axes: [(&'static str, f64); 4] = [
        ("k1", steps.k1),
        ("k2", steps.k2),
        ("alpha", steps.alpha),
        ("s", steps.s),
    ];
    let mut rows = Vec::with_capacity(4);
    for (idx, (parameter, step)) in axes.into_iter().enumerate() {
        if !(step > 0.0) {
            return Err(OptimizerError::ZeroStep { parameter });
        }
        let displaced = |dir: f64| {
            let mut p = base_point;
            match idx {
                0 => p.k1 += dir * step,
                1 => p.k2 += dir * step,
                2 => p.alpha += dir * step,
                _ => p.s += dir * step,
            }
            p
        };
        let plus = margin_lo_at(&displaced(1.0));
        let minus = margin_lo_at(&displaced(-1.0));
        let (estimate, stencil) = match (plus, minus) {
            (Some(p), Some(m)) => ((p - m) / (2.0 * step), Stencil::Central),
            (Some(p), None) => ((p - base) / step, Stencil::ForwardOnly),
            (None, Some(m)) => ((base - m) / step, Stencil::BackwardOnly),
            (None, None) => return Err(OptimizerError::NotDifferentiable { parameter }),
        };
        rows.push(SensitivityRow { parameter, step, estimate, stencil });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n31() -> BigUint {
        BigUint::from(10u32).pow(31)
    }

    #[test]
    fn collapsed_space_reproduces_the_direct_report() {
        let reference = SieveParams::default();
        let outcome = optimize(&n31(), &SearchSpace::collapsed(&reference)).unwrap();
        let direct = r3_margin(&n31(), &reference).unwrap();
        assert_eq!(outcome.report.render_text(), direct.render_text());
        assert_eq!(outcome.best.k1, reference.k1);
        assert_eq!(outcome.best.k2, reference.k2);
        assert_eq!(outcome.best.alpha, reference.alpha);
        assert_eq!(outcome.best.s, reference.s);
        assert!(outcome.report.margin.lo() >= 0.0249);
    }

    #[test]
    fn default_space_keeps_or_beats_the_seed() {
        let outcome = optimize(&n31(), &SearchSpace::default()).unwrap();
        // the first trace entry is the seeded reference point
        let seed = &outcome.trace[0];
        assert_eq!((seed.k1, seed.k2, seed.alpha, seed.s), (8.0, 3.17, 0.06, 3.33));
        assert_eq!(seed.status, "ok");
        let seed_margin = seed.margin.unwrap().lo();
        assert!(seed_margin >= 0.0249);
        assert!(outcome.report.margin.lo() >= seed_margin);
        assert!(outcome.best.check_admissible().is_ok());
        // the fresh re-evaluation matches the best trace value exactly
        let best_traced = outcome
            .trace
            .iter()
            .filter_map(|e| e.margin.as_ref().map(|m| m.lo()))
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(outcome.report.margin.lo(), best_traced);
    }

    #[test]
    fn boxes_without_any_admissible_point_error() {
        let mut space = SearchSpace::default();
        space.k2 = (4.0, 4.5); // k2 < k+1 = 4 violated everywhere
        let err = optimize(&n31(), &space).unwrap_err();
        assert!(matches!(err, OptimizerError::NoAdmissiblePoint));
    }

    #[test]
    fn skip_reasons_are_logged_for_inadmissible_grid_points() {
        let mut space = SearchSpace::default();
        space.k2 = (3.9, 4.1);
        space.k1 = (8.0, 8.0);
        space.alpha = (0.06, 0.06);
        space.s = (3.33, 3.33);
        space.grid = 2;
        space.depth = 0;
        let outcome = optimize(&n31(), &space).unwrap();
        assert!(outcome
            .trace
            .iter()
            .any(|e| e.status == "skipped:k2-out-of-range"));
    }

    #[test]
    fn trace_lines_have_seven_tokens() {
        let mut space = SearchSpace::default();
        space.grid = 2;
        space.depth = 1;
        let outcome = optimize(&n31(), &space).unwrap();
        let text = render_trace(&outcome.trace);
        for line in text.lines() {
            assert_eq!(line.split(' ').count(), 7, "bad trace line: {line}");
        }
    }

    #[test]
    fn margin_is_concave_in_s_between_3_2_and_3_5() {
        let eval = |s: f64| {
            let mut p = SieveParams::default();
            p.s = s;
            r3_margin(&n31(), &p).unwrap().margin
        };
        let (a, mid, b) = (eval(3.2), eval(3.35), eval(3.5));
        assert!(a.contains(-0.010_538_405_118_690_197));
        assert!(mid.contains(0.028_042_721_843_490_565));
        assert!(b.contains(-0.104_602_624_917_280_235));
        // midpoint certifiably above the chord
        assert!(mid.lo() > (a.hi() + b.hi()) / 2.0);
    }

    #[test]
    fn sensitivity_flags_the_walls_around_the_reference_point() {
        let rows = sensitivity(&SieveParams::default(), &n31()).unwrap();
        assert_eq!(rows.len(), 4);
        let by_name = |n: &str| rows.iter().find(|r| r.parameter == n).unwrap();

        // k1 = 8 is the admissibility ceiling
        let k1 = by_name("k1");
        assert_eq!(k1.stencil, Stencil::BackwardOnly);
        assert!((k1.estimate - 0.087_304_838_057_6).abs() < 1e-5);

        // one step down in k2 pushes D_y below the 7080 validity floor
        let k2 = by_name("k2");
        assert_eq!(k2.stencil, Stencil::ForwardOnly);
        assert!((k2.estimate - -1.025_429_569_15).abs() < 1e-5);

        // one step up in alpha pushes D_y below the floor
        let alpha = by_name("alpha");
        assert_eq!(alpha.stencil, Stencil::BackwardOnly);
        assert!((alpha.estimate - 8.271_233_927_52).abs() < 1e-4);

        // s is interior: clean central difference
        let s = by_name("s");
        assert_eq!(s.stencil, Stencil::Central);
        assert!((s.estimate - 0.017_724_590_456_3).abs() < 1e-5);
    }

    #[test]
    fn halving_the_interior_step_moves_the_estimate_mildly() {
        let full = sensitivity_with_steps(
            &SieveParams::default(),
            &n31(),
            &SensitivitySteps::default(),
        )
        .unwrap();
        let halved = sensitivity_with_steps(
            &SieveParams::default(),
            &n31(),
            &SensitivitySteps { k1: 0.005, k2: 0.005, alpha: 0.0005, s: 0.005 },
        )
        .unwrap();
        let s_full = full.iter().find(|r| r.parameter == "s").unwrap().estimate;
        let s_half = halved.iter().find(|r| r.parameter == "s").unwrap().estimate;
        assert!(((s_half - s_full) / s_full).abs() < 0.10);
    }

    #[test]
    fn zero_steps_are_rejected() {
        let err = sensitivity_with_steps(
            &SieveParams::default(),
            &n31(),
            &SensitivitySteps { k1: 0.0, k2: 0.01, alpha: 0.001, s: 0.01 },
        )
        .unwrap_err();
        assert!(matches!(err, OptimizerError::ZeroStep { parameter: "k1" }));
    }

    #[test]
    fn degenerate_boxes_are_rejected() {
        let mut space = SearchSpace::default();
        space.s = (4.0, 3.0);
        assert!(matches!(
            optimize(&n31(), &space).unwrap_err(),
            OptimizerError::InvalidSpace { what: "s" }
        ));
    }
}
