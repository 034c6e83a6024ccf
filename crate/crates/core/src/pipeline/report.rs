//! Margin reports: the named certified quantities of the inequality chain
//! at one N, a deterministic text rendering, and the N-grid sweep.
//!
//! Reports are built on the fast `f64` interval backend; whenever one of
//! the two decisions the chain rests on (margin > 0, square-divisor
//! condition) is closer than [`HP_TRIGGER`] to its boundary, the whole
//! chain is recomputed on the 192-bit backend and the narrowed enclosures
//! are reported instead.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::bounds::{margin_parts, MarginParts, PipelineError, Q0Bound, WeightedSumBound};
use super::params::SieveParams;
use crate::certified::{CertifiedReal, Enclosure, MpReal};

/// Decision slack below which the high-precision backend is consulted.
pub const HP_TRIGGER: f64 = 1e-6;

/// One named quantity of the chain, with a formula anchor that names how
/// it was assembled. Anchors are single space-free tokens so a report
/// line always splits into exactly four fields.
#[derive(Clone, Debug)]
pub struct ReportField {
    pub name: &'static str,
    pub value: Enclosure,
    pub anchor: &'static str,
}

/// The full certified record of one `r3_margin` evaluation.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n_decimal: String,
    pub params: SieveParams,
    /// Fixed order: S_lower_scaled, weighted_sum_upper_scaled,
    /// q0_remainder_scaled, M1_scaled, M2_scaled, E_scaled, prefactor,
    /// margin.
    pub fields: Vec<ReportField>,
    pub margin: Enclosure,
    /// True iff margin.lo > 0, i.e. the count bound is certified at N.
    pub certified: bool,
    /// True iff the high-precision backend supplied the reported values.
    pub used_hp: bool,
}

impl BoundReport {
    pub fn field(&self, name: &str) -> Option<&Enclosure> {
        self.fields.iter().find(|f| f.name == name).map(|f| &f.value)
    }

    /// One line per field: `name value_lo value_hi anchor`. Values use
    /// shortest round-trip scientific notation, so rendering is
    /// byte-for-byte reproducible for equal inputs.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for f in &self.fields {
            writeln!(out, "{} {:e} {:e} {}", f.name, f.value.lo(), f.value.hi(), f.anchor)
                .expect("string write");
        }
        out
    }
}

/// How decisively `a <= b` was settled, in either direction: positive
/// means a certified gap of that relative size, negative means the
/// enclosures overlap.
fn two_sided_slack(a: &Enclosure, b: &Enclosure) -> f64 {
    a.le_margin(b).max(b.le_margin(a))
}

fn narrowed(x: &MpReal) -> Enclosure {
    Enclosure::new(x.lo_f64(), x.hi_f64())
}

fn narrow_parts(parts: &MarginParts<MpReal>) -> MarginParts<Enclosure> {
    MarginParts {
        s_lower_scaled: narrowed(&parts.s_lower_scaled),
        weighted: WeightedSumBound {
            prefactor: narrowed(&parts.weighted.prefactor),
            m1_scaled: narrowed(&parts.weighted.m1_scaled),
            m2_scaled: narrowed(&parts.weighted.m2_scaled),
            e_scaled: narrowed(&parts.weighted.e_scaled),
            total_scaled: narrowed(&parts.weighted.total_scaled),
        },
        q0_remainder_scaled: narrowed(&parts.q0_remainder_scaled),
        q0: Q0Bound {
            z_term: narrowed(&parts.q0.z_term),
            pi_term: narrowed(&parts.q0.pi_term),
            lhs: narrowed(&parts.q0.lhs),
            rhs: narrowed(&parts.q0.rhs),
            // keep the stronger backend's verdict
            decision: parts.q0.decision,
        },
        margin: narrowed(&parts.margin),
    }
}

/// Runs the chain at N with automatic precision escalation.
pub(crate) fn refined_margin_parts(
    n: &BigUint,
    params: &SieveParams,
) -> Result<(MarginParts<Enclosure>, bool), PipelineError> {
    let fast: MarginParts<Enclosure> = margin_parts(n, params)?;
    let zero = Enclosure::point(0.0);
    let decisive = two_sided_slack(&zero, &fast.margin)
        .min(two_sided_slack(&fast.q0.lhs, &fast.q0.rhs));
    if decisive >= HP_TRIGGER {
        return Ok((fast, false));
    }
    let slow: MarginParts<MpReal> = margin_parts(n, params)?;
    Ok((narrow_parts(&slow), true))
}

/// Certified witness-count margin at N: assembles the lower bound for the
/// sifted count, the weighted-sum upper bound, and the square-divisor
/// remainder into `margin = S_lower - weighted_sum - Q0_remainder`
/// (units √N/log X), reported with every intermediate quantity.
pub fn r3_margin(n: &BigUint, params: &SieveParams) -> Result<BoundReport, PipelineError> {
    let (parts, used_hp) = refined_margin_parts(n, params)?;
    let fields = vec![
        ReportField {
            name: "S_lower_scaled",
            value: parts.s_lower_scaled,
            anchor: "(lambda/k)*(mertens_lo(z)*(2*sqrtN-1)*C(s)-1.22*X^(s/k1))*logX/sqrtN",
        },
        ReportField {
            name: "weighted_sum_upper_scaled",
            value: parts.weighted.total_scaled,
            anchor: "prefactor*(M1+M2)+E/k",
        },
        ReportField {
            name: "q0_remainder_scaled",
            value: parts.q0_remainder_scaled,
            anchor: "(lambda*c/k)*|A|^(1-delta)*logX/sqrtN",
        },
        ReportField {
            name: "M1_scaled",
            value: parts.weighted.m1_scaled,
            anchor: "2*((2*e^gamma/k1)*(i1+i2)+eps*C1*e^2*h(k_alpha)*wrs)",
        },
        ReportField {
            name: "M2_scaled",
            value: parts.weighted.m2_scaled,
            anchor: "(y/sqrtN)*(1-k2/k1)*(2*e^gamma/k_alpha+eps*C1*e^2*h(k_alpha))",
        },
        ReportField {
            name: "E_scaled",
            value: parts.weighted.e_scaled,
            anchor: "Q*X^(1/2-alpha)*wrs*logX/sqrtN",
        },
        ReportField {
            name: "prefactor",
            value: parts.weighted.prefactor,
            anchor: "k1*(1+1/(2*log(Dtilde)^2))/(k*e^gamma)",
        },
        ReportField {
            name: "margin",
            value: parts.margin,
            anchor: "S_lower-weighted_sum-Q0_remainder",
        },
    ];
    let certified = parts.margin.lo() > 0.0;
    Ok(BoundReport {
        n_decimal: n.to_string(),
        params: params.clone(),
        fields,
        margin: parts.margin,
        certified,
        used_hp,
    })
}

/// Certified direction of a term between two adjacent grid points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    CertifiedIncrease,
    CertifiedDecrease,
    Indeterminate,
}

impl Direction {
    fn of(prev: &Enclosure, next: &Enclosure) -> Direction {
        if prev.hi() < next.lo() {
            Direction::CertifiedIncrease
        } else if next.hi() < prev.lo() {
            Direction::CertifiedDecrease
        } else {
            Direction::Indeterminate
        }
    }

    fn token(self) -> &'static str {
        match self {
            Direction::CertifiedIncrease => "+",
            Direction::CertifiedDecrease => "-",
            Direction::Indeterminate => "?",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub exponent: u32,
    pub s_lower: Enclosure,
    pub weighted_sum: Enclosure,
    pub q0_remainder: Enclosure,
    pub margin: Enclosure,
}

#[derive(Clone, Debug)]
pub struct MonotoneRow {
    pub from_exponent: u32,
    pub to_exponent: u32,
    pub s_lower: Direction,
    pub weighted_sum: Direction,
    pub q0_remainder: Direction,
    pub margin: Direction,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    /// Ascending exponent order, one row per N = 10^e.
    pub rows: Vec<SweepRow>,
    pub min_margin_exponent: u32,
    pub min_margin: Enclosure,
    /// Per-term certified directions between consecutive grid points.
    pub monotonicity: Vec<MonotoneRow>,
}

impl SweepReport {
    /// True iff every grid point is certified and the margin provably
    /// never decreases along the grid.
    pub fn all_certified(&self) -> bool {
        self.rows.iter().all(|r| r.margin.lo() > 0.0)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            writeln!(
                out,
                "10^{} margin {:e} {:e} S_lower {:e} {:e} weighted_sum {:e} {:e} q0_remainder {:e} {:e}",
                r.exponent,
                r.margin.lo(),
                r.margin.hi(),
                r.s_lower.lo(),
                r.s_lower.hi(),
                r.weighted_sum.lo(),
                r.weighted_sum.hi(),
                r.q0_remainder.lo(),
                r.q0_remainder.hi(),
            )
            .expect("string write");
        }
        for m in &self.monotonicity {
            writeln!(
                out,
                "10^{}..10^{} margin:{} S_lower:{} weighted_sum:{} q0_remainder:{}",
                m.from_exponent,
                m.to_exponent,
                m.margin.token(),
                m.s_lower.token(),
                m.weighted_sum.token(),
                m.q0_remainder.token(),
            )
            .expect("string write");
        }
        writeln!(
            out,
            "min_margin 10^{} {:e} {:e}",
            self.min_margin_exponent,
            self.min_margin.lo(),
            self.min_margin.hi(),
        )
        .expect("string write");
        out
    }
}

/// Evaluates the margin chain at N = 10^e for every e in
/// `lo_exp..=hi_exp` (grid points run concurrently, aggregation order is
/// fixed), reporting the minimum margin and per-term monotonicity.
pub fn margin_sweep(
    lo_exp: u32,
    hi_exp: u32,
    params: &SieveParams,
) -> Result<SweepReport, PipelineError> {
    assert!(lo_exp <= hi_exp, "sweep range must be nonempty");
    let exponents: Vec<u32> = (lo_exp..=hi_exp).collect();
    let rows: Vec<SweepRow> = exponents
        .par_iter()
        .map(|&e| {
            let n = BigUint::from(10u32).pow(e);
            let (parts, _) = refined_margin_parts(&n, params)?;
            Ok(SweepRow {
                exponent: e,
                s_lower: parts.s_lower_scaled,
                weighted_sum: parts.weighted.total_scaled,
                q0_remainder: parts.q0_remainder_scaled,
                margin: parts.margin,
            })
        })
        .collect::<Result<_, PipelineError>>()?;

    let (mut min_exponent, mut min_margin) = (rows[0].exponent, rows[0].margin);
    for r in &rows[1..] {
        if r.margin.lo() < min_margin.lo() {
            min_exponent = r.exponent;
            min_margin = r.margin;
        }
    }
    let monotonicity = rows
        .windows(2)
        .map(|w| MonotoneRow {
            from_exponent: w[0].exponent,
            to_exponent: w[1].exponent,
            s_lower: Direction::of(&w[0].s_lower, &w[1].s_lower),
            weighted_sum: Direction::of(&w[0].weighted_sum, &w[1].weighted_sum),
            q0_remainder: Direction::of(&w[0].q0_remainder, &w[1].q0_remainder),
            margin: Direction::of(&w[0].margin, &w[1].margin),
        })
        .collect();
    Ok(SweepReport { rows, min_margin_exponent: min_exponent, min_margin, monotonicity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n31() -> BigUint {
        BigUint::from(10u32).pow(31)
    }

    #[test]
    fn reference_report_has_the_fixed_field_order() {
        let report = r3_margin(&n31(), &SieveParams::default()).unwrap();
        let names: Vec<&str> = report.fields.iter().map(|f| f.name).collect();
        assert_eq!(
            names,
            [
                "S_lower_scaled",
                "weighted_sum_upper_scaled",
                "q0_remainder_scaled",
                "M1_scaled",
                "M2_scaled",
                "E_scaled",
                "prefactor",
                "margin",
            ]
        );
        assert!(report.certified);
        assert!(!report.used_hp);
        assert!(report.margin.lo() >= 0.0249);
        assert_eq!(report.n_decimal, "10000000000000000000000000000000");
    }

    #[test]
    fn report_lines_split_into_four_fields() {
        let report = r3_margin(&n31(), &SieveParams::default()).unwrap();
        let text = report.render_text();
        assert_eq!(text.lines().count(), 8);
        for line in text.lines() {
            let parts: Vec<&str> = line.split(' ').collect();
            assert_eq!(parts.len(), 4, "bad report line: {line}");
            assert!(parts[1].parse::<f64>().is_ok());
            assert!(parts[2].parse::<f64>().is_ok());
        }
    }

    #[test]
    fn rendering_is_reproducible() {
        let a = r3_margin(&n31(), &SieveParams::default()).unwrap().render_text();
        let b = r3_margin(&n31(), &SieveParams::default()).unwrap().render_text();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_reports_minimum_at_the_low_end() {
        let report = margin_sweep(31, 34, &SieveParams::default()).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert_eq!(report.min_margin_exponent, 31);
        assert!(report.all_certified());
        assert_eq!(report.monotonicity.len(), 3);
        for m in &report.monotonicity {
            assert_eq!(m.margin, Direction::CertifiedIncrease);
            assert_eq!(m.weighted_sum, Direction::CertifiedDecrease);
            assert_eq!(m.q0_remainder, Direction::CertifiedDecrease);
        }
        let text = report.render_text();
        assert!(text.contains("min_margin 10^31"));
        assert_eq!(margin_sweep(31, 34, &SieveParams::default()).unwrap().render_text(), text);
    }

    #[test]
    fn field_lookup_by_name() {
        let report = r3_margin(&n31(), &SieveParams::default()).unwrap();
        let m1 = report.field("M1_scaled").unwrap();
        assert!(m1.hi() <= 1.230);
        assert!(report.field("no_such_field").is_none());
    }
}
