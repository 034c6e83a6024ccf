//! C ABI for the `intersquare` library.
//!
//! Conventions, uniform across the surface:
//!
//! - Every fallible function returns an [`IsqStatus`]; out-parameters are
//!   written only when the result is `Ok`.
//! - After a non-`Ok` status, [`isq_last_error_message`] returns a
//!   human-readable reason. The pointer is valid on the calling thread
//!   until the next call into this library.
//! - 128-bit integers cross the boundary as two `u64` halves
//!   (`hi`, `lo`), with `value = hi · 2⁶⁴ + lo`.
//! - Strings returned through `char **` out-parameters are owned by the
//!   caller and must be released with [`isq_string_free`]. Bound reports
//!   are opaque handles released with [`isq_bound_report_free`].
//! - Rust panics never unwind across the boundary; they surface as
//!   [`IsqStatus::Panic`].
//!
//! The matching C header is committed at `include/intersquare.h` and
//! regenerated by the build script whenever these declarations change.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use intersquare::arith::{factorize, is_prime, FactorConfig, FactorError};
use intersquare::certified::decimal::parse_biguint;
use intersquare::pipeline::{r3_margin, BoundReport, SieveParams};
use intersquare::search::{
    find_almost_prime, max_gap_below, min_omega_in_interval, semiprime_witness, WitnessError,
};

/// Result of every fallible call in this ABI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsqStatus {
    /// The call succeeded and all out-parameters are populated.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was malformed or outside the supported domain.
    InvalidArgument = 2,
    /// The computation ran but its mathematical claim failed
    /// (a checked inequality did not hold, or a promised object
    /// was not found).
    MathFailure = 3,
    /// A configured work budget was exhausted before completion.
    ResourceExhausted = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// Exact inequality checks and (optional) search result for a
/// semiprime witness; see [`isq_semiprime_witness`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct IsqWitness {
    /// The interval is longer than the prime-gap bound.
    pub length_gt_gap_bound: bool,
    /// The right endpoint stays below the gap-record range limit.
    pub endpoint_lt_gap_limit: bool,
    /// p·q landed strictly inside the target window (requires `search`).
    pub product_in_window: bool,
    /// True when a prime q was searched for and found; the four halves
    /// below are meaningful only in that case.
    pub has_q: bool,
    pub q_hi: u64,
    pub q_lo: u64,
    pub product_hi: u64,
    pub product_lo: u64,
}

/// Opaque handle to one certified lower-bound evaluation.
pub struct IsqBoundReport(BoundReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_err(msg: impl Into<Vec<u8>>) {
    let c = CString::new(msg)
        .unwrap_or_else(|_| CString::new("error message contained an interior NUL").expect("literal"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_err() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Runs an API body with panic containment.
fn guard<F: FnOnce() -> IsqStatus>(f: F) -> IsqStatus {
    clear_err();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_err(format!("internal panic: {msg}"));
            IsqStatus::Panic
        }
    }
}

macro_rules! nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_err(concat!("argument `", stringify!($ptr), "` is null"));
            return IsqStatus::NullArgument;
        }
    };
}

fn join(hi: u64, lo: u64) -> u128 {
    (u128::from(hi) << 64) | u128::from(lo)
}

fn split(v: u128) -> (u64, u64) {
    ((v >> 64) as u64, v as u64)
}

fn invalid(msg: impl Into<Vec<u8>>) -> IsqStatus {
    set_err(msg);
    IsqStatus::InvalidArgument
}

fn factor_status(err: &FactorError) -> IsqStatus {
    set_err(err.to_string());
    match err {
        FactorError::Timeout { .. } => IsqStatus::ResourceExhausted,
    }
}

/// Returns the library version as a static NUL-terminated string.
/// The pointer is valid for the lifetime of the program and must not
/// be freed.
#[no_mangle]
pub extern "C" fn isq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Returns the message recorded by the most recent failing call on this
/// thread, or null when no failure has occurred. The pointer is
/// invalidated by the next call into the library on the same thread;
/// do not free it.
#[no_mangle]
pub extern "C" fn isq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(c) => c.as_ptr(),
        None => ptr::null(),
    })
}

/// Releases a string previously returned through a `char **`
/// out-parameter of this library. Null is accepted and ignored.
///
/// # Safety
///
/// `s` must be null or a pointer obtained from this library that has
/// not already been freed.
#[no_mangle]
pub unsafe extern "C" fn isq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Deterministic primality test for `value = value_hi · 2⁶⁴ + value_lo`.
/// Writes true/false to `out_is_prime`; values 0 and 1 test false.
///
/// # Safety
///
/// `out_is_prime` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isq_is_prime(
    value_hi: u64,
    value_lo: u64,
    out_is_prime: *mut bool,
) -> IsqStatus {
    guard(|| {
        nonnull!(out_is_prime);
        let verdict = is_prime(join(value_hi, value_lo));
        unsafe { *out_is_prime = verdict };
        IsqStatus::Ok
    })
}

/// Factors `value = value_hi · 2⁶⁴ + value_lo` (must be ≥ 1) into
/// `(prime, exponent)` pairs in increasing prime order. Primes are
/// written as hi/lo halves into `primes_hi`/`primes_lo`, exponents into
/// `exponents`; all three arrays must hold at least `capacity` entries.
///
/// `out_len` always receives the number of distinct primes (at most 26
/// for any 128-bit value), even when `capacity` is too small — call
/// once with `capacity = 0` to size the buffers, then again to fill
/// them. Returns `InvalidArgument` on a short buffer and
/// `ResourceExhausted` if the factoring budget runs out.
///
/// # Safety
///
/// `out_len` must be valid for writes; `primes_hi`, `primes_lo`, and
/// `exponents` must be valid for `capacity` writes each (they are
/// ignored when `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn isq_factorize(
    value_hi: u64,
    value_lo: u64,
    primes_hi: *mut u64,
    primes_lo: *mut u64,
    exponents: *mut u32,
    capacity: usize,
    out_len: *mut usize,
) -> IsqStatus {
    guard(|| {
        nonnull!(out_len);
        if capacity > 0 {
            nonnull!(primes_hi);
            nonnull!(primes_lo);
            nonnull!(exponents);
        }
        let value = join(value_hi, value_lo);
        if value == 0 {
            return invalid("cannot factor zero");
        }
        let fact = match factorize(value, &FactorConfig::default()) {
            Ok(f) => f,
            Err(e) => return factor_status(&e),
        };
        unsafe { *out_len = fact.factors.len() };
        if fact.factors.len() > capacity {
            return invalid(format!(
                "buffer too small: need {} entries, got {capacity}",
                fact.factors.len()
            ));
        }
        for (i, &(p, e)) in fact.factors.iter().enumerate() {
            let (hi, lo) = split(p);
            unsafe {
                *primes_hi.add(i) = hi;
                *primes_lo.add(i) = lo;
                *exponents.add(i) = e;
            }
        }
        IsqStatus::Ok
    })
}

/// Finds the least prime-factor count Ω over the open interval
/// (n², (n+1)²) for `n ≥ 1`, together with a witness attaining it.
/// The witness is written as hi/lo halves.
///
/// # Safety
///
/// `out_omega`, `out_witness_hi`, and `out_witness_lo` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn isq_min_omega_in_interval(
    n: u64,
    out_omega: *mut u32,
    out_witness_hi: *mut u64,
    out_witness_lo: *mut u64,
) -> IsqStatus {
    guard(|| {
        nonnull!(out_omega);
        nonnull!(out_witness_hi);
        nonnull!(out_witness_lo);
        if n == 0 {
            return invalid("n must be at least 1");
        }
        match min_omega_in_interval(n) {
            Ok((witness, omega)) => {
                let (hi, lo) = split(witness);
                unsafe {
                    *out_omega = omega;
                    *out_witness_hi = hi;
                    *out_witness_lo = lo;
                }
                IsqStatus::Ok
            }
            Err(e) => factor_status(&e),
        }
    })
}

/// Searches the open interval (n², (n+1)²) for an integer with at most
/// `k` prime factors counted with multiplicity (`n ≥ 1`, `k ≥ 1`).
/// Writes whether one exists to `out_found` and, if so, the smallest
/// such integer as hi/lo halves (zeroed otherwise).
///
/// # Safety
///
/// `out_found`, `out_value_hi`, and `out_value_lo` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn isq_find_almost_prime(
    n: u64,
    k: u32,
    out_found: *mut bool,
    out_value_hi: *mut u64,
    out_value_lo: *mut u64,
) -> IsqStatus {
    guard(|| {
        nonnull!(out_found);
        nonnull!(out_value_hi);
        nonnull!(out_value_lo);
        if n == 0 {
            return invalid("n must be at least 1");
        }
        if k == 0 {
            return invalid("k must be at least 1");
        }
        match find_almost_prime(n, k) {
            Ok(hit) => {
                let (hi, lo) = split(hit.unwrap_or(0));
                unsafe {
                    *out_found = hit.is_some();
                    *out_value_hi = hi;
                    *out_value_lo = lo;
                }
                IsqStatus::Ok
            }
            Err(e) => factor_status(&e),
        }
    })
}

/// Computes the largest gap between consecutive primes that both lie
/// below `x` (`x ≥ 5`), writing the gap and the prime that starts it.
///
/// # Safety
///
/// `out_gap` and `out_start` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isq_max_gap_below(
    x: u64,
    out_gap: *mut u64,
    out_start: *mut u64,
) -> IsqStatus {
    guard(|| {
        nonnull!(out_gap);
        nonnull!(out_start);
        if x < 5 {
            return invalid("x must be at least 5");
        }
        let (gap, start) = max_gap_below(x);
        unsafe {
            *out_gap = gap;
            *out_start = start;
        }
        IsqStatus::Ok
    })
}

/// Checks (and optionally completes) a semiprime witness for the
/// interval (n², (n+1)²): verifies with exact rational arithmetic that
/// the subinterval I = (n²/p, (n+1)²/p) is longer than `gap_bound` and
/// ends below `gap_limit = gap_limit_hi · 2⁶⁴ + gap_limit_lo`, and —
/// when `search` is true — finds the least prime q in I and confirms
/// p·q lands strictly inside the window.
///
/// `p` must be prime (`InvalidArgument` otherwise). A failed inequality
/// or a missing prime reports `MathFailure`; an exhausted search budget
/// reports `ResourceExhausted`.
///
/// # Safety
///
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isq_semiprime_witness(
    n: u64,
    p: u64,
    gap_bound: u64,
    gap_limit_hi: u64,
    gap_limit_lo: u64,
    search: bool,
    out: *mut IsqWitness,
) -> IsqStatus {
    guard(|| {
        nonnull!(out);
        if n == 0 {
            return invalid("n must be at least 1");
        }
        match semiprime_witness(n, p, gap_bound, join(gap_limit_hi, gap_limit_lo), search) {
            Ok(w) => {
                let (q_hi, q_lo) = split(w.q.unwrap_or(0));
                let (product_hi, product_lo) = split(w.product.unwrap_or(0));
                unsafe {
                    *out = IsqWitness {
                        length_gt_gap_bound: w.checks.length_gt_gap_bound,
                        endpoint_lt_gap_limit: w.checks.endpoint_lt_gap_limit,
                        product_in_window: w.checks.product_in_window,
                        has_q: w.q.is_some(),
                        q_hi,
                        q_lo,
                        product_hi,
                        product_lo,
                    };
                }
                IsqStatus::Ok
            }
            Err(e) => {
                set_err(e.to_string());
                match e {
                    WitnessError::PNotPrime { .. } => IsqStatus::InvalidArgument,
                    WitnessError::CheckFailed { .. } | WitnessError::NoPrimeFound { .. } => {
                        IsqStatus::MathFailure
                    }
                    WitnessError::SearchBudgetExceeded { .. } => IsqStatus::ResourceExhausted,
                }
            }
        }
    })
}

/// Evaluates the certified lower-bound chain at `N` (a NUL-terminated
/// decimal such as `"1e31"`, `"10^31"`, or plain digits; `N ≥ 10³¹`)
/// for sieve parameters `(k1, k2, alpha, s)`, leaving every other
/// parameter at its reference value. On success writes an owned handle
/// to `out_report`; release it with [`isq_bound_report_free`].
///
/// Inadmissible parameters and out-of-range `N` report
/// `InvalidArgument`. An uncertified (non-positive) margin is not an
/// error: inspect [`isq_bound_report_certified`].
///
/// # Safety
///
/// `n_decimal` must point to a NUL-terminated string; `out_report` must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isq_bound_report_new(
    n_decimal: *const c_char,
    k1: f64,
    k2: f64,
    alpha: f64,
    s: f64,
    out_report: *mut *mut IsqBoundReport,
) -> IsqStatus {
    guard(|| {
        nonnull!(n_decimal);
        nonnull!(out_report);
        let text = match unsafe { CStr::from_ptr(n_decimal) }.to_str() {
            Ok(t) => t,
            Err(_) => return invalid("N is not valid UTF-8"),
        };
        let n = match parse_biguint(text) {
            Ok(n) => n,
            Err(e) => return invalid(e.to_string()),
        };
        let params = SieveParams { k1, k2, alpha, s, n_ref: n.clone(), ..SieveParams::default() };
        match r3_margin(&n, &params) {
            Ok(report) => {
                unsafe { *out_report = Box::into_raw(Box::new(IsqBoundReport(report))) };
                IsqStatus::Ok
            }
            Err(e) => invalid(e.to_string()),
        }
    })
}

/// Writes the two-sided enclosure of the certified margin.
///
/// # Safety
///
/// `report` must be a live handle from [`isq_bound_report_new`];
/// `out_lo` and `out_hi` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isq_bound_report_margin(
    report: *const IsqBoundReport,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> IsqStatus {
    guard(|| {
        nonnull!(report);
        nonnull!(out_lo);
        nonnull!(out_hi);
        let margin = unsafe { &(*report).0 }.margin;
        unsafe {
            *out_lo = margin.lo();
            *out_hi = margin.hi();
        }
        IsqStatus::Ok
    })
}

/// Writes whether the report certifies a strictly positive margin.
///
/// # Safety
///
/// `report` must be a live handle; `out_certified` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn isq_bound_report_certified(
    report: *const IsqBoundReport,
    out_certified: *mut bool,
) -> IsqStatus {
    guard(|| {
        nonnull!(report);
        nonnull!(out_certified);
        unsafe { *out_certified = (*report).0.certified };
        IsqStatus::Ok
    })
}

/// Looks up one named report field and writes its enclosure. Valid
/// names are `S_lower_scaled`, `weighted_sum_upper_scaled`,
/// `q0_remainder_scaled`, `M1_scaled`, `M2_scaled`, `E_scaled`,
/// `prefactor`, and `margin`.
///
/// # Safety
///
/// `report` must be a live handle; `name` must point to a
/// NUL-terminated string; `out_lo` and `out_hi` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn isq_bound_report_field(
    report: *const IsqBoundReport,
    name: *const c_char,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> IsqStatus {
    guard(|| {
        nonnull!(report);
        nonnull!(name);
        nonnull!(out_lo);
        nonnull!(out_hi);
        let name = match unsafe { CStr::from_ptr(name) }.to_str() {
            Ok(t) => t,
            Err(_) => return invalid("field name is not valid UTF-8"),
        };
        match unsafe { &(*report).0 }.field(name) {
            Some(value) => {
                unsafe {
                    *out_lo = value.lo();
                    *out_hi = value.hi();
                }
                IsqStatus::Ok
            }
            None => invalid(format!("unknown field name `{name}`")),
        }
    })
}

/// Serializes the full report as a JSON document (parameters, every
/// field with its enclosure and defining expression, the margin, and
/// the certification flags). The returned string is owned by the
/// caller; release it with [`isq_string_free`].
///
/// # Safety
///
/// `report` must be a live handle; `out_json` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn isq_bound_report_to_json(
    report: *const IsqBoundReport,
    out_json: *mut *mut c_char,
) -> IsqStatus {
    guard(|| {
        nonnull!(report);
        nonnull!(out_json);
        let r = unsafe { &(*report).0 };
        let fields: Vec<serde_json::Value> = r
            .fields
            .iter()
            .map(|f| {
                serde_json::json!({
                    "name": f.name,
                    "lo": f.value.lo(),
                    "hi": f.value.hi(),
                    "anchor": f.anchor,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "n": r.n_decimal,
            "params": {
                "k": r.params.k,
                "k1": r.params.k1,
                "k2": r.params.k2,
                "alpha": r.params.alpha,
                "s": r.params.s,
                "eps": r.params.eps_decimal,
                "c1": r.params.c1,
                "c2": r.params.c2,
                "q": r.params.q,
                "c": r.params.c_decimal,
                "delta": r.params.delta_decimal,
            },
            "fields": fields,
            "margin": { "lo": r.margin.lo(), "hi": r.margin.hi() },
            "certified": r.certified,
            "used_hp": r.used_hp,
        });
        let text = serde_json::to_string(&doc).expect("report JSON has no non-string keys");
        match CString::new(text) {
            Ok(c) => {
                unsafe { *out_json = c.into_raw() };
                IsqStatus::Ok
            }
            Err(_) => invalid("report contained an interior NUL"),
        }
    })
}

/// Releases a report handle. Null is accepted and ignored.
///
/// # Safety
///
/// `report` must be null or a live handle from
/// [`isq_bound_report_new`] that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn isq_bound_report_free(report: *mut IsqBoundReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}
