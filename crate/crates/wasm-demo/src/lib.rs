//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes a spec `(alpha, a, b, c)` and returns a JSON string.
//! The plain functions in this module hold the logic and run on any target.

use num_rational::BigRational;
use rampi::summation::{accelerate, partial_sums_exact, tail_bound, AccelerationScheme, MIN_PARTIALS};
use rampi::verifier::{verify_normalized_with, verify_spec_with};
use rampi::{
    catalog_entries, emit_latex, emit_spec, eval_surd, BigFloat, RationalAlpha, SeriesSpec, SumMode, TermRule,
    VerifyOptions,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest partial-sum count the convergence plot accepts.
pub const MAX_PLOT_TERMS: u64 = 400;
/// Largest Levin order the convergence plot computes.
pub const MAX_LEVIN_ORDER: usize = 64;
/// Digits accepted by [`verify_json`].
pub const MAX_DIGITS: usize = 200;

const PLOT_BITS: u32 = 512;

fn spec_of(alpha: &str, a: i32, b: i32, c: i32) -> Result<SeriesSpec, String> {
    let alpha: RationalAlpha = alpha.trim().parse().map_err(|e: rampi::Error| e.to_string())?;
    SeriesSpec::new(alpha, a.into(), b.into(), c.into()).map_err(|e| e.to_string())
}

/// Catalog entries as `{id, citation, alpha, a, b, c, family}` for the preset menu.
pub fn catalog_list() -> Value {
    let items: Vec<Value> = catalog_entries()
        .into_iter()
        .map(|e| {
            let spec = match e.family {
                Some(f) => f.spec(f.k_min).unwrap_or(e.spec),
                None => e.spec,
            };
            json!({
                "id": e.id,
                "citation": e.citation,
                "rhs": e.rhs_display,
                "alpha": spec.alpha().to_string(),
                "a": spec.a(),
                "b": spec.b(),
                "c": spec.c(),
                "family": e.is_family(),
            })
        })
        .collect();
    Value::Array(items)
}

/// The identity in LaTeX and plain text, and the value of the raw series.
/// Specs in the catalog use their presentation with a head polynomial.
pub fn identity_json(alpha: &str, a: i32, b: i32, c: i32) -> Result<Value, String> {
    let spec = spec_of(alpha, a, b, c)?;
    let entry = rampi::find_by_spec(&spec);
    let latex = entry.as_ref().map(emit_latex).unwrap_or_else(|| emit_spec(&spec));
    let rhs = spec.rhs_constant();
    let shown = match entry.as_ref().and_then(|e| e.normalized()) {
        Some(n) => n.rhs.display(),
        None => rhs.display(),
    };
    let value = rhs_value(&spec, PLOT_BITS);
    Ok(json!({
        "id": entry.as_ref().map(|e| e.id.clone()),
        "latex": latex,
        "rhs": shown,
        "rational_part": rhs.rational_part.to_string(),
        "value": value.to_decimal_string(40),
        "decay_exponent": spec.decay_exponent(),
    }))
}

fn rhs_value(spec: &SeriesSpec, bits: u32) -> BigFloat {
    let rhs = spec.rhs_constant();
    let pi = rampi::pi_reference::pi_at_bits(bits + 16);
    BigFloat::from_rational(&rhs.rational_part, bits + 16)
        .mul(&eval_surd(&rhs.sine, bits + 16))
        .div(&pi)
        .with_precision(bits)
}

/// `log10 |x|`, or `floor` when `x` is zero or smaller.
fn log10_or(x: &BigFloat, floor: f64) -> f64 {
    if x.is_zero() {
        return floor;
    }
    (x.log2_abs() * std::f64::consts::LOG10_2).max(floor)
}

/// Errors of the direct partial sums, of the Levin u-transform applied to
/// the first `n` partials, and the certified tail bound, all as `log10`.
pub fn convergence_json(alpha: &str, a: i32, b: i32, c: i32, terms: u32) -> Result<Value, String> {
    let spec = spec_of(alpha, a, b, c)?;
    let terms = u64::from(terms).clamp(MIN_PARTIALS as u64, MAX_PLOT_TERMS);
    let floor = -(rampi::bigfloat::decimal_digits_for_bits(PLOT_BITS) as f64);
    let target = rhs_value(&spec, PLOT_BITS);

    let h = spec.negative_shift_terms();
    let head: BigRational = (0..h).map(|n| spec.term(n)).sum();
    let tail = TermRule::new(spec, h);
    let sums: Vec<BigRational> = partial_sums_exact(&tail, terms)
        .into_iter()
        .map(|s| s + &head)
        .collect();

    let mut direct = Vec::with_capacity(sums.len());
    let mut bound = Vec::with_capacity(sums.len());
    for (i, s) in sums.iter().enumerate() {
        let n = h + i as u64 + 1;
        let err = BigFloat::from_rational(s, PLOT_BITS).sub(&target).abs();
        direct.push(log10_or(&err, floor));
        bound.push(tail_bound(&spec, n).ok().map(|b| log10_or(&b, floor)));
    }

    let levin_max = (terms as usize).min(MAX_LEVIN_ORDER);
    let mut levin = Vec::new();
    for k in MIN_PARTIALS..=levin_max {
        let bits = PLOT_BITS + 2 * k as u32;
        let partials: Vec<BigFloat> = sums[..k].iter().map(|s| BigFloat::from_rational(s, bits)).collect();
        let point = match accelerate(&partials, AccelerationScheme::LevinU) {
            Ok((est, _)) => Some(log10_or(&est.with_precision(PLOT_BITS).sub(&target).abs(), floor)),
            Err(_) => None,
        };
        levin.push(json!([h + k as u64, point]));
    }

    Ok(json!({
        "first_n": h + 1,
        "direct": direct,
        "bound": bound,
        "levin": levin,
        "floor": floor,
    }))
}

/// A verification report, in the same shape the command-line tool prints.
pub fn verify_json(alpha: &str, a: i32, b: i32, c: i32, digits: u32, mode: &str) -> Result<Value, String> {
    let spec = spec_of(alpha, a, b, c)?;
    let digits = digits as usize;
    if digits == 0 || digits > MAX_DIGITS {
        return Err(format!("digits must be in 1..={MAX_DIGITS}"));
    }
    let mode: SumMode = mode.parse().map_err(|e: rampi::Error| e.to_string())?;
    let mut options = VerifyOptions::new(digits, mode);
    // Keeps the rigorous mode responsive in a browser tab.
    options.sum.max_terms = 200_000;
    let report = match rampi::find_by_spec(&spec).and_then(|e| e.normalized()) {
        Some(n) => verify_normalized_with(&n, digits, &options),
        None => verify_spec_with(&spec, digits, &options),
    }
    .map_err(|e| e.to_string())?;
    serde_json::to_value(&report).map_err(|e| e.to_string())
}

fn export(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn catalog() -> String {
    catalog_list().to_string()
}

#[wasm_bindgen]
pub fn identity(alpha: &str, a: i32, b: i32, c: i32) -> Result<String, JsError> {
    export(identity_json(alpha, a, b, c))
}

#[wasm_bindgen]
pub fn convergence(alpha: &str, a: i32, b: i32, c: i32, terms: u32) -> Result<String, JsError> {
    export(convergence_json(alpha, a, b, c, terms))
}

#[wasm_bindgen]
pub fn verify(alpha: &str, a: i32, b: i32, c: i32, digits: u32, mode: &str) -> Result<String, JsError> {
    export(verify_json(alpha, a, b, c, digits, mode))
}
