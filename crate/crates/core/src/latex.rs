//! LaTeX rendering of identities in compact display style, and a reader for
//! the raw (unnormalized) form.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed};
use regex::Regex;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::series::{NormalizedIdentity, RationalAlpha, SeriesSpec};

fn frac(r: &BigRational) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let r = r.abs();
    if r.denom().is_one() {
        format!("{sign}{}", r.numer())
    } else {
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn index(shift: i64) -> String {
    match shift {
        0 => "n".into(),
        s if s > 0 => format!("{{n+{s}}}"),
        s => format!("{{n{s}}}"),
    }
}

fn alpha_tex(alpha: RationalAlpha) -> String {
    format!("(\\frac{{{}}}{{{}}})", alpha.numer(), alpha.denom())
}

/// Numerator `(α)_{n+a}(1-α)_{n+b}`, squared when the two coincide.
fn numerator(spec: &SeriesSpec, shift: i64) -> String {
    let (a, b) = (spec.a() + shift, spec.b() + shift);
    let alpha = spec.alpha();
    let beta = alpha.complement();
    if alpha == beta && a == b {
        format!("{}_{}^2", alpha_tex(alpha), index(a))
    } else {
        format!("{}_{}{}_{}", alpha_tex(alpha), index(a), alpha_tex(beta), index(b))
    }
}

fn factorial_of(shift: i64) -> String {
    if shift == 0 {
        "n!".into()
    } else {
        format!("(n+{shift})!")
    }
}

/// Denominator `(n+h)!(n+h+c)!`, with up to three factors pulled out of the
/// larger factorial.
fn denominator(c: i64, shift: i64) -> String {
    let base = factorial_of(shift);
    if c == 0 {
        return format!("{base}^2");
    }
    if c <= 3 {
        let factors: String = (1..=c).map(|j| format!("(n+{})", shift + j)).collect();
        return format!("{factors}{base}^2");
    }
    format!("{base}{}", factorial_of(shift + c))
}

fn sum_tex(spec: &SeriesSpec, lower: i64, shift: i64) -> String {
    format!(
        "\\sum_{{n={lower}}}^{{\\infty}}\\frac{{{}}}{{{}}}",
        numerator(spec, shift),
        denominator(spec.c(), shift)
    )
}

/// `closed form = Σ_{n≥0} term(n)`.
pub fn emit_spec(spec: &SeriesSpec) -> String {
    format!("{}={}", spec.rhs_constant().to_latex(), sum_tex(spec, 0, 0))
}

/// `scale × closed form = head + scale Σ`, reindexed so the numerator
/// shifts absorb the negative parts.
pub fn emit_normalized(identity: &NormalizedIdentity) -> String {
    let h = identity.spec.negative_shift_terms() as i64;
    let lower = identity.tail_start as i64 - h;
    let scale = if identity.scale.is_one() {
        String::new()
    } else {
        frac(&identity.scale)
    };
    format!(
        "{}={}+{scale}{}",
        identity.rhs.to_latex(),
        frac(&identity.head),
        sum_tex(&identity.spec, lower, h)
    )
}

pub fn emit_latex(entry: &CatalogEntry) -> String {
    match entry.normalized() {
        Some(n) => emit_normalized(&n),
        None => emit_spec(&entry.spec),
    }
}

fn raw_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        let poch = r"\(\\frac\{(\d+)\}\{(\d+)\}\)_(?:n|\{n([+-]\d+)\})";
        Regex::new(&format!(
            r"^.*=\\sum_\{{n=0\}}\^\{{\\infty\}}\\frac\{{{poch}(?:\^2|{poch})\}}\{{(?P<den>[^{{}}]*)\}}$"
        ))
        .expect("valid pattern")
    })
}

fn denominator_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^((?:\(n\+\d+\))*)n!\^2$|^n!\(n\+(\d+)\)!$").expect("valid pattern"))
}

/// Reads back the output of [`emit_spec`].
pub fn parse_spec(latex: &str) -> Result<SeriesSpec> {
    let bad = || Error::Parse(format!("not a raw series display: {latex}"));
    let caps = raw_pattern().captures(latex.trim()).ok_or_else(bad)?;
    let num = |i: usize| -> Result<i64> { caps.get(i).map_or(Ok(0), |m| m.as_str().parse().map_err(|_| bad())) };
    let (p, q, a) = (num(1)?, num(2)?, num(3)?);
    let alpha = RationalAlpha::new(p as u64, q as u64)?;
    let b = if caps.get(4).is_some() {
        let (p2, q2) = (num(4)?, num(5)?);
        if RationalAlpha::new(p2 as u64, q2 as u64)? != alpha.complement() {
            return Err(Error::Parse(format!("second parameter is not 1 - {alpha}")));
        }
        num(6)?
    } else {
        if alpha != alpha.complement() {
            return Err(bad());
        }
        a
    };
    let den = denominator_pattern().captures(&caps["den"]).ok_or_else(bad)?;
    let c = match (den.get(1), den.get(2)) {
        (_, Some(c)) => c.as_str().parse().map_err(|_| bad())?,
        (Some(factors), None) => factors.as_str().matches("(n+").count() as i64,
        (None, None) => return Err(bad()),
    };
    SeriesSpec::new(alpha, a, b, c)
}
