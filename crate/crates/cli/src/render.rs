//! Plain-text and JSON renderings for terminal output.

use rampi::{CatalogEntry, SeriesSpec, VerificationReport};
use serde_json::{json, Value};

pub fn catalog_table(entries: &[CatalogEntry]) -> String {
    let mut out = format!(
        "{:<12} {:<22} {:<20} {}\n",
        "id", "spec (α; a, b, c)", "closed form", "source"
    );
    for e in entries {
        let spec = match e.family {
            Some(f) => format!("({}; {}, {}, k≥{})", f.alpha, f.a, f.b, f.k_min),
            None => format!("({}; {}, {}, {})", e.spec.alpha(), e.spec.a(), e.spec.b(), e.spec.c()),
        };
        out.push_str(&format!(
            "{:<12} {:<22} {:<20} {}\n",
            e.id, spec, e.rhs_display, e.citation
        ));
    }
    out
}

fn pochhammer(p: u64, q: u64, shift: i64) -> String {
    match shift {
        0 => format!("({p}/{q})_n"),
        s if s > 0 => format!("({p}/{q})_(n+{s})"),
        s => format!("({p}/{q})_(n{s})"),
    }
}

fn factorial(shift: i64) -> String {
    if shift == 0 {
        "n!".into()
    } else {
        format!("(n+{shift})!")
    }
}

/// `Σ_{n≥lower}` of the terms reindexed by `shift`.
fn series_text(spec: &SeriesSpec, lower: i64, shift: i64) -> String {
    let al = spec.alpha();
    let be = al.complement();
    let den = match spec.c() {
        0 => format!("{}²", factorial(shift)),
        c => format!("{}{}", factorial(shift), factorial(shift + c)),
    };
    format!(
        "Σ_{{n≥{lower}}} {}{} / {den}",
        pochhammer(al.numer(), al.denom(), spec.a() + shift),
        pochhammer(be.numer(), be.denom(), spec.b() + shift)
    )
}

pub fn identity_text(spec: &SeriesSpec, entry: Option<&CatalogEntry>) -> String {
    match entry.and_then(|e| e.normalized()) {
        Some(n) => {
            let h = spec.negative_shift_terms() as i64;
            let scale = if n.scale.numer() == n.scale.denom() {
                String::new()
            } else {
                format!("{}·", n.scale)
            };
            format!(
                "{} = {} + {scale}{}",
                n.rhs.display(),
                n.head,
                series_text(spec, n.tail_start as i64 - h, h)
            )
        }
        None => format!("{} = {}", spec.rhs_constant().display(), series_text(spec, 0, 0)),
    }
}

pub fn identity_json(spec: &SeriesSpec, entry: Option<&CatalogEntry>, latex: &str) -> Value {
    let rhs = spec.rhs_constant();
    let mut v = json!({
        "spec": {"alpha": spec.alpha().to_string(), "a": spec.a(), "b": spec.b(), "c": spec.c()},
        "rational_part": rhs.rational_part.to_string(),
        "sine": rhs.sine.kind,
        "rhs": rhs.display(),
        "latex": latex,
    });
    if let Some(n) = entry.and_then(|e| e.normalized()) {
        v["presentation"] = json!({
            "scale": n.scale.to_string(),
            "head": n.head.to_string(),
            "tail_start": n.tail_start,
            "rhs": n.rhs.display(),
        });
    }
    v
}

pub fn reports_text(reports: &[VerificationReport], ids: Option<&[String]>) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        let name = ids.map(|ids| ids[i].clone()).unwrap_or_else(|| r.spec.to_string());
        let bound = r
            .tail_bound
            .as_ref()
            .map(|b| b.to_decimal_string(3))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{} {name}: {} digits, rel {} ({}, {} terms, {} bits, bound {bound}, {} ms)\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.digits_agreed,
            r.rel_error.to_decimal_string(3),
            r.method.as_str(),
            r.terms_used,
            r.working_precision_bits,
            r.elapsed_ms,
        ));
    }
    out
}
