//! The fixed catalog of identities: explicit instances and families in `k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{normalize_identity, NormalizedIdentity, RationalAlpha, SeriesSpec};
use crate::shifted_factorial::factorial;

/// Multiply through by `scale` and peel the first `head_terms` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    #[serde(serialize_with = "ser_rational")]
    pub scale: BigRational,
    pub head_terms: u64,
}

/// How a family's presentation depends on `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyScale {
    /// Raw series, no normalization.
    Raw,
    /// `numer · (k + shift)! / denom`.
    Factorial { numer: u64, denom: u64, shift: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub alpha: RationalAlpha,
    pub a: i64,
    pub b: i64,
    /// Smallest admissible `k`; `c = k`.
    pub k_min: i64,
    pub scale: FamilyScale,
    pub head_terms: u64,
}

impl Family {
    pub fn spec(&self, k: i64) -> Result<SeriesSpec> {
        if k < self.k_min {
            return Err(Error::Domain(format!(
                "k = {k} is below the family minimum {}",
                self.k_min
            )));
        }
        SeriesSpec::new(self.alpha, self.a, self.b, k)
    }

    pub fn presentation(&self, k: i64) -> Option<Presentation> {
        match self.scale {
            FamilyScale::Raw => None,
            FamilyScale::Factorial { numer, denom, shift } => {
                let f = BigInt::from(factorial((k as u64) + shift));
                Some(Presentation {
                    scale: BigRational::new(f * numer, BigInt::from(denom)),
                    head_terms: self.head_terms,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub spec: SeriesSpec,
    pub presentation: Option<Presentation>,
    pub citation: String,
    /// Closed form after scaling, e.g. `8√2/(3π)`.
    pub rhs_display: String,
    /// Set for parametric entries; `spec` is then the `k_min` instance.
    pub family: Option<Family>,
}

impl CatalogEntry {
    pub fn is_family(&self) -> bool {
        self.family.is_some()
    }

    /// The normalized identity, when the entry has a presentation.
    pub fn normalized(&self) -> Option<NormalizedIdentity> {
        self.presentation
            .as_ref()
            .map(|p| normalize_identity(&self.spec, &p.scale, p.head_terms).expect("catalog presentations are valid"))
    }

    /// The explicit entry for `c = k` of a family.
    pub fn instance(&self, k: i64) -> Result<CatalogEntry> {
        let family = self
            .family
            .ok_or_else(|| Error::Domain(format!("{} is not a family", self.id)))?;
        let spec = family.spec(k)?;
        let presentation = family.presentation(k);
        let rhs = match &presentation {
            Some(p) => spec.rhs_constant().scaled(&p.scale),
            None => spec.rhs_constant(),
        };
        Ok(CatalogEntry {
            id: format!("{}-k{k}", self.id),
            spec,
            presentation,
            citation: format!("{}, k = {k}", self.citation),
            rhs_display: rhs.display(),
            family: None,
        })
    }
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn half() -> RationalAlpha {
    RationalAlpha::new(1, 2).expect("valid")
}

fn explicit(
    id: &str,
    alpha: RationalAlpha,
    (a, b, c): (i64, i64, i64),
    presentation: Option<(BigRational, u64)>,
    citation: &str,
    rhs_display: &str,
) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        spec: SeriesSpec::new(alpha, a, b, c).expect("catalog specs are valid"),
        presentation: presentation.map(|(scale, head_terms)| Presentation { scale, head_terms }),
        citation: citation.to_string(),
        rhs_display: rhs_display.to_string(),
        family: None,
    }
}

fn family(id: &str, family: Family, citation: &str) -> CatalogEntry {
    let base = CatalogEntry {
        id: id.to_string(),
        spec: family.spec(family.k_min).expect("catalog families are valid"),
        presentation: None,
        citation: citation.to_string(),
        rhs_display: String::new(),
        family: Some(family),
    };
    let first = base.instance(family.k_min).expect("k_min is admissible");
    CatalogEntry {
        presentation: first.presentation,
        rhs_display: first.rhs_display,
        ..base
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The `α ≠ 1/2` examples and families: `(α; -1, -1, k)` scaled so the
/// head is 1.
const ALPHA_FAMILIES: [(u64, u64, &str, &str, u64, u64, &str); 5] = [
    (1, 3, "a13", "3.12", 2, 9, "9√3/(4π)"),
    (1, 4, "a14", "3.15", 3, 16, "8√2/(3π)"),
    (1, 6, "a16", "3.18", 5, 36, "18/(5π)"),
    (1, 10, "a110", "3.21", 9, 100, "25(√5-1)/(9π)"),
    (1, 5, "a15", "3.24", 4, 25, "25√(10-2√5)/(16π)"),
];

/// Ten explicit identities followed by eight families, in a fixed order.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    let h = half();
    let one = ratio(1, 1);
    let mut out = vec![
        explicit("ex-3.3", h, (0, 0, 1), None, "Example 3.3", "4/π"),
        explicit("ex-3.4", h, (0, 0, 2), None, "Example 3.4", "16/(9π)"),
        explicit("ex-3.6", h, (-1, -1, 0), Some((one.clone(), 2)), "Example 3.6", "16/π"),
        explicit(
            "ex-3.7",
            h,
            (-1, -1, 1),
            Some((ratio(2, 1), 2)),
            "Example 3.7",
            "256/(9π)",
        ),
        explicit(
            "ex-3.10",
            h,
            (-2, -2, 0),
            Some((ratio(36, 1), 3)),
            "Example 3.10",
            "2048/(3π)",
        ),
    ];
    for (p, q, tag, sc, num, den, display) in ALPHA_FAMILIES {
        let alpha = RationalAlpha::new(p, q).expect("valid");
        out.push(explicit(
            &format!("ex-{tag}-k0"),
            alpha,
            (-1, -1, 0),
            Some((ratio(num as i64, den as i64), 1)),
            &format!("Example, k = 0 in Special case {sc}"),
            display,
        ));
    }
    out.push(family(
        "sc-3.2",
        Family {
            alpha: h,
            a: 0,
            b: 0,
            k_min: 1,
            scale: FamilyScale::Raw,
            head_terms: 0,
        },
        "Special case 3.2",
    ));
    out.push(family(
        "sc-3.5",
        Family {
            alpha: h,
            a: -1,
            b: -1,
            k_min: 0,
            scale: FamilyScale::Factorial {
                numer: 1,
                denom: 1,
                shift: 1,
            },
            head_terms: 2,
        },
        "Special case 3.5",
    ));
    out.push(family(
        "sc-3.9",
        Family {
            alpha: h,
            a: -2,
            b: -2,
            k_min: 0,
            scale: FamilyScale::Factorial {
                numer: 18,
                denom: 1,
                shift: 2,
            },
            head_terms: 3,
        },
        "Special case 3.9",
    ));
    for (p, q, _, sc, num, den, _) in ALPHA_FAMILIES {
        out.push(family(
            &format!("sc-{sc}"),
            Family {
                alpha: RationalAlpha::new(p, q).expect("valid"),
                a: -1,
                b: -1,
                k_min: 0,
                scale: FamilyScale::Factorial {
                    numer: num,
                    denom: den,
                    shift: 0,
                },
                head_terms: 1,
            },
            &format!("Special case {sc}"),
        ));
    }
    out
}

/// Looks up an entry by id; family instances are addressed as `<id>-k<k>`.
pub fn find_entry(id: &str) -> Option<CatalogEntry> {
    let entries = catalog_entries();
    if let Some(e) = entries.iter().find(|e| e.id == id) {
        return Some(e.clone());
    }
    let (base, k) = id.rsplit_once("-k")?;
    let k: i64 = k.parse().ok()?;
    entries.iter().find(|e| e.id == base && e.is_family())?.instance(k).ok()
}

/// The catalog entry presenting `spec`: an explicit entry if one matches,
/// otherwise the matching family instance.
pub fn find_by_spec(spec: &SeriesSpec) -> Option<CatalogEntry> {
    let entries = catalog_entries();
    if let Some(e) = entries.iter().find(|e| !e.is_family() && e.spec == *spec) {
        return Some(e.clone());
    }
    entries.iter().find_map(|e| {
        let f = e.family?;
        let k = spec.c();
        (f.alpha == spec.alpha() && f.a == spec.a() && f.b == spec.b() && k >= f.k_min)
            .then(|| e.instance(k).ok())
            .flatten()
    })
}
