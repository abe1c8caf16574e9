//! Built-in presentations and the JSON presentation file format.
//!
//! ```json
//! { "name": "pgca",
//!   "kinds": [ { "name": "L", "z2_degree": [0, 0] } ],
//!   "brackets": [ { "left": "L", "right": "L",
//!                   "terms": [ { "kind": "L",
//!                                "coeff": { "c0": "0", "cm": "1", "cn": "-1" },
//!                                "offset": 0 } ] } ] }
//! ```
//!
//! Rationals are strings (`"p/q"` or `"p"`); omitted coefficient fields
//! default to `"0"`. Two optional extensions carry the Virasoro centre: a
//! kind may set `"central": true`, and a term may replace `coeff` with
//! `"cocycle": "s"` meaning `s * (m^3 - m) / 12` on `m + n = 0`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    validate_presentation, AffinePoly, AlgebraError, AlgebraPresentation, PresentationBuilder,
    TermCoeff,
};
use crate::rational::{self, int, Rational};

pub const KEYS: [&str; 5] = ["pgca", "witt", "virasoro", "heisenberg-virasoro", "abelian"];

/// Window used when validating a loaded file.
pub const LOAD_VALIDATION_WINDOW: i64 = 4;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown algebra {key:?}; available: {}", available.join(", "))]
    NotFound { key: String, available: Vec<String> },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed presentation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid presentation: {0}")]
    Structure(#[from] AlgebraError),
    #[error("presentation {name:?} fails validation at window {window}: {message}")]
    Validation {
        name: String,
        window: i64,
        message: String,
    },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub presentation: AlgebraPresentation,
    pub notes: &'static str,
}

fn affine(c0: i64, cm: i64, cn: i64) -> TermCoeff {
    TermCoeff::Affine(AffinePoly::from_ints(c0, cm, cn))
}

fn build(key: &str) -> Option<(AlgebraPresentation, &'static str)> {
    let p = match key {
        "pgca" => (
            PresentationBuilder::new("pgca")
                .kind("L", (0, 0))
                .kind("H", (1, 1))
                .kind("I", (0, 1))
                .kind("J", (1, 0))
                .rule("L", "L", vec![("L", affine(0, 1, -1))])
                .rule("L", "H", vec![("H", affine(0, 0, -1))])
                .rule("L", "I", vec![("I", affine(0, 1, -1))])
                .rule("L", "J", vec![("J", affine(0, 1, -1))])
                .rule("H", "I", vec![("J", affine(1, 0, 0))])
                .rule("H", "J", vec![("I", affine(-1, 0, 0))]),
            "planar Galilean conformal algebra; L, I, J, H in Z2 sectors (0,0), (0,1), (1,0), (1,1)",
        ),
        "witt" => (
            PresentationBuilder::new("witt")
                .kind("L", (0, 0))
                .rule("L", "L", vec![("L", affine(0, 1, -1))]),
            "Witt algebra, [L_m, L_n] = (m-n) L_{m+n}",
        ),
        "virasoro" => (
            PresentationBuilder::new("virasoro")
                .kind("L", (0, 0))
                .central_kind("C", (0, 0))
                .rule(
                    "L",
                    "L",
                    vec![("L", affine(0, 1, -1)), ("C", TermCoeff::Cocycle(int(1)))],
                ),
            "Virasoro algebra, central C with cocycle (m^3-m)/12 on m+n=0",
        ),
        "heisenberg-virasoro" => (
            PresentationBuilder::new("heisenberg-virasoro")
                .kind("L", (0, 0))
                .kind("I", (0, 1))
                .rule("L", "L", vec![("L", affine(0, 1, -1))])
                .rule("L", "I", vec![("I", affine(0, 0, -1))]),
            "centerless twisted Heisenberg-Virasoro algebra; I placed in Z2 sector (0,1) so every \
             homogeneous component has a single partner kind",
        ),
        "abelian" => (
            PresentationBuilder::new("abelian").kind("E", (0, 0)),
            "one family with zero bracket",
        ),
        _ => return None,
    };
    Some((
        p.0.build().expect("catalog presentations are well formed"),
        p.1,
    ))
}

pub fn get(key: &str) -> Result<AlgebraPresentation, CatalogError> {
    build(key)
        .map(|(p, _)| p)
        .ok_or_else(|| CatalogError::NotFound {
            key: key.to_string(),
            available: KEYS.iter().map(|k| k.to_string()).collect(),
        })
}

pub fn entries() -> Vec<CatalogEntry> {
    KEYS.iter()
        .map(|&key| {
            let (presentation, notes) = build(key).expect("listed key");
            CatalogEntry {
                key,
                presentation,
                notes,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    name: String,
    kinds: Vec<KindFile>,
    #[serde(default)]
    brackets: Vec<BracketFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KindFile {
    name: String,
    z2_degree: [i64; 2],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    central: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketFile {
    left: String,
    right: String,
    terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff: Option<CoeffFile>,
    #[serde(default)]
    offset: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cocycle: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffFile {
    #[serde(default)]
    c0: Option<String>,
    #[serde(default)]
    cm: Option<String>,
    #[serde(default)]
    cn: Option<String>,
}

fn parse_field(field: &Option<String>, ctx: &str, name: &str) -> Result<Rational, CatalogError> {
    match field {
        None => Ok(int(0)),
        Some(s) => {
            rational::parse(s).map_err(|e| CatalogError::Parse(format!("{ctx}, {name}: {e}")))
        }
    }
}

/// Parses a presentation without running validation.
pub fn from_json_str(text: &str) -> Result<AlgebraPresentation, CatalogError> {
    let file: PresentationFile = serde_json::from_str(text)?;
    let mut b = PresentationBuilder::new(file.name.clone());
    for k in &file.kinds {
        let [a, c] = k.z2_degree;
        if !(0..=1).contains(&a) || !(0..=1).contains(&c) {
            return Err(CatalogError::Parse(format!(
                "kind {:?}: z2_degree entries must be 0 or 1, got {:?}",
                k.name, k.z2_degree
            )));
        }
        b = if k.central {
            b.central_kind(&k.name, (a as u8, c as u8))
        } else {
            b.kind(&k.name, (a as u8, c as u8))
        };
    }
    for (ri, rule) in file.brackets.iter().enumerate() {
        let mut terms = Vec::with_capacity(rule.terms.len());
        for (ti, t) in rule.terms.iter().enumerate() {
            let ctx = format!(
                "bracket #{ri} [{}, {}], term #{ti} ({})",
                rule.left, rule.right, t.kind
            );
            let coeff = match (&t.cocycle, &t.coeff) {
                (Some(_), Some(_)) => {
                    return Err(CatalogError::Parse(format!(
                        "{ctx}: a term has either \"coeff\" or \"cocycle\", not both"
                    )))
                }
                (Some(s), None) => {
                    TermCoeff::Cocycle(parse_field(&Some(s.clone()), &ctx, "cocycle")?)
                }
                (None, c) => {
                    let c = c.clone().unwrap_or_default();
                    TermCoeff::Affine(AffinePoly::new(
                        parse_field(&c.c0, &ctx, "c0")?,
                        parse_field(&c.cm, &ctx, "cm")?,
                        parse_field(&c.cn, &ctx, "cn")?,
                    ))
                }
            };
            terms.push((t.kind.as_str(), coeff, t.offset));
        }
        b = b.rule_with_offsets(&rule.left, &rule.right, terms);
    }
    Ok(b.build()?)
}

/// Canonical JSON text of a presentation.
pub fn to_json_string(p: &AlgebraPresentation) -> String {
    let name = |k: usize| p.kind(k).name.clone();
    let file = PresentationFile {
        name: p.name().to_string(),
        kinds: p
            .kinds()
            .iter()
            .map(|k| KindFile {
                name: k.name.clone(),
                z2_degree: [k.z2.0 as i64, k.z2.1 as i64],
                central: k.central,
            })
            .collect(),
        brackets: p
            .rules()
            .iter()
            .map(|r| BracketFile {
                left: name(r.left),
                right: name(r.right),
                terms: r
                    .terms
                    .iter()
                    .map(|t| match &t.coeff {
                        TermCoeff::Affine(a) => TermFile {
                            kind: name(t.target),
                            coeff: Some(CoeffFile {
                                c0: Some(rational::format(&a.c0)),
                                cm: Some(rational::format(&a.cm)),
                                cn: Some(rational::format(&a.cn)),
                            }),
                            offset: t.offset,
                            cocycle: None,
                        },
                        TermCoeff::Cocycle(s) => TermFile {
                            kind: name(t.target),
                            coeff: None,
                            offset: t.offset,
                            cocycle: Some(rational::format(s)),
                        },
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("presentation serializes");
    s.push('\n');
    s
}

pub fn save(p: &AlgebraPresentation, path: &Path) -> Result<(), CatalogError> {
    std::fs::write(path, to_json_string(p)).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_unvalidated(path: &Path) -> Result<AlgebraPresentation, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_json_str(&text)
}

/// Parses `path` and validates it at [`LOAD_VALIDATION_WINDOW`].
pub fn load(path: &Path) -> Result<AlgebraPresentation, CatalogError> {
    let p = load_unvalidated(path)?;
    let report = validate_presentation(&p, LOAD_VALIDATION_WINDOW);
    if let Some(f) = &report.failure {
        let mut message = f.describe(&p);
        let _ = write!(message, " (rules involved: {})", rules_touching(&p, f));
        return Err(CatalogError::Validation {
            name: p.name().to_string(),
            window: LOAD_VALIDATION_WINDOW,
            message,
        });
    }
    Ok(p)
}

fn rules_touching(p: &AlgebraPresentation, f: &crate::algebra::ValidationFailure) -> String {
    use crate::algebra::ValidationFailure as V;
    let kinds: Vec<usize> = match f {
        V::Grading { x, y, .. } | V::SkewSymmetry { x, y, .. } => vec![x.kind, y.kind],
        V::Jacobi { x, y, z, .. } => vec![x.kind, y.kind, z.kind],
    };
    let names: Vec<String> = p
        .rules()
        .iter()
        .filter(|r| kinds.contains(&r.left) && kinds.contains(&r.right))
        .map(|r| format!("[{}, {}]", p.kind(r.left).name, p.kind(r.right).name))
        .collect();
    names.join(", ")
}
