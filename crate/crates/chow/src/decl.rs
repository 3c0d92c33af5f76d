//! The declared-data file format: a single JSON object.
//!
//! ```json
//! {
//!   "description": "...",
//!   "class_invariants": [2],
//!   "conductor_primes": [
//!     { "p": 2, "residue_size_below": 2,
//!       "places": [ { "label": "P", "degree": 2, "ramification": 1, "class_image": [1] } ] }
//!   ],
//!   "orders": { "main": [0] }
//! }
//! ```
//!
//! `orders` is optional. A `class_image` of `null` marks an unknown class.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use chow_core::declared::{DeclaredError, DeclaredField, DeclaredPlace, DeclaredPrime};

#[derive(Debug, thiserror::Error)]
pub enum DeclError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid declared data at {0}")]
    Invalid(#[from] DeclaredError),
    #[error("{0} does not fit in 64 bits")]
    Overflow(BigInt),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePlace {
    label: String,
    degree: u32,
    ramification: u32,
    class_image: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePrime {
    p: u64,
    residue_size_below: u64,
    places: Vec<FilePlace>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    description: String,
    class_invariants: Vec<i64>,
    conductor_primes: Vec<FilePrime>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    orders: BTreeMap<String, Vec<usize>>,
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small(v: &[BigInt]) -> Result<Vec<i64>, DeclError> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| DeclError::Overflow(x.clone()))).collect()
}

/// Parses and validates a declared-data document.
pub fn parse_declared(text: &str) -> Result<DeclaredField, DeclError> {
    let doc: FileDoc = serde_json::from_str(text).map_err(|e| DeclError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = DeclaredField {
        description: doc.description,
        class_invariants: big(&doc.class_invariants),
        conductor_primes: doc
            .conductor_primes
            .into_iter()
            .map(|r| DeclaredPrime {
                p: r.p,
                residue_size_below: r.residue_size_below,
                places: r
                    .places
                    .into_iter()
                    .map(|pl| DeclaredPlace {
                        label: pl.label,
                        degree: pl.degree,
                        ramification: pl.ramification,
                        class_image: pl.class_image.as_deref().map(big),
                    })
                    .collect(),
            })
            .collect(),
        orders: doc.orders,
    };
    field.validate()?;
    Ok(field)
}

pub fn read_declared(path: &Path) -> Result<DeclaredField, DeclError> {
    let text = fs::read_to_string(path).map_err(|source| DeclError::Io { path: path.display().to_string(), source })?;
    parse_declared(&text)
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_declared(field: &DeclaredField) -> Result<String, DeclError> {
    let mut conductor_primes = Vec::new();
    for r in &field.conductor_primes {
        let mut places = Vec::new();
        for pl in &r.places {
            places.push(FilePlace {
                label: pl.label.clone(),
                degree: pl.degree,
                ramification: pl.ramification,
                class_image: pl.class_image.as_deref().map(small).transpose()?,
            });
        }
        conductor_primes.push(FilePrime { p: r.p, residue_size_below: r.residue_size_below, places });
    }
    let doc = FileDoc {
        description: field.description.clone(),
        class_invariants: small(&field.class_invariants)?,
        conductor_primes,
        orders: field.orders.clone(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chow_core::declared::Violation;

    const BIQUAD: &str = include_str!("../data/biquad.decl");
    const QUINTIC: &str = include_str!("../data/quintic.decl");

    #[test]
    fn golden_files_round_trip() {
        for text in [BIQUAD, QUINTIC, include_str!("../data/sextic_template.decl")] {
            let f = parse_declared(text).unwrap();
            let again = serialize_declared(&f).unwrap();
            assert_eq!(parse_declared(&again).unwrap(), f);
            assert_eq!(again, text);
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_declared("{\n  \"description\": 3\n}").unwrap_err();
        let DeclError::Syntax { line, .. } = err else { panic!("{err}") };
        assert_eq!(line, 2);
        assert!(matches!(parse_declared(&BIQUAD.replace("\"degree\"", "\"deg\"")), Err(DeclError::Syntax { .. })));
    }

    #[test]
    fn semantic_errors_name_the_invariant() {
        let bad = BIQUAD.replace("\"class_invariants\": [\n    2\n  ]", "\"class_invariants\": [\n    4,\n    2\n  ]");
        assert_ne!(bad, BIQUAD);
        let DeclError::Invalid(e) = parse_declared(&bad).unwrap_err() else { panic!() };
        assert_eq!(e.violation, Violation::DivisibilityChain);
    }
}
