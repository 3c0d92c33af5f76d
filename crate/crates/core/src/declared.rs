//! Declared field data: class-group invariants, the splitting of the
//! conductor primes and the classes of the places above them.
//!
//! Parsing lives in the std crate; this module owns the record and its
//! validation, and carves orders out of a validated record.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::abgroup::AbelianGroup;
use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::orders::{order_prime_label, NonInvertiblePrime, OrderData, PlaceAbove, PlaceSource};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredPlace {
    pub label: String,
    pub degree: u32,
    pub ramification: u32,
    /// Coordinates in the declared invariant factors; `None` when unknown.
    pub class_image: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredPrime {
    pub p: u64,
    pub residue_size_below: u64,
    pub places: Vec<DeclaredPlace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeclaredField {
    pub description: String,
    pub class_invariants: Vec<BigInt>,
    pub conductor_primes: Vec<DeclaredPrime>,
    /// Named selections of `conductor_primes`.
    pub orders: BTreeMap<String, Vec<usize>>,
}

/// The invariant a declared record breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvariantTooSmall,
    DivisibilityChain,
    ImageLength { expected: usize, found: usize },
    NotPositive,
    NotPrime(u64),
    NotPowerOfPrime { size: u64, p: u64 },
    NoPlaces,
    EmptyLabel,
    DuplicateLabel(String),
    InconsistentLabel(String),
    UnknownRecord(usize),
    UnknownSelection(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvariantTooSmall => f.write_str("invariant factors must be at least 2"),
            Violation::DivisibilityChain => f.write_str("invariant factors break the divisibility chain"),
            Violation::ImageLength { expected, found } => {
                write!(f, "class image has length {found}, expected {expected}")
            }
            Violation::NotPositive => f.write_str("must be a positive integer"),
            Violation::NotPrime(p) => write!(f, "{p} is not prime"),
            Violation::NotPowerOfPrime { size, p } => write!(f, "{size} is not a power of {p}"),
            Violation::NoPlaces => f.write_str("no places listed"),
            Violation::EmptyLabel => f.write_str("empty label"),
            Violation::DuplicateLabel(l) => write!(f, "duplicate label {l}"),
            Violation::InconsistentLabel(l) => write!(f, "label {l} is declared inconsistently"),
            Violation::UnknownRecord(i) => write!(f, "no conductor prime with index {i}"),
            Violation::UnknownSelection(s) => write!(f, "unknown order selection {s:?}"),
        }
    }
}

/// A violation together with the path of the offending field.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {violation}")]
pub struct DeclaredError {
    pub path: String,
    pub violation: Violation,
}

fn violation(path: impl Into<String>, violation: Violation) -> DeclaredError {
    DeclaredError { path: path.into(), violation }
}

fn is_power_of(size: u64, p: u64) -> bool {
    let mut s = size;
    while s > 1 && s.is_multiple_of(p) {
        s /= p;
    }
    s == 1 && size > 1
}

impl DeclaredField {
    pub fn validate(&self) -> core::result::Result<(), DeclaredError> {
        for (i, d) in self.class_invariants.iter().enumerate() {
            if d < &BigInt::from(2) {
                return Err(violation(format!("class_invariants[{i}]"), Violation::InvariantTooSmall));
            }
            if i + 1 < self.class_invariants.len() && !(&self.class_invariants[i + 1] % d).is_zero() {
                return Err(violation(format!("class_invariants[{i}]"), Violation::DivisibilityChain));
            }
        }
        let k = self.class_invariants.len();
        // label -> (residue field size, ramification, image)
        let mut seen: BTreeMap<&str, (u128, u32, &Option<Vec<BigInt>>)> = BTreeMap::new();
        for (i, rec) in self.conductor_primes.iter().enumerate() {
            let path = format!("conductor_primes[{i}]");
            if !is_prime_u64(rec.p) {
                return Err(violation(format!("{path}.p"), Violation::NotPrime(rec.p)));
            }
            if !is_power_of(rec.residue_size_below, rec.p) {
                return Err(violation(
                    format!("{path}.residue_size_below"),
                    Violation::NotPowerOfPrime { size: rec.residue_size_below, p: rec.p },
                ));
            }
            if rec.places.is_empty() {
                return Err(violation(format!("{path}.places"), Violation::NoPlaces));
            }
            let mut local: Vec<&str> = Vec::new();
            for (j, pl) in rec.places.iter().enumerate() {
                let ppath = format!("{path}.places[{j}]");
                let label = pl.label.trim();
                if label.is_empty() {
                    return Err(violation(format!("{ppath}.label"), Violation::EmptyLabel));
                }
                if local.contains(&label) {
                    return Err(violation(format!("{ppath}.label"), Violation::DuplicateLabel(label.to_string())));
                }
                local.push(label);
                if pl.degree == 0 {
                    return Err(violation(format!("{ppath}.degree"), Violation::NotPositive));
                }
                if pl.ramification == 0 {
                    return Err(violation(format!("{ppath}.ramification"), Violation::NotPositive));
                }
                if let Some(v) = &pl.class_image {
                    if v.len() != k {
                        return Err(violation(
                            format!("{ppath}.class_image"),
                            Violation::ImageLength { expected: k, found: v.len() },
                        ));
                    }
                }
                let size = (rec.residue_size_below as u128).checked_pow(pl.degree);
                let Some(size) = size else {
                    return Err(violation(format!("{ppath}.degree"), Violation::NotPositive));
                };
                match seen.get(label) {
                    None => {
                        seen.insert(label, (size, pl.ramification, &pl.class_image));
                    }
                    Some((s, e, img)) => {
                        let same_image = match (img, &pl.class_image) {
                            (Some(a), Some(b)) => images_agree(&self.class_invariants, a, b),
                            (None, None) => true,
                            _ => false,
                        };
                        if *s != size || *e != pl.ramification || !same_image {
                            return Err(violation(
                                format!("{ppath}.label"),
                                Violation::InconsistentLabel(label.to_string()),
                            ));
                        }
                    }
                }
            }
        }
        for (name, sel) in &self.orders {
            for &i in sel {
                if i >= self.conductor_primes.len() {
                    return Err(violation(format!("orders.{name}"), Violation::UnknownRecord(i)));
                }
            }
            check_selection(self, sel).map_err(|v| violation(format!("orders.{name}"), v))?;
        }
        Ok(())
    }

    pub fn class_group(&self) -> AbelianGroup {
        AbelianGroup::from_cyclic_orders(&self.class_invariants)
    }

    /// Record indices for a selection: an order name, comma-separated
    /// indices, or the empty string for the maximal order.
    pub fn selection(&self, selection: &str) -> core::result::Result<Vec<usize>, DeclaredError> {
        let s = selection.trim();
        if let Some(sel) = self.orders.get(s) {
            return Ok(sel.clone());
        }
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let unknown = || violation("selection", Violation::UnknownSelection(s.to_string()));
        let mut out = Vec::new();
        for part in s.split(',') {
            let i: usize = part.trim().parse().map_err(|_| unknown())?;
            if i >= self.conductor_primes.len() {
                return Err(violation("selection", Violation::UnknownRecord(i)));
            }
            if !out.contains(&i) {
                out.push(i);
            }
        }
        check_selection(self, &out).map_err(|v| violation("selection", v))?;
        Ok(out)
    }
}

fn images_agree(invariants: &[BigInt], a: &[BigInt], b: &[BigInt]) -> bool {
    invariants.iter().zip(a.iter().zip(b)).all(|(d, (x, y))| ((x - y) % d).is_zero())
}

/// A place of `Õ` lies over one prime of the order.
fn check_selection(field: &DeclaredField, sel: &[usize]) -> core::result::Result<(), Violation> {
    let mut labels: Vec<&str> = Vec::new();
    for &i in sel {
        for pl in &field.conductor_primes[i].places {
            let l = pl.label.trim();
            if labels.contains(&l) {
                return Err(Violation::DuplicateLabel(l.to_string()));
            }
            labels.push(l);
        }
    }
    Ok(())
}

/// The order whose non-invertible primes are the selected records.
pub fn declared_order(field: &DeclaredField, selection: &str) -> Result<OrderData> {
    field.validate()?;
    let sel = field.selection(selection)?;
    let cl = field.class_group();
    let mut primes = Vec::with_capacity(sel.len());
    for (pos, &i) in sel.iter().enumerate() {
        let rec = &field.conductor_primes[i];
        let same_p: Vec<usize> = sel.iter().copied().filter(|&j| field.conductor_primes[j].p == rec.p).collect();
        let k = sel[..pos].iter().filter(|&&j| field.conductor_primes[j].p == rec.p).count();
        let label = order_prime_label(rec.p, k as u32, same_p.len() as u32);
        let mut places = Vec::with_capacity(rec.places.len());
        for pl in &rec.places {
            let image = match &pl.class_image {
                Some(v) => Some(cl.member(v)?),
                None => None,
            };
            places.push(PlaceAbove {
                label: pl.label.parse()?,
                degree: pl.degree,
                ramification: pl.ramification,
                source: PlaceSource::Declared(image),
            });
        }
        primes.push(NonInvertiblePrime::new(label, rec.p, rec.residue_size_below, places)?);
    }
    Ok(OrderData::from_declared(cl, primes))
}

/// Transcribes a quadratic order into declared data with a single selection `main`.
pub fn transcribe(order: &OrderData) -> Result<DeclaredField> {
    let field = order.field().ok_or(Error::DeclaredBackend)?;
    let cl = order.class_group()?;
    let mut conductor_primes = Vec::new();
    for q in order.noninvertible_primes() {
        let mut places = Vec::new();
        for pl in &q.places {
            let class = order.place_class(pl)?;
            places.push(DeclaredPlace {
                label: pl.label.to_string(),
                degree: pl.degree,
                ramification: pl.ramification,
                class_image: Some(class.coords.clone()),
            });
        }
        conductor_primes.push(DeclaredPrime { p: q.p, residue_size_below: q.residue_size, places });
    }
    let mut orders = BTreeMap::new();
    orders.insert("main".to_string(), (0..conductor_primes.len()).collect());
    Ok(DeclaredField {
        description: format!("transcribed from d = {}, f = {}", field.disc(), order.conductor().unwrap_or(1)),
        class_invariants: cl.invariant_factors().iter().map(|d| d.abs()).filter(|d| !d.is_one()).collect(),
        conductor_primes,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{chow_group, exact_sequence_data};
    use num_traits::ToPrimitive;

    fn place(label: &str, degree: u32, image: Option<&[i64]>) -> DeclaredPlace {
        DeclaredPlace {
            label: label.into(),
            degree,
            ramification: 1,
            class_image: image.map(|v| v.iter().map(|&x| BigInt::from(x)).collect()),
        }
    }

    fn biquad() -> DeclaredField {
        let mut orders = BTreeMap::new();
        orders.insert("main".into(), alloc::vec![0]);
        DeclaredField {
            description: "biquadratic".into(),
            class_invariants: alloc::vec![BigInt::from(2)],
            conductor_primes: alloc::vec![DeclaredPrime {
                p: 2,
                residue_size_below: 2,
                places: alloc::vec![place("P", 2, Some(&[1])), place("Q", 2, Some(&[1]))],
            }],
            orders,
        }
    }

    fn quintic() -> DeclaredField {
        let rec = |places| DeclaredPrime { p: 7, residue_size_below: 7, places };
        let mut orders = BTreeMap::new();
        orders.insert("O1".into(), alloc::vec![0]);
        orders.insert("O2".into(), alloc::vec![1]);
        orders.insert("Oprime".into(), alloc::vec![0, 1]);
        orders.insert("O".into(), alloc::vec![2]);
        DeclaredField {
            description: "quintic".into(),
            class_invariants: Vec::new(),
            conductor_primes: alloc::vec![
                rec(alloc::vec![place("P1", 2, Some(&[]))]),
                rec(alloc::vec![place("P2", 3, Some(&[]))]),
                rec(alloc::vec![place("P1", 2, Some(&[])), place("P2", 3, Some(&[]))]),
            ],
            orders,
        }
    }

    fn invariants(o: &OrderData) -> Vec<i64> {
        chow_group(o).unwrap().group().invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn biquadratic_example() {
        let o = declared_order(&biquad(), "main").unwrap();
        assert_eq!(invariants(&o), [4]);
        let seq = exact_sequence_data(&o).unwrap();
        assert!(seq.non_split);
        assert_eq!(invariants(&declared_order(&biquad(), "").unwrap()), [2]);
    }

    #[test]
    fn quintic_orders() {
        let f = quintic();
        assert_eq!(invariants(&declared_order(&f, "O1").unwrap()), [2]);
        assert_eq!(invariants(&declared_order(&f, "O2").unwrap()), [3]);
        assert_eq!(invariants(&declared_order(&f, "Oprime").unwrap()), [6]);
        assert!(invariants(&declared_order(&f, "O").unwrap()).is_empty());
        let o = declared_order(&f, "0,1").unwrap();
        let labels: Vec<String> = o.noninvertible_primes().iter().map(|q| q.label.to_string()).collect();
        assert_eq!(labels, ["7.0", "7.1"]);
        assert!(declared_order(&f, "0,2").is_err());
        assert!(declared_order(&f, "nope").is_err());
    }

    #[test]
    fn validation_failures() {
        let mut f = biquad();
        f.class_invariants = alloc::vec![BigInt::from(4), BigInt::from(2)];
        assert_eq!(f.validate().unwrap_err().violation, Violation::DivisibilityChain);
        let mut f = biquad();
        f.class_invariants = alloc::vec![BigInt::from(2), BigInt::from(4)];
        assert_eq!(f.validate().unwrap_err().violation, Violation::ImageLength { expected: 2, found: 1 });
        let mut f = biquad();
        f.conductor_primes[0].places[1].label = "P".into();
        assert_eq!(f.validate().unwrap_err().violation, Violation::DuplicateLabel("P".into()));
        let mut f = biquad();
        f.conductor_primes[0].p = 4;
        assert_eq!(f.validate().unwrap_err().path, "conductor_primes[0].p");
        let mut f = quintic();
        f.conductor_primes[2].places[1].degree = 4;
        assert_eq!(f.validate().unwrap_err().violation, Violation::InconsistentLabel("P2".into()));
    }

    #[test]
    fn missing_images_are_incomplete() {
        let mut f = biquad();
        f.conductor_primes[0].places[0].class_image = None;
        let o = declared_order(&f, "main").unwrap();
        assert!(matches!(chow_group(&o), Err(Error::Incomplete(_))));
    }
}
