//! Place labels and finite formal sums of places.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Names a maximal ideal.
///
/// Quadratic places are `p` when unique over `p` and `p.k` for the two
/// branches of a split prime. Declared fields use free-form labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaceLabel {
    Prime(u64),
    Branch(u64, u32),
    Named(String),
}

impl PlaceLabel {
    fn sort_key(&self) -> (u8, u64, u32, u8, &str) {
        match self {
            PlaceLabel::Prime(p) => (0, *p, 0, 0, ""),
            PlaceLabel::Branch(p, k) => (0, *p, *k, 1, ""),
            PlaceLabel::Named(s) => (1, 0, 0, 0, s.as_str()),
        }
    }

    /// The rational prime, when the label carries one.
    pub fn prime(&self) -> Option<u64> {
        match self {
            PlaceLabel::Prime(p) | PlaceLabel::Branch(p, _) => Some(*p),
            PlaceLabel::Named(_) => None,
        }
    }
}

impl Ord for PlaceLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PlaceLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceLabel::Prime(p) => write!(f, "{p}"),
            PlaceLabel::Branch(p, k) => write!(f, "{p}.{k}"),
            PlaceLabel::Named(s) => f.write_str(s),
        }
    }
}

impl FromStr for PlaceLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Syntax(String::new()));
        }
        let numeric = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        match s.split_once('.') {
            None if numeric(s) => s.parse().map(PlaceLabel::Prime).map_err(|_| Error::UnknownPlace(s.into())),
            Some((p, k)) if numeric(p) && numeric(k) => {
                let p = p.parse().map_err(|_| Error::UnknownPlace(s.into()))?;
                let k = k.parse().map_err(|_| Error::UnknownPlace(s.into()))?;
                Ok(PlaceLabel::Branch(p, k))
            }
            _ => Ok(PlaceLabel::Named(s.to_string())),
        }
    }
}

/// Whether a divisor lives on the order or on its normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Order,
    Maximal,
}

/// Finite formal sum of places with nonzero integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    level: Level,
    support: BTreeMap<PlaceLabel, BigInt>,
}

impl Divisor {
    pub fn zero(level: Level) -> Self {
        Divisor { level, support: BTreeMap::new() }
    }

    pub fn from_terms<I, C>(level: Level, terms: I) -> Self
    where
        I: IntoIterator<Item = (PlaceLabel, C)>,
        C: Into<BigInt>,
    {
        let mut d = Self::zero(level);
        for (label, c) in terms {
            d.add_term(label, &c.into());
        }
        d
    }

    /// Parses `place:coeff,place:coeff`. The empty string is the zero divisor.
    pub fn parse(level: Level, text: &str) -> Result<Self> {
        let mut d = Self::zero(level);
        for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (place, coeff) = item.rsplit_once(':').ok_or_else(|| Error::Syntax(item.into()))?;
            let c: BigInt = coeff.trim().parse().map_err(|_| Error::Syntax(item.into()))?;
            d.add_term(place.parse()?, &c);
        }
        Ok(d)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn add_term(&mut self, label: PlaceLabel, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.support.entry(label.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.support.remove(&label);
        }
    }

    pub fn coeff(&self, label: &PlaceLabel) -> BigInt {
        self.support.get(label).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PlaceLabel, &BigInt)> {
        self.support.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (l, c) in other.iter() {
            out.add_term(l.clone(), c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Divisor {
        let mut out = Self::zero(self.level);
        for (l, c) in self.iter() {
            out.add_term(l.clone(), &(c * k));
        }
        out
    }

    pub fn neg(&self) -> Divisor {
        self.scale(&BigInt::from(-1))
    }

    pub fn labels(&self) -> Vec<PlaceLabel> {
        self.support.keys().cloned().collect()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (l, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}:{c}")?;
        }
        Ok(())
    }
}
