//! Quadratic fields `Q(√d)` by fundamental discriminant.
//!
//! Integral basis `1, ω` with `ω = (d + √d)/2`, so `ω² = d ω - (d² - d)/4`.

mod classgroup;
mod element;
mod ideal;
mod places;
mod reduce;
mod unit;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::race::OnceBox;

pub use classgroup::ClassGroup;
pub use element::QElement;
pub use ideal::QIdeal;
pub use places::{PrimePlace, SplitKind};

use crate::arith::{is_square, is_squarefree};
use crate::error::{Error, Result};

pub const DEFAULT_CLASS_BOUND: u64 = 1_000_000;

pub struct QuadField {
    disc: BigInt,
    norm_omega: BigInt,
    isqrt: BigInt,
    class_bound: u64,
    class_group: OnceBox<Result<ClassGroup>>,
    unit: OnceBox<Result<QElement>>,
}

impl fmt::Debug for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadField").field("disc", &self.disc).finish_non_exhaustive()
    }
}

impl QuadField {
    pub fn new(d: impl Into<BigInt>) -> Result<Self> {
        let d: BigInt = d.into();
        if !is_fundamental(&d)? {
            return Err(Error::NotFundamental(d));
        }
        let norm_omega = (&d * &d - &d) / 4;
        let isqrt = d.abs().sqrt();
        Ok(QuadField {
            disc: d,
            norm_omega,
            isqrt,
            class_bound: DEFAULT_CLASS_BOUND,
            class_group: OnceBox::new(),
            unit: OnceBox::new(),
        })
    }

    /// Largest `|d|` for which class groups are computed.
    pub fn with_class_bound(mut self, bound: u64) -> Self {
        self.class_bound = bound;
        self.class_group = OnceBox::new();
        self
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_real(&self) -> bool {
        self.disc.is_positive()
    }

    pub fn is_imaginary(&self) -> bool {
        self.disc.is_negative()
    }

    /// `N(ω) = (d² - d)/4`.
    pub fn norm_omega(&self) -> &BigInt {
        &self.norm_omega
    }

    /// `floor(√|d|)`.
    pub fn isqrt(&self) -> &BigInt {
        &self.isqrt
    }

    pub fn class_bound(&self) -> u64 {
        self.class_bound
    }

    pub fn omega(&self) -> QElement {
        QElement::integral(0, 1)
    }

    /// The element `(x + y √d) / m`.
    pub fn element(&self, x: impl Into<BigInt>, y: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<QElement> {
        let (x, y) = (x.into(), y.into());
        let a = &x - &y * &self.disc;
        QElement::new(a, y * 2, m.into())
    }

    /// `(x, y, m)` with `e = (x + y √d)/m`, `m > 0`, `gcd(x, y, m) = 1`.
    pub fn sqrt_form(&self, e: &QElement) -> (BigInt, BigInt, BigInt) {
        let (a, b, den) = e.parts();
        let x: BigInt = a * 2 + b * &self.disc;
        let y = b.clone();
        let m = den * 2;
        let g = x.gcd(&y).gcd(&m);
        (x / &g, y / &g, m / &g)
    }

    pub fn format(&self, e: &QElement) -> String {
        let (x, y, m) = self.sqrt_form(e);
        element::format_sqrt_form(&x, &y, &m, &self.disc)
    }

    pub fn mul(&self, x: &QElement, y: &QElement) -> QElement {
        let (a1, b1, d1) = x.parts();
        let (a2, b2, d2) = y.parts();
        let bb = b1 * b2;
        let a = a1 * a2 - &bb * &self.norm_omega;
        let b = a1 * b2 + a2 * b1 + &bb * &self.disc;
        QElement::new(a, b, d1 * d2).expect("nonzero denominator")
    }

    pub fn conj(&self, x: &QElement) -> QElement {
        let (a, b, den) = x.parts();
        QElement::new(a + b * &self.disc, -b, den.clone()).expect("nonzero denominator")
    }

    /// Numerator of the norm of `a + b ω`.
    fn integral_norm(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * a + a * b * &self.disc + b * b * &self.norm_omega
    }

    pub fn norm(&self, x: &QElement) -> BigRational {
        let (a, b, den) = x.parts();
        BigRational::new(self.integral_norm(a, b), den * den)
    }

    pub fn trace(&self, x: &QElement) -> BigRational {
        let (a, b, den) = x.parts();
        BigRational::new(a * 2 + b * &self.disc, den.clone())
    }

    pub fn inv(&self, x: &QElement) -> Result<QElement> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (a, b, den) = x.parts();
        let n = self.integral_norm(a, b);
        QElement::new((a + b * &self.disc) * den, -b * den, n)
    }

    pub fn div(&self, x: &QElement, y: &QElement) -> Result<QElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &QElement, k: i64) -> Result<QElement> {
        let mut base = if k < 0 { self.inv(x)? } else { x.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = QElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Roots of unity in the field.
    pub fn torsion_units(&self) -> Vec<QElement> {
        let one = QElement::one();
        let mut out = alloc::vec![one.clone(), one.neg()];
        let root = if self.disc == BigInt::from(-4) || self.disc == BigInt::from(-3) {
            Some(QElement::integral(2, 1))
        } else {
            None
        };
        if let Some(z) = root {
            let mut cur = z.clone();
            while !cur.is_one() {
                if !out.contains(&cur) {
                    out.push(cur.clone());
                }
                cur = self.mul(&cur, &z);
            }
        }
        out
    }

    pub fn is_unit(&self, x: &QElement) -> bool {
        x.is_integral() && self.norm(x).numer().abs().is_one()
    }

    pub fn class_group(&self) -> Result<&ClassGroup> {
        self.class_group.get_or_init(|| Box::new(ClassGroup::compute(self))).as_ref().map_err(Clone::clone)
    }

    pub fn class_number(&self) -> Result<BigInt> {
        Ok(self.class_group()?.group().cardinality().expect("class groups are finite"))
    }
}

/// `d ≡ 1 (4)` squarefree, or `d = 4m` with `m ≡ 2, 3 (4)` squarefree; `d ≠ 0, 1`.
pub fn is_fundamental(d: &BigInt) -> Result<bool> {
    if d.is_zero() || d.is_one() || (d.is_positive() && is_square(d)) {
        return Ok(false);
    }
    let r = d.mod_floor(&BigInt::from(4));
    if r.is_one() {
        return is_squarefree(d);
    }
    if r.is_zero() {
        let m: BigInt = d / 4;
        let mr = m.mod_floor(&BigInt::from(4));
        if mr == BigInt::from(2) || mr == BigInt::from(3) {
            return is_squarefree(&m);
        }
    }
    Ok(false)
}
