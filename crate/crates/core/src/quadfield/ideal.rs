use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{QElement, QuadField};
use crate::arith::egcd;
use crate::error::{Error, Result};

/// The fractional ideal `content · (a Z + (b + ω) Z)` with `a > 0`, `0 <= b < a`
/// and `a | N(b + ω)`. Every nonzero fractional ideal has exactly one such form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QIdeal {
    a: BigInt,
    b: BigInt,
    content: BigRational,
}

impl QIdeal {
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn content(&self) -> &BigRational {
        &self.content
    }

    pub fn is_primitive(&self) -> bool {
        self.content.is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.content.is_integer()
    }

    /// Same lattice with content 1.
    pub fn primitive_part(&self) -> QIdeal {
        QIdeal { a: self.a.clone(), b: self.b.clone(), content: BigRational::one() }
    }

    /// `c · self`.
    pub fn scaled(&self, c: &BigRational) -> QIdeal {
        QIdeal { a: self.a.clone(), b: self.b.clone(), content: &self.content * c.abs() }
    }
}

impl fmt::Display for QIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.content.is_one() {
            write!(f, "[{}, {}+ω]", self.a, self.b)
        } else {
            write!(f, "{}·[{}, {}+ω]", self.content, self.a, self.b)
        }
    }
}

impl QuadField {
    /// `content · (a Z + (b + ω) Z)`, validated and normalized.
    pub fn ideal(&self, a: BigInt, b: BigInt, content: BigRational) -> Result<QIdeal> {
        if !a.is_positive() || content.is_zero() {
            return Err(Error::ZeroElement);
        }
        let nb = &b * &b + &b * self.disc() + self.norm_omega();
        if !nb.is_multiple_of(&a) {
            return Err(Error::Internal("lattice is not an ideal".into()));
        }
        let b = b.mod_floor(&a);
        Ok(QIdeal { a, b, content: content.abs() })
    }

    pub fn unit_ideal(&self) -> QIdeal {
        QIdeal { a: BigInt::one(), b: BigInt::zero(), content: BigRational::one() }
    }

    /// The ideal of `Õ` generated as a Z-module by the integral vectors
    /// `(x, y) ↦ x + y ω`, scaled by `1/den`. The module must be an ideal.
    pub(crate) fn ideal_from_module(&self, gens: &[(BigInt, BigInt)], den: &BigInt) -> Result<QIdeal> {
        // Two-column Hermite reduction: pivot row (c, w) and the gcd of the
        // constants of rows with vanishing ω-part.
        let mut pivot = (BigInt::zero(), BigInt::zero());
        let mut flat = BigInt::zero();
        for (x, y) in gens {
            if y.is_zero() {
                flat = flat.gcd(x);
                continue;
            }
            if pivot.1.is_zero() {
                flat = flat.gcd(&pivot.0);
                pivot = (x.clone(), y.clone());
                continue;
            }
            let (g, s, t) = egcd(&pivot.1, y);
            let new_pivot = (&s * &pivot.0 + &t * x, g.clone());
            let u = &pivot.1 / &g;
            let v = y / &g;
            let other = &v * &pivot.0 - &u * x;
            flat = flat.gcd(&other);
            pivot = new_pivot;
        }
        let g = pivot.1.abs();
        if g.is_zero() || flat.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !flat.is_multiple_of(&g) || !pivot.0.is_multiple_of(&g) {
            return Err(Error::Internal("module is not an ideal".into()));
        }
        let c = if pivot.1.is_negative() { -&pivot.0 } else { pivot.0.clone() };
        let a = &flat / &g;
        let b = &c / &g;
        self.ideal(a, b, BigRational::new(g, den.clone()))
    }

    pub fn principal_ideal(&self, x: &QElement) -> Result<QIdeal> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (a, b, den) = x.parts();
        // x·1 and x·ω in the basis 1, ω
        let xw = (-(b * self.norm_omega()), a + b * self.disc());
        self.ideal_from_module(&[(a.clone(), b.clone()), xw], den)
    }

    /// Z-basis `content·a`, `content·(b + ω)` as field elements.
    pub fn ideal_basis(&self, i: &QIdeal) -> [QElement; 2] {
        let (n, d) = (i.content.numer().clone(), i.content.denom().clone());
        [
            QElement::new(&i.a * &n, BigInt::zero(), d.clone()).expect("positive content"),
            QElement::new(&i.b * &n, n, d).expect("positive content"),
        ]
    }

    pub fn ideal_norm(&self, i: &QIdeal) -> BigRational {
        &i.content * &i.content * BigRational::from_integer(i.a.clone())
    }

    pub fn ideal_contains(&self, i: &QIdeal, x: &QElement) -> bool {
        let scaled = x.scale(i.content.denom());
        let Ok(y) = scaled.div_int(i.content.numer()) else { return false };
        let (u, v, den) = y.parts();
        den.is_one() && (u - v * &i.b).is_multiple_of(&i.a)
    }

    pub fn ideal_conj(&self, i: &QIdeal) -> QIdeal {
        // conj(b + ω) = -(-(b + d) + ω)
        let b = -(&i.b + self.disc());
        self.ideal(i.a.clone(), b, i.content.clone()).expect("conjugate of an ideal")
    }

    pub fn ideal_inv(&self, i: &QIdeal) -> QIdeal {
        let c = self.ideal_conj(i);
        let scale = (&i.content * &i.content * BigRational::from_integer(i.a.clone())).recip();
        c.scaled(&scale)
    }

    /// Product by composition of the primitive parts.
    pub fn ideal_mul(&self, x: &QIdeal, y: &QIdeal) -> QIdeal {
        let d = self.disc();
        let (a1, a2) = (&x.a, &y.a);
        let bb1 = &x.b * 2 + d;
        let bb2 = &y.b * 2 + d;
        let s = (&bb1 + &bb2) / 2;
        let (g0, u, v) = egcd(a1, a2);
        let (d1, xx, z) = egcd(&g0, &s);
        let a3 = a1 * a2 / (&d1 * &d1);
        let num = &xx * &u * a1 * &bb2 + &xx * &v * a2 * &bb1 + &z * ((&bb1 * &bb2 + d) / 2);
        let bb3: BigInt = num / &d1;
        let bb3 = bb3.mod_floor(&(&a3 * 2));
        let b3 = (&bb3 - d) / 2;
        let content = &x.content * &y.content * BigRational::from_integer(d1);
        self.ideal(a3, b3, content).expect("composition yields an ideal")
    }

    pub fn ideal_pow(&self, i: &QIdeal, k: &BigInt) -> QIdeal {
        let mut base = if k.is_negative() { self.ideal_inv(i) } else { i.clone() };
        let mut e = k.abs();
        let mut acc = self.unit_ideal();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.ideal_mul(&acc, &base);
            }
            base = self.ideal_mul(&base, &base);
            e /= &two;
        }
        acc
    }

    pub fn ideal_product<'a>(&self, terms: impl IntoIterator<Item = (&'a QIdeal, &'a BigInt)>) -> QIdeal {
        let mut acc = self.unit_ideal();
        for (i, k) in terms {
            acc = self.ideal_mul(&acc, &self.ideal_pow(i, k));
        }
        acc
    }

    /// Product as the module spanned by the four pairwise products of bases.
    pub fn ideal_mul_by_module(&self, x: &QIdeal, y: &QIdeal) -> Result<QIdeal> {
        let bx = self.ideal_basis(&x.primitive_part());
        let by = self.ideal_basis(&y.primitive_part());
        let mut gens = Vec::new();
        for p in &bx {
            for q in &by {
                let e = self.mul(p, q);
                let (a, b, _) = e.parts();
                gens.push((a.clone(), b.clone()));
            }
        }
        let prim = self.ideal_from_module(&gens, &BigInt::one())?;
        Ok(prim.scaled(&(&x.content * &y.content)))
    }
}
