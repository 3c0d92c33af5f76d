//! Reduction of primitive ideals `[a, (B + √d)/2]` with multiplier tracking.
//!
//! One step replaces `I = [a, β]`, `β = (B + √d)/2`, by `(β̄/a) I = [|c|, -β̄]`
//! where `c = N(β)/a`. The multiplier `μ` always satisfies `current = μ · start`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{QElement, QIdeal, QuadField};
use crate::error::{Error, Result};

/// A primitive ideal in `(a, B)` coordinates, `B ≡ d (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Form {
    pub a: BigInt,
    pub bb: BigInt,
}

/// Counts reduction steps against an optional ceiling.
pub(crate) struct StepBudget {
    limit: Option<u64>,
    used: u64,
}

impl StepBudget {
    pub fn new(limit: Option<u64>) -> Self {
        StepBudget { limit, used: 0 }
    }

    #[cfg(test)]
    pub fn unlimited() -> Self {
        Self::new(None)
    }

    fn spend(&mut self) -> Result<()> {
        self.used += 1;
        match self.limit {
            Some(l) if self.used > l => Err(Error::SearchBound(l)),
            _ => Ok(()),
        }
    }
}

impl QuadField {
    pub(crate) fn form_of(&self, i: &QIdeal) -> Form {
        Form { a: i.a().clone(), bb: i.b() * 2 + self.disc() }
    }

    pub(crate) fn ideal_of_form(&self, f: &Form) -> QIdeal {
        let b = (&f.bb - self.disc()) / 2;
        self.ideal(f.a.clone(), b, num_rational::BigRational::one()).expect("forms are ideals")
    }

    fn form_c(&self, f: &Form) -> BigInt {
        (&f.bb * &f.bb - self.disc()) / (&f.a * 4)
    }

    /// `B` moved into `(-a, a]`, or into `(s - 2a, s]` for small `a` in real fields.
    fn normalize(&self, f: Form) -> Form {
        let two_a = &f.a * 2;
        let lo = if self.is_real() && &f.a * &f.a < *self.disc() { self.isqrt() - &two_a + 1 } else { -&f.a + 1 };
        let shifted: BigInt = &f.bb - &lo;
        let bb = shifted.mod_floor(&two_a) + &lo;
        Form { a: f.a, bb }
    }

    /// One reduction step and its multiplier `β̄/a`.
    fn rho(&self, f: &Form) -> (Form, QElement) {
        let c = self.form_c(f).abs();
        let step = QElement::new((&f.bb + self.disc()) / 2, -BigInt::one(), f.a.clone()).expect("a > 0");
        (self.normalize(Form { a: c, bb: -&f.bb }), step)
    }

    pub(crate) fn is_reduced(&self, f: &Form) -> bool {
        if self.is_real() {
            let s = self.isqrt();
            f.bb.is_positive() && &f.bb <= s && &f.a * 2 <= &f.bb + s && &f.bb + &f.a * 2 > *s
        } else {
            let c = self.form_c(f);
            let bound_ok = -&f.a < f.bb && f.bb <= f.a && f.a <= c;
            bound_ok && !((f.a == c || f.bb == f.a) && f.bb.is_negative())
        }
    }

    /// Reduced form equivalent to the primitive part of `i`, with `reduced = μ · prim(i)`.
    pub(crate) fn reduce_tracked(&self, i: &QIdeal, budget: &mut StepBudget) -> Result<(Form, QElement)> {
        let mut f = self.normalize(self.form_of(i));
        let mut mu = QElement::one();
        while !self.is_reduced(&f) {
            budget.spend()?;
            let (next, step) = self.rho(&f);
            mu = self.mul(&mu, &step);
            f = next;
        }
        Ok((f, mu))
    }

    pub(crate) fn reduce_form(&self, i: &QIdeal) -> Form {
        let mut f = self.normalize(self.form_of(i));
        while !self.is_reduced(&f) {
            f = self.rho(&f).0;
        }
        f
    }

    /// Next reduced form in the cycle of a reduced real form.
    pub(crate) fn cycle_step(&self, f: &Form) -> (Form, QElement) {
        self.rho(f)
    }

    /// Canonical key of the class of `i`: the reduced form itself for
    /// imaginary fields, the least form of the reduction cycle for real ones.
    pub(crate) fn class_key(&self, i: &QIdeal) -> Form {
        let start = self.reduce_form(i);
        if self.is_imaginary() {
            return start;
        }
        let mut best = start.clone();
        let mut cur = self.cycle_step(&start).0;
        while cur != start {
            if cur < best {
                best = cur.clone();
            }
            cur = self.cycle_step(&cur).0;
        }
        best
    }

    /// Some `α` with `α Õ = i`, or `None` when `i` is not principal.
    pub fn is_principal(&self, i: &QIdeal) -> Result<Option<QElement>> {
        self.is_principal_bounded(i, None)
    }

    /// As [`QuadField::is_principal`], failing with `SearchBound` after `limit`
    /// reduction steps.
    pub fn is_principal_bounded(&self, i: &QIdeal, limit: Option<u64>) -> Result<Option<QElement>> {
        let mut budget = StepBudget::new(limit);
        let (start, mut mu) = self.reduce_tracked(i, &mut budget)?;
        let mut cur = start.clone();
        loop {
            if cur.a.is_one() {
                break;
            }
            if self.is_imaginary() {
                return Ok(None);
            }
            budget.spend()?;
            let (next, step) = self.cycle_step(&cur);
            mu = self.mul(&mu, &step);
            cur = next;
            if cur == start {
                return Ok(None);
            }
        }
        // reduced = Õ = μ · prim(i), and i = content · prim(i)
        let content = i.content();
        let c = QElement::rational(content.numer().clone(), content.denom().clone())?;
        let alpha = self.normalize_generator(&self.div(&c, &mu)?);
        if self.principal_ideal(&alpha)? != *i {
            return Err(Error::Internal("generator check failed".into()));
        }
        Ok(Some(alpha))
    }

    /// Among `u α` for roots of unity `u`, the one with the largest `(x, y)` in `(x + y√d)/m`.
    pub(crate) fn normalize_generator(&self, alpha: &QElement) -> QElement {
        self.torsion_units()
            .iter()
            .map(|u| self.mul(u, alpha))
            .max_by(|p, q| {
                let (px, py, _) = self.sqrt_form(p);
                let (qx, qy, _) = self.sqrt_form(q);
                (px, py).cmp(&(qx, qy))
            })
            .expect("at least one unit")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_forms_are_fixed() {
        let f = QuadField::new(-23).unwrap();
        for (a, bb) in [(1, 1), (2, 1), (2, -1)] {
            let form = Form { a: a.into(), bb: bb.into() };
            assert!(f.is_reduced(&form));
            assert_eq!(f.reduce_form(&f.ideal_of_form(&form)), form);
        }
    }

    #[test]
    fn tracked_reduction_is_consistent() {
        for d in [-23i64, -84, -7, 40, 229, 12] {
            let f = QuadField::new(d).unwrap();
            for a in 1i64..15 {
                for b in 0..a {
                    let Ok(i) = f.ideal(a.into(), b.into(), num_rational::BigRational::one()) else {
                        continue;
                    };
                    let (red, mu) = f.reduce_tracked(&i, &mut StepBudget::unlimited()).unwrap();
                    let lhs = f.ideal_of_form(&red);
                    let rhs = f.ideal_mul(&f.principal_ideal(&mu).unwrap(), &i);
                    assert_eq!(lhs, rhs, "d={d} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn principal_generators() {
        let f = QuadField::new(-7).unwrap();
        let p = f.ideal(2.into(), 0.into(), num_rational::BigRational::one()).unwrap();
        let alpha = f.is_principal(&p).unwrap().unwrap();
        assert_eq!(f.format(&alpha), "(1+√-7)/2");
        assert!(f.is_principal(&f.unit_ideal()).unwrap().unwrap().is_one());
        let g = QuadField::new(-23).unwrap();
        let p2 = g.ideal(2.into(), 0.into(), num_rational::BigRational::one()).unwrap();
        assert_eq!(g.is_principal(&p2).unwrap(), None);
        assert!(g.is_principal(&g.ideal_pow(&p2, &3.into())).unwrap().is_some());
        assert_eq!(g.is_principal_bounded(&g.ideal_pow(&p2, &30.into()), Some(0)), Err(Error::SearchBound(0)));
    }
}
