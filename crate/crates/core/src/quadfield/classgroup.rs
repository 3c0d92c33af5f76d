//! Class groups from reduced forms.
//!
//! The class number comes from counting reduced forms (imaginary) or cycles of
//! reduced ideals (real). The structure is built by adjoining classes of
//! prime ideals of small norm until the subgroup they span reaches the class
//! number; every class is then tabulated by its canonical reduced key.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::reduce::Form;
use super::{PrimePlace, QIdeal, QuadField, SplitKind};
use crate::abgroup::{quotient, AbelianGroup, GroupElement, IntMatrix};
use crate::arith::is_prime_u64;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ClassGroup {
    group: AbelianGroup,
    generators: Vec<PrimePlace>,
    lookup: BTreeMap<Form, Vec<BigInt>>,
}

impl ClassGroup {
    pub(crate) fn compute(f: &QuadField) -> Result<Self> {
        let bound = BigInt::from(f.class_bound());
        if f.disc().abs() > bound {
            return Err(Error::ClassGroupBound { disc: f.disc().clone(), bound: f.class_bound() });
        }
        let h = f.count_classes();

        let unit_key = f.class_key(&f.unit_ideal());
        let mut elems: BTreeMap<Form, (Vec<BigInt>, Form)> = BTreeMap::new();
        elems.insert(unit_key.clone(), (Vec::new(), unit_key));
        let mut generators = Vec::new();
        let mut relations: Vec<Vec<BigInt>> = Vec::new();

        let limit = f.isqrt().to_u64().unwrap_or(u64::MAX).saturating_mul(4).saturating_add(100);
        let mut p = 1u64;
        while elems.len() < h {
            p += 1;
            if p > limit {
                return Err(Error::Internal("class group generators not found".into()));
            }
            if !is_prime_u64(p) || f.split_kind(p) == SplitKind::Inert {
                continue;
            }
            let place = f.splitting(p)?.swap_remove(0);
            let ideal = f.prime_to_ideal(&place);
            if elems.contains_key(&f.class_key(&ideal)) {
                continue;
            }
            // powers P^i, i < n, until P^n lands in the current subgroup
            let mut powers = alloc::vec![f.reduce_form(&f.unit_ideal())];
            let mut cur = ideal.clone();
            let landing = loop {
                let key = f.class_key(&cur);
                if let Some((coords, _)) = elems.get(&key) {
                    break coords.clone();
                }
                powers.push(f.reduce_form(&cur));
                cur = f.ideal_mul(&f.ideal_of_form(&f.reduce_form(&cur)), &ideal).primitive_part();
            };
            let n = powers.len();
            let k = generators.len();
            let mut rel: Vec<BigInt> = landing.iter().map(|c| -c).collect();
            rel.resize(k, BigInt::zero());
            rel.push(BigInt::from(n));
            relations.push(rel);

            let old: Vec<(Vec<BigInt>, Form)> = elems.values().cloned().collect();
            for (coords, rep) in old {
                let rep_ideal = f.ideal_of_form(&rep);
                for (i, pw) in powers.iter().enumerate().skip(1) {
                    let prod = f.ideal_mul(&rep_ideal, &f.ideal_of_form(pw)).primitive_part();
                    let key = f.class_key(&prod);
                    let mut c = coords.clone();
                    c.resize(k, BigInt::zero());
                    c.push(BigInt::from(i));
                    let rep = f.reduce_form(&prod);
                    if elems.insert(key, (c, rep)).is_some() {
                        return Err(Error::Internal("coset collision in class table".into()));
                    }
                }
            }
            generators.push(place);
        }

        let k = generators.len();
        let rows: Vec<Vec<BigInt>> = relations
            .into_iter()
            .map(|mut r| {
                r.resize(k, BigInt::zero());
                r
            })
            .collect();
        let group = quotient(k, &IntMatrix::from_rows(k, &rows)?)?;
        let lookup = elems
            .into_iter()
            .map(|(key, (mut c, _))| {
                c.resize(k, BigInt::zero());
                (key, c)
            })
            .collect();
        Ok(ClassGroup { group, generators, lookup })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Prime places whose classes are the presentation generators of `group`.
    pub fn generators(&self) -> &[PrimePlace] {
        &self.generators
    }

    pub fn class_number(&self) -> usize {
        self.lookup.len()
    }
}

impl QuadField {
    /// Reduced primitive forms `(a, B, c)` of discriminant `d` (imaginary case).
    pub fn reduced_forms(&self) -> Vec<(BigInt, BigInt, BigInt)> {
        let d = self.disc();
        let mut out = Vec::new();
        let mut a = BigInt::one();
        while &a * &a * 3 <= d.abs() {
            let mut bb = -&a + 1;
            while bb <= a {
                if BigInt::is_even(&(&bb - d)) {
                    let num: BigInt = &bb * &bb - d;
                    let four_a = &a * 4;
                    if num.is_multiple_of(&four_a) {
                        let c = num / four_a;
                        let g = a.gcd(&bb).gcd(&c);
                        let edge = (a == c || bb == a) && bb.is_negative();
                        if c >= a && !edge && g.is_one() {
                            out.push((a.clone(), bb.clone(), c));
                        }
                    }
                }
                bb += 1;
            }
            a += 1;
        }
        out
    }

    /// Reduced ideals `(a, B)` of a real field.
    pub(crate) fn reduced_ideals(&self) -> Vec<Form> {
        let d = self.disc();
        let s = self.isqrt();
        let mut out = Vec::new();
        let mut bb = BigInt::one();
        while &bb <= s {
            if BigInt::is_even(&(&bb - d)) {
                let n: BigInt = (d - &bb * &bb) / 4;
                let r = n.sqrt();
                let mut a = BigInt::one();
                while a <= r {
                    if n.is_multiple_of(&a) {
                        for cand in [a.clone(), &n / &a] {
                            let f = Form { a: cand, bb: bb.clone() };
                            if self.is_reduced(&f) {
                                out.push(f);
                            }
                        }
                    }
                    a += 1;
                }
            }
            bb += 1;
        }
        out.sort();
        out.dedup();
        out
    }

    /// The class number by counting reduced forms or reduction cycles.
    pub fn count_classes(&self) -> usize {
        if self.is_imaginary() {
            return self.reduced_forms().len();
        }
        let all = self.reduced_ideals();
        let mut seen: BTreeSet<Form> = BTreeSet::new();
        let mut cycles = 0;
        for f in &all {
            if seen.contains(f) {
                continue;
            }
            cycles += 1;
            let mut cur = f.clone();
            loop {
                seen.insert(cur.clone());
                cur = self.cycle_step(&cur).0;
                if &cur == f {
                    break;
                }
            }
        }
        cycles
    }

    /// The class of a nonzero fractional ideal.
    pub fn ideal_class(&self, i: &QIdeal) -> Result<GroupElement> {
        let cg = self.class_group()?;
        let key = self.class_key(&i.primitive_part());
        let coords =
            cg.lookup.get(&key).ok_or_else(|| Error::Internal("reduced ideal missing from class table".into()))?;
        cg.group.member(coords)
    }

    pub fn place_class(&self, place: &PrimePlace) -> Result<GroupElement> {
        self.ideal_class(&self.prime_to_ideal(place))
    }

    /// An ideal in the given class, built from the generator primes.
    pub fn class_representative(&self, g: &GroupElement) -> Result<QIdeal> {
        let cg = self.class_group()?;
        let exps = cg.group.lift(g);
        let mut acc = self.unit_ideal();
        for (place, k) in cg.generators.iter().zip(&exps) {
            acc = self.ideal_mul(&acc, &self.ideal_pow(&self.prime_to_ideal(place), k));
        }
        Ok(acc)
    }
}
