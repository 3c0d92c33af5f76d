use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::snf::{smith_normal_form, solve_left};
use super::IntMatrix;
use crate::error::{Error, Result};

/// An element in invariant-factor coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        GroupElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Finitely generated abelian group `Z/d_1 x ... x Z/d_k` with `d_i | d_{i+1}`,
/// free factors (`d = 0`) last and no factor equal to 1.
///
/// The group remembers how it was presented: `basis_change` sends a vector in
/// the original generators to invariant coordinates, and `section` gives each
/// invariant generator back as a vector in the original generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    invariants: Vec<BigInt>,
    labels: Vec<String>,
    basis_change: IntMatrix,
    section: IntMatrix,
}

/// The cokernel of `relations` (one relation per row) on `n` free generators.
pub fn quotient(n: usize, relations: &IntMatrix) -> Result<AbelianGroup> {
    if relations.cols() != n {
        return Err(Error::LengthMismatch { expected: n, found: relations.cols() });
    }
    let snf = smith_normal_form(relations);
    let mut finite = Vec::new();
    let mut free = Vec::new();
    for i in 0..n {
        let d = if i < snf.rank { snf.diagonal[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            free.push(i);
        } else if !d.is_one() {
            finite.push((i, d));
        }
    }
    let mut keep: Vec<usize> = finite.iter().map(|(i, _)| *i).collect();
    keep.extend(free.iter().copied());
    let mut invariants: Vec<BigInt> = finite.into_iter().map(|(_, d)| d).collect();
    invariants.extend(free.iter().map(|_| BigInt::zero()));
    let labels = (0..invariants.len()).map(|i| format!("e{i}")).collect();
    Ok(AbelianGroup {
        invariants,
        labels,
        basis_change: snf.right.select_cols(&keep),
        section: snf.right_inverse.select_rows(&keep),
    })
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        quotient(0, &IntMatrix::zeros(0, 0)).expect("empty presentation")
    }

    /// Direct sum of cyclic groups of the given orders, in the given order.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut rel = IntMatrix::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            rel[(i, i)] = d.abs();
        }
        quotient(n, &rel).expect("square presentation")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.invariants.len() {
            return Err(Error::LengthMismatch { expected: self.invariants.len(), found: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_change(&self) -> &IntMatrix {
        &self.basis_change
    }

    /// Invariant generators written in the original generators (one per row).
    pub fn section(&self) -> &IntMatrix {
        &self.section
    }

    /// Number of generators of the presentation this group came from.
    pub fn presentation_rank(&self) -> usize {
        self.basis_change.rows()
    }

    pub fn ngens(&self) -> usize {
        self.invariants.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.invariants.iter().filter(|d| d.is_zero()).count()
    }

    /// `None` when the group is infinite.
    pub fn cardinality(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.invariants.iter().product())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(alloc::vec![BigInt::zero(); self.ngens()])
    }

    /// The i-th invariant generator.
    pub fn generator(&self, i: usize) -> Result<GroupElement> {
        if i >= self.ngens() {
            return Err(Error::BadIndex(i));
        }
        let mut c = alloc::vec![BigInt::zero(); self.ngens()];
        c[i] = BigInt::one();
        Ok(GroupElement::new(c))
    }

    /// Reduces a vector already in invariant coordinates.
    pub fn reduce(&self, mut coords: Vec<BigInt>) -> Result<GroupElement> {
        if coords.len() != self.ngens() {
            return Err(Error::LengthMismatch { expected: self.ngens(), found: coords.len() });
        }
        for (c, d) in coords.iter_mut().zip(&self.invariants) {
            if !d.is_zero() {
                *c = c.mod_floor(d);
            }
        }
        Ok(GroupElement::new(coords))
    }

    /// The element with coordinates `x` in the original generators.
    pub fn member(&self, x: &[BigInt]) -> Result<GroupElement> {
        let y = self.basis_change.left_apply(x)?;
        self.reduce(y)
    }

    pub fn member_i64(&self, x: &[i64]) -> Result<GroupElement> {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.member(&v)
    }

    /// Lifts an element back to original-generator coordinates.
    pub fn lift(&self, g: &GroupElement) -> Vec<BigInt> {
        self.section.left_apply(&g.coords).expect("element length")
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let c = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.reduce(c).expect("same group")
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.reduce(a.coords.iter().map(|x| -x).collect()).expect("same group")
    }

    pub fn scale(&self, a: &GroupElement, k: &BigInt) -> GroupElement {
        self.reduce(a.coords.iter().map(|x| x * k).collect()).expect("same group")
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = (&'a BigInt, &'a GroupElement)>) -> GroupElement {
        let mut acc = alloc::vec![BigInt::zero(); self.ngens()];
        for (k, g) in items {
            for (a, x) in acc.iter_mut().zip(&g.coords) {
                *a += k * x;
            }
        }
        self.reduce(acc).expect("same group")
    }

    /// Least `n >= 1` with `n g = 0`, or `None` for infinite order.
    pub fn element_order(&self, g: &GroupElement) -> Option<BigInt> {
        let mut n = BigInt::one();
        for (c, d) in g.coords.iter().zip(&self.invariants) {
            if c.is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            n = n.lcm(&(d / c.gcd(d)));
        }
        Some(n)
    }

    /// `G / <subgen>`. The result's original generators are the invariant
    /// generators of `self`, so `member(&g.coords)` is the projection.
    pub fn subgroup_quotient(&self, subgen: &[GroupElement]) -> Result<AbelianGroup> {
        let k = self.ngens();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (i, d) in self.invariants.iter().enumerate() {
            if !d.is_zero() {
                let mut r = alloc::vec![BigInt::zero(); k];
                r[i] = d.clone();
                rows.push(r);
            }
        }
        for g in subgen {
            if g.coords.len() != k {
                return Err(Error::LengthMismatch { expected: k, found: g.coords.len() });
            }
            rows.push(g.coords.clone());
        }
        quotient(k, &IntMatrix::from_rows(k, &rows)?)
    }

    /// Integers `n` with `sum n_j gens_j = target`, if `target` lies in the span.
    pub fn solve_in_span(&self, gens: &[GroupElement], target: &GroupElement) -> Option<Vec<BigInt>> {
        let k = self.ngens();
        let mut rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
        for (i, d) in self.invariants.iter().enumerate() {
            if !d.is_zero() {
                let mut r = alloc::vec![BigInt::zero(); k];
                r[i] = d.clone();
                rows.push(r);
            }
        }
        let m = IntMatrix::from_rows(k, &rows).ok()?;
        let x = solve_left(&m, &target.coords)?;
        Some(x[..gens.len()].to_vec())
    }

    /// All elements of a finite group; intended for small groups in tests.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.cardinality()?;
        let mut out = alloc::vec![self.identity()];
        for (i, d) in self.invariants.iter().enumerate() {
            let mut next = Vec::new();
            for e in &out {
                let mut x = BigInt::zero();
                while &x < d {
                    let mut c = e.clone();
                    c.coords[i] = x.clone();
                    next.push(c);
                    x += 1;
                }
            }
            out = next;
        }
        Some(out)
    }

    /// Same invariant factors.
    pub fn is_isomorphic(&self, other: &AbelianGroup) -> bool {
        self.invariants == other.invariants
    }
}

/// Formats factor lists as `trivial`, `Z/4`, `Z/2 x Z/6`, `Z x Z`.
pub fn format_invariants(invariants: &[BigInt]) -> String {
    if invariants.is_empty() {
        return "trivial".into();
    }
    let parts: Vec<String> =
        invariants.iter().map(|d| if d.is_zero() { "Z".into() } else { format!("Z/{d}") }).collect();
    parts.join(" x ")
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_invariants(&self.invariants))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn quotient_examples() {
        let rel = IntMatrix::from_i64(2, 2, &[2, 1, 0, 2]).unwrap();
        assert_eq!(quotient(2, &rel).unwrap().invariant_factors(), ints(&[4]));
        let free = quotient(1, &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(free.invariant_factors(), ints(&[0]));
        let crt = quotient(2, &IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]).unwrap()).unwrap();
        assert_eq!(crt.invariant_factors(), ints(&[6]));
        let g = crt.member_i64(&[1, 1]).unwrap();
        assert_eq!(crt.element_order(&g), Some(BigInt::from(6)));
    }

    #[test]
    fn member_and_orders() {
        let z4 = AbelianGroup::from_cyclic_orders(&ints(&[4]));
        assert_eq!(z4.member_i64(&[6]).unwrap().coords, ints(&[2]));
        assert_eq!(z4.element_order(&z4.generator(0).unwrap()), Some(BigInt::from(4)));
        assert_eq!(z4.element_order(&z4.identity()), Some(BigInt::one()));
        let z = AbelianGroup::from_cyclic_orders(&ints(&[0]));
        assert_eq!(z.member_i64(&[-3]).unwrap().coords, ints(&[-3]));
        let zz2 = AbelianGroup::from_cyclic_orders(&ints(&[0, 2]));
        assert_eq!(zz2.invariant_factors(), ints(&[2, 0]));
        assert_eq!(zz2.element_order(&zz2.member_i64(&[1, 0]).unwrap()), None);
        assert!(z4.member_i64(&[1, 2]).is_err());
    }

    #[test]
    fn subgroup_quotients() {
        let z2 = AbelianGroup::from_cyclic_orders(&ints(&[2]));
        assert!(z2.subgroup_quotient(&[z2.generator(0).unwrap()]).unwrap().is_trivial());
        assert_eq!(z2.subgroup_quotient(&[z2.identity()]).unwrap().invariant_factors(), ints(&[2]));
        let g = AbelianGroup::from_cyclic_orders(&ints(&[2, 4]));
        assert_eq!(g.invariant_factors(), ints(&[2, 4]));
        // (2,1) in Z/4 x Z/2 is (1,2) in invariant order [2,4]
        let h = g.member_i64(&[1, 2]).unwrap();
        assert_eq!(g.subgroup_quotient(&[h]).unwrap().invariant_factors(), ints(&[4]));
    }

    #[test]
    fn lift_inverts_member() {
        let rel = IntMatrix::from_i64(2, 3, &[2, 4, 0, 0, 6, 3]).unwrap();
        let g = quotient(3, &rel).unwrap();
        for i in 0..g.ngens() {
            let e = g.generator(i).unwrap();
            assert_eq!(g.member(&g.lift(&e)).unwrap(), e);
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(AbelianGroup::trivial().to_string(), "trivial");
        assert_eq!(AbelianGroup::from_cyclic_orders(&ints(&[2, 6])).to_string(), "Z/2 x Z/6");
        assert_eq!(AbelianGroup::from_cyclic_orders(&ints(&[0])).to_string(), "Z");
    }
}
