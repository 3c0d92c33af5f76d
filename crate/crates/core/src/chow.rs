//! Chow groups from the `G/R` presentation, the principal divisor test,
//! Picard cardinalities and the search for trivial Chow groups.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abgroup::{quotient, AbelianGroup, GroupElement, Hom, IntMatrix};
use crate::arith::{factor_u64, is_prime_u64};
use crate::divisor::{Divisor, Level, PlaceLabel};
use crate::error::{Error, Result};
use crate::orders::{OrderData, OrderPlace};
use crate::quadfield::{QElement, QuadField, SplitKind};

/// `G = ⊕ Z p_i ⊕ Cl/N` modulo `R`.
///
/// The presentation generators are the primes `p_1..p_r` followed by the
/// invariant generators of `Cl(Õ)`; `N` and the relations of `Cl` enter as
/// extra rows of the relation matrix.
#[derive(Clone, Debug)]
pub struct ChowPresentation {
    order: OrderData,
    cl: AbelianGroup,
    place_classes: Vec<Vec<GroupElement>>,
    q_classes: Vec<GroupElement>,
    n_generators: Vec<GroupElement>,
    relations: IntMatrix,
    result: AbelianGroup,
}

impl ChowPresentation {
    pub fn group(&self) -> &AbelianGroup {
        &self.result
    }

    pub fn order(&self) -> &OrderData {
        &self.order
    }

    pub fn class_group(&self) -> &AbelianGroup {
        &self.cl
    }

    pub fn prime_labels(&self) -> Vec<PlaceLabel> {
        self.order.noninvertible_primes().iter().map(|q| q.label.clone()).collect()
    }

    /// `[𝔔_i]` for each non-invertible prime.
    pub fn q_classes(&self) -> &[GroupElement] {
        &self.q_classes
    }

    /// Classes of the kernel generators of `f_*`.
    pub fn n_generators(&self) -> &[GroupElement] {
        &self.n_generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// The class of `Σ a_i p_i + f_*(𝔄)` with `[𝔄] = cl`.
    pub fn project_parts(&self, prime_coeffs: &[BigInt], cl: &GroupElement) -> Result<GroupElement> {
        let r = self.order.noninvertible_primes().len();
        if prime_coeffs.len() != r {
            return Err(Error::LengthMismatch { expected: r, found: prime_coeffs.len() });
        }
        let mut v = prime_coeffs.to_vec();
        v.extend(cl.coords.iter().cloned());
        self.result.member(&v)
    }

    /// The class in `Chow(O)` of an order-level divisor.
    pub fn project(&self, d: &Divisor) -> Result<GroupElement> {
        if d.level() != Level::Order {
            return Err(Error::LevelMismatch);
        }
        let r = self.order.noninvertible_primes().len();
        let mut a = alloc::vec![BigInt::zero(); r];
        let mut cl = self.cl.identity();
        for (label, c) in d.iter() {
            match self.order.resolve(label)? {
                OrderPlace::NonInvertible(i) => a[i] += c,
                OrderPlace::Invertible(place) => {
                    let field = self.order.field().ok_or(Error::DeclaredBackend)?;
                    cl = self.cl.add(&cl, &self.cl.scale(&field.place_class(&place)?, c));
                }
            }
        }
        self.project_parts(&a, &cl)
    }
}

/// `Chow(O)` by the `G/R` presentation.
pub fn chow_group(order: &OrderData) -> Result<ChowPresentation> {
    let cl = order.class_group()?.clone();
    let primes = order.noninvertible_primes();
    let (r, k) = (primes.len(), cl.ngens());
    let mut place_classes = Vec::with_capacity(r);
    let mut q_classes = Vec::with_capacity(r);
    let mut n_generators = Vec::new();
    for q in primes {
        let classes = q.places.iter().map(|pl| order.place_class(pl)).collect::<Result<Vec<_>>>()?;
        let qc = cl.sum(q.lambdas.iter().zip(&classes));
        for (pl, c) in q.places.iter().zip(&classes) {
            let m = BigInt::from(pl.degree) / &q.g;
            n_generators.push(cl.add(&cl.scale(&qc, &m), &cl.neg(c)));
        }
        place_classes.push(classes);
        q_classes.push(qc);
    }
    let width = r + k;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (t, d) in cl.invariant_factors().iter().enumerate() {
        let mut row = alloc::vec![BigInt::zero(); width];
        row[r + t] = d.clone();
        rows.push(row);
    }
    for n in &n_generators {
        let mut row = alloc::vec![BigInt::zero(); r];
        row.extend(n.coords.iter().cloned());
        rows.push(row);
    }
    for (i, (q, qc)) in primes.iter().zip(&q_classes).enumerate() {
        let mut row = alloc::vec![BigInt::zero(); r];
        row[i] = q.g.clone();
        row.extend(qc.coords.iter().map(|x| -x));
        rows.push(row);
    }
    let relations = IntMatrix::from_rows(width, &rows)?;
    let result = quotient(width, &relations)?;
    Ok(ChowPresentation { order: order.clone(), cl, place_classes, q_classes, n_generators, relations, result })
}

/// `Chow(O)` as an extension of `im(f̄_*)` by the local Chow groups.
#[derive(Clone, Debug)]
pub struct ExactSequence {
    pub image: AbelianGroup,
    pub local_orders: Vec<BigInt>,
    pub chow: AbelianGroup,
    /// The direct sum `image ⊕ ⊕ Z/g_i`.
    pub direct_sum: AbelianGroup,
    pub non_split: bool,
}

impl ExactSequence {
    pub fn local_parts(&self) -> Vec<AbelianGroup> {
        self.local_orders.iter().map(|g| AbelianGroup::from_cyclic_orders(core::slice::from_ref(g))).collect()
    }
}

pub fn exact_sequence_data(order: &OrderData) -> Result<ExactSequence> {
    exact_sequence_of(&chow_group(order)?)
}

pub fn exact_sequence_of(pres: &ChowPresentation) -> Result<ExactSequence> {
    let image = pres.cl.subgroup_quotient(&pres.n_generators)?;
    let local_orders: Vec<BigInt> = pres.order.noninvertible_primes().iter().map(|q| q.g.clone()).collect();
    let mut orders: Vec<BigInt> = image.invariant_factors().to_vec();
    orders.extend(local_orders.iter().cloned());
    let direct_sum = AbelianGroup::from_cyclic_orders(&orders);
    let chow = pres.result.clone();
    if chow.cardinality() != direct_sum.cardinality() {
        return Err(Error::Internal("exact sequence cardinalities disagree".into()));
    }
    let non_split = !chow.is_isomorphic(&direct_sum);
    Ok(ExactSequence { image, local_orders, chow, direct_sum, non_split })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrincipalVerdict {
    Generator(QElement),
    /// Principal, but the declared backend has no elements to exhibit.
    PrincipalNoGenerator,
    /// Not principal, detected at the given step of the test.
    NotPrincipal {
        step: u8,
    },
}

/// Decides whether `d` is principal and finds `α` with `div_O(α) = d`.
///
/// `bound` caps the reduction steps spent in the principal ideal test.
pub fn principal_divisor_test(order: &OrderData, d: &Divisor, bound: Option<u64>) -> Result<PrincipalVerdict> {
    let d = order.normalize_divisor(d)?;
    let primes = order.noninvertible_primes();
    // (1) coefficients at p_i divisible by g_i
    let mut a = Divisor::zero(Level::Maximal);
    for (label, c) in d.iter() {
        match order.resolve(label)? {
            OrderPlace::NonInvertible(i) => {
                let (quo, rem) = c.div_rem(&primes[i].g);
                if !rem.is_zero() {
                    return Ok(PrincipalVerdict::NotPrincipal { step: 1 });
                }
                // (2) lift through 𝔔_i
                a = a.add(&order.q_divisor(i)?.scale(&quo));
            }
            OrderPlace::Invertible(place) => a.add_term(place.label(), c),
        }
    }
    // (3), (4)
    let pres = chow_group(order)?;
    let cl = &pres.cl;
    let kernel = order.kernel_generators();
    let class_a = maximal_divisor_class(&pres, &a)?;
    // (5)
    let Some(coeffs) = cl.solve_in_span(&pres.n_generators, &cl.neg(&class_a)) else {
        return Ok(PrincipalVerdict::NotPrincipal { step: 5 });
    };
    let Some(field) = order.field() else {
        return Ok(PrincipalVerdict::PrincipalNoGenerator);
    };
    // (6) 𝔅 from the kernel generators, then 𝔄𝔅 = αÕ
    let mut b = Divisor::zero(Level::Maximal);
    for ((gen, n), x) in kernel.iter().zip(&pres.n_generators).zip(&coeffs) {
        let ord = cl.element_order(n).unwrap_or_else(BigInt::one);
        b = b.add(&gen.scale(&x.mod_floor(&ord)));
    }
    let ideal = field.divisor_to_ideal(&a.add(&b))?;
    let alpha = field
        .is_principal_bounded(&ideal, bound)?
        .ok_or_else(|| Error::Internal("class test and principal test disagree".into()))?;
    // (7)
    if order.div_over_order(&alpha)? != d {
        return Err(Error::Internal("generator has the wrong divisor".into()));
    }
    Ok(PrincipalVerdict::Generator(alpha))
}

fn maximal_divisor_class(pres: &ChowPresentation, d: &Divisor) -> Result<GroupElement> {
    let order = &pres.order;
    let cl = &pres.cl;
    let mut acc = cl.identity();
    'terms: for (label, c) in d.iter() {
        for (q, classes) in order.noninvertible_primes().iter().zip(&pres.place_classes) {
            if let Some(j) = q.places.iter().position(|pl| &pl.label == label) {
                acc = cl.add(&acc, &cl.scale(&classes[j], c));
                continue 'terms;
            }
        }
        let field = order.field().ok_or_else(|| Error::UnknownPlace(format!("{label}")))?;
        acc = cl.add(&acc, &cl.scale(&field.place_class(&field.place(label)?)?, c));
    }
    Ok(acc)
}

/// The terms of the sequence `1 → Õ*/O* → (Õ/ℱ)*/(O/ℱ)* → Pic(O) → Cl(Õ) → 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicReport {
    pub cl_cardinality: BigInt,
    pub unit_index: BigInt,
    pub residue_units: BigInt,
    pub order_residue_units: BigInt,
    pub relative_unit_quotient: BigInt,
    pub pic_cardinality: BigInt,
}

pub fn pic_cardinality(order: &OrderData) -> Result<PicReport> {
    let field = order.field().ok_or(Error::DeclaredBackend)?;
    let cl_cardinality = field.class_number()?;
    let unit_index = order.unit_index()?;
    let residue_units = order.residue_unit_count()?;
    let order_residue_units = order.order_residue_unit_count()?;
    let (relative_unit_quotient, r) = residue_units.div_rem(&order_residue_units);
    if !r.is_zero() {
        return Err(Error::Internal("(O/F)* is not a subgroup of (Õ/F)*".into()));
    }
    let (pic, r) = (&cl_cardinality * &relative_unit_quotient).div_rem(&unit_index);
    if !r.is_zero() {
        return Err(Error::Internal("Picard cardinality is not an integer".into()));
    }
    Ok(PicReport {
        cl_cardinality,
        unit_index,
        residue_units,
        order_residue_units,
        relative_unit_quotient,
        pic_cardinality: pic,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicChowReport {
    pub surjective: bool,
    /// `None` when the Picard group is out of reach (declared data).
    pub injective: Option<bool>,
    pub reasons: Vec<String>,
}

/// Injectivity and surjectivity of `Pic(O) → Chow(O)`.
pub fn pic_chow_report(order: &OrderData) -> Result<PicChowReport> {
    let mut reasons = Vec::new();
    let nontrivial: Vec<String> = order
        .noninvertible_primes()
        .iter()
        .filter(|q| !q.g.is_one())
        .map(|q| format!("local Chow group at {} is Z/{}", q.label, q.g))
        .collect();
    let surjective = nontrivial.is_empty();
    reasons.extend(nontrivial);
    let pres = chow_group(order)?;
    let kernel_trivial = pres.n_generators.iter().all(GroupElement::is_zero);
    if !kernel_trivial {
        reasons.push("kernel of Cl -> Chow is nontrivial".into());
    }
    let injective = if order.is_declared() {
        if kernel_trivial {
            reasons.push("Pic(O) unknown for declared data".into());
            None
        } else {
            Some(false)
        }
    } else {
        let pic = pic_cardinality(order)?;
        let iso = pic.pic_cardinality == pic.cl_cardinality;
        if !iso {
            reasons.push(format!("|Pic(O)| = {} differs from |Cl| = {}", pic.pic_cardinality, pic.cl_cardinality));
        }
        Some(iso && kernel_trivial)
    };
    Ok(PicChowReport { surjective, injective, reasons })
}

/// A conductor with trivial Chow group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialChowConductor {
    pub conductor: u64,
    /// Primes whose degree-one places were accumulated to span `Cl`.
    pub generator_primes: Vec<u64>,
}

/// Largest greedy conductor below which smaller candidates are enumerated.
const ENUMERATION_LIMIT: u64 = 1 << 16;

/// Searches `Z + fÕ` with trivial Chow group.
///
/// Primes `p ≤ prime_budget` that are not inert are added while the classes
/// of their degree-one places enlarge the span in `Cl`. The smallest
/// squarefree `f` built from such primes, up to the greedy product, whose
/// order has trivial Chow group is returned.
pub fn find_trivial_chow_conductor(field: &Arc<QuadField>, prime_budget: u64) -> Result<Option<TrivialChowConductor>> {
    let cl = field.class_group()?.group().clone();
    let trivial = |f: u64| -> Result<bool> {
        Ok(chow_group(&OrderData::from_conductor(field.clone(), f)?)?.group().is_trivial())
    };
    let mut span: Vec<GroupElement> = Vec::new();
    let mut generator_primes = Vec::new();
    let mut f_greedy = 1u64;
    let mut spanned = cl.is_trivial();
    for p in 2..=prime_budget {
        if spanned {
            break;
        }
        if !is_prime_u64(p) || field.split_kind(p) == SplitKind::Inert {
            continue;
        }
        let c = field.place_class(&field.splitting(p)?[0])?;
        if cl.solve_in_span(&span, &c).is_some() {
            continue;
        }
        span.push(c);
        generator_primes.push(p);
        let Some(next) = f_greedy.checked_mul(p) else { return Ok(None) };
        f_greedy = next;
        spanned = cl.subgroup_quotient(&span)?.is_trivial();
    }
    if !spanned {
        return Ok(None);
    }
    if f_greedy <= ENUMERATION_LIMIT {
        for f in 1..=f_greedy {
            let fs = factor_u64(f);
            let usable =
                fs.iter().all(|&(p, k)| k == 1 && p <= prime_budget && field.split_kind(p) != SplitKind::Inert);
            if usable && trivial(f)? {
                return Ok(Some(TrivialChowConductor { conductor: f, generator_primes }));
            }
        }
        return Ok(None);
    }
    Ok(trivial(f_greedy)?.then_some(TrivialChowConductor { conductor: f_greedy, generator_primes }))
}

/// The induced map `Chow(sup) → Chow(sub)` for orders `sub ⊆ sup` of one field.
#[derive(Clone, Debug)]
pub struct OrderComparison {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    pub kernel: AbelianGroup,
    pub cokernel: AbelianGroup,
    pub injective: bool,
    pub surjective: bool,
}

pub fn compare_orders(sup: &OrderData, sub: &OrderData) -> Result<OrderComparison> {
    let not_sub = |m: String| Error::NotSuborder(m);
    if sup.class_group()?.invariant_factors() != sub.class_group()?.invariant_factors() {
        return Err(not_sub("different class groups".into()));
    }
    if let (Some(f1), Some(f2)) = (sup.field(), sub.field()) {
        let (c1, c2) = (sup.conductor().unwrap_or(1), sub.conductor().unwrap_or(1));
        if f1.disc() != f2.disc() || c2 % c1 != 0 {
            return Err(not_sub(format!("conductor {c1} does not divide {c2}")));
        }
    } else if sup.is_declared() != sub.is_declared() {
        return Err(not_sub("mixed backends".into()));
    }
    let ps = chow_group(sup)?;
    let pb = chow_group(sub)?;
    let r_sub = sub.noninvertible_primes().len();
    let mut images = Vec::new();
    for q in sup.noninvertible_primes() {
        let (i, deg) = containing_prime(sub, q)?;
        let mut a = alloc::vec![BigInt::zero(); r_sub];
        a[i] = BigInt::from(deg);
        images.push(pb.project_parts(&a, &pb.cl.identity())?);
    }
    let zeros = alloc::vec![BigInt::zero(); r_sub];
    for t in 0..ps.cl.ngens() {
        images.push(pb.project_parts(&zeros, &ps.cl.generator(t)?)?);
    }
    let hom = Hom::from_generator_images(ps.group(), pb.group(), &images)?;
    let kernel = hom.kernel()?.group;
    let cokernel = hom.cokernel()?;
    Ok(OrderComparison {
        injective: kernel.is_trivial(),
        surjective: cokernel.is_trivial(),
        source: ps.result.clone(),
        target: pb.result.clone(),
        kernel,
        cokernel,
    })
}

/// The prime of `sub` below the non-invertible prime `q` of the larger order,
/// with the degree of `q` over it.
fn containing_prime(sub: &OrderData, q: &crate::orders::NonInvertiblePrime) -> Result<(usize, u32)> {
    for (i, p) in sub.noninvertible_primes().iter().enumerate() {
        if p.p != q.p || !q.places.iter().all(|pl| p.places.iter().any(|x| x.label == pl.label)) {
            continue;
        }
        let mut size = p.residue_size;
        let mut deg = 1u32;
        while size < q.residue_size {
            size = size.saturating_mul(p.residue_size);
            deg += 1;
        }
        if size == q.residue_size {
            return Ok((i, deg));
        }
    }
    Err(Error::NotSuborder(format!("no prime below {}", q.label)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(d: i64, f: u64) -> OrderData {
        OrderData::from_conductor(Arc::new(QuadField::new(d).unwrap()), f).unwrap()
    }

    fn inv(g: &AbelianGroup) -> Vec<i64> {
        use num_traits::ToPrimitive;
        g.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_chow_groups() {
        assert!(chow_group(&order(-7, 2)).unwrap().group().is_trivial());
        assert!(chow_group(&order(-7, 1)).unwrap().group().is_trivial());
        assert_eq!(inv(chow_group(&order(-23, 1)).unwrap().group()), [3]);
        assert_eq!(inv(chow_group(&order(-4, 3)).unwrap().group()), [2]);
        assert!(chow_group(&order(-23, 2)).unwrap().group().is_trivial());
    }

    #[test]
    fn principal_test_examples() {
        let o = order(-7, 2);
        let d = Divisor::parse(Level::Order, "2.0:1").unwrap();
        let PrincipalVerdict::Generator(a) = principal_divisor_test(&o, &d, None).unwrap() else { panic!() };
        assert_eq!(o.field().unwrap().format(&a), "(1+√-7)/2");
        assert_eq!(
            principal_divisor_test(&o, &Divisor::zero(Level::Order), None).unwrap(),
            PrincipalVerdict::Generator(QElement::one())
        );
        let o = order(-4, 3);
        let d = Divisor::parse(Level::Order, "3:1").unwrap();
        assert_eq!(principal_divisor_test(&o, &d, None).unwrap(), PrincipalVerdict::NotPrincipal { step: 1 });
        let o = order(-23, 1);
        let d = Divisor::parse(Level::Order, "2.0:1").unwrap();
        assert_eq!(principal_divisor_test(&o, &d, None).unwrap(), PrincipalVerdict::NotPrincipal { step: 5 });
    }

    #[test]
    fn pic_examples() {
        assert_eq!(pic_cardinality(&order(-7, 2)).unwrap().pic_cardinality, BigInt::one());
        assert_eq!(pic_cardinality(&order(-4, 3)).unwrap().pic_cardinality, BigInt::from(2));
        assert_eq!(pic_cardinality(&order(-23, 1)).unwrap().pic_cardinality, BigInt::from(3));
        let r = pic_chow_report(&order(-7, 2)).unwrap();
        assert!(r.surjective && r.injective == Some(true));
        assert!(!pic_chow_report(&order(-4, 3)).unwrap().surjective);
        let r = pic_chow_report(&order(-23, 1)).unwrap();
        assert!(r.surjective && r.injective == Some(true));
    }

    #[test]
    fn trivial_chow_search() {
        let f = Arc::new(QuadField::new(-23).unwrap());
        let found = find_trivial_chow_conductor(&f, 100).unwrap().unwrap();
        assert_eq!(found.conductor, 2);
        let f = Arc::new(QuadField::new(-7).unwrap());
        assert_eq!(find_trivial_chow_conductor(&f, 100).unwrap().unwrap().conductor, 1);
        let f = Arc::new(QuadField::new(-20).unwrap());
        assert_eq!(find_trivial_chow_conductor(&f, 50).unwrap(), None);
    }

    #[test]
    fn comparison_of_nested_orders() {
        let c = compare_orders(&order(-4, 1), &order(-4, 3)).unwrap();
        assert!(c.injective && !c.surjective);
        assert_eq!(inv(&c.cokernel), [2]);
        assert!(compare_orders(&order(-4, 3), &order(-4, 2)).is_err());
    }
}
