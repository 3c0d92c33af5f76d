//! Orders described by their non-invertible maximal ideals.
//!
//! A quadratic order is `Z + fÕ`; its non-invertible primes are the `p | f`
//! with residue field `F_p`. Declared orders take the same data from a file.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abgroup::{bezout_gcd, AbelianGroup, GroupElement};
use crate::arith::{factor_u64, totient};
use crate::divisor::{Divisor, Level, PlaceLabel};
use crate::error::{Error, Result};
use crate::quadfield::{PrimePlace, QElement, QuadField, SplitKind};

#[derive(Clone, Debug)]
pub enum Backend {
    Quadratic { field: Arc<QuadField>, conductor: u64 },
    Declared { class_group: AbelianGroup },
}

/// Where the class of a place above a non-invertible prime comes from.
#[derive(Clone, Debug)]
pub enum PlaceSource {
    Quadratic(PrimePlace),
    /// `None` when the file leaves the class image blank.
    Declared(Option<GroupElement>),
}

/// A maximal ideal `𝔓_{i,j}` of `Õ` over a non-invertible `p_i`.
#[derive(Clone, Debug)]
pub struct PlaceAbove {
    pub label: PlaceLabel,
    /// `d_{i,j}`, the degree of `Õ/𝔓_{i,j}` over `O/p_i`.
    pub degree: u32,
    /// Exponent of `𝔓_{i,j}` in `pÕ`.
    pub ramification: u32,
    pub source: PlaceSource,
}

#[derive(Clone, Debug)]
pub struct NonInvertiblePrime {
    pub label: PlaceLabel,
    pub p: u64,
    /// `|O/p_i|`.
    pub residue_size: u64,
    pub places: Vec<PlaceAbove>,
    pub g: BigInt,
    pub lambdas: Vec<BigInt>,
}

impl NonInvertiblePrime {
    pub fn new(label: PlaceLabel, p: u64, residue_size: u64, places: Vec<PlaceAbove>) -> Result<Self> {
        let degrees: Vec<BigInt> = places.iter().map(|pl| BigInt::from(pl.degree)).collect();
        let (g, lambdas) = bezout_gcd(&degrees)?;
        Ok(NonInvertiblePrime { label, p, residue_size, places, g, lambdas })
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.places.iter().map(|pl| pl.degree).collect()
    }

    /// `Chow(O_{p_i}) ≅ Z/g_i`.
    pub fn local_chow(&self) -> AbelianGroup {
        AbelianGroup::from_cyclic_orders(core::slice::from_ref(&self.g))
    }

    fn place_index(&self, label: &PlaceLabel) -> Option<usize> {
        self.places.iter().position(|pl| &pl.label == label)
    }
}

/// A maximal ideal of the order, as named in an order-level divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderPlace {
    NonInvertible(usize),
    Invertible(PrimePlace),
}

#[derive(Clone, Debug)]
pub struct OrderData {
    backend: Backend,
    primes: Vec<NonInvertiblePrime>,
}

impl OrderData {
    /// `Z + fÕ`.
    pub fn from_conductor(field: Arc<QuadField>, f: u64) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidConductor);
        }
        let mut primes = Vec::new();
        for (p, _) in factor_u64(f) {
            let places = field
                .splitting(p)?
                .into_iter()
                .map(|pl| PlaceAbove {
                    label: pl.label(),
                    degree: pl.degree(),
                    ramification: pl.ramification(),
                    source: PlaceSource::Quadratic(pl),
                })
                .collect();
            primes.push(NonInvertiblePrime::new(PlaceLabel::Prime(p), p, p, places)?);
        }
        Ok(OrderData { backend: Backend::Quadratic { field, conductor: f }, primes })
    }

    pub fn maximal(field: Arc<QuadField>) -> Self {
        OrderData { backend: Backend::Quadratic { field, conductor: 1 }, primes: Vec::new() }
    }

    pub(crate) fn from_declared(class_group: AbelianGroup, primes: Vec<NonInvertiblePrime>) -> Self {
        OrderData { backend: Backend::Declared { class_group }, primes }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn field(&self) -> Option<&Arc<QuadField>> {
        match &self.backend {
            Backend::Quadratic { field, .. } => Some(field),
            Backend::Declared { .. } => None,
        }
    }

    pub fn conductor(&self) -> Option<u64> {
        match &self.backend {
            Backend::Quadratic { conductor, .. } => Some(*conductor),
            Backend::Declared { .. } => None,
        }
    }

    fn quadratic(&self) -> Result<(&QuadField, u64)> {
        match &self.backend {
            Backend::Quadratic { field, conductor } => Ok((field, *conductor)),
            Backend::Declared { .. } => Err(Error::DeclaredBackend),
        }
    }

    pub fn is_declared(&self) -> bool {
        matches!(self.backend, Backend::Declared { .. })
    }

    pub fn is_maximal(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn noninvertible_primes(&self) -> &[NonInvertiblePrime] {
        &self.primes
    }

    pub fn class_group(&self) -> Result<&AbelianGroup> {
        match &self.backend {
            Backend::Quadratic { field, .. } => Ok(field.class_group()?.group()),
            Backend::Declared { class_group } => Ok(class_group),
        }
    }

    pub fn place_class(&self, place: &PlaceAbove) -> Result<GroupElement> {
        match (&place.source, &self.backend) {
            (PlaceSource::Quadratic(pl), Backend::Quadratic { field, .. }) => field.place_class(pl),
            (PlaceSource::Declared(Some(g)), _) => Ok(g.clone()),
            (PlaceSource::Declared(None), _) => Err(Error::Incomplete(format!("class image of {}", place.label))),
            _ => Err(Error::Internal("place source does not match backend".into())),
        }
    }

    /// `Z/g_i` for the i-th non-invertible prime.
    pub fn local_chow(&self, i: usize) -> Result<AbelianGroup> {
        self.primes.get(i).map(NonInvertiblePrime::local_chow).ok_or(Error::BadIndex(i))
    }

    /// The local Chow group at any maximal ideal of the order.
    pub fn local_chow_at(&self, label: &PlaceLabel) -> Result<AbelianGroup> {
        match self.resolve(label)? {
            OrderPlace::NonInvertible(i) => self.local_chow(i),
            OrderPlace::Invertible(_) => Ok(AbelianGroup::trivial()),
        }
    }

    /// The same order with the places over `p_i` listed in the order `perm`,
    /// which changes the Bézout coefficients `λ_{i,j}`.
    pub fn reorder_places(&self, i: usize, perm: &[usize]) -> Result<OrderData> {
        let prime = self.primes.get(i).ok_or(Error::BadIndex(i))?;
        let mut seen = alloc::vec![false; prime.places.len()];
        if perm.len() != seen.len() {
            return Err(Error::LengthMismatch { expected: seen.len(), found: perm.len() });
        }
        for &j in perm {
            if j >= seen.len() || core::mem::replace(&mut seen[j], true) {
                return Err(Error::BadIndex(j));
            }
        }
        let places = perm.iter().map(|&j| prime.places[j].clone()).collect();
        let mut out = self.clone();
        out.primes[i] = NonInvertiblePrime::new(prime.label.clone(), prime.p, prime.residue_size, places)?;
        Ok(out)
    }

    /// Resolves an order-level label. `p.0` names the unique prime over `p`.
    pub fn resolve(&self, label: &PlaceLabel) -> Result<OrderPlace> {
        if let Some(i) = self.primes.iter().position(|q| &q.label == label) {
            return Ok(OrderPlace::NonInvertible(i));
        }
        if let PlaceLabel::Branch(p, 0) = label {
            if let Some(i) = self.primes.iter().position(|q| q.label == PlaceLabel::Prime(*p)) {
                return Ok(OrderPlace::NonInvertible(i));
            }
        }
        let unknown = || Error::UnknownPlace(format!("{label}"));
        match &self.backend {
            Backend::Quadratic { field, conductor } => {
                let place = field.place(label)?;
                if conductor % place.p == 0 {
                    return Err(unknown());
                }
                Ok(OrderPlace::Invertible(place))
            }
            Backend::Declared { .. } => Err(unknown()),
        }
    }

    /// The canonical label of an order-level place.
    pub fn order_label(&self, place: &OrderPlace) -> PlaceLabel {
        match place {
            OrderPlace::NonInvertible(i) => self.primes[*i].label.clone(),
            OrderPlace::Invertible(pl) => pl.label(),
        }
    }

    /// Rewrites an order-level divisor with canonical labels.
    pub fn normalize_divisor(&self, d: &Divisor) -> Result<Divisor> {
        if d.level() != Level::Order {
            return Err(Error::LevelMismatch);
        }
        let mut out = Divisor::zero(Level::Order);
        for (label, c) in d.iter() {
            let place = self.resolve(label)?;
            out.add_term(self.order_label(&place), c);
        }
        Ok(out)
    }

    /// Locates a place of `Õ`: `(i, j)` when it lies over `p_i`, otherwise the
    /// quadratic place itself.
    fn locate_maximal(&self, label: &PlaceLabel) -> Result<core::result::Result<(usize, usize), PrimePlace>> {
        for (i, q) in self.primes.iter().enumerate() {
            if let Some(j) = q.place_index(label) {
                return Ok(Ok((i, j)));
            }
        }
        match &self.backend {
            Backend::Quadratic { field, .. } => {
                let place = field.place(label)?;
                for (i, q) in self.primes.iter().enumerate() {
                    if let Some(j) = q.place_index(&place.label()) {
                        return Ok(Ok((i, j)));
                    }
                }
                Ok(Err(place))
            }
            Backend::Declared { .. } => Err(Error::UnknownPlace(format!("{label}"))),
        }
    }

    /// `f_*`: coefficients times degrees, collected on the primes of the order.
    pub fn pushforward(&self, d: &Divisor) -> Result<Divisor> {
        if d.level() != Level::Maximal {
            return Err(Error::LevelMismatch);
        }
        let mut out = Divisor::zero(Level::Order);
        for (label, c) in d.iter() {
            match self.locate_maximal(label)? {
                Ok((i, j)) => {
                    let deg = BigInt::from(self.primes[i].places[j].degree);
                    out.add_term(self.primes[i].label.clone(), &(c * deg));
                }
                Err(place) => out.add_term(place.label(), c),
            }
        }
        Ok(out)
    }

    /// `div_O(a) = f_*(div_Õ(a))`.
    pub fn div_over_order(&self, a: &QElement) -> Result<Divisor> {
        let (field, _) = self.quadratic()?;
        self.pushforward(&field.div_maximal(a)?)
    }

    /// `𝔔_i = Σ_j λ_{i,j} 𝔓_{i,j}` as a divisor of `Õ`.
    pub fn q_divisor(&self, i: usize) -> Result<Divisor> {
        let q = self.primes.get(i).ok_or(Error::BadIndex(i))?;
        Ok(Divisor::from_terms(
            Level::Maximal,
            q.places.iter().zip(&q.lambdas).map(|(pl, l)| (pl.label.clone(), l.clone())),
        ))
    }

    /// `(d_{i,j}/g_i) 𝔔_i - 𝔓_{i,j}` for all `i, j`, in that order.
    pub fn kernel_generators(&self) -> Vec<Divisor> {
        let mut out = Vec::new();
        for (i, q) in self.primes.iter().enumerate() {
            let qi = self.q_divisor(i).expect("index in range");
            for pl in &q.places {
                let k = BigInt::from(pl.degree) / &q.g;
                let mut d = qi.scale(&k);
                d.add_term(pl.label.clone(), &-BigInt::one());
                out.push(d);
            }
        }
        out
    }

    /// Membership in `Z + fÕ`.
    pub fn contains(&self, x: &QElement) -> Result<bool> {
        let (_, f) = self.quadratic()?;
        let (_, b, den) = x.parts();
        Ok(den.is_one() && b.is_multiple_of(&BigInt::from(f)))
    }

    /// `|(Õ/fÕ)*|`.
    pub fn residue_unit_count(&self) -> Result<BigInt> {
        let (field, f) = self.quadratic()?;
        let mut acc = BigInt::one();
        for (p, k) in factor_u64(f) {
            let pb = BigInt::from(p);
            let pk1 = num_traits::pow(pb.clone(), (k - 1) as usize);
            let local: BigInt = match field.split_kind(p) {
                SplitKind::Split => {
                    let t = &pk1 * (&pb - 1);
                    &t * &t
                }
                SplitKind::Inert => &pk1 * &pk1 * (&pb * &pb - 1),
                SplitKind::Ramified => &pk1 * &pk1 * &pb * (&pb - 1),
            };
            acc *= local;
        }
        Ok(acc)
    }

    /// `|(O/fÕ)*| = φ(f)`.
    pub fn order_residue_unit_count(&self) -> Result<BigInt> {
        let (_, f) = self.quadratic()?;
        Ok(BigInt::from(totient(f)))
    }

    /// `[Õ* : O*]`.
    pub fn unit_index(&self) -> Result<BigInt> {
        let (field, f) = self.quadratic()?;
        if f == 1 {
            return Ok(BigInt::one());
        }
        if field.is_imaginary() {
            return Ok(BigInt::from(field.torsion_count() / 2));
        }
        // least n with ε^n ∈ Z + fÕ, computed on coordinates mod f
        let eps = field.fundamental_unit()?;
        let (x, y, _) = eps.parts();
        let fb = BigInt::from(f);
        let (d, nw) = (field.disc(), field.norm_omega());
        let (x0, y0) = (x.mod_floor(&fb), y.mod_floor(&fb));
        let (mut cx, mut cy) = (x0.clone(), y0.clone());
        let mut n = BigInt::one();
        while !cy.is_zero() {
            let nx: BigInt = &cx * &x0 - nw * &cy * &y0;
            let ny: BigInt = &cx * &y0 + &cy * &x0 + d * &cy * &y0;
            cx = nx.mod_floor(&fb);
            cy = ny.mod_floor(&fb);
            n += 1;
        }
        Ok(n)
    }

    /// The conditions of the maximality criterion for `O*` and `Pic(O)`.
    pub fn prop_fix_report(&self) -> Result<PropFixReport> {
        let all_residue_f2 =
            self.primes.iter().all(|q| q.places.iter().all(|pl| q.residue_size == 2 && pl.degree == 1));
        let all_r_geq_2 = self.primes.iter().all(|q| q.places.len() >= 2);
        let mut report = PropFixReport {
            maximal: self.is_maximal(),
            cond_squarefree: None,
            all_residue_f2,
            all_r_geq_2,
            condition5: None,
            residue_units: None,
            condition4: None,
            condition3: None,
            condition2: None,
        };
        match &self.backend {
            Backend::Declared { .. } => {
                if !all_residue_f2 || !all_r_geq_2 {
                    report.condition5 = Some(false);
                }
            }
            Backend::Quadratic { field, conductor } => {
                let squarefree =
                    factor_u64(*conductor).iter().all(|&(p, k)| k == 1 && field.split_kind(p) != SplitKind::Ramified);
                report.cond_squarefree = Some(squarefree);
                report.condition5 = Some(squarefree && all_residue_f2 && all_r_geq_2);
                let units = self.residue_unit_count()?;
                report.condition4 = Some(units.is_one());
                report.condition3 = Some(units == self.order_residue_unit_count()?);
                let pic = crate::chow::pic_cardinality(self)?;
                report.condition2 = Some(pic.pic_cardinality == pic.cl_cardinality && pic.unit_index.is_one());
                report.residue_units = Some(units);
            }
        }
        Ok(report)
    }

    /// Some `a ∈ K*` outside `O*` with `div_O(a) = 0`, searching `β/β̄` for
    /// generators `β` of `𝔓^k` with `N(𝔓)^k ≤ bound`, then units of `Õ`.
    pub fn divisor_kernel_witness(&self, bound: u64) -> Result<Option<QElement>> {
        let (field, f) = self.quadratic()?;
        if f == 1 {
            return Err(Error::MaximalOrder);
        }
        let accept = |a: &QElement| -> Result<bool> { Ok(self.div_over_order(a)?.is_zero() && !self.contains(a)?) };
        for q in self.primes.iter().filter(|q| q.places.len() == 2) {
            let PlaceSource::Quadratic(pl) = &q.places[0].source else { continue };
            let ideal = field.prime_to_ideal(pl);
            let mut k = 1u32;
            while let Some(norm) = q.p.checked_pow(k).filter(|&n| n <= bound) {
                let _ = norm;
                if let Some(beta) = field.is_principal(&field.ideal_pow(&ideal, &BigInt::from(k)))? {
                    let a = field.div(&beta, &field.conj(&beta))?;
                    if accept(&a)? {
                        return Ok(Some(a));
                    }
                }
                k += 1;
            }
        }
        let mut units = field.torsion_units();
        if field.is_real() {
            units.push(field.fundamental_unit()?);
        }
        for u in units {
            if accept(&u)? {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }
}

/// Evaluation of the five equivalent conditions. `None` marks what the
/// backend cannot decide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropFixReport {
    pub maximal: bool,
    pub cond_squarefree: Option<bool>,
    pub all_residue_f2: bool,
    pub all_r_geq_2: bool,
    pub condition5: Option<bool>,
    /// `|(Õ/ℱ)*|`.
    pub residue_units: Option<BigInt>,
    pub condition4: Option<bool>,
    pub condition3: Option<bool>,
    pub condition2: Option<bool>,
}

impl PropFixReport {
    pub fn equivalent_conditions_hold(&self) -> Option<bool> {
        self.condition5
    }
}

/// One place over `p` in Furtwängler's criterion.
#[derive(Clone, Debug)]
pub struct LocalExponent {
    pub label: PlaceLabel,
    /// Whether `Õ/𝔓 ≅ F_p`.
    pub prime_residue_field: bool,
    pub ramification: u32,
    pub exponent: BigInt,
}

/// The first place over one rational prime at which `Π 𝔓_i^{k_i}` fails to
/// be a conductor ideal.
pub fn furtwangler_violator(places: &[LocalExponent]) -> Option<PlaceLabel> {
    for (i, pi) in places.iter().enumerate() {
        let e = BigInt::from(pi.ramification);
        if !pi.prime_residue_field || !BigInt::is_multiple_of(&(&pi.exponent - 1), &e) {
            continue;
        }
        let t = (&pi.exponent - 1) / &e;
        let witnessed =
            places.iter().enumerate().any(|(j, pj)| j != i && pj.exponent > &t * BigInt::from(pj.ramification));
        if !witnessed {
            return Some(pi.label.clone());
        }
    }
    None
}

fn local_exponents(field: &QuadField, exponents: &Divisor) -> Result<Vec<(u64, Vec<LocalExponent>)>> {
    if exponents.level() != Level::Maximal {
        return Err(Error::LevelMismatch);
    }
    let mut canon = Divisor::zero(Level::Maximal);
    for (label, k) in exponents.iter() {
        if k.is_negative() {
            return Err(Error::Syntax(format!("{label}:{k}")));
        }
        canon.add_term(field.place(label)?.label(), k);
    }
    let mut primes: Vec<u64> = canon.iter().filter_map(|(l, _)| l.prime()).collect();
    primes.dedup();
    let mut out = Vec::new();
    for p in primes {
        let locals = field
            .splitting(p)?
            .into_iter()
            .map(|pl| LocalExponent {
                label: pl.label(),
                prime_residue_field: pl.degree() == 1,
                ramification: pl.ramification(),
                exponent: canon.coeff(&pl.label()),
            })
            .collect();
        out.push((p, locals));
    }
    Ok(out)
}

/// The violating place when `Π 𝔓^{k}` is not a conductor ideal, else `None`.
pub fn conductor_violator(field: &QuadField, exponents: &Divisor) -> Result<Option<PlaceLabel>> {
    for (_, locals) in local_exponents(field, exponents)? {
        if let Some(v) = furtwangler_violator(&locals) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn is_conductor_ideal(field: &QuadField, exponents: &Divisor) -> Result<bool> {
    Ok(conductor_violator(field, exponents)?.is_none())
}

/// The exponents of `fÕ`.
pub fn conductor_exponents(field: &QuadField, f: u64) -> Result<Divisor> {
    let mut out = Divisor::zero(Level::Maximal);
    for (p, k) in factor_u64(f) {
        for pl in field.splitting(p)? {
            out.add_term(pl.label(), &BigInt::from(k * pl.ramification()));
        }
    }
    Ok(out)
}

/// `Z + 𝔄` for a conductor ideal `𝔄 = fÕ`.
pub fn order_from_ideal(field: Arc<QuadField>, exponents: &Divisor) -> Result<OrderData> {
    if let Some(v) = conductor_violator(&field, exponents)? {
        return Err(Error::NotConductorIdeal(format!("{v}")));
    }
    let mut f = 1u64;
    for (p, locals) in local_exponents(&field, exponents)? {
        let ks: Vec<&BigInt> = locals.iter().map(|l| &l.exponent).collect();
        let k = match field.split_kind(p) {
            SplitKind::Split if ks[0] == ks[1] => ks[0].clone(),
            SplitKind::Inert => ks[0].clone(),
            SplitKind::Ramified if ks[0].is_even() => ks[0] / 2,
            _ => return Err(Error::UnsupportedShape),
        };
        let k = k.to_u32().ok_or(Error::UnsupportedShape)?;
        f = p.checked_pow(k).and_then(|q| f.checked_mul(q)).ok_or(Error::UnsupportedShape)?;
    }
    OrderData::from_conductor(field, f)
}

/// Label of the `k`-th selected prime over `p`: `p` when unique, else `p.k`.
pub(crate) fn order_prime_label(p: u64, k: u32, count: u32) -> PlaceLabel {
    if count == 1 {
        PlaceLabel::Prime(p)
    } else {
        PlaceLabel::Branch(p, k)
    }
}

pub fn describe_degrees(q: &NonInvertiblePrime) -> String {
    let ds: Vec<String> = q.places.iter().map(|pl| format!("{}", pl.degree)).collect();
    format!("({})", ds.join(","))
}
