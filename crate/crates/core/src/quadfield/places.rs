use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::{QElement, QIdeal, QuadField};
use crate::arith::{factor, is_prime_u64, kronecker, sqrt_mod_prime, valuation};
use crate::divisor::{Divisor, Level, PlaceLabel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// A maximal ideal of `Õ` over the rational prime `p`.
///
/// Split and ramified places are `[p, b + ω]`; the inert place is `p Õ`.
/// Branch 0 of a split prime has the smaller `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePlace {
    pub p: u64,
    pub kind: SplitKind,
    pub branch: u32,
    pub b: u64,
}

impl PrimePlace {
    pub fn degree(&self) -> u32 {
        if self.kind == SplitKind::Inert {
            2
        } else {
            1
        }
    }

    pub fn ramification(&self) -> u32 {
        if self.kind == SplitKind::Ramified {
            2
        } else {
            1
        }
    }

    pub fn residue_size(&self) -> u64 {
        self.p.pow(self.degree())
    }

    pub fn label(&self) -> PlaceLabel {
        match self.kind {
            SplitKind::Split => PlaceLabel::Branch(self.p, self.branch),
            _ => PlaceLabel::Prime(self.p),
        }
    }
}

impl QuadField {
    pub fn split_kind(&self, p: u64) -> SplitKind {
        match kronecker(self.disc(), p) {
            1 => SplitKind::Split,
            -1 => SplitKind::Inert,
            _ => SplitKind::Ramified,
        }
    }

    /// Roots `b` in `[0, p)` of `b² + d b + N(ω) ≡ 0 (mod p)`, ascending.
    fn omega_roots(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let eval = |b: u64| {
            let b = BigInt::from(b);
            (&b * &b + &b * self.disc() + self.norm_omega()).is_multiple_of(&pb)
        };
        if p == 2 {
            return (0..2).filter(|&b| eval(b)).collect();
        }
        let dm = self.disc().mod_floor(&pb);
        let dm = u64::try_from(dm).expect("residue below p");
        let Some(r) = sqrt_mod_prime(dm, p) else { return Vec::new() };
        // b = (±r - d)/2 mod p
        let inv2 = p.div_ceil(2);
        let mut roots: Vec<u64> = [r, (p - r) % p]
            .iter()
            .map(|&s| {
                let v = (s + p - dm) % p;
                ((v as u128 * inv2 as u128) % p as u128) as u64
            })
            .collect();
        roots.sort_unstable();
        roots.dedup();
        debug_assert!(roots.iter().all(|&b| eval(b)));
        roots
    }

    /// The places over `p`, branch 0 first.
    pub fn splitting(&self, p: u64) -> Result<Vec<PrimePlace>> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let kind = self.split_kind(p);
        Ok(match kind {
            SplitKind::Inert => alloc::vec![PrimePlace { p, kind, branch: 0, b: 0 }],
            _ => {
                let roots = self.omega_roots(p);
                let expected = if kind == SplitKind::Split { 2 } else { 1 };
                assert_eq!(roots.len(), expected, "splitting disagrees with root count");
                roots.into_iter().enumerate().map(|(k, b)| PrimePlace { p, kind, branch: k as u32, b }).collect()
            }
        })
    }

    /// Resolves `p`, `p.k` (and `p.0` for a unique place) to a place.
    pub fn place(&self, label: &PlaceLabel) -> Result<PrimePlace> {
        let unknown = || Error::UnknownPlace(alloc::format!("{label}"));
        let (p, k) = match label {
            PlaceLabel::Prime(p) => (*p, None),
            PlaceLabel::Branch(p, k) => (*p, Some(*k)),
            PlaceLabel::Named(_) => return Err(unknown()),
        };
        let places = self.splitting(p).map_err(|_| unknown())?;
        match (places.len(), k) {
            (1, None) | (1, Some(0)) => Ok(places[0].clone()),
            (2, Some(k)) if k < 2 => Ok(places[k as usize].clone()),
            _ => Err(unknown()),
        }
    }

    pub fn prime_to_ideal(&self, place: &PrimePlace) -> QIdeal {
        match place.kind {
            SplitKind::Inert => self.unit_ideal().scaled(&BigRational::from_integer(place.p.into())),
            _ => self.ideal(place.p.into(), place.b.into(), BigRational::one()).expect("prime ideals are ideals"),
        }
    }

    /// Exponent of `place` in the factorization of `a Õ`.
    pub fn ord_at(&self, place: &PrimePlace, a: &QElement) -> Result<i64> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (x, y, den) = a.parts();
        let g = x.gcd(y);
        let (x1, y1) = (x / &g, y / &g);
        let e = place.ramification() as i64;
        let base = e * (valuation(&g, place.p) as i64 - valuation(den, place.p) as i64);
        let n = self.integral_norm(&x1, &y1);
        let local = match place.kind {
            SplitKind::Inert => 0,
            SplitKind::Ramified => valuation(&n, place.p) as i64,
            SplitKind::Split => {
                let v = valuation(&n, place.p) as i64;
                if v > 0 && (&x1 - &y1 * BigInt::from(place.b)).is_multiple_of(&BigInt::from(place.p)) {
                    v
                } else {
                    0
                }
            }
        };
        Ok(base + local)
    }

    /// Rational primes at which `a` can have nonzero valuation.
    pub fn support_primes(&self, a: &QElement) -> Result<Vec<u64>> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (x, y, den) = a.parts();
        let g = x.gcd(y);
        let n = self.integral_norm(&(x / &g), &(y / &g));
        let mut primes: Vec<u64> = Vec::new();
        for m in [&g, den, &n] {
            primes.extend(factor(m)?.into_iter().map(|(p, _)| p));
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(primes)
    }

    /// `div(a)` on `Õ`.
    pub fn div_maximal(&self, a: &QElement) -> Result<Divisor> {
        let mut out = Divisor::zero(Level::Maximal);
        for p in self.support_primes(a)? {
            for place in self.splitting(p)? {
                let k = self.ord_at(&place, a)?;
                out.add_term(place.label(), &BigInt::from(k));
            }
        }
        Ok(out)
    }

    /// `Π place^k` as an ideal of `Õ`.
    pub fn divisor_to_ideal(&self, d: &Divisor) -> Result<QIdeal> {
        let mut acc = self.unit_ideal();
        for (label, k) in d.iter() {
            let place = self.place(label)?;
            acc = self.ideal_mul(&acc, &self.ideal_pow(&self.prime_to_ideal(&place), k));
        }
        Ok(acc)
    }

    /// The divisor of a nonzero fractional ideal.
    pub fn ideal_divisor(&self, i: &QIdeal) -> Result<Divisor> {
        let c = i.content();
        let mut primes: Vec<u64> = Vec::new();
        for m in [c.numer(), c.denom(), i.a()] {
            primes.extend(factor(m)?.into_iter().map(|(p, _)| p));
        }
        primes.sort_unstable();
        primes.dedup();
        let mut out = Divisor::zero(Level::Maximal);
        for p in primes {
            for place in self.splitting(p)? {
                let k = self.ideal_ord(&place, i);
                out.add_term(place.label(), &BigInt::from(k));
            }
        }
        Ok(out)
    }

    /// Exponent of `place` in the ideal `i`.
    pub fn ideal_ord(&self, place: &PrimePlace, i: &QIdeal) -> i64 {
        let e = place.ramification() as i64;
        let c = i.content();
        let base = e * (valuation(c.numer(), place.p) as i64 - valuation(c.denom(), place.p) as i64);
        let local = match place.kind {
            SplitKind::Inert => 0,
            _ => {
                // the primitive part [a, b + ω] lies in [p, b_P + ω] exactly
                // to the power v_p(a) when b ≡ b_P, and not at all otherwise
                let v = valuation(i.a(), place.p) as i64;
                if v > 0 && (i.b() - BigInt::from(place.b)).is_multiple_of(&BigInt::from(place.p)) {
                    v
                } else {
                    0
                }
            }
        };
        base + local
    }
}
