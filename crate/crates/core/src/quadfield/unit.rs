use alloc::boxed::Box;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::reduce::Form;
use super::{QElement, QuadField};
use crate::error::{Error, Result};

impl QuadField {
    /// The fundamental unit `ε > 1` of a real field, read off as the
    /// multiplier of one period of the principal reduction cycle.
    pub fn fundamental_unit(&self) -> Result<QElement> {
        if self.is_imaginary() {
            return Err(Error::ImaginaryField);
        }
        self.unit.get_or_init(|| Box::new(self.compute_unit())).clone()
    }

    fn compute_unit(&self) -> Result<QElement> {
        let s = self.isqrt();
        // Õ = [1, (B + √d)/2] with B ∈ {s - 1, s} of the parity of d
        let bb = if (s - self.disc()).is_even() { s.clone() } else { s - 1 };
        let start = Form { a: BigInt::one(), bb };
        debug_assert!(self.is_reduced(&start));
        let mut cur = start.clone();
        let mut mu = QElement::one();
        loop {
            let (next, step) = self.cycle_step(&cur);
            mu = self.mul(&mu, &step);
            cur = next;
            if cur == start {
                break;
            }
        }
        if !self.is_unit(&mu) {
            return Err(Error::Internal("cycle multiplier is not a unit".into()));
        }
        Ok(self.normalize_unit(&mu))
    }

    /// The representative of `±u^{±1}` that exceeds 1.
    fn normalize_unit(&self, u: &QElement) -> QElement {
        let inv = self.inv(u).expect("units are nonzero");
        for c in [u.clone(), u.neg(), inv.clone(), inv.neg()] {
            let (x, y, _) = self.sqrt_form(&c);
            if x.is_positive() && y.is_positive() {
                return c;
            }
        }
        unreachable!("one of ±u^±1 exceeds 1")
    }

    /// `|Õ^*|` for imaginary fields.
    pub fn torsion_count(&self) -> usize {
        self.torsion_units().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_square;

    /// Least `y > 0` with `d y² ± 4` a square gives `ε = (x + y√d)/2`.
    fn brute_unit(d: i64) -> (BigInt, BigInt) {
        let d = BigInt::from(d);
        let mut y = BigInt::one();
        loop {
            for sign in [-4, 4] {
                let t: BigInt = &d * &y * &y + sign;
                if t.is_positive() && is_square(&t) {
                    return (num_integer::Roots::sqrt(&t), y);
                }
            }
            y += 1;
        }
    }

    #[test]
    fn small_units() {
        let f = QuadField::new(5).unwrap();
        assert_eq!(f.format(&f.fundamental_unit().unwrap()), "(1+√5)/2");
        let f = QuadField::new(8).unwrap();
        // 1 + √2 = (2 + √8)/2
        let e = f.fundamental_unit().unwrap();
        assert_eq!(f.sqrt_form(&e), (BigInt::from(2), BigInt::from(1), BigInt::from(2)));
        assert_eq!(QuadField::new(-7).unwrap().fundamental_unit(), Err(Error::ImaginaryField));
    }

    #[test]
    fn units_match_pell_search() {
        for d in [
            5i64, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44, 53, 56, 57, 60, 61, 65, 69, 73, 76, 77, 85, 88,
            89, 92, 93, 97,
        ] {
            let f = QuadField::new(d).unwrap();
            let e = f.fundamental_unit().unwrap();
            let (x, y, m) = f.sqrt_form(&e);
            let (bx, by) = brute_unit(d);
            // (x + y√d)/m == (bx + by√d)/2
            assert_eq!(&x * 2, &bx * &m, "d={d}");
            assert_eq!(&y * 2, &by * &m, "d={d}");
        }
    }
}
