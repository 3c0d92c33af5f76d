use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A field element `(a + b ω) / den` with `den > 0` and `gcd(a, b, den) = 1`.
///
/// The display form is `(x + y √d) / m`, see [`super::QuadField::sqrt_form`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QElement {
    a: BigInt,
    b: BigInt,
    den: BigInt,
}

impl QElement {
    pub fn new(a: BigInt, b: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut g = a.gcd(&b).gcd(&den);
        if den.is_negative() {
            g = -g;
        }
        Ok(QElement { a: a / &g, b: b / &g, den: den / &g })
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        QElement { a: n.into(), b: BigInt::zero(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    /// Rational number `num / den`.
    pub fn rational(num: BigInt, den: BigInt) -> Result<Self> {
        Self::new(num, BigInt::zero(), den)
    }

    /// Integral element `a + b ω`.
    pub fn integral(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QElement { a: a.into(), b: b.into(), den: BigInt::one() }
    }

    /// Coordinates `(a, b, den)` in the basis `1, ω`.
    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.den.is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, o: &QElement) -> QElement {
        let den = &self.den * &o.den;
        Self::new(&self.a * &o.den + &o.a * &self.den, &self.b * &o.den + &o.b * &self.den, den)
            .expect("nonzero denominator")
    }

    pub fn neg(&self) -> QElement {
        QElement { a: -&self.a, b: -&self.b, den: self.den.clone() }
    }

    pub fn sub(&self, o: &QElement) -> QElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> QElement {
        Self::new(&self.a * k, &self.b * k, self.den.clone()).expect("nonzero denominator")
    }

    pub fn div_int(&self, k: &BigInt) -> Result<QElement> {
        Self::new(self.a.clone(), self.b.clone(), &self.den * k)
    }
}

/// `(x, y, m)` rendered as `(x+y√d)/m` with the usual simplifications.
pub(crate) fn format_sqrt_form(x: &BigInt, y: &BigInt, m: &BigInt, d: &BigInt) -> String {
    let root = format!("√{d}");
    let y_term = if y.is_one() {
        root
    } else if *y == -BigInt::one() {
        format!("-{root}")
    } else {
        format!("{y}{root}")
    };
    let (num, compound) = match (x.is_zero(), y.is_zero()) {
        (_, true) => (format!("{x}"), false),
        (true, false) => (y_term, false),
        (false, false) => {
            let sep = if y.is_negative() { "" } else { "+" };
            (format!("{x}{sep}{y_term}"), true)
        }
    };
    if m.is_one() {
        num
    } else if compound {
        format!("({num})/{m}")
    } else {
        format!("{num}/{m}")
    }
}
