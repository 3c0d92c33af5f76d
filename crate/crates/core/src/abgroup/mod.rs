//! Integer matrices, Smith normal form and finitely generated abelian groups.

mod group;
mod hom;
mod matrix;
mod snf;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use group::{format_invariants, quotient, AbelianGroup, GroupElement};
pub use hom::{Hom, Kernel};
pub use matrix::IntMatrix;
pub use snf::{left_kernel, smith_normal_form, solve_left, SmithForm};

use crate::arith::egcd;
use crate::error::{Error, Result};

/// `g = gcd(values)` with coefficients from a left fold of the extended gcd.
pub fn bezout_gcd(values: &[BigInt]) -> Result<(BigInt, Vec<BigInt>)> {
    if values.iter().all(Zero::is_zero) {
        return Err(Error::AllZero);
    }
    let mut g = BigInt::zero();
    let mut lambdas: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values {
        let (ng, s, t) = egcd(&g, v);
        for l in lambdas.iter_mut() {
            *l *= &s;
        }
        lambdas.push(t);
        g = ng;
    }
    if g.is_negative() {
        g = -g;
        for l in lambdas.iter_mut() {
            *l = -&*l;
        }
    }
    Ok((g, lambdas))
}

pub fn bezout_gcd_i64(values: &[i64]) -> Result<(BigInt, Vec<BigInt>)> {
    let v: Vec<BigInt> = values.iter().map(|&x| BigInt::from(x)).collect();
    bezout_gcd(&v)
}
