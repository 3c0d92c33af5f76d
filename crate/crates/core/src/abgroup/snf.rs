//! Smith normal form over the integers.
//!
//! Pivoting always takes the nonzero entry of smallest absolute value in the
//! remaining block, ties broken by (row, column) index. The transforms are
//! therefore reproducible for a given input.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `left * input * right == diagonal`, with `right_inverse * right == 1`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, `min(rows, cols)` of them.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.diagonal()
    }
}

fn smallest_nonzero(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d[(bi, bj)].magnitude() <= x.magnitude() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(input: &IntMatrix) -> SmithForm {
    let (m, n) = (input.rows(), input.cols());
    let mut d = input.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);
    let mut right_inverse = IntMatrix::identity(n);
    let mut rank = 0;

    'outer: for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, k) else {
                break 'outer;
            };
            d.swap_rows(k, pi);
            left.swap_rows(k, pi);
            d.swap_cols(k, pj);
            right.swap_cols(k, pj);
            right_inverse.swap_rows(k, pj);

            let pivot = d[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..m {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -d[(i, k)].div_floor(&pivot);
                d.add_row_multiple(i, k, &q);
                left.add_row_multiple(i, k, &q);
                clean &= d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -d[(k, j)].div_floor(&pivot);
                d.add_col_multiple(j, k, &q);
                right.add_col_multiple(j, k, &q);
                right_inverse.add_row_multiple(k, j, &-&q);
                clean &= d[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (k + 1..m).find(|&i| (k + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(k, i, &one);
                    left.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            left.negate_row(k);
        }
        rank += 1;
    }

    SmithForm { diagonal: d, left, right, right_inverse, rank }
}

/// Some `x` with `x * m == target`, if one exists.
pub fn solve_left(m: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    if target.len() != m.cols() {
        return None;
    }
    let snf = smith_normal_form(m);
    let w = snf.right.left_apply(target).ok()?;
    let mut z = alloc::vec![BigInt::zero(); m.rows()];
    for (i, wi) in w.iter().enumerate() {
        if i < snf.rank {
            let di = &snf.diagonal[(i, i)];
            let (q, r) = wi.div_rem(di);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !wi.is_zero() {
            return None;
        }
    }
    snf.left.left_apply(&z).ok()
}

/// Basis (as rows) of `{ x : x * m == 0 }`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let keep: Vec<usize> = (snf.rank..m.rows()).collect();
    snf.left.select_rows(&keep)
}
