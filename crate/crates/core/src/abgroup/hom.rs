use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::snf::{left_kernel, solve_left};
use super::{quotient, AbelianGroup, GroupElement, IntMatrix};
use crate::error::{Error, Result};

/// A homomorphism given by the images of the source's invariant generators.
#[derive(Clone, Debug)]
pub struct Hom<'a> {
    source: &'a AbelianGroup,
    target: &'a AbelianGroup,
    images: Vec<GroupElement>,
}

/// A subgroup together with its inclusion.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub group: AbelianGroup,
    /// Images in the source of the kernel's invariant generators.
    pub embedding: Vec<GroupElement>,
}

impl<'a> Hom<'a> {
    /// `user_images[j]` is the image of the j-th original generator of `source`.
    pub fn from_generator_images(
        source: &'a AbelianGroup,
        target: &'a AbelianGroup,
        user_images: &[GroupElement],
    ) -> Result<Self> {
        if user_images.len() != source.presentation_rank() {
            return Err(Error::LengthMismatch { expected: source.presentation_rank(), found: user_images.len() });
        }
        let section = source.section();
        let mut images = Vec::with_capacity(source.ngens());
        for i in 0..source.ngens() {
            let img = target.sum(section.row(i).iter().zip(user_images));
            if !source.invariant_factors()[i].is_zero() && !target.scale(&img, &source.invariant_factors()[i]).is_zero()
            {
                return Err(Error::Internal("generator images do not respect relations".into()));
            }
            images.push(img);
        }
        Ok(Hom { source, target, images })
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        self.target.sum(g.coords.iter().zip(&self.images))
    }

    pub fn kernel(&self) -> Result<Kernel> {
        let k = self.source.ngens();
        let t = self.target.ngens();
        let mut rows: Vec<Vec<BigInt>> = self.images.iter().map(|g| g.coords.clone()).collect();
        for (j, b) in self.target.invariant_factors().iter().enumerate() {
            if !b.is_zero() {
                let mut r = alloc::vec![BigInt::zero(); t];
                r[j] = b.clone();
                rows.push(r);
            }
        }
        let lk = left_kernel(&IntMatrix::from_rows(t, &rows)?);
        let keep: Vec<usize> = (0..k).collect();
        let basis = lk.select_cols(&keep);
        let l = basis.rows();
        let mut rels = Vec::new();
        for (i, a) in self.source.invariant_factors().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut v = alloc::vec![BigInt::zero(); k];
            v[i] = a.clone();
            let c = solve_left(&basis, &v)
                .ok_or_else(|| Error::Internal("source relation outside kernel lattice".into()))?;
            rels.push(c);
        }
        let group = quotient(l, &IntMatrix::from_rows(l, &rels)?)?;
        let basis_elems: Vec<GroupElement> = basis.row_vecs().into_iter().map(GroupElement::new).collect();
        let embedding =
            (0..group.ngens()).map(|i| self.source.sum(group.section().row(i).iter().zip(&basis_elems))).collect();
        Ok(Kernel { group, embedding })
    }

    pub fn cokernel(&self) -> Result<AbelianGroup> {
        self.target.subgroup_quotient(&self.images)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.group.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.is_trivial())
    }
}
