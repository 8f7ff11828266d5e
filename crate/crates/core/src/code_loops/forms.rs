//! Symmetric trilinear forms on `F^k`, stored by their values on basis
//! triples.

use super::{cdeg, derived_form, rank, solve_homogeneous, CodeLoopError, PowerMap, MAX_BUILD_DIM};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrilinearForm {
    dim: u32,
    /// `coeffs[(i·k + j)·k + l] = f(e_i, e_j, e_l)`.
    coeffs: Vec<bool>,
}

impl TrilinearForm {
    pub fn from_basis_fn(dim: u32, f: impl Fn(u32, u32, u32) -> bool) -> Self {
        let k = dim as usize;
        let mut coeffs = vec![false; k * k * k];
        for i in 0..dim {
            for j in 0..dim {
                for l in 0..dim {
                    coeffs[(i as usize * k + j as usize) * k + l as usize] = f(i, j, l);
                }
            }
        }
        TrilinearForm { dim, coeffs }
    }

    /// `P₃`; requires `cdeg P ≤ 3` so that it is trilinear.
    pub fn from_power_map(p: &PowerMap) -> Result<Self, CodeLoopError> {
        let d = cdeg(p);
        if d > 3 {
            return Err(CodeLoopError::CdegTooHigh(d));
        }
        Ok(Self::from_basis_fn(p.dim(), |i, j, l| {
            derived_form(p, &[1 << i, 1 << j, 1 << l])
        }))
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn basis_value(&self, i: u32, j: u32, l: u32) -> bool {
        let k = self.dim as usize;
        self.coeffs[(i as usize * k + j as usize) * k + l as usize]
    }

    pub fn eval(&self, u: u32, v: u32, w: u32) -> bool {
        let mut acc = false;
        for i in (0..self.dim).filter(|&i| u >> i & 1 == 1) {
            for j in (0..self.dim).filter(|&j| v >> j & 1 == 1) {
                for l in (0..self.dim).filter(|&l| w >> l & 1 == 1) {
                    acc ^= self.basis_value(i, j, l);
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| !c)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                (0..self.dim).all(|l| {
                    let v = self.basis_value(i, j, l);
                    v == self.basis_value(j, i, l) && v == self.basis_value(i, l, j)
                })
            })
        })
    }

    /// `f(u, ·, ·)` as rows of a bilinear form matrix.
    fn slice(&self, u: u32) -> Vec<u32> {
        (0..self.dim)
            .map(|j| {
                (0..self.dim)
                    .filter(|&l| self.eval(u, 1 << j, 1 << l))
                    .fold(0u32, |m, l| m | 1 << l)
            })
            .collect()
    }

    /// Basis of `{v : f(v, ·, ·) = 0}`.
    pub fn radical(&self) -> Vec<u32> {
        let k = self.dim;
        let mut constraints = Vec::new();
        for j in 0..k {
            for l in 0..k {
                let c = (0..k)
                    .filter(|&i| self.basis_value(i, j, l))
                    .fold(0u32, |m, i| m | 1 << i);
                constraints.push(c);
            }
        }
        solve_homogeneous(k, &constraints)
    }

    /// Sorted ranks of `f(v, ·, ·)` over all vectors `v`; invariant under
    /// change of basis.
    pub fn rank_profile(&self) -> Vec<u32> {
        let mut r: Vec<u32> = (0..1u32 << self.dim).map(|v| rank(&self.slice(v))).collect();
        r.sort_unstable();
        r
    }

    /// An invertible `g` (images of the basis vectors) with
    /// `other(g u, g v, g w) = self(u, v, w)`, if one exists.
    pub fn equivalence(&self, other: &TrilinearForm) -> Result<Option<Vec<u32>>, CodeLoopError> {
        if self.dim > MAX_BUILD_DIM {
            return Err(CodeLoopError::DimensionTooLarge(self.dim));
        }
        if self.dim != other.dim
            || self.radical().len() != other.radical().len()
            || self.rank_profile() != other.rank_profile()
        {
            return Ok(None);
        }
        let mut images = Vec::with_capacity(self.dim as usize);
        Ok(self.extend(other, &mut images).then_some(images))
    }

    pub fn is_equivalent(&self, other: &TrilinearForm) -> Result<bool, CodeLoopError> {
        Ok(self.equivalence(other)?.is_some())
    }

    fn extend(&self, other: &TrilinearForm, images: &mut Vec<u32>) -> bool {
        let i = images.len() as u32;
        if i == self.dim {
            return true;
        }
        let spanned = super::span(images);
        for cand in 1u32..(1 << self.dim) {
            if spanned.contains(&cand) {
                continue;
            }
            images.push(cand);
            let ok = (0..=i).all(|a| {
                (0..=i).all(|b| {
                    let l = i;
                    let img = |x: u32| images[x as usize];
                    self.basis_value(a, b, l) == other.eval(img(a), img(b), img(l))
                        && self.basis_value(a, l, b) == other.eval(img(a), img(l), img(b))
                        && self.basis_value(l, a, b) == other.eval(img(l), img(a), img(b))
                })
            });
            if ok && self.extend(other, images) {
                return true;
            }
            images.pop();
        }
        false
    }
}

/// Basis of the radical of `P₂`, computed on basis pairs (meaningful when
/// `cdeg P ≤ 2`, where `P₂` is bilinear).
pub fn second_form_radical(p: &PowerMap) -> Vec<u32> {
    let k = p.dim();
    let constraints: Vec<u32> = (0..k)
        .map(|j| {
            (0..k)
                .filter(|&i| derived_form(p, &[1 << i, 1 << j]))
                .fold(0u32, |m, i| m | 1 << i)
        })
        .collect();
    solve_homogeneous(k, &constraints)
}
