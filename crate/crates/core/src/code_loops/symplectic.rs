//! Symplectic loops, the code-loop test, the explicit builder and the
//! power-map change under one construction step.

use serde::Serialize;

use super::forms::second_form_radical;
use super::{cdeg, derived_form, span, BitSpace, CodeLoopError, PowerMap, TrilinearForm, MAX_BUILD_DIM};
use crate::constructions::Params;
use crate::{ElemSet, LoopTable};

/// A loop with a central subloop `Z = {1, z}` whose quotient is an
/// elementary abelian 2-group, coordinatised by `V = G/Z`.
#[derive(Debug, Clone)]
pub struct SymplecticData {
    pub table: LoopTable,
    pub z: usize,
    pub space: BitSpace,
    /// Loop elements whose cosets form the chosen basis of `V`.
    pub basis: Vec<usize>,
    /// Coset vector of every element.
    pub coords: Vec<u32>,
    /// Least element of the coset of every vector.
    pub reps: Vec<usize>,
    /// `P(aZ) = a²`.
    pub power: PowerMap,
}

impl SymplecticData {
    pub fn dim(&self) -> u32 {
        self.space.dim()
    }

    /// `C(u, v) = [a, b]` for `a ∈ u`, `b ∈ v`.
    pub fn commutator(&self, u: u32, v: u32) -> bool {
        let l = &self.table;
        l.commutator(self.reps[u as usize], self.reps[v as usize]) == self.z
    }

    /// `A(u, v, w) = [a, b, c]`.
    pub fn associator(&self, u: u32, v: u32, w: u32) -> bool {
        let l = &self.table;
        l.associator(self.reps[u as usize], self.reps[v as usize], self.reps[w as usize]) == self.z
    }

    /// `C = P₂` and `A = P₃` on all arguments.
    pub fn maps_match_power(&self) -> bool {
        let vs: Vec<u32> = self.space.vectors().collect();
        vs.iter().all(|&u| {
            vs.iter().all(|&v| {
                self.commutator(u, v) == derived_form(&self.power, &[u, v])
                    && vs
                        .iter()
                        .all(|&w| self.associator(u, v, w) == derived_form(&self.power, &[u, v, w]))
            })
        })
    }

    /// The associator map on basis triples.
    pub fn associator_form(&self) -> TrilinearForm {
        TrilinearForm::from_basis_fn(self.dim(), |i, j, l| self.associator(1 << i, 1 << j, 1 << l))
    }

    /// Vectors of the cosets meeting `s`.
    pub fn vectors_of(&self, s: &ElemSet) -> Vec<u32> {
        let mut v: Vec<u32> = s.iter().map(|x| self.coords[x]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Analysis relative to the central involution `z`.
pub fn symplectic_analyze_with(l: &LoopTable, z: usize) -> Option<SymplecticData> {
    let n = l.order();
    if z == 0 || z >= n || l.mul(z, z) != 0 || !l.center().contains(z) {
        return None;
    }
    let f = ElemSet::from_iter_n(n, [0, z]);
    let (q, part) = l.quotient(&f).ok()?;
    let qn = q.order();
    if !qn.is_power_of_two() || (0..qn).any(|x| q.mul(x, x) != 0) || !q.is_associative() {
        return None;
    }
    let dim = qn.trailing_zeros();
    let space = BitSpace::new(dim).ok()?;
    // greedy basis of cosets in index order
    let mut vec_of = vec![u32::MAX; qn];
    vec_of[0] = 0;
    let mut spanned = vec![0usize];
    let mut basis_cosets = Vec::new();
    for c in 0..qn {
        if vec_of[c] != u32::MAX {
            continue;
        }
        let bit = 1u32 << basis_cosets.len();
        let more: Vec<usize> = spanned.iter().map(|&s| q.mul(s, c)).collect();
        for (&s, &t) in spanned.iter().zip(&more) {
            vec_of[t] = vec_of[s] | bit;
        }
        spanned.extend(more);
        basis_cosets.push(c);
    }
    let class_reps = part.representatives();
    let mut reps = vec![0usize; qn];
    for c in 0..qn {
        reps[vec_of[c] as usize] = class_reps[c];
    }
    let coords: Vec<u32> = (0..n).map(|x| vec_of[part.index_of[x]]).collect();
    let power = PowerMap::from_fn(dim, |v| l.mul(reps[v as usize], reps[v as usize]) == z).ok()?;
    Some(SymplecticData {
        table: l.clone(),
        z,
        space,
        basis: basis_cosets.iter().map(|&c| class_reps[c]).collect(),
        coords,
        reps,
        power,
    })
}

/// Analysis relative to the least central involution that works.
pub fn symplectic_analyze(l: &LoopTable) -> Option<SymplecticData> {
    let center = l.center().to_vec();
    center
        .into_iter()
        .filter(|&z| z != 0 && l.mul(z, z) == 0)
        .find_map(|z| symplectic_analyze_with(l, z))
}

/// Code loop test, computed both as "symplectic and Moufang" and as
/// "Moufang with at most two squares"; the two must agree. The trivial loop
/// is not a code loop.
pub fn is_code_loop(l: &LoopTable) -> bool {
    if l.order() < 2 || !l.is_moufang() {
        return false;
    }
    let symplectic = symplectic_analyze(l).is_some();
    let few_squares = l.squares().len() <= 2;
    assert_eq!(
        symplectic,
        few_squares,
        "code loop criteria disagree on a loop of order {}",
        l.order()
    );
    symplectic
}

/// The power map of a loop in the builder's labelling: `(v, a)` has index
/// `2v + a` and `z = 1`.
pub fn canonical_power_map(l: &LoopTable, dim: u32) -> Result<PowerMap, CodeLoopError> {
    if l.order() != 2usize << dim {
        return Err(CodeLoopError::DimensionMismatch);
    }
    PowerMap::from_fn(dim, |v| l.mul(2 * v as usize, 2 * v as usize) == 1)
}

fn canonical_maps_match(l: &LoopTable, p: &PowerMap) -> bool {
    let dim = p.dim();
    let k = 1u32 << dim;
    let e = |v: u32| 2 * v as usize;
    (0..k).all(|u| {
        (l.mul(e(u), e(u)) == 1) == p.eval(u)
            && (0..k).all(|v| {
                (l.commutator(e(u), e(v)) == 1) == derived_form(p, &[u, v])
                    && (0..k).all(|w| (l.associator(e(u), e(v), e(w)) == 1) == derived_form(p, &[u, v, w]))
            })
    })
}

/// The code loop `(V, F, P)` on `V × F`, with `(v, a)` at index `2v + a`.
///
/// The factor set is read off the algebraic normal form of `P`: linear
/// terms `v_i` give `u_i v_i`, quadratic terms `v_i v_j` (`i < j`) give
/// `u_i v_j`, and cubic terms `v_i v_j v_l` give
/// `u_i u_j v_l + u_i u_l v_j + u_j u_l v_i`, so that `η(v, v) = P(v)`.
/// The result is verified: Moufang, with squares, commutators and
/// associators equal to `P`, `P₂` and `P₃`.
pub fn build_code_loop(p: &PowerMap) -> Result<LoopTable, CodeLoopError> {
    let dim = p.dim();
    if dim > MAX_BUILD_DIM {
        return Err(CodeLoopError::DimensionTooLarge(dim));
    }
    let d = cdeg(p);
    if d > 3 {
        return Err(CodeLoopError::CdegTooHigh(d));
    }
    let monomials: Vec<u32> = p
        .anf()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(m, _)| m as u32)
        .collect();
    let bit = |x: u32, i: u32| x >> i & 1;
    let eta = |u: u32, v: u32| -> u32 {
        let mut acc = 0;
        for &m in &monomials {
            let idx: Vec<u32> = (0..dim).filter(|&i| m >> i & 1 == 1).collect();
            acc ^= match idx[..] {
                [i] => bit(u, i) & bit(v, i),
                [i, j] => bit(u, i) & bit(v, j),
                [i, j, l] => {
                    (bit(u, i) & bit(u, j) & bit(v, l))
                        ^ (bit(u, i) & bit(u, l) & bit(v, j))
                        ^ (bit(u, j) & bit(u, l) & bit(v, i))
                }
                _ => 0,
            };
        }
        acc
    };
    let n = 2usize << dim;
    let table = LoopTable::from_fn(n, |x, y| {
        let (u, a) = ((x >> 1) as u32, (x & 1) as u32);
        let (v, b) = ((y >> 1) as u32, (y & 1) as u32);
        (2 * (u ^ v) + (a ^ b ^ eta(u, v))) as usize
    })?;
    if !table.is_moufang() {
        return Err(CodeLoopError::ConstructionFailed("result is not Moufang".into()));
    }
    if !canonical_maps_match(&table, p) {
        return Err(CodeLoopError::ConstructionFailed(
            "power, commutator or associator map mismatch".into(),
        ));
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaKind {
    /// `G/S ≅ C2`.
    Linear,
    /// `G/S ≅ V4`.
    Quadratic,
}

/// `P* − P` for one construction step with `h ∈ F`.
#[derive(Debug, Clone)]
pub struct PowerDelta {
    pub kind: DeltaKind,
    pub delta: PowerMap,
    /// The map the step should add: the indicator of `G∖S` for `C2`
    /// quotients, of the `α` coset for `V4` quotients.
    pub predicted: PowerMap,
    pub cdeg: u32,
    /// `S/F` as a set of vectors.
    pub subloop_vectors: Vec<u32>,
    /// `Rad` of the second derived form of the delta, as a set of vectors.
    pub form_radical: Vec<u32>,
}

impl PowerDelta {
    pub fn matches_formula(&self) -> bool {
        self.delta == self.predicted
    }

    /// Linear for `C2`; for `V4`, degree exactly 2 with `Rad = S/F` of
    /// codimension 2.
    pub fn classification_holds(&self) -> bool {
        match self.kind {
            DeltaKind::Linear => self.cdeg <= 1,
            DeltaKind::Quadratic => {
                let codim = self.delta.dim() - self.subloop_vectors.len().trailing_zeros();
                self.cdeg == 2 && self.form_radical == self.subloop_vectors && codim == 2
            }
        }
    }
}

/// Compares the power maps of `l` and `lstar = p.apply(l)` relative to
/// `F = {1, h}`.
pub fn power_delta(l: &LoopTable, lstar: &LoopTable, p: &Params) -> Result<PowerDelta, CodeLoopError> {
    if !l.is_moufang() {
        return Err(CodeLoopError::NotCodeLoop);
    }
    let h = p.h();
    let data = symplectic_analyze_with(l, h).ok_or(CodeLoopError::NotApplicable)?;
    if lstar.order() != l.order() {
        return Err(CodeLoopError::DimensionMismatch);
    }
    let dim = data.dim();
    let star = PowerMap::from_fn(dim, |v| {
        let r = data.reps[v as usize];
        lstar.mul(r, r) == h
    })?;
    let delta = star.add(&data.power)?;
    let s = p.subloop();
    let index = l.order() / s.len();
    let (kind, marked) = match (index, p) {
        (2, _) => (DeltaKind::Linear, s.complement()),
        (4, Params::Dihedral(d)) => (DeltaKind::Quadratic, d.alpha()),
        _ => {
            return Err(CodeLoopError::ConstructionFailed(format!(
                "unexpected quotient of order {index}"
            )))
        }
    };
    let predicted = PowerMap::from_fn(dim, |v| marked.contains(data.reps[v as usize]))?;
    let subloop_vectors = data.vectors_of(s);
    let form_radical = span(&second_form_radical(&delta));
    Ok(PowerDelta {
        kind,
        cdeg: cdeg(&delta),
        delta,
        predicted,
        subloop_vectors,
        form_radical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn klein_group_is_symplectic_with_zero_power_map() {
        let v4 = catalog::elementary_abelian(2);
        let d = symplectic_analyze(&v4).unwrap();
        assert!(d.power.is_zero());
        assert!(is_code_loop(&v4));
    }

    #[test]
    fn s3_is_not_symplectic() {
        assert!(symplectic_analyze(&catalog::dihedral(3)).is_none());
        assert!(!is_code_loop(&catalog::dihedral(3)));
        assert!(!is_code_loop(&catalog::cyclic(1)));
    }

    #[test]
    fn small_builds() {
        let zero = build_code_loop(&PowerMap::zero(2).unwrap()).unwrap();
        assert!(zero.is_isomorphic(&catalog::elementary_abelian(3)).is_some());
        let one = build_code_loop(&PowerMap::from_fn(1, |v| v == 1).unwrap()).unwrap();
        assert!(one.is_isomorphic(&catalog::cyclic(4)).is_some());
    }

    #[test]
    fn every_dim3_map_builds() {
        for mask in 0u64..256 {
            if mask & 1 == 1 {
                continue;
            }
            let p = PowerMap::from_mask(3, mask).unwrap();
            let l = build_code_loop(&p).unwrap();
            assert_eq!(canonical_power_map(&l, 3).unwrap(), p);
            assert!(is_code_loop(&l));
        }
    }

    #[test]
    fn order_16_round_trips() {
        let q8 = catalog::dicyclic(2);
        let data = crate::chein::AntiAutomorphismData::inversion(&q8, 2).unwrap();
        let octonions = crate::chein::mg_theta_h(&data).unwrap();
        let md8 = crate::chein::mg2(&catalog::dihedral(4)).unwrap().table;
        for m in [octonions, md8] {
            let d = symplectic_analyze(&m).unwrap();
            assert_eq!(cdeg(&d.power), 3);
            assert!(d.maps_match_power());
            assert!(d.associator_form().radical().is_empty());
            let rebuilt = build_code_loop(&d.power).unwrap();
            assert!(rebuilt.is_isomorphic(&m).is_some());
        }
    }
}
