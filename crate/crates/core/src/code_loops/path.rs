//! Connecting code loops whose power maps differ by a quadratic form.

use serde::Serialize;

use super::{canonical_power_map, cdeg, dot, solve_homogeneous, span, CodeLoopError, PowerMap};
use crate::constructions::{CyclicParams, DihedralParams, Params};
use crate::{ElemSet, LoopTable};

/// One construction step on a code loop in the builder's labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CodeStep {
    /// Cyclic construction with `S/F = ker λ`; adds `λ` to the power map.
    Cyclic { functional: u32 },
    /// Dihedral construction on the hyperbolic pair `(u, v)`, with
    /// `S/F = ker ℓ ∩ ker m`, `ℓ = B(·, v)`, `m = B(·, u)`, `β ∋ u`,
    /// `γ ∋ v`; adds `ℓ·m` (the indicator of `α`) to the power map.
    Dihedral { u: u32, v: u32, ell: u32, m: u32 },
}

impl CodeStep {
    pub fn delta(&self, dim: u32) -> PowerMap {
        PowerMap::from_fn(dim, |x| match *self {
            CodeStep::Cyclic { functional } => dot(functional, x),
            CodeStep::Dihedral { ell, m, .. } => dot(ell, x) && dot(m, x),
        })
        .expect("dimension already validated")
    }

    /// `S/F` as a set of vectors.
    pub fn subspace(&self, dim: u32) -> Vec<u32> {
        let constraints = match *self {
            CodeStep::Cyclic { functional } => vec![functional],
            CodeStep::Dihedral { ell, m, .. } => vec![ell, m],
        };
        span(&solve_homogeneous(dim, &constraints))
    }
}

/// Steps taking the code loop with power map `p` to one with power map `r`:
/// one dihedral step per hyperbolic plane of `(r − p)₂` (greedy symplectic
/// basis, least index first), then at most one cyclic step for the
/// remaining linear form.
pub fn plan_code_path(p: &PowerMap, r: &PowerMap) -> Result<Vec<CodeStep>, CodeLoopError> {
    let d = p.add(r)?;
    let deg = cdeg(&d);
    if deg > 2 {
        return Err(CodeLoopError::DeltaNotQuadratic(deg));
    }
    let dim = d.dim();
    let b = |x: u32, y: u32| d.eval(x) ^ d.eval(y) ^ d.eval(x ^ y);
    let functional = |y: u32| (0..dim).filter(|&j| b(1 << j, y)).fold(0u32, |m, j| m | 1 << j);

    let mut rest: Vec<u32> = (0..dim).map(|i| 1 << i).collect();
    let mut steps = Vec::new();
    let mut covered = PowerMap::zero(dim)?;
    loop {
        let pair = rest
            .iter()
            .enumerate()
            .find_map(|(iu, &u)| rest.iter().enumerate().find(|&(_, &v)| b(u, v)).map(|(iv, _)| (iu, iv)));
        let Some((iu, iv)) = pair else { break };
        let (u, v) = (rest[iu], rest[iv]);
        rest.retain(|&w| w != u && w != v);
        for w in rest.iter_mut() {
            let mut nw = *w;
            if b(*w, v) {
                nw ^= u;
            }
            if b(*w, u) {
                nw ^= v;
            }
            *w = nw;
        }
        let step = CodeStep::Dihedral {
            u,
            v,
            ell: functional(v),
            m: functional(u),
        };
        covered = covered.add(&step.delta(dim))?;
        steps.push(step);
    }
    let residual = d.add(&covered)?;
    if cdeg(&residual) > 1 {
        return Err(CodeLoopError::ConstructionFailed("residual form is not linear".into()));
    }
    let lambda = (0..dim)
        .filter(|&j| residual.eval(1 << j))
        .fold(0u32, |m, j| m | 1 << j);
    if lambda != 0 {
        steps.push(CodeStep::Cyclic { functional: lambda });
    }
    Ok(steps)
}

/// Applies one step to a code loop in the builder's labelling (`z = 1`).
pub fn execute_step(l: &LoopTable, dim: u32, step: &CodeStep) -> Result<LoopTable, CodeLoopError> {
    let n = l.order();
    if n != 2usize << dim {
        return Err(CodeLoopError::DimensionMismatch);
    }
    let w = step.subspace(dim);
    let s = ElemSet::from_iter_n(n, w.iter().flat_map(|&v| [2 * v as usize, 2 * v as usize + 1]));
    let params = match *step {
        CodeStep::Cyclic { functional } => {
            let x = (0..1u32 << dim)
                .find(|&x| dot(functional, x))
                .ok_or_else(|| CodeLoopError::ConstructionFailed("zero functional".into()))?;
            Params::Cyclic(CyclicParams::new(l, &s, 2 * x as usize, 1)?)
        }
        CodeStep::Dihedral { u, v, .. } => {
            Params::Dihedral(DihedralParams::new(l, &s, 2 * u as usize, 2 * v as usize, 1)?)
        }
    };
    Ok(params.apply(l)?)
}

/// Runs the steps in order and returns every intermediate loop.
pub fn execute_code_path(start: &LoopTable, dim: u32, steps: &[CodeStep]) -> Result<Vec<LoopTable>, CodeLoopError> {
    let mut out: Vec<LoopTable> = Vec::with_capacity(steps.len());
    for step in steps {
        let cur = out.last().unwrap_or(start);
        let next = execute_step(cur, dim, step)?;
        let expected = canonical_power_map(cur, dim)?.add(&step.delta(dim))?;
        if canonical_power_map(&next, dim)? != expected {
            return Err(CodeLoopError::ConstructionFailed(
                "step changed the power map unexpectedly".into(),
            ));
        }
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_loops::build_code_loop;

    #[test]
    fn same_map_gives_empty_path() {
        let p = PowerMap::from_anf(3, &[0b111]).unwrap();
        assert!(plan_code_path(&p, &p).unwrap().is_empty());
    }

    #[test]
    fn linear_delta_is_one_cyclic_step() {
        let p = PowerMap::zero(3).unwrap();
        let r = PowerMap::from_fn(3, |v| dot(0b011, v)).unwrap();
        let steps = plan_code_path(&p, &r).unwrap();
        assert_eq!(steps, vec![CodeStep::Cyclic { functional: 0b011 }]);
        assert_eq!(steps[0].subspace(3).len(), 4);
    }

    #[test]
    fn hyperbolic_plane_is_one_dihedral_step() {
        let p = PowerMap::from_anf(3, &[0b111]).unwrap();
        let r = p.add(&PowerMap::from_anf(3, &[0b011]).unwrap()).unwrap();
        let steps = plan_code_path(&p, &r).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(matches!(steps[0], CodeStep::Dihedral { .. }));
        let start = build_code_loop(&p).unwrap();
        let path = execute_code_path(&start, 3, &steps).unwrap();
        assert_eq!(canonical_power_map(path.last().unwrap(), 3).unwrap(), r);
    }

    #[test]
    fn cubic_delta_rejected() {
        let p = PowerMap::zero(3).unwrap();
        let r = PowerMap::from_anf(3, &[0b111]).unwrap();
        assert_eq!(plan_code_path(&p, &r), Err(CodeLoopError::DeltaNotQuadratic(3)));
    }
}
