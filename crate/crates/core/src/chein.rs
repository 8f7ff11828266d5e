//! Chein doubles `M(G, 2)` and the twisted doubles `M(G, θ, h)`.
//!
//! Elements of `G` keep their indices `0..|G|`; the barred copy of `x` is
//! `x + |G|`.

use thiserror::Error;

use crate::{ElemSet, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheinError {
    #[error("base table is not a group")]
    NotAGroup,
    #[error("invalid antiautomorphism data: {0}")]
    InvalidData(String),
}

/// `M(G, 2)` together with its base group.
#[derive(Debug, Clone)]
pub struct CheinDouble {
    pub base: LoopTable,
    pub table: LoopTable,
}

impl CheinDouble {
    pub fn embed(&self, x: usize) -> usize {
        x
    }

    pub fn bar(&self, x: usize) -> usize {
        x + self.base.order()
    }
}

fn double_with(
    g: &LoopTable,
    bar_left: impl Fn(usize, usize) -> usize,
    bar_both: impl Fn(usize, usize) -> usize,
) -> LoopTable {
    let n = g.order();
    LoopTable::from_fn(2 * n, |a, b| match (a < n, b < n) {
        (true, true) => g.mul(a, b),
        (true, false) => n + g.mul(b - n, a),
        (false, true) => n + bar_left(a - n, b),
        (false, false) => bar_both(a - n, b - n),
    })
    .expect("Chein double is a loop")
}

/// `x∘y = xy`, `x∘ȳ = (yx)‾`, `x̄∘y = (xy⁻¹)‾`, `x̄∘ȳ = y⁻¹x`.
pub fn mg2(g: &LoopTable) -> Result<CheinDouble, CheinError> {
    if !g.is_associative() {
        return Err(CheinError::NotAGroup);
    }
    let table = double_with(g, |x, y| g.mul(x, g.inv(y)), |x, y| g.mul(g.inv(y), x));
    Ok(CheinDouble { base: g.clone(), table })
}

/// An involutive antiautomorphism `θ` of a group and a central `h ≠ 1`
/// with `θ(h) = h` and `x·θ(x)` central for every `x`.
#[derive(Debug, Clone)]
pub struct AntiAutomorphismData {
    base: LoopTable,
    theta: Vec<usize>,
    h: usize,
}

impl AntiAutomorphismData {
    pub fn new(base: &LoopTable, theta: Vec<usize>, h: usize) -> Result<Self, CheinError> {
        let n = base.order();
        let bad = |m: &str| Err(CheinError::InvalidData(m.to_string()));
        if !base.is_associative() {
            return Err(CheinError::NotAGroup);
        }
        if theta.len() != n || theta.iter().any(|&t| t >= n) {
            return bad("theta is not a map on the group");
        }
        if h == 0 || h >= n {
            return bad("h must be a nonidentity element");
        }
        let center = base.center();
        if !center.contains(h) {
            return bad("h is not central");
        }
        if (0..n).any(|x| theta[theta[x]] != x) {
            return bad("theta is not an involution");
        }
        if (0..n).any(|x| (0..n).any(|y| theta[base.mul(x, y)] != base.mul(theta[y], theta[x]))) {
            return bad("theta is not an antiautomorphism");
        }
        if theta[h] != h {
            return bad("theta does not fix h");
        }
        if (0..n).any(|x| !center.contains(base.mul(x, theta[x]))) {
            return bad("x·theta(x) is not central");
        }
        Ok(AntiAutomorphismData {
            base: base.clone(),
            theta,
            h,
        })
    }

    /// `θ` = inversion; valid exactly when `h` is a central involution.
    pub fn inversion(base: &LoopTable, h: usize) -> Result<Self, CheinError> {
        let theta = (0..base.order()).map(|x| base.inv(x)).collect();
        Self::new(base, theta, h)
    }

    pub fn base(&self) -> &LoopTable {
        &self.base
    }

    pub fn theta(&self) -> &[usize] {
        &self.theta
    }

    pub fn h(&self) -> usize {
        self.h
    }
}

/// `M(G, θ, h)`: as `M(G, 2)` except `x̄∘y = (xθ(y))‾` and `x̄∘ȳ = θ(y)xh`.
/// The result is checked to be Moufang.
pub fn mg_theta_h(d: &AntiAutomorphismData) -> Result<LoopTable, CheinError> {
    let g = &d.base;
    let table = double_with(g, |x, y| g.mul(x, d.theta[y]), |x, y| g.mul(g.mul(d.theta[y], x), d.h));
    if !table.is_moufang() {
        return Err(CheinError::InvalidData("result is not Moufang".into()));
    }
    Ok(table)
}

/// Central involutions of a group, the valid `h` for `θ` = inversion.
pub fn central_involutions(g: &LoopTable) -> Vec<usize> {
    g.center().iter().filter(|&x| x != 0 && g.mul(x, x) == 0).collect()
}

/// Looks for an index-2 subgroup `G` such that `L` is `M(G, 2)`: for some
/// `u` outside `G`, with `x̄ = x·u`, all four product rules must hold.
/// Returns the subgroup's table (members in ascending order).
pub fn is_chein_double(l: &LoopTable) -> Option<LoopTable> {
    let n = l.order();
    if !n.is_multiple_of(2) || n < 2 {
        return None;
    }
    let half = n / 2;
    for s in l.enumerate_subloops() {
        if s.len() != half {
            continue;
        }
        if let Some(g) = check_double_over(l, &s) {
            return Some(g);
        }
    }
    None
}

fn check_double_over(l: &LoopTable, s: &ElemSet) -> Option<LoopTable> {
    let g = s.to_vec();
    let sub = l.restrict(s).ok()?;
    if !sub.is_associative() {
        return None;
    }
    let inv = |x: usize| l.inv(x);
    s.complement()
        .iter()
        .any(|u| {
            let bar = |x: usize| l.mul(x, u);
            g.iter().all(|&x| {
                g.iter().all(|&y| {
                    l.mul(x, bar(y)) == bar(l.mul(y, x))
                        && l.mul(bar(x), y) == bar(l.mul(x, inv(y)))
                        && l.mul(bar(x), bar(y)) == l.mul(inv(y), x)
                })
            })
        })
        .then_some(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn abelian_double_is_generalized_dihedral() {
        let d = mg2(&catalog::cyclic(4)).unwrap();
        assert!(d.table.is_associative());
        assert!(d.table.is_isomorphic(&catalog::dihedral(4)).is_some());
        let v4 = catalog::elementary_abelian(2);
        let d = mg2(&v4).unwrap();
        assert!(d.table.is_isomorphic(&catalog::elementary_abelian(3)).is_some());
    }

    #[test]
    fn d8_double_is_nonassociative_moufang() {
        let d = mg2(&catalog::dihedral(4)).unwrap();
        assert_eq!(d.table.order(), 16);
        assert!(d.table.is_moufang());
        assert!(!d.table.is_associative());
        for x in 0..8 {
            assert_eq!(d.table.mul(d.bar(x), d.bar(x)), 0);
        }
    }

    #[test]
    fn non_group_rejected() {
        let m = mg2(&catalog::dihedral(3)).unwrap().table;
        assert_eq!(mg2(&m).unwrap_err(), CheinError::NotAGroup);
    }

    #[test]
    fn detector_round_trip() {
        let d8 = catalog::dihedral(4);
        let g = is_chein_double(&mg2(&d8).unwrap().table).unwrap();
        assert!(g.is_isomorphic(&d8).is_some());
        assert!(is_chein_double(&catalog::cyclic(4)).is_none());
    }
}
