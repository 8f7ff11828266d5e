//! Extensions `(Q, A, φ, η)` of a cyclic group `A = Z_k` by a loop `Q`,
//! factor-set classification, and the factor sets read off a loop through a
//! transversal of `⟨h⟩`.
//!
//! The extension element `(q, a)` has index `q·k + a`.

use serde::Serialize;
use thiserror::Error;

use crate::constructions::{ConstructionError, Params};
use crate::loops::{CosetPartition, ElemSet, IsoMap, LoopError, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorSetError {
    #[error("factor set does not give a loop (η(x,1) = η(1,x) = 0 fails)")]
    NotALoop,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("factor sets are over different actions")]
    ActionMismatch,
    #[error("factor set is not Moufang")]
    NotMoufang,
    #[error("factor set is not associative")]
    NotAssociative,
    #[error(transparent)]
    Loop(#[from] LoopError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, FactorSetError> {
    Err(FactorSetError::InvalidParams(msg.into()))
}

/// `Q` acting on `Z_k` by multiplication with units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    quotient: LoopTable,
    k: u32,
    multipliers: Vec<u32>,
}

impl Action {
    /// Checks that every multiplier is a unit and that `q ↦ multiplier` is a
    /// homomorphism.
    pub fn new(quotient: LoopTable, k: u32, multipliers: Vec<u32>) -> Result<Self, FactorSetError> {
        let n = quotient.order();
        if k == 0 {
            return invalid("coefficient group must be nontrivial or Z_1");
        }
        if multipliers.len() != n {
            return invalid("one multiplier per quotient element");
        }
        if multipliers.iter().any(|&m| m >= k.max(2) || gcd(m, k) != 1) {
            return invalid("multipliers must be units mod k");
        }
        let mul = |a: u32, b: u32| ((a as u64 * b as u64) % k as u64) as u32;
        for x in 0..n {
            for y in 0..n {
                if multipliers[quotient.mul(x, y)] % k != mul(multipliers[x], multipliers[y]) % k {
                    return invalid("action is not a homomorphism");
                }
            }
        }
        Ok(Action {
            quotient,
            k,
            multipliers,
        })
    }

    pub fn trivial(quotient: LoopTable, k: u32) -> Self {
        let n = quotient.order();
        Action {
            quotient,
            k,
            multipliers: vec![1 % k.max(1); n],
        }
    }

    pub fn quotient(&self) -> &LoopTable {
        &self.quotient
    }

    pub fn coefficient_order(&self) -> u32 {
        self.k
    }

    pub fn multiplier(&self, q: usize) -> u32 {
        self.multipliers[q]
    }

    /// `a^{φ(q)}`.
    pub fn act(&self, a: u32, q: usize) -> u32 {
        ((a as u64 * self.multipliers[q] as u64) % self.k as u64) as u32
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `η: Q×Q → Z_k` over an [`Action`], stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    action: Action,
    eta: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FactorSetClass {
    NotFactorSet,
    FactorSet,
    MoufangFactorSet,
    AssociativeFactorSet,
}

impl FactorSet {
    /// Any map with values in `0..k`; the loop condition is not required here.
    pub fn new(action: Action, eta: Vec<u32>) -> Result<Self, FactorSetError> {
        let n = action.quotient.order();
        if eta.len() != n * n {
            return invalid("η must have |Q|² entries");
        }
        if eta.iter().any(|&v| v >= action.k) {
            return invalid("η value out of range");
        }
        Ok(FactorSet { action, eta })
    }

    pub fn from_fn(action: Action, f: impl Fn(usize, usize) -> u32) -> Self {
        let n = action.quotient.order();
        let k = action.k;
        let eta = (0..n * n).map(|c| f(c / n, c % n) % k).collect();
        FactorSet { action, eta }
    }

    pub fn zero(action: Action) -> Self {
        Self::from_fn(action, |_, _| 0)
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn quotient(&self) -> &LoopTable {
        &self.action.quotient
    }

    pub fn coefficient_order(&self) -> u32 {
        self.action.k
    }

    pub fn eta(&self, x: usize, y: usize) -> u32 {
        self.eta[x * self.action.quotient.order() + y]
    }

    pub fn values(&self) -> &[u32] {
        &self.eta
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.action.k as u64) as u32
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.action.k - b % self.action.k)
    }

    pub fn sum(&self, other: &FactorSet) -> Result<FactorSet, FactorSetError> {
        if self.action != other.action {
            return Err(FactorSetError::ActionMismatch);
        }
        let eta = self.eta.iter().zip(&other.eta).map(|(&a, &b)| self.add(a, b)).collect();
        Ok(FactorSet {
            action: self.action.clone(),
            eta,
        })
    }

    pub fn difference(&self, other: &FactorSet) -> Result<FactorSet, FactorSetError> {
        if self.action != other.action {
            return Err(FactorSetError::ActionMismatch);
        }
        let eta = self.eta.iter().zip(&other.eta).map(|(&a, &b)| self.sub(a, b)).collect();
        Ok(FactorSet {
            action: self.action.clone(),
            eta,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.eta.iter().all(|&v| v == 0)
    }

    /// The `c` with `η(x,1) = c` and `η(1,x) = c^{φ(x)}`, if one exists.
    pub fn loop_constant(&self) -> Option<u32> {
        let n = self.quotient().order();
        let c = self.eta(0, 0);
        let ok = (0..n).all(|x| self.eta(x, 0) == c && self.eta(0, x) == self.action.act(c, x));
        ok.then_some(c)
    }

    pub fn is_normalized(&self) -> bool {
        self.loop_constant() == Some(0)
    }

    /// The equivalent factor set with `c = 0`: `η'(x,y) = η(x,y) − c^{φ(y)}`.
    /// `(x, a) ↦ (x, a − c)` maps its extension onto the original one.
    pub fn normalized(&self) -> Option<FactorSet> {
        let c = self.loop_constant()?;
        let n = self.quotient().order();
        let eta = (0..n * n)
            .map(|i| self.sub(self.eta[i], self.action.act(c, i % n)))
            .collect();
        Some(FactorSet {
            action: self.action.clone(),
            eta,
        })
    }

    /// `η(x,y)^{φ(z)} + η(xy,z) = η(y,z) + η(x,yz)` for all triples.
    pub fn satisfies_associative(&self) -> bool {
        let q = self.quotient();
        let n = q.order();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = q.mul(x, y);
                (0..n).all(|z| {
                    let lhs = self.add(self.action.act(self.eta(x, y), z), self.eta(xy, z));
                    let rhs = self.add(self.eta(y, z), self.eta(x, q.mul(y, z)));
                    lhs == rhs
                })
            })
        })
    }

    /// `η(x,y)^{φ(xz)} + η(xy,x)^{φ(z)} + η(xy·x,z)
    ///  = η(x,z) + η(y,xz) + η(x,y·xz)` for all triples.
    pub fn satisfies_moufang(&self) -> bool {
        let q = self.quotient();
        let n = q.order();
        let act = |a, g| self.action.act(a, g);
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = q.mul(x, y);
                let xyx = q.mul(xy, x);
                (0..n).all(|z| {
                    let xz = q.mul(x, z);
                    let lhs = self.add(
                        self.add(act(self.eta(x, y), xz), act(self.eta(xy, x), z)),
                        self.eta(xyx, z),
                    );
                    let rhs = self.add(self.add(self.eta(x, z), self.eta(y, xz)), self.eta(x, q.mul(y, xz)));
                    lhs == rhs
                })
            })
        })
    }
}

/// Strongest label; a factor set with `c ≠ 0` is classified via its
/// normalization.
pub fn classify(fs: &FactorSet) -> FactorSetClass {
    let Some(fs) = fs.normalized() else {
        return FactorSetClass::NotFactorSet;
    };
    if fs.satisfies_associative() {
        FactorSetClass::AssociativeFactorSet
    } else if fs.satisfies_moufang() {
        FactorSetClass::MoufangFactorSet
    } else {
        FactorSetClass::FactorSet
    }
}

/// The loop `(x,a)(y,b) = (xy, a^{φ(y)} + b + η(x,y))` on `Q × Z_k`.
pub fn build_extension(fs: &FactorSet) -> Result<LoopTable, FactorSetError> {
    if !fs.is_normalized() {
        return Err(FactorSetError::NotALoop);
    }
    let q = fs.quotient();
    let k = fs.coefficient_order() as usize;
    let n = q.order() * k;
    if n > u16::MAX as usize {
        return Err(LoopError::TooLarge(n).into());
    }
    let mut cells = vec![0u16; n * n];
    for u in 0..n {
        let (x, a) = (u / k, (u % k) as u32);
        for v in 0..n {
            let (y, b) = (v / k, (v % k) as u32);
            let c = fs.add(fs.add(fs.action.act(a, y), b), fs.eta(x, y));
            cells[u * n + v] = (q.mul(x, y) * k + c as usize) as u16;
        }
    }
    Ok(LoopTable::from_cells_unchecked(n, cells))
}

/// `η(x, x⁻¹) = η(x⁻¹, x)^{φ(x⁻¹)}` for every `x`.
pub fn check_inverse_identity(fs: &FactorSet) -> Result<bool, FactorSetError> {
    if classify(fs) < FactorSetClass::MoufangFactorSet || !fs.is_normalized() {
        return Err(FactorSetError::NotMoufang);
    }
    let q = fs.quotient();
    Ok((0..q.order()).all(|x| {
        let xi = q.inv(x);
        fs.eta(x, xi) == fs.action.act(fs.eta(xi, x), xi)
    }))
}

fn check_pair(eta: &FactorSet, mu: &FactorSet) -> Result<(), FactorSetError> {
    if eta.action != mu.action {
        return Err(FactorSetError::ActionMismatch);
    }
    if !eta.is_normalized() || classify(eta) < FactorSetClass::MoufangFactorSet {
        return Err(FactorSetError::NotMoufang);
    }
    if !mu.is_normalized() || classify(mu) != FactorSetClass::AssociativeFactorSet {
        return Err(FactorSetError::NotAssociative);
    }
    Ok(())
}

/// `μ(x·yz, [x,y,z]) = 0` for all triples, associators taken in `Q`.
pub fn check_associator_preservation(eta: &FactorSet, mu: &FactorSet) -> Result<bool, FactorSetError> {
    check_pair(eta, mu)?;
    let q = eta.quotient();
    let n = q.order();
    Ok((0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| {
                let x_yz = q.mul(x, q.mul(y, z));
                mu.eta(x_yz, q.associator(x, y, z)) == 0
            })
        })
    }))
}

/// Brute force: builds both extensions and compares every associator.
pub fn associators_coincide(eta: &FactorSet, mu: &FactorSet) -> Result<bool, FactorSetError> {
    check_pair(eta, mu)?;
    let e1 = build_extension(eta)?;
    let e2 = build_extension(&eta.sum(mu)?)?;
    let n = e1.order();
    Ok((0..n).all(|x| (0..n).all(|y| (0..n).all(|z| e1.associator(x, y, z) == e2.associator(x, y, z)))))
}

/// Factor sets of a loop `L` and of its constructed loop relative to the
/// transversal of least coset elements of `A = ⟨h⟩`.
#[derive(Debug, Clone)]
pub struct DerivedFactorSets {
    /// `L ≅ (Q, A, φ, η)`.
    pub eta: FactorSet,
    /// `apply(p) ≅ (Q, A, φ, η*)`.
    pub eta_star: FactorSet,
    /// `η* − η`.
    pub mu: FactorSet,
    pub cosets: CosetPartition,
    /// `θ(q, a) = π(q)·h^a`, an isomorphism from both extensions onto
    /// `L` and `apply(p)` respectively.
    pub theta: IsoMap,
}

impl DerivedFactorSets {
    pub fn transversal(&self) -> Vec<usize> {
        self.cosets.representatives()
    }
}

/// Reads `η`, `η*` and `μ` off `L` and the tuple `p`. The action is trivial
/// for the cyclic construction and `a ↦ (−1)^r a` for the dihedral one.
pub fn derive_from_transversal(l: &LoopTable, p: &Params) -> Result<DerivedFactorSets, FactorSetError> {
    p.check(l).map_err(|e| match e {
        ConstructionError::InvalidParams(m) => FactorSetError::InvalidParams(m),
        other => FactorSetError::InvalidParams(other.to_string()),
    })?;
    let n = l.order();
    let h = p.h();
    let mut powers = vec![0usize];
    while let Some(&last) = powers.last() {
        let next = l.mul(last, h);
        if next == 0 {
            break;
        }
        powers.push(next);
    }
    let k = powers.len();
    let mut log = vec![usize::MAX; n];
    for (a, &x) in powers.iter().enumerate() {
        log[x] = a;
    }
    let a_set = ElemSet::from_iter_n(n, powers.iter().copied());
    let (q, cosets) = l.quotient(&a_set)?;
    let pi = cosets.representatives();
    let qn = q.order();

    let multipliers: Vec<u32> = (0..qn)
        .map(|c| match p {
            Params::Dihedral(d) if d.parity(pi[c]) == 1 => (k as u32 - 1).max(1) % k as u32,
            _ => 1 % k as u32,
        })
        .collect();
    let action = Action::new(q.clone(), k as u32, multipliers)?;

    let k64 = k as i64;
    let eta = FactorSet::from_fn(action.clone(), |x, y| {
        let lhs = l.mul(pi[x], pi[y]);
        let a = log[l.ldiv(pi[q.mul(x, y)], lhs)];
        debug_assert!(a != usize::MAX);
        a as u32
    });
    let mu = FactorSet::from_fn(action.clone(), |x, y| p.exponent(pi[x], pi[y]).rem_euclid(k64) as u32);
    let eta_star = eta.sum(&mu)?;

    let theta = IsoMap {
        map: (0..qn * k).map(|u| l.mul(pi[u / k], powers[u % k])).collect(),
    };
    Ok(DerivedFactorSets {
        eta,
        eta_star,
        mu,
        cosets,
        theta,
    })
}
