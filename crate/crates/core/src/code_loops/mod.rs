//! Code loops over `F = GF(2)`: power maps, derived forms, combinatorial
//! degree, radicals, symplectic analysis, an explicit code-loop builder and
//! paths between code loops through the two constructions.
//!
//! Vectors of `F^k` are `k`-bit masks; addition is XOR.

mod forms;
mod path;
mod symplectic;

pub use forms::TrilinearForm;
pub use path::{execute_code_path, execute_step, plan_code_path, CodeStep};
pub use symplectic::{
    build_code_loop, canonical_power_map, is_code_loop, power_delta, symplectic_analyze, symplectic_analyze_with,
    DeltaKind, PowerDelta, SymplecticData,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::LoopError;

/// Largest dimension accepted by the builder and by form equivalence.
pub const MAX_BUILD_DIM: u32 = 5;
/// Largest dimension a [`PowerMap`] may have.
pub const MAX_DIM: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeLoopError {
    #[error("combinatorial degree {0} exceeds 3")]
    CdegTooHigh(u32),
    #[error("P* - P has combinatorial degree {0} > 2")]
    DeltaNotQuadratic(u32),
    #[error("h is not in a central subloop of order 2 with elementary abelian quotient")]
    NotApplicable,
    #[error("dimension {0} not supported here")]
    DimensionTooLarge(u32),
    #[error("power maps live on spaces of different dimension")]
    DimensionMismatch,
    #[error("code loop construction failed: {0}")]
    ConstructionFailed(String),
    #[error("power map parse error: {0}")]
    Parse(String),
    #[error("not a code loop")]
    NotCodeLoop,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// `F^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitSpace {
    dim: u32,
}

impl BitSpace {
    pub fn new(dim: u32) -> Result<Self, CodeLoopError> {
        if dim > MAX_DIM {
            return Err(CodeLoopError::DimensionTooLarge(dim));
        }
        Ok(BitSpace { dim })
    }

    pub fn dim(self) -> u32 {
        self.dim
    }

    pub fn size(self) -> usize {
        1 << self.dim
    }

    pub fn vectors(self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.dim)
    }

    pub fn unit(self, i: u32) -> u32 {
        1 << i
    }
}

/// `λ(x) = ⟨mask, x⟩`.
pub fn dot(mask: u32, x: u32) -> bool {
    (mask & x).count_ones() % 2 == 1
}

/// Basis of `{v : ⟨c, v⟩ = 0 for every c}` in `F^dim`, in reduced form.
pub fn solve_homogeneous(dim: u32, constraints: &[u32]) -> Vec<u32> {
    let mut rows: Vec<u32> = Vec::new();
    let mut pivots: Vec<u32> = Vec::new();
    for &c in constraints {
        let mut r = c;
        for (&row, &p) in rows.iter().zip(&pivots) {
            if r & (1 << p) != 0 {
                r ^= row;
            }
        }
        if r == 0 {
            continue;
        }
        let p = r.trailing_zeros();
        for row in rows.iter_mut() {
            if *row & (1 << p) != 0 {
                *row ^= r;
            }
        }
        rows.push(r);
        pivots.push(p);
    }
    (0..dim)
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut v = 1u32 << f;
            for (&row, &p) in rows.iter().zip(&pivots) {
                if row & (1 << f) != 0 {
                    v |= 1 << p;
                }
            }
            v
        })
        .collect()
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[u32]) -> u32 {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut r = v;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

/// All vectors spanned by `basis`.
pub fn span(basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &b in basis {
        if out.contains(&b) {
            continue;
        }
        let more: Vec<u32> = out.iter().map(|&v| v ^ b).collect();
        out.extend(more);
    }
    out.sort_unstable();
    out
}

/// A map `P: F^k → F` with `P(0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerMap {
    space: BitSpace,
    values: Vec<bool>,
}

impl PowerMap {
    pub fn new(dim: u32, values: Vec<bool>) -> Result<Self, CodeLoopError> {
        let space = BitSpace::new(dim)?;
        if values.len() != space.size() {
            return Err(CodeLoopError::Parse(format!("expected {} values", space.size())));
        }
        if values[0] {
            return Err(CodeLoopError::Parse("P(0) must be 0".into()));
        }
        Ok(PowerMap { space, values })
    }

    pub fn from_fn(dim: u32, f: impl Fn(u32) -> bool) -> Result<Self, CodeLoopError> {
        let space = BitSpace::new(dim)?;
        Self::new(dim, space.vectors().map(f).collect())
    }

    pub fn zero(dim: u32) -> Result<Self, CodeLoopError> {
        Self::from_fn(dim, |_| false)
    }

    /// The map whose values are the bits of `mask` (bit `v` is `P(v)`).
    pub fn from_mask(dim: u32, mask: u64) -> Result<Self, CodeLoopError> {
        if dim > 6 {
            return Err(CodeLoopError::DimensionTooLarge(dim));
        }
        Self::from_fn(dim, |v| mask >> v & 1 == 1)
    }

    /// Builds the map from its algebraic normal form: the set of monomials,
    /// each a mask of the variables it contains.
    pub fn from_anf(dim: u32, monomials: &[u32]) -> Result<Self, CodeLoopError> {
        Self::from_fn(dim, |v| {
            monomials.iter().filter(|&&m| m != 0 && v & m == m).count() % 2 == 1
        })
    }

    pub fn space(&self) -> BitSpace {
        self.space
    }

    pub fn dim(&self) -> u32 {
        self.space.dim
    }

    pub fn eval(&self, v: u32) -> bool {
        self.values[v as usize]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&b| !b)
    }

    /// `P + R` (equivalently `P − R`).
    pub fn add(&self, other: &PowerMap) -> Result<PowerMap, CodeLoopError> {
        if self.space != other.space {
            return Err(CodeLoopError::DimensionMismatch);
        }
        Ok(PowerMap {
            space: self.space,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Coefficients of the algebraic normal form, indexed by monomial mask.
    pub fn anf(&self) -> Vec<bool> {
        let mut a = self.values.clone();
        for i in 0..self.dim() {
            let bit = 1usize << i;
            for v in 0..a.len() {
                if v & bit != 0 {
                    a[v] ^= a[v ^ bit];
                }
            }
        }
        a
    }

    pub fn to_text(&self) -> String {
        let bits: String = self.values.iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("{}\n{}\n", self.dim(), bits)
    }
}

impl fmt::Display for PowerMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for PowerMap {
    type Err = CodeLoopError;

    /// Line 1 is `k`, line 2 the `2^k` bits of `P` in vector order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| CodeLoopError::Parse(m.to_string());
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let dim: u32 = lines
            .next()
            .ok_or_else(|| bad("missing dimension"))?
            .trim()
            .parse()
            .map_err(|_| bad("bad dimension"))?;
        let bits = lines.next().ok_or_else(|| bad("missing values"))?.trim();
        if lines.next().is_some() {
            return Err(bad("trailing content"));
        }
        let values = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad("values must be 0 or 1")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PowerMap::new(dim, values)
    }
}

/// `f_n(v_1, …, v_n)`: the sum of `P` over all nonempty subset sums.
pub fn derived_form(p: &PowerMap, vs: &[u32]) -> bool {
    assert!(vs.len() < 24, "too many arguments");
    let mut acc = false;
    for subset in 1u32..(1 << vs.len()) {
        let mut s = 0;
        for (i, &v) in vs.iter().enumerate() {
            if subset >> i & 1 == 1 {
                s ^= v;
            }
        }
        acc ^= p.eval(s);
    }
    acc
}

/// Combinatorial degree, i.e. the degree of the algebraic normal form.
pub fn cdeg(p: &PowerMap) -> u32 {
    p.anf()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(m, _)| m.count_ones())
        .max()
        .unwrap_or(0)
}

/// Basis of `Rad P₃`.
pub fn radical(p: &PowerMap) -> Result<Vec<u32>, CodeLoopError> {
    Ok(TrilinearForm::from_power_map(p)?.radical())
}
