//! Small groups by name, a coset enumerator, and table files.
//!
//! Names: `c<n>`, `d<2n>` (with `d4 = v4` and `d6 = s3`), `q<4n>` (dicyclic;
//! generalized quaternion for powers of two), `a4`, `c2^<k>`,
//! `g16_gamma2c1`, and direct products joined by `x` such as `d8xc2`.
//! [`loop_by_name`] additionally accepts `mg2:<group>`.

mod presentation;
mod tbl;

pub use presentation::{group_from_presentation, group_with_generators, Presentation};
pub use tbl::{format_table, parse_table, read_table, write_table};

use thiserror::Error;

use crate::chein::{self, CheinError};
use crate::{LoopError, LoopTable};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("bad presentation: {0}")]
    BadPresentation(String),
    #[error("coset enumeration exceeded the bound {0}")]
    EnumerationOverflow(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Chein(#[from] CheinError),
}

pub fn cyclic(n: usize) -> LoopTable {
    LoopTable::from_fn(n, |x, y| (x + y) % n).expect("cyclic group")
}

/// Dihedral group of order `2n`; `a^i b^s` has index `i + n·s`.
pub fn dihedral(n: usize) -> LoopTable {
    LoopTable::from_fn(2 * n, |x, y| {
        let (i, s) = (x % n, x / n);
        let (j, t) = (y % n, y / n);
        let j = if s == 1 { (n - j) % n } else { j };
        (i + j) % n + n * (s ^ t)
    })
    .expect("dihedral group")
}

/// Dicyclic group of order `4n`: `a^{2n} = 1`, `b^2 = a^n`, `b a b^-1 = a^-1`;
/// `a^i b^s` has index `i + 2n·s`.
pub fn dicyclic(n: usize) -> LoopTable {
    let k = 2 * n;
    LoopTable::from_fn(2 * k, |x, y| {
        let (i, s) = (x % k, x / k);
        let (j, t) = (y % k, y / k);
        let j = if s == 1 { (k - j) % k } else { j };
        let extra = if s == 1 && t == 1 { n } else { 0 };
        (i + j + extra) % k + k * (s ^ t)
    })
    .expect("dicyclic group")
}

/// `(C2)^k` with XOR on bit masks.
pub fn elementary_abelian(k: u32) -> LoopTable {
    LoopTable::from_fn(1 << k, |x, y| x ^ y).expect("elementary abelian group")
}

/// Even permutations of four points in lexicographic order, composed
/// left to right.
pub fn alternating4() -> LoopTable {
    let mut perms: Vec<[usize; 4]> = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                    let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j)));
                    let odd = inversions.filter(|&(i, j)| p[i] > p[j]).count() % 2 == 1;
                    if distinct && !odd {
                        perms.push(p);
                    }
                }
            }
        }
    }
    let pos = |p: [usize; 4]| perms.iter().position(|&q| q == p).unwrap();
    LoopTable::from_fn(12, |x, y| {
        let (p, q) = (perms[x], perms[y]);
        pos([q[p[0]], q[p[1]], q[p[2]], q[p[3]]])
    })
    .expect("A4")
}

/// `⟨a, b | a^4, b^4, (ab)^2, [a^2, b]⟩`.
pub fn g16_gamma2c1_presentation() -> Presentation {
    Presentation::new(
        2,
        vec![
            vec![1, 1, 1, 1],
            vec![2, 2, 2, 2],
            vec![1, 2, 1, 2],
            vec![-1, -1, -2, 1, 1, 2],
        ],
        64,
    )
}

pub fn g16_gamma2c1() -> LoopTable {
    group_from_presentation(&g16_gamma2c1_presentation()).expect("presentation of order 16")
}

fn parse_num(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn single(name: &str) -> Result<LoopTable, CatalogError> {
    let unknown = || CatalogError::UnknownName(name.to_string());
    match name {
        "v4" => return Ok(dihedral(2)),
        "s3" => return Ok(dihedral(3)),
        "a4" => return Ok(alternating4()),
        "g16_gamma2c1" => return Ok(g16_gamma2c1()),
        _ => {}
    }
    if let Some(k) = name.strip_prefix("c2^") {
        let k = parse_num(k).filter(|&k| (1..=10).contains(&k)).ok_or_else(unknown)?;
        return Ok(elementary_abelian(k as u32));
    }
    let (head, num) = name.split_at(1.min(name.len()));
    let n = parse_num(num).ok_or_else(unknown)?;
    match head {
        "c" if (1..=4096).contains(&n) => Ok(cyclic(n)),
        "d" if n >= 4 && n % 2 == 0 && n <= 4096 => Ok(dihedral(n / 2)),
        "q" if n >= 8 && n % 4 == 0 && n <= 4096 => Ok(dicyclic(n / 4)),
        _ => Err(unknown()),
    }
}

/// A group from the catalog (see the module docs for the name syntax).
pub fn builtin(name: &str) -> Result<LoopTable, CatalogError> {
    let name = name.trim().to_ascii_lowercase();
    let mut factors = name.split('x');
    let first = single(factors.next().unwrap_or_default())?;
    factors.try_fold(first, |acc, f| {
        let t = single(f)?;
        if acc.order() * t.order() > u16::MAX as usize {
            return Err(CatalogError::Loop(LoopError::TooLarge(acc.order() * t.order())));
        }
        Ok(acc.direct_product(&t))
    })
}

/// [`builtin`], plus `mg2:<group>` for Chein doubles and `mgth:<group>:<h>`
/// for `M(G, ⁻¹, h)`.
pub fn loop_by_name(name: &str) -> Result<LoopTable, CatalogError> {
    let name = name.trim();
    if let Some(g) = name.strip_prefix("mg2:") {
        return Ok(chein::mg2(&builtin(g)?)?.table);
    }
    if let Some(rest) = name.strip_prefix("mgth:") {
        let (g, h) = rest
            .rsplit_once(':')
            .ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
        let h = parse_num(h).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
        let data = chein::AntiAutomorphismData::inversion(&builtin(g)?, h)?;
        return Ok(chein::mg_theta_h(&data)?);
    }
    builtin(name)
}

/// A named catalog member.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub table: LoopTable,
}

const GROUP_NAMES: &[&str] = &[
    "c1",
    "c2",
    "c3",
    "c4",
    "v4",
    "c5",
    "c6",
    "s3",
    "c7",
    "c8",
    "c2xc4",
    "c2^3",
    "d8",
    "q8",
    "c9",
    "c3xc3",
    "c10",
    "d10",
    "c11",
    "c12",
    "c2xc6",
    "d12",
    "q12",
    "a4",
    "c13",
    "c14",
    "d14",
    "c15",
    "c16",
    "c2xc8",
    "c4xc4",
    "c2xc2xc4",
    "c2^4",
    "d16",
    "q16",
    "d8xc2",
    "q8xc2",
    "g16_gamma2c1",
];

/// Names of the groups in [`generated_catalog`].
pub fn group_names() -> &'static [&'static str] {
    GROUP_NAMES
}

/// Groups of order at most `max_order`, followed by the Chein doubles
/// `M(G, 2)` of the nonabelian ones and `M(D8, ⁻¹, a²)` when they fit.
pub fn generated_catalog(max_order: usize) -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = GROUP_NAMES
        .iter()
        .map(|&n| CatalogEntry {
            name: n.to_string(),
            table: builtin(n).expect("catalog name"),
        })
        .filter(|e| e.table.order() <= max_order)
        .collect();
    let groups: Vec<CatalogEntry> = out.clone();
    for g in groups {
        if 2 * g.table.order() <= max_order && !g.table.is_commutative() {
            out.push(CatalogEntry {
                name: format!("mg2:{}", g.name),
                table: chein::mg2(&g.table).expect("group").table,
            });
        }
    }
    if max_order >= 16 {
        let d8 = dihedral(4);
        let data = chein::AntiAutomorphismData::inversion(&d8, 2).expect("a^2 is a central involution");
        if let Ok(t) = chein::mg_theta_h(&data) {
            out.push(CatalogEntry {
                name: "mgth:d8:2".into(),
                table: t,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(builtin("c2").unwrap().rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(builtin("d8xc2").unwrap().order(), 16);
        assert_eq!(builtin("c2^3").unwrap().order(), 8);
        assert!(builtin("d7").is_err());
        assert!(builtin("zz").is_err());
        assert!(builtin("").is_err());
        assert_eq!(loop_by_name("mgth:d8:2").unwrap().order(), 16);
        assert!(loop_by_name("mgth:d8:1").is_err());
        for e in generated_catalog(16) {
            assert_eq!(loop_by_name(&e.name).unwrap(), e.table);
        }
    }

    #[test]
    fn dihedral_and_quaternion_relations() {
        let d = dihedral(4);
        let (a, b) = (1, 4);
        assert_eq!(d.left_power(a, 4), 0);
        assert_eq!(d.mul(b, b), 0);
        assert_eq!(d.mul(d.mul(a, b), a), b);
        let q = dicyclic(2);
        let (a, b) = (1, 4);
        assert_eq!(q.left_power(a, 4), 0);
        assert_eq!(q.mul(b, b), 2);
        assert_eq!(q.mul(q.mul(b, a), q.inv(b)), q.inv(a));
    }

    #[test]
    fn small_presentations() {
        let c3 = group_from_presentation(&Presentation::new(1, vec![vec![1, 1, 1]], 10)).unwrap();
        assert!(c3.is_isomorphic(&cyclic(3)).is_some());
        let d8 = group_from_presentation(&Presentation::new(
            2,
            vec![vec![1, 1, 1, 1], vec![2, 2], vec![1, 2, 1, 2]],
            64,
        ))
        .unwrap();
        assert!(d8.is_isomorphic(&dihedral(4)).is_some());
        let overflow = group_from_presentation(&Presentation::new(1, vec![vec![1; 20]], 10));
        assert!(matches!(overflow, Err(CatalogError::EnumerationOverflow(_))));
    }

    #[test]
    fn gamma2c1_is_nonabelian_of_order_16() {
        let g = g16_gamma2c1();
        assert_eq!(g.order(), 16);
        assert!(!g.is_commutative());
        assert!(g.is_associative());
    }
}
