//! Cayley-table representation of finite loops.
//!
//! Elements are the indices `0..n` and element `0` is always the identity.
//! Every table handed out by this crate has passed [`LoopTable::validate`].

mod elemset;
mod iso;
mod structure;

pub use elemset::ElemSet;
pub use iso::{find_isomorphism, Fingerprint, IsoMap, LoopInvariants};
pub use structure::CosetPartition;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("table is empty")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry {value} at ({row}, {col}) is out of range for order {n}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("not a Latin square: {what} {index} repeats a value")]
    NotLatin { what: &'static str, index: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("subloop is not normal")]
    NotNormal,
    #[error("order {0} is too large (at most 65535 supported)")]
    TooLarge(usize),
    #[error("loops have different orders {0} and {1}")]
    OrderMismatch(usize, usize),
}

/// A validated Cayley table with identity `0`.
///
/// Left and right division tables are precomputed on construction, so every
/// structural query is a handful of lookups.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LoopTable {
    n: usize,
    cells: Vec<u16>,
    // ldiv[x*n + z] = x \ z, the y with x*y = z
    ldiv: Vec<u16>,
    // rdiv[z*n + y] = z / y, the x with x*y = z
    rdiv: Vec<u16>,
}

impl std::fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "LoopTable(order {})", self.n)?;
        for x in 0..self.n {
            let row: Vec<String> = self.row(x).map(|v| v.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Element orders together with a power-associativity flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementOrders {
    /// Left-power order of each element.
    pub orders: Vec<usize>,
    /// False if some element has left and right powers that diverge.
    pub power_associative: bool,
}

impl ElementOrders {
    /// Sorted multiset of orders.
    pub fn multiset(&self) -> Vec<usize> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v
    }

    pub fn count_of(&self, order: usize) -> usize {
        self.orders.iter().filter(|&&o| o == order).count()
    }
}

impl LoopTable {
    /// Validates a raw square grid. If the identity is not element `0` the
    /// table is relabeled by swapping the identity with `0`.
    pub fn validate(raw: &[Vec<usize>]) -> Result<Self, LoopError> {
        let n = raw.len();
        if n == 0 {
            return Err(LoopError::Empty);
        }
        if n > u16::MAX as usize {
            return Err(LoopError::TooLarge(n));
        }
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(LoopError::NotSquare { row, len: r.len(), n });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(LoopError::OutOfRange { row, col, value, n });
                }
            }
        }
        let mut seen = vec![false; n];
        for (i, r) in raw.iter().enumerate() {
            seen.iter_mut().for_each(|s| *s = false);
            for &v in r {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(LoopError::NotLatin { what: "row", index: i });
                }
            }
        }
        for j in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for r in raw {
                if std::mem::replace(&mut seen[r[j]], true) {
                    return Err(LoopError::NotLatin {
                        what: "column",
                        index: j,
                    });
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| raw[e][x] == x && raw[x][e] == x))
            .ok_or(LoopError::NoIdentity)?;
        let cells: Vec<u16> = raw.iter().flatten().map(|&v| v as u16).collect();
        let table = Self::from_cells_unchecked(n, cells);
        if identity == 0 {
            Ok(table)
        } else {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(0, identity);
            Ok(table.relabel(&perm))
        }
    }

    /// Builds a table from a product closure, then validates it.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, LoopError> {
        let raw: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        Self::validate(&raw)
    }

    /// Caller guarantees a Latin square with identity 0.
    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u16>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        let mut ldiv = vec![0u16; n * n];
        let mut rdiv = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                let z = cells[x * n + y] as usize;
                ldiv[x * n + z] = y as u16;
                rdiv[z * n + y] = x as u16;
            }
        }
        LoopTable { n, cells, ldiv, rdiv }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y] as usize
    }

    /// `x \ z`: the unique `y` with `x·y = z`.
    #[inline]
    pub fn ldiv(&self, x: usize, z: usize) -> usize {
        self.ldiv[x * self.n + z] as usize
    }

    /// `z / y`: the unique `x` with `x·y = z`.
    #[inline]
    pub fn rdiv(&self, z: usize, y: usize) -> usize {
        self.rdiv[z * self.n + y] as usize
    }

    /// Right inverse `x \ 1`. In Moufang loops this is the two-sided inverse.
    pub fn inv(&self, x: usize) -> usize {
        self.ldiv(x, 0)
    }

    pub fn row(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.cells[x * self.n..(x + 1) * self.n].iter().map(|&v| v as usize)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.row(x).collect()).collect()
    }

    /// Applies the bijection `perm` (old index -> new index). `perm[0]` must be 0.
    pub fn relabel(&self, perm: &[usize]) -> LoopTable {
        let n = self.n;
        assert_eq!(perm.len(), n);
        let mut cells = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                cells[perm[x] * n + perm[y]] = perm[self.mul(x, y)] as u16;
            }
        }
        LoopTable::from_cells_unchecked(n, cells)
    }

    /// `x^k` computed as `x·(x·(…·x))`.
    pub fn left_power(&self, x: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(x, acc))
    }

    /// Left-power orders; also reports whether left and right powers agree.
    pub fn element_orders(&self) -> ElementOrders {
        let mut power_associative = true;
        let orders = (0..self.n)
            .map(|x| {
                let (mut l, mut r, mut k) = (x, x, 1);
                while l != 0 {
                    if l != r {
                        power_associative = false;
                    }
                    l = self.mul(x, l);
                    r = self.mul(r, x);
                    k += 1;
                }
                if r != 0 {
                    power_associative = false;
                }
                k
            })
            .collect();
        ElementOrders {
            orders,
            power_associative,
        }
    }

    /// The set `{x·x}`.
    pub fn squares(&self) -> ElemSet {
        ElemSet::from_iter_n(self.n, (0..self.n).map(|x| self.mul(x, x)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.mul(x, y);
                (0..n).all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Checks `((x·y)·x)·z = x·(y·(x·z))` on all triples.
    pub fn is_moufang(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xyx = self.mul(self.mul(x, y), x);
                (0..n).all(|z| self.mul(xyx, z) == self.mul(x, self.mul(y, self.mul(x, z))))
            })
        })
    }

    /// The unique `w` with `x·y = (y·x)·w`.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.ldiv(self.mul(y, x), self.mul(x, y))
    }

    /// The unique `w` with `(x·y)·z = (x·(y·z))·w`.
    #[inline]
    pub fn associator(&self, x: usize, y: usize, z: usize) -> usize {
        self.ldiv(self.mul(x, self.mul(y, z)), self.mul(self.mul(x, y), z))
    }

    /// Componentwise product; `(a, b)` gets index `a·|other| + b`.
    pub fn direct_product(&self, other: &LoopTable) -> LoopTable {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut cells = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                let (a1, b1) = (x / n2, x % n2);
                let (a2, b2) = (y / n2, y % n2);
                cells[x * n + y] = (self.mul(a1, a2) * n2 + other.mul(b1, b2)) as u16;
            }
        }
        LoopTable::from_cells_unchecked(n, cells)
    }

    /// Number of cells where the two tables disagree.
    pub fn distance(&self, other: &LoopTable) -> Result<usize, LoopError> {
        if self.n != other.n {
            return Err(LoopError::OrderMismatch(self.n, other.n));
        }
        Ok(self.cells.iter().zip(&other.cells).filter(|(a, b)| a != b).count())
    }

    /// The restriction of the table to `members` (which must contain 0 and
    /// be closed), relabeled in ascending member order.
    pub fn restrict(&self, members: &ElemSet) -> Result<LoopTable, LoopError> {
        let list = members.to_vec();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in list.iter().enumerate() {
            pos[x] = i;
        }
        let raw: Vec<Vec<usize>> = list
            .iter()
            .map(|&x| list.iter().map(|&y| pos[self.mul(x, y)]).collect())
            .collect();
        if raw.iter().flatten().any(|&v| v == usize::MAX) {
            return Err(LoopError::NotLatin {
                what: "restriction",
                index: 0,
            });
        }
        LoopTable::validate(&raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> LoopTable {
        LoopTable::from_fn(n, |x, y| (x + y) % n).unwrap()
    }

    #[test]
    fn validate_small() {
        let t = LoopTable::validate(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(t.order(), 2);
        assert!(matches!(
            LoopTable::validate(&[vec![0, 1], vec![1, 1]]),
            Err(LoopError::NotLatin { .. })
        ));
        assert_eq!(LoopTable::validate(&[]), Err(LoopError::Empty));
        assert!(matches!(
            LoopTable::validate(&[vec![0, 2], vec![1, 0]]),
            Err(LoopError::OutOfRange { .. })
        ));
        assert!(matches!(
            LoopTable::validate(&[vec![0, 1], vec![1]]),
            Err(LoopError::NotSquare { .. })
        ));
    }

    #[test]
    fn identity_is_moved_to_zero() {
        // C3 written with identity at index 2
        let raw = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let t = LoopTable::validate(&raw).unwrap();
        for x in 0..3 {
            assert_eq!(t.mul(0, x), x);
            assert_eq!(t.mul(x, 0), x);
        }
        assert!(t.is_associative());
    }

    #[test]
    fn latin_without_identity() {
        // x*y = x - y mod 3 has a right identity only
        let raw: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (x + 3 - y) % 3).collect()).collect();
        assert_eq!(LoopTable::validate(&raw), Err(LoopError::NoIdentity));
    }

    #[test]
    fn divisions_invert_products() {
        let t = cyclic(5);
        for x in 0..5 {
            for y in 0..5 {
                let z = t.mul(x, y);
                assert_eq!(t.ldiv(x, z), y);
                assert_eq!(t.rdiv(z, y), x);
            }
        }
    }

    #[test]
    fn groups_are_moufang_with_trivial_associators() {
        let t = cyclic(6);
        assert!(t.is_moufang());
        assert!(t.is_associative());
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(t.commutator(x, y), 0);
                for z in 0..6 {
                    assert_eq!(t.associator(x, y, z), 0);
                }
            }
        }
    }

    #[test]
    fn elementary_abelian_orders_and_squares() {
        let c2 = cyclic(2);
        let e = c2.direct_product(&c2).direct_product(&c2);
        let o = e.element_orders();
        assert!(o.power_associative);
        assert_eq!(o.count_of(2), 7);
        assert_eq!(e.squares().to_vec(), vec![0]);
        assert_eq!(cyclic(8).element_orders().count_of(8), 4);
    }

    #[test]
    fn relabel_preserves_structure() {
        let t = cyclic(4);
        let r = t.relabel(&[0, 3, 1, 2]);
        assert_eq!(r.element_orders().multiset(), t.element_orders().multiset());
        assert_eq!(t.distance(&t), Ok(0));
        assert!(t.distance(&cyclic(3)).is_err());
    }
}
