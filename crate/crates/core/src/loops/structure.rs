//! Structural queries: center, nucleus, subloops, normality and quotients.

use std::collections::{HashSet, VecDeque};

use super::{ElemSet, LoopError, LoopTable};

/// Cosets `xS` of a subloop, ordered by least element; coset 0 is `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    pub subloop: ElemSet,
    pub cosets: Vec<ElemSet>,
    pub index_of: Vec<usize>,
}

impl CosetPartition {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Least element of each coset.
    pub fn representatives(&self) -> Vec<usize> {
        self.cosets.iter().map(|c| c.first().unwrap()).collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

impl LoopTable {
    /// True if `x` associates with everything in all three positions.
    pub fn in_nucleus(&self, x: usize) -> bool {
        let n = self.order();
        (0..n).all(|y| {
            (0..n).all(|z| {
                self.associator(x, y, z) == 0 && self.associator(y, x, z) == 0 && self.associator(y, z, x) == 0
            })
        })
    }

    /// Elements that associate with all pairs, in every position.
    pub fn nucleus(&self) -> ElemSet {
        ElemSet::from_iter_n(self.order(), (0..self.order()).filter(|&x| self.in_nucleus(x)))
    }

    /// Elements that commute and associate with everything.
    pub fn center(&self) -> ElemSet {
        let n = self.order();
        ElemSet::from_iter_n(
            n,
            (0..n).filter(|&x| (0..n).all(|y| self.mul(x, y) == self.mul(y, x)) && self.in_nucleus(x)),
        )
    }

    /// Elements of `within` commuting and associating with every element of
    /// `within` (which must be a subloop).
    pub fn center_of(&self, within: &ElemSet) -> ElemSet {
        let members = within.to_vec();
        ElemSet::from_iter_n(
            self.order(),
            members.iter().copied().filter(|&x| {
                members.iter().all(|&y| {
                    self.mul(x, y) == self.mul(y, x)
                        && members.iter().all(|&z| {
                            self.associator(x, y, z) == 0
                                && self.associator(y, x, z) == 0
                                && self.associator(y, z, x) == 0
                        })
                })
            }),
        )
    }

    /// All associator values `[x, y, z]`.
    pub fn associator_values(&self) -> ElemSet {
        let n = self.order();
        let mut s = ElemSet::empty(n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    s.insert(self.associator(x, y, z));
                }
            }
        }
        s
    }

    /// Subloop generated by all associators.
    pub fn associator_subloop(&self) -> ElemSet {
        self.subloop_generated(&self.associator_values())
    }

    /// Smallest subloop containing `seed` (and the identity).
    ///
    /// Closure under multiplication suffices: in a finite loop a
    /// multiplicatively closed subset containing 1 is closed under both
    /// divisions.
    pub fn subloop_generated(&self, seed: &ElemSet) -> ElemSet {
        let mut set = ElemSet::empty(self.order());
        set.insert(0);
        let mut list = vec![0];
        for x in seed.iter() {
            if set.insert(x) {
                list.push(x);
            }
        }
        self.close_list(&mut set, &mut list, 0);
        set
    }

    /// Extends a closed prefix `list[..closed]` with the remaining entries
    /// until the whole list is multiplicatively closed.
    fn close_list(&self, set: &mut ElemSet, list: &mut Vec<usize>, closed: usize) {
        let mut done = closed;
        while done < list.len() {
            let a = list[done];
            let mut i = 0;
            while i <= done {
                let b = list[i];
                for p in [self.mul(a, b), self.mul(b, a)] {
                    if set.insert(p) {
                        list.push(p);
                    }
                }
                i += 1;
            }
            done += 1;
        }
    }

    /// All subloops, found by breadth-first search on the subloop lattice:
    /// each known subloop is extended by one outside generator.
    pub fn enumerate_subloops(&self) -> Vec<ElemSet> {
        let n = self.order();
        let trivial = ElemSet::from_iter_n(n, [0]);
        let mut seen: HashSet<ElemSet> = HashSet::from([trivial.clone()]);
        let mut out = vec![trivial.clone()];
        let mut queue = VecDeque::from([trivial]);
        while let Some(s) = queue.pop_front() {
            for g in 0..n {
                if s.contains(g) {
                    continue;
                }
                let mut set = s.clone();
                let mut list = s.to_vec();
                let closed = list.len();
                set.insert(g);
                list.push(g);
                self.close_list(&mut set, &mut list, closed);
                if seen.insert(set.clone()) {
                    out.push(set.clone());
                    queue.push_back(set);
                }
            }
        }
        out.sort_by_key(|s| (s.len(), s.to_vec()));
        out
    }

    /// Left cosets `xS` as sets.
    pub fn left_coset(&self, x: usize, s: &ElemSet) -> ElemSet {
        ElemSet::from_iter_n(self.order(), s.iter().map(|y| self.mul(x, y)))
    }

    pub fn right_coset(&self, s: &ElemSet, x: usize) -> ElemSet {
        ElemSet::from_iter_n(self.order(), s.iter().map(|y| self.mul(y, x)))
    }

    /// `xS = Sx`, `(xy)S = x(yS)` and `S(xy) = (Sx)y` for all `x`, `y`.
    pub fn is_normal(&self, s: &ElemSet) -> bool {
        let n = self.order();
        if !s.contains(0) || self.subloop_generated(s) != *s {
            return false;
        }
        let members = s.to_vec();
        (0..n).all(|x| {
            self.left_coset(x, s) == self.right_coset(s, x)
                && (0..n).all(|y| {
                    let xy = self.mul(x, y);
                    let lhs = self.left_coset(xy, s);
                    let rhs = ElemSet::from_iter_n(n, members.iter().map(|&t| self.mul(x, self.mul(y, t))));
                    if lhs != rhs {
                        return false;
                    }
                    let lhs = self.right_coset(s, xy);
                    let rhs = ElemSet::from_iter_n(n, members.iter().map(|&t| self.mul(self.mul(t, x), y)));
                    lhs == rhs
                })
        })
    }

    /// Smallest normal subloop containing `seed`, computed as the class of
    /// the identity in the congruence generated by `{(1, s)}`.
    pub fn normal_closure(&self, seed: &ElemSet) -> ElemSet {
        let n = self.order();
        let mut uf = UnionFind::new(n);
        let mut pending: Vec<(usize, usize)> = seed.iter().map(|s| (0, s)).collect();
        while let Some((a, b)) = pending.pop() {
            if uf.union(a, b) {
                for x in 0..n {
                    pending.push((self.mul(x, a), self.mul(x, b)));
                    pending.push((self.mul(a, x), self.mul(b, x)));
                }
            }
        }
        let root = uf.find(0);
        ElemSet::from_iter_n(n, (0..n).filter(|&x| uf.find(x) == root))
    }

    /// All normal subloops via the lattice of normal closures.
    pub fn enumerate_normal_subloops(&self) -> Vec<ElemSet> {
        let n = self.order();
        let trivial = ElemSet::from_iter_n(n, [0]);
        let mut seen: HashSet<ElemSet> = HashSet::from([trivial.clone()]);
        let mut out = vec![trivial.clone()];
        let mut queue = VecDeque::from([trivial]);
        while let Some(s) = queue.pop_front() {
            let part = self.cosets(&s);
            for rep in part.representatives().into_iter().skip(1) {
                let mut seed = s.clone();
                seed.insert(rep);
                let t = self.normal_closure(&seed);
                if seen.insert(t.clone()) {
                    out.push(t.clone());
                    queue.push_back(t);
                }
            }
        }
        out.sort_by_key(|s| (s.len(), s.to_vec()));
        out
    }

    /// Left cosets of `s`, ordered by least element.
    pub fn cosets(&self, s: &ElemSet) -> CosetPartition {
        let n = self.order();
        let mut index_of = vec![usize::MAX; n];
        let mut cosets = Vec::new();
        for x in 0..n {
            if index_of[x] != usize::MAX {
                continue;
            }
            let c = self.left_coset(x, s);
            for y in c.iter() {
                index_of[y] = cosets.len();
            }
            cosets.push(c);
        }
        CosetPartition {
            subloop: s.clone(),
            cosets,
            index_of,
        }
    }

    /// Quotient by a normal subloop, on coset indices.
    pub fn quotient(&self, s: &ElemSet) -> Result<(LoopTable, CosetPartition), LoopError> {
        if !self.is_normal(s) {
            return Err(LoopError::NotNormal);
        }
        Ok(self.quotient_unchecked(s))
    }

    /// Quotient without the normality check; `s` must be normal.
    pub(crate) fn quotient_unchecked(&self, s: &ElemSet) -> (LoopTable, CosetPartition) {
        let part = self.cosets(s);
        let reps = part.representatives();
        let q = reps.len();
        let mut cells = vec![0u16; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                cells[i * q + j] = part.index_of[self.mul(a, b)] as u16;
            }
        }
        (LoopTable::from_cells_unchecked(q, cells), part)
    }
}
