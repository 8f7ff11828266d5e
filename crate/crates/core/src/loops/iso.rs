//! Isomorphism invariants and isomorphism search.
//!
//! The search colours elements by label-independent invariants, refines the
//! colouring twice, picks a small generating set of the first loop (rarest
//! colours first) and backtracks over images of the generators. Every
//! partial assignment is extended to the generated subloop immediately, and
//! each product inside the domain is checked on the way, so a completed
//! assignment is already a verified isomorphism.

use std::collections::HashMap;

use serde::Serialize;

use super::{ElemSet, LoopTable};

/// Label-independent summary of a loop. Equal fingerprints are necessary
/// for isomorphism, never sufficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub element_orders: Vec<usize>,
    pub center: usize,
    pub nucleus: usize,
    pub associator_subloop: usize,
    pub squares: usize,
    /// Sorted per-element counts of `y` with `[x, y] != 1`.
    pub noncommuting: Vec<usize>,
    /// Number of triples with nontrivial associator.
    pub nonassociating_triples: usize,
    /// Sorted histogram of refined element colours.
    pub colors: Vec<(u64, usize)>,
}

/// A bijection between element sets of two loops (`map[x]` is the image of `x`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsoMap {
    pub map: Vec<usize>,
}

impl IsoMap {
    pub fn identity(n: usize) -> Self {
        IsoMap { map: (0..n).collect() }
    }

    /// Full table check: bijective, identity to identity, products preserved.
    pub fn verify(&self, from: &LoopTable, to: &LoopTable) -> bool {
        let n = from.order();
        if to.order() != n || self.map.len() != n || self.map[0] != 0 {
            return false;
        }
        let mut hit = vec![false; n];
        for &y in &self.map {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        (0..n).all(|x| (0..n).all(|y| self.map[from.mul(x, y)] == to.mul(self.map[x], self.map[y])))
    }

    pub fn inverse(&self) -> IsoMap {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        IsoMap { map: inv }
    }
}

fn mix(mut h: u64, v: u64) -> u64 {
    // splitmix64 finaliser over the running state
    h ^= v
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(h << 6)
        .wrapping_add(h >> 2);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

fn mix_all(seed: u64, vals: impl IntoIterator<Item = u64>) -> u64 {
    vals.into_iter().fold(seed, mix)
}

/// Fingerprint plus the per-element colouring used by the search.
#[derive(Debug, Clone)]
pub struct LoopInvariants {
    pub fingerprint: Fingerprint,
    pub colors: Vec<u64>,
}

impl LoopInvariants {
    pub fn compute(l: &LoopTable) -> Self {
        let n = l.order();
        let orders = l.element_orders();
        let mut assoc_pos = vec![[0u64; 3]; n];
        let mut nonassoc = 0usize;
        let mut values = ElemSet::empty(n);
        for x in 0..n {
            for y in 0..n {
                let xy = l.mul(x, y);
                for z in 0..n {
                    let w = l.ldiv(l.mul(x, l.mul(y, z)), l.mul(xy, z));
                    if w != 0 {
                        nonassoc += 1;
                        assoc_pos[x][0] += 1;
                        assoc_pos[y][1] += 1;
                        assoc_pos[z][2] += 1;
                        values.insert(w);
                    }
                }
            }
        }
        let noncomm: Vec<usize> = (0..n)
            .map(|x| (0..n).filter(|&y| l.mul(x, y) != l.mul(y, x)).count())
            .collect();
        let mut square_roots = vec![0u64; n];
        for x in 0..n {
            square_roots[l.mul(x, x)] += 1;
        }
        let nucleus: Vec<bool> = (0..n).map(|x| assoc_pos[x].iter().all(|&c| c == 0)).collect();
        let center_size = (0..n).filter(|&x| nucleus[x] && noncomm[x] == 0).count();

        let mut colors: Vec<u64> = (0..n)
            .map(|x| {
                mix_all(
                    0x51_7cc1_b727_220a,
                    [
                        orders.orders[x] as u64,
                        noncomm[x] as u64,
                        assoc_pos[x][0],
                        assoc_pos[x][1],
                        assoc_pos[x][2],
                        square_roots[x],
                    ],
                )
            })
            .collect();
        colors = (0..n).map(|x| mix(colors[x], colors[l.mul(x, x)])).collect();
        for _ in 0..2 {
            colors = refine(l, &colors);
        }
        let mut hist: HashMap<u64, usize> = HashMap::new();
        for &c in &colors {
            *hist.entry(c).or_default() += 1;
        }
        let mut hist: Vec<(u64, usize)> = hist.into_iter().collect();
        hist.sort_unstable();

        let mut sorted_noncomm = noncomm.clone();
        sorted_noncomm.sort_unstable();
        let fingerprint = Fingerprint {
            order: n,
            element_orders: orders.multiset(),
            center: center_size,
            nucleus: nucleus.iter().filter(|&&b| b).count(),
            associator_subloop: l.subloop_generated(&values).len(),
            squares: l.squares().len(),
            noncommuting: sorted_noncomm,
            nonassociating_triples: nonassoc,
            colors: hist,
        };
        LoopInvariants { fingerprint, colors }
    }
}

fn refine(l: &LoopTable, colors: &[u64]) -> Vec<u64> {
    let n = l.order();
    (0..n)
        .map(|x| {
            let mut sig: Vec<u64> = (0..n)
                .map(|y| mix_all(colors[y], [colors[l.mul(x, y)], colors[l.mul(y, x)]]))
                .collect();
            sig.sort_unstable();
            mix_all(colors[x], sig)
        })
        .collect()
}

impl LoopTable {
    pub fn fingerprint(&self) -> Fingerprint {
        LoopInvariants::compute(self).fingerprint
    }

    /// Returns a verified isomorphism `self -> other`, or `None`.
    pub fn is_isomorphic(&self, other: &LoopTable) -> Option<IsoMap> {
        let a = LoopInvariants::compute(self);
        let b = LoopInvariants::compute(other);
        find_isomorphism(self, &a, other, &b)
    }
}

/// Isomorphism search with precomputed invariants on both sides.
pub fn find_isomorphism(
    l1: &LoopTable,
    inv1: &LoopInvariants,
    l2: &LoopTable,
    inv2: &LoopInvariants,
) -> Option<IsoMap> {
    if l1.order() != l2.order() || inv1.fingerprint != inv2.fingerprint {
        return None;
    }
    let n = l1.order();
    let mut by_color: HashMap<u64, Vec<usize>> = HashMap::new();
    for y in 0..n {
        by_color.entry(inv2.colors[y]).or_default().push(y);
    }
    let gens = generators_rarest_first(l1, &inv1.colors, &by_color);
    let mut st = Search {
        l1,
        l2,
        c1: &inv1.colors,
        c2: &inv2.colors,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        dom: Vec::with_capacity(n),
    };
    st.map[0] = 0;
    st.used[0] = true;
    st.dom.push(0);
    if st.assign(&gens, 0, &by_color) {
        let iso = IsoMap { map: st.map };
        debug_assert!(iso.verify(l1, l2));
        Some(iso)
    } else {
        None
    }
}

fn generators_rarest_first(l: &LoopTable, colors: &[u64], by_color: &HashMap<u64, Vec<usize>>) -> Vec<usize> {
    let n = l.order();
    let mut h = l.subloop_generated(&ElemSet::empty(n));
    let mut gens = Vec::new();
    while h.len() < n {
        let mut best: Option<(usize, usize, usize, ElemSet)> = None;
        for (g, color) in colors.iter().enumerate() {
            if h.contains(g) {
                continue;
            }
            let class = by_color.get(color).map_or(0, Vec::len);
            if let Some((bc, bs, _, _)) = &best {
                if class > *bc {
                    continue;
                }
                if class == *bc {
                    let mut seed = h.clone();
                    seed.insert(g);
                    let size = l.subloop_generated(&seed).len();
                    if size <= *bs {
                        continue;
                    }
                    best = Some((class, size, g, l.subloop_generated(&seed)));
                    continue;
                }
            }
            let mut seed = h.clone();
            seed.insert(g);
            let closure = l.subloop_generated(&seed);
            best = Some((class, closure.len(), g, closure));
        }
        let (_, _, g, closure) = best.expect("element outside proper subloop");
        gens.push(g);
        h = closure;
    }
    gens
}

struct Search<'a> {
    l1: &'a LoopTable,
    l2: &'a LoopTable,
    c1: &'a [u64],
    c2: &'a [u64],
    map: Vec<usize>,
    used: Vec<bool>,
    dom: Vec<usize>,
}

impl Search<'_> {
    fn assign(&mut self, gens: &[usize], i: usize, by_color: &HashMap<u64, Vec<usize>>) -> bool {
        if i == gens.len() {
            return self.dom.len() == self.l1.order();
        }
        let g = gens[i];
        let Some(cands) = by_color.get(&self.c1[g]) else {
            return false;
        };
        for &c in cands {
            if self.used[c] {
                continue;
            }
            let mark = self.dom.len();
            if self.set(g, c) && self.close(mark) && self.assign(gens, i + 1, by_color) {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    fn set(&mut self, x: usize, y: usize) -> bool {
        if self.used[y] || self.c1[x] != self.c2[y] {
            return false;
        }
        self.map[x] = y;
        self.used[y] = true;
        self.dom.push(x);
        true
    }

    fn undo(&mut self, mark: usize) {
        for x in self.dom.drain(mark..) {
            self.used[self.map[x]] = false;
            self.map[x] = usize::MAX;
        }
    }

    /// Closes the domain under products, checking consistency. Entries
    /// before `mark` are already closed among themselves.
    fn close(&mut self, mark: usize) -> bool {
        let mut done = mark;
        while done < self.dom.len() {
            let a = self.dom[done];
            for i in 0..=done {
                let b = self.dom[i];
                for (x, y) in [(a, b), (b, a)] {
                    let p = self.l1.mul(x, y);
                    let img = self.l2.mul(self.map[x], self.map[y]);
                    if self.map[p] != usize::MAX {
                        if self.map[p] != img {
                            return false;
                        }
                    } else if !self.set(p, img) {
                        return false;
                    }
                }
            }
            done += 1;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> LoopTable {
        LoopTable::from_fn(n, |x, y| (x + y) % n).unwrap()
    }

    #[test]
    fn self_isomorphism() {
        let c6 = cyclic(6);
        let iso = c6.is_isomorphic(&c6).unwrap();
        assert!(iso.verify(&c6, &c6));
    }

    #[test]
    fn c4_vs_v4() {
        let c2 = cyclic(2);
        let v4 = c2.direct_product(&c2);
        assert!(cyclic(4).is_isomorphic(&v4).is_none());
        assert_ne!(cyclic(4).fingerprint(), v4.fingerprint());
    }

    #[test]
    fn c6_vs_c3xc2() {
        let p = cyclic(3).direct_product(&cyclic(2));
        let iso = cyclic(6).is_isomorphic(&p).unwrap();
        assert!(iso.verify(&cyclic(6), &p));
        assert!(iso.inverse().verify(&p, &cyclic(6)));
    }

    #[test]
    fn relabeled_copy_is_found() {
        let t = cyclic(4).direct_product(&cyclic(2));
        let perm = vec![0, 5, 2, 7, 1, 3, 6, 4];
        let r = t.relabel(&perm);
        let iso = t.is_isomorphic(&r).unwrap();
        assert!(iso.verify(&t, &r));
        assert_eq!(t.fingerprint(), r.fingerprint());
    }
}
