//! Coset enumeration over the trivial subgroup (HLT strategy with
//! coincidence processing).

use super::CatalogError;
use crate::LoopTable;

/// A finite presentation. Generators are numbered from 1; a letter `g` is
/// the generator `g` and `-g` its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<i32>>,
    /// Largest group order accepted.
    pub order_bound: usize,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Vec<i32>>, order_bound: usize) -> Self {
        Presentation {
            generators,
            relators,
            order_bound,
        }
    }

    fn check(&self) -> Result<(), CatalogError> {
        if self.order_bound == 0 || self.relators.iter().any(Vec::is_empty) {
            return Err(CatalogError::BadPresentation("empty relator or zero bound".into()));
        }
        for &l in self.relators.iter().flatten() {
            if l == 0 || l.unsigned_abs() as usize > self.generators {
                return Err(CatalogError::BadPresentation(format!("letter {l} out of range")));
            }
        }
        Ok(())
    }
}

const NONE: usize = usize::MAX;

struct CosetTable {
    cols: usize,
    rows: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    limit: usize,
}

impl CosetTable {
    fn col(letter: i32) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    fn inv(col: usize) -> usize {
        col ^ 1
    }

    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, col: usize) -> Result<usize, CatalogError> {
        if self.rows.len() >= self.limit {
            return Err(CatalogError::EnumerationOverflow(self.limit));
        }
        let d = self.rows.len();
        self.rows.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.rows[c][col] = d;
        self.rows[d][Self::inv(col)] = c;
        Ok(d)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut qi = 0;
        while qi < self.queue.len() {
            let e = self.queue[qi];
            qi += 1;
            for x in 0..self.cols {
                let f = self.rows[e][x];
                if f == NONE {
                    continue;
                }
                if self.rows[f][Self::inv(x)] == e {
                    self.rows[f][Self::inv(x)] = NONE;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.rows[e1][x] != NONE {
                    let t = self.rows[e1][x];
                    self.merge(f1, t);
                } else if self.rows[f1][Self::inv(x)] != NONE {
                    let t = self.rows[f1][Self::inv(x)];
                    self.merge(e1, t);
                } else {
                    self.rows[e1][x] = f1;
                    self.rows[f1][Self::inv(x)] = e1;
                }
            }
        }
        self.queue.clear();
    }

    /// Scans `word` from coset `c`, defining new cosets where needed.
    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), CatalogError> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, word.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.rows[f][word[i]] != NONE {
                f = self.rows[f][word[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.rows[b][Self::inv(word[j as usize])] != NONE {
                b = self.rows[b][Self::inv(word[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.rows[f][word[i]] = b;
                self.rows[b][Self::inv(word[i])] = f;
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }
}

/// Enumerates the group, builds its Cayley table with generator images in
/// breadth-first order, and re-verifies every relator on the result.
pub fn group_from_presentation(p: &Presentation) -> Result<LoopTable, CatalogError> {
    group_with_generators(p).map(|(t, _)| t)
}

/// As [`group_from_presentation`], also returning the element index of each
/// generator.
pub fn group_with_generators(p: &Presentation) -> Result<(LoopTable, Vec<usize>), CatalogError> {
    p.check()?;
    let cols = 2 * p.generators;
    let words: Vec<Vec<usize>> = p
        .relators
        .iter()
        .map(|r| r.iter().map(|&l| CosetTable::col(l)).collect())
        .collect();
    let mut t = CosetTable {
        cols,
        rows: vec![vec![NONE; cols]],
        parent: vec![0],
        queue: Vec::new(),
        limit: p.order_bound.saturating_mul(64).max(4096),
    };
    let mut c = 0;
    while c < t.rows.len() {
        if t.live(c) {
            for w in &words {
                t.scan_and_fill(c, w)?;
                if !t.live(c) {
                    break;
                }
            }
            for x in 0..cols {
                if t.live(c) && t.rows[c][x] == NONE {
                    t.define(c, x)?;
                }
            }
        }
        c += 1;
    }

    let live: Vec<usize> = (0..t.rows.len()).filter(|&c| t.live(c)).collect();
    if live.len() > p.order_bound {
        return Err(CatalogError::EnumerationOverflow(p.order_bound));
    }
    // Renumber live cosets in breadth-first order from the subgroup coset.
    let n = live.len();
    let mut index = vec![NONE; t.rows.len()];
    let mut order = vec![0usize];
    index[0] = 0;
    let mut tree: Vec<(usize, usize)> = vec![(0, NONE)];
    let mut k = 0;
    while k < order.len() {
        let c = order[k];
        for x in 0..cols {
            let d = t.rep(t.rows[c][x]);
            if index[d] == NONE {
                index[d] = order.len();
                order.push(d);
                tree.push((index[c], x));
            }
        }
        k += 1;
    }
    debug_assert_eq!(order.len(), n);
    let act = |t: &mut CosetTable, c: usize, x: usize| index[t.rep(t.rows[order[c]][x])];
    // mul(c, d): act on c by the tree word of d
    let mut cells = vec![vec![0usize; n]; n];
    for (c, row) in cells.iter_mut().enumerate() {
        row[0] = c;
        for d in 1..n {
            let (pd, x) = tree[d];
            row[d] = act(&mut t, row[pd], x);
        }
    }
    let table = LoopTable::validate(&cells)?;
    if !table.is_associative() {
        return Err(CatalogError::BadPresentation(
            "enumeration did not yield a group".into(),
        ));
    }
    // each relator acts trivially on every coset
    for w in &words {
        for c in 0..n {
            let end = w.iter().fold(c, |acc, &x| act(&mut t, acc, x));
            if end != c {
                return Err(CatalogError::BadPresentation("relator fails on the table".into()));
            }
        }
    }
    let gens = (0..p.generators).map(|g| act(&mut t, 0, 2 * g)).collect();
    Ok((table, gens))
}
