//! The cyclic and dihedral constructions.
//!
//! Cyclic: `S ⊴ G`, `G/S = ⟨α⟩` cyclic of order `2m`, `1 ≠ h ∈ S ∩ Z(G)`;
//! then `x*y = xy·h^σ(i+j)` for `x ∈ α^i`, `y ∈ α^j`.
//!
//! Dihedral: `G/S` dihedral of order `4m` generated by involutions `β, γ`
//! with `α = βγ` of order `2m`, `G0 = ∪ α^i`, `G1 = G \ G0`, and
//! `1 ≠ h ∈ S ∩ Z(G0) ∩ N(G)` with `hxh = x` on `G1`; then
//! `x*y = xy·h^((-1)^r σ(i+j))` where `x ∈ α^i ∪ eα^i`,
//! `y ∈ (α^j ∪ α^j f) ∩ G_r`.
//!
//! Parameters are validated against a specific loop and carry precomputed
//! per-element exponents, so each product costs a few lookups.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::loops::CosetPartition;
use crate::sigma::{sigma_i, Window};
use crate::{ElemSet, LoopError, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("the input loop is not Moufang")]
    NotMoufang,
    #[error("cannot parse parameters: {0}")]
    Parse(String),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConstructionError> {
    Err(ConstructionError::InvalidParams(msg.into()))
}

/// Which construction a parameter tuple belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    Cyclic,
    Dihedral,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Cyclic => "cyclic",
            Kind::Dihedral => "dihedral",
        })
    }
}

/// Validated parameters for the cyclic construction on one loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicParams {
    subloop: ElemSet,
    window: Window,
    alpha: usize,
    h: usize,
    coset_index: Vec<i64>,
}

/// Validated parameters for the dihedral construction on one loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DihedralParams {
    subloop: ElemSet,
    window: Window,
    beta: ElemSet,
    gamma: ElemSet,
    e: usize,
    f: usize,
    g0: ElemSet,
    h: usize,
    left_index: Vec<i64>,
    right_index: Vec<i64>,
    parity: Vec<u8>,
}

/// Either kind of parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Params {
    Cyclic(CyclicParams),
    Dihedral(DihedralParams),
}

fn quotient_of(l: &LoopTable, s: &ElemSet) -> Result<(LoopTable, CosetPartition), ConstructionError> {
    if !s.contains(0) || s.universe() != l.order() {
        return invalid("subloop must contain the identity");
    }
    let (q, part) = l
        .quotient(s)
        .map_err(|_| ConstructionError::InvalidParams("S is not normal".into()))?;
    if !q.is_associative() {
        return invalid("G/S is not a group");
    }
    Ok((q, part))
}

/// Exponents of the powers of `a` in `q`, indexed by window element, or
/// `None` if `a` does not have order `2m`.
fn window_powers(q: &LoopTable, a: usize, w: Window) -> Option<Vec<(i64, usize)>> {
    let two_m = w.modulus() as usize;
    let mut out = Vec::with_capacity(two_m);
    let mut p = 0;
    for k in 0..two_m {
        if k > 0 && p == 0 {
            return None;
        }
        out.push((w.reduce(k as i64), p));
        p = q.mul(p, a);
    }
    (p == 0).then_some(out)
}

impl CyclicParams {
    /// `alpha` is any element of the generating coset.
    pub fn new(l: &LoopTable, subloop: &ElemSet, alpha: usize, h: usize) -> Result<Self, ConstructionError> {
        if !l.is_moufang() {
            return Err(ConstructionError::NotMoufang);
        }
        let (q, part) = quotient_of(l, subloop)?;
        if q.order() % 2 != 0 {
            return invalid("G/S has odd order");
        }
        let w = Window::new(q.order() as i64 / 2).expect("order >= 2");
        Self::build(l, subloop, &q, &part, w, alpha, h, &l.center())
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        l: &LoopTable,
        subloop: &ElemSet,
        q: &LoopTable,
        part: &CosetPartition,
        w: Window,
        alpha: usize,
        h: usize,
        center: &ElemSet,
    ) -> Result<Self, ConstructionError> {
        if alpha >= l.order() {
            return invalid("alpha out of range");
        }
        let powers = window_powers(q, part.index_of[alpha], w)
            .ok_or_else(|| ConstructionError::InvalidParams("alpha does not generate G/S".into()))?;
        if h == 0 || !subloop.contains(h) || !center.contains(h) {
            return invalid("h must be a nonidentity element of S ∩ Z(G)");
        }
        let mut coset_exp = vec![0i64; q.order()];
        for &(i, c) in &powers {
            coset_exp[c] = i;
        }
        let coset_index = (0..l.order()).map(|x| coset_exp[part.index_of[x]]).collect();
        Ok(CyclicParams {
            subloop: subloop.clone(),
            window: w,
            alpha: part.cosets[part.index_of[alpha]].first().unwrap(),
            h,
            coset_index,
        })
    }

    pub fn subloop(&self) -> &ElemSet {
        &self.subloop
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Least element of the generating coset.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// The `i ∈ M` with `x ∈ α^i`.
    pub fn coset_index(&self, x: usize) -> i64 {
        self.coset_index[x]
    }
}

/// The data needed to index a dihedral quotient.
struct DihedralFrame {
    window: Window,
    /// per coset: (left index, right index, parity)
    coset: Vec<(i64, i64, u8)>,
}

fn dihedral_frame(q: &LoopTable, b: usize, c: usize) -> Option<DihedralFrame> {
    let n = q.order();
    if !n.is_multiple_of(4) || b == 0 || c == 0 || b == c || q.mul(b, b) != 0 || q.mul(c, c) != 0 {
        return None;
    }
    let w = Window::new(n as i64 / 4)?;
    let a = q.mul(b, c);
    let powers = window_powers(q, a, w)?;
    if powers.iter().any(|&(_, p)| p == b) {
        return None;
    }
    let mut coset = vec![(0, 0, 2u8); n];
    for &(i, p) in &powers {
        coset[p] = (i, i, 0);
    }
    for &(i, p) in &powers {
        let left = q.mul(b, p);
        coset[left].0 = i;
        coset[left].2 = 1;
    }
    for &(j, p) in &powers {
        let right = q.mul(p, c);
        coset[right].1 = j;
    }
    debug_assert!(coset.iter().all(|t| t.2 < 2));
    Some(DihedralFrame { window: w, coset })
}

impl DihedralParams {
    /// `beta` and `gamma` are any elements of the two involutive cosets.
    pub fn new(
        l: &LoopTable,
        subloop: &ElemSet,
        beta: usize,
        gamma: usize,
        h: usize,
    ) -> Result<Self, ConstructionError> {
        if !l.is_moufang() {
            return Err(ConstructionError::NotMoufang);
        }
        if beta >= l.order() || gamma >= l.order() {
            return invalid("beta or gamma out of range");
        }
        let (q, part) = quotient_of(l, subloop)?;
        let (b, c) = (part.index_of[beta], part.index_of[gamma]);
        let frame = dihedral_frame(&q, b, c)
            .ok_or_else(|| ConstructionError::InvalidParams("β, γ do not give a dihedral quotient".into()))?;
        Self::build(l, subloop, &part, &frame, b, c, h, &l.nucleus())
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        l: &LoopTable,
        subloop: &ElemSet,
        part: &CosetPartition,
        frame: &DihedralFrame,
        b: usize,
        c: usize,
        h: usize,
        nucleus: &ElemSet,
    ) -> Result<Self, ConstructionError> {
        let n = l.order();
        let parity: Vec<u8> = (0..n).map(|x| frame.coset[part.index_of[x]].2).collect();
        let g0 = ElemSet::from_iter_n(n, (0..n).filter(|&x| parity[x] == 0));
        if !dihedral_h_ok(l, subloop, &g0, nucleus, h) {
            return invalid("h violates the dihedral conditions");
        }
        let beta = part.cosets[b].clone();
        let gamma = part.cosets[c].clone();
        Ok(DihedralParams {
            subloop: subloop.clone(),
            window: frame.window,
            e: beta.first().unwrap(),
            f: gamma.first().unwrap(),
            beta,
            gamma,
            g0,
            h,
            left_index: (0..n).map(|x| frame.coset[part.index_of[x]].0).collect(),
            right_index: (0..n).map(|x| frame.coset[part.index_of[x]].1).collect(),
            parity,
        })
    }

    pub fn subloop(&self) -> &ElemSet {
        &self.subloop
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn beta(&self) -> &ElemSet {
        &self.beta
    }

    pub fn gamma(&self) -> &ElemSet {
        &self.gamma
    }

    /// Least element of `β` (the default `e`).
    pub fn e(&self) -> usize {
        self.e
    }

    /// Least element of `γ` (the default `f`).
    pub fn f(&self) -> usize {
        self.f
    }

    pub fn g0(&self) -> &ElemSet {
        &self.g0
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// `i` with `x ∈ α^i ∪ eα^i`.
    pub fn left_index(&self, x: usize) -> i64 {
        self.left_index[x]
    }

    /// `j` with `x ∈ α^j ∪ α^j f`.
    pub fn right_index(&self, x: usize) -> i64 {
        self.right_index[x]
    }

    /// 0 on `G0`, 1 on `G1`.
    pub fn parity(&self, x: usize) -> u8 {
        self.parity[x]
    }

    /// Cosets `α^i` (as element sets) for `i` in the window.
    pub fn alpha_powers(&self) -> Vec<(i64, ElemSet)> {
        let n = self.parity.len();
        self.window
            .elements()
            .map(|i| {
                (
                    i,
                    ElemSet::from_iter_n(n, (0..n).filter(|&x| self.parity[x] == 0 && self.left_index[x] == i)),
                )
            })
            .collect()
    }

    /// The `α` coset itself.
    pub fn alpha(&self) -> ElemSet {
        self.alpha_powers()
            .into_iter()
            .find(|(i, _)| *i == 1)
            .map(|(_, s)| s)
            .unwrap()
    }
}

fn dihedral_h_ok(l: &LoopTable, s: &ElemSet, g0: &ElemSet, nucleus: &ElemSet, h: usize) -> bool {
    if h == 0 || h >= l.order() || !s.contains(h) || !nucleus.contains(h) {
        return false;
    }
    let n = l.order();
    (0..n).all(|x| {
        if g0.contains(x) {
            l.mul(h, x) == l.mul(x, h)
        } else {
            l.mul(l.mul(h, x), h) == x
        }
    })
}

fn power_of(h: usize, hinv: usize, e: i64) -> usize {
    match e {
        0 => 0,
        1 => h,
        -1 => hinv,
        _ => unreachable!("carry outside -1..=1"),
    }
}

impl Params {
    pub fn kind(&self) -> Kind {
        match self {
            Params::Cyclic(_) => Kind::Cyclic,
            Params::Dihedral(_) => Kind::Dihedral,
        }
    }

    pub fn subloop(&self) -> &ElemSet {
        match self {
            Params::Cyclic(p) => &p.subloop,
            Params::Dihedral(p) => &p.subloop,
        }
    }

    pub fn h(&self) -> usize {
        match self {
            Params::Cyclic(p) => p.h,
            Params::Dihedral(p) => p.h,
        }
    }

    pub fn window(&self) -> Window {
        match self {
            Params::Cyclic(p) => p.window,
            Params::Dihedral(p) => p.window,
        }
    }

    /// `(i, j, r)` for the product `x*y`: left index of `x`, right index of
    /// `y`, parity of `y` (always 0 for the cyclic construction).
    pub fn indices(&self, x: usize, y: usize) -> (i64, i64, u8) {
        match self {
            Params::Cyclic(p) => (p.coset_index[x], p.coset_index[y], 0),
            Params::Dihedral(p) => (p.left_index[x], p.right_index[y], p.parity[y]),
        }
    }

    /// Exponent `e` with `x*y = xy·h^e`.
    pub fn exponent(&self, x: usize, y: usize) -> i64 {
        let (i, j, r) = self.indices(x, y);
        let s = sigma_i(i + j, self.window());
        if r == 0 {
            s
        } else {
            -s
        }
    }

    /// Applies the construction. Fails if the parameters do not belong to `l`.
    pub fn apply(&self, l: &LoopTable) -> Result<LoopTable, ConstructionError> {
        self.check(l)?;
        Ok(self.apply_unchecked(l))
    }

    /// Re-validates the tuple against `l`.
    pub fn check(&self, l: &LoopTable) -> Result<(), ConstructionError> {
        let fresh = match self {
            Params::Cyclic(p) => {
                if p.coset_index.len() != l.order() {
                    return invalid("parameters belong to a loop of another order");
                }
                Params::Cyclic(CyclicParams::new(l, &p.subloop, p.alpha, p.h)?)
            }
            Params::Dihedral(p) => {
                if p.parity.len() != l.order() {
                    return invalid("parameters belong to a loop of another order");
                }
                Params::Dihedral(DihedralParams::new(l, &p.subloop, p.e, p.f, p.h)?)
            }
        };
        if fresh != *self {
            return invalid("parameters do not match this loop");
        }
        Ok(())
    }

    pub(crate) fn apply_unchecked(&self, l: &LoopTable) -> LoopTable {
        let n = l.order();
        let h = self.h();
        let hinv = l.inv(h);
        let mut cells = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                let e = self.exponent(x, y);
                cells[x * n + y] = l.mul(l.mul(x, y), power_of(h, hinv, e)) as u16;
            }
        }
        LoopTable::from_cells_unchecked(n, cells)
    }

    /// Text form: `cyclic S=<members> alpha=<x> h=<x>` or
    /// `dihedral S=<members> beta=<x> gamma=<x> h=<x>`.
    pub fn to_text(&self) -> String {
        let members = |s: &ElemSet| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Params::Cyclic(p) => format!("cyclic S={} alpha={} h={}", members(&p.subloop), p.alpha, p.h),
            Params::Dihedral(p) => format!(
                "dihedral S={} beta={} gamma={} h={}",
                members(&p.subloop),
                p.e,
                p.f,
                p.h
            ),
        }
    }

    /// Parses [`Params::to_text`] output and validates it against `l`.
    pub fn parse(l: &LoopTable, text: &str) -> Result<Params, ConstructionError> {
        let perr = |m: &str| ConstructionError::Parse(m.to_string());
        let mut words = text.split_whitespace();
        let kind = words.next().ok_or_else(|| perr("empty parameter string"))?;
        let mut fields = std::collections::BTreeMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| perr("expected key=value"))?;
            if fields.insert(k, v).is_some() {
                return Err(perr("repeated key"));
            }
        }
        let num = |k: &str| -> Result<usize, ConstructionError> {
            fields
                .get(k)
                .ok_or_else(|| perr(&format!("missing {k}")))?
                .parse()
                .map_err(|_| perr(&format!("bad value for {k}")))
        };
        let s_text = fields.get("S").ok_or_else(|| perr("missing S"))?;
        let mut s = ElemSet::empty(l.order());
        for tok in s_text.split(',') {
            let x: usize = tok.parse().map_err(|_| perr("bad subloop member"))?;
            if x >= l.order() {
                return Err(perr("subloop member out of range"));
            }
            s.insert(x);
        }
        let expected = if kind == "cyclic" { 3 } else { 4 };
        if fields.len() != expected {
            return Err(perr("unexpected keys"));
        }
        match kind {
            "cyclic" => Ok(Params::Cyclic(CyclicParams::new(l, &s, num("alpha")?, num("h")?)?)),
            "dihedral" => Ok(Params::Dihedral(DihedralParams::new(
                l,
                &s,
                num("beta")?,
                num("gamma")?,
                num("h")?,
            )?)),
            _ => Err(perr("kind must be cyclic or dihedral")),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn apply_cyclic(l: &LoopTable, p: &CyclicParams) -> Result<LoopTable, ConstructionError> {
    Params::Cyclic(p.clone()).apply(l)
}

pub fn apply_dihedral(l: &LoopTable, p: &DihedralParams) -> Result<LoopTable, ConstructionError> {
    Params::Dihedral(p.clone()).apply(l)
}

/// The dihedral construction with indices read off the element sets
/// `α^i`, `eα^i` and `α^j`, `α^j f` for explicit `e ∈ β`, `f ∈ γ`.
pub fn apply_dihedral_with_representatives(
    l: &LoopTable,
    p: &DihedralParams,
    e: usize,
    f: usize,
) -> Result<LoopTable, ConstructionError> {
    Params::Dihedral(p.clone()).check(l)?;
    if !p.beta.contains(e) || !p.gamma.contains(f) {
        return invalid("e must lie in β and f in γ");
    }
    let n = l.order();
    let mut left = vec![i64::MIN; n];
    let mut right = vec![i64::MIN; n];
    for (i, coset) in p.alpha_powers() {
        for x in coset.iter() {
            left[x] = i;
            right[x] = i;
            left[l.mul(e, x)] = i;
            right[l.mul(x, f)] = i;
        }
    }
    if left.contains(&i64::MIN) || right.contains(&i64::MIN) {
        return invalid("cosets eα^i or α^j f do not cover G1");
    }
    let mut q = p.clone();
    q.left_index = left;
    q.right_index = right;
    Ok(Params::Dihedral(q).apply_unchecked(l))
}

/// Every cyclic tuple, without deduplication. Empty for non-Moufang input.
pub fn find_cyclic_params_all(l: &LoopTable) -> Vec<CyclicParams> {
    if !l.is_moufang() {
        return Vec::new();
    }
    let n = l.order();
    let center = l.center();
    let mut out = Vec::new();
    for s in l.enumerate_normal_subloops() {
        let hs: Vec<usize> = s.intersection(&center).iter().filter(|&x| x != 0).collect();
        if hs.is_empty() || !(n / s.len()).is_multiple_of(2) {
            continue;
        }
        let (q, part) = l.quotient_unchecked(&s);
        if !q.is_associative() {
            continue;
        }
        let w = Window::new(q.order() as i64 / 2).unwrap();
        for c in 0..q.order() {
            let alpha = part.cosets[c].first().unwrap();
            for &h in &hs {
                if let Ok(p) = CyclicParams::build(l, &s, &q, &part, w, alpha, h, &center) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Every dihedral tuple (both orders of β, γ), without deduplication.
pub fn find_dihedral_params_all(l: &LoopTable) -> Vec<DihedralParams> {
    if !l.is_moufang() {
        return Vec::new();
    }
    let n = l.order();
    let nucleus = l.nucleus();
    let mut out = Vec::new();
    for s in l.enumerate_normal_subloops() {
        if !(n / s.len()).is_multiple_of(4) || s.intersection(&nucleus).len() < 2 {
            continue;
        }
        let (q, part) = l.quotient_unchecked(&s);
        if !q.is_associative() {
            continue;
        }
        let involutions: Vec<usize> = (1..q.order()).filter(|&x| q.mul(x, x) == 0).collect();
        for &b in &involutions {
            for &c in &involutions {
                let Some(frame) = dihedral_frame(&q, b, c) else {
                    continue;
                };
                for h in s.intersection(&nucleus).iter().filter(|&x| x != 0) {
                    if let Ok(p) = DihedralParams::build(l, &s, &part, &frame, b, c, h, &nucleus) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn dedup_by_table(l: &LoopTable, all: Vec<Params>) -> Vec<Params> {
    let mut seen = HashSet::new();
    all.into_iter().filter(|p| seen.insert(p.apply_unchecked(l))).collect()
}

/// Cyclic tuples, keeping the first tuple for each distinct output table.
pub fn find_cyclic_params(l: &LoopTable) -> Vec<CyclicParams> {
    let all = find_cyclic_params_all(l).into_iter().map(Params::Cyclic).collect();
    dedup_by_table(l, all)
        .into_iter()
        .map(|p| match p {
            Params::Cyclic(c) => c,
            Params::Dihedral(_) => unreachable!(),
        })
        .collect()
}

/// Dihedral tuples, keeping the first tuple for each distinct output table.
pub fn find_dihedral_params(l: &LoopTable) -> Vec<DihedralParams> {
    let all = find_dihedral_params_all(l).into_iter().map(Params::Dihedral).collect();
    dedup_by_table(l, all)
        .into_iter()
        .map(|p| match p {
            Params::Dihedral(d) => d,
            Params::Cyclic(_) => unreachable!(),
        })
        .collect()
}

/// All tuples of both kinds (cyclic first), deduplicated by output table
/// within each kind.
pub fn find_all_params(l: &LoopTable) -> Vec<Params> {
    let mut out: Vec<Params> = find_cyclic_params(l).into_iter().map(Params::Cyclic).collect();
    out.extend(find_dihedral_params(l).into_iter().map(Params::Dihedral));
    out
}

/// Number of cells where two tables on the same elements disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub order: usize,
    pub count: usize,
}

impl DistanceReport {
    /// True when exactly a quarter of the table differs.
    pub fn is_quarter(&self) -> bool {
        4 * self.count == self.order * self.order
    }
}

pub fn distance(a: &LoopTable, b: &LoopTable) -> Result<DistanceReport, ConstructionError> {
    Ok(DistanceReport {
        order: a.order(),
        count: a.distance(b)?,
    })
}
