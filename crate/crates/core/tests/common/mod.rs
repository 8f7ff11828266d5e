#![allow(dead_code)]

use moufang_core::factor_sets::{Action, FactorSet};
use moufang_core::LoopTable;

/// Reduced basis of the GF(2) nullspace of `rows` (each row a bit vector
/// over `vars` variables).
pub fn gf2_nullspace(rows: &[Vec<bool>], vars: usize) -> Vec<Vec<bool>> {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..vars {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] {
                let pivot = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(&pivot) {
                    *a ^= *b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..vars).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![false; vars];
            v[f] = true;
            for (row, &pc) in pivots.iter().enumerate() {
                if m[row][f] {
                    v[pc] = true;
                }
            }
            v
        })
        .collect()
}

/// Basis of the normalized associative factor sets `Q × Q → Z2` with
/// trivial action, by solving the cocycle identity directly.
pub fn associative_cocycles_z2(q: &LoopTable) -> Vec<FactorSet> {
    let n = q.order();
    let vars = n * n;
    let var = |x: usize, y: usize| x * n + y;
    let mut rows = Vec::new();
    for x in 0..n {
        let mut r0 = vec![false; vars];
        r0[var(x, 0)] = true;
        rows.push(r0);
        let mut r1 = vec![false; vars];
        r1[var(0, x)] = true;
        rows.push(r1);
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut r = vec![false; vars];
                for v in [var(x, y), var(q.mul(x, y), z), var(y, z), var(x, q.mul(y, z))] {
                    r[v] ^= true;
                }
                if r.iter().any(|&b| b) {
                    rows.push(r);
                }
            }
        }
    }
    gf2_nullspace(&rows, vars)
        .into_iter()
        .map(|v| FactorSet::from_fn(Action::trivial(q.clone(), 2), |x, y| v[var(x, y)] as u32))
        .collect()
}

/// Every GF(2) combination of `basis`.
pub fn all_combinations(basis: &[FactorSet]) -> Vec<FactorSet> {
    let zero = FactorSet::zero(basis[0].action().clone());
    (0u32..1 << basis.len())
        .map(|mask| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(zero.clone(), |acc, (_, b)| acc.sum(b).unwrap())
        })
        .collect()
}

/// `σ` written directly from its definition, for cross-checking.
pub fn sigma_oracle(i: i64, m: i64) -> i64 {
    if i > m {
        1
    } else if i < 1 - m {
        -1
    } else {
        0
    }
}

/// Modular addition into the window, independent of the library.
pub fn oplus_oracle(i: i64, j: i64, m: i64) -> i64 {
    let r = (i + j).rem_euclid(2 * m);
    if r > m {
        r - 2 * m
    } else if r < 1 - m {
        r + 2 * m
    } else {
        r
    }
}

pub fn ominus_oracle(i: i64, j: i64, m: i64) -> i64 {
    oplus_oracle(i, -j, m)
}

/// Every associator of `a` equals the corresponding associator of `b`.
pub fn same_associators(a: &LoopTable, b: &LoopTable) -> bool {
    let n = a.order();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| a.associator(x, y, z) == b.associator(x, y, z))))
}
