//! Exact reachability probabilities in finite Markov chains.

use num::{One, Zero};

use crate::mdp::graph::{reach_where, sccs};
use crate::num::Rat;

/// Row-major chain: `rows[i]` lists (successor, probability).
pub type Rows = [Vec<(usize, Rat)>];

/// States that can reach `target` in the chain.
pub fn can_reach(rows: &Rows, target: &[bool]) -> Vec<bool> {
    let n = rows.len();
    let mut pre = vec![Vec::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for (t, _) in r {
            pre[*t].push(i);
        }
    }
    let from: Vec<usize> = (0..n).filter(|&i| target[i]).collect();
    reach_where(n, &from, |i| pre[i].clone())
}

/// Probability of eventually reaching `target` from every state, exactly.
///
/// Unknowns are the non-target states that can reach the target. They are
/// solved SCC by SCC in reverse topological order, so acyclic parts cost a
/// single pass and only genuine cycles go through Gaussian elimination.
pub fn reach_probabilities(rows: &Rows, target: &[bool]) -> Vec<Rat> {
    let n = rows.len();
    let reach = can_reach(rows, target);
    let mut x: Vec<Rat> = (0..n).map(|i| if target[i] { Rat::one() } else { Rat::zero() }).collect();
    let unknown: Vec<bool> = (0..n).map(|i| reach[i] && !target[i]).collect();
    let comps = sccs(n, &unknown, |i| rows[i].iter().map(|(t, _)| *t).collect());
    let mut pos = vec![usize::MAX; n];
    for comp in comps {
        if comp.len() == 1 && !rows[comp[0]].iter().any(|(t, _)| *t == comp[0]) {
            let s = comp[0];
            let v = rows[s].iter().fold(Rat::zero(), |acc, (t, p)| acc + p * &x[*t]);
            x[s] = v;
            continue;
        }
        for (k, &s) in comp.iter().enumerate() {
            pos[s] = k;
        }
        let size = comp.len();
        // (I - A) x = b
        let mut a = vec![vec![Rat::zero(); size + 1]; size];
        for (k, &s) in comp.iter().enumerate() {
            a[k][k] = Rat::one();
            let mut b = Rat::zero();
            for (t, p) in &rows[s] {
                if unknown[*t] && pos[*t] != usize::MAX && comp.get(pos[*t]) == Some(t) {
                    a[k][pos[*t]] -= p;
                } else {
                    b += p * &x[*t];
                }
            }
            a[k][size] = b;
        }
        let sol = gauss(a);
        for (k, &s) in comp.iter().enumerate() {
            x[s] = sol[k].clone();
            pos[s] = usize::MAX;
        }
    }
    x
}

/// Solves an augmented nonsingular system by Gauss-Jordan elimination.
pub fn gauss(mut a: Vec<Vec<Rat>>) -> Vec<Rat> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular system");
        a.swap(col, piv);
        let inv = Rat::one() / &a[col][col];
        for v in a[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in col..=n {
                if !pivot_row[c].is_zero() {
                    row[c] -= &f * &pivot_row[c];
                }
            }
        }
    }
    a.into_iter().map(|mut r| r.pop().expect("augmented column")).collect()
}
