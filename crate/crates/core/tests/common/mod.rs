//! Independent oracles: they share nothing with the library's solvers
//! beyond the model and strategy types.
#![allow(dead_code)]

use num::{One, Zero};
use parity_forge::strategy::{Mode, Strategy};
use parity_forge::{ExplicitMdp, MdStrategy, Rat};

pub type Rows = Vec<Vec<(usize, Rat)>>;

fn reach_sets(rows: &Rows) -> Vec<Vec<bool>> {
    let n = rows.len();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for (t, _) in &rows[x] {
                    if !seen[*t] {
                        seen[*t] = true;
                        stack.push(*t);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Dense Gauss-Jordan elimination on the augmented matrix `a`.
pub fn gauss_jordan(mut a: Vec<Vec<Rat>>) -> Vec<Rat> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular system");
        a.swap(col, piv);
        let inv = Rat::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

/// Probability of reaching `target` in the chain `rows`.
pub fn chain_reach(rows: &Rows, target: &[bool]) -> Vec<Rat> {
    let n = rows.len();
    let reach = reach_sets(rows);
    let live: Vec<bool> = (0..n).map(|s| (0..n).any(|t| target[t] && reach[s][t])).collect();
    let unknown: Vec<usize> = (0..n).filter(|&s| live[s] && !target[s]).collect();
    let pos: std::collections::HashMap<usize, usize> = unknown.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let k = unknown.len();
    let mut a = vec![vec![Rat::zero(); k + 1]; k];
    for (i, &s) in unknown.iter().enumerate() {
        a[i][i] += Rat::one();
        for (t, p) in &rows[s] {
            if target[*t] {
                a[i][k] += p;
            } else if let Some(&j) = pos.get(t) {
                a[i][j] -= p;
            }
        }
    }
    let sol = if k > 0 { gauss_jordan(a) } else { vec![] };
    (0..n)
        .map(|s| {
            if target[s] {
                Rat::one()
            } else if let Some(&i) = pos.get(&s) {
                sol[i].clone()
            } else {
                Rat::zero()
            }
        })
        .collect()
}

/// Parity value of every state of a chain: reach a bottom SCC whose largest
/// color is even.
pub fn chain_parity(rows: &Rows, colors: &[u32]) -> Vec<Rat> {
    let n = rows.len();
    let reach = reach_sets(rows);
    let bottom: Vec<bool> = (0..n).map(|s| (0..n).all(|t| !reach[s][t] || reach[t][s])).collect();
    let win: Vec<bool> = (0..n)
        .map(|s| bottom[s] && (0..n).filter(|&t| reach[s][t]).map(|t| colors[t]).max().unwrap() % 2 == 0)
        .collect();
    chain_reach(rows, &win)
}

pub fn md_rows(m: &ExplicitMdp, choice: &[Option<usize>]) -> Rows {
    (0..m.len())
        .map(|s| {
            if m.is_controlled(s) {
                vec![(choice[s].expect("total strategy"), Rat::one())]
            } else {
                m.state(s).succ.iter().cloned().zip(m.state(s).prob.iter().cloned()).collect()
            }
        })
        .collect()
}

pub fn colors(m: &ExplicitMdp) -> Vec<u32> {
    (0..m.len()).map(|s| m.color(s)).collect()
}

pub fn md_parity(m: &ExplicitMdp, sigma: &MdStrategy) -> Vec<Rat> {
    chain_parity(&md_rows(m, &sigma.0), &colors(m))
}

/// Every MD strategy of `m`, in odometer order.
pub fn all_md(m: &ExplicitMdp) -> Vec<Vec<Option<usize>>> {
    let ctrl: Vec<usize> = (0..m.len()).filter(|&s| m.is_controlled(s)).collect();
    let mut digits = vec![0usize; ctrl.len()];
    let mut out = Vec::new();
    loop {
        let mut c = vec![None; m.len()];
        for (k, &s) in ctrl.iter().enumerate() {
            c[s] = Some(m.succ(s)[digits[k]]);
        }
        out.push(c);
        let mut k = 0;
        loop {
            if k == ctrl.len() {
                return out;
            }
            digits[k] += 1;
            if digits[k] < m.succ(ctrl[k]).len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Parity values by exhaustive search over MD strategies.
pub fn brute_parity(m: &ExplicitMdp) -> Vec<Rat> {
    let cols = colors(m);
    let mut best = vec![Rat::zero(); m.len()];
    for c in all_md(m) {
        let v = chain_parity(&md_rows(m, &c), &cols);
        for s in 0..m.len() {
            if v[s] > best[s] {
                best[s] = v[s].clone();
            }
        }
    }
    best
}

/// Parity attainment of a deterministic 1-bit strategy from `(s, m0)`, via
/// an explicit (state, bit) product. Random states keep the bit unless a
/// rule says otherwise.
pub fn one_bit_parity(m: &ExplicitMdp, u: &Strategy) -> Vec<Rat> {
    let n = m.len();
    let node = |s: usize, b: u32| 2 * s + b as usize;
    let mut rows: Rows = vec![vec![]; 2 * n];
    let mut cols = vec![0; 2 * n];
    for s in 0..n {
        for b in 0..2u32 {
            cols[node(s, b)] = m.color(s);
            rows[node(s, b)] = if m.is_controlled(s) {
                let (t, m2) = u.choice(Mode::bits(b), m.id(s)).expect("defined choice");
                vec![(node(m.index_of(t).unwrap(), m2.bits), Rat::one())]
            } else {
                m.state(s)
                    .succ
                    .iter()
                    .zip(&m.state(s).prob)
                    .map(|(&t, p)| {
                        let b2 = u.update(Mode::bits(b), m.id(s), m.id(t)).map_or(b, |x| x.bits);
                        (node(t, b2), p.clone())
                    })
                    .collect()
            };
        }
    }
    let v = chain_parity(&rows, &cols);
    (0..n).map(|s| v[node(s, u.m0.bits)].clone()).collect()
}

/// Safety values (avoid `bad`) by backward induction on a model whose edges
/// go from lower to higher indices, apart from self-loops.
pub fn dag_safety(m: &ExplicitMdp, bad: &[bool], choice: Option<&[Option<usize>]>) -> Vec<Rat> {
    let n = m.len();
    let mut v = vec![Rat::zero(); n];
    for s in (0..n).rev() {
        if bad[s] {
            continue;
        }
        let st = m.state(s);
        if st.succ == [s] {
            v[s] = Rat::one();
            continue;
        }
        assert!(st.succ.iter().all(|&t| t > s), "not topologically ordered");
        v[s] = if m.is_controlled(s) {
            match choice {
                Some(c) => v[c[s].unwrap()].clone(),
                None => st.succ.iter().map(|&t| v[t].clone()).max().unwrap(),
            }
        } else {
            st.succ.iter().zip(&st.prob).fold(Rat::zero(), |a, (&t, p)| a + p * &v[t])
        };
    }
    v
}
