//! Maximal end components.

use crate::mdp::graph::sccs;
use crate::mdp::ExplicitMdp;

/// Maximal end components of the sub-MDP on `allowed`: strongly connected,
/// closed under random branching, every controlled state keeps a successor
/// inside.
pub fn mecs(m: &ExplicitMdp, allowed: &[bool]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut cur = allowed.to_vec();
    loop {
        let comps = sccs(n, &cur, |i| m.succ(i).to_vec());
        let mut comp_of = vec![usize::MAX; n];
        for (k, c) in comps.iter().enumerate() {
            for &s in c {
                comp_of[s] = k;
            }
        }
        let mut changed = false;
        for s in 0..n {
            if !cur[s] {
                continue;
            }
            let c = comp_of[s];
            let inside = |t: &usize| cur[*t] && comp_of[*t] == c;
            let keep = if m.is_controlled(s) { m.succ(s).iter().any(inside) } else { m.succ(s).iter().all(inside) };
            if !keep {
                cur[s] = false;
                changed = true;
            }
        }
        if !changed {
            return comps;
        }
    }
}

/// End components that are winning for parity, tagged with their even top
/// color, largest color first. Every EC whose largest color is even lies in
/// one of them.
pub fn good_end_components(m: &ExplicitMdp) -> Vec<(u32, Vec<usize>)> {
    let mut evens: Vec<u32> = m.colors().into_iter().filter(|c| c % 2 == 0).collect();
    evens.reverse();
    let mut out = Vec::new();
    for e in evens {
        let allowed = m.mask_where(|c| c <= e);
        for c in mecs(m, &allowed) {
            if c.iter().any(|&s| m.color(s) == e) {
                out.push((e, c));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mec {
    pub states: Vec<usize>,
    pub max_color: u32,
    /// Contains a sub-EC with even largest color.
    pub winning: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcDecomposition {
    pub mecs: Vec<Mec>,
}

pub fn ec_decomposition(m: &ExplicitMdp) -> EcDecomposition {
    let good = good_end_components(m);
    let mut in_good = vec![false; m.len()];
    for (_, c) in &good {
        for &s in c {
            in_good[s] = true;
        }
    }
    let all = vec![true; m.len()];
    let mecs = mecs(m, &all)
        .into_iter()
        .map(|c| Mec {
            max_color: c.iter().map(|&s| m.color(s)).max().unwrap_or(0),
            winning: c.iter().any(|&s| in_good[s]),
            states: c,
        })
        .collect();
    EcDecomposition { mecs }
}
