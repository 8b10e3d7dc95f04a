//! Exact optimal values by qualitative preprocessing and policy iteration.

use std::collections::VecDeque;

use num::One;

use super::linear::reach_probabilities;
use super::mec::good_end_components;
use super::Objective;
use crate::mdp::graph::predecessors;
use crate::mdp::ExplicitMdp;
use crate::num::Rat;
use crate::strategy::MdStrategy;

/// Exact optimal values with a witness that is optimal from every state.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub values: Vec<Rat>,
    pub witness: MdStrategy,
}

pub fn solve(m: &ExplicitMdp, obj: &Objective) -> Solution {
    match obj {
        Objective::Parity => solve_parity(m),
        Objective::Reach(t) => solve_reach(m, t),
        Objective::Safety(t) => solve_safety(m, t),
    }
}

pub fn solve_reach(m: &ExplicitMdp, target: &[bool]) -> Solution {
    max_reach(m, target, &vec![false; m.len()])
}

/// Lowest-index successor of `s` satisfying `ok`.
fn lowest_where(m: &ExplicitMdp, s: usize, ok: impl Fn(usize) -> bool) -> Option<usize> {
    m.succ(s).iter().copied().filter(|&t| ok(t)).min()
}

/// Maximal probability of reaching `target` while never entering `avoid`.
///
/// Policy iteration starts from the attractor policy, under which every
/// state with positive value reaches the target with positive probability,
/// and switches a choice only on strict improvement (to the lowest-index
/// maximizer). Strict switching never closes a cycle that avoids the target,
/// so each iterate stays proper and the final policy is optimal everywhere.
pub fn max_reach(m: &ExplicitMdp, target: &[bool], avoid: &[bool]) -> Solution {
    let n = m.len();
    let avoid: Vec<bool> = (0..n).map(|i| avoid[i] && !target[i]).collect();
    let free = |i: usize| !target[i] && !avoid[i];
    let pre = predecessors(m);

    let mut level = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for i in 0..n {
        if target[i] {
            level[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(t) = queue.pop_front() {
        for &p in &pre[t] {
            if free(p) && level[p] == usize::MAX {
                level[p] = level[t] + 1;
                queue.push_back(p);
            }
        }
    }

    let mut sigma: Vec<Option<usize>> = (0..n)
        .map(|i| {
            if !m.is_controlled(i) {
                return None;
            }
            if free(i) && level[i] != usize::MAX {
                let best = m.succ(i).iter().map(|&t| level[t]).min().expect("successor");
                lowest_where(m, i, |t| level[t] == best)
            } else {
                lowest_where(m, i, |_| true)
            }
        })
        .collect();

    loop {
        let rows: Vec<Vec<(usize, Rat)>> = (0..n)
            .map(|i| {
                if !free(i) {
                    Vec::new()
                } else if let Some(t) = sigma[i] {
                    vec![(t, Rat::one())]
                } else {
                    m.random_row(i)
                }
            })
            .collect();
        let v = reach_probabilities(&rows, target);
        let mut changed = false;
        for i in 0..n {
            if !m.is_controlled(i) || !free(i) {
                continue;
            }
            let cur = &v[sigma[i].expect("controlled choice")];
            let best = m.succ(i).iter().map(|&t| &v[t]).max().expect("successor");
            if best > cur {
                let best = best.clone();
                sigma[i] = lowest_where(m, i, |t| v[t] == best);
                changed = true;
            }
        }
        if !changed {
            return Solution { values: v, witness: MdStrategy(sigma) };
        }
    }
}

/// Largest set outside `bad` in which the controller can stay forever with
/// probability one.
pub fn safety_region(m: &ExplicitMdp, bad: &[bool]) -> Vec<bool> {
    let n = m.len();
    let mut w: Vec<bool> = bad.iter().map(|b| !b).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !w[s] {
                continue;
            }
            let keep =
                if m.is_controlled(s) { m.succ(s).iter().any(|&t| w[t]) } else { m.succ(s).iter().all(|&t| w[t]) };
            if !keep {
                w[s] = false;
                changed = true;
            }
        }
        if !changed {
            return w;
        }
    }
}

/// Maximal probability of never visiting `bad`: reach the sure-safe region
/// without touching `bad`, then stay inside it.
pub fn solve_safety(m: &ExplicitMdp, bad: &[bool]) -> Solution {
    let w = safety_region(m, bad);
    let mut sol = max_reach(m, &w, bad);
    for s in 0..m.len() {
        if w[s] && m.is_controlled(s) {
            sol.witness.0[s] = lowest_where(m, s, |t| w[t]);
        }
    }
    sol
}

/// Maximal parity probability: reach the union of winning end components,
/// then inside each component steer to its top even color forever.
pub fn solve_parity(m: &ExplicitMdp) -> Solution {
    let n = m.len();
    let pre = predecessors(m);
    let mut win = vec![false; n];
    let mut inside: Vec<Option<usize>> = vec![None; n];
    for (e, comp) in good_end_components(m) {
        let mut in_c = vec![false; n];
        for &s in &comp {
            in_c[s] = true;
        }
        let mut level = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &s in &comp {
            if m.color(s) == e {
                level[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(t) = queue.pop_front() {
            for &p in &pre[t] {
                if in_c[p] && level[p] == usize::MAX {
                    level[p] = level[t] + 1;
                    queue.push_back(p);
                }
            }
        }
        for &s in &comp {
            if win[s] {
                continue;
            }
            win[s] = true;
            if m.is_controlled(s) {
                inside[s] = if level[s] == 0 {
                    lowest_where(m, s, |t| in_c[t])
                } else {
                    let best = m.succ(s).iter().filter(|&&t| in_c[t]).map(|&t| level[t]).min();
                    best.and_then(|b| lowest_where(m, s, |t| in_c[t] && level[t] == b))
                };
            }
        }
    }
    let mut sol = solve_reach(m, &win);
    for s in 0..n {
        if win[s] && m.is_controlled(s) {
            sol.witness.0[s] = inside[s];
        }
    }
    sol
}
