//! Float interval iteration with end-component deflation.

use super::linear::can_reach;
use super::mec::{good_end_components, mecs};
use super::solve::safety_region;
use super::Objective;
use crate::mdp::ExplicitMdp;
use crate::num::to_f64;

const MAX_SWEEPS: usize = 1_000_000;

/// Lower and upper bounds on the maximal reach probability, each pair within
/// `tol` (unless the sweep cap is hit first).
pub fn interval_reach(m: &ExplicitMdp, target: &[bool], avoid: &[bool], tol: f64) -> Vec<(f64, f64)> {
    let n = m.len();
    let free: Vec<bool> = (0..n).map(|i| !target[i] && !avoid[i]).collect();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            if !free[i] {
                Vec::new()
            } else if m.is_controlled(i) {
                m.succ(i).iter().map(|&t| (t, 1.0)).collect()
            } else {
                m.edges(i).map(|(t, p)| (t, to_f64(p.expect("random edge")))).collect()
            }
        })
        .collect();
    let graph: Vec<Vec<(usize, crate::num::Rat)>> =
        rows.iter().map(|r| r.iter().map(|(t, _)| (*t, crate::num::one())).collect()).collect();
    let possible = can_reach(&graph, target);
    let maybe: Vec<bool> = (0..n).map(|i| free[i] && possible[i]).collect();
    let comps: Vec<Vec<usize>> = mecs(m, &maybe).into_iter().collect();
    let mut comp_of = vec![usize::MAX; n];
    for (k, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = k;
        }
    }
    let init =
        |hi: bool| -> Vec<f64> { (0..n).map(|i| if target[i] || (hi && maybe[i]) { 1.0 } else { 0.0 }).collect() };
    let (mut lo, mut hi) = (init(false), init(true));
    let bellman = |v: &[f64], i: usize| -> f64 {
        if m.is_controlled(i) {
            rows[i].iter().map(|(t, _)| v[*t]).fold(0.0, f64::max)
        } else {
            rows[i].iter().map(|(t, p)| p * v[*t]).sum()
        }
    };
    for _ in 0..MAX_SWEEPS {
        let mut gap: f64 = 0.0;
        for i in 0..n {
            if maybe[i] {
                lo[i] = bellman(&lo, i).max(lo[i]);
                hi[i] = bellman(&hi, i).min(hi[i]);
            }
        }
        for (k, c) in comps.iter().enumerate() {
            let mut exit: f64 = 0.0;
            for &s in c {
                if m.is_controlled(s) {
                    for &t in m.succ(s) {
                        if comp_of[t] != k {
                            exit = exit.max(hi[t]);
                        }
                    }
                }
            }
            for &s in c {
                hi[s] = hi[s].min(exit);
            }
        }
        for i in 0..n {
            gap = gap.max(hi[i] - lo[i]);
        }
        if gap <= tol {
            break;
        }
    }
    lo.into_iter().zip(hi).collect()
}

/// Interval values for any native objective.
pub fn solve_interval(m: &ExplicitMdp, obj: &Objective, tol: f64) -> Vec<(f64, f64)> {
    let none = vec![false; m.len()];
    match obj {
        Objective::Reach(t) => interval_reach(m, t, &none, tol),
        Objective::Safety(bad) => interval_reach(m, &safety_region(m, bad), bad, tol),
        Objective::Parity => {
            let mut win = vec![false; m.len()];
            for (_, c) in good_end_components(m) {
                for s in c {
                    win[s] = true;
                }
            }
            interval_reach(m, &win, &none, tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use crate::num::rat;

    #[test]
    fn brackets_exact_value_with_end_component() {
        // a <-> b is an end component; exiting gambles 1/3
        let m = MdpBuilder::new()
            .controlled("a", 1, &["b", "g"])
            .controlled("b", 1, &["a"])
            .random("g", 1, &[("t", rat(1, 3)), ("x", rat(2, 3))])
            .controlled("t", 2, &["t"])
            .controlled("x", 1, &["x"])
            .build()
            .unwrap();
        let iv = solve_interval(&m, &Objective::Parity, 1e-9);
        for (lo, hi) in &iv {
            assert!(lo <= hi && hi - lo <= 1e-9);
        }
        assert!((iv[0].0 - 1.0 / 3.0).abs() < 1e-9);
    }
}
