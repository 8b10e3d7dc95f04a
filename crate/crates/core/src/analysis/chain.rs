use num::{One, Zero};

use super::linear::{reach_probabilities, Rows};
use super::Objective;
use crate::mdp::graph::bottom_sccs;
use crate::mdp::ExplicitMdp;
use crate::num::Rat;
use crate::strategy::{induce_chain, md_rows, MdStrategy, Strategy};
use crate::Result;

/// Union of the bottom SCCs whose largest color is even.
pub fn winning_bsccs(rows: &Rows, colors: &[u32]) -> Vec<bool> {
    let n = rows.len();
    let mut win = vec![false; n];
    for b in bottom_sccs(n, |i| rows[i].iter().map(|(t, _)| *t).collect()) {
        let top = b.iter().map(|&s| colors[s]).max().expect("nonempty bscc");
        if top % 2 == 0 {
            for s in b {
                win[s] = true;
            }
        }
    }
    win
}

/// Exact probability of `obj` from every state of a chain given by rows.
pub fn rows_values(rows: &Rows, colors: &[u32], obj: &Objective) -> Vec<Rat> {
    match obj {
        Objective::Parity => reach_probabilities(rows, &winning_bsccs(rows, colors)),
        Objective::Reach(t) => reach_probabilities(rows, t),
        Objective::Safety(t) => reach_probabilities(rows, t).into_iter().map(|p| Rat::one() - p).collect(),
    }
}

/// Values of a chain (an MDP without controlled states; any controlled state
/// is resolved to its lowest-index successor).
pub fn chain_values(c: &ExplicitMdp, obj: &Objective) -> Vec<Rat> {
    let rows: Vec<Vec<(usize, Rat)>> = (0..c.len())
        .map(|i| {
            if c.is_controlled(i) {
                vec![(*c.succ(i).iter().min().expect("successor"), Rat::one())]
            } else {
                c.random_row(i)
            }
        })
        .collect();
    let colors: Vec<u32> = (0..c.len()).map(|i| c.color(i)).collect();
    rows_values(&rows, &colors, obj)
}

/// Attainment of an MD strategy from every state.
pub fn attainment(m: &ExplicitMdp, sigma: &MdStrategy, obj: &Objective) -> Result<Vec<Rat>> {
    let rows = md_rows(m, sigma)?;
    let colors: Vec<u32> = (0..m.len()).map(|i| m.color(i)).collect();
    Ok(rows_values(&rows, &colors, obj))
}

/// Attainment of a general strategy started in its initial mode, for every
/// state in `from`.
pub fn strategy_attainment(m: &ExplicitMdp, sigma: &Strategy, from: &[usize], obj: &Objective) -> Result<Vec<Rat>> {
    let ic = induce_chain(m, sigma, from)?;
    let lift = |mask: &Vec<bool>| ic.product.iter().map(|&(_, s)| mask[s]).collect::<Vec<bool>>();
    let obj = match obj {
        Objective::Parity => Objective::Parity,
        Objective::Reach(t) => Objective::Reach(lift(t)),
        Objective::Safety(t) => Objective::Safety(lift(t)),
    };
    let v = chain_values(&ic.chain, &obj);
    Ok(from.iter().map(|&s| ic.start(s).map(|n| v[n].clone()).unwrap_or_else(Rat::zero)).collect())
}
