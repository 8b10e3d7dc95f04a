//! Conditioning an MDP on winning.

use num::Zero;

use crate::mdp::{ExplicitMdp, State};
use crate::num::Rat;
use crate::strategy::MdStrategy;
use crate::{Error, Result};

/// The conditioned MDP over the value-positive states, with index maps.
#[derive(Clone, Debug)]
pub struct Conditioned {
    pub mdp: ExplicitMdp,
    pub to_orig: Vec<usize>,
    pub from_orig: Vec<Option<usize>>,
}

/// Conditions `m` on the objective whose exact values are `values`.
/// Controlled states keep only value-preserving edges; random rows are
/// reweighted by `val(t)/val(s)`. Ids are kept.
pub fn condition(m: &ExplicitMdp, values: &[Rat]) -> Result<Conditioned> {
    assert_eq!(values.len(), m.len());
    let to_orig: Vec<usize> = (0..m.len()).filter(|&s| !values[s].is_zero()).collect();
    if to_orig.is_empty() {
        return Err(Error::EmptyConditioned);
    }
    let mut from_orig = vec![None; m.len()];
    for (i, &s) in to_orig.iter().enumerate() {
        from_orig[s] = Some(i);
    }
    let mut states = Vec::with_capacity(to_orig.len());
    for &s in &to_orig {
        let st = m.state(s);
        let v = &values[s];
        let new = if st.is_controlled() {
            let succ: Vec<usize> = st.succ.iter().filter(|&&t| &values[t] == v).filter_map(|&t| from_orig[t]).collect();
            if succ.is_empty() {
                return Err(Error::Precondition(format!(
                    "\"{}\" has no value-preserving successor; values are not optimal",
                    st.id
                )));
            }
            State::controlled(st.id.clone(), st.color, succ)
        } else {
            let dist: Vec<(usize, Rat)> = st
                .succ
                .iter()
                .zip(&st.prob)
                .filter_map(|(&t, p)| from_orig[t].map(|i| (i, p * &values[t] / v)))
                .collect();
            State::random(st.id.clone(), st.color, dist)
        };
        states.push(new);
    }
    let mut initial: Vec<usize> = m.initial().iter().filter_map(|&s| from_orig[s]).collect();
    if initial.is_empty() {
        initial.push(0);
    }
    let mdp = ExplicitMdp::checked(states, initial)?;
    Ok(Conditioned { mdp, to_orig, from_orig })
}

impl Conditioned {
    /// Lifts an MD strategy on the conditioned MDP back to the source.
    /// Value-zero controlled states take their lowest successor.
    pub fn lift(&self, m: &ExplicitMdp, sigma: &MdStrategy) -> MdStrategy {
        let mut out = MdStrategy::lowest(m);
        for (i, &s) in self.to_orig.iter().enumerate() {
            if m.is_controlled(s) {
                if let Some(t) = sigma.get(i) {
                    out.0[s] = Some(self.to_orig[t]);
                }
            }
        }
        out
    }

    pub fn mask_to_orig(&self, mask: &[bool], n: usize) -> Vec<bool> {
        let mut out = vec![false; n];
        for (i, &s) in self.to_orig.iter().enumerate() {
            out[s] = mask[i];
        }
        out
    }
}
