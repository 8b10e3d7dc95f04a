//! Finite truncations of lazy models with sound sinks.

use num::{One, Zero};

use crate::mdp::{capped_successors, materialize_from, ExplicitMdp, MdpModel, State, SINK_LOSE, SINK_WIN};
use crate::num::Rat;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncMode {
    /// Cut mass goes to a losing sink: values are lower bounds.
    Pessimistic,
    /// Cut mass goes to a winning sink: values are upper bounds.
    Optimistic,
}

impl TruncMode {
    pub fn sink_color(&self, max_color: u32) -> u32 {
        let want_odd = matches!(self, TruncMode::Pessimistic);
        if (max_color % 2 == 1) == want_odd {
            max_color
        } else {
            max_color + 1
        }
    }

    pub fn sink_id(&self) -> &'static str {
        match self {
            TruncMode::Pessimistic => SINK_LOSE,
            TruncMode::Optimistic => SINK_WIN,
        }
    }
}

/// The `l`-bubble of `starts` in `m` with every cut edge and all residual
/// tail mass redirected to a fresh absorbing sink. Returns the model as is
/// when nothing was cut.
pub fn truncate<M: MdpModel + ?Sized>(
    m: &M,
    starts: &[String],
    l: usize,
    branch_cap: usize,
    mode: TruncMode,
) -> Result<ExplicitMdp> {
    let (x, frontier) = materialize_from(m, starts, l, branch_cap)?;
    let mut states: Vec<State> = x.states().to_vec();
    let initial = x.initial().to_vec();
    let sink = states.len();
    let mut used = false;
    for id in &frontier.unexpanded {
        let i = x.index_of(id).expect("frontier state is materialized");
        let (succ, capped) = capped_successors(m, id, branch_cap)?;
        let controlled = states[i].is_controlled();
        let mut tgt = Vec::new();
        let mut prob = Vec::new();
        let mut cut = if controlled { Rat::zero() } else { Rat::one() };
        let mut any_cut = capped;
        for (t, p) in succ {
            match x.index_of(&t) {
                Some(j) if !tgt.contains(&j) => {
                    tgt.push(j);
                    if !controlled {
                        let p = p.unwrap_or_else(Rat::zero);
                        cut -= &p;
                        prob.push(p);
                    }
                }
                Some(_) => {}
                None => any_cut = true,
            }
        }
        if controlled {
            if any_cut || tgt.is_empty() {
                tgt.push(sink);
                used = true;
            }
        } else if !cut.is_zero() {
            tgt.push(sink);
            prob.push(cut);
            used = true;
        }
        states[i].succ = tgt;
        states[i].prob = prob;
    }
    for (id, mass) in &frontier.residual {
        let i = x.index_of(id).expect("residual state is materialized");
        states[i].succ.push(sink);
        states[i].prob.push(mass.clone());
        used = true;
    }
    for id in &frontier.controlled_truncated {
        let i = x.index_of(id).expect("capped state is materialized");
        states[i].succ.push(sink);
        used = true;
    }
    if used {
        let max_color = states.iter().map(|s| s.color).max().unwrap_or(0);
        states.push(State::absorbing(mode.sink_id(), mode.sink_color(max_color), sink));
    }
    ExplicitMdp::checked(states, initial)
}
