//! Induced Markov chains and strategy fixing.

use std::collections::{HashMap, VecDeque};

use num::One;

use super::{DefaultRule, MdStrategy, Mode, Strategy};
use crate::mdp::{ExplicitMdp, State};
use crate::num::Rat;
use crate::{Error, Result};

/// Markov chain over (mode, state) pairs.
#[derive(Clone, Debug)]
pub struct InducedChain {
    pub chain: ExplicitMdp,
    pub product: Vec<(Mode, usize)>,
    index: HashMap<(Mode, usize), usize>,
    /// Whether some reachable product state is past the horizon.
    pub default_regime: bool,
    m0: Mode,
}

impl InducedChain {
    pub fn node(&self, mode: Mode, s: usize) -> Option<usize> {
        self.index.get(&(mode, s)).copied()
    }

    /// Product state of `(m0, s)`.
    pub fn start(&self, s: usize) -> Option<usize> {
        self.node(self.m0, s)
    }
}

fn undefined(m: &ExplicitMdp, s: usize, mode: Mode, k: u32) -> Error {
    Error::UndefinedChoice { state: m.id(s).to_string(), mode: mode.render(k) }
}

/// Builds the chain over (mode, state) reachable from `(m0, s)` for `s` in
/// `from`. Markov step counters saturate at the horizon, after which the
/// default rule drives the strategy.
pub fn induce_chain(m: &ExplicitMdp, sigma: &Strategy, from: &[usize]) -> Result<InducedChain> {
    let k = sigma.k();
    let markov = sigma.class.is_markov();
    let horizon = sigma.horizon;
    let norm = |mode: Mode| -> Mode {
        match (markov, mode.step, horizon) {
            (true, Some(st), Some(h)) if st > h => Mode { step: Some(h), bits: mode.bits },
            _ => mode,
        }
    };
    let in_default = |mode: Mode| markov && matches!((mode.step, horizon), (Some(st), Some(h)) if st >= h);
    let m0 = norm(sigma.m0);

    let mut index: HashMap<(Mode, usize), usize> = HashMap::new();
    let mut product: Vec<(Mode, usize)> = Vec::new();
    let mut rows: Vec<Vec<(usize, Rat)>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut default_regime = false;
    let mut visit = |key: (Mode, usize), product: &mut Vec<(Mode, usize)>, queue: &mut VecDeque<usize>| {
        *index.entry(key).or_insert_with(|| {
            product.push(key);
            queue.push_back(product.len() - 1);
            product.len() - 1
        })
    };
    for &s in from {
        visit((m0, s), &mut product, &mut queue);
    }
    while let Some(n) = queue.pop_front() {
        let (mode, s) = product[n];
        let advance = |m2: Mode| -> Mode {
            if markov {
                norm(Mode { step: mode.step.map(|x| x + 1), bits: m2.bits })
            } else {
                m2
            }
        };
        let mut row: Vec<(usize, Rat)> = Vec::new();
        if in_default(mode) {
            default_regime = true;
            let rule = sigma.default_rule.ok_or(Error::HorizonEscape(horizon.unwrap_or(0)))?;
            let table_mode = Mode { step: None, bits: mode.bits };
            if m.is_controlled(s) {
                let (t, bits) = match rule {
                    DefaultRule::LowestIndex => (*m.succ(s).iter().min().expect("successor"), mode.bits),
                    DefaultRule::Table => {
                        let (t, m2) =
                            sigma.choice(table_mode, m.id(s)).ok_or_else(|| undefined(m, s, table_mode, k))?;
                        (m.index_of(t).ok_or_else(|| undefined(m, s, table_mode, k))?, m2.bits)
                    }
                };
                row.push((visit((Mode { step: mode.step, bits }, t), &mut product, &mut queue), Rat::one()));
            } else {
                for (t, p) in m.edges(s) {
                    let bits = match rule {
                        DefaultRule::LowestIndex => mode.bits,
                        DefaultRule::Table => {
                            sigma.update(table_mode, m.id(s), m.id(t)).map(|x| x.bits).unwrap_or(mode.bits)
                        }
                    };
                    let nn = visit((Mode { step: mode.step, bits }, t), &mut product, &mut queue);
                    row.push((nn, p.expect("random edge").clone()));
                }
            }
        } else if m.is_controlled(s) {
            let (t, m2) = sigma.choice(mode, m.id(s)).ok_or_else(|| undefined(m, s, mode, k))?;
            let t = m.index_of(t).filter(|t| m.succ(s).contains(t)).ok_or_else(|| undefined(m, s, mode, k))?;
            row.push((visit((advance(m2), t), &mut product, &mut queue), Rat::one()));
        } else {
            for (t, p) in m.edges(s) {
                let m2 = sigma.update(mode, m.id(s), m.id(t)).unwrap_or(mode);
                let nn = visit((advance(m2), t), &mut product, &mut queue);
                row.push((nn, p.expect("random edge").clone()));
            }
        }
        if rows.len() <= n {
            rows.resize(n + 1, Vec::new());
        }
        rows[n] = row;
    }
    rows.resize(product.len(), Vec::new());
    let states = product
        .iter()
        .zip(rows)
        .map(|(&(mode, s), row)| State::random(format!("{}[{}]", m.id(s), mode.render(k)), m.color(s), row))
        .collect();
    let chain = ExplicitMdp::new(states, (0..from.len().min(product.len())).collect());
    Ok(InducedChain { chain, product, index, default_regime, m0 })
}

/// Transition rows of `m` with controlled states resolved by `sigma`.
pub fn md_rows(m: &ExplicitMdp, sigma: &MdStrategy) -> Result<Vec<Vec<(usize, Rat)>>> {
    (0..m.len())
        .map(|i| {
            if m.is_controlled(i) {
                let t = sigma.get(i).ok_or_else(|| undefined(m, i, Mode::UNIT, 0))?;
                Ok(vec![(t, Rat::one())])
            } else {
                Ok(m.random_row(i))
            }
        })
        .collect()
}

/// `m` with the controlled states of `region` turned into Dirac random states
/// following `sigma`.
pub fn fix_strategy(m: &ExplicitMdp, sigma: &MdStrategy, region: &[bool]) -> Result<ExplicitMdp> {
    let mut out = m.clone();
    for i in 0..m.len() {
        if region[i] && m.is_controlled(i) {
            let t = sigma.get(i).ok_or_else(|| undefined(m, i, Mode::UNIT, 0))?;
            if !m.succ(i).contains(&t) {
                return Err(undefined(m, i, Mode::UNIT, 0));
            }
            out.replace_state(i, State::random("", m.color(i), vec![(t, Rat::one())]));
        }
    }
    Ok(out)
}
