//! Optimal deterministic 1-bit strategies through the layered MDP.

use super::simple::uniformize_as;
use super::urchin::{sea_urchin_rounds, UrchinParams};
use crate::analysis::{attainment, solve_parity, strategy_attainment, CheckReport, Objective};
use crate::mdp::ExplicitMdp;
use crate::num::fmt_rat;
use crate::strategy::{MdStrategy, Mode, Strategy, StrategyClass};
use crate::transform::{condition, layer};
use crate::{Error, Result};

/// Almost-sure engine used inside the conditioned layered MDP.
#[derive(Clone, Debug)]
pub enum AsEngine {
    /// Exact qualitative parity witness.
    Exact,
    /// Sea-urchin rounds until the body covers everything.
    Urchin(UrchinParams),
}

#[derive(Clone, Debug)]
pub struct OneBitOptions {
    pub engine: AsEngine,
    /// Replace the result by its bit-0 slice when that slice alone is
    /// optimal.
    pub simplify: bool,
}

impl Default for OneBitOptions {
    fn default() -> Self {
        OneBitOptions { engine: AsEngine::Exact, simplify: true }
    }
}

#[derive(Clone, Debug)]
pub struct OneBit {
    pub strategy: Strategy,
    pub simplified: bool,
    pub layered_states: usize,
    pub uniformize_rounds: usize,
    pub checks: CheckReport,
}

fn urchin_engine(sibling: &[usize], params: &UrchinParams, m: &ExplicitMdp) -> Result<MdStrategy> {
    let all: Vec<usize> = (0..m.len()).collect();
    let mut rounds = 1;
    loop {
        let out = sea_urchin_rounds(m, sibling, &all, rounds, params)?;
        if out.fixed.iter().all(|x| *x) {
            return Ok(out.completed(m));
        }
        rounds += 1;
        if rounds > 64 {
            return Err(Error::Precondition("sea urchin did not cover the instance in 64 rounds".into()));
        }
    }
}

/// Optimal deterministic 1-bit strategy from every state of a finite MDP.
/// Both initial bits are checked to attain the value everywhere.
pub fn optimal_parity_1bit(m: &ExplicitMdp, opts: &OneBitOptions) -> Result<OneBit> {
    let values = solve_parity(m).values;
    let l = layer(m);
    let lvals = solve_parity(&l.mdp).values;
    let (tau, rounds) = match condition(&l.mdp, &lvals) {
        Ok(c) => {
            let (star, rounds) = match &opts.engine {
                AsEngine::Exact => uniformize_as(&c.mdp, |x, _| Ok(solve_parity(x).witness))?,
                AsEngine::Urchin(p) => {
                    let sib: Vec<usize> =
                        c.to_orig.iter().map(|&s| c.from_orig[l.sibling[s]].expect("siblings share values")).collect();
                    uniformize_as(&c.mdp, |x, _| urchin_engine(&sib, p, x))?
                }
            };
            (c.lift(&l.mdp, &star), rounds)
        }
        Err(Error::EmptyConditioned) => (MdStrategy::lowest(&l.mdp), 0),
        Err(e) => return Err(e),
    };
    let mut u = l.unlayer_strategy(m, &tau);
    let mut simplified = false;
    if opts.simplify {
        let slice = MdStrategy::from_strategy(m, &u)?;
        if slice.0.iter().enumerate().all(|(s, c)| c.is_some() || !m.is_controlled(s))
            && attainment(m, &slice, &Objective::Parity)? == values
        {
            u = Strategy::new(StrategyClass::KBit(1), Mode::bits(0));
            for s in (0..m.len()).filter(|&s| m.is_controlled(s)) {
                let t = slice.get(s).expect("checked total");
                for b in 0..2 {
                    u.set(Mode::bits(b), m.id(s), m.id(t), Mode::bits(b));
                }
            }
            simplified = true;
        }
    }
    let mut checks = CheckReport::new("optimal-1bit");
    let all: Vec<usize> = (0..m.len()).collect();
    for bit in 0..2 {
        let mut ub = u.clone();
        ub.m0 = Mode::bits(bit);
        let att = strategy_attainment(m, &ub, &all, &Objective::Parity)?;
        for s in 0..m.len() {
            checks.push(
                format!("optimal {} from bit {bit}", m.id(s)),
                att[s] == values[s],
                format!("attains {} against value {}", fmt_rat(&att[s]), fmt_rat(&values[s])),
            );
        }
    }
    Ok(OneBit { strategy: u, simplified, layered_states: l.mdp.len(), uniformize_rounds: rounds, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use crate::num::rat;

    #[test]
    fn coin_game_is_optimal_from_both_bits() {
        let m = MdpBuilder::new()
            .controlled("s", 1, &["r", "w"])
            .random("r", 1, &[("w", rat(1, 2)), ("x", rat(1, 2))])
            .controlled("w", 2, &["w"])
            .controlled("x", 1, &["x", "s"])
            .build()
            .unwrap();
        let out = optimal_parity_1bit(&m, &OneBitOptions::default()).unwrap();
        assert!(out.checks.ok(), "{:?}", out.checks.failures());
        assert!(out.strategy.never_flips());
    }
}
