//! Bounded rounds of the sea-urchin construction: an MD strategy that wins
//! almost surely is fixed on a growing body (bubbles around the initial
//! states) plus spikes (β-safe sets of spike strategies).

use num::{One, Zero};

use super::encode;
use super::plaster::plaster_core;
use super::simple::require_almost_sure;
use crate::analysis::{attainment, max_reach, solve_parity, CheckReport, Objective};
use crate::mdp::ExplicitMdp;
use crate::num::{fmt_rat, pow2_neg, rat, Rat};
use crate::strategy::{fix_strategy, MdStrategy};
use crate::transform::bubble;
use crate::{Error, Result};

/// How spike strategies are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpikeEngine {
    /// err⁰-optimal MD strategy from the plastering construction.
    Plaster,
    /// Exact optimal MD witness.
    Exact,
}

#[derive(Clone, Debug)]
pub struct UrchinParams {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    /// Error terms are `2^-(i + err_shift)` in round `i`.
    pub err_shift: u32,
    pub max_radius: usize,
    pub engine: SpikeEngine,
}

impl Default for UrchinParams {
    fn default() -> Self {
        UrchinParams {
            alpha: rat(99, 100),
            beta: rat(9, 10),
            gamma: rat(1, 2),
            err_shift: 8,
            max_radius: 64,
            engine: SpikeEngine::Plaster,
        }
    }
}

impl UrchinParams {
    pub fn err(&self, round: usize) -> Rat {
        pow2_neg(round as u32 + self.err_shift)
    }

    /// The per-round progress factor
    /// (1-err)·(β-γ)/(1-γ)·(1-err)·(α-β)/(1-β), which must be at least 1/2.
    pub fn progress_factor(&self, round: usize) -> Rat {
        let e = Rat::one() - self.err(round);
        let one = Rat::one();
        &e * (&self.beta - &self.gamma) / (&one - &self.gamma) * &e * (&self.alpha - &self.beta) / (&one - &self.beta)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b, g) = (&self.alpha, &self.beta, &self.gamma);
        if !(Rat::one() > *a && a > b && b > g && *g > Rat::zero()) {
            return Err(Error::BadParams("urchin thresholds need 1 > alpha > beta > gamma > 0".into()));
        }
        let e = self.err(1);
        if *a >= Rat::one() - &e - &e {
            return Err(Error::BadParams("alpha must stay below 1 - err0 - err1".into()));
        }
        if self.progress_factor(1) < rat(1, 2) {
            return Err(Error::BadParams(format!(
                "progress factor {} is below 1/2",
                fmt_rat(&self.progress_factor(1))
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct UrchinRound {
    pub round: usize,
    pub radius: usize,
    pub body: usize,
    pub a: usize,
    pub b: usize,
    pub g: usize,
    /// p_i at each initial state.
    pub p: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct UrchinOutcome {
    /// The MDP with all choices inside the fixed region resolved.
    pub fixed_mdp: ExplicitMdp,
    pub strategy: MdStrategy,
    pub fixed: Vec<bool>,
    pub rounds: Vec<UrchinRound>,
    pub checks: CheckReport,
    /// Which step fixed each region, in order.
    pub provenance: Vec<(String, Vec<String>)>,
}

impl UrchinOutcome {
    /// Completes the partial strategy with the lowest successor.
    pub fn completed(&self, m: &ExplicitMdp) -> MdStrategy {
        let low = MdStrategy::lowest(m);
        MdStrategy((0..m.len()).map(|s| self.strategy.get(s).or(low.get(s))).collect())
    }
}

fn close(mask: &[bool], sibling: &[usize]) -> Vec<bool> {
    (0..mask.len()).map(|i| mask[i] || mask[sibling[i]]).collect()
}

/// Parity probability of staying in `region` forever and winning, on an MDP
/// whose choices inside `region` are all fixed.
fn inside_value(cur: &ExplicitMdp, region: &[bool]) -> Result<Vec<Rat>> {
    let out: Vec<bool> = region.iter().map(|b| !b).collect();
    let enc = encode::avoiding(cur, &out);
    attainment(&enc, &MdStrategy::lowest(&enc), &Objective::Parity)
}

/// Runs `rounds` rounds from the closed set `l0` of a layered MDP given by
/// `m` and its sibling map. Every state must win almost surely.
pub fn sea_urchin_rounds(
    m: &ExplicitMdp,
    sibling: &[usize],
    l0: &[usize],
    rounds: usize,
    params: &UrchinParams,
) -> Result<UrchinOutcome> {
    params.validate()?;
    if rounds == 0 {
        return Err(Error::BadParams("at least one round".into()));
    }
    require_almost_sure(m)?;
    let n = m.len();
    let mut cur = m.clone();
    let mut sigma: Vec<Option<usize>> = vec![None; n];
    let mut fixed = vec![false; n];
    let mut a_all = vec![false; n];
    let mut b_all = vec![false; n];
    let mut p_prev: Vec<Rat> = vec![Rat::zero(); l0.len()];
    let mut radius = 0;
    let mut out_rounds = Vec::new();
    let mut checks = CheckReport::new("urchin");
    let mut provenance = Vec::new();

    for i in 0..rounds {
        let round = i + 1;
        let err = params.err(round);
        let avoid = close(&fixed, sibling);
        let enc = encode::avoiding(&cur, &avoid);
        let spike = match params.engine {
            SpikeEngine::Exact => solve_parity(&enc).witness,
            SpikeEngine::Plaster => {
                let all: Vec<usize> = (0..n).collect();
                let (s, rep) = plaster_core(&enc, sibling, &all, &err)?;
                let mut rep = rep.checks;
                rep.suite = format!("round {round} spike");
                checks.extend(rep);
                s
            }
        };
        let att = attainment(&enc, &spike, &Objective::Parity)?;
        let a: Vec<bool> = att.iter().map(|v| v >= &params.alpha).collect();
        let b: Vec<bool> = att.iter().map(|v| v >= &params.beta).collect();
        let g: Vec<bool> = att.iter().map(|v| v >= &params.gamma).collect();
        checks.push(
            format!("round {round} spike avoids closure of fixed region"),
            (0..n).all(|s| !g[s] || !avoid[s]),
            String::new(),
        );
        // candidate starting states: high value for the new objective
        let val = solve_parity(&enc).values;
        let need = Rat::one() - &err;
        checks.push(
            format!("round {round} high-value states are in A"),
            (0..n).all(|s| val[s] < need || a_all[s] || a[s]),
            String::new(),
        );
        for s in 0..n {
            if b[s] && cur.is_controlled(s) {
                sigma[s] = spike.get(s);
            }
        }
        let spiked = fix_strategy(&cur, &spike, &b)?;
        provenance.push((format!("B_{round}"), m.ids_of(&b)));
        for s in 0..n {
            a_all[s] |= a[s];
            b_all[s] |= b[s];
        }

        // grow the body until the progress bound holds
        let mut k = radius;
        let (next, body, p) = loop {
            let h = bubble(m, l0, k).members;
            let outside: Vec<bool> = h.iter().map(|x| !x).collect();
            let reach = max_reach(&spiked, &a_all, &outside).witness;
            let mut free = vec![false; n];
            for s in 0..n {
                free[s] = h[s] && spiked.is_controlled(s);
            }
            let next = fix_strategy(&spiked, &reach, &free)?;
            let region: Vec<bool> = (0..n).map(|s| b_all[s] || h[s]).collect();
            let v = inside_value(&next, &region)?;
            let p: Vec<Rat> = l0.iter().map(|&s| v[s].clone()).collect();
            let good = p.iter().zip(&p_prev).all(|(p, q)| p >= &(q + (Rat::one() - q) / rat(2, 1)));
            if good {
                for s in 0..n {
                    if free[s] {
                        sigma[s] = reach.get(s);
                    }
                }
                provenance.push((format!("H_{round}"), m.ids_of(&free)));
                break (next, region, p);
            }
            let grown = bubble(m, l0, k + 1).members;
            if grown == h || k >= params.max_radius {
                let worst = p.iter().min().cloned().unwrap_or_else(Rat::zero);
                return Err(Error::RadiusExhausted { round, radius: k, achieved: fmt_rat(&worst) });
            }
            k += 1;
        };
        radius = k;
        let floor = Rat::one() - pow2_neg(round as u32);
        checks.push(
            format!("round {round} p >= 1 - 2^-{round}"),
            p.iter().all(|x| x >= &floor),
            p.iter().map(fmt_rat).collect::<Vec<_>>().join(" "),
        );
        checks.push(
            format!("round {round} p nondecreasing"),
            p.iter().zip(&p_prev).all(|(x, y)| x >= y),
            String::new(),
        );
        out_rounds.push(UrchinRound {
            round,
            radius,
            body: body.iter().filter(|x| **x).count(),
            a: a.iter().filter(|x| **x).count(),
            b: b.iter().filter(|x| **x).count(),
            g: g.iter().filter(|x| **x).count(),
            p: p.clone(),
        });
        cur = next;
        fixed = body;
        p_prev = p;
    }
    Ok(UrchinOutcome { fixed_mdp: cur, strategy: MdStrategy(sigma), fixed, rounds: out_rounds, checks, provenance })
}
