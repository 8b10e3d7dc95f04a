//! Plastering an ε-optimal MD strategy for parity on a layered MDP, one even
//! color at a time, then a reachability layer towards the cores.

use num::{One, Zero};

use super::encode;
use crate::analysis::{attainment, solve_parity, solve_reach, CheckReport, Objective};
use crate::mdp::ExplicitMdp;
use crate::num::{fmt_rat, rat, Rat};
use crate::strategy::{fix_strategy, MdStrategy};
use crate::transform::LayeredMdp;
use crate::{Error, Result};

/// One color iteration.
#[derive(Clone, Debug)]
pub struct PlasterIteration {
    pub color: u32,
    pub r: Vec<bool>,
    pub fix: Vec<bool>,
    pub core: Vec<bool>,
    /// Lowest ψ-value minus the lower bound of the invariant over L0.
    pub invariant_slack: Rat,
}

#[derive(Clone, Debug)]
pub struct PlasterReport {
    pub gamma: Rat,
    pub beta: Rat,
    pub alpha: Rat,
    pub e_max: u32,
    /// Colors were shifted by +2 because color 0 occurred.
    pub shifted: bool,
    pub iterations: Vec<PlasterIteration>,
    pub values: Vec<Rat>,
    pub attainment: Vec<Rat>,
    pub checks: CheckReport,
    /// Which step fixed each region, in order.
    pub provenance: Vec<(String, Vec<String>)>,
}

impl PlasterReport {
    pub fn ok(&self) -> bool {
        self.checks.ok()
    }
}

/// γ = ε/(e_max+2), β = 1-γ, α = 1-γ².
pub fn thresholds(eps: &Rat, e_max: u32) -> (Rat, Rat, Rat) {
    let gamma = eps / rat(e_max as i64 + 2, 1);
    let beta = Rat::one() - &gamma;
    let alpha = Rat::one() - &gamma * &gamma;
    (gamma, beta, alpha)
}

fn close(mask: &[bool], sibling: &[usize]) -> Vec<bool> {
    (0..mask.len()).map(|i| mask[i] || mask[sibling[i]]).collect()
}

/// ε-optimal MD strategy from every state of the closed set `l0` of an
/// acyclic layered MDP.
pub fn plaster_parity(l: &LayeredMdp, l0: &[usize], eps: &Rat) -> Result<(MdStrategy, PlasterReport)> {
    if let Err(s) = l.is_acyclic_up_to_sinks() {
        return Err(Error::NotAcyclic(l.mdp.id(s).to_string()));
    }
    plaster_core(&l.mdp, &l.sibling, l0, eps)
}

/// The construction on any finite MDP with a sibling map. Acyclicity is what
/// the guarantee rests on; without it the checks in the report still tell
/// whether this instance came out ε-optimal.
pub fn plaster_core(
    m: &ExplicitMdp,
    sibling: &[usize],
    l0: &[usize],
    eps: &Rat,
) -> Result<(MdStrategy, PlasterReport)> {
    plaster_core_with_gamma(m, sibling, l0, eps, None)
}

/// [`plaster_core`] with γ forced instead of ε/(e_max+2); β and α follow
/// from it as usual.
pub fn plaster_core_with_gamma(
    m: &ExplicitMdp,
    sibling: &[usize],
    l0: &[usize],
    eps: &Rat,
    gamma: Option<&Rat>,
) -> Result<(MdStrategy, PlasterReport)> {
    if eps <= &Rat::zero() || eps >= &Rat::one() {
        return Err(Error::BadParams(format!("epsilon must lie in (0,1), got {}", fmt_rat(eps))));
    }
    let n = m.len();
    let shifted = m.colors().contains(&0);
    let base = if shifted { m.with_colors(|_, c| c + 2) } else { m.clone() };
    let e_max = base.colors().into_iter().filter(|c| c % 2 == 0).max().unwrap_or(0);
    let (gamma, beta, alpha) = match gamma {
        None => thresholds(eps, e_max),
        Some(g) if g > &Rat::zero() && g < &Rat::one() => (g.clone(), Rat::one() - g, Rat::one() - g * g),
        Some(g) => return Err(Error::BadParams(format!("gamma must lie in (0,1), got {}", fmt_rat(g)))),
    };
    let values = solve_parity(&base).values;
    let mut checks = CheckReport::new("plaster");
    checks.push(
        "thresholds",
        alpha > beta && beta > Rat::zero(),
        format!("gamma {} beta {} alpha {}", fmt_rat(&gamma), fmt_rat(&beta), fmt_rat(&alpha)),
    );

    let mut cur = base.clone();
    let mut sigma: Vec<Option<usize>> = vec![None; n];
    let mut fixed_all = vec![false; n];
    let mut cores = vec![false; n];
    let mut iterations = Vec::new();
    let mut provenance = Vec::new();
    let stay_bound = (&alpha - &beta) / (Rat::one() - &beta);
    checks.push(
        "stay bound",
        stay_bound >= Rat::one() - &gamma,
        format!("(alpha-beta)/(1-beta) = {}", fmt_rat(&stay_bound)),
    );

    for e in (2..=e_max).step_by(2) {
        let theta = encode::theta(&cur, &fixed_all, e);
        let sol = solve_parity(&theta);
        let tau = sol.witness;
        let att = attainment(&theta, &tau, &Objective::Parity)?;
        let r: Vec<bool> = sol.values.iter().map(|v| v >= &alpha).collect();
        let fix: Vec<bool> = att.iter().map(|v| v >= &beta).collect();
        let core: Vec<bool> = att.iter().map(|v| v >= &alpha).collect();
        checks.push(
            format!("R_{e} within fix_{e}"),
            (0..n).all(|s| !r[s] || fix[s]),
            format!("|R| = {}, |fix| = {}", count(&r), count(&fix)),
        );
        checks.push(
            format!("fix_{e} disjoint from earlier regions"),
            (0..n).all(|s| !fix[s] || !fixed_all[s]),
            String::new(),
        );
        for s in 0..n {
            if fix[s] && cur.is_controlled(s) {
                sigma[s] = tau.get(s);
            }
        }
        cur = fix_strategy(&cur, &tau, &fix)?;
        provenance.push((format!("fix_{e}"), base.ids_of(&fix)));

        // staying in fix_e from the core, and winning through e when staying
        let leave: Vec<bool> = fix.iter().map(|b| !b).collect();
        let stay = attainment(&cur, &MdStrategy::lowest(&cur), &Objective::Safety(leave.clone()))?;
        let through = encode::sink_encode(&cur, &vec![false; n], &leave, |_, c| if c == e { 2 } else { 1 });
        let through = attainment(&through, &MdStrategy::lowest(&through), &Objective::Parity)?;
        for s in (0..n).filter(|&s| core[s]) {
            checks.push(
                format!("core_{e} {} stays", base.id(s)),
                stay[s] >= stay_bound,
                format!("P(G fix) = {}", fmt_rat(&stay[s])),
            );
            checks.push(format!("core_{e} {} wins when staying", base.id(s)), through[s].is_one(), String::new());
        }

        fixed_all = close(&fixed_all, sibling);
        for s in 0..n {
            fixed_all[s] = fixed_all[s] || fix[s] || fix[sibling[s]];
            cores[s] = cores[s] || core[s];
        }
        let psi = encode::psi(&cur, &fixed_all, &cores, e);
        let pv = solve_parity(&psi.mdp).values;
        let slack_of = |s: usize| &pv[psi.start(s, &fixed_all)] - (&values[s] - rat(e as i64, 1) * &gamma);
        let slack = l0.iter().map(|&s| slack_of(s)).min().unwrap_or_else(Rat::zero);
        checks.push(format!("invariant after color {e}"), slack >= Rat::zero(), format!("slack {}", fmt_rat(&slack)));
        iterations.push(PlasterIteration { color: e, r, fix, core, invariant_slack: slack });
    }

    let reach = solve_reach(&cur, &cores).witness;
    let mut rest = vec![false; n];
    for s in 0..n {
        if cur.is_controlled(s) {
            sigma[s] = reach.get(s);
            rest[s] = true;
        }
    }
    provenance.push(("reach".to_string(), base.ids_of(&rest)));
    let sigma = MdStrategy(sigma);
    let att = attainment(&base, &sigma, &Objective::Parity)?;
    for &s in l0 {
        let lo = &values[s] - eps;
        checks.push(
            format!("eps-optimal {}", base.id(s)),
            att[s] >= lo,
            format!("attains {} against value {}", fmt_rat(&att[s]), fmt_rat(&values[s])),
        );
    }
    let report =
        PlasterReport { gamma, beta, alpha, e_max, shifted, iterations, values, attainment: att, checks, provenance };
    Ok((sigma, report))
}

fn count(mask: &[bool]) -> usize {
    mask.iter().filter(|b| **b).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;
    use crate::transform::layer;

    #[test]
    fn thresholds_for_two_colors() {
        let (g, b, a) = thresholds(&rat(2, 5), 2);
        assert_eq!((g, b, a), (rat(1, 10), rat(9, 10), rat(99, 100)));
    }

    #[test]
    fn all_color_two_is_fixed_in_one_go() {
        let m = MdpBuilder::new()
            .controlled("a", 2, &["b", "c"])
            .controlled("b", 2, &["b"])
            .controlled("c", 2, &["c"])
            .build()
            .unwrap();
        let l = layer(&m);
        let l0: Vec<usize> = (0..l.mdp.len()).collect();
        let (_, r) = plaster_parity(&l, &l0, &rat(1, 10)).unwrap();
        assert!(r.ok(), "{:?}", r.checks.failures());
        assert_eq!(r.iterations.len(), 1);
        assert!(r.iterations[0].fix.iter().all(|b| *b));
        assert!(r.attainment.iter().all(|v| v.is_one()));
    }
}
