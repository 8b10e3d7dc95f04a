//! MD constructions for safety, reachability, co-Büchi and {0,1,2}-parity,
//! and the stitching of almost-surely winning MD strategies.

use num::{One, Zero};

use crate::analysis::{attainment, solve_parity, solve_reach, solve_safety, CheckReport, Objective};
use crate::mdp::graph::{is_acyclic_up_to_sinks, reach_where};
use crate::mdp::ExplicitMdp;
use crate::num::{fmt_rat, pow2_neg, rat, Rat};
use crate::strategy::{fix_strategy, MdStrategy};
use crate::transform::condition;
use crate::{Error, Result};

fn check_eps(eps: &Rat) -> Result<()> {
    if eps <= &Rat::zero() || eps >= &Rat::one() {
        return Err(Error::BadParams(format!("epsilon must lie in (0,1), got {}", fmt_rat(eps))));
    }
    Ok(())
}

fn check_colors(m: &ExplicitMdp, allowed: &[u32]) -> Result<()> {
    match (0..m.len()).find(|&i| !allowed.contains(&m.color(i))) {
        Some(i) => {
            Err(Error::Precondition(format!("state \"{}\" has color {} outside {:?}", m.id(i), m.color(i), allowed)))
        }
        None => Ok(()),
    }
}

/// MD strategy for staying out of `target` on an acyclic MDP. Each state
/// may lose a factor `1 - eps * 2^-(i+1)` of its value (`i` its index), so
/// the attainment is at least `(1 - eps) * val` everywhere.
pub fn safety_eps_md(m: &ExplicitMdp, target: &[bool], eps: &Rat) -> Result<MdStrategy> {
    check_eps(eps)?;
    if let Err(s) = is_acyclic_up_to_sinks(m) {
        return Err(Error::NotAcyclic(m.id(s).to_string()));
    }
    let val = solve_safety(m, target).values;
    let sigma = (0..m.len())
        .map(|s| {
            if !m.is_controlled(s) {
                return None;
            }
            let slack = Rat::one() - eps * pow2_neg(s as u32 + 1);
            let need = &val[s] * slack;
            m.succ(s).iter().copied().filter(|&t| val[t] >= need).min()
        })
        .collect();
    Ok(MdStrategy(sigma))
}

/// On finite MDPs the optimal reachability witness is ε-optimal for every ε.
pub fn reach_eps_md(m: &ExplicitMdp, target: &[bool], eps: &Rat) -> Result<MdStrategy> {
    check_eps(eps)?;
    Ok(solve_reach(m, target).witness)
}

/// Parameters and outcome of the co-Büchi construction.
#[derive(Clone, Debug)]
pub struct CobuchiReport {
    pub eps1: Rat,
    pub eps2: Rat,
    pub k: Rat,
    pub lambda: Rat,
    pub tau1: Rat,
    pub tau2: Rat,
    /// States where the avoiding strategy is fixed.
    pub s_prime: Vec<bool>,
    pub values: Vec<Rat>,
    pub attainment: Vec<Rat>,
    pub checks: CheckReport,
}

/// ε-optimal MD strategy for co-Büchi (colors 0 and 1; win by eventually
/// never seeing 1). Plays the optimal avoiding strategy where it keeps
/// safety above `tau1`, elsewhere heads for states of safety value `tau2`.
pub fn cobuchi_eps_md(m: &ExplicitMdp, eps: &Rat) -> Result<(MdStrategy, CobuchiReport)> {
    check_eps(eps)?;
    check_colors(m, &[0, 1])?;
    let eps1 = eps / rat(4, 1);
    let eps2 = eps1.clone();
    let k = rat(2, 1) / eps;
    let lambda = &eps1 / (rat(2, 1) * &k);
    let tau1 = Rat::one() - &eps1;
    let tau2 = Rat::one() - &eps1 / &k + &lambda;

    let bad = m.mask_where(|c| c == 1);
    let av = solve_safety(m, &bad);
    let av_att = attainment(m, &av.witness, &Objective::Safety(bad.clone()))?;
    let s_prime: Vec<bool> = av_att.iter().map(|v| v >= &tau1).collect();
    let m1 = fix_strategy(m, &av.witness, &s_prime)?;
    let safe_val = solve_safety(&m1, &bad).values;
    let core: Vec<bool> = safe_val.iter().map(|v| v >= &tau2).collect();
    let reach = solve_reach(&m1, &core).witness;
    let sigma = MdStrategy(
        (0..m.len())
            .map(|s| {
                if !m.is_controlled(s) {
                    None
                } else if s_prime[s] {
                    av.witness.get(s)
                } else {
                    reach.get(s)
                }
            })
            .collect(),
    );

    let values = solve_parity(m).values;
    let att = attainment(m, &sigma, &Objective::Parity)?;
    let mut checks = CheckReport::new("cobuchi");
    let chain_factor = Rat::one() - Rat::one() / &k;
    for s in 0..m.len() {
        let lo = &values[s] - eps;
        checks.push(
            format!("eps-optimal {}", m.id(s)),
            att[s] >= lo,
            format!("attains {} against value {}", fmt_rat(&att[s]), fmt_rat(&values[s])),
        );
        let chain = (&values[s] - &eps1 - &eps2) * &chain_factor;
        checks.push(
            format!("proof chain {}", m.id(s)),
            att[s] >= chain,
            format!("attains {} against {}", fmt_rat(&att[s]), fmt_rat(&chain)),
        );
    }
    let report = CobuchiReport { eps1, eps2, k, lambda, tau1, tau2, s_prime, values, attainment: att, checks };
    Ok((sigma, report))
}

/// Fails with `NotAlmostSure` naming the first state of parity value below 1.
pub fn require_almost_sure(m: &ExplicitMdp) -> Result<Vec<Rat>> {
    let v = solve_parity(m).values;
    match v.iter().position(|x| !x.is_one()) {
        Some(s) => Err(Error::NotAlmostSure(m.id(s).to_string())),
        None => Ok(v),
    }
}

/// Almost-surely winning MD strategy for {0,1,2}-parity on an MDP where
/// every state wins almost surely. Inside Safe(1/3) of the optimal strategy
/// for staying in color 0 that strategy is fixed; elsewhere the controller
/// goes almost surely to Safe(2/3) or a color-2 state.
pub fn as012_md(m: &ExplicitMdp) -> Result<MdStrategy> {
    check_colors(m, &[0, 1, 2])?;
    require_almost_sure(m)?;
    let bad = m.mask_where(|c| c != 0);
    let safe = solve_safety(m, &bad).witness;
    let att = attainment(m, &safe, &Objective::Safety(bad))?;
    let third: Vec<bool> = att.iter().map(|v| v >= &rat(1, 3)).collect();
    let m1 = fix_strategy(m, &safe, &third)?;
    let target: Vec<bool> = (0..m.len()).map(|s| att[s] >= rat(2, 3) || m.color(s) == 2).collect();
    let reach = solve_reach(&m1, &target);
    if let Some(s) = reach.values.iter().position(|v| !v.is_one()) {
        return Err(Error::NotAlmostSure(m.id(s).to_string()));
    }
    Ok(MdStrategy(
        (0..m.len())
            .map(|s| {
                if !m.is_controlled(s) {
                    None
                } else if third[s] {
                    safe.get(s)
                } else {
                    reach.witness.get(s)
                }
            })
            .collect(),
    ))
}

/// Stitches one MD strategy that wins almost surely from every state.
/// Repeatedly takes the least unfixed state `s`, asks `engine` for an MD
/// strategy of the partially fixed MDP that wins almost surely from `s`, and
/// fixes it on the region it reaches from `s`. Returns the strategy and the
/// number of rounds.
pub fn uniformize_as(
    m: &ExplicitMdp,
    engine: impl Fn(&ExplicitMdp, usize) -> Result<MdStrategy>,
) -> Result<(MdStrategy, usize)> {
    require_almost_sure(m)?;
    let n = m.len();
    let mut cur = m.clone();
    let mut done = vec![false; n];
    let mut sigma: Vec<Option<usize>> = vec![None; n];
    let mut rounds = 0;
    while let Some(s) = done.iter().position(|d| !d) {
        let tau = engine(&cur, s)?;
        let reach = reach_where(n, &[s], |i| {
            if cur.is_controlled(i) {
                tau.get(i).into_iter().collect()
            } else {
                cur.succ(i).to_vec()
            }
        });
        for i in 0..n {
            if reach[i] {
                done[i] = true;
                if cur.is_controlled(i) {
                    sigma[i] = tau.get(i);
                }
            }
        }
        cur = fix_strategy(&cur, &tau, &reach)?;
        rounds += 1;
    }
    Ok((MdStrategy(sigma), rounds))
}

/// Optimal MD strategy for {0,1,2}-parity from every state: condition on
/// winning, stitch almost-surely winning strategies there, map back.
pub fn parity012_opt_md(m: &ExplicitMdp) -> Result<(MdStrategy, CheckReport)> {
    check_colors(m, &[0, 1, 2])?;
    let values = solve_parity(m).values;
    let sigma = match condition(m, &values) {
        Ok(c) => {
            let (star, _) = uniformize_as(&c.mdp, |x, _| as012_md(x))?;
            c.lift(m, &star)
        }
        Err(Error::EmptyConditioned) => MdStrategy::lowest(m),
        Err(e) => return Err(e),
    };
    let att = attainment(m, &sigma, &Objective::Parity)?;
    let mut checks = CheckReport::new("parity012");
    for s in 0..m.len() {
        checks.push(
            format!("optimal {}", m.id(s)),
            att[s] == values[s],
            format!("attains {} against value {}", fmt_rat(&att[s]), fmt_rat(&values[s])),
        );
    }
    Ok((sigma, checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;

    #[test]
    fn safety_tie_picks_lowest() {
        let m = MdpBuilder::new()
            .controlled("s", 0, &["a", "b"])
            .controlled("a", 0, &["a"])
            .controlled("b", 0, &["b"])
            .build()
            .unwrap();
        let s = safety_eps_md(&m, &[false; 3], &rat(1, 10)).unwrap();
        assert_eq!(s.get(0), Some(1));
    }

    #[test]
    fn cobuchi_parameters() {
        let m = MdpBuilder::new().controlled("s", 0, &["s"]).build().unwrap();
        let (_, r) = cobuchi_eps_md(&m, &rat(1, 10)).unwrap();
        assert_eq!(r.eps1, rat(1, 40));
        assert_eq!(r.k, rat(20, 1));
        assert_eq!(r.tau1, rat(39, 40));
        assert!(r.checks.ok());
    }

    #[test]
    fn two_components_need_two_rounds() {
        let m = MdpBuilder::new().controlled("a", 2, &["a"]).controlled("b", 2, &["b"]).build().unwrap();
        let (s, rounds) = uniformize_as(&m, |x, _| Ok(solve_parity(x).witness)).unwrap();
        assert_eq!(rounds, 2);
        assert_eq!(s.get(1), Some(1));
    }

    #[test]
    fn not_almost_sure_is_rejected() {
        let m = MdpBuilder::new().controlled("a", 1, &["a"]).build().unwrap();
        assert!(matches!(uniformize_as(&m, |x, _| as012_md(x)), Err(Error::NotAlmostSure(_))));
    }
}
