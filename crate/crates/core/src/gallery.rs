//! Parameterized model families and random instance generators.

use std::collections::BTreeMap;

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mdp::{Branching, ExplicitMdp, MdpBuilder, MdpModel, State, Succs};
use crate::num::{parse_rat, pow2_neg, rat, Rat};
use crate::strategy::{Mode, Strategy, StrategyClass};
use crate::transform::ladderize;
use crate::{Error, Result};

pub type Params = BTreeMap<String, String>;

/// One catalog entry.
#[derive(Clone, Debug)]
pub struct Family {
    pub name: &'static str,
    pub doc: &'static str,
    /// (name, default, doc)
    pub params: &'static [(&'static str, &'static str, &'static str)],
}

const FAMILIES: &[Family] = &[
    Family {
        name: "fig3",
        doc: "a -> b, b -> c | d; the small frame used to illustrate layering. c (color 2) and d (color 1) are absorbing.",
        params: &[("p", "1/2", "probability of b -> c")],
    },
    Family {
        name: "walk",
        doc: "Random walk on the naturals moving up with probability p. Buchi: the origin has color 2, the rest 1. \
              Cobuchi: the origin has color 1, the rest 0.",
        params: &[
            ("p", "1/2", "probability of moving up"),
            ("restart", "false", "let every state jump back to the origin"),
            ("objective", "buchi", "buchi or cobuchi"),
        ],
    },
    Family {
        name: "ladder",
        doc: "A root with successors y1, y2, ... replaced by its ladder gadget. Rungs have color 1, the leaves \
              alternate colors 4 and 3 (after the +2 shift).",
        params: &[
            ("weights", "geometric", "comma separated weights summing to 1, or geometric for 1/2, 1/4, ..."),
            ("controlled", "false", "controlled root instead of random"),
        ],
    },
    Family {
        name: "as_win_walk",
        doc: "Walk drifting to the origin (color 2) where each state picks between two downward-biased steps; \
              every state wins almost surely.",
        params: &[("p", "1/3", "upward probability of the first step, at most 1/2")],
    },
    Family {
        name: "acyclic_dag",
        doc: "Random DAG whose only cycles are absorbing sinks; colors 1 to 4.",
        params: &[("n", "10", "number of states"), ("seed", "0", "generator seed")],
    },
    Family {
        name: "random",
        doc: "Random finite MDP with out-degree at most 3 and colors 0 to 4.",
        params: &[("n", "6", "number of states"), ("seed", "0", "generator seed")],
    },
];

pub fn list() -> &'static [Family] {
    FAMILIES
}

/// Parses `name` or `name(k=v,...)`.
pub fn parse_spec(spec: &str) -> Result<(String, Params)> {
    let spec = spec.trim();
    let Some(open) = spec.find('(') else {
        return Ok((spec.to_string(), Params::new()));
    };
    if !spec.ends_with(')') {
        return Err(Error::Parse(format!("unbalanced family spec {spec:?}")));
    }
    let name = spec[..open].trim().to_string();
    let inner = &spec[open + 1..spec.len() - 1];
    let mut params = Params::new();
    // weights lists use ';' or ',' inside brackets
    let mut depth = 0;
    let mut cur = String::new();
    let mut parts = Vec::new();
    for c in inner.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        parts.push(cur);
    }
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {p:?}")))?;
        params.insert(k.trim().to_string(), v.trim().trim_matches(|c| c == '[' || c == ']').to_string());
    }
    Ok((name, params))
}

fn family(name: &str) -> Result<&'static Family> {
    FAMILIES.iter().find(|f| f.name == name).ok_or_else(|| Error::UnknownFamily(name.to_string()))
}

fn get(f: &Family, params: &Params, key: &str) -> Result<String> {
    for k in params.keys() {
        if !f.params.iter().any(|(n, _, _)| n == k) {
            return Err(Error::BadParams(format!("{} has no parameter {k:?}", f.name)));
        }
    }
    let default = f.params.iter().find(|(n, _, _)| *n == key).map(|(_, d, _)| *d).expect("declared parameter");
    Ok(params.get(key).cloned().unwrap_or_else(|| default.to_string()))
}

fn prob(f: &Family, params: &Params, key: &str) -> Result<Rat> {
    let r = parse_rat(&get(f, params, key)?).map_err(|e| Error::BadParams(e.to_string()))?;
    if r <= Rat::zero() || r >= Rat::one() {
        return Err(Error::BadParams(format!("{key} must lie strictly between 0 and 1")));
    }
    Ok(r)
}

fn flag(f: &Family, params: &Params, key: &str) -> Result<bool> {
    match get(f, params, key)?.as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        v => Err(Error::BadParams(format!("{key} must be a boolean, got {v:?}"))),
    }
}

fn nat(f: &Family, params: &Params, key: &str) -> Result<u64> {
    get(f, params, key)?.parse().map_err(|_| Error::BadParams(format!("{key} must be a natural number")))
}

/// Builds a family instance.
pub fn build(name: &str, params: &Params) -> Result<Box<dyn MdpModel>> {
    let f = family(name)?;
    Ok(match name {
        "fig3" => Box::new(fig3(&prob(f, params, "p")?)),
        "walk" => {
            let cobuchi = match get(f, params, "objective")?.as_str() {
                "buchi" => false,
                "cobuchi" => true,
                o => return Err(Error::BadParams(format!("objective must be buchi or cobuchi, got {o:?}"))),
            };
            Box::new(Walk { p: prob(f, params, "p")?, restart: flag(f, params, "restart")?, cobuchi })
        }
        "ladder" => {
            let w = get(f, params, "weights")?;
            let weights = if w == "geometric" {
                None
            } else {
                let v = w
                    .split([',', ';'])
                    .map(|x| parse_rat(x).map_err(|e| Error::BadParams(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                if v.iter().any(|x| x <= &Rat::zero()) || v.iter().fold(Rat::zero(), |a, b| a + b) != Rat::one() {
                    return Err(Error::BadParams("weights must be positive and sum to 1".into()));
                }
                Some(v)
            };
            let finite = weights.is_some();
            let fan = Fan { weights, controlled: flag(f, params, "controlled")? };
            Box::new(ladderize(fan, finite.then_some(1)))
        }
        "as_win_walk" => {
            let p = prob(f, params, "p")?;
            if p > rat(1, 2) {
                return Err(Error::BadParams("p must be at most 1/2".into()));
            }
            Box::new(AsWinWalk { p })
        }
        "acyclic_dag" => {
            let n = nat(f, params, "n")? as usize;
            if n < 2 {
                return Err(Error::BadParams("n must be at least 2".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(nat(f, params, "seed")?);
            Box::new(random_dag(&mut rng, n, 3, &[1, 2, 3, 4]))
        }
        "random" => {
            let n = nat(f, params, "n")? as usize;
            if n < 1 {
                return Err(Error::BadParams("n must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(nat(f, params, "seed")?);
            Box::new(random_mdp(&mut rng, n, 3, &[0, 1, 2, 3, 4]))
        }
        _ => unreachable!("catalog and builder agree"),
    })
}

/// Whether the instance has finitely many reachable states, so that it can
/// be materialized without truncation.
pub fn is_finite(name: &str, params: &Params) -> bool {
    match name {
        "fig3" | "acyclic_dag" | "random" => true,
        "ladder" => params.get("weights").is_some_and(|w| w != "geometric"),
        _ => false,
    }
}

pub fn build_spec(spec: &str) -> Result<Box<dyn MdpModel>> {
    let (name, params) = parse_spec(spec)?;
    build(&name, &params)
}

pub fn fig3(p: &Rat) -> ExplicitMdp {
    MdpBuilder::new()
        .controlled("a", 1, &["b"])
        .random("b", 1, &[("c", p.clone()), ("d", Rat::one() - p)])
        .controlled("c", 2, &["c"])
        .controlled("d", 1, &["d"])
        .build()
        .expect("fig3 is valid")
}

/// Random walk on the naturals.
#[derive(Clone, Debug)]
pub struct Walk {
    pub p: Rat,
    pub restart: bool,
    pub cobuchi: bool,
}

impl MdpModel for Walk {
    fn initial(&self) -> Vec<String> {
        vec!["0".into()]
    }

    fn is_controlled(&self, s: &str) -> bool {
        s == "0" || (self.restart && !s.ends_with('+'))
    }

    fn color(&self, s: &str) -> u32 {
        match (s == "0", self.cobuchi) {
            (true, false) => 2,
            (false, false) => 1,
            (true, true) => 1,
            (false, true) => 0,
        }
    }

    fn successors(&self, s: &str) -> Succs<'_> {
        if s == "0" {
            return Succs::finite(vec![("1".into(), None)]);
        }
        let (base, step) = match s.strip_suffix('+') {
            Some(b) => (b, true),
            None => (s, !self.restart),
        };
        let n: u64 = base.parse().unwrap_or(0);
        if !step {
            return Succs::finite(vec![(format!("{n}+"), None), ("0".into(), None)]);
        }
        Succs::finite(vec![
            ((n - 1).to_string(), Some(Rat::one() - &self.p)),
            ((n + 1).to_string(), Some(self.p.clone())),
        ])
    }

    fn declared_finitely_branching(&self) -> bool {
        true
    }
}

/// Root with successors y1, y2, ...; leaves are absorbing.
#[derive(Clone, Debug)]
pub struct Fan {
    pub weights: Option<Vec<Rat>>,
    pub controlled: bool,
}

impl MdpModel for Fan {
    fn initial(&self) -> Vec<String> {
        vec!["x".into()]
    }

    fn is_controlled(&self, s: &str) -> bool {
        s != "x" || self.controlled
    }

    fn color(&self, s: &str) -> u32 {
        match s.strip_prefix('y').and_then(|i| i.parse::<u64>().ok()) {
            Some(i) if i % 2 == 1 => 2,
            _ => 1,
        }
    }

    fn successors(&self, s: &str) -> Succs<'_> {
        if s != "x" {
            return Succs::finite(vec![(s.to_string(), None)]);
        }
        let controlled = self.controlled;
        match &self.weights {
            Some(w) => Succs::finite(
                w.iter().enumerate().map(|(i, p)| (format!("y{}", i + 1), (!controlled).then(|| p.clone()))).collect(),
            ),
            None => Succs {
                branching: Branching::Infinite,
                iter: Box::new((1u32..).map(move |i| (format!("y{i}"), (!controlled).then(|| pow2_neg(i))))),
            },
        }
    }
}

/// Everywhere almost-surely winning walk.
#[derive(Clone, Debug)]
pub struct AsWinWalk {
    pub p: Rat,
}

impl MdpModel for AsWinWalk {
    fn initial(&self) -> Vec<String> {
        vec!["0".into()]
    }

    fn is_controlled(&self, s: &str) -> bool {
        !s.contains(':')
    }

    fn color(&self, s: &str) -> u32 {
        if s == "0" {
            2
        } else {
            1
        }
    }

    fn successors(&self, s: &str) -> Succs<'_> {
        if s == "0" {
            return Succs::finite(vec![("1".into(), None)]);
        }
        match s.split_once(':') {
            None => Succs::finite(vec![(format!("{s}:l"), None), (format!("{s}:r"), None)]),
            Some((n, side)) => {
                let n: u64 = n.parse().unwrap_or(1);
                let up = if side == "l" { self.p.clone() } else { &self.p / rat(2, 1) };
                Succs::finite(vec![((n - 1).to_string(), Some(Rat::one() - &up)), ((n + 1).to_string(), Some(up))])
            }
        }
    }

    fn declared_finitely_branching(&self) -> bool {
        true
    }
}

/// Random distribution over `succ` with small denominators.
fn random_dist(rng: &mut impl Rng, succ: &[usize]) -> Vec<(usize, Rat)> {
    let w: Vec<i64> = succ.iter().map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = w.iter().sum();
    succ.iter().zip(w).map(|(&t, x)| (t, rat(x, total))).collect()
}

fn pick_succ(rng: &mut impl Rng, pool: &[usize], max_deg: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=max_deg.min(pool.len()));
    let mut v: Vec<usize> = pool.choose_multiple(rng, k).copied().collect();
    v.sort_unstable();
    v
}

/// Random MDP on `n` states, states named s0, s1, ... About one state in
/// five is absorbing, which keeps fractional values common.
pub fn random_mdp(rng: &mut impl Rng, n: usize, max_deg: usize, colors: &[u32]) -> ExplicitMdp {
    let pool: Vec<usize> = (0..n).collect();
    let states = (0..n)
        .map(|i| {
            let succ = pick_succ(rng, &pool, max_deg);
            let color = *colors.choose(rng).expect("colors");
            let id = format!("s{i}");
            if n > 1 && rng.gen_bool(0.2) {
                State::absorbing(id, color, i)
            } else if rng.gen_bool(0.4) {
                State::controlled(id, color, succ)
            } else {
                State::random(id, color, random_dist(rng, &succ))
            }
        })
        .collect();
    ExplicitMdp::checked(states, vec![0]).expect("generated MDP is valid")
}

/// Random DAG on `n` states whose last one to three states are absorbing.
pub fn random_dag(rng: &mut impl Rng, n: usize, max_deg: usize, colors: &[u32]) -> ExplicitMdp {
    let sinks = rng.gen_range(1..=3.min(n - 1));
    let states = (0..n)
        .map(|i| {
            let color = *colors.choose(rng).expect("colors");
            let id = format!("s{i}");
            if i >= n - sinks {
                return State::absorbing(id, color, i);
            }
            let pool: Vec<usize> = (i + 1..n).collect();
            let succ = pick_succ(rng, &pool, max_deg);
            if rng.gen_bool(0.5) {
                State::controlled(id, color, succ)
            } else {
                State::random(id, color, random_dist(rng, &succ))
            }
        })
        .collect();
    ExplicitMdp::checked(states, vec![0]).expect("generated DAG is valid")
}

/// Random Markov chain (no controlled states).
pub fn random_chain(rng: &mut impl Rng, n: usize, max_deg: usize, colors: &[u32]) -> ExplicitMdp {
    let pool: Vec<usize> = (0..n).collect();
    let states = (0..n)
        .map(|i| {
            let succ = pick_succ(rng, &pool, max_deg);
            State::random(format!("s{i}"), *colors.choose(rng).expect("colors"), random_dist(rng, &succ))
        })
        .collect();
    ExplicitMdp::checked(states, vec![0]).expect("generated chain is valid")
}

/// Random deterministic 1-bit strategy defined everywhere: a choice and a
/// new bit at every controlled state, and a bit update on every edge out of
/// a random state.
pub fn random_1bit(rng: &mut impl Rng, m: &ExplicitMdp) -> Strategy {
    let mut u = Strategy::new(StrategyClass::KBit(1), Mode::bits(0));
    for s in 0..m.len() {
        for b in 0..2 {
            if m.is_controlled(s) {
                let t = *m.succ(s).choose(rng).expect("successor");
                u.set(Mode::bits(b), m.id(s), m.id(t), Mode::bits(rng.gen_range(0..2)));
            } else {
                for &t in m.succ(s) {
                    let b2 = rng.gen_range(0..2);
                    if b2 != b {
                        u.set(Mode::bits(b), m.id(s), m.id(t), Mode::bits(b2));
                    }
                }
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::materialize;

    #[test]
    fn every_family_builds_with_defaults() {
        for f in list() {
            let m = build(f.name, &Params::new()).unwrap();
            let (x, _) = materialize(&*m, 8, 8).unwrap();
            assert!(x.len() <= 500, "{}", f.name);
        }
    }

    #[test]
    fn spec_parsing() {
        let (n, p) = parse_spec("walk(p=1/3, restart=true)").unwrap();
        assert_eq!(n, "walk");
        assert_eq!(p["p"], "1/3");
        assert_eq!(p["restart"], "true");
        let (_, p) = parse_spec("ladder(weights=[1/2,1/4,1/4])").unwrap();
        assert_eq!(p["weights"], "1/2,1/4,1/4");
        assert!(matches!(build("nope", &Params::new()), Err(Error::UnknownFamily(_))));
        assert!(matches!(build_spec("walk(q=1)"), Err(Error::BadParams(_))));
    }

    #[test]
    fn dag_is_acyclic_up_to_sinks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_dag(&mut rng, 12, 3, &[1, 2]);
            assert!(crate::mdp::graph::is_acyclic_up_to_sinks(&m).is_ok());
        }
    }
}
