//! Lazily presented, possibly infinite MDPs and their materialization.

use std::collections::{HashMap, VecDeque};

use num::{One, Zero};

use super::{ExplicitMdp, Kind, State};
use crate::num::Rat;
use crate::{Error, Result};

/// What a model promises about one successor enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branching {
    /// The enumeration terminates.
    Finite,
    /// The enumeration is known to be infinite.
    Infinite,
    /// No promise either way; enumeration is guarded by the branching cap.
    Undeclared,
}

/// Successor enumeration of one state. Random states yield probabilities.
pub struct Succs<'a> {
    pub branching: Branching,
    pub iter: Box<dyn Iterator<Item = (String, Option<Rat>)> + 'a>,
}

impl<'a> Succs<'a> {
    pub fn finite(v: Vec<(String, Option<Rat>)>) -> Self {
        Succs { branching: Branching::Finite, iter: Box::new(v.into_iter()) }
    }
}

/// A countable MDP given by pure queries. State ids are strings; ids of
/// derived models encode their provenance.
pub trait MdpModel {
    fn initial(&self) -> Vec<String>;
    fn is_controlled(&self, s: &str) -> bool;
    fn color(&self, s: &str) -> u32;
    fn successors(&self, s: &str) -> Succs<'_>;

    fn declared_acyclic(&self) -> bool {
        false
    }

    fn declared_finitely_branching(&self) -> bool {
        false
    }

    /// Probability mass of a random state beyond its first `k` successors.
    fn tail_mass(&self, s: &str, k: usize) -> Rat {
        let taken: Rat =
            self.successors(s).iter.take(k).map(|(_, p)| p.unwrap_or_else(Rat::zero)).fold(Rat::zero(), |a, b| a + b);
        Rat::one() - taken
    }
}

impl MdpModel for ExplicitMdp {
    fn initial(&self) -> Vec<String> {
        self.initial().iter().map(|&i| self.id(i).to_string()).collect()
    }

    fn is_controlled(&self, s: &str) -> bool {
        self.index_of(s).map(|i| ExplicitMdp::is_controlled(self, i)).unwrap_or(false)
    }

    fn color(&self, s: &str) -> u32 {
        self.index_of(s).map(|i| ExplicitMdp::color(self, i)).unwrap_or(0)
    }

    fn successors(&self, s: &str) -> Succs<'_> {
        let Some(i) = self.index_of(s) else {
            return Succs::finite(Vec::new());
        };
        Succs {
            branching: Branching::Finite,
            iter: Box::new(self.edges(i).map(|(t, p)| (self.id(t).to_string(), p.cloned()))),
        }
    }

    fn declared_finitely_branching(&self) -> bool {
        true
    }
}

impl<M: MdpModel + ?Sized> MdpModel for Box<M> {
    fn initial(&self) -> Vec<String> {
        (**self).initial()
    }
    fn is_controlled(&self, s: &str) -> bool {
        (**self).is_controlled(s)
    }
    fn color(&self, s: &str) -> u32 {
        (**self).color(s)
    }
    fn successors(&self, s: &str) -> Succs<'_> {
        (**self).successors(s)
    }
    fn declared_acyclic(&self) -> bool {
        (**self).declared_acyclic()
    }
    fn declared_finitely_branching(&self) -> bool {
        (**self).declared_finitely_branching()
    }
    fn tail_mass(&self, s: &str, k: usize) -> Rat {
        (**self).tail_mass(s, k)
    }
}

impl<M: MdpModel + ?Sized> MdpModel for &M {
    fn initial(&self) -> Vec<String> {
        (**self).initial()
    }
    fn is_controlled(&self, s: &str) -> bool {
        (**self).is_controlled(s)
    }
    fn color(&self, s: &str) -> u32 {
        (**self).color(s)
    }
    fn successors(&self, s: &str) -> Succs<'_> {
        (**self).successors(s)
    }
    fn declared_acyclic(&self) -> bool {
        (**self).declared_acyclic()
    }
    fn declared_finitely_branching(&self) -> bool {
        (**self).declared_finitely_branching()
    }
    fn tail_mass(&self, s: &str, k: usize) -> Rat {
        (**self).tail_mass(s, k)
    }
}

/// Where a materialization stopped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FrontierInfo {
    /// States at the horizon whose successors were not enumerated.
    pub unexpanded: Vec<String>,
    /// Random states whose enumeration was capped, with the mass left out.
    pub residual: Vec<(String, Rat)>,
    /// Controlled states whose enumeration was capped
    /// ("controlled-branch-truncated").
    pub controlled_truncated: Vec<String>,
}

impl FrontierInfo {
    pub fn is_empty(&self) -> bool {
        self.unexpanded.is_empty() && self.residual.is_empty() && self.controlled_truncated.is_empty()
    }
}

/// Capped successor list of `s`, plus whether the cap cut it short.
pub(crate) fn capped_successors<M: MdpModel + ?Sized>(
    m: &M,
    s: &str,
    cap: usize,
) -> Result<(Vec<(String, Option<Rat>)>, bool)> {
    let succs = m.successors(s);
    let branching = if m.declared_finitely_branching() { Branching::Finite } else { succs.branching };
    match branching {
        Branching::Finite => Ok((succs.iter.collect(), false)),
        Branching::Infinite => Ok((succs.iter.take(cap).collect(), true)),
        Branching::Undeclared => {
            let v: Vec<_> = succs.iter.take(cap + 1).collect();
            if v.len() > cap {
                Err(Error::BranchCapExceeded(s.to_string(), cap))
            } else {
                Ok((v, false))
            }
        }
    }
}

/// Breadth-first expansion from the model's initial states.
pub fn materialize<M: MdpModel + ?Sized>(
    m: &M,
    horizon: usize,
    branch_cap: usize,
) -> Result<(ExplicitMdp, FrontierInfo)> {
    materialize_from(m, &m.initial(), horizon, branch_cap)
}

/// Breadth-first expansion from `starts` up to `horizon` steps. States at the
/// horizon are kept but left without successors; they are listed in the
/// frontier and the result validates only after completion by truncation.
pub fn materialize_from<M: MdpModel + ?Sized>(
    m: &M,
    starts: &[String],
    horizon: usize,
    branch_cap: usize,
) -> Result<(ExplicitMdp, FrontierInfo)> {
    if branch_cap == 0 {
        return Err(Error::BadParams("branch_cap must be at least 1".into()));
    }
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut depth: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    let mut frontier = FrontierInfo::default();
    let mut initial = Vec::new();
    for s in starts {
        let i = discover(m, s, 0, &mut index, &mut states, &mut depth, &mut queue);
        if !initial.contains(&i) {
            initial.push(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let d = depth[i];
        let id = states[i].id.clone();
        if d >= horizon {
            frontier.unexpanded.push(id);
            continue;
        }
        let (succ, capped) = capped_successors(m, &id, branch_cap)?;
        let controlled = states[i].is_controlled();
        let mut tgt = Vec::with_capacity(succ.len());
        let mut probs = Vec::new();
        let mut mass = Rat::zero();
        for (t, p) in succ {
            tgt.push(discover(m, &t, d + 1, &mut index, &mut states, &mut depth, &mut queue));
            if !controlled {
                let p = p.unwrap_or_else(Rat::zero);
                mass += &p;
                probs.push(p);
            }
        }
        if capped {
            if controlled {
                frontier.controlled_truncated.push(id.clone());
            } else if mass < Rat::one() {
                frontier.residual.push((id.clone(), Rat::one() - mass));
            }
        }
        states[i].succ = tgt;
        states[i].prob = probs;
    }
    Ok((ExplicitMdp::new(states, initial), frontier))
}

fn discover<M: MdpModel + ?Sized>(
    m: &M,
    id: &str,
    d: usize,
    index: &mut HashMap<String, usize>,
    states: &mut Vec<State>,
    depth: &mut Vec<usize>,
    queue: &mut VecDeque<usize>,
) -> usize {
    if let Some(&i) = index.get(id) {
        return i;
    }
    let i = states.len();
    let kind = if m.is_controlled(id) { Kind::Controlled } else { Kind::Random };
    states.push(State { id: id.to_string(), kind, color: m.color(id), succ: Vec::new(), prob: Vec::new() });
    depth.push(d);
    index.insert(id.to_string(), i);
    queue.push_back(i);
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::MdpBuilder;

    #[test]
    fn finite_model_materializes_to_itself() {
        let m = MdpBuilder::new()
            .controlled("a", 1, &["b", "c"])
            .random("b", 2, &[("a", crate::num::rat(1, 2)), ("d", crate::num::rat(1, 2))])
            .controlled("c", 0, &["c"])
            .controlled("d", 1, &["a"])
            .build()
            .unwrap();
        let (out, fr) = materialize(&m, 10, 4).unwrap();
        assert!(fr.is_empty());
        assert_eq!(out, m);
    }
}
