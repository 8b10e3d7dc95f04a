//! States, the explicit finite MDP, and the lazy model interface.

mod doc;
pub mod graph;
mod model;

use std::collections::{BTreeSet, HashMap};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

pub use doc::{validate, MdpDoc, StateDoc, SuccDoc, ValidationReport, Violation};
pub use graph::reachable;
pub(crate) use model::capped_successors;
pub use model::{materialize, materialize_from, Branching, FrontierInfo, MdpModel, Succs};

use crate::num::Rat;
use crate::{Error, Result};

/// Ids the library reserves for truncation sinks.
pub const SINK_WIN: &str = "_sink_win";
pub const SINK_LOSE: &str = "_sink_lose";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Controlled,
    Random,
}

/// One state of an [`ExplicitMdp`]. `prob` is empty for controlled states and
/// parallel to `succ` for random ones.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub id: String,
    pub kind: Kind,
    pub color: u32,
    pub succ: Vec<usize>,
    pub prob: Vec<Rat>,
}

impl State {
    pub fn controlled(id: impl Into<String>, color: u32, succ: Vec<usize>) -> Self {
        State { id: id.into(), kind: Kind::Controlled, color, succ, prob: Vec::new() }
    }

    pub fn random(id: impl Into<String>, color: u32, dist: Vec<(usize, Rat)>) -> Self {
        let (succ, prob) = dist.into_iter().unzip();
        State { id: id.into(), kind: Kind::Random, color, succ, prob }
    }

    /// Absorbing random state with a self-loop at index `me`.
    pub fn absorbing(id: impl Into<String>, color: u32, me: usize) -> Self {
        State::random(id, color, vec![(me, Rat::one())])
    }

    pub fn is_controlled(&self) -> bool {
        self.kind == Kind::Controlled
    }
}

/// A finite MDP. State index doubles as the enumeration rank used for
/// tie-breaking.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitMdp {
    states: Vec<State>,
    initial: Vec<usize>,
    index: HashMap<String, usize>,
}

impl ExplicitMdp {
    /// Builds without checking well-formedness; see [`ExplicitMdp::validate`].
    pub fn new(states: Vec<State>, initial: Vec<usize>) -> Self {
        let index = states.iter().enumerate().map(|(i, s)| (s.id.clone(), i)).collect();
        ExplicitMdp { states, initial, index }
    }

    /// Builds and rejects ill-formed input.
    pub fn checked(states: Vec<State>, initial: Vec<usize>) -> Result<Self> {
        let m = ExplicitMdp::new(states, initial);
        let rep = m.validate();
        if rep.is_valid() {
            Ok(m)
        } else {
            Err(Error::Invalid(rep))
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_doc())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.states[i].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn set_initial(&mut self, initial: Vec<usize>) {
        self.initial = initial;
    }

    pub fn is_controlled(&self, i: usize) -> bool {
        self.states[i].is_controlled()
    }

    pub fn color(&self, i: usize) -> u32 {
        self.states[i].color
    }

    pub fn succ(&self, i: usize) -> &[usize] {
        &self.states[i].succ
    }

    /// Successors with probabilities; controlled states yield `None`.
    pub fn edges(&self, i: usize) -> impl Iterator<Item = (usize, Option<&Rat>)> + '_ {
        let s = &self.states[i];
        s.succ.iter().enumerate().map(move |(k, &t)| (t, s.prob.get(k)))
    }

    pub fn edge_count(&self) -> usize {
        self.states.iter().map(|s| s.succ.len()).sum()
    }

    pub fn controlled_count(&self) -> usize {
        self.states.iter().filter(|s| s.is_controlled()).count()
    }

    pub fn colors(&self) -> BTreeSet<u32> {
        self.states.iter().map(|s| s.color).collect()
    }

    pub fn max_color(&self) -> u32 {
        self.states.iter().map(|s| s.color).max().unwrap_or(0)
    }

    /// Largest even color present, if any.
    pub fn e_max(&self) -> Option<u32> {
        self.states.iter().map(|s| s.color).filter(|c| c % 2 == 0).max()
    }

    pub fn ids_of(&self, mask: &[bool]) -> Vec<String> {
        mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| self.id(i).to_string()).collect()
    }

    pub fn mask_of<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.len()];
        for id in ids {
            let i = self.index_of(id).ok_or_else(|| Error::Parse(format!("unknown state {id:?}")))?;
            mask[i] = true;
        }
        Ok(mask)
    }

    /// Mask of states with the given color predicate.
    pub fn mask_where(&self, f: impl Fn(u32) -> bool) -> Vec<bool> {
        self.states.iter().map(|s| f(s.color)).collect()
    }

    pub fn with_colors(&self, f: impl Fn(usize, u32) -> u32) -> ExplicitMdp {
        let mut m = self.clone();
        for (i, s) in m.states.iter_mut().enumerate() {
            s.color = f(i, s.color);
        }
        m
    }

    /// Replaces state `i` wholesale, keeping its id.
    pub fn replace_state(&mut self, i: usize, mut st: State) {
        st.id = self.states[i].id.clone();
        self.states[i] = st;
    }

    /// Probability of edge i→j (1 for a controlled edge, 0 if absent).
    pub fn prob(&self, i: usize, j: usize) -> Rat {
        let s = &self.states[i];
        match s.succ.iter().position(|&t| t == j) {
            None => Rat::zero(),
            Some(k) => s.prob.get(k).cloned().unwrap_or_else(Rat::one),
        }
    }

    pub fn to_doc(&self) -> MdpDoc {
        MdpDoc {
            states: self
                .states
                .iter()
                .map(|s| StateDoc {
                    id: s.id.clone(),
                    kind: s.kind,
                    color: s.color,
                    succ: s
                        .succ
                        .iter()
                        .enumerate()
                        .map(|(k, &t)| SuccDoc {
                            to: self.states.get(t).map(|x| x.id.clone()).unwrap_or_default(),
                            p: s.prob.get(k).map(crate::num::fmt_rat),
                        })
                        .collect(),
                })
                .collect(),
            initial: self.initial.iter().map(|&i| self.states[i].id.clone()).collect(),
        }
    }

    pub fn from_doc(doc: &MdpDoc) -> Result<Self> {
        let rep = validate(doc);
        if !rep.is_valid() {
            return Err(Error::Invalid(rep));
        }
        let index: HashMap<&str, usize> = doc.states.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
        let mut states = Vec::with_capacity(doc.states.len());
        for s in &doc.states {
            let succ = s.succ.iter().map(|e| index[e.to.as_str()]).collect();
            let prob = match s.kind {
                Kind::Controlled => Vec::new(),
                Kind::Random => {
                    s.succ.iter().map(|e| crate::num::parse_rat(e.p.as_deref().unwrap_or(""))).collect::<Result<_>>()?
                }
            };
            states.push(State { id: s.id.clone(), kind: s.kind, color: s.color, succ, prob });
        }
        let initial = doc.initial.iter().map(|i| index[i.as_str()]).collect();
        Ok(ExplicitMdp::new(states, initial))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("mdp doc serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("mdp doc serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MdpDoc = serde_json::from_str(s)?;
        ExplicitMdp::from_doc(&doc)
    }

    /// Row of state `i` as (successor, probability); controlled states get
    /// no row here, callers resolve them through a strategy.
    pub fn random_row(&self, i: usize) -> Vec<(usize, Rat)> {
        let s = &self.states[i];
        s.succ.iter().cloned().zip(s.prob.iter().cloned()).collect()
    }
}

/// Convenience builder keyed by string ids.
#[derive(Default)]
pub struct MdpBuilder {
    states: Vec<(String, Kind, u32, Vec<(String, Option<Rat>)>)>,
    initial: Vec<String>,
}

impl MdpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn controlled(mut self, id: &str, color: u32, succ: &[&str]) -> Self {
        let succ = succ.iter().map(|s| (s.to_string(), None)).collect();
        self.states.push((id.to_string(), Kind::Controlled, color, succ));
        self
    }

    pub fn random(mut self, id: &str, color: u32, dist: &[(&str, Rat)]) -> Self {
        let succ = dist.iter().map(|(s, p)| (s.to_string(), Some(p.clone()))).collect();
        self.states.push((id.to_string(), Kind::Random, color, succ));
        self
    }

    pub fn initial(mut self, ids: &[&str]) -> Self {
        self.initial = ids.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn doc(&self) -> MdpDoc {
        MdpDoc {
            states: self
                .states
                .iter()
                .map(|(id, kind, color, succ)| StateDoc {
                    id: id.clone(),
                    kind: *kind,
                    color: *color,
                    succ: succ
                        .iter()
                        .map(|(t, p)| SuccDoc { to: t.clone(), p: p.as_ref().map(crate::num::fmt_rat) })
                        .collect(),
                })
                .collect(),
            initial: if self.initial.is_empty() && !self.states.is_empty() {
                vec![self.states[0].0.clone()]
            } else {
                self.initial.clone()
            },
        }
    }

    pub fn build(self) -> Result<ExplicitMdp> {
        ExplicitMdp::from_doc(&self.doc())
    }
}
