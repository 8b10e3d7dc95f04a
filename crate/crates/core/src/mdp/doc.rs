//! Serialized form of an explicit MDP and its validation.

use std::collections::HashSet;
use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Kind;
use crate::num::{fmt_rat, parse_rat, Rat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MdpDoc {
    pub states: Vec<StateDoc>,
    pub initial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDoc {
    pub id: String,
    pub kind: Kind,
    pub color: u32,
    pub succ: Vec<SuccDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccDoc {
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    NoSuccessor(String),
    DanglingEdge {
        from: String,
        to: String,
    },
    DuplicateSuccessor {
        from: String,
        to: String,
    },
    MissingProb {
        from: String,
        to: String,
    },
    ProbOnControlled {
        from: String,
        to: String,
    },
    BadProb {
        from: String,
        to: String,
        p: String,
    },
    BadSum {
        state: String,
        sum: String,
    },
    UnknownInitial(String),
    /// A reserved sink id used for something other than an absorbing state
    /// of the matching parity.
    ReservedId(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(s) => write!(f, "duplicate state id {s:?}"),
            Violation::NoSuccessor(s) => write!(f, "state {s:?} has no successor"),
            Violation::DanglingEdge { from, to } => write!(f, "dangling edge {from:?} -> {to:?}"),
            Violation::DuplicateSuccessor { from, to } => {
                write!(f, "successor {to:?} listed twice at {from:?}")
            }
            Violation::MissingProb { from, to } => {
                write!(f, "random edge {from:?} -> {to:?} has no probability")
            }
            Violation::ProbOnControlled { from, to } => {
                write!(f, "controlled edge {from:?} -> {to:?} carries a probability")
            }
            Violation::BadProb { from, to, p } => {
                write!(f, "edge {from:?} -> {to:?} has probability {p:?} outside (0,1]")
            }
            Violation::BadSum { state, sum } => {
                write!(f, "distribution of {state:?} sums to {sum}")
            }
            Violation::UnknownInitial(s) => write!(f, "initial state {s:?} is not declared"),
            Violation::ReservedId(s) => write!(f, "{s:?} is reserved for truncation sinks"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Reports every well-formedness violation of `doc`.
pub fn validate(doc: &MdpDoc) -> ValidationReport {
    let mut v = Vec::new();
    let mut ids = HashSet::new();
    for s in &doc.states {
        if !ids.insert(s.id.as_str()) {
            v.push(Violation::DuplicateId(s.id.clone()));
        }
    }
    for s in &doc.states {
        if s.succ.is_empty() {
            v.push(Violation::NoSuccessor(s.id.clone()));
        }
        let mut seen = HashSet::new();
        let mut sum = Rat::zero();
        let mut sum_ok = true;
        for e in &s.succ {
            let (from, to) = (s.id.clone(), e.to.clone());
            if !ids.contains(e.to.as_str()) {
                v.push(Violation::DanglingEdge { from: from.clone(), to: to.clone() });
            }
            if !seen.insert(e.to.as_str()) {
                v.push(Violation::DuplicateSuccessor { from: from.clone(), to: to.clone() });
            }
            match (s.kind, &e.p) {
                (Kind::Controlled, Some(_)) => v.push(Violation::ProbOnControlled { from, to }),
                (Kind::Controlled, None) => {}
                (Kind::Random, None) => {
                    sum_ok = false;
                    v.push(Violation::MissingProb { from, to });
                }
                (Kind::Random, Some(p)) => match parse_rat(p) {
                    Ok(r) if r.is_positive() && r <= Rat::one() => sum += r,
                    _ => {
                        sum_ok = false;
                        v.push(Violation::BadProb { from, to, p: p.clone() });
                    }
                },
            }
        }
        if s.kind == Kind::Random && sum_ok && !s.succ.is_empty() && sum != Rat::one() {
            v.push(Violation::BadSum { state: s.id.clone(), sum: fmt_rat(&sum) });
        }
    }
    for s in &doc.states {
        let parity = match s.id.as_str() {
            super::SINK_WIN => 0,
            super::SINK_LOSE => 1,
            _ => continue,
        };
        let absorbing = s.succ.len() == 1 && s.succ[0].to == s.id;
        if !absorbing || s.color % 2 != parity {
            v.push(Violation::ReservedId(s.id.clone()));
        }
    }
    for i in &doc.initial {
        if !ids.contains(i.as_str()) {
            v.push(Violation::UnknownInitial(i.clone()));
        }
    }
    ValidationReport { violations: v }
}
