//! Deterministic strategies in memory-update form.
//!
//! A strategy is a table of rules `(m, s, to) -> m2`. At a controlled state
//! `s` in mode `m` there is exactly one rule and `to` is the chosen successor.
//! At a random state the rule keyed by the observed successor `to` gives the
//! next mode; a missing rule keeps the bits (and advances the step).

mod chain;
mod sample;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use chain::{fix_strategy, induce_chain, md_rows, InducedChain};
pub use sample::{sample_run, sample_runs, PartialRun};

use crate::mdp::{ExplicitMdp, SINK_LOSE, SINK_WIN};
use crate::{Error, Result};

/// Memory mode. `step` is present for Markov classes, `bits` holds a k-bit
/// word (or a tag for general finite memory).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub step: Option<u32>,
    pub bits: u32,
}

impl Mode {
    pub const UNIT: Mode = Mode { step: None, bits: 0 };

    pub fn bits(bits: u32) -> Mode {
        Mode { step: None, bits }
    }

    pub fn at(step: u32, bits: u32) -> Mode {
        Mode { step: Some(step), bits }
    }

    pub fn render(&self, k: u32) -> String {
        let mut s = String::new();
        if let Some(n) = self.step {
            s.push_str(&format!("s{n}"));
        }
        if k > 0 {
            s.push('b');
            s.push_str(&bits_string(self.bits, k));
        }
        if s.is_empty() {
            s.push('-');
        }
        s
    }
}

fn bits_string(bits: u32, k: u32) -> String {
    (0..k).rev().map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyClass {
    Md,
    Markov,
    KBit(u32),
    KBitMarkov(u32),
    /// General finite memory; modes are tags below `2^k`.
    Finite(u32),
}

impl StrategyClass {
    pub fn k(&self) -> u32 {
        match *self {
            StrategyClass::Md | StrategyClass::Markov => 0,
            StrategyClass::KBit(k) | StrategyClass::KBitMarkov(k) | StrategyClass::Finite(k) => k,
        }
    }

    pub fn is_markov(&self) -> bool {
        matches!(self, StrategyClass::Markov | StrategyClass::KBitMarkov(_))
    }

    fn tag(&self) -> &'static str {
        match self {
            StrategyClass::Md => "md",
            StrategyClass::Markov => "markov",
            StrategyClass::KBit(_) => "kbit",
            StrategyClass::KBitMarkov(_) => "kbit-markov",
            StrategyClass::Finite(_) => "finite",
        }
    }
}

impl fmt::Display for StrategyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyClass::KBit(k) | StrategyClass::KBitMarkov(k) | StrategyClass::Finite(k) => {
                write!(f, "{}({k})", self.tag())
            }
            _ => write!(f, "{}", self.tag()),
        }
    }
}

/// What a Markov strategy does once the step counter reaches its horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefaultRule {
    /// Pick the lowest-index successor, keep the bits.
    LowestIndex,
    /// Use the rules whose mode has no step component.
    Table,
}

impl DefaultRule {
    fn name(&self) -> &'static str {
        match self {
            DefaultRule::LowestIndex => "lowest-index",
            DefaultRule::Table => "table",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "lowest-index" => Ok(DefaultRule::LowestIndex),
            "table" => Ok(DefaultRule::Table),
            _ => Err(Error::Parse(format!("unknown default rule {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    pub class: StrategyClass,
    pub m0: Mode,
    pub horizon: Option<u32>,
    pub default_rule: Option<DefaultRule>,
    rules: BTreeMap<(Mode, String, String), Mode>,
}

impl Strategy {
    pub fn new(class: StrategyClass, m0: Mode) -> Self {
        Strategy { class, m0, horizon: None, default_rule: None, rules: BTreeMap::new() }
    }

    pub fn k(&self) -> u32 {
        self.class.k()
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Mode, &str, &str, &Mode)> {
        self.rules.iter().map(|((m, s, t), m2)| (m, s.as_str(), t.as_str(), m2))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Adds a rule; for controlled states this replaces any earlier choice.
    pub fn set(&mut self, m: Mode, s: &str, to: &str, m2: Mode) {
        self.rules.insert((m, s.to_string(), to.to_string()), m2);
    }

    pub fn set_choice(&mut self, m: Mode, s: &str, to: &str, m2: Mode) {
        let stale: Vec<_> = self.rules_at(m, s).map(|(t, _)| t.to_string()).collect();
        for t in stale {
            self.rules.remove(&(m, s.to_string(), t));
        }
        self.set(m, s, to, m2);
    }

    fn rules_at<'a>(&'a self, m: Mode, s: &'a str) -> impl Iterator<Item = (&'a str, &'a Mode)> + 'a {
        self.rules
            .range((m, s.to_string(), String::new())..)
            .take_while(move |((m1, s1, _), _)| *m1 == m && s1 == s)
            .map(|((_, _, t), m2)| (t.as_str(), m2))
    }

    /// Choice at a controlled state.
    pub fn choice<'a>(&'a self, m: Mode, s: &'a str) -> Option<(&'a str, Mode)> {
        self.rules_at(m, s).next().map(|(t, m2)| (t, *m2))
    }

    /// Memory update at a random state on observing `to`.
    pub fn update(&self, m: Mode, s: &str, to: &str) -> Option<Mode> {
        self.rules.get(&(m, s.to_string(), to.to_string())).copied()
    }

    /// The same strategy without rules that move into truncation sinks, so
    /// that it names source states only.
    pub fn without_sinks(&self) -> Strategy {
        let mut out = Strategy { rules: BTreeMap::new(), ..self.clone() };
        for ((m, a, b), m2) in &self.rules {
            if b != SINK_WIN && b != SINK_LOSE {
                out.rules.insert((*m, a.clone(), b.clone()), *m2);
            }
        }
        out
    }

    /// True if no rule changes the bits.
    pub fn never_flips(&self) -> bool {
        self.rules.iter().all(|((m, _, _), m2)| m.bits == m2.bits)
    }

    /// Re-tags an MD strategy into another class without changing behavior.
    pub fn retag(&self, class: StrategyClass) -> Result<Strategy> {
        if self.class != StrategyClass::Md {
            return Err(Error::Precondition("only MD strategies can be re-tagged".into()));
        }
        let mut out = Strategy::new(class, Mode::UNIT);
        if class.is_markov() {
            out.m0 = Mode::at(0, 0);
            out.horizon = Some(0);
            out.default_rule = Some(DefaultRule::Table);
        }
        for (_, s, t) in self.rules.keys() {
            out.set(Mode::UNIT, s, t, Mode::UNIT);
        }
        Ok(out)
    }

    /// Structural checks against `m`: rules name real states and edges, MD
    /// modes are unit, Markov steps advance by one.
    pub fn check(&self, m: &ExplicitMdp) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(msg));
        let limit = if self.k() >= 32 { u32::MAX } else { (1u32 << self.k()).saturating_sub(1) };
        for ((mode, s, t), m2) in &self.rules {
            let (Some(i), Some(j)) = (m.index_of(s), m.index_of(t)) else {
                return bad(format!("rule {s:?} -> {t:?} names an unknown state"));
            };
            if !m.succ(i).contains(&j) {
                return bad(format!("rule {s:?} -> {t:?} is not an edge"));
            }
            if mode.bits > limit || m2.bits > limit {
                return bad(format!("mode at {s:?} exceeds {} bits", self.k()));
            }
            match self.class {
                StrategyClass::Md if *mode != Mode::UNIT || *m2 != Mode::UNIT => {
                    return bad(format!("MD rule at {s:?} carries memory"));
                }
                c if c.is_markov() => match (mode.step, m2.step) {
                    (Some(a), Some(b)) if b == a + 1 => {}
                    (None, None) => {}
                    _ => return bad(format!("Markov rule at {s:?} does not advance the step by one")),
                },
                _ => {
                    if mode.step.is_some() || m2.step.is_some() {
                        return bad(format!("non-Markov rule at {s:?} carries a step"));
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for (mode, s, _) in self.rules.keys() {
            let i = m.index_of(s).expect("checked above");
            if m.is_controlled(i) && !seen.insert((*mode, s.clone())) {
                return bad(format!("two choices at controlled {s:?} in mode {}", mode.render(self.k())));
            }
        }
        Ok(())
    }

    pub fn to_doc(&self) -> StrategyDoc {
        let k = self.k();
        let md = |m: &Mode| ModeDoc { step: m.step, bits: (k > 0).then(|| bits_string(m.bits, k)) };
        StrategyDoc {
            class: self.class.tag().to_string(),
            k: matches!(self.class, StrategyClass::KBit(_) | StrategyClass::KBitMarkov(_) | StrategyClass::Finite(_))
                .then_some(k),
            m0: md(&self.m0),
            horizon: self.horizon,
            default_rule: self.default_rule.map(|d| d.name().to_string()),
            table: self
                .rules
                .iter()
                .map(|((m, s, t), m2)| RuleDoc { m: md(m), s: s.clone(), to: t.clone(), m2: md(m2) })
                .collect(),
        }
    }

    pub fn from_doc(doc: &StrategyDoc) -> Result<Self> {
        let k = doc.k.unwrap_or(0);
        if doc.k.is_none() && matches!(doc.class.as_str(), "kbit" | "kbit-markov" | "finite") {
            return Err(Error::Parse(format!("class {:?} needs \"k\"", doc.class)));
        }
        let class = match doc.class.as_str() {
            "md" => StrategyClass::Md,
            "markov" => StrategyClass::Markov,
            "kbit" => StrategyClass::KBit(k),
            "kbit-markov" => StrategyClass::KBitMarkov(k),
            "finite" => StrategyClass::Finite(k),
            c => return Err(Error::Parse(format!("unknown strategy class {c:?}"))),
        };
        let mode = |m: &ModeDoc| -> Result<Mode> {
            let bits = match &m.bits {
                None => 0,
                Some(b) if b.is_empty() => 0,
                Some(b) => u32::from_str_radix(b, 2).map_err(|_| Error::Parse(format!("bad bits {b:?}")))?,
            };
            Ok(Mode { step: m.step, bits })
        };
        let mut s = Strategy::new(class, mode(&doc.m0)?);
        s.horizon = doc.horizon;
        s.default_rule = doc.default_rule.as_deref().map(DefaultRule::parse).transpose()?;
        for r in &doc.table {
            s.set(mode(&r.m)?, &r.s, &r.to, mode(&r.m2)?);
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("strategy doc serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("strategy doc serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Strategy::from_doc(&serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub m: ModeDoc,
    pub s: String,
    pub to: String,
    pub m2: ModeDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyDoc {
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub m0: ModeDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_rule: Option<String>,
    pub table: Vec<RuleDoc>,
}

/// Index-based MD strategy: the chosen successor of each controlled state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdStrategy(pub Vec<Option<usize>>);

impl MdStrategy {
    /// Lowest-index successor everywhere.
    pub fn lowest(m: &ExplicitMdp) -> Self {
        MdStrategy(
            (0..m.len()).map(|i| m.is_controlled(i).then(|| *m.succ(i).iter().min().expect("successor"))).collect(),
        )
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.0.get(i).copied().flatten()
    }

    pub fn to_strategy(&self, m: &ExplicitMdp) -> Strategy {
        let mut s = Strategy::new(StrategyClass::Md, Mode::UNIT);
        for i in 0..m.len() {
            if m.is_controlled(i) {
                if let Some(t) = self.get(i) {
                    s.set(Mode::UNIT, m.id(i), m.id(t), Mode::UNIT);
                }
            }
        }
        s
    }

    /// Reads the mode-`m0` choices of `s` as an MD strategy.
    pub fn from_strategy(m: &ExplicitMdp, s: &Strategy) -> Result<Self> {
        let mut out = vec![None; m.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            if m.is_controlled(i) {
                if let Some((t, _)) = s.choice(s.m0, m.id(i)) {
                    *slot = m.index_of(t);
                }
            }
        }
        Ok(MdStrategy(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut s = Strategy::new(StrategyClass::KBit(1), Mode::bits(0));
        s.set(Mode::bits(0), "a", "b", Mode::bits(1));
        s.set(Mode::bits(1), "b", "a", Mode::bits(0));
        let j = s.to_json();
        assert_eq!(Strategy::from_json(&j).unwrap(), s);
        assert_eq!(Strategy::from_json(&j).unwrap().to_json(), j);
        assert!(j.contains("\"bits\":\"1\""));
    }

    #[test]
    fn mode_rendering() {
        assert_eq!(Mode::UNIT.render(0), "-");
        assert_eq!(Mode::at(3, 2).render(2), "s3b10");
    }

    #[test]
    fn set_choice_replaces() {
        let mut s = Strategy::new(StrategyClass::Md, Mode::UNIT);
        s.set_choice(Mode::UNIT, "a", "b", Mode::UNIT);
        s.set_choice(Mode::UNIT, "a", "c", Mode::UNIT);
        assert_eq!(s.choice(Mode::UNIT, "a"), Some(("c", Mode::UNIT)));
        assert_eq!(s.len(), 1);
    }
}
