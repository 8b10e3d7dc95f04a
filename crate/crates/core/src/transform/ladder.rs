//! Ladder gadgets replacing infinitely branching states by binary chains.
//!
//! Colors of source states shift by +2 so that rungs can take color 1 and a
//! run that climbs a ladder forever loses. The unshifted presentation gives
//! rungs color -1 instead; the two agree after the shift.

use num::{One, Zero};

use crate::mdp::{Branching, MdpModel, Succs};
use crate::num::Rat;
use crate::strategy::{Mode, Strategy};
use crate::{Error, Result};

const RUNG: &str = "#rung";

/// Lazy ladderized view of `inner`. Rung `i ≥ 1` of gadget `x` is
/// `"<x>#rung<i>"`; rung 0 is `x` itself.
#[derive(Clone, Debug)]
pub struct Ladderized<M> {
    pub inner: M,
    /// Also build gadgets for finite states with more successors than this.
    pub expand_above: Option<usize>,
}

pub fn ladderize<M: MdpModel>(inner: M, expand_above: Option<usize>) -> Ladderized<M> {
    Ladderized { inner, expand_above }
}

fn split_rung(id: &str) -> (&str, usize) {
    match id.rsplit_once(RUNG) {
        Some((x, i)) => match i.parse() {
            Ok(i) => (x, i),
            Err(_) => (id, 0),
        },
        None => (id, 0),
    }
}

pub fn rung_id(x: &str, i: usize) -> String {
    if i == 0 {
        x.to_string()
    } else {
        format!("{x}{RUNG}{i}")
    }
}

impl<M: MdpModel> Ladderized<M> {
    /// Whether `x` is replaced by a gadget, and its successor count if finite.
    pub fn gadget(&self, x: &str) -> Option<Option<usize>> {
        let succs = self.inner.successors(x);
        let finite = self.inner.declared_finitely_branching() || succs.branching == Branching::Finite;
        if !finite {
            return Some(None);
        }
        let limit = self.expand_above?;
        let n = succs.iter.take(limit + 1).count();
        if n > limit {
            Some(Some(self.inner.successors(x).iter.count()))
        } else {
            None
        }
    }

    /// Adjusted exit probabilities p'_1..p'_n of a random gadget, where
    /// p'_i = p_i / (1 - p_1 - ... - p_{i-1}).
    pub fn exit_probs(&self, x: &str, n: usize) -> Vec<Rat> {
        let mut left = Rat::one();
        let mut out = Vec::with_capacity(n);
        for (_, p) in self.inner.successors(x).iter.take(n) {
            let p = p.unwrap_or_else(Rat::zero);
            out.push(if left.is_zero() { Rat::one() } else { &p / &left });
            left -= p;
        }
        out
    }

    /// Pulls a deterministic k-bit (or MD) strategy on the ladderized model
    /// back to the source. At a controlled gadget the rung walk is followed
    /// for at most `cap` steps; a walk that never exits falls back to the
    /// first successor. At a random gadget the memory updates along the
    /// rungs up to the realized exit are composed.
    pub fn pull_back(&self, sigma: &Strategy, cap: usize) -> Result<Strategy> {
        if sigma.class.is_markov() {
            return Err(Error::Precondition("pull-back expects a non-Markov strategy".into()));
        }
        let k = sigma.k();
        if k > 8 {
            return Err(Error::BadParams(format!("{k} memory bits is too many to enumerate")));
        }
        let modes: Vec<Mode> = if k == 0 { vec![Mode::UNIT] } else { (0..1u32 << k).map(Mode::bits).collect() };
        let mut out = Strategy::new(sigma.class, sigma.m0);
        let mut gadgets = std::collections::BTreeSet::new();
        for (m, s, t, m2) in sigma.rules() {
            let (x, i) = split_rung(s);
            if i == 0 && self.gadget(x).is_none() {
                if !t.contains(RUNG) {
                    out.set(*m, s, t, *m2);
                }
            } else {
                gadgets.insert(x.to_string());
            }
        }
        for x in gadgets {
            let ys: Vec<String> = self.inner.successors(&x).iter.take(cap).map(|(y, _)| y).collect();
            if ys.is_empty() {
                continue;
            }
            for &alpha in &modes {
                if self.inner.is_controlled(&x) {
                    let mut cur = x.clone();
                    let mut mode = alpha;
                    let mut exit = None;
                    for _ in 0..=cap {
                        let Some((to, m2)) = sigma.choice(mode, &cur) else { break };
                        let (base, i) = split_rung(to);
                        if base == x && i > 0 {
                            cur = to.to_string();
                            mode = m2;
                        } else {
                            exit = Some((to.to_string(), m2));
                            break;
                        }
                    }
                    let (y, m2) = exit.unwrap_or_else(|| (ys[0].clone(), alpha));
                    out.set(alpha, &x, &y, m2);
                } else {
                    let mut mode = alpha;
                    for (j, y) in ys.iter().enumerate() {
                        let here = rung_id(&x, j);
                        let m2 = sigma.update(mode, &here, y).unwrap_or(mode);
                        if m2 != alpha {
                            out.set(alpha, &x, y, m2);
                        }
                        mode = sigma.update(mode, &here, &rung_id(&x, j + 1)).unwrap_or(mode);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl<M: MdpModel> MdpModel for Ladderized<M> {
    fn initial(&self) -> Vec<String> {
        self.inner.initial()
    }

    fn is_controlled(&self, s: &str) -> bool {
        self.inner.is_controlled(split_rung(s).0)
    }

    fn color(&self, s: &str) -> u32 {
        let (x, i) = split_rung(s);
        if i == 0 {
            self.inner.color(x) + 2
        } else {
            1
        }
    }

    fn successors(&self, s: &str) -> Succs<'_> {
        let (x, i) = split_rung(s);
        let Some(len) = self.gadget(x) else {
            return self.inner.successors(s);
        };
        let y = self.inner.successors(x).iter.nth(i);
        let Some((y, _)) = y else {
            return Succs::finite(Vec::new());
        };
        let has_next = len.is_none_or(|n| i + 1 < n);
        let mut out = Vec::with_capacity(2);
        if self.inner.is_controlled(x) {
            out.push((y, None));
            if has_next {
                out.push((rung_id(x, i + 1), None));
            }
        } else {
            let p = self.exit_probs(x, i + 1).pop().unwrap_or_else(Rat::one);
            let rest = Rat::one() - &p;
            out.push((y, Some(p)));
            if has_next && !rest.is_zero() {
                out.push((rung_id(x, i + 1), Some(rest)));
            }
        }
        Succs::finite(out)
    }

    fn declared_acyclic(&self) -> bool {
        self.inner.declared_acyclic()
    }

    fn declared_finitely_branching(&self) -> bool {
        self.expand_above.is_some() || self.inner.declared_finitely_branching()
    }
}
