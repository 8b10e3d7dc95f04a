//! Step-counter product: every state carries the number of steps taken.

use crate::mdp::{MdpModel, Succs};
use crate::strategy::{DefaultRule, Mode, Strategy, StrategyClass};
use crate::{Error, Result};

/// Lazy acyclified view of `inner`. States are `"<s>@<n>"`.
#[derive(Clone, Debug)]
pub struct Acyclified<M> {
    pub inner: M,
}

pub fn acyclify<M: MdpModel>(inner: M) -> Acyclified<M> {
    Acyclified { inner }
}

/// Splits `"<s>@<n>"` at the last `@`.
pub fn split_step(id: &str) -> Option<(&str, u32)> {
    let (s, n) = id.rsplit_once('@')?;
    Some((s, n.parse().ok()?))
}

fn src(id: &str) -> &str {
    split_step(id).map(|(s, _)| s).unwrap_or(id)
}

impl<M: MdpModel> MdpModel for Acyclified<M> {
    fn initial(&self) -> Vec<String> {
        self.inner.initial().into_iter().map(|s| format!("{s}@0")).collect()
    }

    fn is_controlled(&self, s: &str) -> bool {
        self.inner.is_controlled(src(s))
    }

    fn color(&self, s: &str) -> u32 {
        self.inner.color(src(s))
    }

    fn successors(&self, s: &str) -> Succs<'_> {
        let Some((base, n)) = split_step(s) else {
            return Succs::finite(Vec::new());
        };
        let inner = self.inner.successors(base);
        Succs {
            branching: inner.branching,
            iter: Box::new(inner.iter.map(move |(t, p)| (format!("{t}@{}", n + 1), p))),
        }
    }

    fn declared_acyclic(&self) -> bool {
        true
    }

    fn declared_finitely_branching(&self) -> bool {
        self.inner.declared_finitely_branching()
    }
}

/// Reads a strategy on the acyclified model as a Markov strategy on the
/// source: the step counter moves from the state into the memory mode.
/// MD becomes Markov and k-bit becomes k-bit Markov. The horizon is one past
/// the largest step mentioned and the default rule is left to the caller.
pub fn markov_from_acyclified(sigma: &Strategy) -> Result<Strategy> {
    let class = match sigma.class {
        StrategyClass::Md => StrategyClass::Markov,
        StrategyClass::KBit(k) => StrategyClass::KBitMarkov(k),
        c => return Err(Error::Precondition(format!("expected an MD or k-bit strategy, got {c}"))),
    };
    let mut out = Strategy::new(class, Mode::at(0, sigma.m0.bits));
    let mut horizon = 0;
    for (m, s, t, m2) in sigma.rules() {
        let (Some((s, n)), Some((t, n2))) = (split_step(s), split_step(t)) else {
            return Err(Error::Precondition(format!("\"{s}\" is not an acyclified state")));
        };
        debug_assert_eq!(n + 1, n2);
        out.set(Mode::at(n, m.bits), s, t, Mode::at(n2, m2.bits));
        horizon = horizon.max(n2);
    }
    out.horizon = Some(horizon);
    out.default_rule = Some(DefaultRule::LowestIndex);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{materialize, MdpBuilder};

    #[test]
    fn self_loop_unrolls() {
        let m = MdpBuilder::new().controlled("s", 2, &["s"]).build().unwrap();
        let a = acyclify(m);
        assert_eq!(a.initial(), vec!["s@0"]);
        let next: Vec<String> = a.successors("s@3").iter.map(|(t, _)| t).collect();
        assert_eq!(next, vec!["s@4"]);
        let (x, fr) = materialize(&a, 5, 4).unwrap();
        assert_eq!(x.len(), 6);
        assert_eq!(fr.unexpanded, vec!["s@5"]);
    }
}
