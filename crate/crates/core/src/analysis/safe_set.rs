use super::{attainment, solve, Objective};
use crate::mdp::ExplicitMdp;
use crate::num::Rat;
use crate::strategy::MdStrategy;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SafeFlavor {
    /// States where the value is at least the threshold.
    Value,
    /// States where a fixed strategy attains at least the threshold.
    Strategy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SafeSet {
    pub beta: Rat,
    pub flavor: SafeFlavor,
    pub members: Vec<bool>,
}

impl SafeSet {
    pub fn contains(&self, s: usize) -> bool {
        self.members[s]
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|b| **b).count()
    }
}

pub fn safe_set_from_values(values: &[Rat], beta: &Rat, flavor: SafeFlavor) -> SafeSet {
    SafeSet { beta: beta.clone(), flavor, members: values.iter().map(|v| v >= beta).collect() }
}

/// Safe(β) of `obj`, by value or by the attainment of `sigma`.
pub fn safe_set(m: &ExplicitMdp, sigma: Option<&MdStrategy>, obj: &Objective, beta: &Rat) -> Result<SafeSet> {
    Ok(match sigma {
        None => safe_set_from_values(&solve(m, obj).values, beta, SafeFlavor::Value),
        Some(s) => safe_set_from_values(&attainment(m, s, obj)?, beta, SafeFlavor::Strategy),
    })
}
