//! Exact and interval value computation, safe sets, and checkers for the
//! zero-one-law inequalities on finite chains.

mod chain;
mod interval;
mod levy;
pub mod linear;
mod mec;
mod report;
mod safe_set;
mod solve;

pub use chain::{attainment, chain_values, rows_values, strategy_attainment, winning_bsccs};
pub use interval::{interval_reach, solve_interval};
pub use levy::{check_levy, check_return_to_safe, CheckItem, CheckReport, LevyParams};
pub use mec::{ec_decomposition, good_end_components, mecs, EcDecomposition, Mec};
pub use report::{NumMode, Value, ValueReport};
pub use safe_set::{safe_set, safe_set_from_values, SafeFlavor, SafeSet};
pub use solve::{max_reach, safety_region, solve, solve_parity, solve_reach, solve_safety, Solution};

use crate::mdp::ExplicitMdp;

/// Objectives handled natively. Targets are state masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Parity,
    Reach(Vec<bool>),
    Safety(Vec<bool>),
}

impl Objective {
    pub fn describe(&self, m: &ExplicitMdp) -> String {
        match self {
            Objective::Parity => "parity".into(),
            Objective::Reach(t) => format!("reach:{}", m.ids_of(t).join(",")),
            Objective::Safety(t) => format!("safety:{}", m.ids_of(t).join(",")),
        }
    }
}
