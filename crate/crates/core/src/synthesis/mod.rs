//! Strategy constructions with exact verification of their guarantees.

pub mod encode;
mod optimal;
mod plaster;
mod simple;
mod urchin;

pub use optimal::{optimal_parity_1bit, AsEngine, OneBit, OneBitOptions};
pub use plaster::{plaster_core, plaster_core_with_gamma, plaster_parity, thresholds, PlasterIteration, PlasterReport};
pub use simple::{
    as012_md, cobuchi_eps_md, parity012_opt_md, reach_eps_md, require_almost_sure, safety_eps_md, uniformize_as,
    CobuchiReport,
};
pub use urchin::{sea_urchin_rounds, SpikeEngine, UrchinOutcome, UrchinParams, UrchinRound};
