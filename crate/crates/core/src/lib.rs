//! Exact solving, reductions and strategy synthesis for Markov decision
//! processes with parity objectives.
//!
//! The finite substrate is [`ExplicitMdp`] with exact rational probabilities.
//! Countable models are presented lazily through [`MdpModel`] and brought to
//! desk scale by [`transform::truncate`].

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod gallery;
pub mod mdp;
pub mod num;
pub mod strategy;
pub mod synthesis;
pub mod transform;

pub use error::{Error, Result};
pub use mdp::{ExplicitMdp, Kind, MdpModel};
pub use num::Rat;
pub use strategy::{MdStrategy, Strategy};
