//! MDP-to-MDP reductions and the strategy correspondences they induce.

mod acyclify;
mod bubble;
mod condition;
mod ladder;
mod layer;
mod truncate;

pub use acyclify::{acyclify, markov_from_acyclified, split_step, Acyclified};
pub use bubble::{bubble, bubble_model, Bubble};
pub use condition::{condition, Conditioned};
pub use ladder::{ladderize, Ladderized};
pub use layer::{layer, LayerNode, LayeredMdp};
pub use truncate::{truncate, TruncMode};
