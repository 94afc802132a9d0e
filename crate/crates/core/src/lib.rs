//! Security-aware optimal LTL path planning.
//!
//! Plans are infinite prefix-suffix paths through a weighted transition
//! system that satisfy an LTL task while keeping a passive observer, who only
//! sees state outputs, from learning that the robot started at a secret
//! initial state.

pub mod buchi;
pub mod cli;
pub mod graph;
pub mod ltl;
pub mod model;
pub mod oracle;
pub mod planner;
pub mod synthesis;
