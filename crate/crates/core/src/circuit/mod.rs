//! Netlists, their text form, and execution with measurement and feed-forward.

mod exec;
mod netlist;
mod parse;

pub use exec::{apply_feedforward, execute, execute_traced, propagate, ExecutionTrace, Outcome, OutcomeDistribution};
pub use netlist::{FeedForward, FeedForwardOp, InputPolarization, Netlist, Step, MAX_SPINS};
pub use parse::parse_netlist;
