//! Emptiness checking for parametric non-resetting-test timed automata.

pub mod analysis;
pub mod cli;
pub mod format;
pub mod generators;
pub mod model;
pub mod parametric;
pub mod rational;
pub mod regions;
pub mod semantics;
pub mod translate;

pub use model::{Automaton, ClockId, ClockValuation, Constraint, ParamValuation, StateId, Transition};
pub use rational::{rat, Rational};
