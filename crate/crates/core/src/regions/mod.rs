//! Region abstraction, region automata and Büchi emptiness.

mod graph;
mod region;
mod search;
mod witness;

pub use graph::{
    buchi_lasso_nodes, buchi_nonempty, build_region_automaton, build_region_automaton_with_budget, tarjan_scc,
    NodePath, RegionAutomaton, RegionEdge, RegionNode,
};
pub use region::{positive_delay_successors, region_of, ClockCell, Region, RegionError};
pub use search::{search_lasso, SearchOutcome};
pub use witness::{concretize, delay_into, extract_witness_word, WitnessError};

use crate::model::{Automaton, StateId};

pub const DEFAULT_REGION_BUDGET: usize = 10_000_000;

/// One discrete step of a lasso: delay into `delayed`, fire `transition`,
/// land in `(state, region)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoStep {
    pub transition: usize,
    pub delayed: Region,
    pub state: StateId,
    pub region: Region,
}

/// Finite stem and repeatable cycle through an accepting control state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicLasso {
    pub start_state: StateId,
    pub start_region: Region,
    pub stem: Vec<LassoStep>,
    pub cycle: Vec<LassoStep>,
}

impl SymbolicLasso {
    /// Control states visited: start, then the target of every step.
    pub fn states(&self) -> Vec<StateId> {
        std::iter::once(self.start_state).chain(self.stem.iter().chain(&self.cycle).map(|s| s.state)).collect()
    }

    pub fn cycle_accepts(&self, a: &Automaton) -> bool {
        self.cycle.iter().any(|s| a.is_accepting(s.state))
    }

    pub fn describe_step(a: &Automaton, s: &LassoStep) -> String {
        format!(
            "t{} {} -> {} | {}",
            s.transition,
            a.alphabet[a.transitions[s.transition].letter.0],
            a.state_name(s.state),
            s.region.display_with(&a.clocks)
        )
    }

    pub fn describe(&self, a: &Automaton) -> (Vec<String>, Vec<String>) {
        (
            self.stem.iter().map(|s| Self::describe_step(a, s)).collect(),
            self.cycle.iter().map(|s| Self::describe_step(a, s)).collect(),
        )
    }
}
