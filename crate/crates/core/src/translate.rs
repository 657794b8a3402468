//! TA to nrtTA translation with one extra clock.
//!
//! Each original clock is represented by some clock of a pool of `k + 1`.
//! A reset re-targets the reset clocks to the current spare, so a guard
//! never tests a clock its own transition resets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::model::{Atom, Automaton, ClockId, StateId, Transition};

/// Which pool clock represents each original clock, plus the spare.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClockMap {
    pub image: Vec<usize>,
    pub spare: usize,
}

impl ClockMap {
    /// All originals on pool clock 0; spare is pool clock 1 (or 0 when there
    /// are no original clocks).
    pub fn initial(clocks: usize) -> Self {
        ClockMap { image: vec![0; clocks], spare: usize::from(clocks > 0) }
    }

    /// Map after a transition resetting `resets`.
    pub fn after_reset(&self, resets: &BTreeSet<ClockId>) -> Self {
        if resets.is_empty() {
            return self.clone();
        }
        let mut image = self.image.clone();
        for z in resets {
            image[z.0] = self.spare;
        }
        let pool = self.image.len() + 1;
        let spare = (0..pool).find(|c| !image.contains(c)).expect("k originals leave a free clock among k+1");
        ClockMap { image, spare }
    }

    /// Canonical encoding, e.g. `1.1+2` (pool clocks are 1-based).
    pub fn encode(&self) -> String {
        let parts: Vec<String> = self.image.iter().map(|c| (c + 1).to_string()).collect();
        format!("{}+{}", parts.join("."), self.spare + 1)
    }
}

impl fmt::Display for ClockMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Equivalent automaton with `|X| + 1` clocks in which no transition tests
/// a clock it resets. Only reachable `(state, map)` pairs are emitted.
pub fn ta_to_nrtta(a: &Automaton) -> Automaton {
    let k = a.clocks.len();
    let mut ids: BTreeMap<(StateId, ClockMap), StateId> = BTreeMap::new();
    let mut names = Vec::new();
    let mut accepting = BTreeSet::new();
    let mut transitions = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |q: StateId, m: ClockMap, names: &mut Vec<String>, queue: &mut VecDeque<_>| {
        let next = StateId(names.len());
        *ids.entry((q, m.clone())).or_insert_with(|| {
            names.push(format!("{}@{}", a.state_name(q), m.encode()));
            if a.is_accepting(q) {
                accepting.insert(next);
            }
            queue.push_back((q, m, next));
            next
        })
    };

    let initial = intern(a.initial, ClockMap::initial(k), &mut names, &mut queue);
    while let Some((q, m, id)) = queue.pop_front() {
        for (_, t) in a.outgoing(q) {
            let guard = t.guard.map_atoms(&mut |at: &Atom| Atom {
                clock: ClockId(m.image[at.clock.0]),
                op: at.op,
                bound: at.bound.clone(),
            });
            let resets = if t.resets.is_empty() { BTreeSet::new() } else { BTreeSet::from([ClockId(m.spare)]) };
            let m2 = m.after_reset(&t.resets);
            let target = intern(t.target, m2, &mut names, &mut queue);
            transitions.push(Transition { source: id, target, letter: t.letter, guard, resets });
        }
    }

    Automaton {
        name: format!("{}_nrt", a.name),
        alphabet: a.alphabet.clone(),
        states: names,
        clocks: (1..=k + 1).map(|i| format!("x{i}")).collect(),
        params: a.params.clone(),
        initial,
        accepting,
        transitions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_automaton;
    use crate::model::is_nrtta;

    #[test]
    fn one_clock_alternates() {
        let a = parse_automaton("automaton b\nclocks x\ninit q\naccept q\ntrans q q a ( x=1 ) { x }\n").unwrap();
        let n = ta_to_nrtta(&a);
        assert!(is_nrtta(&n));
        assert_eq!(n.clocks.len(), 2);
        assert_eq!(n.states, vec!["q@1+2", "q@2+1"]);
        assert_eq!(n.transitions.len(), 2);
    }

    #[test]
    fn simultaneous_reset_shares_a_clock() {
        let m = ClockMap::initial(2).after_reset(&BTreeSet::from([ClockId(0), ClockId(1)]));
        assert_eq!(m.image, vec![1, 1]);
        assert_eq!(m.spare, 0);
    }

    #[test]
    fn mapping_without_resets_is_stable() {
        let a = parse_automaton("automaton n\nclocks x\ninit q\naccept q\ntrans q q a ( x<3 ) { }\n").unwrap();
        let n = ta_to_nrtta(&a);
        assert_eq!(n.states.len(), 1);
        assert_eq!(n.clocks.len(), 2);
    }
}
