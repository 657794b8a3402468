//! Automaton generators: the `L_k` / `L^p_k` families and random
//! automata for property tests.

use std::collections::BTreeSet;

use crate::model::{Automaton, Bound, ClockId, Constraint, LetterId, ParamId, StateId, Transition};
use crate::rational::Rational;

fn lk_family(k: usize, bound: Bound, name: String, params: Vec<String>) -> Automaton {
    assert!(k >= 1, "k must be at least 1");
    // State (s, t): s parents chosen (x1..xs reset), t of them matched.
    let id = |s: usize, t: usize| StateId(s * (s + 1) / 2 + t);
    let mut states = Vec::new();
    for s in 0..=k {
        for t in 0..=s {
            states.push(format!("p{s}m{t}"));
        }
    }
    let mut transitions = Vec::new();
    let tr = |src, dst, guard: Constraint, resets: &[usize]| Transition {
        source: src,
        target: dst,
        letter: LetterId(0),
        guard,
        resets: resets.iter().map(|&z| ClockId(z)).collect::<BTreeSet<_>>(),
    };
    for s in 0..=k {
        for t in 0..=s {
            let here = id(s, t);
            transitions.push(tr(here, here, Constraint::True, &[]));
            let matched = Constraint::eq(ClockId(t), bound.clone());
            if s < k {
                transitions.push(tr(here, id(s + 1, t), Constraint::True, &[s]));
            }
            if t < s {
                transitions.push(tr(here, id(s, t + 1), matched.clone(), &[]));
                if s < k {
                    transitions.push(tr(here, id(s + 1, t + 1), matched, &[s]));
                }
            }
        }
    }
    Automaton {
        name,
        alphabet: vec!["a".into()],
        states,
        clocks: (1..=k).map(|i| format!("x{i}")).collect(),
        params,
        initial: id(0, 0),
        accepting: BTreeSet::from([id(k, k)]),
        transitions,
    }
}

/// nrtTA with `k` clocks accepting the words with at least `k` distinct
/// pairs of positions at distance exactly 1.
pub fn gen_lk(k: usize) -> Automaton {
    lk_family(k, Bound::Const(Rational::one()), format!("l{k}"), Vec::new())
}

/// As [`gen_lk`] with the distance given by the parameter `mu`.
pub fn gen_lpk(k: usize) -> Automaton {
    lk_family(k, Bound::Param(ParamId(0)), format!("lp{k}"), vec!["mu".into()])
}

pub mod random {
    //! Seeded random automata.

    use rand::seq::SliceRandom;
    use rand::Rng;

    use super::*;

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum GuardKind {
        True,
        Constants,
        Parameter,
    }

    #[derive(Clone, Debug)]
    pub struct RandomSpec {
        pub max_states: usize,
        pub clocks: usize,
        pub param: bool,
        pub max_const: u64,
        pub letters: usize,
        /// Outgoing transitions per state are drawn from `1..=max_out`.
        pub max_out: usize,
        /// Keep resets disjoint from the tested clocks.
        pub nrt: bool,
        /// Atoms per guard are drawn from `1..=max_atoms`.
        pub max_atoms: usize,
    }

    impl Default for RandomSpec {
        fn default() -> Self {
            RandomSpec {
                max_states: 4,
                clocks: 2,
                param: false,
                max_const: 2,
                letters: 2,
                max_out: 3,
                nrt: false,
                max_atoms: 2,
            }
        }
    }

    fn random_atom<R: Rng>(rng: &mut R, clocks: usize, bound: Bound) -> Constraint {
        let z = ClockId(rng.gen_range(0..clocks));
        match rng.gen_range(0..7) {
            0 | 1 => Constraint::lt(z, bound),
            2 | 3 => Constraint::eq(z, bound),
            4 => Constraint::le(z, bound),
            5 => Constraint::gt(z, bound),
            _ => Constraint::ge(z, bound),
        }
    }

    /// Random guard of the given kind; constants are drawn from
    /// `0..=max_const` and the largest one is at most `max_const`.
    pub fn random_guard<R: Rng>(rng: &mut R, spec: &RandomSpec, kind: GuardKind) -> Constraint {
        if spec.clocks == 0 || kind == GuardKind::True {
            return Constraint::True;
        }
        let n = rng.gen_range(1..=spec.max_atoms.max(1));
        let atoms = (0..n).map(|_| {
            let bound = match kind {
                GuardKind::Parameter => Bound::Param(ParamId(0)),
                _ => Bound::Const(Rational::from_u64(rng.gen_range(0..=spec.max_const))),
            };
            let atom = random_atom(rng, spec.clocks, bound);
            if rng.gen_bool(0.15) {
                atom.negate()
            } else {
                atom
            }
        });
        Constraint::all(atoms)
    }

    pub fn random_automaton<R: Rng>(rng: &mut R, spec: &RandomSpec) -> Automaton {
        let n = rng.gen_range(1..=spec.max_states.max(1));
        let clocks: Vec<ClockId> = (0..spec.clocks).map(ClockId).collect();
        let mut transitions = Vec::new();
        for q in 0..n {
            for _ in 0..rng.gen_range(1..=spec.max_out.max(1)) {
                let kind = match rng.gen_range(0..10) {
                    0..=2 => GuardKind::True,
                    3..=6 if spec.param => GuardKind::Parameter,
                    _ => GuardKind::Constants,
                };
                let guard = random_guard(rng, spec, kind);
                let tested = guard.clocks();
                let resets =
                    clocks.iter().filter(|z| !(spec.nrt && tested.contains(z)) && rng.gen_bool(0.3)).copied().collect();
                transitions.push(Transition {
                    source: StateId(q),
                    target: StateId(rng.gen_range(0..n)),
                    letter: LetterId(rng.gen_range(0..spec.letters.max(1))),
                    guard,
                    resets,
                });
            }
        }
        let mut ids: Vec<usize> = (0..n).collect();
        ids.shuffle(rng);
        let k = rng.gen_range(1..=n.div_ceil(2));
        Automaton {
            name: "random".into(),
            alphabet: (0..spec.letters.max(1)).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
            states: (0..n).map(|i| format!("q{i}")).collect(),
            clocks: (0..spec.clocks)
                .map(|i| ["x", "y", "z", "w"].get(i).map_or(format!("c{i}"), |s| s.to_string()))
                .collect(),
            params: if spec.param { vec!["mu".into()] } else { Vec::new() },
            initial: StateId(0),
            accepting: ids[..k].iter().map(|&i| StateId(i)).collect(),
            transitions,
        }
    }

    /// Random strictly increasing timestamps with denominators up to
    /// `max_den`, half of the time snapped to a multiple of `1/2`.
    pub fn random_stamps<R: Rng>(rng: &mut R, len: usize, max_den: i64) -> Vec<Rational> {
        let mut t = Rational::zero();
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let d = if rng.gen_bool(0.5) { 2 } else { rng.gen_range(1..=max_den) };
            let lo = if i == 0 { 0 } else { 1 };
            let delta = Rational::new(rng.gen_range(lo..=2 * d), d);
            t = t + delta;
            out.push(t.clone());
        }
        out
    }

    /// A random finite timed word over the automaton's alphabet.
    pub fn random_word<R: Rng>(rng: &mut R, a: &Automaton, len: usize, max_den: i64) -> crate::semantics::TimedWord {
        let stamps = random_stamps(rng, len, max_den);
        let events =
            stamps.into_iter().map(|t| (a.alphabet.choose(rng).cloned().unwrap_or_else(|| "a".into()), t)).collect();
        crate::semantics::TimedWord::new(events).expect("stamps are increasing")
    }
}
