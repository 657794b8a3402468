//! Concrete semantics: valuations, delays, discrete steps, and exhaustive
//! execution over finite timed-word prefixes.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{
    eval_constraint, Automaton, ClockId, ClockValuation, EvalError, ParamValuation, StateId, Transition,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("timestamp {0} is negative")]
    Negative(String),
    #[error("timestamps must be strictly increasing ({prev} then {next})")]
    NotIncreasing { prev: String, next: String },
}

/// A finite prefix of a timed word, with strictly increasing timestamps
/// starting at some `τ(1) ≥ 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TimedWord(Vec<(String, Rational)>);

impl TimedWord {
    pub fn new(events: Vec<(String, Rational)>) -> Result<Self, WordError> {
        for (i, (_, t)) in events.iter().enumerate() {
            if t.is_negative() {
                return Err(WordError::Negative(t.to_string()));
            }
            if i > 0 && events[i - 1].1 >= *t {
                return Err(WordError::NotIncreasing { prev: events[i - 1].1.to_string(), next: t.to_string() });
            }
        }
        Ok(TimedWord(events))
    }

    /// Single-letter word over the given timestamps.
    pub fn uniform(letter: &str, stamps: &[Rational]) -> Result<Self, WordError> {
        Self::new(stamps.iter().map(|t| (letter.to_string(), t.clone())).collect())
    }

    pub fn events(&self) -> &[(String, Rational)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, n: usize) -> TimedWord {
        TimedWord(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Appends an event, checking monotonicity.
    pub fn push(&mut self, letter: impl Into<String>, t: Rational) -> Result<(), WordError> {
        if t.is_negative() {
            return Err(WordError::Negative(t.to_string()));
        }
        if let Some((_, last)) = self.0.last() {
            if *last >= t {
                return Err(WordError::NotIncreasing { prev: last.to_string(), next: t.to_string() });
            }
        }
        self.0.push((letter.into(), t));
        Ok(())
    }

    /// Delays between consecutive events, the first measured from 0.
    pub fn delays(&self) -> Vec<Rational> {
        let mut prev = Rational::zero();
        self.0
            .iter()
            .map(|(_, t)| {
                let d = t - &prev;
                prev = t.clone();
                d
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub valuation: ClockValuation,
}

impl Configuration {
    pub fn initial(a: &Automaton) -> Self {
        Configuration { state: a.initial, valuation: ClockValuation::zero(a.clocks.len()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunStep {
    pub transition: usize,
    pub delay: Rational,
    pub config: Configuration,
}

/// A finite run: the initial configuration followed by the steps taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: Configuration,
    pub steps: Vec<RunStep>,
}

impl Run {
    pub fn states(&self) -> Vec<StateId> {
        std::iter::once(self.start.state).chain(self.steps.iter().map(|s| s.config.state)).collect()
    }

    pub fn last(&self) -> &Configuration {
        self.steps.last().map(|s| &s.config).unwrap_or(&self.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("guard violated")]
    GuardViolated,
    #[error("transition does not leave the current state")]
    WrongSource,
    #[error("delay {0} is not allowed here")]
    NonPositiveDelay(Rational),
    #[error("letter mismatch at position {0}")]
    LetterMismatch(usize),
    #[error("run and word have different lengths")]
    LengthMismatch,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Whether a delay of zero is admissible (only before the first event).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DelayRule {
    First,
    Subsequent,
}

pub fn elapse(v: &ClockValuation, t: &Rational) -> ClockValuation {
    ClockValuation(v.0.iter().map(|x| x + t).collect())
}

pub fn reset_apply(v: &ClockValuation, s: &BTreeSet<ClockId>) -> ClockValuation {
    let mut out = v.clone();
    for z in s {
        if let Some(x) = out.0.get_mut(z.0) {
            *x = Rational::zero();
        }
    }
    out
}

/// One delay-then-transition step.
pub fn step(
    c: &Configuration,
    t: &Transition,
    delta: &Rational,
    rule: DelayRule,
    i: &ParamValuation,
) -> Result<Configuration, StepError> {
    if t.source != c.state {
        return Err(StepError::WrongSource);
    }
    let ok_delay = match rule {
        DelayRule::First => !delta.is_negative(),
        DelayRule::Subsequent => delta.is_positive(),
    };
    if !ok_delay {
        return Err(StepError::NonPositiveDelay(delta.clone()));
    }
    let moved = elapse(&c.valuation, delta);
    if !eval_constraint(&t.guard, &moved, i)? {
        return Err(StepError::GuardViolated);
    }
    Ok(Configuration { state: t.target, valuation: reset_apply(&moved, &t.resets) })
}

/// Every configuration reachable by some run reading exactly `w`.
pub fn reachable_configs(a: &Automaton, w: &TimedWord, i: &ParamValuation) -> BTreeSet<Configuration> {
    let mut frontier: BTreeSet<Configuration> = [Configuration::initial(a)].into();
    let delays = w.delays();
    for (pos, ((letter, _), delta)) in w.events().iter().zip(&delays).enumerate() {
        let rule = if pos == 0 { DelayRule::First } else { DelayRule::Subsequent };
        let letter = a.letter_id(letter);
        let mut next = BTreeSet::new();
        for c in &frontier {
            for (_, t) in a.outgoing(c.state) {
                if Some(t.letter) != letter {
                    continue;
                }
                if let Ok(c2) = step(c, t, delta, rule, i) {
                    next.insert(c2);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

/// Reachable configurations after each prefix of `w` (index 0 = empty prefix).
pub fn reachable_per_prefix(a: &Automaton, w: &TimedWord, i: &ParamValuation) -> Vec<BTreeSet<Configuration>> {
    let mut out = vec![[Configuration::initial(a)].into()];
    let delays = w.delays();
    for (pos, ((letter, _), delta)) in w.events().iter().zip(&delays).enumerate() {
        let rule = if pos == 0 { DelayRule::First } else { DelayRule::Subsequent };
        let letter = a.letter_id(letter);
        let prev: &BTreeSet<Configuration> = out.last().expect("nonempty");
        let mut next = BTreeSet::new();
        for c in prev {
            for (_, t) in a.outgoing(c.state) {
                if Some(t.letter) == letter {
                    if let Ok(c2) = step(c, t, delta, rule, i) {
                        next.insert(c2);
                    }
                }
            }
        }
        out.push(next);
    }
    out
}

/// Replays a fixed transition sequence over `w`.
pub fn execute(a: &Automaton, w: &TimedWord, transitions: &[usize], i: &ParamValuation) -> Result<Run, StepError> {
    if transitions.len() != w.len() {
        return Err(StepError::LengthMismatch);
    }
    let start = Configuration::initial(a);
    let mut cur = start.clone();
    let mut steps = Vec::with_capacity(w.len());
    for (pos, (((letter, _), delta), &ti)) in w.events().iter().zip(w.delays()).zip(transitions).enumerate() {
        let t = &a.transitions[ti];
        if a.alphabet[t.letter.0] != *letter {
            return Err(StepError::LetterMismatch(pos));
        }
        let rule = if pos == 0 { DelayRule::First } else { DelayRule::Subsequent };
        cur = step(&cur, t, &delta, rule, i)?;
        steps.push(RunStep { transition: ti, delay: delta, config: cur.clone() });
    }
    Ok(Run { start, steps })
}

/// `v ⊕ δ`: the valuations reachable from `v + δ` by resetting any subset
/// of clocks.
pub fn v_oplus(v: &ClockValuation, delta: &Rational) -> BTreeSet<ClockValuation> {
    let moved = elapse(v, delta);
    let n = moved.len();
    (0u64..(1u64 << n))
        .map(|mask| {
            let resets = (0..n).filter(|z| mask >> z & 1 == 1).map(ClockId).collect();
            reset_apply(&moved, &resets)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Bound, Constraint, LetterId, ParamId};
    use crate::rational::rat;

    fn val(xs: &[Rational]) -> ClockValuation {
        ClockValuation(xs.to_vec())
    }

    #[test]
    fn elapse_examples() {
        assert_eq!(elapse(&val(&[rat(0, 1), rat(0, 1)]), &rat(3, 2)), val(&[rat(3, 2), rat(3, 2)]));
        let v = val(&[rat(1, 3), rat(2, 1)]);
        assert_eq!(elapse(&v, &Rational::zero()), v);
        assert_eq!(elapse(&v, &rat(1, 6)), val(&[rat(1, 2), rat(13, 6)]));
    }

    #[test]
    fn reset_examples() {
        let v = val(&[rat(2, 1), rat(3, 1)]);
        assert_eq!(reset_apply(&v, &[ClockId(0)].into()), val(&[rat(0, 1), rat(3, 1)]));
        assert_eq!(reset_apply(&v, &BTreeSet::new()), v);
        assert_eq!(reset_apply(&v, &[ClockId(0), ClockId(1)].into()), ClockValuation::zero(2));
    }

    fn trans(guard: Constraint, resets: &[usize]) -> Transition {
        Transition {
            source: StateId(0),
            target: StateId(1),
            letter: LetterId(0),
            guard,
            resets: resets.iter().map(|&z| ClockId(z)).collect(),
        }
    }

    #[test]
    fn step_examples() {
        let none = ParamValuation::empty();
        let c0 = Configuration { state: StateId(0), valuation: ClockValuation::zero(2) };
        let t = trans(Constraint::lt(ClockId(0), Bound::Const(rat(2, 1))), &[1]);
        let c1 = step(&c0, &t, &rat(3, 2), DelayRule::Subsequent, &none).unwrap();
        assert_eq!(c1, Configuration { state: StateId(1), valuation: val(&[rat(3, 2), rat(0, 1)]) });

        let t = trans(Constraint::eq(ClockId(0), Bound::Param(ParamId(0))), &[]);
        let i = ParamValuation::single(rat(7, 10));
        assert!(step(&c0, &t, &rat(7, 10), DelayRule::Subsequent, &i).is_ok());

        let t = trans(Constraint::eq(ClockId(0), Bound::Const(rat(1, 1))), &[]);
        assert_eq!(step(&c0, &t, &rat(2, 1), DelayRule::Subsequent, &none), Err(StepError::GuardViolated));
        assert_eq!(
            step(&c0, &t, &Rational::zero(), DelayRule::Subsequent, &none),
            Err(StepError::NonPositiveDelay(Rational::zero()))
        );
        let c_wrong = Configuration { state: StateId(1), valuation: ClockValuation::zero(2) };
        assert_eq!(step(&c_wrong, &t, &rat(1, 1), DelayRule::First, &none), Err(StepError::WrongSource));
        let t0 = trans(Constraint::eq(ClockId(0), Bound::Const(rat(0, 1))), &[]);
        assert!(step(&c0, &t0, &Rational::zero(), DelayRule::First, &none).is_ok());
    }

    #[test]
    fn oplus_examples() {
        let out = v_oplus(&ClockValuation::zero(2), &rat(1, 1));
        let expect: BTreeSet<_> = [
            val(&[rat(1, 1), rat(1, 1)]),
            val(&[rat(0, 1), rat(1, 1)]),
            val(&[rat(1, 1), rat(0, 1)]),
            val(&[rat(0, 1), rat(0, 1)]),
        ]
        .into();
        assert_eq!(out, expect);
        assert_eq!(v_oplus(&ClockValuation::zero(1), &rat(1, 2)).len(), 2);
        let v = val(&[rat(1, 3), rat(5, 2)]);
        assert!(v_oplus(&v, &rat(1, 7)).contains(&elapse(&v, &rat(1, 7))));
    }

    #[test]
    fn words_reject_bad_timestamps() {
        assert!(TimedWord::uniform("a", &[rat(0, 1), rat(1, 2)]).is_ok());
        assert!(matches!(TimedWord::uniform("a", &[rat(1, 1), rat(1, 1)]), Err(WordError::NotIncreasing { .. })));
        assert!(matches!(TimedWord::uniform("a", &[rat(-1, 1)]), Err(WordError::Negative(_))));
        let mut w = TimedWord::default();
        w.push("a", rat(1, 1)).unwrap();
        assert!(w.push("a", rat(1, 2)).is_err());
        assert_eq!(w.delays(), vec![rat(1, 1)]);
    }
}
