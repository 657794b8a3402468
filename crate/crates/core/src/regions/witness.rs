use thiserror::Error;

use super::region::{ClockCell, Region};
use super::{RegionAutomaton, SymbolicLasso};
use crate::model::{eval_constraint, Automaton, ClockValuation, ParamValuation};
use crate::rational::Rational;
use crate::semantics::{elapse, reset_apply, TimedWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("lasso step {step} cannot be realized from valuation {valuation}")]
    Unrealizable { step: usize, valuation: String },
    #[error("the lasso has an empty cycle")]
    EmptyCycle,
}

/// Concrete delay taking `v` into `target`, strictly positive unless
/// `allow_zero`.
pub fn delay_into(v: &ClockValuation, target: &Region, allow_zero: bool) -> Option<Rational> {
    let max = Rational::from_u64(target.max() as u64);
    let mut lo = Rational::zero();
    let mut lo_strict = !allow_zero;
    let mut hi: Option<Rational> = None;
    let mut pin: Option<Rational> = None;
    for (z, x) in v.values().iter().enumerate() {
        match target.cell(crate::model::ClockId(z)) {
            ClockCell::Exact(k) => {
                let d = Rational::from_u64(k as u64) - x;
                if pin.as_ref().is_some_and(|p| *p != d) {
                    return None;
                }
                pin = Some(d);
            }
            ClockCell::Open(k) => {
                let l = Rational::from_u64(k as u64) - x;
                if l >= lo {
                    lo = l;
                    lo_strict = true;
                }
                let h = Rational::from_u64(k as u64 + 1) - x;
                hi = Some(match hi {
                    Some(old) => old.min(h),
                    None => h,
                });
            }
            ClockCell::Above => {
                let l = &max - x;
                if l >= lo {
                    lo = l;
                    lo_strict = true;
                }
            }
        }
    }
    let delta = match pin {
        Some(p) => {
            let above = if lo_strict { p > lo } else { p >= lo };
            let below = hi.as_ref().is_none_or(|h| p < *h);
            if !(above && below) {
                return None;
            }
            p
        }
        None => match hi {
            Some(h) => {
                if h <= lo {
                    return None;
                }
                lo.midpoint(&h)
            }
            None => lo + Rational::one(),
        },
    };
    (Region::of_valuation(&elapse(v, &delta), target.max()) == *target).then_some(delta)
}

/// Timed word following the stem and `unrollings` laps of the cycle in
/// the time scale of `a`.
pub fn concretize(a: &Automaton, lasso: &SymbolicLasso, unrollings: usize) -> Result<TimedWord, WitnessError> {
    if lasso.cycle.is_empty() {
        return Err(WitnessError::EmptyCycle);
    }
    let mut v = ClockValuation::zero(a.clocks.len());
    let mut now = Rational::zero();
    let mut events = Vec::new();
    let steps = lasso.stem.iter().chain((0..unrollings).flat_map(|_| lasso.cycle.iter()));
    for (i, step) in steps.enumerate() {
        let delta = delay_into(&v, &step.delayed, i == 0)
            .ok_or_else(|| WitnessError::Unrealizable { step: i, valuation: v.to_string() })?;
        let t = &a.transitions[step.transition];
        let moved = elapse(&v, &delta);
        let ok = eval_constraint(&t.guard, &moved, &ParamValuation::empty()).unwrap_or(false);
        if !ok {
            return Err(WitnessError::Unrealizable { step: i, valuation: v.to_string() });
        }
        v = reset_apply(&moved, &t.resets);
        now = now + delta;
        events.push((a.alphabet[t.letter.0].clone(), now.clone()));
    }
    Ok(TimedWord::new(events).expect("delays after the first are positive"))
}

/// Timed word for `l` in `ra`: stem followed by `unrollings` cycle laps.
pub fn extract_witness_word(
    ra: &RegionAutomaton,
    l: &SymbolicLasso,
    unrollings: usize,
) -> Result<TimedWord, WitnessError> {
    concretize(&ra.automaton, l, unrollings)
}
