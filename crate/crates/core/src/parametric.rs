//! Candidate enumeration, instantiation, scaling and verdicts.

use num::{BigInt, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{is_nrtta, max_constant, validate, Atom, Automaton, Bound, ModelError};
use crate::rational::Rational;
use crate::regions::{
    buchi_nonempty, build_region_automaton_with_budget, concretize, search_lasso, RegionError, SymbolicLasso,
    WitnessError, DEFAULT_REGION_BUDGET,
};
use crate::semantics::TimedWord;
use crate::translate::ta_to_nrtta;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParametricError {
    #[error("expected exactly one parameter, found {0}")]
    NotOneParameter(usize),
    #[error("unsupported automaton: {0}")]
    UnsupportedAutomaton(String),
    #[error("constant {value} times {d} is not an integer")]
    NonIntegerAfterScaling { value: String, d: u64 },
    #[error("a parameter value is required iff the automaton has a parameter")]
    ParameterMismatch,
    #[error("parameter values must be non-negative, got {0}")]
    NegativeParameter(String),
    #[error("region bound {0} is too large")]
    BoundTooLarge(String),
    #[error("invalid automaton: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ModelError>),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// Which family of the candidate set a value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// `k/2` for `0 <= k <= 4C`.
    HalfInteger(u64),
    /// `n/2 + α` for `0 <= n < 4C`.
    FractionalRep(u64),
    /// `Ξ`.
    LargeRep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub value: Rational,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    /// Sorted ascending, pairwise distinct.
    pub candidates: Vec<Candidate>,
    pub c: u64,
    pub states: usize,
    pub a: u64,
    pub alpha: Rational,
    pub xi: Rational,
    /// Every candidate times `d` is an integer.
    pub d: u64,
}

impl CandidateSet {
    /// Candidate set for maximum constant `c` (at least 1) and `states`
    /// control states.
    pub fn new(c: u64, states: usize) -> Self {
        let c = c.max(1);
        let q = states as u64;
        let a = q.max(4 * c);
        let d = 8 * (1 + c * a);
        let alpha = Rational::new(1, d as i64);
        let xi = Rational::from_u64(2 + c * (1 + q));
        let mut candidates: Vec<Candidate> =
            (0..=4 * c)
                .map(|k| Candidate { value: Rational::new(k as i64, 2), origin: Origin::HalfInteger(k) })
                .chain((0..4 * c).map(|n| Candidate {
                    value: Rational::new(n as i64, 2) + &alpha,
                    origin: Origin::FractionalRep(n),
                }))
                .chain(std::iter::once(Candidate { value: xi.clone(), origin: Origin::LargeRep }))
                .collect();
        candidates.sort_by(|x, y| x.value.cmp(&y.value));
        CandidateSet { candidates, c, states, a, alpha, xi, d }
    }

    pub fn values(&self) -> Vec<Rational> {
        self.candidates.iter().map(|c| c.value.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// The representative `n/2 + α`.
    pub fn fractional_rep(&self, n: u64) -> Rational {
        Rational::new(n as i64, 2) + &self.alpha
    }
}

/// Candidate parameter values for a one-parameter automaton.
pub fn candidate_parameters(a: &Automaton) -> Result<CandidateSet, ParametricError> {
    if a.params.len() != 1 {
        return Err(ParametricError::NotOneParameter(a.params.len()));
    }
    Ok(CandidateSet::new(max_constant(a), a.states.len()))
}

/// Replaces every parameter atom by the constant `mu`.
pub fn instantiate(a: &Automaton, mu: &Rational) -> Automaton {
    let mut out = a.clone();
    for t in &mut out.transitions {
        t.guard = t.guard.map_atoms(&mut |at: &Atom| match at.bound {
            Bound::Param(_) => Atom { clock: at.clock, op: at.op, bound: Bound::Const(mu.clone()) },
            _ => at.clone(),
        });
    }
    out.params.clear();
    out
}

/// Multiplies every guard constant by `d`; all products must be integers.
pub fn scale_constants(a: &Automaton, d: u64) -> Result<Automaton, ParametricError> {
    let mut out = a.clone();
    let mut bad = None;
    for t in &mut out.transitions {
        t.guard = t.guard.map_atoms(&mut |at: &Atom| match &at.bound {
            Bound::Const(c) => {
                let s = c.scale(d);
                if !s.is_integer() && bad.is_none() {
                    bad = Some(c.to_string());
                }
                Atom { clock: at.clock, op: at.op, bound: Bound::Const(s) }
            }
            _ => at.clone(),
        });
    }
    match bad {
        Some(value) => Err(ParametricError::NonIntegerAfterScaling { value, d }),
        None => Ok(out),
    }
}

/// Accepting lasso found for a fixed parameter value.
#[derive(Clone, Debug)]
pub struct Witness {
    pub mu: Option<Rational>,
    /// Lasso over `scaled`.
    pub lasso: SymbolicLasso,
    /// Time was multiplied by this factor to make all constants integers.
    pub scaled_by: u64,
    /// The instantiated, scaled automaton the lasso lives in.
    pub scaled: Automaton,
}

impl Witness {
    /// Timed word (in the original time scale) following the stem and
    /// `unrollings` laps of the cycle.
    pub fn word(&self, unrollings: usize) -> Result<TimedWord, WitnessError> {
        let w = concretize(&self.scaled, &self.lasso, unrollings)?;
        let d = Rational::from_u64(self.scaled_by);
        let events = w.events().iter().map(|(l, t)| (l.clone(), t / &d)).collect();
        Ok(TimedWord::new(events).expect("scaling preserves monotonicity"))
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Empty,
    Nonempty(Box<Witness>),
}

impl Verdict {
    pub fn is_empty(&self) -> bool {
        matches!(self, Verdict::Empty)
    }

    pub fn is_nonempty(&self) -> bool {
        !self.is_empty()
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Empty => None,
            Verdict::Nonempty(w) => Some(w),
        }
    }

    pub fn witness_mu(&self) -> Option<&Rational> {
        self.witness().and_then(|w| w.mu.as_ref())
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub candidates_checked: usize,
    pub region_nodes: usize,
    /// Whether the input was translated to an nrtTA first.
    pub translated: bool,
}

/// How the region graph is explored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// On-the-fly nested depth-first search, stopping at the first lasso.
    #[default]
    OnTheFly,
    /// Full region automaton followed by an SCC decomposition.
    Explicit,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub max_regions: usize,
    /// Translate non-nrtTA one-clock inputs before the parametric check.
    pub auto_translate: bool,
    /// Candidates checked concurrently (1 = sequential).
    pub jobs: usize,
    pub engine: Engine,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { max_regions: DEFAULT_REGION_BUDGET, auto_translate: true, jobs: 1, engine: Engine::OnTheFly }
    }
}

/// Instantiated automaton scaled to integer constants, with the scaling
/// factor and the region bound.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub scaled: Automaton,
    pub d: u64,
    pub max: u32,
}

/// Instantiates `a` at `mu`, scales by the lcm of all denominators and
/// computes the region bound `max(2C, mu, constants)` in scaled units.
pub fn prepare_fixed(a: &Automaton, mu: Option<&Rational>) -> Result<Prepared, ParametricError> {
    if a.params.len() > 1 {
        return Err(ParametricError::UnsupportedAutomaton(format!("{} parameters", a.params.len())));
    }
    if a.has_params() != mu.is_some() {
        return Err(ParametricError::ParameterMismatch);
    }
    if let Some(m) = mu {
        if m.is_negative() {
            return Err(ParametricError::NegativeParameter(m.to_string()));
        }
    }
    let c = max_constant(a);
    let inst = match mu {
        Some(m) => instantiate(a, m),
        None => a.clone(),
    };
    let consts = inst.constants();
    let lcm: BigInt = Rational::denominator_lcm(consts.iter().copied().chain(mu));
    let d = lcm.to_u64().ok_or_else(|| ParametricError::BoundTooLarge(lcm.to_string()))?;
    let scaled = scale_constants(&inst, d)?;
    let mut bound = Rational::from_u64(2 * c).scale(d);
    if let Some(m) = mu {
        bound = bound.max(m.scale(d).ceil());
    }
    for k in scaled.constants() {
        bound = bound.max(k.clone());
    }
    let max = bound
        .to_u64()
        .and_then(|b| u32::try_from(b).ok())
        .filter(|b| *b < u32::MAX / 4)
        .ok_or_else(|| ParametricError::BoundTooLarge(bound.to_string()))?;
    Ok(Prepared { scaled, d, max })
}

/// Büchi emptiness at a fixed parameter value (`mu` present iff `a` has a
/// parameter).
pub fn emptiness_fixed(a: &Automaton, mu: Option<&Rational>) -> Result<Decision, ParametricError> {
    emptiness_fixed_with(a, mu, &CheckOptions::default())
}

pub fn emptiness_fixed_with(
    a: &Automaton,
    mu: Option<&Rational>,
    opts: &CheckOptions,
) -> Result<Decision, ParametricError> {
    let p = prepare_fixed(a, mu)?;
    let (lasso, nodes) = match opts.engine {
        Engine::OnTheFly => {
            let out = search_lasso(&p.scaled, p.max, opts.max_regions)?;
            (out.lasso, out.nodes)
        }
        Engine::Explicit => {
            let ra = build_region_automaton_with_budget(&p.scaled, p.max, opts.max_regions)?;
            (buchi_nonempty(&ra), ra.node_count())
        }
    };
    let verdict = match lasso {
        None => Verdict::Empty,
        Some(lasso) => {
            Verdict::Nonempty(Box::new(Witness { mu: mu.cloned(), lasso, scaled_by: p.d, scaled: p.scaled }))
        }
    };
    Ok(Decision { verdict, candidates_checked: 1, region_nodes: nodes, translated: false })
}

/// Decides whether some non-negative parameter value makes the Büchi
/// language nonempty.
pub fn parametric_emptiness(a: &Automaton) -> Result<Decision, ParametricError> {
    parametric_emptiness_with(a, &CheckOptions::default())
}

pub fn parametric_emptiness_with(a: &Automaton, opts: &CheckOptions) -> Result<Decision, ParametricError> {
    validate(a).map_err(ParametricError::Invalid)?;
    if a.params.len() > 1 {
        return Err(ParametricError::UnsupportedAutomaton(format!("{} parameters", a.params.len())));
    }
    if a.clocks.len() > 2 {
        return Err(ParametricError::UnsupportedAutomaton(format!("{} clocks", a.clocks.len())));
    }
    let mut translated = false;
    let owned;
    let a = if is_nrtta(a) {
        a
    } else if a.clocks.len() == 1 && opts.auto_translate {
        translated = true;
        owned = ta_to_nrtta(a);
        &owned
    } else {
        return Err(ParametricError::UnsupportedAutomaton("a transition tests a clock it resets".into()));
    };
    if !a.has_params() {
        let mut d = emptiness_fixed_with(a, None, opts)?;
        d.translated = translated;
        return Ok(d);
    }
    let cands = candidate_parameters(a)?.values();
    let chunk = opts.jobs.max(1);
    let mut checked = 0;
    let mut nodes = 0;
    for group in cands.chunks(chunk) {
        let results: Vec<Result<Decision, ParametricError>> = if chunk == 1 {
            group.iter().map(|mu| emptiness_fixed_with(a, Some(mu), opts)).collect()
        } else {
            group.par_iter().map(|mu| emptiness_fixed_with(a, Some(mu), opts)).collect()
        };
        for r in results {
            let d = r?;
            checked += 1;
            nodes += d.region_nodes;
            if d.verdict.is_nonempty() {
                return Ok(Decision {
                    verdict: d.verdict,
                    candidates_checked: checked,
                    region_nodes: nodes,
                    translated,
                });
            }
        }
    }
    Ok(Decision { verdict: Verdict::Empty, candidates_checked: checked, region_nodes: nodes, translated })
}
