//! Automaton data model: clock constraints, transitions, automata, and the
//! syntactic checks the decision procedure depends on.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Eq,
}

/// Right-hand side of an atomic comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    /// A constant. Parsed automata only carry naturals; rational constants
    /// appear after parameter instantiation.
    Const(Rational),
    Param(ParamId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub clock: ClockId,
    pub op: CmpOp,
    pub bound: Bound,
}

/// Clock constraints: `true`, atoms `z < b` / `z = b`, negation, conjunction.
/// The derived comparisons are expressed through the helper constructors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    True,
    Atom(Atom),
    Not(Box<Constraint>),
    And(Box<Constraint>, Box<Constraint>),
}

impl Constraint {
    pub fn atom(clock: ClockId, op: CmpOp, bound: Bound) -> Self {
        Constraint::Atom(Atom { clock, op, bound })
    }

    pub fn lt(clock: ClockId, bound: Bound) -> Self {
        Self::atom(clock, CmpOp::Lt, bound)
    }

    pub fn eq(clock: ClockId, bound: Bound) -> Self {
        Self::atom(clock, CmpOp::Eq, bound)
    }

    /// `z <= b` as `!(!(z < b) & !(z = b))`.
    pub fn le(clock: ClockId, bound: Bound) -> Self {
        Self::lt(clock, bound.clone()).negate().and(Self::eq(clock, bound).negate()).negate()
    }

    /// `z > b` as `!(z < b) & !(z = b)`.
    pub fn gt(clock: ClockId, bound: Bound) -> Self {
        Self::lt(clock, bound.clone()).negate().and(Self::eq(clock, bound).negate())
    }

    /// `z >= b` as `!(z < b)`.
    pub fn ge(clock: ClockId, bound: Bound) -> Self {
        Self::lt(clock, bound).negate()
    }

    /// `z != b` as `!(z = b)`.
    pub fn ne(clock: ClockId, bound: Bound) -> Self {
        Self::eq(clock, bound).negate()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn negate(self) -> Self {
        Constraint::Not(Box::new(self))
    }

    pub fn and(self, other: Constraint) -> Self {
        Constraint::And(Box::new(self), Box::new(other))
    }

    /// Conjunction of all constraints, `True` when empty.
    pub fn all<I: IntoIterator<Item = Constraint>>(parts: I) -> Self {
        parts.into_iter().reduce(|a, b| a.and(b)).unwrap_or(Constraint::True)
    }

    /// Calls `f` on every atom in the tree.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Constraint::True => {}
            Constraint::Atom(a) => f(a),
            Constraint::Not(g) => g.for_each_atom(f),
            Constraint::And(l, r) => {
                l.for_each_atom(f);
                r.for_each_atom(f);
            }
        }
    }

    /// Applies `f` to every atom, rebuilding the tree.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Constraint {
        match self {
            Constraint::True => Constraint::True,
            Constraint::Atom(a) => Constraint::Atom(f(a)),
            Constraint::Not(g) => Constraint::Not(Box::new(g.map_atoms(f))),
            Constraint::And(l, r) => Constraint::And(Box::new(l.map_atoms(f)), Box::new(r.map_atoms(f))),
        }
    }

    /// The clocks the constraint mentions.
    pub fn clocks(&self) -> BTreeSet<ClockId> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a.clock);
        });
        out
    }

    pub fn mentions_param(&self) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= matches!(a.bound, Bound::Param(_)));
        found
    }

    pub fn mentions_const(&self) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= matches!(a.bound, Bound::Const(_)));
        found
    }

    /// Evaluates the constraint with a caller-supplied atom oracle.
    pub fn eval_with<E>(&self, atom: &mut impl FnMut(&Atom) -> Result<bool, E>) -> Result<bool, E> {
        Ok(match self {
            Constraint::True => true,
            Constraint::Atom(a) => atom(a)?,
            Constraint::Not(g) => !g.eval_with(atom)?,
            Constraint::And(l, r) => l.eval_with(atom)? && r.eval_with(atom)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: StateId,
    pub target: StateId,
    pub letter: LetterId,
    pub guard: Constraint,
    pub resets: BTreeSet<ClockId>,
}

/// A (parametric) timed automaton with a Büchi acceptance set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    pub name: String,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub clocks: Vec<String>,
    pub params: Vec<String>,
    pub initial: StateId,
    pub accepting: BTreeSet<StateId>,
    pub transitions: Vec<Transition>,
}

/// Clock values indexed by `ClockId`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockValuation(pub Vec<Rational>);

impl ClockValuation {
    pub fn zero(clocks: usize) -> Self {
        ClockValuation(vec![Rational::zero(); clocks])
    }

    pub fn get(&self, z: ClockId) -> Option<&Rational> {
        self.0.get(z.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for ClockValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Parameter values indexed by `ParamId`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamValuation(pub Vec<Rational>);

impl ParamValuation {
    pub fn empty() -> Self {
        ParamValuation(Vec::new())
    }

    pub fn single(mu: Rational) -> Self {
        ParamValuation(vec![mu])
    }

    pub fn get(&self, p: ParamId) -> Option<&Rational> {
        self.0.get(p.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("transition {transition} mixes a constant and a parameter in one guard")]
    MixedGuard { transition: usize },
    #[error("reference to undeclared {0}")]
    DanglingRef(String),
    #[error("transition {transition} compares against non-natural constant {value}")]
    NonNaturalConstant { transition: usize, value: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound symbol {0}")]
    UnboundSymbol(String),
}

/// Satisfaction of `g` by clock valuation `v` under parameter valuation `i`.
pub fn eval_constraint(g: &Constraint, v: &ClockValuation, i: &ParamValuation) -> Result<bool, EvalError> {
    g.eval_with(&mut |a: &Atom| {
        let lhs = v.get(a.clock).ok_or_else(|| EvalError::UnboundSymbol(format!("clock #{}", a.clock.0)))?;
        let rhs = match &a.bound {
            Bound::Const(c) => c,
            Bound::Param(p) => i.get(*p).ok_or_else(|| EvalError::UnboundSymbol(format!("parameter #{}", p.0)))?,
        };
        Ok(match a.op {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Eq => lhs == rhs,
        })
    })
}

impl Automaton {
    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn clock_name(&self, z: ClockId) -> &str {
        &self.clocks[z.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn clock_id(&self, name: &str) -> Option<ClockId> {
        self.clocks.iter().position(|s| s == name).map(ClockId)
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.alphabet.iter().position(|s| s == name).map(LetterId)
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.contains(&q)
    }

    /// Transitions leaving `q`, with their indices.
    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = (usize, &Transition)> {
        self.transitions.iter().enumerate().filter(move |(_, t)| t.source == q)
    }

    /// Every constant compared against in a guard.
    pub fn constants(&self) -> Vec<&Rational> {
        let mut out = Vec::new();
        for t in &self.transitions {
            t.guard.for_each_atom(&mut |a| {
                if let Bound::Const(c) = &a.bound {
                    out.push(c);
                }
            });
        }
        out
    }

    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }
}

/// Largest guard constant, clamped below by 1. Rational constants are
/// rounded up.
pub fn max_constant(a: &Automaton) -> u64 {
    a.constants().into_iter().filter_map(|c| c.ceil().to_u64()).fold(1, u64::max)
}

/// True iff no transition both tests and resets the same clock.
pub fn is_nrtta(a: &Automaton) -> bool {
    a.transitions.iter().all(|t| t.guard.clocks().is_disjoint(&t.resets))
}

/// Structural checks plus the no-mixed-guard restriction.
pub fn validate(a: &Automaton) -> Result<(), Vec<ModelError>> {
    let mut errors = Vec::new();
    let nstates = a.states.len();
    if a.initial.0 >= nstates {
        errors.push(ModelError::DanglingRef(format!("initial state #{}", a.initial.0)));
    }
    for q in &a.accepting {
        if q.0 >= nstates {
            errors.push(ModelError::DanglingRef(format!("accepting state #{}", q.0)));
        }
    }
    for (idx, t) in a.transitions.iter().enumerate() {
        if t.source.0 >= nstates {
            errors.push(ModelError::DanglingRef(format!("state #{} (source of transition {idx})", t.source.0)));
        }
        if t.target.0 >= nstates {
            errors.push(ModelError::DanglingRef(format!("state #{} (target of transition {idx})", t.target.0)));
        }
        if t.letter.0 >= a.alphabet.len() {
            errors.push(ModelError::DanglingRef(format!("letter #{} (transition {idx})", t.letter.0)));
        }
        for z in t.resets.iter().chain(t.guard.clocks().iter()) {
            if z.0 >= a.clocks.len() {
                errors.push(ModelError::DanglingRef(format!("clock #{} (transition {idx})", z.0)));
            }
        }
        let mut bad_const = None;
        t.guard.for_each_atom(&mut |at| match &at.bound {
            Bound::Param(p) if p.0 >= a.params.len() => {
                errors.push(ModelError::DanglingRef(format!("parameter #{} (transition {idx})", p.0)))
            }
            Bound::Const(c) if (!c.is_integer() || c.is_negative()) && bad_const.is_none() => {
                bad_const = Some(c.clone())
            }
            _ => {}
        });
        if let Some(value) = bad_const {
            errors.push(ModelError::NonNaturalConstant { transition: idx, value });
        }
        if t.guard.mentions_param() && t.guard.mentions_const() {
            errors.push(ModelError::MixedGuard { transition: idx });
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}
