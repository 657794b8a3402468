//! Executable versions of the parametric-region proof machinery:
//! polarity, fractional interval classes, agreement, critical valuations
//! and the case analyses used to justify the candidate set.

pub mod fuzz;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{ClockId, ClockValuation};
use crate::rational::Rational;
use crate::regions::{Region, RegionAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("parameter {0} is a multiple of 1/2")]
    DegenerateParameter(String),
    #[error("fractional value is not in one of the S_Z intervals")]
    NotInSZ,
    #[error("chi is not smaller than the interval width")]
    ChiTooLarge,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("parameters have different polarity")]
    PolarityMismatch,
    #[error("parameters have different integer parts")]
    FloorMismatch,
    #[error("initial valuations are not in complete agreement")]
    NotCompleteAgreement,
    #[error("no agreeing valuation exists at position {0}")]
    Infeasible(usize),
    #[error("path is not connected at position {0}")]
    Disconnected(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Fractional-part interval classes, in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntervalClass {
    /// `frac = 0`
    Z,
    /// `0 < frac < ℓ`
    ZL,
    /// `frac = ℓ`
    L,
    /// `ℓ < frac < 1 - ℓ`
    LLh,
    /// `frac = 1 - ℓ`
    Lh,
    /// `1 - ℓ < frac < 1`
    Lh1,
}

impl IntervalClass {
    pub const ALL: [IntervalClass; 6] = [Self::Z, Self::ZL, Self::L, Self::LLh, Self::Lh, Self::Lh1];

    pub fn label(self) -> &'static str {
        match self {
            Self::Z => "0",
            Self::ZL => "0ℓ",
            Self::L => "ℓ",
            Self::LLh => "ℓℓ̂",
            Self::Lh => "ℓ̂",
            Self::Lh1 => "ℓ̂1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarityContext {
    pub mu: Rational,
    pub m: u64,
    pub ell: Rational,
    pub polarity: Polarity,
    pub chi: Rational,
    pub s_z: Vec<IntervalClass>,
    pub w_z: Rational,
}

impl PolarityContext {
    /// Endpoints `(left, right)` of an open class; `None` for point classes.
    pub fn endpoints(&self, class: IntervalClass) -> Option<(Rational, Rational)> {
        let one = Rational::one();
        match class {
            IntervalClass::ZL => Some((Rational::zero(), self.ell.clone())),
            IntervalClass::LLh => Some((self.ell.clone(), &one - &self.ell)),
            IntervalClass::Lh1 => Some((&one - &self.ell, one)),
            _ => None,
        }
    }

    pub fn in_sz(&self, class: IntervalClass) -> bool {
        self.s_z.contains(&class)
    }
}

fn is_degenerate(mu: &Rational) -> bool {
    (mu * Rational::from_u64(2)).is_integer()
}

pub fn polarity_ctx(mu: &Rational) -> Result<PolarityContext, AnalysisError> {
    if is_degenerate(mu) || mu.is_negative() {
        return Err(AnalysisError::DegenerateParameter(mu.to_string()));
    }
    let f = mu.fract();
    let one = Rational::one();
    let ell = f.clone().min(&one - &f);
    let half = Rational::half();
    let two = Rational::from_u64(2);
    let (polarity, chi, s_z, w_z) = if f < half {
        (Polarity::Negative, ell.clone(), vec![IntervalClass::LLh], &one - &(&two * &ell))
    } else {
        (Polarity::Positive, &half - &ell, vec![IntervalClass::ZL, IntervalClass::Lh1], (&one - &(&two * &ell)) / &two)
    };
    let m = mu.floor_u64().expect("non-negative");
    Ok(PolarityContext { mu: mu.clone(), m, ell, polarity, chi, s_z, w_z })
}

/// The class of a fractional value in `[0, 1)`.
pub fn interval_class(frac: &Rational, ctx: &PolarityContext) -> IntervalClass {
    let hi = Rational::one() - &ctx.ell;
    if frac.is_zero() {
        IntervalClass::Z
    } else if *frac < ctx.ell {
        IntervalClass::ZL
    } else if *frac == ctx.ell {
        IntervalClass::L
    } else if *frac < hi {
        IntervalClass::LLh
    } else if *frac == hi {
        IntervalClass::Lh
    } else {
        IntervalClass::Lh1
    }
}

/// Number of length-χ steps from `frac` up to the right endpoint of its
/// class, counting the step containing it. A value below the last full
/// step gets the next index.
pub fn low_k(frac: &Rational, ctx: &PolarityContext) -> Result<u64, AnalysisError> {
    low_k_with(frac, &ctx.chi, ctx)
}

pub fn low_k_with(frac: &Rational, chi: &Rational, ctx: &PolarityContext) -> Result<u64, AnalysisError> {
    let class = interval_class(frac, ctx);
    if !ctx.in_sz(class) {
        return Err(AnalysisError::NotInSZ);
    }
    let (left, right) = ctx.endpoints(class).expect("S_Z classes are open");
    if !chi.is_positive() || *chi >= &right - &left {
        return Err(AnalysisError::ChiTooLarge);
    }
    let k = ((&right - frac) / chi).ceil();
    Ok(k.to_u64().expect("positive"))
}

fn atom_truths(x: &Rational, mu: &Rational, c: u64) -> Vec<bool> {
    let mut out = Vec::with_capacity(4 * c as usize + 4);
    for k in 0..=2 * c {
        let k = Rational::from_u64(k);
        out.push(*x < k);
        out.push(*x == k);
    }
    out.push(x < mu);
    out.push(x == mu);
    out
}

/// Same truth value for every atom `z < k`, `z = k` (`k <= 2c`),
/// `z < μ` and `z = μ` on every clock.
pub fn in_agreement(v: &ClockValuation, vh: &ClockValuation, mu: &Rational, muh: &Rational, c: u64) -> bool {
    v.len() == vh.len()
        && v.values().iter().zip(vh.values()).all(|(x, xh)| atom_truths(x, mu, c) == atom_truths(xh, muh, c))
}

/// Agreement plus equal fractional classes with both values at most `2c`.
pub fn in_complete_agreement(
    v: &ClockValuation,
    vh: &ClockValuation,
    mu: &Rational,
    muh: &Rational,
    c: u64,
) -> Result<bool, AnalysisError> {
    let ctx = polarity_ctx(mu)?;
    let ctxh = polarity_ctx(muh)?;
    if !in_agreement(v, vh, mu, muh, c) {
        return Ok(false);
    }
    let bound = Rational::from_u64(2 * c);
    Ok(v.values().iter().zip(vh.values()).all(|(x, xh)| {
        *x <= bound && *xh <= bound && interval_class(&x.fract(), &ctx) == interval_class(&xh.fract(), &ctxh)
    }))
}

/// Some clock lies strictly between `⌊μ⌋` and `⌊μ⌋ + 1`.
pub fn is_critical(v: &ClockValuation, mu: &Rational) -> bool {
    let m = mu.floor();
    let m1 = &m + Rational::one();
    v.values().iter().any(|x| m < *x && *x < m1)
}

/// The reset clock (value 0) and the other clock of a two-clock valuation.
fn split_reset(v: &ClockValuation) -> Result<(usize, usize), AnalysisError> {
    if v.len() != 2 {
        return Err(AnalysisError::PreconditionViolated("two clocks expected".into()));
    }
    let zero: Vec<usize> = (0..2).filter(|&z| v.values()[z].is_zero()).collect();
    match zero.as_slice() {
        [z1] => Ok((*z1, 1 - *z1)),
        _ => Err(AnalysisError::PreconditionViolated("exactly one clock must be zero".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CritCase {
    pub case: u8,
    pub c: u64,
}

/// The combinations of constraints satisfied by `v0 + δ` for a
/// one-reset start `v0` whose other clock has a non-integer value.
pub fn critval_cases(
    v0: &ClockValuation,
    delta: &Rational,
    mu: &Rational,
) -> Result<BTreeSet<CritCase>, AnalysisError> {
    let (z1, z2) = split_reset(v0)?;
    let y0 = &v0.values()[z2];
    if y0.is_integer() {
        return Err(AnalysisError::PreconditionViolated("the other clock must be non-integer".into()));
    }
    if !delta.is_positive() {
        return Err(AnalysisError::PreconditionViolated("delay must be positive".into()));
    }
    let z20 = y0.floor_u64().expect("non-negative");
    let m = mu.floor_u64().ok_or_else(|| AnalysisError::PreconditionViolated("negative parameter".into()))?;
    let x = &v0.values()[z1] + delta;
    let y = y0 + delta;
    let mut out = BTreeSet::new();
    let one = Rational::one();
    let mut check = |case: u8, c: u64, val: &Rational| {
        let cr = Rational::from_u64(c);
        let holds = match case {
            1 | 2 => *val == cr,
            3 | 4 => &cr - &one < *val && *val < cr,
            _ => cr < *val && *val < &cr + &one,
        };
        if holds {
            out.insert(CritCase { case, c });
        }
    };
    if m >= z20 {
        let c = m - z20;
        for case in [1, 3, 5] {
            check(case, c, &x);
        }
    }
    let c = m + z20 + 1;
    for case in [2, 4, 6] {
        check(case, c, &y);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pr2Shape {
    /// `c2 = z20 + c1`
    Same,
    /// `c2 = z20 + c1 + 1`
    PlusOne,
}

struct Pr2 {
    z1: usize,
    z2: usize,
    z20: u64,
    c1: u64,
    c2: u64,
    b: Rational,
}

fn pr2_data(v1: &ClockValuation, v2: &ClockValuation) -> Result<Pr2, AnalysisError> {
    let (z1, z2) = split_reset(v1)?;
    if v2.len() != 2 {
        return Err(AnalysisError::PreconditionViolated("two clocks expected".into()));
    }
    let delta = &v2.values()[z1] - &v1.values()[z1];
    if !delta.is_positive() || &v2.values()[z2] - &v1.values()[z2] != delta {
        return Err(AnalysisError::PreconditionViolated("v2 must be v1 plus a positive delay".into()));
    }
    if v2.values().iter().any(|x| x.is_integer()) {
        return Err(AnalysisError::PreconditionViolated("both clocks of v2 must be non-integer".into()));
    }
    let f = |x: &Rational| x.floor_u64().expect("non-negative");
    Ok(Pr2 {
        z1,
        z2,
        z20: f(&v1.values()[z2]),
        c1: f(&v2.values()[z1]),
        c2: f(&v2.values()[z2]),
        b: v1.values()[z2].fract(),
    })
}

pub fn pr2_shape(v1: &ClockValuation, v2: &ClockValuation) -> Result<Pr2Shape, AnalysisError> {
    let p = pr2_data(v1, v2)?;
    if p.c2 == p.z20 + p.c1 {
        Ok(Pr2Shape::Same)
    } else if p.c2 == p.z20 + p.c1 + 1 {
        Ok(Pr2Shape::PlusOne)
    } else {
        Err(AnalysisError::PreconditionViolated("integer parts out of range".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FracCaseId {
    C1,
    C2,
    C3a,
    C3b,
    C4ai,
    C4aii,
    C4b,
    C5,
    C6,
    C7a,
    C7b,
    C8ai,
    C8aii,
    C8b,
}

impl FracCaseId {
    /// The top-level case number (1 to 8).
    pub fn group(self) -> u8 {
        use FracCaseId::*;
        match self {
            C1 => 1,
            C2 => 2,
            C3a | C3b => 3,
            C4ai | C4aii | C4b => 4,
            C5 => 5,
            C6 => 6,
            C7a | C7b => 7,
            C8ai | C8aii | C8b => 8,
        }
    }

    pub fn label(self) -> &'static str {
        use FracCaseId::*;
        match self {
            C1 => "1",
            C2 => "2",
            C3a => "3a",
            C3b => "3b",
            C4ai => "4ai",
            C4aii => "4aii",
            C4b => "4b",
            C5 => "5",
            C6 => "6",
            C7a => "7a",
            C7b => "7b",
            C8ai => "8ai",
            C8aii => "8aii",
            C8b => "8b",
        }
    }
}

/// Lower end of an ε range: `ε >= 0`, or `ε ∼ 0` with `∼` taken from
/// the comparison of a clock with μ (`=` or `>`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsLower {
    NonNegative,
    Zero,
    Positive,
}

/// One applicable case: the fractional value decomposes as `κ + ε`, with
/// `ε` in `[lower, upper)` and the value itself below `value_below` when
/// the case states such a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracCase {
    pub id: FracCaseId,
    pub kappa: Rational,
    pub epsilon: Rational,
    pub lower: EpsLower,
    pub upper: Rational,
    pub value_below: Option<Rational>,
}

impl FracCase {
    pub fn bound_holds(&self) -> bool {
        let low_ok = match self.lower {
            EpsLower::NonNegative => !self.epsilon.is_negative(),
            EpsLower::Zero => self.epsilon.is_zero(),
            EpsLower::Positive => self.epsilon.is_positive(),
        };
        let value = &self.kappa + &self.epsilon;
        low_ok && self.epsilon < self.upper && self.value_below.as_ref().is_none_or(|b| value < *b)
    }
}

/// Every applicable fractional-value case for `v1 → v2`.
pub fn fracvalue_case(v1: &ClockValuation, v2: &ClockValuation, mu: &Rational) -> Result<Vec<FracCase>, AnalysisError> {
    use FracCaseId::*;
    polarity_ctx(mu)?;
    let p = pr2_data(v1, v2)?;
    let m = mu.floor_u64().expect("non-negative");
    let fm = mu.fract();
    let one = Rational::one();
    let b = p.b.clone();
    let x2 = &v2.values()[p.z1];
    let y2 = &v2.values()[p.z2];
    let fy = y2.fract();
    let fx = x2.fract();
    let same = p.c2 == p.z20 + p.c1;
    let plus = p.c2 == p.z20 + p.c1 + 1;
    let cmp_lower = |v: &Rational| if v == mu { EpsLower::Zero } else { EpsLower::Positive };
    let mut out = Vec::new();
    let mut push = |id, kappa: Rational, frac: &Rational, lower, upper: Rational, value_below| {
        let epsilon = frac - &kappa;
        out.push(FracCase { id, kappa, epsilon, lower, upper, value_below });
    };
    let nn = EpsLower::NonNegative;

    if p.c1 != m && same {
        push(C1, b.clone(), &fy, nn, &one - &b, None);
    }
    if p.c1 != m && plus {
        push(C2, Rational::zero(), &fy, nn, b.clone(), None);
    }
    if p.c1 == m && same {
        if x2 >= mu {
            let kappa = &b + &fm;
            push(C3a, kappa.clone(), &fy, cmp_lower(x2), &one - &kappa, None);
        } else {
            let cap = one.clone().min(&b + &fm);
            push(C3b, b.clone(), &fy, nn, fm.clone(), Some(cap));
        }
    }
    if p.c1 == m && plus {
        if &one - &b < fm {
            if x2 >= mu {
                push(C4ai, &b - &(&one - &fm), &fy, cmp_lower(x2), &one - &fm, Some(b.clone()));
            } else {
                push(C4aii, Rational::zero(), &fy, nn, &b - &(&one - &fm), None);
            }
        } else {
            push(C4b, Rational::zero(), &fy, nn, b.clone(), None);
        }
    }
    if p.c2 != m && plus {
        push(C5, &one - &b, &fx, nn, b.clone(), None);
    }
    if p.c2 != m && same {
        push(C6, Rational::zero(), &fx, nn, &one - &b, None);
    }
    if p.c2 == m && plus {
        if y2 >= mu {
            push(C7a, &(&one - &b) + &fm, &fx, cmp_lower(y2), &b - &fm, None);
        } else {
            let cap = one.clone().min(&(&one - &b) + &fm);
            push(C7b, &one - &b, &fx, nn, fm.clone(), Some(cap));
        }
    }
    if p.c2 == m && same {
        if b < fm {
            if y2 >= mu {
                push(C8ai, &fm - &b, &fx, cmp_lower(y2), &one - &fm, Some(&one - &b));
            } else {
                push(C8aii, Rational::zero(), &fx, nn, &fm - &b, None);
            }
        } else {
            push(C8b, Rational::zero(), &fx, nn, &one - &b, None);
        }
    }
    Ok(out)
}

/// Valuations `v0 v1 ...` where `v0(reset) = 0` and each later element
/// is the previous plus a positive delay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneResetSeq {
    pub reset: ClockId,
    pub valuations: Vec<ClockValuation>,
}

impl OneResetSeq {
    pub fn new(reset: ClockId, valuations: Vec<ClockValuation>) -> Result<Self, AnalysisError> {
        let s = OneResetSeq { reset, valuations };
        s.check()?;
        Ok(s)
    }

    pub fn from_delays(v0: ClockValuation, reset: ClockId, delays: &[Rational]) -> Result<Self, AnalysisError> {
        let mut vs = vec![v0];
        for d in delays {
            let next = crate::semantics::elapse(vs.last().unwrap(), d);
            vs.push(next);
        }
        Self::new(reset, vs)
    }

    fn check(&self) -> Result<(), AnalysisError> {
        let first =
            self.valuations.first().ok_or_else(|| AnalysisError::PreconditionViolated("empty sequence".into()))?;
        if !first.get(self.reset).is_some_and(Rational::is_zero) {
            return Err(AnalysisError::PreconditionViolated("reset clock must start at 0".into()));
        }
        for w in self.valuations.windows(2) {
            let d = &w[1].values()[0] - &w[0].values()[0];
            let uniform = w[1].values().iter().zip(w[0].values()).all(|(a, b)| a - b == d);
            if !d.is_positive() || !uniform {
                return Err(AnalysisError::PreconditionViolated("steps must be positive delays".into()));
            }
        }
        Ok(())
    }
}

/// Admissible values of `x̂` reproducing the atom truths of `x`.
struct Target {
    lo: Rational,
    lo_strict: bool,
    hi: Option<Rational>,
    pin: Option<Rational>,
}

fn target_for(x: &Rational, mu: &Rational, muh: &Rational, c: u64) -> Target {
    let mut t = Target { lo: Rational::zero(), lo_strict: false, hi: None, pin: None };
    let mut excluded = Vec::new();
    let mut apply = |k: Rational, src: Rational| {
        if x < &src {
            t.hi = Some(match t.hi.take() {
                Some(h) => h.min(k.clone()),
                None => k.clone(),
            });
        } else if t.lo < k || (t.lo == k && !t.lo_strict) {
            t.lo = k.clone();
            t.lo_strict = false;
        }
        if *x == src {
            t.pin = Some(k);
        } else {
            excluded.push(k);
        }
    };
    for k in 0..=2 * c {
        apply(Rational::from_u64(k), Rational::from_u64(k));
    }
    apply(muh.clone(), mu.clone());
    if excluded.contains(&t.lo) {
        t.lo_strict = true;
    }
    t
}

/// Builds a one-reset sequence from `vh0` agreeing with `xi` position by
/// position under `muh`, by choosing each total elapsed time inside the
/// admissible interval.
pub fn agreement_transport(
    xi: &OneResetSeq,
    mu: &Rational,
    muh: &Rational,
    vh0: &ClockValuation,
    c: u64,
) -> Result<OneResetSeq, AnalysisError> {
    let ctx = polarity_ctx(mu)?;
    let ctxh = polarity_ctx(muh)?;
    if ctx.m != ctxh.m {
        return Err(AnalysisError::FloorMismatch);
    }
    if ctx.polarity != ctxh.polarity {
        return Err(AnalysisError::PolarityMismatch);
    }
    xi.check()?;
    let v0 = &xi.valuations[0];
    if !in_complete_agreement(v0, vh0, mu, muh, c)? || !vh0.get(xi.reset).is_some_and(Rational::is_zero) {
        return Err(AnalysisError::NotCompleteAgreement);
    }
    let mut out = vec![vh0.clone()];
    let mut prev = Rational::zero();
    for (i, v) in xi.valuations.iter().enumerate().skip(1) {
        // Interval of total elapsed time since vh0, exclusive of `prev`.
        let mut lo = prev.clone();
        let mut lo_strict = true;
        let mut hi: Option<Rational> = None;
        let mut pin: Option<Rational> = None;
        for (x, x0) in v.values().iter().zip(vh0.values()) {
            let t = target_for(x, mu, muh, c);
            let tlo = &t.lo - x0;
            if tlo > lo || (tlo == lo && t.lo_strict) {
                lo_strict = t.lo_strict || (tlo == lo && lo_strict);
                lo = tlo;
            }
            if let Some(h) = t.hi {
                let h = &h - x0;
                hi = Some(match hi {
                    Some(old) => old.min(h),
                    None => h,
                });
            }
            if let Some(p) = t.pin {
                let p = &p - x0;
                if pin.as_ref().is_some_and(|q| *q != p) {
                    return Err(AnalysisError::Infeasible(i));
                }
                pin = Some(p);
            }
        }
        let total = match pin {
            Some(p) => {
                let above = if lo_strict { p > lo } else { p >= lo };
                if !above || hi.as_ref().is_some_and(|h| p >= *h) {
                    return Err(AnalysisError::Infeasible(i));
                }
                p
            }
            None => match hi {
                Some(h) if h > lo => lo.midpoint(&h),
                Some(_) => return Err(AnalysisError::Infeasible(i)),
                None => &lo + Rational::one(),
            },
        };
        let vh = crate::semantics::elapse(vh0, &total);
        if !in_agreement(v, &vh, mu, muh, c) {
            return Err(AnalysisError::Infeasible(i));
        }
        out.push(vh);
        prev = total;
    }
    OneResetSeq::new(xi.reset, out)
}

fn is_one_reset_start(r: &Region) -> bool {
    (0..r.clock_count()).any(|z| r.cell(ClockId(z)) == crate::regions::ClockCell::Exact(0))
}

/// Shortens a path of region-automaton nodes so that no node starting a
/// one-reset segment (some clock exactly 0) occurs more than `q_bound`
/// times, by cutting the loop between repeated occurrences.
pub fn compress_region_lasso(
    ra: &RegionAutomaton,
    path: &[usize],
    q_bound: usize,
) -> Result<Vec<usize>, AnalysisError> {
    for (i, w) in path.windows(2).enumerate() {
        if !ra.edges[w[0]].iter().any(|e| e.target == w[1]) {
            return Err(AnalysisError::Disconnected(i));
        }
    }
    let q_bound = q_bound.max(1);
    let mut cur = path.to_vec();
    loop {
        let mut cut = None;
        'search: for (i, &n) in cur.iter().enumerate() {
            if !is_one_reset_start(&ra.nodes[n].region) {
                continue;
            }
            let count = cur.iter().filter(|&&m| m == n).count();
            if count > q_bound {
                let j = cur[i + 1..].iter().position(|&m| m == n).unwrap() + i + 1;
                cut = Some((i, j));
                break 'search;
            }
        }
        match cut {
            Some((i, j)) => {
                cur.drain(i + 1..=j);
            }
            None => return Ok(cur),
        }
    }
}

/// Whether the one-reset segment starting at `cur_start` is critical,
/// given the start of the previous segment.
pub fn classify_critical_sequence(
    prev_start: &ClockValuation,
    cur_start: &ClockValuation,
    ctx: &PolarityContext,
) -> Result<bool, AnalysisError> {
    let all_zero = |v: &ClockValuation| v.values().iter().all(Rational::is_zero);
    let shape_ok = |v: &ClockValuation| v.len() == 2 && (all_zero(v) || split_reset(v).is_ok());
    if !shape_ok(prev_start) || !shape_ok(cur_start) {
        return Err(AnalysisError::PreconditionViolated(
            "starts must have exactly one zero clock or be all zero".into(),
        ));
    }
    if all_zero(cur_start) {
        return Ok(true);
    }
    let (z1, z2) = split_reset(cur_start)?;
    let class = |v: &ClockValuation| interval_class(&v.values()[z2].fract(), ctx);
    let cur_class = class(cur_start);
    if !ctx.in_sz(cur_class) {
        return Ok(true);
    }
    let p = prev_start.values();
    let non_critical = p[z1].is_zero()
        && !p[z2].is_zero()
        && class(prev_start) == cur_class
        && p[z2].floor() == cur_start.values()[z2].floor();
    Ok(!non_critical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn v(x: (i64, i64), y: (i64, i64)) -> ClockValuation {
        ClockValuation(vec![rat(x.0, x.1), rat(y.0, y.1)])
    }

    #[test]
    fn polarity_contexts() {
        let n = polarity_ctx(&rat(23, 10)).unwrap();
        assert_eq!((n.m, n.ell.clone(), n.polarity), (2, rat(3, 10), Polarity::Negative));
        assert_eq!((n.chi, n.s_z, n.w_z), (rat(3, 10), vec![IntervalClass::LLh], rat(2, 5)));
        let p = polarity_ctx(&rat(27, 10)).unwrap();
        assert_eq!((p.ell, p.polarity, p.chi, p.w_z), (rat(3, 10), Polarity::Positive, rat(1, 5), rat(1, 5)));
        assert_eq!(p.s_z, vec![IntervalClass::ZL, IntervalClass::Lh1]);
        assert!(matches!(polarity_ctx(&rat(5, 2)), Err(AnalysisError::DegenerateParameter(_))));
        assert!(polarity_ctx(&rat(3, 1)).is_err());
    }

    #[test]
    fn classes() {
        let ctx = polarity_ctx(&rat(23, 10)).unwrap();
        assert_eq!(interval_class(&rat(3, 20), &ctx), IntervalClass::ZL);
        assert_eq!(interval_class(&rat(3, 10), &ctx), IntervalClass::L);
        assert_eq!(interval_class(&rat(19, 20), &ctx), IntervalClass::Lh1);
        assert_eq!(interval_class(&rat(7, 10), &ctx), IntervalClass::Lh);
        assert_eq!(interval_class(&rat(0, 1), &ctx), IntervalClass::Z);
        assert_eq!(interval_class(&rat(1, 2), &ctx), IntervalClass::LLh);
    }

    #[test]
    fn low_k_examples() {
        let ctx = polarity_ctx(&rat(21, 10)).unwrap();
        assert_eq!(low_k(&rat(17, 20), &ctx), Ok(1));
        assert_eq!(low_k(&rat(18, 25), &ctx), Ok(2));
        assert_eq!(low_k(&rat(4, 5), &ctx), Ok(1));
        assert_eq!(low_k(&rat(1, 20), &ctx), Err(AnalysisError::NotInSZ));
        // χ = 3/10 against a width-4/10 interval: the sliver gets its own index.
        let ctx = polarity_ctx(&rat(23, 10)).unwrap();
        assert_eq!(low_k(&rat(7, 20), &ctx), Ok(2));
        assert_eq!(low_k_with(&rat(1, 2), &rat(1, 2), &ctx), Err(AnalysisError::ChiTooLarge));
    }

    #[test]
    fn agreement() {
        let (mu, muh) = (rat(33, 10), rat(31, 10));
        assert!(in_agreement(&v((6, 5), (37, 10)), &v((7, 5), (18, 5)), &mu, &muh, 2));
        assert!(in_agreement(&v((6, 5), (37, 10)), &v((6, 5), (37, 10)), &mu, &mu, 2));
        assert!(!in_agreement(&v((6, 5), (37, 10)), &v((7, 5), (61, 20)), &mu, &muh, 2));
    }

    #[test]
    fn complete_agreement() {
        let (mu, muh) = (rat(13, 10), rat(7, 5));
        assert_eq!(in_complete_agreement(&v((0, 1), (1, 2)), &v((0, 1), (1, 2)), &mu, &muh, 2), Ok(true));
        assert_eq!(in_complete_agreement(&v((0, 1), (7, 20)), &v((0, 1), (7, 20)), &mu, &muh, 2), Ok(false));
        assert_eq!(in_complete_agreement(&v((0, 1), (9, 2)), &v((0, 1), (9, 2)), &mu, &mu, 2), Ok(false));
        assert!(in_complete_agreement(&v((0, 1), (1, 2)), &v((0, 1), (1, 2)), &rat(1, 2), &muh, 2).is_err());
    }

    #[test]
    fn critical() {
        let mu = rat(23, 10);
        assert!(is_critical(&v((5, 2), (2, 5)), &mu));
        assert!(!is_critical(&v((7, 2), (1, 1)), &mu));
        assert!(is_critical(&v((2, 1), (29, 10)), &mu));
    }

    #[test]
    fn critval_examples() {
        let v0 = v((0, 1), (3, 5));
        let mu = rat(6, 5);
        let has =
            |d: Rational, case: u8| critval_cases(&v0, &d, &mu).unwrap().iter().any(|k| k.case == case && k.c == 1);
        assert!(has(rat(1, 1), 1));
        assert!(has(rat(7, 10), 3));
        assert!(has(rat(31, 20), 5));
        assert!(critval_cases(&v((0, 1), (1, 1)), &rat(1, 2), &mu).is_err());
        assert!(critval_cases(&v0, &rat(0, 1), &mu).is_err());
    }

    #[test]
    fn pr2_examples() {
        let v1 = v((0, 1), (7, 10));
        let after = |v1: &ClockValuation, d| crate::semantics::elapse(v1, &d);
        assert_eq!(pr2_shape(&v1, &after(&v1, rat(1, 5))), Ok(Pr2Shape::Same));
        assert_eq!(pr2_shape(&v1, &after(&v1, rat(1, 2))), Ok(Pr2Shape::PlusOne));
        let v1 = v((0, 1), (3, 2));
        assert_eq!(pr2_shape(&v1, &after(&v1, rat(17, 10))), Ok(Pr2Shape::PlusOne));
        assert!(pr2_shape(&v1, &after(&v1, rat(1, 2))).is_err());
    }

    #[test]
    fn fracvalue_examples() {
        let v1 = v((0, 1), (7, 10));
        let mu = rat(23, 10);
        let cases = |d| {
            let v2 = crate::semantics::elapse(&v1, &d);
            fracvalue_case(&v1, &v2, &mu).unwrap()
        };
        let c = cases(rat(1, 5));
        let c1 = c.iter().find(|k| k.id == FracCaseId::C1).unwrap();
        assert_eq!((c1.kappa.clone(), c1.epsilon.clone()), (rat(7, 10), rat(1, 5)));
        assert!(c.iter().all(FracCase::bound_holds));
        let c2 = cases(rat(1, 2));
        let k = c2.iter().find(|k| k.id == FracCaseId::C2).unwrap();
        assert_eq!(k.epsilon, rat(1, 5));
        let c4 = cases(rat(12, 5));
        let k = c4.iter().find(|k| k.id == FracCaseId::C4b).unwrap();
        assert_eq!(k.epsilon, rat(1, 10));
        assert!(c4.iter().all(FracCase::bound_holds));
    }

    #[test]
    fn transport_examples() {
        let xi = OneResetSeq::new(ClockId(0), vec![v((0, 1), (0, 1)), v((3, 10), (3, 10))]).unwrap();
        let out = agreement_transport(&xi, &rat(3, 10), &rat(1, 5), &v((0, 1), (0, 1)), 1).unwrap();
        assert_eq!(out.valuations[1], v((1, 5), (1, 5)));

        let xi = OneResetSeq::new(ClockId(0), vec![v((0, 1), (0, 1)), v((1, 10), (1, 10))]).unwrap();
        let out = agreement_transport(&xi, &rat(3, 10), &rat(1, 5), &v((0, 1), (0, 1)), 1).unwrap();
        assert!(out.valuations[1].values().iter().all(|x| x.is_positive() && *x < rat(1, 5)));

        let xi = OneResetSeq::from_delays(v((0, 1), (1, 2)), ClockId(0), &[rat(9, 10)]).unwrap();
        let out = agreement_transport(&xi, &rat(13, 10), &rat(7, 5), &v((0, 1), (1, 2)), 2).unwrap();
        assert_eq!(out.valuations[1], v((19, 20), (29, 20)));

        assert_eq!(
            agreement_transport(&xi, &rat(13, 10), &rat(17, 10), &v((0, 1), (1, 2)), 2),
            Err(AnalysisError::PolarityMismatch)
        );
        assert_eq!(
            agreement_transport(&xi, &rat(13, 10), &rat(6, 5), &v((0, 1), (3, 20)), 2),
            Err(AnalysisError::NotCompleteAgreement)
        );
        assert_eq!(
            agreement_transport(&xi, &rat(13, 10), &rat(11, 5), &v((0, 1), (1, 2)), 2),
            Err(AnalysisError::FloorMismatch)
        );
    }

    #[test]
    fn classify() {
        let ctx = polarity_ctx(&rat(23, 10)).unwrap();
        let a = v((0, 1), (1, 2));
        assert_eq!(classify_critical_sequence(&a, &v((0, 1), (0, 1)), &ctx), Ok(true));
        assert_eq!(classify_critical_sequence(&a, &v((0, 1), (1, 10)), &ctx), Ok(true));
        assert_eq!(classify_critical_sequence(&a, &v((0, 1), (3, 5)), &ctx), Ok(false));
        assert_eq!(classify_critical_sequence(&a, &v((0, 1), (8, 5)), &ctx), Ok(true));
        assert_eq!(classify_critical_sequence(&a, &v((3, 5), (0, 1)), &ctx), Ok(true));
        assert!(classify_critical_sequence(&a, &v((1, 2), (1, 2)), &ctx).is_err());
    }

    #[test]
    fn fuzz_smoke() {
        for r in fuzz::run_all(3, 300) {
            assert!(r.passed(), "{}: {:?}", r.name, r.first_failure);
        }
    }
}
