use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::model::{Bound, ClockId, ClockValuation, CmpOp, Constraint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("guard constant {constant} exceeds the region bound {max}")]
    ConstantAboveMax { constant: String, max: u32 },
    #[error("guard constant {0} is not a natural number")]
    NonNaturalConstant(String),
    #[error("guard refers to a parameter; instantiate it first")]
    Parametric,
    #[error("region budget of {0} nodes exceeded")]
    RegionBudgetExceeded(usize),
}

/// Coarse position of one clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClockCell {
    /// Exactly `k`, with `k <= M`.
    Exact(u32),
    /// Strictly between `k` and `k + 1`, with `k < M`.
    Open(u32),
    /// Strictly above `M`.
    Above,
}

/// A clock region for bound `M`: per-clock integer cells plus the weak
/// ordering of fractional parts of the bounded, non-integer clocks.
///
/// Cells are encoded as `2k` for `{k}`, `2k+1` for `(k, k+1)` and `2M+1`
/// for "above M". Ranks are dense (1 = smallest fractional part) and 0 for
/// clocks without a tracked fractional part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    max: u32,
    cells: SmallVec<[u32; 2]>,
    ranks: SmallVec<[u8; 2]>,
}

impl Region {
    /// The region of the all-zero valuation.
    pub fn zero(clocks: usize, max: u32) -> Self {
        Region { max, cells: SmallVec::from_elem(0, clocks), ranks: SmallVec::from_elem(0, clocks) }
    }

    /// Canonical region containing `v`.
    pub fn of_valuation(v: &ClockValuation, max: u32) -> Self {
        let bound = crate::rational::Rational::from_u64(max as u64);
        let mut cells = SmallVec::with_capacity(v.len());
        let mut fracs = Vec::new();
        for (z, x) in v.values().iter().enumerate() {
            if *x > bound {
                cells.push(2 * max + 1);
            } else {
                let k = x.floor_u64().expect("clock values are non-negative") as u32;
                let f = x.fract();
                if f.is_zero() {
                    cells.push(2 * k);
                } else {
                    cells.push(2 * k + 1);
                    fracs.push((f, z));
                }
            }
        }
        fracs.sort();
        let mut ranks: SmallVec<[u8; 2]> = SmallVec::from_elem(0, v.len());
        let mut rank = 0u8;
        for (i, (f, z)) in fracs.iter().enumerate() {
            if i == 0 || *f != fracs[i - 1].0 {
                rank += 1;
            }
            ranks[*z] = rank;
        }
        Region { max, cells, ranks }
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    pub fn clock_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, z: ClockId) -> ClockCell {
        let c = self.cells[z.0];
        if c > 2 * self.max {
            ClockCell::Above
        } else if c.is_multiple_of(2) {
            ClockCell::Exact(c / 2)
        } else {
            ClockCell::Open(c / 2)
        }
    }

    /// Fractional rank among the bounded non-integer clocks (1 = smallest).
    pub fn frac_rank(&self, z: ClockId) -> Option<u8> {
        match self.ranks[z.0] {
            0 => None,
            r => Some(r),
        }
    }

    fn bounded(&self, z: usize) -> bool {
        self.cells[z] <= 2 * self.max
    }

    /// No bounded clock sits on an integer, so small delays stay inside.
    pub fn is_time_open(&self) -> bool {
        (0..self.cells.len()).all(|z| !self.bounded(z) || self.cells[z] % 2 == 1)
    }

    /// Every clock is above the bound.
    pub fn is_absorbing(&self) -> bool {
        (0..self.cells.len()).all(|z| !self.bounded(z))
    }

    /// The immediate time successor, or `None` when absorbing.
    pub fn time_successor(&self) -> Option<Region> {
        let n = self.cells.len();
        let top = 2 * self.max;
        let mut next = self.clone();
        let integers: SmallVec<[usize; 2]> =
            (0..n).filter(|&z| self.cells[z] <= top && self.cells[z].is_multiple_of(2)).collect();
        if !integers.is_empty() {
            let opens_new = integers.iter().any(|&z| self.cells[z] < top);
            if opens_new {
                for r in next.ranks.iter_mut() {
                    if *r > 0 {
                        *r += 1;
                    }
                }
            }
            for &z in &integers {
                next.cells[z] += 1;
                next.ranks[z] = if self.cells[z] < top { 1 } else { 0 };
            }
            return Some(next);
        }
        let top_rank = *self.ranks.iter().max()?;
        if top_rank == 0 {
            return None;
        }
        for z in 0..n {
            if self.ranks[z] == top_rank {
                next.cells[z] += 1;
                next.ranks[z] = 0;
            }
        }
        Some(next)
    }

    /// Regions reachable by a strictly positive delay: the time-successor
    /// chain, plus `self` when time-open.
    pub fn positive_delay_successors(&self) -> Vec<Region> {
        let mut out = Vec::new();
        if self.is_time_open() {
            out.push(self.clone());
        }
        let mut cur = self.time_successor();
        while let Some(r) = cur {
            cur = r.time_successor();
            if Some(&r) == out.first() {
                break;
            }
            out.push(r);
        }
        out
    }

    /// Sets the given clocks to zero.
    pub fn reset<'a, I: IntoIterator<Item = &'a ClockId>>(&self, clocks: I) -> Region {
        let mut next = self.clone();
        let mut touched = false;
        for z in clocks {
            next.cells[z.0] = 0;
            touched |= next.ranks[z.0] != 0;
            next.ranks[z.0] = 0;
        }
        if touched {
            next.renumber();
        }
        next
    }

    fn renumber(&mut self) {
        let mut used: SmallVec<[u8; 4]> = self.ranks.iter().copied().filter(|&r| r > 0).collect();
        used.sort_unstable();
        used.dedup();
        for r in self.ranks.iter_mut() {
            if *r > 0 {
                *r = used.iter().position(|u| u == r).unwrap() as u8 + 1;
            }
        }
    }

    /// Whether the region satisfies a parameter-free guard whose constants
    /// are naturals at most `M`.
    pub fn satisfies(&self, g: &Constraint) -> Result<bool, RegionError> {
        Ok(RegionGuard::compile(g, self.max)?.eval(self))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let name = |z: usize| names.get(z).cloned().unwrap_or_else(|| format!("z{z}"));
        let mut parts: Vec<String> = (0..self.cells.len())
            .map(|z| match self.cell(ClockId(z)) {
                ClockCell::Exact(k) => format!("{}={k}", name(z)),
                ClockCell::Open(k) => format!("{}∈({k},{})", name(z), k + 1),
                ClockCell::Above => format!("{}>{}", name(z), self.max),
            })
            .collect();
        let top = self.ranks.iter().copied().max().unwrap_or(0);
        if self.ranks.iter().filter(|&&r| r > 0).count() > 1 {
            let groups: Vec<String> = (1..=top)
                .map(|r| {
                    let members: Vec<String> =
                        (0..self.cells.len()).filter(|&z| self.ranks[z] == r).map(name).collect();
                    members.join("=")
                })
                .collect();
            parts.push(format!("frac:{}", groups.join("<")));
        }
        parts.join(" ")
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// A guard pre-compiled against a region bound.
#[derive(Clone, Debug)]
pub(crate) enum RegionGuard {
    True,
    Lt(usize, u32),
    Eq(usize, u32),
    Not(Box<RegionGuard>),
    And(Box<RegionGuard>, Box<RegionGuard>),
}

impl RegionGuard {
    pub(crate) fn compile(g: &Constraint, max: u32) -> Result<Self, RegionError> {
        Ok(match g {
            Constraint::True => RegionGuard::True,
            Constraint::Atom(a) => {
                let c = match &a.bound {
                    Bound::Param(_) => return Err(RegionError::Parametric),
                    Bound::Const(c) => c,
                };
                let k = c.to_u64().ok_or_else(|| RegionError::NonNaturalConstant(c.to_string()))?;
                if k > max as u64 {
                    return Err(RegionError::ConstantAboveMax { constant: c.to_string(), max });
                }
                match a.op {
                    CmpOp::Lt => RegionGuard::Lt(a.clock.0, k as u32),
                    CmpOp::Eq => RegionGuard::Eq(a.clock.0, k as u32),
                }
            }
            Constraint::Not(inner) => RegionGuard::Not(Box::new(Self::compile(inner, max)?)),
            Constraint::And(l, r) => {
                RegionGuard::And(Box::new(Self::compile(l, max)?), Box::new(Self::compile(r, max)?))
            }
        })
    }

    pub(crate) fn eval(&self, r: &Region) -> bool {
        match self {
            RegionGuard::True => true,
            RegionGuard::Lt(z, c) => match r.cell(ClockId(*z)) {
                ClockCell::Exact(k) => k < *c,
                ClockCell::Open(k) => k < *c,
                ClockCell::Above => false,
            },
            RegionGuard::Eq(z, c) => r.cell(ClockId(*z)) == ClockCell::Exact(*c),
            RegionGuard::Not(g) => !g.eval(r),
            RegionGuard::And(a, b) => a.eval(r) && b.eval(r),
        }
    }
}

/// Canonical region containing `v` for bound `m`.
pub fn region_of(v: &ClockValuation, m: u32) -> Region {
    Region::of_valuation(v, m)
}

/// All regions reachable from `r` by a strictly positive delay.
pub fn positive_delay_successors(r: &Region) -> Vec<Region> {
    r.positive_delay_successors()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rational};

    fn v(xs: &[Rational]) -> ClockValuation {
        ClockValuation(xs.to_vec())
    }

    const X: ClockId = ClockId(0);
    const Y: ClockId = ClockId(1);

    #[test]
    fn region_of_examples() {
        let r = region_of(&v(&[rat(1, 2), rat(3, 2)]), 2);
        assert_eq!(r.cell(X), ClockCell::Open(0));
        assert_eq!(r.cell(Y), ClockCell::Open(1));
        assert_eq!(r.frac_rank(X), r.frac_rank(Y));

        let r = region_of(&v(&[rat(23, 10), rat(0, 1)]), 2);
        assert_eq!(r.cell(X), ClockCell::Above);
        assert_eq!(r.cell(Y), ClockCell::Exact(0));

        let r = region_of(&v(&[rat(6, 5), rat(17, 10)]), 2);
        assert_eq!(r.cell(X), ClockCell::Open(1));
        assert_eq!(r.cell(Y), ClockCell::Open(1));
        assert!(r.frac_rank(X) < r.frac_rank(Y));
    }

    #[test]
    fn successors_of_zero_region() {
        let zero = Region::zero(2, 1);
        let succ = positive_delay_successors(&zero);
        let diag = region_of(&v(&[rat(1, 2), rat(1, 2)]), 1);
        let ones = region_of(&v(&[rat(1, 1), rat(1, 1)]), 1);
        let above = region_of(&v(&[rat(2, 1), rat(2, 1)]), 1);
        assert_eq!(succ, vec![diag, ones, above]);
        assert!(!succ.contains(&zero));
    }

    #[test]
    fn absorbing_and_open_regions() {
        let above = region_of(&v(&[rat(5, 1), rat(7, 2)]), 1);
        assert_eq!(positive_delay_successors(&above), vec![above.clone()]);

        let open = region_of(&v(&[rat(1, 5), rat(1, 2)]), 1);
        let succ = positive_delay_successors(&open);
        assert_eq!(succ[0], open);
        assert!(succ.contains(&above));
    }

    #[test]
    fn one_clock_chain_has_four_regions() {
        let zero = Region::zero(1, 1);
        let mut all = vec![zero.clone()];
        all.extend(positive_delay_successors(&zero));
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn reset_renumbers_ranks() {
        let r = region_of(&v(&[rat(1, 5), rat(1, 2), rat(7, 10)]), 2);
        let r2 = r.reset(&[ClockId(1)]);
        assert_eq!(r2, region_of(&v(&[rat(1, 5), rat(0, 1), rat(7, 10)]), 2));
    }

    #[test]
    fn guard_evaluation_and_bounds() {
        let r = region_of(&v(&[rat(1, 1), rat(1, 2)]), 1);
        let one = Bound::Const(rat(1, 1));
        assert!(r.satisfies(&Constraint::eq(X, one.clone())).unwrap());
        assert!(r.satisfies(&Constraint::lt(Y, one.clone())).unwrap());
        assert!(!r.satisfies(&Constraint::lt(X, one)).unwrap());
        assert!(matches!(
            r.satisfies(&Constraint::eq(X, Bound::Const(rat(2, 1)))),
            Err(RegionError::ConstantAboveMax { .. })
        ));
    }

    #[test]
    fn display() {
        let r = region_of(&v(&[rat(6, 5), rat(17, 10)]), 2);
        assert_eq!(r.display_with(&["x".into(), "y".into()]), "x∈(1,2) y∈(1,2) frac:x<y");
    }
}
