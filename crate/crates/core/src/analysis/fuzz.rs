//! Seeded randomized campaigns over the analysis operations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::*;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// First failing trial, if any.
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn trial_rng(seed: u64, suite: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed ^ suite.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (trial as u64).wrapping_mul(0xD1B5_4A32_D192_ED03),
    )
}

/// Uniform rational `p/q` in `[lo, hi)` with `q <= max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den.max(1));
    let qr = Rational::from_integer(q);
    let a = (lo * &qr).ceil().floor_i64().unwrap();
    let b = (hi * &qr).ceil().floor_i64().unwrap();
    if b <= a {
        return lo.clone();
    }
    Rational::new(rng.gen_range(a..b), q)
}

/// Random parameter value in `(0, hi)` that is not a multiple of 1/2.
pub fn random_nondegenerate<R: Rng>(rng: &mut R, hi: u64) -> Rational {
    loop {
        let v = random_rational(rng, &Rational::zero(), &Rational::from_u64(hi), 40);
        if !(&v * Rational::from_u64(2)).is_integer() {
            return v;
        }
    }
}

/// A second parameter value with the same integer part and polarity.
pub fn random_partner<R: Rng>(rng: &mut R, mu: &Rational) -> Rational {
    let half = Rational::half();
    let base = mu.floor();
    let (lo, hi) = if mu.fract() < half { (Rational::zero(), half) } else { (half, Rational::one()) };
    loop {
        let f = random_rational(rng, &lo, &hi, 40);
        if f != Rational::zero() && f != Rational::half() {
            return &base + f;
        }
    }
}

fn run_suite<F>(name: &'static str, id: u64, seed: u64, trials: usize, f: F) -> SuiteReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<(), String> + Sync,
{
    let fails: Vec<String> = (0..trials)
        .into_par_iter()
        .filter_map(|t| f(&mut trial_rng(seed, id, t)).err().map(|e| format!("trial {t}: {e}")))
        .collect();
    SuiteReport { name, trials, failures: fails.len(), first_failure: fails.into_iter().next() }
}

fn val(x: Rational, y: Rational) -> ClockValuation {
    ClockValuation(vec![x, y])
}

/// A one-reset start `(0, y)` or `(y, 0)` with `y` non-integer in `(0, 2c)`.
fn random_start<R: Rng>(rng: &mut R, c: u64) -> (ClockValuation, usize) {
    let y = loop {
        let y = random_rational(rng, &Rational::zero(), &Rational::from_u64(2 * c), 20);
        if !y.is_integer() {
            break y;
        }
    };
    if rng.gen_bool(0.5) {
        (val(Rational::zero(), y), 0)
    } else {
        (val(y, Rational::zero()), 1)
    }
}

pub fn interval_partition(seed: u64, trials: usize) -> SuiteReport {
    run_suite("interval classes partition [0,1)", 1, seed, trials, |rng| {
        let mu = random_nondegenerate(rng, 4);
        let ctx = polarity_ctx(&mu).map_err(|e| e.to_string())?;
        let f = random_rational(rng, &Rational::zero(), &Rational::one(), 60);
        let one = Rational::one();
        let hi = &one - &ctx.ell;
        let memberships = [
            f.is_zero(),
            f.is_positive() && f < ctx.ell,
            f == ctx.ell,
            ctx.ell < f && f < hi,
            f == hi,
            hi < f && f < one,
        ];
        let class = interval_class(&f, &ctx);
        let idx = IntervalClass::ALL.iter().position(|c| *c == class).unwrap();
        if memberships.iter().filter(|b| **b).count() != 1 || !memberships[idx] {
            return Err(format!("frac {f} under mu {mu}"));
        }
        Ok(())
    })
}

pub fn low_k_brackets(seed: u64, trials: usize) -> SuiteReport {
    run_suite("low_k bracket rule", 2, seed, trials, |rng| {
        let mu = random_nondegenerate(rng, 4);
        let ctx = polarity_ctx(&mu).map_err(|e| e.to_string())?;
        let f = random_rational(rng, &Rational::zero(), &Rational::one(), 60);
        let class = interval_class(&f, &ctx);
        if !ctx.in_sz(class) {
            return match low_k(&f, &ctx) {
                Err(AnalysisError::NotInSZ) => Ok(()),
                other => Err(format!("expected NotInSZ, got {other:?}")),
            };
        }
        let (_, right) = ctx.endpoints(class).unwrap();
        match low_k(&f, &ctx) {
            Ok(k) => {
                let kr = Rational::from_u64(k);
                let lo = &right - &(&kr * &ctx.chi);
                let hi = &right - &((&kr - Rational::one()) * &ctx.chi);
                if k >= 1 && lo <= f && f < hi {
                    Ok(())
                } else {
                    Err(format!("k={k} frac={f} mu={mu}"))
                }
            }
            Err(AnalysisError::ChiTooLarge) => Ok(()),
            Err(e) => Err(e.to_string()),
        }
    })
}

pub fn critval_completeness(seed: u64, trials: usize) -> SuiteReport {
    run_suite("critical valuation cases", 3, seed, trials, |rng| {
        let c = rng.gen_range(1..=3);
        let mu = random_nondegenerate(rng, 2 * c);
        let (v0, _) = random_start(rng, c);
        let mut delta = random_rational(rng, &Rational::zero(), &Rational::from_u64(2 * c + 1), 20);
        if !delta.is_positive() {
            delta = Rational::new(1, 3);
        }
        let cases = critval_cases(&v0, &delta, &mu).map_err(|e| e.to_string())?;
        let v1 = crate::semantics::elapse(&v0, &delta);
        if is_critical(&v1, &mu) && cases.is_empty() {
            return Err(format!("v0={v0} delta={delta} mu={mu}"));
        }
        Ok(())
    })
}

fn pr2_pair<R: Rng>(rng: &mut R, c: u64) -> (ClockValuation, ClockValuation) {
    loop {
        let (v1, _) = random_start(rng, c);
        let delta = random_rational(rng, &Rational::new(1, 100), &Rational::from_u64(2 * c + 1), 30);
        let v2 = crate::semantics::elapse(&v1, &delta);
        if v2.values().iter().all(|x| !x.is_integer()) {
            return (v1, v2);
        }
    }
}

pub fn pr2_totality(seed: u64, trials: usize) -> SuiteReport {
    run_suite("integer-part shapes", 4, seed, trials, |rng| {
        let c = rng.gen_range(1..=3);
        let (v1, v2) = pr2_pair(rng, c);
        let shape = pr2_shape(&v1, &v2).map_err(|e| format!("{v1} -> {v2}: {e}"))?;
        let (z1, z2) = if v1.values()[0].is_zero() { (0, 1) } else { (1, 0) };
        let f = |x: &Rational| x.floor_u64().unwrap();
        let (z20, c1, c2) = (f(&v1.values()[z2]), f(&v2.values()[z1]), f(&v2.values()[z2]));
        let want = if c2 == z20 + c1 { Pr2Shape::Same } else { Pr2Shape::PlusOne };
        if shape != want || !(c2 == z20 + c1 || c2 == z20 + c1 + 1) {
            return Err(format!("{v1} -> {v2}"));
        }
        Ok(())
    })
}

pub fn fracvalue_cases(seed: u64, trials: usize) -> SuiteReport {
    run_suite("fractional-value cases", 5, seed, trials, |rng| {
        let c = rng.gen_range(1..=3);
        let mu = random_nondegenerate(rng, 2 * c);
        let (v1, mut v2) = pr2_pair(rng, c);
        // Sometimes land the reset clock (or the other) exactly on mu.
        if rng.gen_bool(0.2) {
            let z = rng.gen_range(0..2);
            let d = &mu - &v1.values()[z];
            if d.is_positive() {
                let cand = crate::semantics::elapse(&v1, &d);
                if cand.values().iter().all(|x| !x.is_integer()) {
                    v2 = cand;
                }
            }
        }
        let cases = fracvalue_case(&v1, &v2, &mu).map_err(|e| e.to_string())?;
        let low = cases.iter().any(|k| k.id.group() <= 4);
        let high = cases.iter().any(|k| k.id.group() >= 5);
        if !low || !high {
            return Err(format!("coverage {v1} -> {v2} mu={mu}"));
        }
        if let Some(bad) = cases.iter().find(|k| !k.bound_holds()) {
            return Err(format!("case {} out of range: {v1} -> {v2} mu={mu}", bad.id.label()));
        }
        Ok(())
    })
}

/// A value with the same integer part whose fraction has the same class
/// under `muh` as `x` has under `mu`.
pub fn matching_value<R: Rng>(rng: &mut R, x: &Rational, ctx: &PolarityContext, ctxh: &PolarityContext) -> Rational {
    let base = x.floor();
    let one = Rational::one();
    let f = match interval_class(&x.fract(), ctx) {
        IntervalClass::Z => Rational::zero(),
        IntervalClass::L => ctxh.ell.clone(),
        IntervalClass::Lh => &one - &ctxh.ell,
        class => {
            let (lo, hi) = ctxh.endpoints(class).unwrap();
            loop {
                let f = random_rational(rng, &lo, &hi, 60);
                if f > lo {
                    break f;
                }
            }
        }
    };
    base + f
}

/// Delays for a one-reset sequence, some of them landing a clock exactly
/// on an integer or on the parameter.
fn random_delays<R: Rng>(rng: &mut R, v0: &ClockValuation, mu: &Rational, len: usize) -> Vec<Rational> {
    let mut cur = v0.clone();
    let mut out = Vec::new();
    for _ in 0..len {
        let z = rng.gen_range(0..2);
        let x = &cur.values()[z];
        let target = match rng.gen_range(0..4) {
            0 => Some(mu.clone()),
            1 => Some(x.floor() + Rational::one()),
            _ => None,
        };
        let d = match target {
            Some(t) if t > *x => t - x,
            _ => random_rational(rng, &Rational::new(1, 50), &Rational::new(3, 2), 30),
        };
        let d = if d.is_positive() { d } else { Rational::new(1, 7) };
        cur = crate::semantics::elapse(&cur, &d);
        out.push(d);
    }
    out
}

/// Random input for the agreement transport: sequence, both parameter
/// values, a completely agreeing start, and the constant bound.
pub fn random_transport_instance<R: Rng>(rng: &mut R) -> (OneResetSeq, Rational, Rational, ClockValuation, u64) {
    let c = rng.gen_range(1..=2);
    let mu = random_nondegenerate(rng, 2 * c);
    let muh = random_partner(rng, &mu);
    let ctx = polarity_ctx(&mu).unwrap();
    let ctxh = polarity_ctx(&muh).unwrap();
    let (v0, z1) = random_start(rng, c);
    let mut vh0 = v0.clone();
    vh0.0[1 - z1] = matching_value(rng, &v0.values()[1 - z1], &ctx, &ctxh);
    let len = rng.gen_range(1..=8);
    let delays = random_delays(rng, &v0, &mu, len);
    let xi = OneResetSeq::from_delays(v0, ClockId(z1), &delays).unwrap();
    (xi, mu, muh, vh0, c)
}

pub fn transport_agreement(seed: u64, trials: usize) -> SuiteReport {
    run_suite("agreement transport", 6, seed, trials, |rng| {
        let (xi, mu, muh, vh0, c) = random_transport_instance(rng);
        let out = agreement_transport(&xi, &mu, &muh, &vh0, c).map_err(|e| format!("{e} (mu={mu}, muh={muh})"))?;
        if out.valuations.len() != xi.valuations.len() || out.reset != xi.reset {
            return Err("shape mismatch".into());
        }
        for (v, vh) in xi.valuations.iter().zip(&out.valuations).skip(1) {
            if !in_agreement(v, vh, &mu, &muh, c) {
                return Err(format!("{v} vs {vh}"));
            }
        }
        Ok(())
    })
}

pub fn order_law(seed: u64, trials: usize) -> SuiteReport {
    run_suite("cross-parameter interval order", 7, seed, trials, |rng| {
        let a = random_nondegenerate(rng, 2);
        let b = random_partner(rng, &a);
        let (lo, hi) = if a.fract() < b.fract() { (a, b) } else { (b, a) };
        if lo.fract() == hi.fract() || hi.fract() >= Rational::half() {
            return Ok(());
        }
        let (cl, ch) = (polarity_ctx(&lo).unwrap(), polarity_ctx(&hi).unwrap());
        // Every point of ZL under the smaller value lies below ℓ of the larger.
        let f = random_rational(rng, &Rational::zero(), &cl.ell, 80);
        if f.is_positive() && interval_class(&f, &cl) == IntervalClass::ZL && f >= ch.ell {
            return Err(format!("{f} with {lo} / {hi}"));
        }
        Ok(())
    })
}

/// All suites with `trials` trials each.
pub fn run_all(seed: u64, trials: usize) -> Vec<SuiteReport> {
    vec![
        interval_partition(seed, trials),
        low_k_brackets(seed, trials),
        critval_completeness(seed, trials),
        pr2_totality(seed, trials),
        fracvalue_cases(seed, trials),
        transport_agreement(seed, trials),
        order_law(seed, trials),
    ]
}
