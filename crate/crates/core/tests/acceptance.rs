//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pnta::analysis::fuzz;
use pnta::generators::random::{random_automaton, random_word, RandomSpec};
use pnta::generators::{gen_lk, gen_lpk};
use pnta::model::{is_nrtta, max_constant};
use pnta::parametric::{
    candidate_parameters, emptiness_fixed, parametric_emptiness, prepare_fixed, scale_constants, CandidateSet,
};
use pnta::regions::{buchi_nonempty, build_region_automaton, extract_witness_word, region_of};
use pnta::semantics::{execute, reachable_per_prefix, TimedWord};
use pnta::translate::ta_to_nrtta;
use pnta::{rat, Automaton, ParamValuation, Rational};

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonempty_at(a: &Automaton, mu: &Rational) -> bool {
    emptiness_fixed(a, Some(mu)).expect("fixed check").verdict.is_nonempty()
}

fn c1_candidates() -> Outcome {
    let want: Vec<Rational> = [(0, 1), (1, 40), (1, 2), (21, 40), (1, 1), (41, 40), (3, 2), (61, 40), (2, 1), (5, 1)]
        .iter()
        .map(|&(p, q)| rat(p, q))
        .collect();
    let a = pnta::format::parse_automaton(
        "automaton c1\nclocks x\nparams mu\ninit p\naccept q\ntrans p q a ( x = 1 ) { }\ntrans q q a ( x < mu ) { }\n",
    )
    .unwrap();
    let t = Instant::now();
    let set = candidate_parameters(&a).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    let direct = CandidateSet::new(1, 2);
    if set.values() != want || direct.values() != want {
        return Err(format!("got {:?}", set.values().iter().map(|v| v.to_string()).collect::<Vec<_>>()));
    }
    if (set.a, set.alpha.clone(), set.xi.clone(), set.d) != (4, rat(1, 40), rat(5, 1), 40) {
        return Err(format!("A={} alpha={} xi={} D={}", set.a, set.alpha, set.xi, set.d));
    }
    Ok(format!("10 values, A=4, alpha=1/40, Xi=5, D=40 in {took:?}"))
}

fn c2_window() -> Outcome {
    let a = common::load("e_window.ta");
    let d = parametric_emptiness(&a).map_err(|e| e.to_string())?;
    let mu = d.verdict.witness_mu().cloned().ok_or("verdict Empty")?;
    let cands = candidate_parameters(&a).unwrap().values();
    if mu <= rat(1, 1) || !cands.contains(&mu) {
        return Err(format!("witness {mu}"));
    }
    if !nonempty_at(&a, &mu) {
        return Err(format!("fixed check at {mu} is Empty"));
    }
    for m in [rat(1, 2), rat(1, 1)] {
        if nonempty_at(&a, &m) {
            return Err(format!("Nonempty at {m}"));
        }
    }
    Ok(format!("witness mu = {mu}; Empty at 1/2 and 1"))
}

fn c3_empty_models() -> Outcome {
    let mut r = rng(3);
    for name in ["e_empty.ta", "e_param_contra.ta"] {
        let a = common::load(name);
        if parametric_emptiness(&a).map_err(|e| e.to_string())?.verdict.is_nonempty() {
            return Err(format!("{name} Nonempty"));
        }
        for _ in 0..100 {
            let q = r.gen_range(1..=12);
            let mu = rat(r.gen_range(1..10 * q), q);
            if nonempty_at(&a, &mu) {
                return Err(format!("{name} Nonempty at {mu}"));
            }
        }
    }
    Ok("both Empty, and Empty at 100 sampled values each".into())
}

fn c4_lk() -> Outcome {
    let a = gen_lk(2);
    if emptiness_fixed(&a, None).map_err(|e| e.to_string())?.verdict.is_empty() {
        return Err("gen_lk(2) Empty".into());
    }
    let ra = build_region_automaton(&a, 2).map_err(|e| e.to_string())?;
    let lasso = buchi_nonempty(&ra).ok_or("no lasso in the region automaton")?;
    let laps = 3;
    let w = extract_witness_word(&ra, &lasso, laps).map_err(|e| e.to_string())?;
    let steps: Vec<_> = lasso.stem.iter().chain((0..laps).flat_map(|_| lasso.cycle.iter())).collect();
    let run = execute(&a, &w, &steps.iter().map(|s| s.transition).collect::<Vec<_>>(), &ParamValuation::empty())
        .map_err(|e| format!("replay: {e}"))?;
    let visited = run.states();
    let expected: Vec<_> = std::iter::once(lasso.start_state).chain(steps.iter().map(|s| s.state)).collect();
    if visited != expected {
        return Err("replayed states differ from the lasso".into());
    }
    for (s, rs) in steps.iter().zip(&run.steps) {
        if region_of(&rs.config.valuation, ra.max) != s.region {
            return Err("replayed valuation leaves the lasso region".into());
        }
    }
    let p = parametric_emptiness(&gen_lpk(2)).map_err(|e| e.to_string())?;
    let mu = p.verdict.witness_mu().ok_or("gen_lpk(2) Empty")?;
    Ok(format!("{} events replayed along the lasso; gen_lpk(2) Nonempty at {mu}", w.len()))
}

fn accepted_prefixes(a: &Automaton, w: &TimedWord, i: &ParamValuation) -> Vec<bool> {
    reachable_per_prefix(a, w, i).iter().map(|s| s.iter().any(|c| a.is_accepting(c.state))).collect()
}

fn c5_translation() -> Outcome {
    let bad: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|t| {
            let mut r = rng(5_000 + t);
            let spec = RandomSpec { clocks: r.gen_range(1..=2), param: r.gen_bool(0.3), ..RandomSpec::default() };
            let a = random_automaton(&mut r, &spec);
            let b = ta_to_nrtta(&a);
            if !is_nrtta(&b) || b.clocks.len() != a.clocks.len() + 1 {
                return Some(format!("trial {t}: shape"));
            }
            let i = if a.has_params() {
                ParamValuation::single(rat(r.gen_range(0..12), r.gen_range(1..=3)))
            } else {
                ParamValuation::empty()
            };
            (0..10).find_map(|_| {
                let len = r.gen_range(1..=8);
                let w = random_word(&mut r, &a, len, 3);
                (accepted_prefixes(&a, &w, &i) != accepted_prefixes(&b, &w, &i)).then(|| format!("trial {t}: {w:?}"))
            })
        })
        .collect();
    match bad.first() {
        Some(b) => Err(format!("{} mismatches, first {b}", bad.len())),
        None => Ok("1000 automata x 10 words, zero mismatches".into()),
    }
}

/// Random 2-clock, 1-parameter nrtTA with constants up to 2.
fn population(seed: u64, n: usize) -> Vec<Automaton> {
    let mut r = rng(seed);
    let spec = RandomSpec { clocks: 2, param: true, nrt: true, max_const: 2, ..RandomSpec::default() };
    (0..n).map(|_| random_automaton(&mut r, &spec)).collect()
}

fn c6_large_values() -> Outcome {
    let pop = population(6, 200);
    let results: Vec<(usize, Option<String>)> = pop
        .par_iter()
        .enumerate()
        .map(|(n, a)| {
            let c = max_constant(a) as i64;
            let xi = candidate_parameters(a).unwrap().xi;
            let vals = [rat(2 * c + 1, 1), rat(6 * c + 7, 3), rat(10 * c, 1)];
            let hits = vals.iter().filter(|m| nonempty_at(a, m)).count();
            let bad = (hits > 0 && !nonempty_at(a, &xi)).then(|| format!("automaton {n}"));
            (hits, bad)
        })
        .collect();
    let premises: usize = results.iter().map(|r| r.0).sum();
    let bad: Vec<_> = results.into_iter().filter_map(|r| r.1).collect();
    match bad.first() {
        Some(b) => Err(format!("{} violations, first {b}", bad.len())),
        None => Ok(format!("{premises} Nonempty premises, zero violations")),
    }
}

fn c7_fractional_reps() -> Outcome {
    let pop = population(7, 200);
    let results: Vec<(usize, Option<String>)> = pop
        .par_iter()
        .enumerate()
        .map(|(idx, a)| {
            let mut r = rng(70_000 + idx as u64);
            let set = candidate_parameters(a).unwrap();
            let mut hits = 0;
            for n in 0..4 * set.c {
                let lo = rat(n as i64, 2);
                let mut any = false;
                for _ in 0..3 {
                    // A rational strictly inside (n/2, (n+1)/2).
                    let q = r.gen_range(3..=12);
                    let k = r.gen_range(1..q);
                    let mu = &lo + rat(k, 2 * q);
                    any |= nonempty_at(a, &mu);
                }
                if any {
                    hits += 1;
                    let rep = set.fractional_rep(n);
                    if !nonempty_at(a, &rep) {
                        return (hits, Some(format!("automaton {idx}, interval {n}")));
                    }
                }
            }
            (hits, None)
        })
        .collect();
    let premises: usize = results.iter().map(|r| r.0).sum();
    let bad: Vec<_> = results.into_iter().filter_map(|r| r.1).collect();
    match bad.first() {
        Some(b) => Err(format!("{} violations, first {b}", bad.len())),
        None => Ok(format!("{premises} Nonempty intervals, zero violations")),
    }
}

fn suite(r: fuzz::SuiteReport) -> Outcome {
    match &r.first_failure {
        Some(f) => Err(format!("{}: {} failures, {f}", r.name, r.failures)),
        None => Ok(format!("{}: {} trials", r.name, r.trials)),
    }
}

fn c8_transport() -> Outcome {
    suite(fuzz::transport_agreement(8, 1000))
}

fn c9_case_analyses() -> Outcome {
    let parts =
        [fuzz::critval_completeness(9, 10_000), fuzz::pr2_totality(9, 10_000), fuzz::fracvalue_cases(9, 10_000)];
    let mut lines = Vec::new();
    for p in parts {
        lines.push(suite(p)?);
    }
    Ok(lines.join("; "))
}

fn c10_region_soundness() -> Outcome {
    let bad: Vec<String> = (0..500u64)
        .into_par_iter()
        .filter_map(|t| {
            let mut r = rng(10_000 + t);
            let spec = RandomSpec { param: r.gen_bool(0.5), ..RandomSpec::default() };
            let a = random_automaton(&mut r, &spec);
            let mu = a.has_params().then(|| rat(r.gen_range(0..12), r.gen_range(1..=3)));
            let p = prepare_fixed(&a, mu.as_ref()).unwrap();
            let ra = build_region_automaton(&p.scaled, p.max).unwrap();
            let d = Rational::from_u64(p.d);
            let none = ParamValuation::empty();
            // Draw words until one has a run.
            let (w, per) = (0..200).find_map(|_| {
                let len = r.gen_range(1..=8);
                let w = random_word(&mut r, &a, len, 3);
                let scaled = TimedWord::new(w.events().iter().map(|(l, t)| (l.clone(), t * &d)).collect()).unwrap();
                let per = reachable_per_prefix(&p.scaled, &scaled, &none);
                per.last().is_some_and(|s| !s.is_empty()).then_some((scaled, per))
            })?;
            per.iter()
                .flatten()
                .find(|c| !ra.contains(c.state, &region_of(&c.valuation, p.max)))
                .map(|c| format!("trial {t}: {:?} after {:?}", c, w))
        })
        .collect();
    match bad.first() {
        Some(b) => Err(format!("{} failures, first {b}", bad.len())),
        None => Ok("500 automaton/word pairs, every configuration has its region node".into()),
    }
}

fn c11_scaling() -> Outcome {
    let bad: Vec<String> = (0..200u64)
        .into_par_iter()
        .filter_map(|t| {
            let mut r = rng(11_000 + t);
            let spec = RandomSpec { param: r.gen_bool(0.5), ..RandomSpec::default() };
            let a = random_automaton(&mut r, &spec);
            let mu = a.has_params().then(|| rat(r.gen_range(0..12), r.gen_range(1..=3)));
            let base = emptiness_fixed(&a, mu.as_ref()).unwrap().verdict.is_empty();
            [2u64, 3, 5].into_iter().find_map(|d| {
                let s = scale_constants(&a, d).unwrap();
                let smu = mu.as_ref().map(|m| m * Rational::from_u64(d));
                let v = emptiness_fixed(&s, smu.as_ref()).unwrap().verdict.is_empty();
                (v != base).then(|| format!("trial {t}, d = {d}"))
            })
        })
        .collect();
    match bad.first() {
        Some(b) => Err(format!("{} mismatches, first {b}", bad.len())),
        None => Ok("200 instances x 3 factors, verdicts unchanged".into()),
    }
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        (1, "candidate-set formulas", Duration::from_millis(1), c1_candidates),
        (2, "window model", secs(5), c2_window),
        (3, "empty models", secs(30), c3_empty_models),
        (4, "L_2 witness replay", secs(60), c4_lk),
        (5, "translation equivalence", secs(300), c5_translation),
        (6, "large-value sampling law", secs(600), c6_large_values),
        (7, "fractional-representative sampling law", secs(900), c7_fractional_reps),
        (8, "agreement transport suite", secs(60), c8_transport),
        (9, "case-analysis suites", secs(120), c9_case_analyses),
        (10, "region soundness", secs(300), c10_region_soundness),
        (11, "scaling invariance", secs(300), c11_scaling),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        let took = t.elapsed();
        let out = match out {
            Ok(msg) if took > limit => Err(format!("{msg}; exceeded {limit:?}")),
            other => other,
        };
        match out {
            Ok(msg) => println!("PASS {id:>2} {name}: {msg} [{took:.2?} / {limit:?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {msg} [{took:.2?} / {limit:?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
