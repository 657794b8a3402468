mod common;

use pnta::parametric::{
    candidate_parameters, emptiness_fixed, emptiness_fixed_with, parametric_emptiness, CheckOptions, Engine,
};
use pnta::rat;
use pnta::semantics::reachable_per_prefix;
use pnta::ParamValuation;

#[test]
fn window_is_nonempty_above_one() {
    let a = common::load("e_window.ta");
    let d = parametric_emptiness(&a).unwrap();
    let mu = d.verdict.witness_mu().cloned().expect("nonempty");
    assert!(mu > rat(1, 1));
    assert!(emptiness_fixed(&a, Some(&mu)).unwrap().verdict.is_nonempty());
    for m in [rat(1, 2), rat(1, 1)] {
        assert!(emptiness_fixed(&a, Some(&m)).unwrap().verdict.is_empty());
    }
    assert!(emptiness_fixed(&a, Some(&rat(3, 2))).unwrap().verdict.is_nonempty());
}

#[test]
fn window_witness_replays() {
    let a = common::load("e_window.ta");
    let d = emptiness_fixed(&a, Some(&rat(3, 2))).unwrap();
    let w = d.verdict.witness().unwrap();
    let word = w.word(2).unwrap();
    assert_eq!(word.events()[0].1, rat(1, 1));
    assert_eq!(word.events()[1].1, rat(3, 2));
    let per = reachable_per_prefix(&a, &word, &ParamValuation::single(rat(3, 2)));
    assert!(per.iter().all(|s| !s.is_empty()));
}

#[test]
fn empty_models() {
    for name in ["e_empty.ta", "e_param_contra.ta"] {
        let a = common::load(name);
        let d = parametric_emptiness(&a).unwrap();
        assert!(d.verdict.is_empty(), "{name}");
        assert_eq!(d.candidates_checked, candidate_parameters(&a).unwrap().len());
    }
}

#[test]
fn engines_agree_on_models() {
    let explicit = CheckOptions { engine: Engine::Explicit, ..CheckOptions::default() };
    for name in ["e_window.ta", "e_empty.ta", "e_param_contra.ta"] {
        let a = common::load(name);
        for mu in [rat(0, 1), rat(1, 2), rat(1, 1), rat(3, 2), rat(7, 3), rat(5, 1)] {
            let x = emptiness_fixed(&a, Some(&mu)).unwrap().verdict.is_empty();
            let y = emptiness_fixed_with(&a, Some(&mu), &explicit).unwrap().verdict.is_empty();
            assert_eq!(x, y, "{name} at {mu}");
        }
    }
}
