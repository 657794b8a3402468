// The generated families: words with at least k pairs of events at
// distance 1, and the variant with distance mu.

use pnta::generators::{gen_lk, gen_lpk};
use pnta::model::is_nrtta;
use pnta::parametric::parametric_emptiness;
use pnta::semantics::{reachable_configs, TimedWord};
use pnta::{rat, ParamValuation, Rational};

fn accepts(a: &pnta::Automaton, stamps: &[Rational], i: &ParamValuation) -> bool {
    let w = TimedWord::uniform("a", stamps).unwrap();
    reachable_configs(a, &w, i).iter().any(|c| a.is_accepting(c.state))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let l2 = gen_lk(2);
    assert!(is_nrtta(&l2) && l2.clocks.len() == 2);
    let none = ParamValuation::empty();
    let pairs = [rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1)];
    let sparse = [rat(1, 1), rat(3, 1), rat(9, 1), rat(27, 1)];
    println!("L2 on 1/2 1 3/2 2: {}", accepts(&l2, &pairs, &none));
    println!("L2 on 1 3 9 27: {}", accepts(&l2, &sparse, &none));
    assert!(accepts(&l2, &pairs, &none) && !accepts(&l2, &sparse, &none));

    let lp1 = gen_lpk(1);
    let half = ParamValuation::single(rat(1, 2));
    assert!(accepts(&lp1, &[rat(1, 4), rat(3, 4)], &half));

    let d = parametric_emptiness(&gen_lpk(2))?;
    println!("Lp2 nonempty at mu = {}", d.verdict.witness_mu().unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
