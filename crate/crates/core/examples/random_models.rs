// Seeded random automata and words, as used by the property tests.

use pnta::format::print_automaton;
use pnta::generators::random::{random_automaton, random_word, RandomSpec};
use pnta::model::{is_nrtta, validate};
use pnta::parametric::parametric_emptiness;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = RandomSpec { param: true, nrt: true, ..RandomSpec::default() };
    let mut nonempty = 0;
    for n in 0..5 {
        let a = random_automaton(&mut rng, &spec);
        assert!(validate(&a).is_ok() && is_nrtta(&a));
        let d = parametric_emptiness(&a)?;
        nonempty += d.verdict.is_nonempty() as usize;
        if n == 0 {
            print!("{}", print_automaton(&a));
            let w = random_word(&mut rng, &a, 4, 4);
            println!("sample word: {:?}", w.events());
        }
    }
    println!("{nonempty} of 5 random automata are nonempty for some mu");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
