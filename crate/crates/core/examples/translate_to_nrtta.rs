// Turn a timed automaton whose transitions test and reset the same clock
// into an equivalent one that never does, using one extra clock.

use pnta::format::{parse_automaton, print_automaton};
use pnta::model::is_nrtta;
use pnta::semantics::{reachable_configs, TimedWord};
use pnta::translate::ta_to_nrtta;
use pnta::{rat, ParamValuation};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_automaton("automaton ex\nclocks x\ninit q\naccept q\ntrans q q a ( x = 1 ) { x }\n")?;
    assert!(!is_nrtta(&a));
    let b = ta_to_nrtta(&a);
    assert!(is_nrtta(&b));
    assert_eq!(b.clocks.len(), a.clocks.len() + 1);
    print!("{}", print_automaton(&b));

    let none = ParamValuation::empty();
    for stamps in [vec![1, 2, 3], vec![1, 2, 4]] {
        let w = TimedWord::uniform("a", &stamps.iter().map(|&t| rat(t, 1)).collect::<Vec<_>>())?;
        let acc = |m| reachable_configs(m, &w, &none).iter().any(|c| m.is_accepting(c.state));
        println!("{stamps:?}: original {}, translated {}", acc(&a), acc(&b));
        assert_eq!(acc(&a), acc(&b));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
