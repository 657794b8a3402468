// Parse an automaton from text, validate it and print it back.

use pnta::format::{parse_automaton, print_automaton};
use pnta::model::{is_nrtta, validate};

const MODEL: &str = "
automaton window
clocks x y
params mu
init q0
accept q2
trans q0 q1 a ( x = 1 ) { y }
trans q1 q2 b ( y > mu ) { }
trans q2 q2 a ( true ) { x }
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_automaton(MODEL)?;
    validate(&a).map_err(|es| format!("{es:?}"))?;
    println!("{} states, {} clocks, nrtTA: {}", a.states.len(), a.clocks.len(), is_nrtta(&a));
    let text = print_automaton(&a);
    print!("{text}");
    assert_eq!(parse_automaton(&text)?, a);

    // A guard mixing the parameter with a constant is rejected.
    let bad = parse_automaton("automaton ex\nclocks x\nparams mu\ninit q\ntrans q q a ( x < mu & x = 2 ) { }\n")?;
    assert!(validate(&bad).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
