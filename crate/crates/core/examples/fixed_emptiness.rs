// Büchi emptiness at fixed parameter values.

use pnta::format::parse_automaton;
use pnta::parametric::emptiness_fixed;
use pnta::rat;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_automaton(
        "automaton ex\nclocks x\nparams mu\ninit q0\naccept q2\n\
         trans q0 q1 a ( x = 1 ) { }\ntrans q1 q2 a ( x = mu ) { }\ntrans q2 q2 a ( true ) { }\n",
    )?;
    for (mu, nonempty) in [(rat(1, 2), false), (rat(1, 1), false), (rat(7, 5), true), (rat(9, 1), true)] {
        let d = emptiness_fixed(&a, Some(&mu))?;
        println!(
            "mu = {mu}: {} ({} region nodes)",
            if d.verdict.is_empty() { "empty" } else { "nonempty" },
            d.region_nodes
        );
        assert_eq!(d.verdict.is_nonempty(), nonempty);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
