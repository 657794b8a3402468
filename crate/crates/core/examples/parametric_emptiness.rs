// Decide whether some parameter value makes the language nonempty.

use pnta::format::parse_automaton;
use pnta::parametric::{candidate_parameters, emptiness_fixed, parametric_emptiness};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_automaton(
        "automaton ex\nclocks x y\nparams mu\ninit q0\naccept q2\n\
         trans q0 q1 a ( x = 1 ) { y }\ntrans q1 q2 b ( y = mu ) { x }\ntrans q2 q1 a ( x = 1 ) { y }\n",
    )?;
    let set = candidate_parameters(&a)?;
    let shown: Vec<String> = set.values().iter().map(|v| v.to_string()).collect();
    println!("{} candidates: {}", set.len(), shown.join(" "));

    let d = parametric_emptiness(&a)?;
    let mu = d.verdict.witness_mu().ok_or("expected a witness")?.clone();
    println!("nonempty at mu = {mu} after {} candidates", d.candidates_checked);
    assert!(emptiness_fixed(&a, Some(&mu))?.verdict.is_nonempty());

    let w = d.verdict.witness().unwrap().word(2)?;
    let events: Vec<String> = w.events().iter().map(|(l, t)| format!("{l}@{t}")).collect();
    println!("witness prefix: {}", events.join(" "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
