// Run a finite timed word through a parametric automaton.

use pnta::format::parse_automaton;
use pnta::semantics::{reachable_per_prefix, TimedWord};
use pnta::{rat, ParamValuation};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_automaton(
        "automaton ex\nclocks x\nparams mu\ninit q0\naccept q2\n\
         trans q0 q1 a ( x = 1 ) { }\ntrans q1 q2 a ( x = mu ) { }\ntrans q2 q2 a ( true ) { }\n",
    )?;
    let w = TimedWord::new(vec![("a".into(), rat(1, 1)), ("a".into(), rat(3, 2)), ("a".into(), rat(2, 1))])?;
    for mu in [rat(3, 2), rat(1, 2)] {
        let per = reachable_per_prefix(&a, &w, &ParamValuation::single(mu.clone()));
        print!("mu = {mu}:");
        for (n, configs) in per.iter().enumerate() {
            let names: Vec<_> = configs.iter().map(|c| format!("{}{}", a.state_name(c.state), c.valuation)).collect();
            print!(" [{n}] {}", names.join(" "));
        }
        println!();
        let last = per.last().unwrap();
        assert_eq!(last.iter().any(|c| a.is_accepting(c.state)), mu == rat(3, 2));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
