// Extract a concrete timed word from a lasso and replay it.

use pnta::generators::gen_lk;
use pnta::regions::{buchi_lasso_nodes, buchi_nonempty, build_region_automaton, extract_witness_word};
use pnta::semantics::reachable_configs;
use pnta::ParamValuation;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = gen_lk(2);
    let ra = build_region_automaton(&a, 2)?;
    let lasso = buchi_nonempty(&ra).ok_or("L_2 is nonempty")?;
    let (stem, cycle) = buchi_lasso_nodes(&ra).unwrap();
    println!("region automaton: {} nodes; lasso {} + {} steps", ra.node_count(), stem.len(), cycle.len());

    let w = extract_witness_word(&ra, &lasso, 3)?;
    let events: Vec<String> = w.events().iter().map(|(l, t)| format!("{l}@{t}")).collect();
    println!("word: {}", events.join(" "));
    let end = reachable_configs(&a, &w, &ParamValuation::empty());
    assert!(end.iter().any(|c| a.is_accepting(c.state)));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
