// Build the explicit region automaton and render it as DOT.

use pnta::format::parse_automaton;
use pnta::regions::{buchi_nonempty, build_region_automaton};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_automaton(
        "automaton ex\nclocks x y\ninit q0\naccept q0\ntrans q0 q1 a ( x = 1 ) { y }\ntrans q1 q0 b ( y < 1 ) { x }\n",
    )?;
    let ra = build_region_automaton(&a, 2)?;
    println!("{} nodes, {} edges", ra.node_count(), ra.edge_count());
    for n in 0..ra.node_count().min(6) {
        println!("  {}", ra.node_label(n));
    }
    let dot = ra.to_dot();
    assert!(dot.contains("doublecircle"));
    let lasso = buchi_nonempty(&ra).ok_or("expected an accepting lasso")?;
    let (stem, cycle) = lasso.describe(&a);
    println!("stem {stem:?}\ncycle {cycle:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
