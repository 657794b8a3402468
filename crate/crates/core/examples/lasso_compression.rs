// Shorten a region path that revisits the same reset point.

use pnta::analysis::compress_region_lasso;
use pnta::format::parse_automaton;
use pnta::regions::build_region_automaton;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_automaton("automaton ex\nclocks x\ninit q\naccept q\ntrans q q a ( x < 1 ) { x }\n")?;
    let ra = build_region_automaton(&a, 2)?;
    // Walk the reset loop a few times starting from the initial node.
    let mut path = vec![ra.initial];
    for _ in 0..6 {
        let here = *path.last().unwrap();
        let next = ra.edges[here].first().ok_or("dead end")?.target;
        path.push(next);
    }
    let short = compress_region_lasso(&ra, &path, 2)?;
    let labels: Vec<String> = short.iter().map(|&n| ra.node_label(n)).collect();
    println!("{} nodes -> {}: {}", path.len(), short.len(), labels.join(" ; "));
    assert!(short.len() < path.len());
    assert_eq!(short.first(), path.first());
    assert_eq!(short.last(), path.last());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
