// Run the seeded property suites over the analysis operations.

use pnta::analysis::fuzz::run_all;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for r in run_all(7, 500) {
        println!("{:<4} {} ({} trials)", if r.passed() { "ok" } else { "FAIL" }, r.name, r.trials);
        if let Some(f) = &r.first_failure {
            return Err(format!("{}: {f}", r.name).into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
