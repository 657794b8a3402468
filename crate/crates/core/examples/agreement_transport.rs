// Move a sequence of valuations from one parameter value to another
// while keeping every guard atom's truth value.

use pnta::analysis::{agreement_transport, in_agreement, OneResetSeq};
use pnta::{rat, ClockId, ClockValuation};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (mu, muh) = (rat(13, 10), rat(7, 5));
    let v0 = ClockValuation(vec![rat(0, 1), rat(1, 2)]);
    let xi = OneResetSeq::from_delays(v0.clone(), ClockId(0), &[rat(9, 10), rat(1, 2), rat(3, 10)])?;
    let out = agreement_transport(&xi, &mu, &muh, &v0, 2)?;
    for (v, vh) in xi.valuations.iter().zip(&out.valuations) {
        println!("{v:<14} -> {vh}");
        assert!(in_agreement(v, vh, &mu, &muh, 2));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
