// Polarity, fractional interval classes and the bracket index of a
// fractional value.

use pnta::analysis::{interval_class, low_k, polarity_ctx};
use pnta::rat;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for mu in [rat(23, 10), rat(27, 10)] {
        let ctx = polarity_ctx(&mu)?;
        println!("mu = {mu}: {:?}, ell = {}, chi = {}, w = {}", ctx.polarity, ctx.ell, ctx.chi, ctx.w_z);
        for f in [rat(0, 1), rat(3, 20), rat(3, 10), rat(1, 2), rat(7, 10), rat(19, 20)] {
            let class = interval_class(&f, &ctx);
            let k = low_k(&f, &ctx).map(|k| k.to_string()).unwrap_or_else(|_| "-".into());
            println!("  frac {f:>5}: class {:<3} k {k}", class.label());
        }
    }
    assert!(polarity_ctx(&rat(5, 2)).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
