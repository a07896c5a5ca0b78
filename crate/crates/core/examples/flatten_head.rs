// Averaging the head of `x*` over `[0, n)` keeps `x**` unchanged past `n`.
//
// ```bash
// cargo run --example flatten_head
// ```

use rearrcalc::rearrange::maximal_eval;
use rearrcalc::spaces::flatten_head_bound;
use rearrcalc::{flatten_head, int, norm, Domain, Error, FundamentalFunction, SpaceSpec, StepFunction};

pub fn run_example() -> Result<(), Error> {
    let x = StepFunction::new(
        Domain::HalfLine,
        vec![int(1), int(3), int(6)],
        vec![int(3), int(2), int(1)],
        int(0),
    )?;
    let space = SpaceSpec::marcinkiewicz(FundamentalFunction::hyperbolic(int(1))?);
    for n in 1..=6u64 {
        let y = flatten_head(&x, n)?;
        let nr = int(n as i64);
        let same_after = [&nr, &int(4), &int(8)]
            .into_iter()
            .filter(|t| **t >= nr)
            .all(|t| maximal_eval(&y, t).ok() == maximal_eval(&x, t).ok());
        println!(
            "n = {n}: y = {y}, ||y|| = {}, bound = {}, x** kept past n: {same_after}",
            norm(&space, &y),
            flatten_head_bound(&space, &x, &nr)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("flatten example");
}
