// Decreasing rearrangement, level integral and maximal function of a signed step function.
//
// ```bash
// cargo run --example rearrangement
// ```

use rearrcalc::rearrange::maximal_eval;
use rearrcalc::{distribution, int, rat, rearrangement, Domain, Error, StepFunction};

pub fn run_example() -> Result<(), Error> {
    // -1 on [0,1), 3 on [1,2), 1/2 on [2,5), then 1 forever
    let x = StepFunction::new(
        Domain::HalfLine,
        vec![int(1), int(2), int(5)],
        vec![int(-1), int(3), rat(1, 2)],
        int(1),
    )?;
    let r = rearrangement(&x);
    println!("x      = {x}");
    println!("x*     = {}", r.star);
    println!("x*(inf) = {}", r.star_at_infinity);
    for level in [rat(1, 2), int(1), int(2)] {
        println!("d_x({level}) = {}", distribution(&x, &level)?);
    }
    for t in [rat(1, 2), int(2), int(10)] {
        println!(
            "Phi_x({t}) = {}, x**({t}) = {}",
            r.level_integral.eval(&t),
            maximal_eval(&x, &t)?
        );
    }
    assert_eq!(r.star.evaluate(&rat(1, 2))?, int(3));
    assert_eq!(r.star_at_infinity, int(1));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("rearrangement example");
}
