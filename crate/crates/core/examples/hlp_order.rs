// Deciding `x ≺ y` exactly and reading off a witness when it fails.
//
// ```bash
// cargo run --example hlp_order
// ```

use rearrcalc::majorize::hlp_compare;
use rearrcalc::{int, level_integral, Domain, Error, StepFunction};

pub fn run_example() -> Result<(), Error> {
    let x = StepFunction::new(Domain::HalfLine, vec![int(1), int(3)], vec![int(2), int(1)], int(0))?;
    let flat = StepFunction::head(Domain::HalfLine, &int(4), int(1))?;

    let v = hlp_compare(&flat, &x)?;
    println!("chi_[0,4) ≺ 2chi_[0,1) + chi_[1,3): {}", v.holds);

    let back = hlp_compare(&x, &flat)?;
    let t = back.witness.clone().expect("a failing comparison carries a witness");
    println!(
        "reverse fails at t = {t}: Phi_x = {} > Phi_flat = {}",
        level_integral(&x).eval(&t),
        level_integral(&flat).eval(&t)
    );

    // a nonzero tail dominates any finite mass at infinity
    let one = StepFunction::constant(Domain::HalfLine, int(1));
    println!(
        "x ≺ 1: {}, 1 ≺ x: {}",
        hlp_compare(&x, &one)?.holds,
        hlp_compare(&one, &x)?.holds
    );
    assert!(v.holds && !back.holds);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("hlp example");
}
