// Exact norms in L1, Linf, L1 + Linf and the two Marcinkiewicz spaces.
//
// ```bash
// cargo run --example symmetric_norms
// ```

use rearrcalc::spaces::{embeds_in_l1, fundamental_eval, mphi_a_member};
use rearrcalc::{int, norm, rat, Domain, Error, FundamentalFunction, PiecewiseLinearConcave, SpaceSpec, StepFunction};

pub fn run_example() -> Result<(), Error> {
    let x = StepFunction::new(Domain::HalfLine, vec![int(1), int(3)], vec![int(2), int(1)], int(0))?;
    // phi(t) = 2t on [0,1), 2 + (t - 1) on [1,2), then 3
    let phi = FundamentalFunction::piecewise(PiecewiseLinearConcave::from_slopes(
        int(0),
        &[(int(1), int(2)), (int(1), int(1))],
        int(0),
    )?)?;
    let hyper = FundamentalFunction::hyperbolic(int(1))?;
    let spaces = [
        SpaceSpec::l1(),
        SpaceSpec::linf(),
        SpaceSpec::l1_plus_linf(),
        SpaceSpec::marcinkiewicz(phi.clone()),
        SpaceSpec::marcinkiewicz_star(phi),
        SpaceSpec::marcinkiewicz(hyper.clone()),
    ];
    for space in &spaces {
        println!(
            "{:<18} ||x|| = {:<5} phi_E(1/2) = {:<4} embeds in L1: {}",
            space.label(),
            norm(space, &x).to_string(),
            fundamental_eval(space, &rat(1, 2))?.to_string(),
            embeds_in_l1(space)?
        );
    }
    let one = StepFunction::constant(Domain::HalfLine, int(1));
    println!(
        "||1|| in M*(t/(1+t)) = {}",
        norm(&SpaceSpec::marcinkiewicz_star(hyper.clone()), &one)
    );
    println!("1 in the separable part: {}", mphi_a_member(&hyper, &one)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("norms example");
}
