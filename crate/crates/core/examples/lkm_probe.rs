// Does `x_n ≺ x` with `||x_n|| -> ||x||` force `x_n* -> x*` in measure?
//
// ```bash
// cargo run --example lkm_probe
// ```

use rearrcalc::experiments::probe_lkm;
use rearrcalc::{builtin_family, int, rat, Domain, Error, FamilySpec, SpaceSpec, StepFunction};

pub fn run_example() -> Result<(), Error> {
    let n_list = [1, 2, 4, 8, 16, 32];
    let deltas = [rat(1, 2), rat(1, 10)];
    let x = StepFunction::new(Domain::HalfLine, vec![int(1), int(3)], vec![int(2), int(1)], int(0))?;

    // (1 - 1/n) x closes in on x in every sense
    let scaled = builtin_family(FamilySpec::Scaled { x: x.clone() })?;
    let report = probe_lkm(&x, &scaled, &SpaceSpec::l1_plus_linf(), &n_list, &deltas)?;
    print!("{}", report.to_table());
    println!();

    // equal L1 norms, yet the mass drifts away from chi_[0,1)
    let base = StepFunction::head(Domain::HalfLine, &int(1), int(1))?;
    let boxes = builtin_family(FamilySpec::Remark45)?;
    let report = probe_lkm(&base, &boxes, &SpaceSpec::l1(), &n_list, &deltas)?;
    print!("{}", report.to_table());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("lkm example");
}
