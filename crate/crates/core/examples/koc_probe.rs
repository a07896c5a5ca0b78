// Finite evidence for K-order continuity along a sequence `x_n ≺ x`.
//
// Spreading boxes keep their L1 norm, while shrinking heads lose their
// weak-type norm like `1/(n+1)`.
//
// ```bash
// cargo run --example koc_probe
// ```

use rearrcalc::experiments::probe_koc;
use rearrcalc::{builtin_family, int, rat, Domain, Error, FamilySpec, FundamentalFunction, SpaceSpec, StepFunction};

pub fn run_example() -> Result<(), Error> {
    let n_list: Vec<u64> = (1..=8).collect();
    let deltas = [rat(1, 2), rat(1, 10)];

    let x = StepFunction::head(Domain::HalfLine, &int(1), int(1))?;
    let boxes = builtin_family(FamilySpec::Remark45)?;
    let report = probe_koc(&x, &boxes, &SpaceSpec::l1(), &n_list, &deltas, &rat(1, 10))?;
    print!("{}", report.to_table());
    println!();

    let one = StepFunction::constant(Domain::HalfLine, int(1));
    let heads = builtin_family(FamilySpec::Example46Heads)?;
    let space = SpaceSpec::marcinkiewicz_star(FundamentalFunction::hyperbolic(int(1))?);
    let report = probe_koc(&one, &heads, &space, &n_list, &deltas, &rat(1, 5))?;
    print!("{}", report.to_table());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("koc example");
}
