// The two-majorant construction: every member of `M(x, tau, eps)` sits below `z` or `w`.
//
// ```bash
// cargo run --example majorant_pair
// ```

use rearrcalc::majorize::{majorant_pair, sample_family_member, CaseTag};
use rearrcalc::{int, rat, Domain, Error, StepFunction};

pub fn run_example() -> Result<(), Error> {
    let x = StepFunction::new(Domain::HalfLine, vec![int(1), int(4)], vec![int(2), int(1)], int(0))?;
    for (tau, eps) in [(int(1), rat(1, 2)), (int(2), rat(1, 5))] {
        let trace = majorant_pair(&x, &tau, &eps)?;
        trace.check_invariants(&x).map_err(Error::Internal)?;
        let tag = match trace.case_tag {
            CaseTag::AffineGap => "gap",
            CaseTag::AffineChord => "chord",
        };
        println!(
            "tau = {tau}, eps = {eps}: {tag} case, tau1 = {}, eps1 = {}",
            trace.tau1, trace.eps1
        );
        println!("  z = {}", trace.z);
        println!("  w = {}", trace.w);
        let mut covered = 0;
        for seed in 0..20 {
            let y = sample_family_member(&x, &tau, &eps, seed)?;
            covered += usize::from(trace.covers(&y)?);
        }
        println!("  {covered}/20 sampled members covered");
        assert_eq!(covered, 20);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("majorant pair example");
}
