// Seeded randomized suites with shrinking, as run by `rearrcalc prop-test`.
//
// ```bash
// cargo run --example property_suite
// ```

use rearrcalc::suites::{run_suite, Suite};
use rearrcalc::Error;

pub fn run_example() -> Result<(), Error> {
    for suite in Suite::ALL {
        let report = run_suite(suite, 100, 7);
        println!(
            "{:<10} passed {:>3}/{} discarded {} tags {:?}",
            suite.name(),
            report.passed,
            report.cases,
            report.discarded,
            report.tags
        );
        if let Some(cx) = &report.counterexample {
            return Err(Error::Internal(format!(
                "{suite}: case {}: {}",
                cx.case_index, cx.message
            )));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("suite example");
}
