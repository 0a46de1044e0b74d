//! Running the property suites from code.

use runnerlab::suite::{run_suite, SuiteName, SuiteParams};

fn main() {
    let params = SuiteParams {
        n_max: 3,
        v_max: 12,
        seed: 7,
        samples: 30,
    };
    for name in [SuiteName::PaperChecks, SuiteName::Soundness, SuiteName::Invariants] {
        let report = run_suite(name, &params);
        println!("{name:?}: {}", if report.passed() { "pass" } else { "FAIL" });
        for p in &report.properties {
            println!("  {:<26} {:>7} cases  {}", p.name, p.cases, p.passed);
        }
    }
}
