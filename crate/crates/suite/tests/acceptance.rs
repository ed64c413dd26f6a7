//! Acceptance criteria: one PASS/FAIL line per criterion.
//!
//! All checks are exact (tolerance zero); runtime budgets live in
//! `shapekit::sweep::SUITES`.

use shapekit::sweep;

#[test]
fn acceptance() {
    let outcomes = sweep::run_all();
    println!();
    for o in &outcomes {
        println!("{}", o.line());
        for f in o.failures.iter().take(8) {
            println!("       fail: {f}");
        }
        if o.failures.len() > 8 {
            println!("       ... {} more failures", o.failures.len() - 8);
        }
        for w in o.warnings.iter().take(8) {
            println!("       warn: {w}");
        }
        if o.warnings.len() > 8 {
            println!("       ... {} more warnings", o.warnings.len() - 8);
        }
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
