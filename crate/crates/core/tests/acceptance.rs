//! One line per acceptance criterion; the run fails if any criterion fails.

use shtuka_core::shtuka::{run_selftest, SelftestOptions};

#[test]
fn acceptance() {
    let report = run_selftest(SelftestOptions::default());
    for c in &report.criteria {
        println!("{}", c.line());
        for f in c.failures() {
            println!("    {}: {}", f.name, f.detail);
        }
    }
    println!("total {} ms", report.elapsed_ms);
    let failed: Vec<u8> = report.criteria.iter().filter(|c| !c.passed()).map(|c| c.id).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
