//! Acceptance matrix: one line per criterion.

use singcalc::suite::run_suite;

#[test]
fn acceptance() {
    let report = run_suite(None);
    for c in &report.criteria {
        println!("{} criterion {:>2}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name);
        for f in &c.failures {
            println!("    {f}");
        }
        for n in &c.notes {
            println!("    note: {n}");
        }
    }
    let failed: Vec<u32> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    assert_eq!(report.criteria.len(), 11);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
