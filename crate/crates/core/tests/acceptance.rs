use diskfn::acceptance::{run_all, AcceptanceConfig};

#[test]
fn acceptance_criteria() {
    let report = run_all(&AcceptanceConfig::default());
    for c in &report {
        println!("{}", c.summary());
    }
    let failed: Vec<_> = report
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
