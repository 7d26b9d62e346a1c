use lidstone::acceptance::run_all;

#[test]
fn acceptance_suite() {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{o} ({:.2?})", o.elapsed);
    }
    let failed: Vec<_> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
