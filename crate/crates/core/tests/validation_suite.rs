use quench_core::validate::run_validation;

#[test]
fn every_oracle_check_passes() {
    let results = run_validation(|r| println!("{r}"));
    let failed: Vec<_> = results.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    assert!(failed.is_empty(), "failing checks: {failed:?}");
}
