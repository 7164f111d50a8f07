use atomcat::harness::{examples_cmd, RunConfig};

#[test]
fn examples_table_matches_golden_file() {
    let out = examples_cmd(&RunConfig::default()).unwrap();
    let golden = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/golden/examples.txt")).unwrap();
    assert!(out.success);
    assert_eq!(out.stdout, golden);
}
