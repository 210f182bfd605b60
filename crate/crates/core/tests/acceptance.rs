use std::path::PathBuf;

use golden_core::verify::{self, VerifyOptions};

fn check(id: u8) {
    let report = verify::run(id, &VerifyOptions::default()).unwrap();
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn c01_exact_endpoints() {
    check(1);
}

#[test]
fn c02_frequency_plateau() {
    check(2);
}

#[test]
fn c03_boundary_values() {
    check(3);
}

#[test]
fn c04_dual_path_equality() {
    check(4);
}

#[test]
fn c05_oracle_matching() {
    check(5);
}

#[test]
fn c06_cascade_adjacency() {
    check(6);
}

#[test]
fn c07_reciprocal_periodicity() {
    check(7);
}

#[test]
fn c08_mirror_difference() {
    check(8);
}

#[test]
fn c09_monte_carlo_frequency() {
    check(9);
}

#[test]
fn c10_empirical_density() {
    check(10);
}

#[test]
fn c11_coverage_and_golden_atlas() {
    check(11);
    let (_, atlas) = verify::coverage(20).unwrap();
    let mut fresh = Vec::new();
    atlas.write_csv(&mut fresh).unwrap();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/atlas_len20.csv");
    if std::env::var_os("GOLDEN_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &fresh).unwrap();
    }
    let golden = std::fs::read(&path).expect("golden atlas missing; rerun with GOLDEN_BLESS=1");
    assert!(golden == fresh, "atlas at length 20 differs from {}", path.display());
}

#[test]
fn c12_atlas_size() {
    check(12);
}
