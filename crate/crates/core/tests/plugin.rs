mod common;

use common::{bundled_cws, checks};
use qbound::bounds::{build_sdp, realized_assignment, realized_stats, BuildOptions, UvSymmetry};

#[test]
fn five_qubit_code_satisfies_its_program() {
    let s = checks::realized_code_feasible(&bundled_cws("five_qubit.code"), 3, 1e-9).unwrap();
    assert_eq!(s, 5);
}

#[test]
fn ring_code_satisfies_its_program() {
    checks::realized_code_feasible(&bundled_cws("ring562.code"), 2, 1e-9).unwrap();
}

#[test]
fn full_uv_symmetry_rejects_five_qubit_statistics() {
    let code = bundled_cws("five_qubit.code");
    let real = realized_stats(&code).unwrap();
    let opts = BuildOptions { uv_symmetry: UvSymmetry::Full, ..BuildOptions::default() };
    let sdp = build_sdp(5, 0, 3, 2, 5, &opts).unwrap();
    assert!(realized_assignment(&sdp, &real).is_err());
}

#[test]
fn realized_stats_need_unassisted_code() {
    let code = common::random_cws(7, 3, 1, 1);
    assert!(realized_stats(&code).is_err());
}
