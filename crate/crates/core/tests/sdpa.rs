use qbound::bounds::{build_lp, build_sdp, BuildOptions};
use qbound::exact::int;
use qbound::solver::sdpa::{self, SdpaProblem};
use qbound::solver::{BlockEntry, FeasibilityProgram, PsdConstraint, Sense};
use qbound::terwilliger::block_labels;
use std::path::PathBuf;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// One free variable `z` with the 1×1 block `[z - 1] ⪰ 0`.
fn trivial() -> FeasibilityProgram {
    let mut p = FeasibilityProgram::new("trivial");
    let z = p.add_free_var("z");
    p.add_block(PsdConstraint {
        label: "[z - 1]".into(),
        dim: 1,
        entries: vec![BlockEntry { row: 0, col: 0, terms: vec![(z, int(1))], constant: int(-1) }],
        congruence: vec![1.0],
    });
    p
}

#[test]
fn trivial_program_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trivial.dat-s");
    sdpa::write_sdpa(&trivial(), &out).unwrap();
    let written = std::fs::read(&out).unwrap();
    let expected = std::fs::read(golden("trivial.dat-s")).unwrap();
    assert_eq!(String::from_utf8(written).unwrap(), String::from_utf8(expected).unwrap());
}

#[test]
fn golden_file_parses_back() {
    let p = sdpa::read_sdpa(&golden("trivial.dat-s")).unwrap();
    assert_eq!(p.m, 1);
    assert_eq!(p.block_sizes, vec![1]);
    assert_eq!(p.entries.get(&(0, 1, 1, 1)), Some(&1.0));
    assert_eq!(p.entries.get(&(1, 1, 1, 1)), Some(&1.0));
}

#[test]
fn lp_export_round_trips() {
    let built = build_lp(3, 1, 3, 2, 3, &BuildOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lp.dat-s");
    sdpa::write_sdpa(&built.program, &out).unwrap();
    let back = sdpa::read_sdpa(&out).unwrap();
    assert_eq!(back.m, built.program.variables.len());
    assert_eq!(back, SdpaProblem::from_program(&built.program));
    let rows = back.linear_rows();
    let expected = sdpa::expected_linear_rows(&built.program);
    assert_eq!(rows.len(), expected.len());
    for (r, e) in rows.iter().zip(&expected) {
        assert_eq!((&r.terms, r.sense, &r.rhs), (&e.terms, e.sense, &e.rhs), "{}", e.label);
    }
    assert!(rows.iter().any(|r| r.sense == Sense::Eq));
}

#[test]
fn sdp_export_has_eight_families_plus_lp_block() {
    let labels = block_labels(3).len();
    for s in 1..=3 {
        let built = build_sdp(3, 2, 3, 3, s, &BuildOptions::default()).unwrap();
        let text = SdpaProblem::from_program(&built.program).to_string_sdpa("cell");
        let mut lines = text.lines().filter(|l| !l.starts_with('*'));
        let m: usize = lines.next().unwrap().trim().parse().unwrap();
        let nblock: usize = lines.next().unwrap().trim().parse().unwrap();
        let sizes: Vec<i64> = lines.next().unwrap().split_whitespace().map(|v| v.parse().unwrap()).collect();
        assert_eq!(m, built.program.variables.len());
        assert_eq!(nblock, 8 * labels + 1);
        assert_eq!(sizes.len(), nblock);
        assert!(sizes[..nblock - 1].iter().all(|&b| b > 0));
        assert!(sizes[nblock - 1] < 0);
    }
}

#[test]
fn parser_tolerates_decorations() {
    let text = "\"comment\n* another\n1\n{1}\n(1)\n{0.0}\n0 1 1 1 2.5\n1,1,1,1,1\n";
    let p = SdpaProblem::parse(text).unwrap();
    assert_eq!(p.block_sizes, vec![1]);
    assert_eq!(p.entries.get(&(0, 1, 1, 1)), Some(&2.5));
}
