use num_rational::BigRational;
use qbound::bounds::{build_lp, BuildOptions};
use qbound::exact::int;
use qbound::solver::{self, BlockEntry, FeasibilityProgram, PsdConstraint, Sense, ToleranceSet, Verdict};

fn one_var_block(rhs: i128) -> FeasibilityProgram {
    let mut p = FeasibilityProgram::new("trivial");
    let x = p.add_free_var("x");
    p.add_constraint("x = rhs", vec![(x, int(1))], Sense::Eq, int(rhs));
    p.add_block(PsdConstraint {
        label: "[x]".into(),
        dim: 1,
        entries: vec![BlockEntry { row: 0, col: 0, terms: vec![(x, int(1))], constant: int(0) }],
        congruence: vec![1.0],
    });
    p
}

#[test]
fn nonnegative_variable_fixed_to_one() {
    let mut p = FeasibilityProgram::new("x = 1");
    let x = p.add_var("x", None);
    p.add_constraint("x = 1", vec![(x, int(1))], Sense::Eq, int(1));
    let exact = solver::solve_lp_exact(&p).unwrap();
    assert_eq!(exact.verdict, Verdict::Feasible);
    assert_eq!(exact.exact_witness.unwrap(), vec![int(1)]);
    let ipm = solver::solve_feasibility(&p, ToleranceSet::default()).unwrap();
    assert_eq!(ipm.verdict, Verdict::Feasible);
    assert!((ipm.witness.unwrap()[0] - 1.0).abs() < 1e-8);
}

#[test]
fn one_by_one_block_pinned_negative_is_infeasible() {
    let out = solver::solve_feasibility(&one_var_block(-1), ToleranceSet::default()).unwrap();
    assert_eq!(out.verdict, Verdict::Infeasible, "{out:?}");
    assert!(out.residuals.certificate_margin >= 1e-7);
    let out = solver::solve_feasibility(&one_var_block(2), ToleranceSet::default()).unwrap();
    assert_eq!(out.verdict, Verdict::Feasible);
}

#[test]
fn two_by_two_block_needs_ipm() {
    // [[1, x], [x, 1]] ⪰ 0 with x ≥ 2 is infeasible; with x ≥ 1/2 it is not.
    for (lo, expect) in [(BigRational::new(1.into(), 2.into()), Verdict::Feasible), (int(2), Verdict::Infeasible)] {
        let mut p = FeasibilityProgram::new("2x2");
        let x = p.add_free_var("x");
        p.add_constraint("x >= lo", vec![(x, int(1))], Sense::Ge, lo);
        p.add_constraint("x <= 10", vec![(x, int(-1))], Sense::Ge, int(-10));
        p.add_block(PsdConstraint {
            label: "b".into(),
            dim: 2,
            entries: vec![
                BlockEntry { row: 0, col: 0, terms: vec![], constant: int(1) },
                BlockEntry { row: 0, col: 1, terms: vec![(x, int(1))], constant: int(0) },
                BlockEntry { row: 1, col: 1, terms: vec![], constant: int(1) },
            ],
            congruence: vec![1.0, 1.0],
        });
        let out = solver::solve_feasibility(&p, ToleranceSet::default()).unwrap();
        assert_eq!(out.verdict, expect, "{out:?}");
        let trace = &out.tau_trace;
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn lp_cell_five_one_three() {
    let opts = BuildOptions::default();
    for (m, expect) in [(4u64, true), (5, false)] {
        let feasible = (4..=5).any(|s| {
            let b = build_lp(5, 1, 3, m, s, &opts).unwrap();
            solver::solve_lp_exact(&b.program).unwrap().verdict == Verdict::Feasible
        });
        assert_eq!(feasible, expect, "M = {m}");
    }
}
