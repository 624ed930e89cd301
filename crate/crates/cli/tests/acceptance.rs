//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::checks;
use num_bigint::BigInt;
use num_rational::BigRational;
use qbound::analysis::{self, combinatorial_a, combinatorial_b, combinatorial_shadow};
use qbound::bounds::{max_code_size, stabilizer_optimality, BoundQuery, LinkMode, Method, UvSymmetry};
use qbound::pauli::Phase;
use qbound::solver::{ToleranceSet, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| ratio(x, 1)).collect()
}

fn as_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(qbound::exact::ratio_to_f64).collect()
}

fn expect_exact(what: &str, got: &[BigRational], want: &[BigRational]) -> Result<(), String> {
    if got != want {
        return Err(format!("{what}: combinatorial {got:?}, expected {want:?}"));
    }
    Ok(())
}

fn expect_close(what: &str, got: &[f64], want: &[BigRational], tol: f64) -> Result<(), String> {
    let want = as_f64(want);
    if got.len() != want.len() || got.iter().zip(&want).any(|(a, b)| !common::close(*a, *b, tol)) {
        return Err(format!("{what}: dense {got:?}, expected {want:?}"));
    }
    Ok(())
}

fn enumerators() -> Outcome {
    let five = common::bundled_cws("five_qubit.code");
    let dense = analysis::dense_from_cws(&five).map_err(|e| e.to_string())?;
    let (a, _) = analysis::sl_enumerators(&dense).map_err(|e| e.to_string())?;
    let d = analysis::shadow_enumerator(&dense).map_err(|e| e.to_string())?;
    let a_want = ints(&[1, 0, 0, 0, 15, 0]);
    let d_want = ints(&[1, 0, 0, 30, 15, 18]);
    expect_exact("5-qubit A", &combinatorial_a(&five).map_err(|e| e.to_string())?, &a_want)?;
    expect_close("5-qubit A", &a.unsplit(), &a_want, 1e-9)?;
    expect_exact("5-qubit D", &combinatorial_shadow(&five).map_err(|e| e.to_string())?, &d_want)?;
    expect_close("5-qubit D", &d.unsplit(), &d_want, 1e-9)?;

    let ring = common::bundled_cws("ring562.code");
    let dense = analysis::dense_from_cws(&ring).map_err(|e| e.to_string())?;
    let (a, b) = analysis::sl_enumerators(&dense).map_err(|e| e.to_string())?;
    let d = analysis::shadow_enumerator(&dense).map_err(|e| e.to_string())?;
    let a_want = vec![ratio(1, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(5, 3), ratio(8, 3)];
    let b_want = ints(&[1, 0, 20, 50, 75, 46]);
    let d_want = ints(&[0, 30, 60, 360, 420, 282]);
    expect_exact("((5,6,2)) A", &combinatorial_a(&ring).map_err(|e| e.to_string())?, &a_want)?;
    expect_close("((5,6,2)) A", &a.unsplit(), &a_want, 1e-9)?;
    expect_exact("((5,6,2)) B", &combinatorial_b(&ring).map_err(|e| e.to_string())?.unsplit(), &b_want)?;
    expect_close("((5,6,2)) B", &b.unsplit(), &b_want, 1e-9)?;
    expect_exact("((5,6,2)) D", &combinatorial_shadow(&ring).map_err(|e| e.to_string())?, &d_want)?;
    expect_close("((5,6,2)) D", &d.unsplit(), &d_want, 1e-9)?;
    Ok("5-qubit A, D and ((5,6,2)) A, B, D agree on both routes".into())
}

fn spectra() -> Outcome {
    let dicke = common::bundled("dicke723.code").dense().map_err(|e| e.to_string())?;
    let report = analysis::gs_report(&dicke).map_err(|e| e.to_string())?;
    let r5 = 5f64.sqrt();
    let mut want = vec![0.0, 1.0, 1.0 / 3.0, 0.2, (1.0 + r5) / 10.0, (1.0 - r5) / 10.0, 1.0 / 15.0, -2.0 / 15.0];
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let got = report.spectrum_values();
    if got.len() != want.len() || got.iter().zip(&want).any(|(a, b)| (a - b).abs() > 1e-8) {
        return Err(format!("((7,2,3)) spectrum {got:?}, expected {want:?}"));
    }

    let epr = common::bundled_cws("epr.code");
    let report = analysis::gs_report(&analysis::dense_from_cws(&epr).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let got = report.spectrum_values();
    if got.len() != 3 || got.iter().zip([-1.0, 0.0, 1.0]).any(|(a, b)| (a - b).abs() > 1e-8) {
        return Err(format!("EPR spectrum {got:?}"));
    }
    let s = epr.stabilizer();
    let same = report.gs_set_is_group()
        && report.gs_group.order() == s.order()
        && s.generators().iter().all(|g| report.gs_group.member_sign(g).ok().flatten() == Some(Phase::ONE));
    if !same {
        return Err("EPR GS group differs from the stabilizer".into());
    }
    Ok(format!("((7,2,3)) spectrum has {} values; EPR spectrum {{-1, 0, 1}} with S_g = S", want.len()))
}

fn sweep(n: usize, c: usize, d: usize, method: Method, uv: UvSymmetry, link: LinkMode) -> Result<(Option<u64>, bool), String> {
    let mut q = BoundQuery::new(n, c, d, method).map_err(|e| e.to_string())?.with_link_mode(link);
    q.options.uv_symmetry = uv;
    let r = max_code_size(&q).map_err(|e| e.to_string())?;
    Ok((r.bound, r.unverified || !r.anomalies.is_empty()))
}

fn show(b: Option<u64>) -> String {
    b.map_or_else(|| "none".into(), |v| v.to_string())
}

fn lp_cells() -> Outcome {
    let cells = [(5, 1, 3, 4), (7, 1, 3, 9), (4, 1, 4, 2), (3, 2, 3, 4), (4, 3, 4, 8), (7, 2, 3, 19)];
    let mut bad = Vec::new();
    for (n, c, d, want) in cells {
        let (got, unverified) = sweep(n, c, d, Method::Lp, UvSymmetry::Swap, LinkMode::BI0)?;
        if got != Some(want) || unverified {
            bad.push(format!("({n},{c},{d}) -> {} (expected {want}{})", show(got), if unverified { ", unverified" } else { "" }));
        }
    }
    if bad.is_empty() {
        Ok(format!("{} cells match", cells.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn sdp_cells() -> Outcome {
    let cells = [(3, 2, 3, 3), (4, 2, 4, 2), (4, 3, 4, 3), (5, 3, 5, 3)];
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, c, d, want) in cells {
        let (got, unverified) = sweep(n, c, d, Method::Sdp, UvSymmetry::Swap, LinkMode::BI0)?;
        let mut line = format!("({n},{c},{d}) -> {}{}", show(got), if unverified { " unverified" } else { "" });
        if got != Some(want) || unverified {
            let (anti, anti_unv) = sweep(n, c, d, Method::Sdp, UvSymmetry::Swap, LinkMode::AntiDiagonal)?;
            let (full, _) = sweep(n, c, d, Method::Sdp, UvSymmetry::Full, LinkMode::BI0)?;
            line += &format!(" [expected {want}; b_anti_diagonal -> {}; full u/v symmetry -> {}]", show(anti), show(full));
            if anti != Some(want) || anti_unv {
                ok = false;
            }
        }
        lines.push(line);
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn optimality_pair() -> Outcome {
    let r = stabilizer_optimality(7, 4, 3, Method::Lp, ToleranceSet::default()).map_err(|e| e.to_string())?;
    let at = |d: usize| r.verdicts.iter().find(|(x, _)| *x == d).map(|(_, v)| *v);
    if at(3) == Some(Verdict::Feasible) && at(4) == Some(Verdict::Infeasible) && !r.unverified {
        Ok("[[7,4;3]] feasible at d = 3, infeasible at d = 4".into())
    } else {
        Err(format!("[[7,4;3]] verdicts {:?}", r.verdicts))
    }
}

fn properties() -> Outcome {
    checks::kravchuk_orthogonality(12).map_err(|e| format!("(a) {e}"))?;
    for seed in 0..20u64 {
        let n = 1 + (seed as usize % 6);
        let c = if n < 6 { seed as usize % 2 } else { 0 };
        let code = common::random_cws(seed, n, c, 2);
        checks::transforms_match_dense(&code, 1e-9).map_err(|e| format!("(b) seed {seed}: {e}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in 0..50 {
        let n = 1 + k % 3;
        let raw: Vec<f64> = (0..64).map(|_| rng.gen::<f64>()).collect();
        checks::block_spectrum_matches(n, &raw, 1e-8).map_err(|e| format!("(c) case {k}: {e}"))?;
    }
    let s = checks::realized_code_feasible(&common::bundled_cws("five_qubit.code"), 3, 1e-9).map_err(|e| format!("(d) {e}"))?;
    for seed in 0..20u64 {
        let group = common::random_group(seed, 1 + seed as usize % 5, 1 + seed as usize % 4);
        checks::group_enumerators_agree(&group).map_err(|e| format!("(e) seed {seed}: {e}"))?;
    }
    Ok(format!("(a)-(e) hold; plug-in at M = 2, s = {s}"))
}

fn reproduction_script() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let script = root.join("scripts/reproduce_table.sh");
    let meta = std::fs::metadata(&script).map_err(|e| format!("{}: {e}", script.display()))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        if meta.permissions().mode() & 0o111 == 0 {
            return Err("reproduction script is not executable".into());
        }
    }
    #[cfg(not(unix))]
    let _ = meta;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (out, diff) = (dir.path().join("t.csv"), dir.path().join("diff.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_qbound"))
        .args(["table", "--n", "3..4", "--c", "1..2", "--d", "3..4", "--method", "lp", "--reference-cells"])
        .arg("--out")
        .arg(&out)
        .arg("--diff")
        .arg(&diff)
        .stdout(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("qbound table exited with {status}"));
    }
    let text = std::fs::read_to_string(&diff).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    for col in ["n", "c", "d", "link_mode", "computed", "published", "match", "phase_tol", "cert_tol"] {
        if !header.contains(&col) {
            return Err(format!("diff lacks column {col}"));
        }
    }
    let m = header.iter().position(|&h| h == "match").unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    if rows.is_empty() || rows.iter().any(|r| r[m] != "yes") {
        return Err(format!("diff rows do not all match:\n{text}"));
    }
    Ok(format!("script present; sample diff has {} matching cells with per-cell metadata", rows.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("enumerator regression", Duration::from_secs(10), enumerators),
        ("spectrum regression", Duration::from_secs(60), spectra),
        ("LP table cells", Duration::from_secs(300), lp_cells),
        ("SDP cells", Duration::from_secs(1800), sdp_cells),
        ("optimality pair", Duration::from_secs(120), optimality_pair),
        ("property suites", Duration::from_secs(600), properties),
        ("table reproduction", Duration::from_secs(600), reproduction_script),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let took = start.elapsed();
        if result.is_ok() && took > *limit {
            result = Err(format!("took {took:.1?}, limit {limit:?}"));
        }
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({took:.1?}): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({took:.1?}): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
