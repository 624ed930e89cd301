//! Checks shared by the property tests and the acceptance run. Each returns
//! a description of the first mismatch.

use super::close;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use qbound::analysis::{self, dense_from_cws, CwsCode};
use qbound::bounds::{build_lp, build_sdp, realized_assignment, realized_stats, BuildOptions};
use qbound::enumerator::SplitEnumerator;
use qbound::exact::ratio_to_f64;
use qbound::pauli::{PauliGroup, PauliSet};
use qbound::terwilliger::{blocks_from_values, TupleDomain};
use qbound::transforms::{binomial, kravchuk, macwilliams_split, shadow_transform_split};

pub type Check = Result<(), String>;

fn pow3(e: usize) -> i128 {
    3i128.pow(e as u32)
}

/// `Σ_k 3^k C(n,k) K_i(k) K_j(k) = δ_ij 4^n 3^i C(n,i)` for every `n ≤ n_max`.
pub fn kravchuk_orthogonality(n_max: usize) -> Check {
    for n in 0..=n_max {
        for i in 0..=n {
            for j in 0..=n {
                let s: i128 = (0..=n)
                    .map(|k| pow3(k) * binomial(n as i64, k as i64) * kravchuk(i, k, n).unwrap() * kravchuk(j, k, n).unwrap())
                    .sum();
                let expect = if i == j { 4i128.pow(n as u32) * pow3(i) * binomial(n as i64, i as i64) } else { 0 };
                if s != expect {
                    return Err(format!("n={n} i={i} j={j}: {s} != {expect}"));
                }
            }
        }
    }
    Ok(())
}

fn max_rel_diff(a: &SplitEnumerator<f64>, b: &SplitEnumerator<f64>) -> f64 {
    let mut worst = 0.0f64;
    for (ra, rb) in a.rows().iter().zip(b.rows()) {
        for (x, y) in ra.iter().zip(rb) {
            worst = worst.max((x - y).abs() / x.abs().max(y.abs()).max(1.0));
        }
    }
    worst
}

/// Dense enumerators against the transforms of the dense `A` and against
/// the combinatorial route.
pub fn transforms_match_dense(code: &CwsCode, tol: f64) -> Check {
    let (n, c) = (code.n(), code.c());
    let m = code.size() as f64;
    let dense = dense_from_cws(code).map_err(|e| e.to_string())?;
    let (a, b) = analysis::sl_enumerators(&dense).map_err(|e| e.to_string())?;
    let d = analysis::shadow_enumerator(&dense).map_err(|e| e.to_string())?;
    let trace = analysis::shadow_trace(&dense);

    let b_mw = macwilliams_split(&a, &m).map_err(|e| e.to_string())?;
    if max_rel_diff(&b, &b_mw) >= tol {
        return Err(format!("MacWilliams: {:?} vs {:?}", b.rows(), b_mw.rows()));
    }
    let norm = if trace.abs() > 1e-10 { trace } else { 1.0 };
    let scale = m * m / 2f64.powi((n + c) as i32) / norm;
    let d_sh = shadow_transform_split(&a).map_err(|e| e.to_string())?.scaled(&scale);
    if max_rel_diff(&d, &d_sh) >= tol {
        return Err(format!("shadow: {:?} vs {:?}", d.rows(), d_sh.rows()));
    }
    let b_comb = analysis::combinatorial_b(code).map_err(|e| e.to_string())?.to_f64();
    if max_rel_diff(&b, &b_comb) >= tol {
        return Err(format!("B routes: {:?} vs {:?}", b.rows(), b_comb.rows()));
    }
    if c == 0 {
        let a_comb: Vec<f64> = analysis::combinatorial_a(code).map_err(|e| e.to_string())?.iter().map(ratio_to_f64).collect();
        let d_comb: Vec<f64> = analysis::combinatorial_shadow(code).map_err(|e| e.to_string())?.iter().map(ratio_to_f64).collect();
        if !a.unsplit().iter().zip(&a_comb).all(|(x, y)| close(*x, *y, tol)) {
            return Err(format!("A routes: {:?} vs {a_comb:?}", a.unsplit()));
        }
        if !d.unsplit().iter().zip(&d_comb).all(|(x, y)| close(*x, *y, tol)) {
            return Err(format!("shadow routes: {:?} vs {d_comb:?}", d.unsplit()));
        }
    }
    Ok(())
}

/// `(i, j, t, p)` of two words over {0, 1, 2, 3} given as digit vectors.
fn relation(a: &[usize], b: &[usize]) -> (usize, usize, usize, usize) {
    let i = a.iter().filter(|&&v| v != 0).count();
    let j = b.iter().filter(|&&v| v != 0).count();
    let t = a.iter().zip(b).filter(|(x, y)| **x != 0 && **y != 0).count();
    let p = a.iter().zip(b).filter(|(x, y)| **x != 0 && x == y).count();
    (i, j, t, p)
}

fn digits(mut v: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = v % 4;
        v /= 4;
    }
    out
}

fn distinct(mut v: Vec<f64>, tol: f64) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        if out.last().is_none_or(|l| (x - l).abs() > tol) {
            out.push(x);
        }
    }
    out
}

/// Distinct eigenvalues of the `4^n × 4^n` relation matrix built from
/// swap-symmetrized `raw` values against those of the block decomposition.
pub fn block_spectrum_matches(n: usize, raw: &[f64], tol: f64) -> Check {
    let dom = TupleDomain::new(n);
    let mut x = vec![0.0; dom.len()];
    for (k, (i, j, t, p)) in dom.iter().enumerate() {
        let other = dom.index(j, i, t, p).unwrap();
        x[k] = raw[k.min(other) % raw.len()];
    }
    let size = 4usize.pow(n as u32);
    let words: Vec<Vec<usize>> = (0..size).map(|v| digits(v, n)).collect();
    let mut full = DMatrix::<f64>::zeros(size, size);
    for r in 0..size {
        for s in 0..size {
            let (i, j, t, p) = relation(&words[r], &words[s]);
            full[(r, s)] = x[dom.index(i, j, t, p).unwrap()];
        }
    }
    let tol = tol * (1.0 + full.amax() * size as f64);
    let full_eigs = distinct(full.symmetric_eigenvalues().iter().copied().collect(), tol);
    let block_eigs = distinct(blocks_from_values(n, &x).map_err(|e| e.to_string())?.eigenvalues(), tol);
    if full_eigs.len() != block_eigs.len() || full_eigs.iter().zip(&block_eigs).any(|(a, b)| (a - b).abs() > tol) {
        return Err(format!("n={n}: {full_eigs:?} vs {block_eigs:?}"));
    }
    Ok(())
}

/// Weight enumerator of a group against its distance enumerator, both by
/// brute force and through [`PauliSet`].
pub fn group_enumerators_agree(group: &PauliGroup) -> Check {
    let set = PauliSet::from_group(group).map_err(|e| e.to_string())?;
    let elems = set.elements();
    let m = group.qubits();
    let mut weights = vec![0u64; m + 1];
    let mut pairs = vec![0u64; m + 1];
    for a in elems {
        weights[a.weight()] += 1;
        for b in elems {
            pairs[a.mul(b).unwrap().weight()] += 1;
        }
    }
    let size = BigInt::from(elems.len());
    let dist: Vec<BigRational> = pairs.iter().map(|&v| BigRational::new(BigInt::from(v), size.clone())).collect();
    let as_ratio: Vec<BigRational> = weights.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    if set.weight_enumerator() != weights {
        return Err(format!("weight enumerator {:?} vs {weights:?}", set.weight_enumerator()));
    }
    if set.distance_enumerator().map_err(|e| e.to_string())? != dist {
        return Err("distance enumerator differs from pair count".into());
    }
    if dist != as_ratio {
        return Err(format!("distance {dist:?} vs weight {as_ratio:?}"));
    }
    Ok(())
}

/// The realized statistics of an unassisted code satisfy its own LP and SDP
/// at `M = |code|`, `s = log2 |S_I|`: no exact linear violation, blocks PSD
/// within `tol` (relative to the block's largest entry).
pub fn realized_code_feasible(code: &CwsCode, d: usize, tol: f64) -> Result<usize, String> {
    let real = realized_stats(code).map_err(|e| e.to_string())?;
    let m = code.size() as u64;
    let opts = BuildOptions::default();
    let lp = build_lp(code.n(), 0, d, m, real.s, &opts).map_err(|e| e.to_string())?;
    let z = realized_assignment(&lp, &real).map_err(|e| e.to_string())?;
    let v = lp.program.max_linear_violation(&z);
    if !v.is_zero() {
        return Err(format!("LP violation {v}"));
    }
    let sdp = build_sdp(code.n(), 0, d, m, real.s, &opts).map_err(|e| e.to_string())?;
    let z = realized_assignment(&sdp, &real).map_err(|e| e.to_string())?;
    let v = sdp.program.max_linear_violation(&z);
    if !v.is_zero() {
        return Err(format!("SDP linear violation {v}"));
    }
    let zf: Vec<f64> = z.iter().map(ratio_to_f64).collect();
    for b in &sdp.program.blocks {
        let mat = b.eval_f64(&zf);
        let scale = mat.amax().max(1.0);
        let eig = (mat / scale).symmetric_eigenvalues().min();
        if eig < -tol {
            return Err(format!("block {} has eigenvalue {eig}", b.label));
        }
    }
    Ok(real.s)
}
