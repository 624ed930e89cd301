//! Feasibility decisions for [`FeasibilityProgram`]s.
//!
//! [`solve_lp_exact`] runs an exact rational simplex and is authoritative on
//! LP-only programs. [`solve_feasibility`] runs a phase-I interior-point
//! method (`min τ` with every block `+ τ I ⪰ 0` and every row `+ τ ≥ 0`) and
//! backs infeasible verdicts with an exact dual certificate.

pub mod certificate;
pub mod ipm;
pub mod program;
pub mod reduce;
pub mod sdpa;
pub mod simplex;

pub use program::{BlockEntry, FeasibilityProgram, LinearConstraint, PsdConstraint, Sense, Variable};

use crate::error::{Error, Result};
use crate::exact::{f64_to_ratio, ratio_to_f64};
use certificate::DualCertificate;
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use reduce::{Elimination, Inconsistent, Reduced};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceSet {
    pub phase: f64,
    pub cert: f64,
    pub eq: f64,
    pub psd: f64,
    pub max_iterations: usize,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet { phase: 1e-8, cert: 1e-7, eq: 1e-8, psd: 1e-8, max_iterations: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Feasible,
    Infeasible,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    None,
    /// Equalities combining to `0 = value ≠ 0`.
    Equalities(Inconsistent),
    /// Nonnegative multipliers on the reduced rows.
    Farkas(Vec<BigRational>),
    Dual(DualCertificate),
}

#[derive(Clone, Debug, Default)]
pub struct Residuals {
    pub max_equality: f64,
    pub max_inequality: f64,
    /// Smallest eigenvalue over all blocks in solver scale (`+∞` without blocks).
    pub min_eigenvalue: f64,
    /// Certificate margin for infeasible verdicts.
    pub certificate_margin: f64,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub witness: Option<Vec<f64>>,
    /// Exact witness, from the simplex.
    pub exact_witness: Option<Vec<BigRational>>,
    pub certificate: Certificate,
    pub residuals: Residuals,
    pub iterations: usize,
    pub seconds: f64,
    /// Best phase-I value after each interior-point iterate.
    pub tau_trace: Vec<f64>,
    pub note: String,
}

impl SolveOutcome {
    fn new(verdict: Verdict, start: Instant) -> Self {
        SolveOutcome {
            verdict,
            witness: None,
            exact_witness: None,
            certificate: Certificate::None,
            residuals: Residuals { min_eigenvalue: f64::INFINITY, ..Residuals::default() },
            iterations: 0,
            seconds: start.elapsed().as_secs_f64(),
            tau_trace: Vec::new(),
            note: String::new(),
        }
    }
}

/// Float residuals of the original program at `z`.
pub fn residuals_at(program: &FeasibilityProgram, z: &[f64]) -> Residuals {
    let mut r = Residuals { min_eigenvalue: f64::INFINITY, ..Residuals::default() };
    for c in program.linear_rows_with_bounds() {
        let v = c.eval_f64(z) - ratio_to_f64(&c.rhs);
        match c.sense {
            Sense::Eq => r.max_equality = r.max_equality.max(v.abs()),
            Sense::Ge => r.max_inequality = r.max_inequality.max(-v),
        }
    }
    for b in &program.blocks {
        let m = b.eval_f64(z);
        let lam = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        r.min_eigenvalue = r.min_eigenvalue.min(lam);
    }
    r
}

fn equality_outcome(cert: Inconsistent, start: Instant) -> SolveOutcome {
    let mut out = SolveOutcome::new(Verdict::Infeasible, start);
    out.residuals.certificate_margin = ratio_to_f64(&cert.value).abs();
    out.certificate = Certificate::Equalities(cert);
    out.note = "equalities are inconsistent".into();
    out
}

/// Exact simplex feasibility for programs without blocks.
pub fn solve_lp_exact(program: &FeasibilityProgram) -> Result<SolveOutcome> {
    let start = Instant::now();
    if !program.is_lp() {
        return Err(Error::InvalidParameters("solve_lp_exact needs a program without PSD blocks".into()));
    }
    program.validate()?;
    let red = match reduce::eliminate(program) {
        Elimination::Inconsistent(c) => return Ok(equality_outcome(c, start)),
        Elimination::Reduced(r) => r,
    };
    let (res, stats) = simplex::solve(&red)?;
    let mut out = match res {
        simplex::LpResult::Feasible(w) => {
            let z = red.lift(&w);
            let viol = program.max_linear_violation(&z);
            if !viol.is_zero() {
                return Err(Error::Internal(format!("simplex point violates the program by {viol}")));
            }
            let mut out = SolveOutcome::new(Verdict::Feasible, start);
            out.witness = Some(z.iter().map(ratio_to_f64).collect());
            out.exact_witness = Some(z);
            out
        }
        simplex::LpResult::Infeasible(y) => {
            let value = simplex::farkas_value(&red, &y).ok_or_else(|| Error::Internal("Farkas vector is not valid".into()))?;
            if !value.is_negative() {
                return Err(Error::Internal(format!("Farkas value {value} is not negative")));
            }
            let weight: f64 = y.iter().map(ratio_to_f64).sum();
            let mut out = SolveOutcome::new(Verdict::Infeasible, start);
            out.residuals.certificate_margin = -ratio_to_f64(&value) / weight.max(f64::MIN_POSITIVE);
            out.certificate = Certificate::Farkas(y);
            out
        }
    };
    out.iterations = stats.pivots;
    out.seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Phase-I data in solver scale. Dual variables are `(w, τ)`.
struct PhaseOne {
    data: ipm::SdpData,
    row_scale: Vec<f64>,
    /// `F_b(w) = C_b + Σ_j w_j F_bj` in solver scale.
    f_blocks: Vec<(DMatrix<f64>, Vec<(usize, DMatrix<f64>)>)>,
}

fn phase_one(red: &Reduced) -> PhaseOne {
    let d = red.dim();
    let tau = d;
    let mut blocks = Vec::new();
    let mut f_blocks = Vec::new();
    for blk in &red.blocks {
        let s = &blk.congruence;
        let c = DMatrix::from_fn(blk.dim, blk.dim, |r, q| ratio_to_f64(&blk.constant[r][q]) * s[r] * s[q]);
        let mut fj = Vec::new();
        for (j, entries) in &blk.coefs {
            let mut m = DMatrix::zeros(blk.dim, blk.dim);
            for (r, q, a) in entries {
                let v = ratio_to_f64(a) * s[*r] * s[*q];
                m[(*r, *q)] = v;
                m[(*q, *r)] = v;
            }
            fj.push((*j, m));
        }
        let mut a: Vec<(usize, DMatrix<f64>)> = fj.iter().map(|(j, m)| (*j, -m)).collect();
        a.push((tau, -DMatrix::identity(blk.dim, blk.dim)));
        blocks.push(ipm::DenseBlock { dim: blk.dim, c: c.clone(), a });
        f_blocks.push((c, fj));
    }
    let mut lp_c = Vec::new();
    let mut lp_a = Vec::new();
    let mut row_scale = Vec::new();
    for row in &red.rows {
        let g: Vec<(usize, f64)> = row.terms.iter().map(|(j, a)| (*j, ratio_to_f64(a))).collect();
        let norm = g.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        let norm = if norm > 0.0 { norm } else { ratio_to_f64(&row.constant).abs().max(1.0) };
        lp_c.push(ratio_to_f64(&row.constant) / norm);
        let mut a: Vec<(usize, f64)> = g.iter().map(|(j, v)| (*j, -v / norm)).collect();
        a.push((tau, -1.0));
        lp_a.push(a);
        row_scale.push(norm);
    }
    let mut b = vec![0.0; d + 1];
    b[tau] = -1.0;
    PhaseOne { data: ipm::SdpData { m: d + 1, blocks, lp_c, lp_a, b }, row_scale, f_blocks }
}

impl PhaseOne {
    /// Smallest `τ` making `w` feasible for the relaxed problem.
    fn tau_at(&self, w: &[f64]) -> f64 {
        let mut t = f64::NEG_INFINITY;
        for (c, fj) in &self.f_blocks {
            let mut m = c.clone();
            for (j, f) in fj {
                if w[*j] != 0.0 {
                    m += f * w[*j];
                }
            }
            let lam = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
            t = t.max(-lam);
        }
        for (c, a) in self.data.lp_c.iter().zip(&self.data.lp_a) {
            let v = c - a.iter().filter(|(j, _)| *j < w.len()).map(|(j, g)| g * w[*j]).sum::<f64>();
            t = t.max(-v);
        }
        if t.is_nan() {
            f64::INFINITY
        } else {
            t
        }
    }
}

/// Interior-point phase-I feasibility with exact certificate checking.
pub fn solve_feasibility(program: &FeasibilityProgram, tol: ToleranceSet) -> Result<SolveOutcome> {
    let start = Instant::now();
    program.validate()?;
    let red = match reduce::eliminate(program) {
        Elimination::Inconsistent(c) => return Ok(equality_outcome(c, start)),
        Elimination::Reduced(r) => r,
    };
    let d = red.dim();
    let p1 = phase_one(&red);
    if red.rows.is_empty() && red.blocks.is_empty() {
        let z = red.lift_f64(&vec![0.0; d]);
        let mut out = SolveOutcome::new(Verdict::Feasible, start);
        out.residuals = residuals_at(program, &z);
        out.witness = Some(z);
        return Ok(out);
    }
    let t0 = p1.tau_at(&vec![0.0; d]);
    if t0.is_nan() || t0 == f64::INFINITY {
        let mut out = SolveOutcome::new(Verdict::Inconclusive, start);
        out.note = "non-finite program data".into();
        return Ok(out);
    }
    let mut y0 = vec![0.0; d + 1];
    y0[d] = t0.max(0.0) + 1.0;

    let mut trace: Vec<f64> = Vec::new();
    let mut best = f64::INFINITY;
    let mut accepted: Option<Vec<f64>> = None;
    let settings = ipm::IpmSettings { max_iterations: tol.max_iterations, ..ipm::IpmSettings::default() };
    let run = ipm::solve(&p1.data, y0, settings, |y| {
        let w = &y[..d];
        let t = p1.tau_at(w);
        if t < best {
            best = t;
        }
        trace.push(best);
        if t <= tol.phase {
            accepted = Some(w.to_vec());
            true
        } else {
            false
        }
    });
    if accepted.is_none() {
        let w = &run.iterate.y[..d];
        if p1.tau_at(w) <= tol.phase {
            accepted = Some(w.to_vec());
        }
    }

    let mut out = SolveOutcome::new(Verdict::Inconclusive, start);
    out.iterations = run.iterations;
    out.tau_trace = trace;
    if let Some(w) = accepted {
        let z = red.lift_f64(&w);
        out.residuals = residuals_at(program, &z);
        out.verdict = Verdict::Feasible;
        out.witness = Some(z);
        out.seconds = start.elapsed().as_secs_f64();
        return Ok(out);
    }

    let cert = certificate::from_float(&red, &run.iterate.x, &run.iterate.x_lp, &p1.row_scale);
    let weight = certificate::certificate_weight(&red, &cert, &p1.row_scale);
    match certificate::certificate_value(&red, &cert) {
        Some(v) if v.is_negative() && weight > 0.0 => {
            let margin = -ratio_to_f64(&v) / weight;
            out.residuals.certificate_margin = margin;
            if margin >= tol.cert {
                out.verdict = Verdict::Infeasible;
                out.certificate = Certificate::Dual(cert);
            } else {
                out.note = format!("certificate margin {margin:.3e} below tolerance");
            }
        }
        Some(v) => out.note = format!("dual point is not a certificate (value {:.3e}), {:?}", ratio_to_f64(&v), run.stop),
        None => out.note = format!("dual point is not a certificate, {:?}", run.stop),
    }
    if out.verdict == Verdict::Inconclusive && out.note.is_empty() {
        out.note = format!("{:?}", run.stop);
    }
    let r = residuals_at(program, &red.lift_f64(&run.iterate.y[..d]));
    out.residuals.max_equality = r.max_equality;
    out.residuals.max_inequality = r.max_inequality;
    out.residuals.min_eigenvalue = r.min_eigenvalue;
    out.seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Rounds a float witness to rationals and reports the exact linear
/// violation, for diagnostics.
pub fn exact_violation(program: &FeasibilityProgram, z: &[f64]) -> BigRational {
    let zq: Vec<BigRational> = z.iter().map(|&v| f64_to_ratio(v)).collect();
    program.max_linear_violation(&zq)
}
