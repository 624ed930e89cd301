//! Primal-dual interior-point method (HKM direction, Mehrotra
//! predictor-corrector) for small dense blocks plus a diagonal LP block.
//!
//! Problem pair:
//!
//! ```text
//! (P) min <C, X>  s.t. <A_i, X> = b_i, X ⪰ 0
//! (D) max b·y     s.t. Z = C - Σ y_i A_i ⪰ 0
//! ```

use nalgebra::{Cholesky, DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct DenseBlock {
    pub dim: usize,
    pub c: DMatrix<f64>,
    pub a: Vec<(usize, DMatrix<f64>)>,
}

#[derive(Clone, Debug)]
pub struct SdpData {
    pub m: usize,
    pub blocks: Vec<DenseBlock>,
    pub lp_c: Vec<f64>,
    pub lp_a: Vec<Vec<(usize, f64)>>,
    pub b: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Iterate {
    pub x: Vec<DMatrix<f64>>,
    pub x_lp: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<DMatrix<f64>>,
    pub z_lp: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpmStop {
    /// The caller's acceptance test passed for the dual point.
    Accepted,
    /// Small gap and residuals.
    Converged,
    IterationLimit,
    NumericalFailure,
}

pub struct IpmRun {
    pub stop: IpmStop,
    pub iterations: usize,
    pub iterate: Iterate,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct IpmSettings {
    pub max_iterations: usize,
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub step: f64,
}

impl Default for IpmSettings {
    fn default() -> Self {
        IpmSettings { max_iterations: 200, gap_tol: 1e-10, feas_tol: 1e-10, step: 0.95 }
    }
}

impl SdpData {
    fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum::<usize>() + self.lp_c.len()
    }

    /// `A(X)`.
    fn apply_a(&self, x: &[DMatrix<f64>], x_lp: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (blk, xb) in self.blocks.iter().zip(x) {
            for (i, a) in &blk.a {
                out[*i] += a.dot(xb);
            }
        }
        for (row, &xr) in self.lp_a.iter().zip(x_lp) {
            for &(i, a) in row {
                out[i] += a * xr;
            }
        }
        out
    }

    /// `Σ y_i A_i`.
    fn apply_at(&self, y: &[f64]) -> (Vec<DMatrix<f64>>, Vec<f64>) {
        let mats = self
            .blocks
            .iter()
            .map(|blk| {
                let mut m = DMatrix::zeros(blk.dim, blk.dim);
                for (i, a) in &blk.a {
                    if y[*i] != 0.0 {
                        m += a * y[*i];
                    }
                }
                m
            })
            .collect();
        let lp = self.lp_a.iter().map(|row| row.iter().map(|&(i, a)| a * y[i]).sum()).collect();
        (mats, lp)
    }

    fn primal_objective(&self, x: &[DMatrix<f64>], x_lp: &[f64]) -> f64 {
        self.blocks.iter().zip(x).map(|(b, xb)| b.c.dot(xb)).sum::<f64>() + self.lp_c.iter().zip(x_lp).map(|(c, x)| c * x).sum::<f64>()
    }
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest `α` keeping `x + α dx ⪰ 0`.
fn max_step_psd(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> Option<f64> {
    let l = Cholesky::new(x.clone())?.l();
    let linv = l.clone().try_inverse()?;
    let m = sym(&(&linv * dx * linv.transpose()));
    let lam = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    Some(if lam < 0.0 { -1.0 / lam } else { f64::INFINITY })
}

fn max_step_lp(x: &[f64], dx: &[f64]) -> f64 {
    x.iter().zip(dx).filter(|(_, d)| **d < 0.0).map(|(v, d)| -v / d).fold(f64::INFINITY, f64::min)
}

/// Runs the IPM from a dual-feasible start `y0` (`C - Σ y0_i A_i ≻ 0`).
/// `accept` is called with each dual iterate and stops the run when it
/// returns true.
pub fn solve(data: &SdpData, y0: Vec<f64>, settings: IpmSettings, mut accept: impl FnMut(&[f64]) -> bool) -> IpmRun {
    let nb = data.blocks.len();
    let total = data.total_dim().max(1) as f64;
    let (aty, aty_lp) = data.apply_at(&y0);
    let z: Vec<DMatrix<f64>> = data.blocks.iter().zip(&aty).map(|(b, a)| &b.c - a).collect();
    let z_lp: Vec<f64> = data.lp_c.iter().zip(&aty_lp).map(|(c, a)| c - a).collect();
    let mut it = Iterate {
        x: data.blocks.iter().map(|b| DMatrix::identity(b.dim, b.dim) / total).collect(),
        x_lp: vec![1.0 / total; data.lp_c.len()],
        y: y0,
        z,
        z_lp,
    };
    let mut stop = IpmStop::IterationLimit;
    let mut iterations = 0;
    for k in 0..settings.max_iterations {
        iterations = k;
        if accept(&it.y) {
            stop = IpmStop::Accepted;
            break;
        }
        let ax = data.apply_a(&it.x, &it.x_lp);
        let rp: Vec<f64> = data.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let (aty, aty_lp) = data.apply_at(&it.y);
        let rd: Vec<DMatrix<f64>> = (0..nb).map(|i| &data.blocks[i].c - &it.z[i] - &aty[i]).collect();
        let rd_lp: Vec<f64> = (0..data.lp_c.len()).map(|r| data.lp_c[r] - it.z_lp[r] - aty_lp[r]).collect();
        let xz: f64 = it.x.iter().zip(&it.z).map(|(x, z)| x.dot(z)).sum::<f64>() + it.x_lp.iter().zip(&it.z_lp).map(|(x, z)| x * z).sum::<f64>();
        let mu = xz / total;
        let pobj = data.primal_objective(&it.x, &it.x_lp);
        let dobj: f64 = data.b.iter().zip(&it.y).map(|(b, y)| b * y).sum();
        let rp_norm = rp.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rp_norm <= settings.feas_tol && (pobj - dobj).abs() <= settings.gap_tol * (1.0 + pobj.abs() + dobj.abs()) {
            stop = IpmStop::Converged;
            break;
        }

        // Z^{-1} and the Schur complement.
        let mut zinv = Vec::with_capacity(nb);
        for z in &it.z {
            match Cholesky::new(z.clone()) {
                Some(ch) => zinv.push(sym(&ch.inverse())),
                None => {
                    stop = IpmStop::NumericalFailure;
                    break;
                }
            }
        }
        if stop == IpmStop::NumericalFailure || it.z_lp.iter().any(|&v| v <= 0.0) {
            stop = IpmStop::NumericalFailure;
            break;
        }
        let m = data.m;
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for (bi, blk) in data.blocks.iter().enumerate() {
            let xb = &it.x[bi];
            let zi = &zinv[bi];
            let prods: Vec<DMatrix<f64>> = blk.a.iter().map(|(_, a)| xb * a * zi).collect();
            for (i, ai) in &blk.a {
                for ((j, _), prod) in blk.a.iter().zip(&prods) {
                    // tr(A_i X A_j Z^{-1})
                    schur[(*i, *j)] += ai.component_mul(&prod.transpose()).sum();
                }
            }
        }
        for (r, row) in data.lp_a.iter().enumerate() {
            let dval = it.x_lp[r] / it.z_lp[r];
            for &(i, a) in row {
                for &(j, b) in row {
                    schur[(i, j)] += a * dval * b;
                }
            }
        }
        let schur = sym(&schur);
        let chol = match Cholesky::new(schur.clone()) {
            Some(c) => c,
            None => {
                let reg = schur.diagonal().iter().copied().fold(0.0, f64::max).max(1.0) * 1e-12;
                match Cholesky::new(&schur + DMatrix::identity(m, m) * reg) {
                    Some(c) => c,
                    None => {
                        stop = IpmStop::NumericalFailure;
                        break;
                    }
                }
            }
        };

        // Direction for a given centering target and second-order term.
        let direction = |sigma_mu: f64, corr: Option<(&[DMatrix<f64>], &[f64], &[DMatrix<f64>], &[f64])>| {
            let mut rhs_blocks: Vec<DMatrix<f64>> = (0..nb).map(|i| &it.x[i] * &rd[i] * &zinv[i]).collect();
            let mut rhs_lp: Vec<f64> = (0..data.lp_c.len()).map(|r| it.x_lp[r] * rd_lp[r] / it.z_lp[r]).collect();
            for i in 0..nb {
                if sigma_mu != 0.0 {
                    rhs_blocks[i] -= &zinv[i] * sigma_mu;
                }
                if let Some((dxa, _, dza, _)) = corr {
                    rhs_blocks[i] += &dxa[i] * &dza[i] * &zinv[i];
                }
            }
            for r in 0..data.lp_c.len() {
                rhs_lp[r] -= sigma_mu / it.z_lp[r];
                if let Some((_, dxa, _, dza)) = corr {
                    rhs_lp[r] += dxa[r] * dza[r] / it.z_lp[r];
                }
            }
            let sym_rhs: Vec<DMatrix<f64>> = rhs_blocks.iter().map(sym).collect();
            let arhs = data.apply_a(&sym_rhs, &rhs_lp);
            let h = DVector::from_iterator(m, data.b.iter().zip(&arhs).map(|(b, a)| b + a));
            let dy = chol.solve(&h);
            let dy: Vec<f64> = dy.iter().copied().collect();
            let (atdy, atdy_lp) = data.apply_at(&dy);
            let dz: Vec<DMatrix<f64>> = (0..nb).map(|i| &rd[i] - &atdy[i]).collect();
            let dz_lp: Vec<f64> = (0..data.lp_c.len()).map(|r| rd_lp[r] - atdy_lp[r]).collect();
            let dx: Vec<DMatrix<f64>> = (0..nb)
                .map(|i| {
                    let mut d = &zinv[i] * sigma_mu - &it.x[i] - &it.x[i] * &dz[i] * &zinv[i];
                    if let Some((dxa, _, dza, _)) = corr {
                        d -= &dxa[i] * &dza[i] * &zinv[i];
                    }
                    sym(&d)
                })
                .collect();
            let dx_lp: Vec<f64> = (0..data.lp_c.len())
                .map(|r| {
                    let mut d = sigma_mu / it.z_lp[r] - it.x_lp[r] - it.x_lp[r] * dz_lp[r] / it.z_lp[r];
                    if let Some((_, dxa, _, dza)) = corr {
                        d -= dxa[r] * dza[r] / it.z_lp[r];
                    }
                    d
                })
                .collect();
            (dx, dx_lp, dy, dz, dz_lp)
        };
        let steps = |dx: &[DMatrix<f64>], dx_lp: &[f64], dz: &[DMatrix<f64>], dz_lp: &[f64]| -> Option<(f64, f64)> {
            let mut ap = max_step_lp(&it.x_lp, dx_lp);
            let mut ad = max_step_lp(&it.z_lp, dz_lp);
            for i in 0..nb {
                ap = ap.min(max_step_psd(&it.x[i], &dx[i])?);
                ad = ad.min(max_step_psd(&it.z[i], &dz[i])?);
            }
            Some(((settings.step * ap).min(1.0), (settings.step * ad).min(1.0)))
        };

        let (dxa, dxa_lp, _, dza, dza_lp) = direction(0.0, None);
        let Some((ap, ad)) = steps(&dxa, &dxa_lp, &dza, &dza_lp) else {
            stop = IpmStop::NumericalFailure;
            break;
        };
        let xz_aff: f64 = (0..nb).map(|i| (&it.x[i] + &dxa[i] * ap).dot(&(&it.z[i] + &dza[i] * ad))).sum::<f64>()
            + (0..data.lp_c.len()).map(|r| (it.x_lp[r] + ap * dxa_lp[r]) * (it.z_lp[r] + ad * dza_lp[r])).sum::<f64>();
        let sigma = if xz > 0.0 { (xz_aff / xz).clamp(0.0, 1.0).powi(3) } else { 0.0 };
        let (dx, dx_lp, dy, dz, dz_lp) = direction(sigma * mu, Some((&dxa, &dxa_lp, &dza, &dza_lp)));
        let Some((ap, ad)) = steps(&dx, &dx_lp, &dz, &dz_lp) else {
            stop = IpmStop::NumericalFailure;
            break;
        };
        if !(ap.is_finite() && ad.is_finite()) || dy.iter().any(|v| !v.is_finite()) {
            stop = IpmStop::NumericalFailure;
            break;
        }
        for i in 0..nb {
            it.x[i] += &dx[i] * ap;
            it.z[i] += &dz[i] * ad;
        }
        for r in 0..data.lp_c.len() {
            it.x_lp[r] += ap * dx_lp[r];
            it.z_lp[r] += ad * dz_lp[r];
        }
        for (y, d) in it.y.iter_mut().zip(&dy) {
            *y += ad * d;
        }
        iterations = k + 1;
    }
    let ax = data.apply_a(&it.x, &it.x_lp);
    let primal_residual = data.b.iter().zip(&ax).map(|(b, a)| (b - a) * (b - a)).sum::<f64>().sqrt();
    IpmRun {
        stop,
        iterations,
        primal_objective: data.primal_objective(&it.x, &it.x_lp),
        dual_objective: data.b.iter().zip(&it.y).map(|(b, y)| b * y).sum(),
        primal_residual,
        iterate: it,
    }
}
