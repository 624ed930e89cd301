//! Exact dual certificates for the phase-I SDP.
//!
//! A certificate is a PSD matrix `Y_b` per block and a multiplier `λ_i ≥ 0`
//! per reduced row. For any feasible `w`,
//! `φ(w) = Σ_b <Y_b, E_b(w)> + Σ_i λ_i (c_i + g_i·w) ≥ 0`, so a negative
//! maximum of the affine function `φ` over the variable box proves that no
//! feasible point exists. `Y_b` is stored as an exact factor `L L^T`.

use super::reduce::Reduced;
use super::simplex::box_max;
use crate::exact::{f64_to_ratio, ratio_to_f64};
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct DualCertificate {
    /// Column factors of each block matrix; `Y_b = Σ_k l_k l_k^T`.
    pub factors: Vec<Vec<Vec<BigRational>>>,
    pub multipliers: Vec<BigRational>,
}

/// Builds a rational certificate from a float primal point in solver scale.
/// `x_blocks[b]` multiplies `S_b E_b S_b`, `x_rows[i]` multiplies row `i`
/// divided by `row_scale[i]`.
pub fn from_float(red: &Reduced, x_blocks: &[DMatrix<f64>], x_rows: &[f64], row_scale: &[f64]) -> DualCertificate {
    let factors = red
        .blocks
        .iter()
        .zip(x_blocks)
        .map(|(blk, x)| {
            let s = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&blk.congruence));
            let y = &s * x * &s;
            let y = (&y + y.transpose()) * 0.5;
            let eig = y.symmetric_eigen();
            let mut cols = Vec::new();
            for (k, &lam) in eig.eigenvalues.iter().enumerate() {
                if lam <= 0.0 || !lam.is_finite() {
                    continue;
                }
                let r = lam.sqrt();
                cols.push(eig.eigenvectors.column(k).iter().map(|v| f64_to_ratio(v * r)).collect());
            }
            cols
        })
        .collect();
    let multipliers = x_rows.iter().zip(row_scale).map(|(&x, &n)| if x > 0.0 && x.is_finite() { f64_to_ratio(x / n) } else { BigRational::zero() }).collect();
    DualCertificate { factors, multipliers }
}

/// Exact `Y_b` entries.
pub fn block_matrix(factor: &[Vec<BigRational>], dim: usize) -> Vec<Vec<BigRational>> {
    let mut y = vec![vec![BigRational::zero(); dim]; dim];
    for l in factor {
        for r in 0..dim {
            if l[r].is_zero() {
                continue;
            }
            for c in r..dim {
                let v = &l[r] * &l[c];
                y[r][c] += &v;
            }
        }
    }
    for r in 0..dim {
        for c in 0..r {
            y[r][c] = y[c][r].clone();
        }
    }
    y
}

/// `φ = c0 + h·w` for the certificate.
pub fn affine_form(red: &Reduced, cert: &DualCertificate) -> Option<(BigRational, Vec<BigRational>)> {
    if cert.factors.len() != red.blocks.len() || cert.multipliers.len() != red.rows.len() || cert.multipliers.iter().any(|m| m.is_negative()) {
        return None;
    }
    let mut c0 = BigRational::zero();
    let mut h = vec![BigRational::zero(); red.dim()];
    for (blk, factor) in red.blocks.iter().zip(&cert.factors) {
        if factor.iter().any(|l| l.len() != blk.dim) {
            return None;
        }
        let y = block_matrix(factor, blk.dim);
        for r in 0..blk.dim {
            for c in 0..blk.dim {
                c0 += &y[r][c] * &blk.constant[r][c];
            }
        }
        for (j, entries) in &blk.coefs {
            for (r, c, a) in entries {
                let mut v = &y[*r][*c] * a;
                if r != c {
                    v = &v + &v;
                }
                h[*j] += v;
            }
        }
    }
    for (row, m) in red.rows.iter().zip(&cert.multipliers) {
        if m.is_zero() {
            continue;
        }
        c0 += m * &row.constant;
        for (j, a) in &row.terms {
            h[*j] += m * a;
        }
    }
    Some((c0, h))
}

/// Maximum of `φ` over the variable box; the certificate is valid when this
/// is negative.
pub fn certificate_value(red: &Reduced, cert: &DualCertificate) -> Option<BigRational> {
    let (c0, h) = affine_form(red, cert)?;
    box_max(red, &c0, &h)
}

/// Scale used to turn the certificate value into a margin: the total weight
/// of the certificate in solver scale.
pub fn certificate_weight(red: &Reduced, cert: &DualCertificate, row_scale: &[f64]) -> f64 {
    let mut w = 0.0;
    for (blk, factor) in red.blocks.iter().zip(&cert.factors) {
        for l in factor {
            for (r, v) in l.iter().enumerate() {
                let s = blk.congruence[r];
                let x = ratio_to_f64(v) / s;
                w += x * x;
            }
        }
    }
    for (m, n) in cert.multipliers.iter().zip(row_scale) {
        w += ratio_to_f64(m) * n;
    }
    w
}
