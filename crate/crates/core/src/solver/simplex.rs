//! Exact-rational phase-I simplex on the reduced inequality system.

use super::reduce::Reduced;
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of the exact feasibility check in reduced coordinates.
pub enum LpResult {
    /// A basic feasible point `w`.
    Feasible(Vec<BigRational>),
    /// Row multipliers `y ≥ 0` (indexed like `Reduced::rows`) with
    /// `Σ y_i g_i = 0` on every variable direction that is unbounded and
    /// `Σ y_i (g_i·w + c_i) < 0` for every `w` in the variable bounds.
    Infeasible(Vec<BigRational>),
}

pub const MAX_TABLEAU_ENTRIES: usize = 4_000_000;

/// How a reduced variable is represented by nonnegative simplex columns.
#[derive(Clone, Debug)]
enum Column {
    /// `w_j = lower + x`.
    Shifted(usize, BigRational),
    /// `w_j = x⁺ - x⁻`; this is the `x⁺` part, with `sign` +1, or `x⁻` with -1.
    Split(usize, i32),
}

pub struct SimplexStats {
    pub pivots: usize,
}

pub fn solve(red: &Reduced) -> Result<(LpResult, SimplexStats)> {
    let mut cols: Vec<Column> = Vec::new();
    for (j, lo) in red.lower.iter().enumerate() {
        match lo {
            Some(l) => cols.push(Column::Shifted(j, l.clone())),
            None => {
                cols.push(Column::Split(j, 1));
                cols.push(Column::Split(j, -1));
            }
        }
    }
    let nstruct = cols.len();
    let nrows = red.rows.len();

    // Row i: g_i · x - s_i = b_i with b_i = -(c_i + g_i · lower).
    let mut g = vec![vec![BigRational::zero(); nstruct]; nrows];
    let mut b = vec![BigRational::zero(); nrows];
    for (i, row) in red.rows.iter().enumerate() {
        let mut shift = row.constant.clone();
        for (j, a) in &row.terms {
            for (c, col) in cols.iter().enumerate() {
                match col {
                    Column::Shifted(jj, lo) if jj == j => {
                        g[i][c] = a.clone();
                        shift += a * lo;
                    }
                    Column::Split(jj, sign) if jj == j => g[i][c] = if *sign > 0 { a.clone() } else { -a.clone() },
                    _ => {}
                }
            }
        }
        b[i] = -shift;
    }

    // Variables: structural 0..nstruct, slack nstruct + i, artificial nstruct + nrows + i.
    let slack = |i: usize| nstruct + i;
    let art = |i: usize| nstruct + nrows + i;
    let mut nonbasic: Vec<usize> = (0..nstruct).collect();
    let mut basic: Vec<usize> = Vec::with_capacity(nrows);
    let mut art_rows = Vec::new();
    for (i, bi) in b.iter().enumerate() {
        if bi.is_positive() {
            basic.push(art(i));
            nonbasic.push(slack(i));
            art_rows.push(i);
        } else {
            basic.push(slack(i));
        }
    }
    if nrows.saturating_mul(nonbasic.len()) > MAX_TABLEAU_ENTRIES {
        return Err(Error::SizeCap {
            what: "simplex tableau entries".into(),
            needed: (nrows * nonbasic.len()) as u128,
            limit: MAX_TABLEAU_ENTRIES as u128,
        });
    }
    // Dictionary: basic[i] = d0[i] + Σ_k d[i][k] nonbasic[k].
    let mut d0: Vec<BigRational> = Vec::with_capacity(nrows);
    let mut d: Vec<Vec<BigRational>> = Vec::with_capacity(nrows);
    for i in 0..nrows {
        let mut row = vec![BigRational::zero(); nonbasic.len()];
        if b[i].is_positive() {
            // a_i = b_i - g_i x + s_i
            for c in 0..nstruct {
                row[c] = -g[i][c].clone();
            }
            let k = nonbasic.iter().position(|&v| v == slack(i)).unwrap();
            row[k] = BigRational::one();
            d0.push(b[i].clone());
        } else {
            // s_i = -b_i + g_i x
            row[..nstruct].clone_from_slice(&g[i][..nstruct]);
            d0.push(-b[i].clone());
        }
        d.push(row);
    }
    // Objective Σ a_i = o0 + Σ o_k x_k.
    let mut o0 = BigRational::zero();
    let mut o = vec![BigRational::zero(); nonbasic.len()];
    for &i in &art_rows {
        o0 += &d0[i];
        for (ok, dk) in o.iter_mut().zip(&d[i]) {
            *ok += dk;
        }
    }

    let mut pivots = 0usize;
    let mut degenerate_streak = 0usize;
    let mut bland = false;
    loop {
        // Entering column.
        let entering = if bland {
            (0..nonbasic.len()).filter(|&k| o[k].is_negative()).min_by_key(|&k| nonbasic[k])
        } else {
            let mut best: Option<usize> = None;
            for k in 0..nonbasic.len() {
                if o[k].is_negative() && best.is_none_or(|b| o[k] < o[b]) {
                    best = Some(k);
                }
            }
            best
        };
        let Some(e) = entering else { break };
        if o0.is_zero() {
            break;
        }
        // Ratio test.
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..nrows {
            if d[i][e].is_negative() {
                let t = &d0[i] / -&d[i][e];
                let better = match &leave {
                    None => true,
                    Some((l, tl)) => t < *tl || (t == *tl && basic[i] < basic[*l]),
                };
                if better {
                    leave = Some((i, t));
                }
            }
        }
        let Some((l, t)) = leave else {
            return Err(Error::Internal("phase-I simplex objective unbounded".into()));
        };
        if t.is_zero() {
            degenerate_streak += 1;
            if degenerate_streak > 50 {
                bland = true;
            }
        } else {
            degenerate_streak = 0;
        }
        pivot(&mut d, &mut d0, &mut o, &mut o0, l, e);
        std::mem::swap(&mut basic[l], &mut nonbasic[e]);
        let leaving_var = nonbasic[e];
        pivots += 1;
        // An artificial that leaves never re-enters.
        if leaving_var >= nstruct + nrows {
            for row in d.iter_mut() {
                row.swap_remove(e);
            }
            o.swap_remove(e);
            nonbasic.swap_remove(e);
        }
    }

    if o0.is_zero() {
        let mut x = vec![BigRational::zero(); nstruct];
        for (i, &v) in basic.iter().enumerate() {
            if v < nstruct {
                x[v] = d0[i].clone();
            }
        }
        let mut w = vec![BigRational::zero(); red.dim()];
        for (c, col) in cols.iter().enumerate() {
            match col {
                Column::Shifted(j, lo) => w[*j] = lo + &x[c],
                Column::Split(j, sign) => {
                    if *sign > 0 {
                        w[*j] += &x[c]
                    } else {
                        w[*j] -= &x[c]
                    }
                }
            }
        }
        return Ok((LpResult::Feasible(w), SimplexStats { pivots }));
    }
    let mut y = vec![BigRational::zero(); nrows];
    for (k, &v) in nonbasic.iter().enumerate() {
        if v >= nstruct && v < nstruct + nrows {
            y[v - nstruct] = o[k].clone();
        }
    }
    Ok((LpResult::Infeasible(y), SimplexStats { pivots }))
}

fn pivot(d: &mut [Vec<BigRational>], d0: &mut [BigRational], o: &mut [BigRational], o0: &mut BigRational, l: usize, e: usize) {
    // x_e = (x_l - d0_l - Σ_{k≠e} d_lk x_k) / d_le
    let inv = d[l][e].recip();
    let mut prow: Vec<BigRational> = d[l].iter().map(|v| -(v * &inv)).collect();
    prow[e] = inv.clone();
    let p0 = -(&d0[l] * &inv);
    let apply = |row: &mut Vec<BigRational>, r0: &mut BigRational| {
        let a = std::mem::take(&mut row[e]);
        if a.is_zero() {
            return;
        }
        *r0 += &a * &p0;
        for (k, pk) in prow.iter().enumerate() {
            if k == e {
                row[k] = &a * pk;
            } else if !pk.is_zero() {
                row[k] += &a * pk;
            }
        }
    };
    for i in 0..d.len() {
        if i == l {
            continue;
        }
        let mut r0 = std::mem::take(&mut d0[i]);
        apply(&mut d[i], &mut r0);
        d0[i] = r0;
    }
    let mut oo = std::mem::take(o0);
    let mut orow = o.to_vec();
    apply(&mut orow, &mut oo);
    o.clone_from_slice(&orow);
    *o0 = oo;
    d[l] = prow;
    d0[l] = p0;
}

/// Exact check of a Farkas vector: `y ≥ 0`, and the affine function
/// `Σ y_i (c_i + g_i · w)` is negative on the whole box of variable bounds.
/// Returns its maximum over the box (negative when the certificate holds).
pub fn farkas_value(red: &Reduced, y: &[BigRational]) -> Option<BigRational> {
    if y.len() != red.rows.len() || y.iter().any(|v| v.is_negative()) {
        return None;
    }
    let mut h = vec![BigRational::zero(); red.dim()];
    let mut c0 = BigRational::zero();
    for (row, yi) in red.rows.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        c0 += yi * &row.constant;
        for (j, a) in &row.terms {
            h[*j] += yi * a;
        }
    }
    box_max(red, &c0, &h)
}

/// `max_{w in bounds} c0 + h·w`, or `None` when unbounded.
pub(crate) fn box_max(red: &Reduced, c0: &BigRational, h: &[BigRational]) -> Option<BigRational> {
    let mut v = c0.clone();
    for (j, hj) in h.iter().enumerate() {
        if hj.is_zero() {
            continue;
        }
        let bound = if hj.is_positive() { red.upper[j].as_ref() } else { red.lower[j].as_ref() };
        v += hj * bound?;
    }
    Some(v)
}
