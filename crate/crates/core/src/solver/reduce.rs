//! Exact elimination of the equality constraints.
//!
//! Equalities are brought to reduced row echelon form over the rationals, so
//! every variable is `z_k = z0_k + Σ_j N_kj w_j` with `w` the non-pivot
//! variables. Inequalities, bounds and blocks are then rewritten in `w`.

use super::program::{FeasibilityProgram, Sense};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};

type Sparse = BTreeMap<usize, BigRational>;

/// Inequality `constant + Σ terms ≥ 0` in reduced coordinates, with the index
/// of the linear row it came from (see [`FeasibilityProgram::linear_rows_with_bounds`]).
#[derive(Clone, Debug)]
pub struct ReducedRow {
    pub source: usize,
    pub terms: Vec<(usize, BigRational)>,
    pub constant: BigRational,
}

/// Block `E(w) = constant + Σ_j w_j coefs[j]` in exact (unscaled) form.
#[derive(Clone, Debug)]
pub struct ReducedBlock {
    pub source: usize,
    pub dim: usize,
    pub constant: Vec<Vec<BigRational>>,
    /// `(j, sparse entries (row, col, value) with row ≤ col)`.
    pub coefs: Vec<(usize, Vec<(usize, usize, BigRational)>)>,
    pub congruence: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Reduced {
    /// Original variable index of each reduced coordinate `w_j`.
    pub free: Vec<usize>,
    pub lower: Vec<Option<BigRational>>,
    pub upper: Vec<Option<BigRational>>,
    pub z0: Vec<BigRational>,
    /// `z_k = z0_k + Σ substitution[k]`.
    pub substitution: Vec<Vec<(usize, BigRational)>>,
    pub rows: Vec<ReducedRow>,
    pub blocks: Vec<ReducedBlock>,
}

impl Reduced {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Original variables at a reduced point.
    pub fn lift(&self, w: &[BigRational]) -> Vec<BigRational> {
        self.z0
            .iter()
            .zip(&self.substitution)
            .map(|(z, sub)| sub.iter().fold(z.clone(), |acc, (j, a)| acc + a * &w[*j]))
            .collect()
    }

    pub fn lift_f64(&self, w: &[f64]) -> Vec<f64> {
        self.z0
            .iter()
            .zip(&self.substitution)
            .map(|(z, sub)| crate::exact::ratio_to_f64(z) + sub.iter().map(|(j, a)| crate::exact::ratio_to_f64(a) * w[*j]).sum::<f64>())
            .collect()
    }
}

/// Equalities that combine to `0 = nonzero`.
#[derive(Clone, Debug)]
pub struct Inconsistent {
    /// Multipliers on the program's constraints (indices into `constraints`).
    pub multipliers: Vec<(usize, BigRational)>,
    /// `Σ multipliers · rhs`, nonzero.
    pub value: BigRational,
}

pub enum Elimination {
    Reduced(Reduced),
    Inconsistent(Inconsistent),
}

struct Row {
    coef: Sparse,
    rhs: BigRational,
    comb: Sparse,
}

fn axpy(dst: &mut Sparse, a: &BigRational, src: &Sparse) {
    for (k, v) in src {
        let e = dst.entry(*k).or_insert_with(BigRational::zero);
        *e += a * v;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

pub fn eliminate(program: &FeasibilityProgram) -> Elimination {
    let nv = program.variables.len();
    let mut rows: Vec<Row> = Vec::new();
    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut row_of_pivot: HashMap<usize, usize> = HashMap::new();

    for (ci, c) in program.constraints.iter().enumerate() {
        if c.sense != Sense::Eq {
            continue;
        }
        let mut r = Row {
            coef: c.terms.iter().filter(|(_, a)| !a.is_zero()).cloned().collect(),
            rhs: c.rhs.clone(),
            comb: [(ci, BigRational::one())].into_iter().collect(),
        };
        let hits: Vec<(usize, BigRational)> =
            r.coef.iter().filter(|(k, _)| row_of_pivot.contains_key(k)).map(|(k, v)| (*k, v.clone())).collect();
        for (k, _) in hits {
            let Some(a) = r.coef.get(&k).cloned() else { continue };
            let p = &rows[row_of_pivot[&k]];
            let neg = -a;
            axpy(&mut r.coef, &neg, &p.coef);
            r.rhs += &neg * &p.rhs;
            axpy(&mut r.comb, &neg, &p.comb);
        }
        if r.coef.is_empty() {
            if !r.rhs.is_zero() {
                return Elimination::Inconsistent(Inconsistent {
                    multipliers: r.comb.into_iter().collect(),
                    value: r.rhs,
                });
            }
            continue;
        }
        // Pivot on the highest-index variable so later-registered variables
        // are expressed through earlier ones.
        let (&piv, pv) = r.coef.iter().next_back().unwrap();
        let inv = pv.recip();
        r.coef.values_mut().for_each(|v| *v *= &inv);
        r.rhs *= &inv;
        r.comb.values_mut().for_each(|v| *v *= &inv);
        for q in rows.iter_mut() {
            if let Some(a) = q.coef.get(&piv).cloned() {
                let neg = -a;
                axpy(&mut q.coef, &neg, &r.coef);
                q.rhs += &neg * &r.rhs;
                axpy(&mut q.comb, &neg, &r.comb);
            }
        }
        row_of_pivot.insert(piv, rows.len());
        pivot_of_row.push(piv);
        rows.push(r);
    }

    let free: Vec<usize> = (0..nv).filter(|k| !row_of_pivot.contains_key(k)).collect();
    let col_of: HashMap<usize, usize> = free.iter().enumerate().map(|(j, &k)| (k, j)).collect();
    let mut z0 = vec![BigRational::zero(); nv];
    let mut substitution: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); nv];
    for (k, &j) in &col_of {
        substitution[*k] = vec![(j, BigRational::one())];
    }
    for (r, &piv) in rows.iter().zip(&pivot_of_row) {
        z0[piv] = r.rhs.clone();
        substitution[piv] = r.coef.iter().filter(|(k, _)| **k != piv).map(|(k, v)| (col_of[k], -v.clone())).collect();
    }

    let subst_terms = |terms: &[(usize, BigRational)]| -> (Sparse, BigRational) {
        let mut out = Sparse::new();
        let mut constant = BigRational::zero();
        for (k, a) in terms {
            constant += a * &z0[*k];
            for (j, b) in &substitution[*k] {
                let e = out.entry(*j).or_insert_with(BigRational::zero);
                *e += a * b;
            }
        }
        out.retain(|_, v| !v.is_zero());
        (out, constant)
    };

    let linear = program.linear_rows_with_bounds();
    let mut reduced_rows = Vec::new();
    let mut seen: HashMap<(Vec<(usize, BigRational)>, BigRational), ()> = HashMap::new();
    for (src, c) in linear.iter().enumerate() {
        if c.sense != Sense::Ge {
            continue;
        }
        let (terms, k) = subst_terms(&c.terms);
        let constant = k - &c.rhs;
        // Rows left without variables are kept only when violated; they then
        // carry the infeasibility.
        if terms.is_empty() && !constant.is_negative() {
            continue;
        }
        let terms: Vec<(usize, BigRational)> = terms.into_iter().collect();
        if seen.insert((terms.clone(), constant.clone()), ()).is_some() {
            continue;
        }
        reduced_rows.push(ReducedRow { source: src, terms, constant });
    }

    let mut blocks = Vec::new();
    for (bi, b) in program.blocks.iter().enumerate() {
        let mut constant = vec![vec![BigRational::zero(); b.dim]; b.dim];
        let mut per_var: BTreeMap<usize, Vec<(usize, usize, BigRational)>> = BTreeMap::new();
        for e in &b.entries {
            let (terms, k) = subst_terms(&e.terms);
            let v = k + &e.constant;
            constant[e.row][e.col] = v.clone();
            constant[e.col][e.row] = v;
            for (j, a) in terms {
                per_var.entry(j).or_default().push((e.row, e.col, a));
            }
        }
        blocks.push(ReducedBlock {
            source: bi,
            dim: b.dim,
            constant,
            coefs: per_var.into_iter().collect(),
            congruence: b.congruence.clone(),
        });
    }

    // Single-variable rows tighten the box of each reduced coordinate.
    let mut lower: Vec<Option<BigRational>> = free.iter().map(|&k| program.variables[k].lower.clone()).collect();
    let mut upper: Vec<Option<BigRational>> = free.iter().map(|&k| program.variables[k].upper.clone()).collect();
    for row in &reduced_rows {
        if let [(j, a)] = row.terms.as_slice() {
            let v = -&row.constant / a;
            if a.is_positive() {
                if lower[*j].as_ref().is_none_or(|l| v > *l) {
                    lower[*j] = Some(v);
                }
            } else if upper[*j].as_ref().is_none_or(|u| v < *u) {
                upper[*j] = Some(v);
            }
        }
    }
    Elimination::Reduced(Reduced {
        lower,
        upper,
        free,
        z0,
        substitution,
        rows: reduced_rows,
        blocks,
    })
}

/// Checks an equality-combination certificate against the program.
pub fn verify_inconsistent(program: &FeasibilityProgram, cert: &Inconsistent) -> bool {
    let mut coef = Sparse::new();
    let mut rhs = BigRational::zero();
    for (ci, m) in &cert.multipliers {
        let Some(c) = program.constraints.get(*ci) else { return false };
        if c.sense != Sense::Eq {
            return false;
        }
        let row: Sparse = c.terms.iter().cloned().collect();
        axpy(&mut coef, m, &row);
        rhs += m * &c.rhs;
    }
    coef.is_empty() && !rhs.is_zero() && rhs == cert.value
}
