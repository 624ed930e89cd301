//! Feasibility programs: linear constraints plus PSD block constraints over a
//! registry of named scalar variables.

use crate::error::{Error, Result};
use crate::exact::ratio_to_f64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: Option<BigRational>,
    /// An upper bound implied by the other constraints, made explicit so that
    /// infeasibility certificates can bound residual terms.
    pub upper: Option<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    /// `Σ a_k z_k = rhs`
    Eq,
    /// `Σ a_k z_k ≥ rhs`
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub label: String,
    pub terms: Vec<(usize, BigRational)>,
    pub sense: Sense,
    pub rhs: BigRational,
}

impl LinearConstraint {
    pub fn eval(&self, z: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (k, a)| acc + a * &z[*k])
    }

    /// Violation at an exact point: `|lhs - rhs|` for equalities,
    /// `max(0, rhs - lhs)` for inequalities.
    pub fn violation(&self, z: &[BigRational]) -> BigRational {
        let d = self.eval(z) - &self.rhs;
        match self.sense {
            Sense::Eq => d.abs(),
            Sense::Ge => {
                if d.is_negative() {
                    -d
                } else {
                    BigRational::zero()
                }
            }
        }
    }

    pub fn eval_f64(&self, z: &[f64]) -> f64 {
        self.terms.iter().map(|(k, a)| ratio_to_f64(a) * z[*k]).sum()
    }
}

/// Entry `(row, col)` (`row ≤ col`) of a symmetric block: `constant + Σ a_k z_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockEntry {
    pub row: usize,
    pub col: usize,
    pub terms: Vec<(usize, BigRational)>,
    pub constant: BigRational,
}

/// `F(z) ⪰ 0` for a symmetric `dim × dim` affine matrix `F`.
///
/// `entries` describe an exact matrix `E(z)`; the solver works with the
/// congruent matrix `S E(z) S`, `S = diag(congruence)`, which is better scaled.
/// Both have the same inertia.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdConstraint {
    pub label: String,
    pub dim: usize,
    pub entries: Vec<BlockEntry>,
    pub congruence: Vec<f64>,
}

impl PsdConstraint {
    /// Solver-scale matrix at a float point.
    pub fn eval_f64(&self, z: &[f64]) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            let v = ratio_to_f64(&e.constant) + e.terms.iter().map(|(k, a)| ratio_to_f64(a) * z[*k]).sum::<f64>();
            let v = v * self.congruence[e.row] * self.congruence[e.col];
            m[(e.row, e.col)] = v;
            m[(e.col, e.row)] = v;
        }
        m
    }

    /// Exact matrix `E(z)` as rows.
    pub fn eval_exact(&self, z: &[BigRational]) -> Vec<Vec<BigRational>> {
        let mut m = vec![vec![BigRational::zero(); self.dim]; self.dim];
        for e in &self.entries {
            let v = e.terms.iter().fold(e.constant.clone(), |acc, (k, a)| acc + a * &z[*k]);
            m[e.row][e.col] = v.clone();
            m[e.col][e.row] = v;
        }
        m
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeasibilityProgram {
    pub name: String,
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    pub blocks: Vec<PsdConstraint>,
}

impl FeasibilityProgram {
    pub fn new(name: impl Into<String>) -> Self {
        FeasibilityProgram { name: name.into(), ..Default::default() }
    }

    /// Registers a nonnegative variable and returns its index.
    pub fn add_var(&mut self, name: impl Into<String>, upper: Option<BigRational>) -> usize {
        self.variables.push(Variable { name: name.into(), lower: Some(BigRational::zero()), upper });
        self.variables.len() - 1
    }

    pub fn add_free_var(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(Variable { name: name.into(), lower: None, upper: None });
        self.variables.len() - 1
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Adds `Σ terms (sense) rhs`, merging repeated variables and dropping zero
    /// coefficients.
    pub fn add_constraint(&mut self, label: impl Into<String>, terms: Vec<(usize, BigRational)>, sense: Sense, rhs: BigRational) {
        let terms = merge_terms(terms);
        self.constraints.push(LinearConstraint { label: label.into(), terms, sense, rhs });
    }

    pub fn add_block(&mut self, block: PsdConstraint) {
        self.blocks.push(block);
    }

    pub fn is_lp(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn equality_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.sense == Sense::Eq).count()
    }

    pub fn inequality_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.sense == Sense::Ge).count()
    }

    /// Checks that every constraint references registered variables and that
    /// blocks are well formed.
    pub fn validate(&self) -> Result<()> {
        let nv = self.variables.len();
        for c in &self.constraints {
            if let Some((k, _)) = c.terms.iter().find(|(k, _)| *k >= nv) {
                return Err(Error::InvalidParameters(format!("constraint {} uses unknown variable {k}", c.label)));
            }
        }
        for b in &self.blocks {
            if b.congruence.len() != b.dim || b.congruence.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
                return Err(Error::InvalidParameters(format!("block {} has an invalid congruence scaling", b.label)));
            }
            for e in &b.entries {
                if e.row > e.col || e.col >= b.dim {
                    return Err(Error::InvalidParameters(format!("block {} entry ({}, {}) out of range", b.label, e.row, e.col)));
                }
                if let Some((k, _)) = e.terms.iter().find(|(k, _)| *k >= nv) {
                    return Err(Error::InvalidParameters(format!("block {} uses unknown variable {k}", b.label)));
                }
            }
        }
        Ok(())
    }

    /// Bound rows `z_k ≥ lower`, `-z_k ≥ -upper` followed by the explicit
    /// constraints, all as plain linear constraints.
    pub fn linear_rows_with_bounds(&self) -> Vec<LinearConstraint> {
        let mut rows = self.constraints.clone();
        for (k, v) in self.variables.iter().enumerate() {
            if let Some(l) = &v.lower {
                rows.push(LinearConstraint {
                    label: format!("{} >= lower", v.name),
                    terms: vec![(k, BigRational::from_integer(1.into()))],
                    sense: Sense::Ge,
                    rhs: l.clone(),
                });
            }
            if let Some(u) = &v.upper {
                rows.push(LinearConstraint {
                    label: format!("{} <= upper", v.name),
                    terms: vec![(k, BigRational::from_integer((-1).into()))],
                    sense: Sense::Ge,
                    rhs: -u.clone(),
                });
            }
        }
        rows
    }

    /// Largest violation of the linear constraints and bounds at an exact point.
    pub fn max_linear_violation(&self, z: &[BigRational]) -> BigRational {
        self.linear_rows_with_bounds().iter().map(|c| c.violation(z)).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
    }
}

pub(crate) fn merge_terms(terms: Vec<(usize, BigRational)>) -> Vec<(usize, BigRational)> {
    let mut terms = terms;
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(usize, BigRational)> = Vec::with_capacity(terms.len());
    for (k, a) in terms {
        match out.last_mut() {
            Some((j, b)) if *j == k => *b += a,
            _ => out.push((k, a)),
        }
    }
    out.retain(|(_, a)| !a.is_zero());
    out
}
