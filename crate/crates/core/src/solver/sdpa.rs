//! SDPA sparse format (`.dat-s`).
//!
//! The problem is `Σ_i z_i F_i - F_0 ⪰ 0` with a zero objective. PSD blocks
//! come first in program order, followed by one diagonal block holding the
//! linear rows: explicit constraints (equalities as a `row, -row` pair) and
//! then variable bounds. Coefficients are the exact, unscaled block entries.

use super::program::{FeasibilityProgram, LinearConstraint, Sense};
use crate::error::{Error, Result};
use crate::exact::{f64_to_ratio, ratio_to_f64};
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// A parsed or generated SDPA problem with float data.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaProblem {
    pub m: usize,
    /// Negative sizes mark diagonal blocks.
    pub block_sizes: Vec<i64>,
    pub objective: Vec<f64>,
    /// `(matno, blkno, i, j) -> value`, all 1-based except `matno` (0 = `F_0`).
    pub entries: BTreeMap<(usize, usize, usize, usize), f64>,
}

fn num(v: &BigRational) -> f64 {
    ratio_to_f64(v)
}

fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

impl SdpaProblem {
    pub fn from_program(program: &FeasibilityProgram) -> Self {
        let m = program.variables.len();
        let mut entries = BTreeMap::new();
        let mut put = |key: (usize, usize, usize, usize), v: f64| {
            if v != 0.0 {
                *entries.entry(key).or_insert(0.0) += v;
            }
        };
        let mut block_sizes = Vec::new();
        for (bi, b) in program.blocks.iter().enumerate() {
            block_sizes.push(b.dim as i64);
            for e in &b.entries {
                let (i, j) = (e.row + 1, e.col + 1);
                put((0, bi + 1, i, j), -num(&e.constant));
                for (k, a) in &e.terms {
                    put((k + 1, bi + 1, i, j), num(a));
                }
            }
        }
        let rows = lp_rows(program);
        if !rows.is_empty() {
            let blk = program.blocks.len() + 1;
            block_sizes.push(-(rows.len() as i64));
            for (r, row) in rows.iter().enumerate() {
                put((0, blk, r + 1, r + 1), num(&row.rhs));
                for (k, a) in &row.terms {
                    put((k + 1, blk, r + 1, r + 1), num(a));
                }
            }
        }
        SdpaProblem { m, block_sizes, objective: vec![0.0; m], entries }
    }

    pub fn to_string_sdpa(&self, title: &str) -> String {
        let mut s = String::new();
        for line in title.lines() {
            let _ = writeln!(s, "* {line}");
        }
        let _ = writeln!(s, "{}", self.m);
        let _ = writeln!(s, "{}", self.block_sizes.len());
        let sizes: Vec<String> = self.block_sizes.iter().map(|b| b.to_string()).collect();
        let _ = writeln!(s, "{}", sizes.join(" "));
        let obj: Vec<String> = self.objective.iter().map(|&v| fmt_num(v)).collect();
        let _ = writeln!(s, "{}", obj.join(" "));
        for ((mat, blk, i, j), v) in &self.entries {
            let _ = writeln!(s, "{mat} {blk} {i} {j} {}", fmt_num(*v));
        }
        s
    }

    /// Tolerant reader: leading `*`/`"` comment lines, `{ } ( ) ,` in the
    /// header, and `=` signs are ignored; repeated entries are summed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('*') && !t.starts_with('"')
        });
        let clean = |l: &str| l.replace(['{', '}', '(', ')', ',', '='], " ");
        let mut tokens_needed: Option<usize> = None;
        // m, nBLOCK, sizes, objective: read tokens until all header fields are present.
        let mut toks: Vec<(usize, String)> = Vec::new();
        while tokens_needed.is_none_or(|n| toks.len() < n) {
            let Some((ln, l)) = lines.next() else {
                return Err(Error::Parse { line: text.lines().count(), message: "truncated SDPA header".into() });
            };
            for t in clean(l).split_whitespace() {
                toks.push((ln + 1, t.to_string()));
            }
            if toks.len() >= 2 && tokens_needed.is_none() {
                let m: usize = parse_tok(&toks[0])?;
                let nb: usize = parse_tok(&toks[1])?;
                tokens_needed = Some(2 + nb + m);
            }
        }
        let n_needed = tokens_needed.unwrap_or(0);
        if toks.len() > n_needed {
            let (ln, _) = &toks[n_needed];
            return Err(Error::Parse { line: *ln, message: "unexpected tokens after objective".into() });
        }
        let m: usize = parse_tok(&toks[0])?;
        let nb: usize = parse_tok(&toks[1])?;
        let block_sizes = toks[2..2 + nb].iter().map(parse_tok::<i64>).collect::<Result<Vec<_>>>()?;
        let objective = toks[2 + nb..2 + nb + m].iter().map(parse_tok::<f64>).collect::<Result<Vec<_>>>()?;
        let mut entries = BTreeMap::new();
        for (ln, l) in lines {
            let l = clean(l);
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 5 {
                return Err(Error::Parse { line: ln + 1, message: format!("expected 5 fields, found {}", f.len()) });
            }
            let p = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse { line: ln + 1, message: e.to_string() });
            let (mat, blk, mut i, mut j) = (p(f[0])?, p(f[1])?, p(f[2])?, p(f[3])?);
            let v: f64 = f[4].parse().map_err(|_| Error::Parse { line: ln + 1, message: format!("bad value {}", f[4]) })?;
            if mat > m || blk == 0 || blk > nb {
                return Err(Error::Parse { line: ln + 1, message: "matrix or block index out of range".into() });
            }
            let size = block_sizes[blk - 1].unsigned_abs() as usize;
            if i == 0 || j == 0 || i > size || j > size {
                return Err(Error::Parse { line: ln + 1, message: "entry index out of range".into() });
            }
            if i > j {
                std::mem::swap(&mut i, &mut j);
            }
            if block_sizes[blk - 1] < 0 && i != j {
                return Err(Error::Parse { line: ln + 1, message: "off-diagonal entry in a diagonal block".into() });
            }
            *entries.entry((mat, blk, i, j)).or_insert(0.0) += v;
        }
        Ok(SdpaProblem { m, block_sizes, objective, entries })
    }

    /// Rebuilds linear rows from the diagonal block, merging `row, -row`
    /// pairs back into equalities. Variables are named `z{k}` and unbounded;
    /// bounds come back as rows.
    pub fn linear_rows(&self) -> Vec<LinearConstraint> {
        let Some(blk) = self.block_sizes.iter().position(|&s| s < 0) else { return Vec::new() };
        let n = self.block_sizes[blk].unsigned_abs() as usize;
        let mut terms: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); n];
        let mut rhs = vec![BigRational::zero(); n];
        for ((mat, b, i, _), v) in &self.entries {
            if *b != blk + 1 {
                continue;
            }
            if *mat == 0 {
                rhs[i - 1] = f64_to_ratio(*v);
            } else {
                terms[i - 1].push((mat - 1, f64_to_ratio(*v)));
            }
        }
        let mut out = Vec::new();
        let mut r = 0;
        while r < n {
            let paired = r + 1 < n
                && !terms[r].is_empty()
                && rhs[r + 1] == -rhs[r].clone()
                && terms[r].len() == terms[r + 1].len()
                && terms[r].iter().zip(&terms[r + 1]).all(|(a, b)| a.0 == b.0 && a.1 == -b.1.clone());
            out.push(LinearConstraint {
                label: format!("row {}", r + 1),
                terms: terms[r].clone(),
                sense: if paired { Sense::Eq } else { Sense::Ge },
                rhs: rhs[r].clone(),
            });
            r += if paired { 2 } else { 1 };
        }
        out
    }
}

fn parse_tok<T: std::str::FromStr>(t: &(usize, String)) -> Result<T> {
    t.1.parse::<T>().map_err(|_| Error::Parse { line: t.0, message: format!("bad header value {}", t.1) })
}

/// Linear rows as written to the diagonal block.
fn lp_rows(program: &FeasibilityProgram) -> Vec<LinearConstraint> {
    let mut rows = Vec::new();
    for c in program.linear_rows_with_bounds() {
        match c.sense {
            Sense::Ge => rows.push(c),
            Sense::Eq => {
                let neg = LinearConstraint {
                    label: c.label.clone(),
                    terms: c.terms.iter().map(|(k, a)| (*k, -a.clone())).collect(),
                    sense: Sense::Ge,
                    rhs: -c.rhs.clone(),
                };
                rows.push(LinearConstraint { sense: Sense::Ge, ..c });
                rows.push(neg);
            }
        }
    }
    rows
}

/// Rows of a program in the form [`SdpaProblem::linear_rows`] returns, for
/// round-trip comparisons.
pub fn expected_linear_rows(program: &FeasibilityProgram) -> Vec<LinearConstraint> {
    program
        .linear_rows_with_bounds()
        .into_iter()
        .map(|c| LinearConstraint {
            terms: c.terms.iter().map(|(k, a)| (*k, f64_to_ratio(ratio_to_f64(a)))).collect(),
            rhs: f64_to_ratio(ratio_to_f64(&c.rhs)),
            ..c
        })
        .collect()
}

pub fn write_sdpa(program: &FeasibilityProgram, path: &Path) -> Result<()> {
    let text = SdpaProblem::from_program(program).to_string_sdpa(&program.name);
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_sdpa(path: &Path) -> Result<SdpaProblem> {
    SdpaProblem::parse(&std::fs::read_to_string(path)?)
}
