//! Split enumerator grids.

use crate::error::{Error, Result};
use crate::exact::Scalar;
use num_rational::BigRational;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnumKind {
    A,
    B,
    D,
    /// Unscaled signed Kravchuk transform of `A` (shadow identities).
    Sh,
}

impl fmt::Display for EnumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnumKind::A => "A",
            EnumKind::B => "B",
            EnumKind::D => "D",
            EnumKind::Sh => "Sh",
        })
    }
}

/// `(n+1) × (c+1)` grid: entry `(i, j)` counts weight `i` on the `n` sender
/// qubits and `j` on the `c` receiver qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitEnumerator<T> {
    n: usize,
    c: usize,
    kind: EnumKind,
    grid: Vec<T>,
}

impl<T: Scalar> SplitEnumerator<T> {
    pub fn zeros(n: usize, c: usize, kind: EnumKind) -> Self {
        SplitEnumerator { n, c, kind, grid: vec![T::zero(); (n + 1) * (c + 1)] }
    }

    /// From rows `grid[i][j]`.
    pub fn from_rows(n: usize, c: usize, kind: EnumKind, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.len() != n + 1 || rows.iter().any(|r| r.len() != c + 1) {
            return Err(Error::Shape(format!("expected {}x{} grid", n + 1, c + 1)));
        }
        Ok(SplitEnumerator { n, c, kind, grid: rows.into_iter().flatten().collect() })
    }

    /// An unsplit enumerator as a `c = 0` grid.
    pub fn from_unsplit(kind: EnumKind, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Shape("empty enumerator".into()));
        }
        Ok(SplitEnumerator { n: values.len() - 1, c: 0, kind, grid: values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn kind(&self) -> EnumKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: EnumKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.grid[i * (self.c + 1) + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.grid[i * (self.c + 1) + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let k = i * (self.c + 1) + j;
        self.grid[k] = self.grid[k].clone() + v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.grid.chunks(self.c + 1).map(|r| r.to_vec()).collect()
    }

    /// Unsplit enumerator `X_k = Σ_{i+j=k} X_{i,j}`, length `n + c + 1`.
    pub fn unsplit(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.n + self.c + 1];
        for i in 0..=self.n {
            for j in 0..=self.c {
                out[i + j] = out[i + j].clone() + self.get(i, j).clone();
            }
        }
        out
    }

    /// The `j = 0` column `X_{i,0}`.
    pub fn sender_column(&self) -> Vec<T> {
        (0..=self.n).map(|i| self.get(i, 0).clone()).collect()
    }

    pub fn total(&self) -> T {
        self.grid.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn scaled(&self, s: &T) -> Self {
        SplitEnumerator { grid: self.grid.iter().map(|v| v.clone() * s.clone()).collect(), ..self.clone() }
    }

    pub fn to_f64(&self) -> SplitEnumerator<f64> {
        SplitEnumerator { n: self.n, c: self.c, kind: self.kind, grid: self.grid.iter().map(|v| v.to_f64()).collect() }
    }

    /// Largest absolute entrywise difference (shapes must agree).
    pub fn max_abs_diff<U: Scalar>(&self, other: &SplitEnumerator<U>) -> Result<f64> {
        if self.n != other.n || self.c != other.c {
            return Err(Error::Shape(format!("{}x{} vs {}x{}", self.n, self.c, other.n, other.c)));
        }
        Ok(self.grid.iter().zip(&other.grid).map(|(a, b)| (a.to_f64() - b.to_f64()).abs()).fold(0.0, f64::max))
    }

    pub fn check_shape(&self, n: usize, c: usize) -> Result<()> {
        if self.n != n || self.c != c {
            return Err(Error::Shape(format!("expected {}x{} grid, got {}x{}", n + 1, c + 1, self.n + 1, self.c + 1)));
        }
        Ok(())
    }
}

pub type ExactEnumerator = SplitEnumerator<BigRational>;
