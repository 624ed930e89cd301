//! Block diagonalization of the quaternary Terwilliger algebra.
//!
//! The algebra spanned by the pair-relation matrices `M_{i,j}^{t,p}` on `E^n`
//! decomposes into blocks indexed by `(a, k)` with `0 ≤ a ≤ k ≤ n + a - k`, of
//! size `n + a - 2k + 1`. A matrix `Σ x_{i,j}^{t,p} M_{i,j}^{t,p}` is PSD iff
//! every block `(Σ_{t,p} α(i,j,p,t,a,k) x_{i,j}^{t,p})_{i,j}` is PSD.
//!
//! Blocks here are rescaled by `diag(α(i,i,i,i,a,k))^{-1/2}` on both sides.
//! That is a congruence, so PSD-ness is unchanged, and it makes the block
//! eigenvalues equal to eigenvalues of the full `4^n × 4^n` matrix.

use crate::error::{Error, Result};
use crate::exact::{ratio_to_f64, Scalar};
use crate::transforms::{binomial, valid_tuple};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// The valid tuples `(i, j, t, p)`, `0 ≤ p ≤ t ≤ min(i, j)`, `i + j ≤ n + t`,
/// in lexicographic order. Positions in this order are the canonical variable
/// indices everywhere in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleDomain {
    n: usize,
    tuples: Vec<(usize, usize, usize, usize)>,
    lookup: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl TupleDomain {
    pub fn new(n: usize) -> Self {
        let w = n + 1;
        let mut tuples = Vec::new();
        let mut lookup = vec![NONE; w * w * w * w];
        for i in 0..=n {
            for j in 0..=n {
                for t in 0..=i.min(j) {
                    for p in 0..=t {
                        if valid_tuple(i, j, t, p, n) {
                            lookup[((i * w + j) * w + t) * w + p] = tuples.len() as u32;
                            tuples.push((i, j, t, p));
                        }
                    }
                }
            }
        }
        TupleDomain { n, tuples, lookup }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index(&self, i: usize, j: usize, t: usize, p: usize) -> Option<usize> {
        let n = self.n;
        if i > n || j > n || t > n || p > n {
            return None;
        }
        let w = n + 1;
        match self.lookup[((i * w + j) * w + t) * w + p] {
            NONE => None,
            k => Some(k as usize),
        }
    }

    pub fn tuple(&self, k: usize) -> (usize, usize, usize, usize) {
        self.tuples[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.tuples.iter().copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatKind {
    /// Triple counts `σ, μ, ν, η`.
    Raw,
    /// `x, u, v, y`.
    Normalized,
}

/// Values on the tuple domain of length `n`, in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadStats {
    n: usize,
    kind: StatKind,
    values: Vec<BigRational>,
}

impl QuadStats {
    pub fn from_counts(n: usize, counts: &[u64]) -> Self {
        QuadStats {
            n,
            kind: StatKind::Raw,
            values: counts.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
        }
    }

    pub fn normalized(n: usize, values: Vec<BigRational>) -> Self {
        assert_eq!(values.len(), TupleDomain::new(n).len(), "one value per valid tuple");
        QuadStats { n, kind: StatKind::Normalized, values }
    }

    pub fn zeros(n: usize, kind: StatKind) -> Self {
        QuadStats { n, kind, values: vec![BigRational::zero(); TupleDomain::new(n).len()] }
    }

    /// Values given as a function of the tuple.
    pub fn from_fn(n: usize, kind: StatKind, f: impl Fn(usize, usize, usize, usize) -> BigRational) -> Self {
        let dom = TupleDomain::new(n);
        QuadStats { n, kind, values: dom.iter().map(|(i, j, t, p)| f(i, j, t, p)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> StatKind {
        self.kind
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize, t: usize, p: usize) -> Option<BigRational> {
        TupleDomain::new(self.n).index(i, j, t, p).map(|k| self.values[k].clone())
    }

    pub fn total(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(ratio_to_f64).collect()
    }
}

/// Exact `coeff · 3^{half_exp / 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alpha {
    pub coeff: i128,
    pub half_exp: u32,
}

impl Alpha {
    pub fn value(&self) -> f64 {
        self.coeff as f64 * 3f64.powf(self.half_exp as f64 / 2.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }
}

/// `β_{i,j,k}^{m,t} = Σ_u (-1)^{t-u} C(u,t) C(m-2k, m-k-u) C(m-k-u, i-u) C(m-k-u, j-u)`.
pub fn beta(i: i64, j: i64, k: i64, m: i64, t: i64) -> i128 {
    let mut s = 0i128;
    for u in 0..=m.max(0) {
        let term = binomial(u, t) * binomial(m - 2 * k, m - k - u) * binomial(m - k - u, i - u) * binomial(m - k - u, j - u);
        if (t - u).rem_euclid(2) == 0 {
            s += term
        } else {
            s -= term
        }
    }
    s
}

/// Block coefficient `α(i,j,p,t,a,k)` for `q = 4`, before rescaling.
///
/// The factor `3^{(i+j)/2 - t}` is a half-integer power when `i + j` is odd;
/// the positive root is used.
pub fn alpha_coeff(i: usize, j: usize, p: usize, t: usize, a: usize, k: usize, n: usize) -> Alpha {
    let zero = Alpha { coeff: 0, half_exp: 0 };
    if !valid_tuple(i, j, t, p, n) || !valid_block(a, k, n) || i < a || j < a || t < a {
        return zero;
    }
    let (i, j, p, t, a, k, n) = (i as i64, j as i64, p as i64, t as i64, a as i64, k as i64, n as i64);
    let b = beta(i - a, j - a, k - a, n - a, t - a);
    if b == 0 {
        return zero;
    }
    let mut s = 0i128;
    for g in 0..=p {
        let e = t - a - p + g;
        if e < 0 {
            continue;
        }
        let term = binomial(a, g) * binomial(t - a, p - g) * 2i128.pow(e as u32);
        if (a - g) % 2 == 0 {
            s += term
        } else {
            s -= term
        }
    }
    Alpha { coeff: b * s, half_exp: (i + j - 2 * t) as u32 }
}

pub fn valid_block(a: usize, k: usize, n: usize) -> bool {
    a <= k && 2 * k <= n + a
}

/// Block labels `(a, k)` in canonical order (`k` ascending, then `a`).
pub fn block_labels(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..=n {
        for a in 0..=k {
            if valid_block(a, k, n) {
                out.push((a, k));
            }
        }
    }
    out
}

/// One entry term of a block: `coef · z[tuple]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTerm {
    pub tuple: usize,
    /// Coefficient in the rescaled block.
    pub coef: f64,
    /// Integer coefficient of a congruent block, `c · 3^{n-t}` for
    /// `α = c · 3^{(i+j)/2 - t}`.
    pub int_coef: i128,
}

/// Affine structure of block `(a, k)`: entry `(r, s)` (row/column offsets
/// from `k`, upper triangle `r ≤ s`) is `Σ terms`.
#[derive(Clone, Debug)]
pub struct BlockSpec {
    pub a: usize,
    pub k: usize,
    pub dim: usize,
    /// `entries[r][s - r]` for `r ≤ s`.
    pub entries: Vec<Vec<Vec<BlockTerm>>>,
}

impl BlockSpec {
    pub fn entry(&self, r: usize, s: usize) -> &[BlockTerm] {
        let (r, s) = if r <= s { (r, s) } else { (s, r) };
        &self.entries[r][s - r]
    }

    /// Diagonal `S` with `coef = S_r · int_coef · S_s` for every term of
    /// entry `(r, s)`: `S_r = 3^{(i-n)/2} / sqrt(α(i,i,i,i,a,k))`, `i = k + r`.
    pub fn congruence(&self, n: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|r| {
                let i = self.k + r;
                let d = alpha_coeff(i, i, i, i, self.a, self.k, n).coeff as f64;
                3f64.powf((i as f64 - n as f64) / 2.0) / d.sqrt()
            })
            .collect()
    }
}

/// Block specs for all `(a, k)` at length `n`.
pub fn block_specs(n: usize) -> Vec<BlockSpec> {
    let dom = TupleDomain::new(n);
    block_labels(n)
        .into_iter()
        .map(|(a, k)| {
            let dim = n + a - 2 * k + 1;
            let diag: Vec<f64> = (0..dim)
                .map(|r| {
                    let i = k + r;
                    let d = alpha_coeff(i, i, i, i, a, k, n);
                    debug_assert!(d.half_exp == 0 && d.coeff > 0);
                    d.coeff as f64
                })
                .collect();
            let entries = (0..dim)
                .map(|r| {
                    (r..dim)
                        .map(|s| {
                            let (i, j) = (k + r, k + s);
                            let mut terms = Vec::new();
                            for t in 0..=i.min(j) {
                                for p in 0..=t {
                                    let Some(idx) = dom.index(i, j, t, p) else { continue };
                                    let al = alpha_coeff(i, j, p, t, a, k, n);
                                    if al.is_zero() {
                                        continue;
                                    }
                                    terms.push(BlockTerm {
                                        tuple: idx,
                                        coef: al.value() / (diag[r] * diag[s]).sqrt(),
                                        int_coef: al.coeff * 3i128.pow((n - t) as u32),
                                    });
                                }
                            }
                            terms
                        })
                        .collect()
                })
                .collect();
            BlockSpec { a, k, dim, entries }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Block {
    pub a: usize,
    pub k: usize,
    pub matrix: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct BlockFamily {
    pub n: usize,
    pub blocks: Vec<Block>,
}

impl BlockFamily {
    /// Smallest eigenvalue over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.matrix.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(|b| b.matrix.clone().symmetric_eigenvalues().iter().copied().collect::<Vec<_>>()).collect()
    }
}

/// Block images of `Σ x_{i,j}^{t,p} M_{i,j}^{t,p}` for real values on the tuple domain.
pub fn blocks_from_values(n: usize, x: &[f64]) -> Result<BlockFamily> {
    let dom_len = TupleDomain::new(n).len();
    if x.len() != dom_len {
        return Err(Error::Shape(format!("{} values for {dom_len} tuples", x.len())));
    }
    let blocks = block_specs(n)
        .into_iter()
        .map(|spec| {
            let mut m = DMatrix::<f64>::zeros(spec.dim, spec.dim);
            let mut lower = DMatrix::<f64>::zeros(spec.dim, spec.dim);
            for r in 0..spec.dim {
                for s in r..spec.dim {
                    let v: f64 = spec.entry(r, s).iter().map(|t| t.coef * x[t.tuple]).sum();
                    m[(r, s)] = v;
                    m[(s, r)] = v;
                    if r != s {
                        lower[(s, r)] = lower_entry(n, &spec, s, r, x);
                    }
                }
            }
            // The spec only stores the upper triangle; compare with the
            // directly computed lower triangle to catch asymmetric input.
            for r in 0..spec.dim {
                for s in 0..r {
                    let scale = m[(r, s)].abs().max(1.0);
                    if (lower[(r, s)] - m[(r, s)]).abs() > 1e-9 * scale {
                        return Err(Error::Internal(format!(
                            "block ({}, {}) asymmetric at ({r}, {s}): {} vs {}",
                            spec.a, spec.k, lower[(r, s)], m[(r, s)]
                        )));
                    }
                }
            }
            Ok(Block { a: spec.a, k: spec.k, matrix: m })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockFamily { n, blocks })
}

fn lower_entry(n: usize, spec: &BlockSpec, r: usize, s: usize, x: &[f64]) -> f64 {
    let dom = TupleDomain::new(n);
    let (i, j) = (spec.k + r, spec.k + s);
    let d = |q: usize| alpha_coeff(spec.k + q, spec.k + q, spec.k + q, spec.k + q, spec.a, spec.k, n).coeff as f64;
    let mut v = 0.0;
    for t in 0..=i.min(j) {
        for p in 0..=t {
            if let Some(idx) = dom.index(i, j, t, p) {
                v += alpha_coeff(i, j, p, t, spec.a, spec.k, n).value() * x[idx];
            }
        }
    }
    v / (d(r) * d(s)).sqrt()
}

/// Block images of the matrix with coefficients `x`.
pub fn blocks_from_quadstats(x: &QuadStats) -> Result<BlockFamily> {
    blocks_from_values(x.n(), &x.to_f64())
}

/// `(i, j, t, p)` relation of two phase-free Paulis given as bit pairs.
pub fn relation(a: (u64, u64), b: (u64, u64)) -> (usize, usize, usize, usize) {
    let sa = a.0 | a.1;
    let sb = b.0 | b.1;
    let both = sa & sb;
    let differ = (a.0 ^ b.0) | (a.1 ^ b.1);
    (sa.count_ones() as usize, sb.count_ones() as usize, both.count_ones() as usize, (both & !differ).count_ones() as usize)
}

pub const EXPLICIT_MAX_N: usize = 3;

/// Explicit `4^n × 4^n` 0/1 matrix `M_{i,j}^{t,p}`, rows and columns indexed by
/// `x + 2^n z` over the symplectic bits. Only for `n ≤ 3`.
pub fn build_m_explicit(n: usize, i: usize, j: usize, t: usize, p: usize) -> Result<DMatrix<f64>> {
    if n > EXPLICIT_MAX_N {
        return Err(Error::SizeCap { what: "explicit Terwilliger matrix length".into(), needed: n as u128, limit: EXPLICIT_MAX_N as u128 });
    }
    let dim = 1usize << (2 * n);
    let bits = |k: usize| ((k & ((1 << n) - 1)) as u64, (k >> n) as u64);
    Ok(DMatrix::from_fn(dim, dim, |r, c| if relation(bits(r), bits(c)) == (i, j, t, p) { 1.0 } else { 0.0 }))
}

/// Entry `(r, s)` of the integer-coefficient congruent block.
pub fn int_block_entry<T: Scalar>(spec: &BlockSpec, r: usize, s: usize, x: &[T]) -> T {
    spec.entry(r, s).iter().fold(T::zero(), |acc, t| acc + T::from_i128(t.int_coef) * x[t.tuple].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_sizes_match_block_dimensions() {
        for n in 0..=12 {
            let dom = TupleDomain::new(n);
            let total: usize = block_labels(n).iter().map(|&(a, k)| (n + a - 2 * k + 1).pow(2)).sum();
            assert_eq!(total, dom.len(), "n = {n}");
        }
        assert_eq!(TupleDomain::new(1).iter().collect::<Vec<_>>(), vec![(0, 0, 0, 0), (0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 1, 0), (1, 1, 1, 1)]);
    }

    #[test]
    fn rescaling_diagonal_is_positive() {
        for n in 0..=12 {
            for (a, k) in block_labels(n) {
                for i in k..=n + a - k {
                    let d = alpha_coeff(i, i, i, i, a, k, n);
                    assert!(d.coeff > 0 && d.half_exp == 0, "n={n} a={a} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn alpha_at_a_k_zero() {
        let n = 4;
        for (i, j, t, p) in TupleDomain::new(n).iter() {
            let al = alpha_coeff(i, j, p, t, 0, 0, n);
            let expect = beta(i as i64, j as i64, 0, n as i64, t as i64) * binomial(t as i64, p as i64) * 2i128.pow((t - p) as u32);
            assert_eq!(al.coeff, expect);
        }
    }

    #[test]
    fn beta_matches_direct_sum() {
        // β_{0,0,0}^{m,0} = Σ_u (-1)^u C(m, m-u) C(m-u, -u)... only u = 0 survives.
        for m in 0..8 {
            assert_eq!(beta(0, 0, 0, m, 0), 1);
        }
    }

    #[test]
    fn zero_values_give_zero_blocks() {
        let fam = blocks_from_quadstats(&QuadStats::zeros(3, StatKind::Normalized)).unwrap();
        assert!(fam.blocks.iter().all(|b| b.matrix.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn explicit_matrices_partition_all_ones() {
        let n = 1;
        let sum = TupleDomain::new(n).iter().map(|(i, j, t, p)| build_m_explicit(n, i, j, t, p).unwrap()).fold(DMatrix::zeros(4, 4), |a, b| a + b);
        assert!(sum.iter().all(|&v| v == 1.0));
        assert!(build_m_explicit(4, 0, 0, 0, 0).is_err());
    }
}
