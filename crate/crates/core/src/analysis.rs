//! Analysis of explicit codes.
//!
//! Two independent routes compute the same enumerators: a dense route over
//! the code's basis vectors (exponential in `n + c` but definitional) and a
//! combinatorial route over the CWS group and word operators (exact rational).
//!
//! Dense vectors use big-endian indexing: qubit `q` of an `N`-qubit state (the
//! `q`-th character of a Pauli string) is bit `N - 1 - q` of the basis index.

use crate::enumerator::{EnumKind, ExactEnumerator, SplitEnumerator};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::pauli::{PauliGroup, PauliOperator, PauliSet, Phase};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C64 = Complex64;

/// Size guards for the dense route.
#[derive(Clone, Copy, Debug)]
pub struct DenseLimits {
    /// Largest `n + c` for building dense states.
    pub max_dense_qubits: usize,
    /// Largest `n + c` for scans over all `4^{n+c}` Paulis.
    pub max_scan_qubits: usize,
}

impl Default for DenseLimits {
    fn default() -> Self {
        DenseLimits { max_dense_qubits: 14, max_scan_qubits: 10 }
    }
}

/// An EA-CWS code given by its CWS group `S` on `n + c` qubits and `M` word
/// operators on the first `n` qubits, the first one being the identity.
#[derive(Clone, Debug)]
pub struct CwsCode {
    n: usize,
    c: usize,
    stabilizer: PauliGroup,
    words: Vec<PauliOperator>,
}

impl CwsCode {
    pub fn new(n: usize, c: usize, stabilizer: PauliGroup, words: Vec<PauliOperator>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCode("n must be positive".into()));
        }
        if stabilizer.qubits() != n + c {
            return Err(Error::DimensionMismatch { left: stabilizer.qubits(), right: n + c });
        }
        if !stabilizer.is_stabilizer() {
            return Err(Error::NotStabilizer("CWS group must be abelian without -I".into()));
        }
        if stabilizer.rank() != n + c {
            return Err(Error::InvalidCode(format!(
                "CWS group has {} independent generators, a maximal group on {} qubits needs {}",
                stabilizer.rank(),
                n + c,
                n + c
            )));
        }
        let Some(first) = words.first() else {
            return Err(Error::InvalidCode("no word operators".into()));
        };
        if !first.is_identity_up_to_phase() {
            return Err(Error::InvalidCode(format!("first word must be the identity, got {first}")));
        }
        for w in &words {
            if w.qubits() != n {
                return Err(Error::DimensionMismatch { left: w.qubits(), right: n });
            }
        }
        for (a, w) in words.iter().enumerate() {
            for (b, v) in words.iter().enumerate().skip(a + 1) {
                if !w.commutes_unchecked(v) {
                    return Err(Error::InvalidCode(format!("words {a} ({w}) and {b} ({v}) anticommute")));
                }
                let prod = w.mul_unchecked(v).extend(c)?;
                if stabilizer.contains_up_to_phase(&prod) {
                    return Err(Error::InvalidCode(format!("words {a} ({w}) and {b} ({v}) give the same coset")));
                }
            }
        }
        Ok(CwsCode { n, c, stabilizer, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn stabilizer(&self) -> &PauliGroup {
        &self.stabilizer
    }

    pub fn words(&self) -> &[PauliOperator] {
        &self.words
    }

    pub fn word_set(&self) -> Result<PauliSet> {
        PauliSet::new(self.n, self.words.iter().copied())
    }

    /// Words extended by identity on the receiver qubits.
    pub fn extended_word_set(&self) -> Result<PauliSet> {
        let ext = self.words.iter().map(|w| w.extend(self.c)).collect::<Result<Vec<_>>>()?;
        PauliSet::new(self.n + self.c, ext)
    }

    pub fn isotropic_subgroup(&self) -> Result<PauliGroup> {
        self.stabilizer.isotropic_subgroup(self.c)
    }
}

/// A code given by an orthonormal basis of dense state vectors on `n + c` qubits.
#[derive(Clone, Debug)]
pub struct DenseCode {
    n: usize,
    c: usize,
    basis: Vec<Vec<C64>>,
}

impl DenseCode {
    pub fn new(n: usize, c: usize, basis: Vec<Vec<C64>>) -> Result<Self> {
        Self::with_limits(n, c, basis, DenseLimits::default())
    }

    pub fn with_limits(n: usize, c: usize, basis: Vec<Vec<C64>>, limits: DenseLimits) -> Result<Self> {
        let total = n + c;
        if n == 0 {
            return Err(Error::InvalidCode("n must be positive".into()));
        }
        if total > limits.max_dense_qubits {
            return Err(Error::SizeCap { what: "dense qubits".into(), needed: total as u128, limit: limits.max_dense_qubits as u128 });
        }
        if basis.is_empty() {
            return Err(Error::InvalidCode("empty basis".into()));
        }
        let dim = 1usize << total;
        for (k, v) in basis.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Shape(format!("basis vector {k} has length {}, expected {dim}", v.len())));
            }
        }
        for (k, u) in basis.iter().enumerate() {
            for (l, v) in basis.iter().enumerate().skip(k) {
                let ip = inner(u, v);
                let expect = if k == l { 1.0 } else { 0.0 };
                if (ip - C64::new(expect, 0.0)).norm() > 1e-10 {
                    return Err(Error::InvalidCode(format!("basis vectors {k} and {l} have inner product {ip}, expected {expect}")));
                }
            }
        }
        Ok(DenseCode { n, c, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    fn qubits(&self) -> usize {
        self.n + self.c
    }

    fn check_scan(&self, limits: DenseLimits) -> Result<()> {
        if self.qubits() > limits.max_scan_qubits {
            return Err(Error::SizeCap {
                what: "Pauli scan qubits".into(),
                needed: self.qubits() as u128,
                limit: limits.max_scan_qubits as u128,
            });
        }
        Ok(())
    }
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn reverse_bits(mask: u64, bits: usize) -> u64 {
    if bits == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - bits)
    }
}

fn i_pow(e: u32) -> C64 {
    match e & 3 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `P|v⟩` for a Pauli on all qubits of the state.
pub fn apply_pauli(p: &PauliOperator, v: &[C64]) -> Vec<C64> {
    let nq = p.qubits();
    let xm = reverse_bits(p.x_bits(), nq) as usize;
    let zm = reverse_bits(p.z_bits(), nq) as usize;
    let ph = i_pow(p.phase().exponent() as u32 + (p.x_bits() & p.z_bits()).count_ones());
    let mut out = vec![C64::zero(); v.len()];
    for (b, &a) in v.iter().enumerate() {
        let s = if (zm & b).count_ones().is_multiple_of(2) { ph } else { -ph };
        out[b ^ xm] = s * a;
    }
    out
}

/// In-place Walsh–Hadamard transform: `f[z] ← Σ_b (-1)^{z·b} f[b]`.
fn fwht(f: &mut [C64]) {
    let mut h = 1;
    while h < f.len() {
        for start in (0..f.len()).step_by(2 * h) {
            for i in start..start + h {
                let (a, b) = (f[i], f[i + h]);
                f[i] = a + b;
                f[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// For a fixed index-space x mask, `out[(k * L + l) * 2^N + z] = ⟨u_k| X^x Z^z |v_l⟩`.
fn matrix_elements(u: &[Vec<C64>], v: &[Vec<C64>], xm: usize) -> Vec<C64> {
    let dim = u[0].len();
    let mut out = Vec::with_capacity(u.len() * v.len() * dim);
    for uk in u {
        for vl in v {
            let mut f: Vec<C64> = (0..dim).map(|b| uk[b ^ xm].conj() * vl[b]).collect();
            fwht(&mut f);
            out.extend(f);
        }
    }
    out
}

/// Split weight `(sender, receiver)` of index-space masks.
fn split_weight(xm: usize, zm: usize, c: usize) -> (usize, usize) {
    let s = xm | zm;
    ((s >> c).count_ones() as usize, (s & ((1 << c) - 1)).count_ones() as usize)
}

/// Accumulates `Σ_{E of split weight (i,j)} Σ_{k,l} |⟨u_k|E|v_l⟩|²` over all
/// `4^{n+c}` Hermitian Paulis, and `Σ |Σ_k ⟨u_k|E|u_k⟩|²` when `diag` is set.
fn pauli_sums(n: usize, c: usize, u: &[Vec<C64>], v: &[Vec<C64>], diag: bool, exec: Execution) -> (Vec<f64>, Vec<f64>) {
    let total = n + c;
    let dim = 1usize << total;
    let cells = (n + 1) * (c + 1);
    let (lu, lv) = (u.len(), v.len());
    par::chunked_fold(
        exec,
        dim,
        || (vec![0.0; cells], vec![0.0; cells]),
        |acc, xm| {
            let g = matrix_elements(u, v, xm);
            for zm in 0..dim {
                let (wi, wj) = split_weight(xm, zm, c);
                let cell = wi * (c + 1) + wj;
                let mut off = 0.0;
                for kl in 0..lu * lv {
                    off += g[kl * dim + zm].norm_sqr();
                }
                acc.1[cell] += off;
                if diag {
                    let tr: C64 = (0..lu).map(|k| g[(k * lv + k) * dim + zm]).sum();
                    acc.0[cell] += tr.norm_sqr();
                }
            }
        },
        |mut a, b| {
            a.0.iter_mut().zip(b.0).for_each(|(x, y)| *x += y);
            a.1.iter_mut().zip(b.1).for_each(|(x, y)| *x += y);
            a
        },
    )
}

fn grid(n: usize, c: usize, kind: EnumKind, flat: Vec<f64>) -> SplitEnumerator<f64> {
    let rows = flat.chunks(c + 1).map(|r| r.to_vec()).collect();
    SplitEnumerator::from_rows(n, c, kind, rows).expect("grid shape")
}

/// Split SL enumerators `(A, B)` from the code projector.
pub fn sl_enumerators(code: &DenseCode) -> Result<(SplitEnumerator<f64>, SplitEnumerator<f64>)> {
    sl_enumerators_with(code, DenseLimits::default(), Execution::default())
}

pub fn sl_enumerators_with(code: &DenseCode, limits: DenseLimits, exec: Execution) -> Result<(SplitEnumerator<f64>, SplitEnumerator<f64>)> {
    code.check_scan(limits)?;
    let m = code.size() as f64;
    let (a, b) = pauli_sums(code.n, code.c, &code.basis, &code.basis, true, exec);
    Ok((
        grid(code.n, code.c, EnumKind::A, a.into_iter().map(|v| v / (m * m)).collect()),
        grid(code.n, code.c, EnumKind::B, b.into_iter().map(|v| v / m).collect()),
    ))
}

/// `σ_y^{⊗N} |v̄⟩`.
fn shadow_vector(v: &[C64], nq: usize) -> Vec<C64> {
    let y = PauliOperator::new(nq, 0, mask(nq), mask(nq)).expect("valid qubit count");
    let conj: Vec<C64> = v.iter().map(|a| a.conj()).collect();
    apply_pauli(&y, &conj)
}

fn mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Shadow enumerator with `P̂ = σ_y^{⊗N} P̄ σ_y^{⊗N}`; normalized by
/// `Tr(P P̂)` unless that trace vanishes (below `1e-10`).
pub fn shadow_enumerator(code: &DenseCode) -> Result<SplitEnumerator<f64>> {
    shadow_enumerator_with(code, DenseLimits::default(), Execution::default())
}

pub fn shadow_enumerator_with(code: &DenseCode, limits: DenseLimits, exec: Execution) -> Result<SplitEnumerator<f64>> {
    code.check_scan(limits)?;
    let nq = code.qubits();
    let hat: Vec<Vec<C64>> = code.basis.iter().map(|v| shadow_vector(v, nq)).collect();
    let trace: f64 = code.basis.iter().flat_map(|u| hat.iter().map(move |v| inner(u, v).norm_sqr())).sum();
    let (_, d) = pauli_sums(code.n, code.c, &code.basis, &hat, false, exec);
    let scale = if trace.abs() > 1e-10 { 1.0 / trace } else { 1.0 };
    Ok(grid(code.n, code.c, EnumKind::D, d.into_iter().map(|v| v * scale).collect()))
}

/// `Tr(P P̂)`.
pub fn shadow_trace(code: &DenseCode) -> f64 {
    let nq = code.qubits();
    let hat: Vec<Vec<C64>> = code.basis.iter().map(|v| shadow_vector(v, nq)).collect();
    code.basis.iter().flat_map(|u| hat.iter().map(move |v| inner(u, v).norm_sqr())).sum()
}

/// Joint `+1` eigenvector of a maximal stabilizer group, normalized and with its
/// largest-magnitude amplitude real and positive.
pub fn stabilizer_state(s: &PauliGroup) -> Result<Vec<C64>> {
    stabilizer_state_with(s, DenseLimits::default())
}

pub fn stabilizer_state_with(s: &PauliGroup, limits: DenseLimits) -> Result<Vec<C64>> {
    let nq = s.qubits();
    if nq > limits.max_dense_qubits {
        return Err(Error::SizeCap { what: "dense qubits".into(), needed: nq as u128, limit: limits.max_dense_qubits as u128 });
    }
    if !s.is_stabilizer() || s.rank() != nq {
        return Err(Error::InvalidCode(format!("group of rank {} on {nq} qubits does not fix a unique state", s.rank())));
    }
    let dim = 1usize << nq;
    for seed in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ seed);
        let mut v: Vec<C64> = (0..dim).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        for g in s.generators() {
            let gv = apply_pauli(g, &v);
            v.iter_mut().zip(gv).for_each(|(a, b)| *a = (*a + b) * 0.5);
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let big = v.iter().copied().fold(C64::zero(), |best, a| if a.norm() > best.norm() + 1e-12 { a } else { best });
        let fix = big.conj() / big.norm() / norm;
        v.iter_mut().for_each(|a| *a *= fix);
        for a in v.iter_mut() {
            if a.re.abs() < 1e-15 {
                a.re = 0.0;
            }
            if a.im.abs() < 1e-15 {
                a.im = 0.0;
            }
        }
        return Ok(v);
    }
    Err(Error::Internal("projection onto the stabilized state vanished for every start vector".into()))
}

/// Dense basis `{(ω_k ⊗ I)|S⟩}` of a CWS code.
pub fn dense_from_cws(code: &CwsCode) -> Result<DenseCode> {
    let s = stabilizer_state(&code.stabilizer)?;
    let basis = code
        .words
        .iter()
        .map(|w| Ok(apply_pauli(&w.stripped().extend(code.c)?, &s)))
        .collect::<Result<Vec<_>>>()?;
    DenseCode::new(code.n, code.c, basis)
}

/// A Z-type Pauli `ζ` (with phase) such that `conj|S⟩ = ζ|S⟩` for the state
/// produced by [`stabilizer_state`].
pub fn find_conjugation_pauli(s: &PauliGroup) -> Result<PauliOperator> {
    let state = stabilizer_state(s)?;
    let nq = s.qubits();
    let conj: Vec<C64> = state.iter().map(|a| a.conj()).collect();
    for z in 0..(1u64 << nq) {
        for ph in 0..4u8 {
            let zeta = PauliOperator::new(nq, ph, 0, z)?;
            let img = apply_pauli(&zeta, &state);
            let err: f64 = img.iter().zip(&conj).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            if err <= 1e-10 {
                return Ok(zeta);
            }
        }
    }
    Err(Error::Internal("no Z-type Pauli relates the state to its conjugate".into()))
}

/// An eigenvalue of the spectrum with the number of Paulis in its GS set.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumValue {
    pub value: f64,
    pub count: usize,
}

/// Generalized-stabilizer sets of a dense code.
#[derive(Clone, Debug)]
pub struct GsReport {
    pub n: usize,
    /// Sorted ascending.
    pub spectrum: Vec<SpectrumValue>,
    /// The group generated by `S_{+1} ∪ -S_{-1}`.
    pub gs_group: PauliGroup,
    /// `S_{+1} ∪ -S_{-1}` as signed operators.
    pub gs_elements: Vec<PauliOperator>,
    /// Paulis on the sender qubits that lie in no GS set, by weight.
    pub undetected_by_weight: Vec<usize>,
}

impl GsReport {
    pub fn spectrum_values(&self) -> Vec<f64> {
        self.spectrum.iter().map(|s| s.value).collect()
    }

    /// Least weight of a Pauli in no GS set.
    pub fn min_distance(&self) -> MinDistance {
        match self.undetected_by_weight.iter().position(|&k| k > 0) {
            Some(d) => MinDistance { d, undetectable_found: true },
            None => MinDistance { d: self.n + 1, undetectable_found: false },
        }
    }

    /// Whether `S_{+1} ∪ -S_{-1}` is closed under multiplication.
    pub fn gs_set_is_group(&self) -> bool {
        self.gs_group.order() == self.gs_elements.len() as u128
            && self.gs_elements.iter().all(|p| self.gs_group.member_sign_unchecked(p) == Some(Phase::ONE))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinDistance {
    pub d: usize,
    /// False when every Pauli lies in some GS set; `d` is then `n + 1`.
    pub undetectable_found: bool,
}

pub const GS_RESIDUAL_TOL: f64 = 1e-9;
pub const SPECTRUM_CLUSTER_TOL: f64 = 1e-8;

/// GS sets `S_j = {β ∈ E^n : P(β ⊗ I)P = jP}` by scanning all `4^n` Paulis.
pub fn gs_report(code: &DenseCode) -> Result<GsReport> {
    gs_report_with(code, DenseLimits::default(), Execution::default())
}

pub fn gs_report_with(code: &DenseCode, limits: DenseLimits, exec: Execution) -> Result<GsReport> {
    code.check_scan(limits)?;
    let (n, c) = (code.n, code.c);
    let nq = n + c;
    let dim = 1usize << nq;
    let m = code.size();
    // (weight, index-space x, index-space z, eigenvalue if scalar)
    let per_x = par::map_indices(exec, 1 << n, |xs| {
        let xm = xs << c;
        let g = matrix_elements(&code.basis, &code.basis, xm);
        let mut out = Vec::with_capacity(1 << n);
        for zs in 0..(1usize << n) {
            let zm = zs << c;
            let ph = i_pow((xm & zm).count_ones());
            let tr: C64 = (0..m).map(|k| g[(k * m + k) * dim + zm]).sum::<C64>() * ph;
            let j = tr / m as f64;
            let mut res = 0.0;
            for k in 0..m {
                for l in 0..m {
                    let mut e = g[(k * m + l) * dim + zm] * ph;
                    if k == l {
                        e -= j;
                    }
                    res += e.norm_sqr();
                }
            }
            let scalar = (res / m as f64).sqrt() <= GS_RESIDUAL_TOL && j.im.abs() <= GS_RESIDUAL_TOL;
            out.push((xm, zm, if scalar { Some(j.re) } else { None }));
        }
        out
    });
    let mut values: Vec<f64> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut gs_elements = Vec::new();
    let mut undetected = vec![0usize; n + 1];
    for (xm, zm, ev) in per_x.into_iter().flatten() {
        let x = reverse_bits((xm >> c) as u64, n);
        let z = reverse_bits((zm >> c) as u64, n);
        let op = PauliOperator::from_bits(n, x, z);
        match ev {
            None => undetected[op.weight()] += 1,
            Some(j) => {
                match values.iter().position(|v| (v - j).abs() <= SPECTRUM_CLUSTER_TOL) {
                    Some(k) => counts[k] += 1,
                    None => {
                        values.push(j);
                        counts.push(1);
                    }
                }
                if (j - 1.0).abs() <= SPECTRUM_CLUSTER_TOL {
                    gs_elements.push(op);
                } else if (j + 1.0).abs() <= SPECTRUM_CLUSTER_TOL {
                    gs_elements.push(op.negated());
                }
            }
        }
    }
    let mut spectrum: Vec<SpectrumValue> = values.into_iter().zip(counts).map(|(value, count)| SpectrumValue { value, count }).collect();
    spectrum.sort_by(|a, b| a.value.total_cmp(&b.value));
    let gs_group = PauliGroup::close(n, &gs_elements, false)?;
    Ok(GsReport { n, spectrum, gs_group, gs_elements, undetected_by_weight: undetected })
}

/// True minimum distance: least weight of an error on the sender qubits that
/// lies in no GS set.
pub fn min_distance(code: &DenseCode) -> Result<MinDistance> {
    Ok(gs_report(code)?.min_distance())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceBound {
    Bound(usize),
    /// `φ(WS_I) \ φ(S_I)` is empty (single-word codes).
    EmptyDifference,
}

/// `d ≤ min{wt(α) : α ∈ φ(WS_I) \ φ(S_I)}`.
pub fn distance_upper_bound(code: &CwsCode) -> Result<DistanceBound> {
    let si = code.isotropic_subgroup()?;
    let t2 = PauliSet::coset_set(&code.word_set()?, &si)?;
    Ok(min_weight_outside(&t2, |p| si.contains_up_to_phase(p)))
}

/// `d ≤ min{wt(α) : α ∈ φ(WS_I) \ φ(S_g)}` using the GS group of the code.
pub fn distance_upper_bound_gs(code: &CwsCode, report: &GsReport) -> Result<DistanceBound> {
    let si = code.isotropic_subgroup()?;
    let t2 = PauliSet::coset_set(&code.word_set()?, &si)?;
    Ok(min_weight_outside(&t2, |p| report.gs_group.contains_up_to_phase(p)))
}

fn min_weight_outside(set: &PauliSet, excluded: impl Fn(&PauliOperator) -> bool) -> DistanceBound {
    set.elements()
        .iter()
        .filter(|p| !excluded(p))
        .map(|p| p.weight())
        .min()
        .map_or(DistanceBound::EmptyDifference, DistanceBound::Bound)
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn require_unassisted(code: &CwsCode, what: &str) -> Result<()> {
    if code.c != 0 {
        return Err(Error::InvalidParameters(format!("{what} is only defined for c = 0 codes")));
    }
    Ok(())
}

/// `A_j = (1/M²) Σ_{β ∈ S, wt β = j} (W_c(β) - W_a(β))²` where `W_c`/`W_a`
/// count words commuting/anticommuting with `β`.
pub fn combinatorial_a(code: &CwsCode) -> Result<Vec<BigRational>> {
    require_unassisted(code, "combinatorial A")?;
    let m = code.size() as i64;
    let mut out = vec![BigRational::zero(); code.n + 1];
    for beta in code.stabilizer.elements()? {
        let wc = code.words.iter().filter(|w| w.commutes_unchecked(&beta)).count() as i64;
        let wa = m - wc;
        out[beta.weight()] += rat((wc - wa) * (wc - wa), m * m);
    }
    Ok(out)
}

/// `|{β ∈ S : wt β = j, W_c(β) = M}|`, equal to `A_j` below the minimum distance.
pub fn combinatorial_a_below_distance(code: &CwsCode) -> Result<Vec<u64>> {
    require_unassisted(code, "combinatorial A")?;
    let mut out = vec![0u64; code.n + 1];
    for beta in code.stabilizer.elements()? {
        if code.words.iter().all(|w| w.commutes_unchecked(&beta)) {
            out[beta.weight()] += 1;
        }
    }
    Ok(out)
}

/// Split distance enumerator of `φ((W ⊗ I)S)`, which is the split `B`
/// enumerator. Its `j = 0` column agrees with [`b_sender_column`].
pub fn combinatorial_b(code: &CwsCode) -> Result<ExactEnumerator> {
    combinatorial_b_with(code, Execution::default())
}

pub fn combinatorial_b_with(code: &CwsCode, exec: Execution) -> Result<ExactEnumerator> {
    let t = PauliSet::coset_set(&code.extended_word_set()?, &code.stabilizer)?;
    let counts = t.split_cross_counts(&t, code.n, exec)?;
    let size = BigInt::from(t.len());
    let rows = counts
        .into_iter()
        .map(|r| r.into_iter().map(|v| BigRational::new(BigInt::from(v), size.clone())).collect())
        .collect();
    SplitEnumerator::from_rows(code.n, code.c, EnumKind::B, rows)
}

/// Distance enumerator of `φ(WS_I)`, i.e. `B_{i,0}`.
pub fn b_sender_column(code: &CwsCode) -> Result<Vec<BigRational>> {
    let si = code.isotropic_subgroup()?;
    PauliSet::coset_set(&code.word_set()?, &si)?.distance_enumerator()
}

/// Shadow enumerator from `ζ` with `conj|S⟩ = ζ|S⟩`:
/// `f(j) = |{(α, β) ∈ WS × W σ_y^{⊗n} ζ S : wt(αβ) = j}| / |S|`, and
/// `D_j = f(j)/T` with `T = Tr(P P̂)`, the number of word pairs with
/// `w_k w_l σ_y^{⊗n} ζ ∈ S` up to phase, or `D_j = f(j)` when `T = 0`.
/// `T = M` whenever `σ_y^{⊗n} ζ ∈ ±S`.
pub fn combinatorial_shadow(code: &CwsCode) -> Result<Vec<BigRational>> {
    require_unassisted(code, "combinatorial shadow")?;
    let n = code.n;
    let zeta = find_conjugation_pauli(&code.stabilizer)?;
    let y = PauliOperator::new(n, 0, mask(n), mask(n))?;
    let yz = y.mul(&zeta)?;
    let mut trace = 0i64;
    for wk in &code.words {
        for wl in &code.words {
            if code.stabilizer.contains_up_to_phase(&wk.mul_unchecked(wl).mul_unchecked(&yz)) {
                trace += 1;
            }
        }
    }
    let ws = PauliSet::coset_set(&code.word_set()?, &code.stabilizer)?;
    let shifted = PauliSet::new(n, code.words.iter().map(|w| w.mul_unchecked(&yz)))?;
    let wys = PauliSet::coset_set(&shifted, &code.stabilizer)?;
    let counts = ws.split_cross_counts(&wys, n, Execution::default())?;
    let s_size = code.stabilizer.order() as i64;
    let den = s_size * trace.max(1);
    Ok(counts.into_iter().map(|r| rat(r[0] as i64, den)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_qubit() -> CwsCode {
        let s = PauliGroup::stabilizer_from_strs(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ", "ZZZZZ"]).unwrap();
        CwsCode::new(5, 0, s, vec!["IIIII".parse().unwrap(), "XXXXX".parse().unwrap()]).unwrap()
    }

    #[test]
    fn epr_state() {
        let s = PauliGroup::stabilizer_from_strs(&["XX", "ZZ"]).unwrap();
        let v = stabilizer_state(&s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [h, 0.0, 0.0, h];
        for (a, e) in v.iter().zip(expect) {
            assert!((a - C64::new(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn apply_pauli_matches_big_endian_convention() {
        // X on qubit 0 of |00⟩ gives |10⟩ = index 2.
        let v = vec![C64::new(1.0, 0.0), C64::zero(), C64::zero(), C64::zero()];
        let w = apply_pauli(&"XI".parse().unwrap(), &v);
        assert_eq!(w[2], C64::new(1.0, 0.0));
        let w = apply_pauli(&"YI".parse().unwrap(), &v);
        assert_eq!(w[2], C64::new(0.0, 1.0));
    }

    #[test]
    fn five_qubit_dense_enumerators() {
        let dense = dense_from_cws(&five_qubit()).unwrap();
        let (a, b) = sl_enumerators(&dense).unwrap();
        let d = shadow_enumerator(&dense).unwrap();
        let close = |x: Vec<f64>, y: [f64; 6]| x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-9);
        assert!(close(a.unsplit(), [1.0, 0.0, 0.0, 0.0, 15.0, 0.0]));
        assert!(close(b.unsplit(), [1.0, 0.0, 0.0, 30.0, 15.0, 18.0]));
        assert!(close(d.unsplit(), [1.0, 0.0, 0.0, 30.0, 15.0, 18.0]));
    }

    #[test]
    fn five_qubit_distance() {
        let code = five_qubit();
        let dense = dense_from_cws(&code).unwrap();
        assert_eq!(min_distance(&dense).unwrap(), MinDistance { d: 3, undetectable_found: true });
        assert_eq!(distance_upper_bound(&code).unwrap(), DistanceBound::Bound(3));
    }

    #[test]
    fn single_word_code_has_empty_difference() {
        let s = PauliGroup::stabilizer_from_strs(&["XX", "ZZ"]).unwrap();
        let code = CwsCode::new(2, 0, s, vec!["II".parse().unwrap()]).unwrap();
        assert_eq!(distance_upper_bound(&code).unwrap(), DistanceBound::EmptyDifference);
    }

    #[test]
    fn invalid_codes_rejected() {
        let s = PauliGroup::stabilizer_from_strs(&["XX"]).unwrap();
        assert!(CwsCode::new(2, 0, s, vec!["II".parse().unwrap()]).is_err());
        let s = PauliGroup::stabilizer_from_strs(&["XX", "ZZ"]).unwrap();
        assert!(CwsCode::new(2, 0, s.clone(), vec!["XI".parse().unwrap()]).is_err());
        assert!(CwsCode::new(2, 0, s, vec!["II".parse().unwrap(), "XX".parse().unwrap()]).is_err());
    }

    #[test]
    fn full_space_spectrum() {
        let n = 2;
        let basis = (0..4).map(|k| (0..4).map(|b| C64::new(if b == k { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
        let code = DenseCode::new(n, 0, basis).unwrap();
        let r = gs_report(&code).unwrap();
        assert_eq!(r.spectrum_values(), vec![1.0]);
        assert_eq!(r.spectrum[0].count, 1);
        assert_eq!(r.min_distance(), MinDistance { d: 1, undetectable_found: true });
    }

    #[test]
    fn conjugation_pauli_of_real_state_is_identity() {
        let z = find_conjugation_pauli(five_qubit().stabilizer()).unwrap();
        assert_eq!(z.to_string(), "+IIIII");
    }
}
