//! The n-fold Pauli group in symplectic form.
//!
//! A [`PauliOperator`] on `m ≤ 64` qubits stores one x-bit and one z-bit per
//! qubit (bit `q` of the mask is qubit `q`, the leftmost character of the text
//! form) and a phase exponent `k`, representing `i^k · σ_1 ⊗ … ⊗ σ_m` with each
//! `σ_q ∈ {I, X, Y, Z}` chosen by the bits `(x, z) = (0,0), (1,0), (1,1), (0,1)`.
//! So the phase is relative to the Hermitian tensor form: `X·Z = -iY` has
//! exponent 3 and [`PauliOperator::stripped`] just zeroes the exponent.

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::terwilliger::{QuadStats, TupleDomain};
use crate::transforms::gamma;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub const MAX_QUBITS: usize = 64;

/// Power of `i`: `Phase(0) = +1`, `Phase(1) = +i`, `Phase(2) = -1`, `Phase(3) = -i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn exponent(self) -> u8 {
        self.0 & 3
    }

    pub fn is_real(self) -> bool {
        self.0 & 1 == 0
    }

    /// `+1.0` or `-1.0` for real phases.
    pub fn sign(self) -> Option<f64> {
        match self.exponent() {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    fn prefix(self) -> &'static str {
        ["+", "+i", "-", "-i"][self.exponent() as usize]
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ["+1", "+i", "-1", "-i"][self.exponent() as usize];
        f.write_str(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliOperator {
    qubits: u8,
    phase: u8,
    x: u64,
    z: u64,
}

fn mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

impl PauliOperator {
    pub fn identity(m: usize) -> Self {
        assert!(m <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliOperator { qubits: m as u8, phase: 0, x: 0, z: 0 }
    }

    /// Operator `i^phase_exp` times the Hermitian Pauli with the given bits.
    pub fn new(m: usize, phase_exp: u8, x: u64, z: u64) -> Result<Self> {
        if m == 0 || m > MAX_QUBITS {
            return Err(Error::InvalidParameters(format!("qubit count {m} outside 1..={MAX_QUBITS}")));
        }
        if (x | z) & !mask(m) != 0 {
            return Err(Error::InvalidParameters(format!("bit masks exceed {m} qubits")));
        }
        Ok(PauliOperator { qubits: m as u8, phase: phase_exp & 3, x, z })
    }

    /// Hermitian Pauli with `+1` phase.
    pub fn from_bits(m: usize, x: u64, z: u64) -> Self {
        debug_assert!((x | z) & !mask(m) == 0);
        PauliOperator { qubits: m as u8, phase: 0, x, z }
    }

    /// Single-qubit factor `c ∈ {I,X,Y,Z}` on qubit `q`.
    pub fn single(m: usize, q: usize, c: char) -> Result<Self> {
        let (x, z) = match c {
            'I' => (0, 0),
            'X' => (1, 0),
            'Y' => (1, 1),
            'Z' => (0, 1),
            _ => return Err(Error::InvalidParameters(format!("unknown Pauli factor {c:?}"))),
        };
        if q >= m {
            return Err(Error::InvalidIndex(format!("qubit {q} of {m}")));
        }
        PauliOperator::new(m, 0, x << q, z << q)
    }

    pub fn qubits(&self) -> usize {
        self.qubits as usize
    }

    pub fn phase(&self) -> Phase {
        Phase(self.phase)
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// `φ`: the same Pauli with coefficient `+1`.
    pub fn stripped(&self) -> Self {
        PauliOperator { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase: Phase) -> Self {
        PauliOperator { phase: phase.exponent(), ..*self }
    }

    pub fn negated(&self) -> Self {
        PauliOperator { phase: (self.phase + 2) & 3, ..*self }
    }

    pub fn factor(&self, q: usize) -> char {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    /// Product `self · other` with exact phase.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.qubits(), other.qubits())?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        // In the X^x Z^z ordering the exponent is k + |x∧z| and moving Z^{z1}
        // past X^{x2} costs (-1)^{|z1∧x2|}.
        let e1 = self.phase as u32 + (self.x & self.z).count_ones();
        let e2 = other.phase as u32 + (other.x & other.z).count_ones();
        let swap = 2 * (self.z & other.x).count_ones();
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = e1 + e2 + swap;
        let k = (e + 4 * 64 - (x & z).count_ones()) & 3;
        PauliOperator { qubits: self.qubits, phase: k as u8, x, z }
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        check_dims(self.qubits(), other.qubits())?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// `self ⊗ other`; the qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let m = self.qubits() + other.qubits();
        if m > MAX_QUBITS {
            return Err(Error::InvalidParameters(format!("tensor product on {m} qubits")));
        }
        let s = self.qubits();
        PauliOperator::new(m, self.phase + other.phase, self.x | (other.x << s), self.z | (other.z << s))
    }

    /// `self ⊗ I^{⊗c}`.
    pub fn extend(&self, c: usize) -> Result<Self> {
        if c == 0 {
            return Ok(*self);
        }
        self.tensor(&PauliOperator::identity(c))
    }

    /// The factors on qubits `start..start + len`, keeping the phase.
    pub fn restrict(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.qubits() || len == 0 {
            return Err(Error::InvalidIndex(format!("qubits {start}..{} of {}", start + len, self.qubits())));
        }
        let mk = mask(len);
        PauliOperator::new(len, self.phase, (self.x >> start) & mk, (self.z >> start) & mk)
    }

    /// Qubit count and phase-stripped bits, the key used by [`PauliSet`].
    pub fn key(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    /// `wt(φ(self)·φ(other))`.
    pub fn distance(&self, other: &Self) -> usize {
        ((self.x ^ other.x) | (self.z ^ other.z)).count_ones() as usize
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phase().prefix())?;
        for q in 0..self.qubits() {
            write!(f, "{}", self.factor(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        let m = body.chars().count();
        if m == 0 {
            return Err(Error::InvalidParameters(format!("empty Pauli string {s:?}")));
        }
        if m > MAX_QUBITS {
            return Err(Error::InvalidParameters(format!("Pauli string longer than {MAX_QUBITS}")));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q
                }
                'Z' => z |= 1 << q,
                _ => return Err(Error::InvalidParameters(format!("invalid character {c:?} in Pauli string {s:?}"))),
            }
        }
        PauliOperator::new(m, phase, x, z)
    }
}

/// Symplectic column `col` of an operator: x-bits of qubits `0..m` first, then
/// the z-bits.
fn column(p: &PauliOperator, col: usize) -> bool {
    let m = p.qubits();
    if col < m {
        (p.x >> col) & 1 == 1
    } else {
        (p.z >> (col - m)) & 1 == 1
    }
}

/// A Pauli group kept as reduced generators.
///
/// Generators are in reduced row echelon form over the symplectic bits: each
/// has a pivot column (see [`column`]) that is set in no other generator, and
/// generators are sorted by pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliGroup {
    qubits: usize,
    generators: Vec<PauliOperator>,
    pivots: Vec<usize>,
    abelian: bool,
    stabilizer: bool,
}

struct Reduced {
    rows: Vec<PauliOperator>,
    pivots: Vec<usize>,
    /// A dependent generator reduced to a non-`+I` scalar (`-I` or `±iI`).
    nontrivial_scalar: Option<(usize, PauliOperator)>,
}

fn reduce(gens: &[PauliOperator], order: &[usize]) -> Reduced {
    let mut rows: Vec<PauliOperator> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut nontrivial_scalar = None;
    for (idx, g) in gens.iter().enumerate() {
        let mut r = *g;
        for (row, &piv) in rows.iter().zip(&pivots) {
            if column(&r, piv) {
                r = row.mul_unchecked(&r);
            }
        }
        if r.is_identity_up_to_phase() {
            if r.phase != 0 && nontrivial_scalar.is_none() {
                nontrivial_scalar = Some((idx, r));
            }
            continue;
        }
        let piv = *order.iter().find(|&&c| column(&r, c)).expect("nonzero row has a pivot");
        for row in rows.iter_mut() {
            if column(row, piv) {
                *row = r.mul_unchecked(row);
            }
        }
        rows.push(r);
        pivots.push(piv);
    }
    let pos = |c: usize| order.iter().position(|&o| o == c).unwrap();
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by_key(|&i| pos(pivots[i]));
    Reduced {
        rows: idx.iter().map(|&i| rows[i]).collect(),
        pivots: idx.iter().map(|&i| pivots[i]).collect(),
        nontrivial_scalar,
    }
}

fn natural_order(m: usize) -> Vec<usize> {
    (0..2 * m).collect()
}

impl PauliGroup {
    pub fn trivial(m: usize) -> Self {
        PauliGroup { qubits: m, generators: Vec::new(), pivots: Vec::new(), abelian: true, stabilizer: true }
    }

    /// Group generated by `generators`, in canonical reduced form.
    ///
    /// With `require_stabilizer`, fails unless the group is abelian and does not
    /// contain `-I`.
    pub fn close(m: usize, generators: &[PauliOperator], require_stabilizer: bool) -> Result<Self> {
        for g in generators {
            check_dims(m, g.qubits())?;
        }
        if require_stabilizer {
            for (a, g) in generators.iter().enumerate() {
                for (b, h) in generators.iter().enumerate().skip(a + 1) {
                    if !g.commutes_unchecked(h) {
                        return Err(Error::NotStabilizer(format!(
                            "generators {a} ({g}) and {b} ({h}) anticommute"
                        )));
                    }
                }
                if !g.phase().is_real() {
                    return Err(Error::NotStabilizer(format!("generator {a} ({g}) squares to -I")));
                }
            }
        }
        let red = reduce(generators, &natural_order(m));
        let abelian = red
            .rows
            .iter()
            .enumerate()
            .all(|(a, g)| red.rows[a + 1..].iter().all(|h| g.commutes_unchecked(h)));
        let hermitian = red.rows.iter().all(|g| g.phase().is_real());
        let stabilizer = abelian && hermitian && red.nontrivial_scalar.is_none();
        if require_stabilizer && !stabilizer {
            let msg = match red.nontrivial_scalar {
                Some((idx, s)) => format!("generator {idx} ({}) is a product of the others times {}", generators[idx], s.phase()),
                None => "group contains -I".to_string(),
            };
            return Err(Error::NotStabilizer(msg));
        }
        Ok(PauliGroup { qubits: m, generators: red.rows, pivots: red.pivots, abelian, stabilizer })
    }

    /// Parses signed Pauli strings and closes them as a stabilizer group.
    pub fn stabilizer_from_strs(gens: &[&str]) -> Result<Self> {
        let ops = gens.iter().map(|s| s.parse()).collect::<Result<Vec<PauliOperator>>>()?;
        let m = ops.first().map(|p| p.qubits()).ok_or_else(|| Error::EmptySet("no generators".into()))?;
        PauliGroup::close(m, &ops, true)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Number of elements modulo global phase, `2^rank`.
    pub fn order(&self) -> u128 {
        1u128 << self.rank()
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn is_stabilizer(&self) -> bool {
        self.stabilizer
    }

    /// `λ` with `λ^{-1}·p ∈ G`, found by reduction against the generators.
    pub fn member_sign(&self, p: &PauliOperator) -> Result<Option<Phase>> {
        check_dims(self.qubits, p.qubits())?;
        Ok(self.member_sign_unchecked(p))
    }

    pub(crate) fn member_sign_unchecked(&self, p: &PauliOperator) -> Option<Phase> {
        let mut prod = PauliOperator::identity(self.qubits);
        let mut rest = p.stripped();
        for (g, &piv) in self.generators.iter().zip(&self.pivots) {
            if column(&rest, piv) {
                prod = prod.mul_unchecked(g);
                rest = PauliOperator { x: rest.x ^ g.x, z: rest.z ^ g.z, ..rest };
            }
        }
        if !rest.is_identity_up_to_phase() {
            return None;
        }
        Some(Phase((p.phase + 4 - prod.phase) & 3))
    }

    pub fn contains_up_to_phase(&self, p: &PauliOperator) -> bool {
        self.member_sign_unchecked(p).is_some()
    }

    /// True when `p` commutes with every generator (normalizer membership for
    /// stabilizer groups).
    pub fn commutes_with_all(&self, p: &PauliOperator) -> bool {
        self.generators.iter().all(|g| g.commutes_unchecked(p))
    }

    /// All `2^rank` elements with their signs, in Gray-code order starting at `I`.
    pub fn elements(&self) -> Result<Vec<PauliOperator>> {
        let limit = Limits::default().max_set_size;
        if self.order() > limit as u128 {
            return Err(Error::SizeCap { what: "group enumeration".into(), needed: self.order(), limit: limit as u128 });
        }
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = PauliOperator::identity(self.qubits);
        out.push(cur);
        for k in 1..(1usize << self.rank()) {
            cur = cur.mul_unchecked(&self.generators[k.trailing_zeros() as usize]);
            out.push(cur);
        }
        Ok(out)
    }

    /// `{α ∈ P^n : α ⊗ I^{⊗c} ∈ S}` for a group `S` on `n + c` qubits.
    pub fn isotropic_subgroup(&self, c: usize) -> Result<PauliGroup> {
        if c >= self.qubits {
            return Err(Error::InvalidParameters(format!("c = {c} leaves no sender qubits out of {}", self.qubits)));
        }
        if !self.abelian {
            return Err(Error::NotStabilizer("isotropic subgroup needs an abelian group".into()));
        }
        if c == 0 {
            return Ok(self.clone());
        }
        let m = self.qubits;
        let n = m - c;
        // Eliminate the receiver columns first; rows whose pivot falls in the
        // sender columns are exactly identity on the receiver qubits.
        let receiver: Vec<usize> = (n..m).chain(m + n..2 * m).collect();
        let sender: Vec<usize> = (0..n).chain(m..m + n).collect();
        let order: Vec<usize> = receiver.iter().chain(&sender).copied().collect();
        let red = reduce(&self.generators, &order);
        let mut gens = Vec::new();
        for (row, piv) in red.rows.iter().zip(&red.pivots) {
            if sender.contains(piv) {
                gens.push(row.restrict(0, n)?);
            }
        }
        PauliGroup::close(n, &gens, false)
    }
}

/// Size guards for explicit enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_set_size: usize,
    pub max_coset_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_set_size: 1 << 24, max_coset_qubits: 12 }
    }
}

/// An explicit deduplicated set of Pauli operators on `m` qubits.
///
/// Unsigned sets (the default) hold phase-stripped operators; signed sets keep
/// phases and treat `P` and `-P` as different elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliSet {
    qubits: usize,
    elements: Vec<PauliOperator>,
    signed: bool,
}

impl PauliSet {
    pub fn new<I: IntoIterator<Item = PauliOperator>>(m: usize, items: I) -> Result<Self> {
        Self::build(m, items, false)
    }

    pub fn signed<I: IntoIterator<Item = PauliOperator>>(m: usize, items: I) -> Result<Self> {
        Self::build(m, items, true)
    }

    fn build<I: IntoIterator<Item = PauliOperator>>(m: usize, items: I, signed: bool) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut elements = Vec::new();
        for p in items {
            check_dims(m, p.qubits())?;
            let p = if signed { p } else { p.stripped() };
            if seen.insert((p.phase, p.x, p.z)) {
                elements.push(p);
            }
        }
        Ok(PauliSet { qubits: m, elements, signed })
    }

    pub fn from_group(g: &PauliGroup) -> Result<Self> {
        PauliSet::new(g.qubits(), g.elements()?)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn elements(&self) -> &[PauliOperator] {
        &self.elements
    }

    pub fn contains(&self, p: &PauliOperator) -> bool {
        let q = if self.signed { *p } else { p.stripped() };
        self.elements.contains(&q)
    }

    /// `φ(W·G)` for a set `W` and group `G` on the same qubits.
    pub fn coset_set(w: &PauliSet, g: &PauliGroup) -> Result<PauliSet> {
        Self::coset_set_with_limits(w, g, Limits::default())
    }

    pub fn coset_set_with_limits(w: &PauliSet, g: &PauliGroup, limits: Limits) -> Result<PauliSet> {
        check_dims(w.qubits, g.qubits())?;
        if w.qubits > limits.max_coset_qubits {
            return Err(Error::SizeCap {
                what: "coset set qubits".into(),
                needed: w.qubits as u128,
                limit: limits.max_coset_qubits as u128,
            });
        }
        let needed = w.len() as u128 * g.order();
        if needed > limits.max_set_size as u128 {
            return Err(Error::SizeCap { what: "coset set size".into(), needed, limit: limits.max_set_size as u128 });
        }
        let elems = g.elements()?;
        let items = w.elements.iter().flat_map(|a| elems.iter().map(move |b| a.mul_unchecked(b)));
        PauliSet::new(w.qubits, items)
    }

    /// `W_i = |{α ∈ T : wt(α) = i}|`.
    pub fn weight_enumerator(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.qubits + 1];
        for p in &self.elements {
            out[p.weight()] += 1;
        }
        out
    }

    /// `W'_i = |{(α, β) ∈ T² : wt(αβ) = i}| / |T|`, exact.
    pub fn distance_enumerator(&self) -> Result<Vec<BigRational>> {
        self.distance_enumerator_with(Execution::default())
    }

    pub fn distance_enumerator_with(&self, exec: Execution) -> Result<Vec<BigRational>> {
        if self.is_empty() {
            return Err(Error::EmptySet("distance enumerator of an empty set".into()));
        }
        let counts = self.distance_counts(exec);
        let size = BigInt::from(self.len());
        Ok(counts.into_iter().map(|c| BigRational::new(BigInt::from(c), size.clone())).collect())
    }

    /// Unnormalized pair counts `|{(α, β) ∈ T² : wt(αβ) = i}|`.
    pub fn distance_counts(&self, exec: Execution) -> Vec<u64> {
        let m = self.qubits;
        let el = &self.elements;
        par::chunked_fold(
            exec,
            el.len(),
            || vec![0u64; m + 1],
            |acc, a| {
                for b in el {
                    acc[el[a].distance(b)] += 1;
                }
            },
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        )
    }

    /// Pair counts of `wt(αβ)` over `α ∈ self`, `β ∈ other`, split into the
    /// weight on the first `n` qubits and on the remaining ones.
    pub fn split_cross_counts(&self, other: &PauliSet, n: usize, exec: Execution) -> Result<Vec<Vec<u64>>> {
        check_dims(self.qubits, other.qubits)?;
        if n > self.qubits {
            return Err(Error::InvalidIndex(format!("split at {n} of {} qubits", self.qubits)));
        }
        let c = self.qubits - n;
        let lo = mask(n);
        let a = &self.elements;
        let b = &other.elements;
        let flat = par::chunked_fold(
            exec,
            a.len(),
            || vec![0u64; (n + 1) * (c + 1)],
            |acc, i| {
                for q in b {
                    let s = (a[i].x ^ q.x) | (a[i].z ^ q.z);
                    let wi = (s & lo).count_ones() as usize;
                    let wj = (s & !lo).count_ones() as usize;
                    acc[wi * (c + 1) + wj] += 1;
                }
            },
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        );
        Ok(flat.chunks(c + 1).map(|r| r.to_vec()).collect())
    }
}

/// Raw triple counts of two sets `T1 ⊆ T2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleStats {
    pub t1_size: usize,
    pub t2_size: usize,
    /// `T1 × T1 × T1`
    pub sigma: QuadStats,
    /// `T1 × T2 × T2`
    pub mu: QuadStats,
    /// `T2 × T1 × T1`
    pub nu: QuadStats,
    /// `T2 × T2 × T2`
    pub eta: QuadStats,
}

/// Normalized statistics `x, u, v, y`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedStats {
    pub t1_size: usize,
    pub t2_size: usize,
    pub x: QuadStats,
    pub u: QuadStats,
    pub v: QuadStats,
    pub y: QuadStats,
}

/// Tuple `(i, j, t, p)` of the pair `(αβ, αγ)` given as symplectic bit pairs.
#[inline]
fn tuple_of(a: (u64, u64), b: (u64, u64)) -> (usize, usize, usize, usize) {
    let sa = a.0 | a.1;
    let sb = b.0 | b.1;
    let both = sa & sb;
    let differ = (a.0 ^ b.0) | (a.1 ^ b.1);
    (
        sa.count_ones() as usize,
        sb.count_ones() as usize,
        both.count_ones() as usize,
        (both & !differ).count_ones() as usize,
    )
}

fn count_triples(n: usize, outer: &[PauliOperator], mid: &[PauliOperator], inner: &[PauliOperator], exec: Execution) -> Vec<u64> {
    let dom = TupleDomain::new(n);
    let len = dom.len();
    par::chunked_fold(
        exec,
        outer.len(),
        || vec![0u64; len],
        |acc, k| {
            let a = &outer[k];
            let left: Vec<(u64, u64)> = mid.iter().map(|b| (a.x ^ b.x, a.z ^ b.z)).collect();
            let right: Vec<(u64, u64)> = inner.iter().map(|c| (a.x ^ c.x, a.z ^ c.z)).collect();
            for &l in &left {
                for &r in &right {
                    let (i, j, t, p) = tuple_of(l, r);
                    acc[dom.index(i, j, t, p).expect("triple lands in the tuple domain")] += 1;
                }
            }
        },
        |mut x, y| {
            x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
            x
        },
    )
}

/// `σ, μ, ν, η` for `T1, T2 ⊆ E^n`.
pub fn triple_statistics(t1: &PauliSet, t2: &PauliSet) -> Result<TripleStats> {
    triple_statistics_with(t1, t2, Execution::default())
}

pub fn triple_statistics_with(t1: &PauliSet, t2: &PauliSet, exec: Execution) -> Result<TripleStats> {
    check_dims(t1.qubits, t2.qubits)?;
    let n = t1.qubits;
    let a = t1.elements();
    let b = t2.elements();
    let wrap = |v: Vec<u64>| QuadStats::from_counts(n, &v);
    Ok(TripleStats {
        t1_size: a.len(),
        t2_size: b.len(),
        sigma: wrap(count_triples(n, a, a, a, exec)),
        mu: wrap(count_triples(n, a, b, b, exec)),
        nu: wrap(count_triples(n, b, a, a, exec)),
        eta: wrap(count_triples(n, b, b, b, exec)),
    })
}

impl TripleStats {
    /// `x = σ/(|T1|γ)`, `u = μ/(|T1|γ)`, `v = ν/(|T1|γ)`, `y = η/(|T2|γ)`.
    pub fn normalized(&self) -> NormalizedStats {
        let n = self.sigma.n();
        let dom = TupleDomain::new(n);
        let scale = |q: &QuadStats, size: usize| {
            let vals = dom
                .iter()
                .zip(q.values())
                .map(|((i, j, t, p), v)| {
                    let g = gamma(i, j, t, p, n);
                    v / BigRational::from_integer(BigInt::from(g) * BigInt::from(size))
                })
                .collect();
            QuadStats::normalized(n, vals)
        };
        NormalizedStats {
            t1_size: self.t1_size,
            t2_size: self.t2_size,
            x: scale(&self.sigma, self.t1_size),
            u: scale(&self.mu, self.t1_size),
            v: scale(&self.nu, self.t1_size),
            y: scale(&self.eta, self.t2_size),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn five_qubit() -> PauliGroup {
        PauliGroup::stabilizer_from_strs(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ", "ZZXIX"]).unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let r = p("X").mul(&p("Z")).unwrap();
        assert_eq!(r.phase(), Phase::MINUS_I);
        assert_eq!((r.x_bits(), r.z_bits()), (1, 1));
        assert_eq!(r.to_string(), "-iY");
        assert_eq!(p("Z").mul(&p("X")).unwrap().to_string(), "+iY");
        assert_eq!(p("Y").mul(&p("Y")).unwrap().to_string(), "+I");
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XZZXI", "-YY", "+iZ", "-iIXYZ", "+I"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XY").to_string(), "+XY");
        assert!("".parse::<PauliOperator>().is_err());
        assert!("+XQ".parse::<PauliOperator>().is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(p("X").mul(&p("XX")), Err(Error::DimensionMismatch { .. })));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn commutation() {
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
    }

    #[test]
    fn five_qubit_group() {
        let g = five_qubit();
        assert_eq!(g.order(), 16);
        assert!(g.is_stabilizer());
        assert_eq!(g.member_sign(&p("XZZXI")).unwrap(), Some(Phase::ONE));
        assert_eq!(g.member_sign(&p("-XZZXI")).unwrap(), Some(Phase::MINUS_ONE));
        assert_eq!(g.member_sign(&p("XIIII")).unwrap(), None);
        assert_eq!(PauliSet::from_group(&g).unwrap().weight_enumerator(), vec![1, 0, 0, 0, 15, 0]);
    }

    #[test]
    fn anticommuting_generators_rejected() {
        let err = PauliGroup::close(1, &[p("X"), p("Z")], true).unwrap_err();
        assert!(err.to_string().contains("anticommute"));
        assert!(PauliGroup::close(1, &[p("X"), p("-X")], true).is_err());
        let g = PauliGroup::close(1, &[p("X"), p("Z")], false).unwrap();
        assert!(!g.is_abelian());
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = PauliGroup::close(3, &[], true).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.elements().unwrap(), vec![PauliOperator::identity(3)]);
    }

    #[test]
    fn epr_isotropic_subgroup_is_trivial() {
        let s = PauliGroup::stabilizer_from_strs(&["XX", "ZZ"]).unwrap();
        assert_eq!(s.member_sign(&p("YY")).unwrap(), Some(Phase::MINUS_ONE));
        let si = s.isotropic_subgroup(1).unwrap();
        assert_eq!(si.qubits(), 1);
        assert_eq!(si.order(), 1);
        assert_eq!(s.isotropic_subgroup(0).unwrap(), s);
    }

    #[test]
    fn isotropic_subgroup_keeps_sender_only_elements() {
        // <ZZI, IXX, XIX> style group; the sender-only part is <ZZ> on 2 qubits.
        let s = PauliGroup::stabilizer_from_strs(&["ZZI", "XXX", "IZZ"]).unwrap();
        let si = s.isotropic_subgroup(1).unwrap();
        assert_eq!(si.order(), 2);
        assert_eq!(si.member_sign(&p("ZZ")).unwrap(), Some(Phase::ONE));
    }

    #[test]
    fn coset_and_distance_enumerators() {
        let g = five_qubit();
        // Logical operators times the stabilizer give the normalizer.
        let w = PauliSet::new(5, [p("IIIII"), p("XXXXX"), p("ZZZZZ"), p("YYYYY")]).unwrap();
        let t = PauliSet::coset_set(&w, &g).unwrap();
        assert_eq!(t.len(), 64);
        let d: Vec<f64> = t.distance_enumerator().unwrap().iter().map(crate::exact::ratio_to_f64).collect();
        assert_eq!(d, vec![1.0, 0.0, 0.0, 30.0, 15.0, 18.0]);
        let single = PauliSet::new(5, [PauliOperator::identity(5)]).unwrap();
        assert_eq!(single.weight_enumerator(), vec![1, 0, 0, 0, 0, 0]);
        assert!(PauliSet::new(5, []).unwrap().distance_enumerator().is_err());
    }

    #[test]
    fn triple_statistics_of_identity() {
        let t = PauliSet::new(2, [PauliOperator::identity(2)]).unwrap();
        let st = triple_statistics(&t, &t).unwrap();
        for q in [&st.sigma, &st.mu, &st.nu, &st.eta] {
            assert_eq!(q.get(0, 0, 0, 0).unwrap(), crate::exact::int(1));
            assert_eq!(q.total(), crate::exact::int(1));
        }
    }

    #[test]
    fn five_qubit_normalized_x() {
        let s = PauliSet::from_group(&five_qubit()).unwrap();
        let st = triple_statistics(&s, &s).unwrap().normalized();
        assert_eq!(st.x.get(4, 0, 0, 0).unwrap(), crate::exact::ratio(1, 27));
    }
}
