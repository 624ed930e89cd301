//! LP and SDP feasibility programs for hypothetical `((n, M, d; c))` EA-CWS
//! codes, and the sweeps over `M` that turn them into size bounds.
//!
//! Programs are built for a fixed `M` and a fixed `s = log2 |S_I|`; a value
//! of `M` is feasible when some `s` in the query's range is.

use crate::analysis::{self, CwsCode};
use crate::enumerator::{EnumKind, ExactEnumerator, SplitEnumerator};
use crate::error::{Error, Result};
use crate::exact::int;
use crate::par::{self, Execution};
use crate::pauli::{self, NormalizedStats, PauliSet};
use crate::solver::{self, BlockEntry, FeasibilityProgram, PsdConstraint, Sense, SolveOutcome, ToleranceSet, Verdict};
use crate::terwilliger::{block_specs, QuadStats, TupleDomain};
use crate::transforms::{binomial, gamma, KravchukTable};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Lp,
    Sdp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lp => "lp",
            Method::Sdp => "sdp",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lp" => Ok(Method::Lp),
            "sdp" => Ok(Method::Sdp),
            _ => Err(Error::InvalidParameters(format!("unknown method {s}"))),
        }
    }
}

/// How `y_{i,0}^{0,0}` is tied to the split enumerator `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkMode {
    /// `3^i C(n,i) y_{i,0}^{0,0} = B_{i,0}`.
    BI0,
    /// `3^i C(n,i) y_{i,0}^{0,0} = Σ_{r+s=i} B_{r,s}`.
    AntiDiagonal,
}

impl fmt::Display for LinkMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkMode::BI0 => "b_i0",
            LinkMode::AntiDiagonal => "b_anti_diagonal",
        })
    }
}

impl std::str::FromStr for LinkMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b_i0" => Ok(LinkMode::BI0),
            "b_anti_diagonal" | "anti_diagonal" => Ok(LinkMode::AntiDiagonal),
            _ => Err(Error::InvalidParameters(format!("unknown link mode {s}"))),
        }
    }
}

/// Index symmetry imposed on the mixed families `u` and `v`. Their triples
/// mix `T1` and `T2`, so a realized code only guarantees the swap
/// `(i, j, t, p) ~ (j, i, t, p)`; `x` and `y` always get the full symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UvSymmetry {
    /// Same permutation symmetry as `x` and `y`.
    Full,
    Swap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildOptions {
    pub link_mode: LinkMode,
    pub uv_symmetry: UvSymmetry,
    /// `B_{d,0} - A_{d,0} ≥ strict_delta`; zero drops the constraint.
    pub strict_delta: BigRational,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { link_mode: LinkMode::BI0, uv_symmetry: UvSymmetry::Swap, strict_delta: BigRational::zero() }
    }
}

/// Variable indices of a built program.
#[derive(Clone, Debug)]
pub struct Layout {
    pub n: usize,
    pub c: usize,
    /// `A_{r,s}` at `r * (c + 1) + s`.
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Per family `x, u, v, y`: the variable of each tuple (canonical order).
    pub families: Option<[Vec<usize>; 4]>,
}

impl Layout {
    pub fn a_var(&self, r: usize, s: usize) -> usize {
        self.a[r * (self.c + 1) + s]
    }

    pub fn b_var(&self, r: usize, s: usize) -> usize {
        self.b[r * (self.c + 1) + s]
    }
}

#[derive(Clone, Debug)]
pub struct BuiltProgram {
    pub program: FeasibilityProgram,
    pub layout: Layout,
}

fn check_params(n: usize, c: usize, d: usize, m: u64, s: usize) -> Result<()> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidParameters(format!("n = {n} must be in 1..=16")));
    }
    if c > 16 {
        return Err(Error::InvalidParameters(format!("c = {c} must be at most 16")));
    }
    if d == 0 || d > n {
        return Err(Error::InvalidParameters(format!("d = {d} must be in 1..={n}")));
    }
    if m == 0 {
        return Err(Error::InvalidParameters("M must be positive".into()));
    }
    if s < n.saturating_sub(c) || s > n {
        return Err(Error::InvalidParameters(format!("s = {s} outside {}..={n}", n.saturating_sub(c))));
    }
    Ok(())
}

fn pow2(e: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << e)
}

fn big(v: i128) -> BigRational {
    int(v)
}

/// Items 1-9 of the linear constraints on `A_{r,s}` and `B_{r,s}`.
fn add_linear(prog: &mut FeasibilityProgram, n: usize, c: usize, d: usize, m: u64, s: usize, opts: &BuildOptions) -> (Vec<usize>, Vec<usize>) {
    let mq = big(m as i128);
    let total = &mq * pow2(n + c);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in 0..=n {
        for q in 0..=c {
            a.push(prog.add_var(format!("A[{r},{q}]"), Some(total.clone())));
        }
    }
    for r in 0..=n {
        for q in 0..=c {
            b.push(prog.add_var(format!("B[{r},{q}]"), Some(total.clone())));
        }
    }
    let w = c + 1;
    let av = |r: usize, q: usize| a[r * w + q];
    let bv = |r: usize, q: usize| b[r * w + q];
    let one = BigRational::one;

    // 1, 2
    prog.add_constraint("A[0,0] = 1", vec![(av(0, 0), one())], Sense::Eq, one());
    prog.add_constraint("B[0,0] = 1", vec![(bv(0, 0), one())], Sense::Eq, one());
    for q in 1..=c {
        prog.add_constraint(format!("A[0,{q}] = 0"), vec![(av(0, q), one())], Sense::Eq, BigRational::zero());
    }
    // 3
    for r in 0..=n {
        for q in 0..=c {
            prog.add_constraint(format!("B[{r},{q}] >= A[{r},{q}]"), vec![(bv(r, q), one()), (av(r, q), -one())], Sense::Ge, BigRational::zero());
        }
    }
    // 4
    for r in 0..d {
        prog.add_constraint(format!("A[{r},0] = B[{r},0]"), vec![(av(r, 0), one()), (bv(r, 0), -one())], Sense::Eq, BigRational::zero());
    }
    if opts.strict_delta.is_positive() {
        prog.add_constraint(format!("B[{d},0] - A[{d},0] >= delta"), vec![(bv(d, 0), one()), (av(d, 0), -one())], Sense::Ge, opts.strict_delta.clone());
    }
    // 5
    let kn = KravchukTable::new(n);
    let kc = KravchukTable::new(c);
    let scale = &mq / pow2(n + c);
    for i in 0..=n {
        for j in 0..=c {
            let mut terms = vec![(bv(i, j), one())];
            for u in 0..=n {
                for v in 0..=c {
                    let k = kn.get(i, u) * kc.get(j, v);
                    if k != 0 {
                        terms.push((av(u, v), -(&scale * big(k))));
                    }
                }
            }
            prog.add_constraint(format!("split MacWilliams ({i},{j})"), terms, Sense::Eq, BigRational::zero());
        }
    }
    // 6
    prog.add_constraint("sum B[i,0] = M 2^s", (0..=n).map(|i| (bv(i, 0), one())).collect(), Sense::Eq, &mq * pow2(s));
    prog.add_constraint("sum B = M 2^(n+c)", b.iter().map(|&k| (k, one())).collect(), Sense::Eq, total.clone());
    // 7, 8 on the unsplit enumerators of length n + c.
    let l = n + c;
    let kl = KravchukTable::new(l);
    let scale_l = &mq / pow2(l);
    for k in 0..=l {
        let mut terms = Vec::new();
        for r in 0..=n {
            for q in 0..=c {
                if r + q == k {
                    terms.push((bv(r, q), one()));
                }
                let kk = kl.get(k, r + q);
                if kk != 0 {
                    terms.push((av(r, q), -(&scale_l * big(kk))));
                }
            }
        }
        prog.add_constraint(format!("unsplit MacWilliams {k}"), terms, Sense::Eq, BigRational::zero());
    }
    for j in 0..=l {
        let mut terms = Vec::new();
        for r in 0..=n {
            for q in 0..=c {
                let mut kk = kl.get(j, r + q);
                if (r + q) % 2 == 1 {
                    kk = -kk;
                }
                if kk != 0 {
                    terms.push((av(r, q), big(kk)));
                }
            }
        }
        prog.add_constraint(format!("unsplit shadow {j}"), terms, Sense::Ge, BigRational::zero());
    }
    // 9
    for i in 0..=n {
        for j in 0..=c {
            let mut terms = Vec::new();
            for u in 0..=n {
                for v in 0..=c {
                    let mut k = kn.get(i, u) * kc.get(j, v);
                    if (u + v) % 2 == 1 {
                        k = -k;
                    }
                    if k != 0 {
                        terms.push((av(u, v), big(k)));
                    }
                }
            }
            prog.add_constraint(format!("split shadow ({i},{j})"), terms, Sense::Ge, BigRational::zero());
        }
    }
    (a, b)
}

/// The linear program for `((n, M, d; c))` with `|WS_I| = M 2^s`.
pub fn build_lp(n: usize, c: usize, d: usize, m: u64, s: usize, opts: &BuildOptions) -> Result<BuiltProgram> {
    check_params(n, c, d, m, s)?;
    let mut program = FeasibilityProgram::new(format!("lp n={n} c={c} d={d} M={m} s={s}"));
    let (a, b) = add_linear(&mut program, n, c, d, m, s, opts);
    Ok(BuiltProgram { program, layout: Layout { n, c, a, b, families: None } })
}

/// Symmetry class of a tuple under all permutations of the triple:
/// `(sorted (i, j, i+j-t-p), t-p)`.
fn full_orbit_key(i: usize, j: usize, t: usize, p: usize) -> [usize; 4] {
    let mut k = [i, j, i + j - t - p];
    k.sort_unstable();
    [k[0], k[1], k[2], t - p]
}

/// Symmetry class under swapping the last two members of the triple only:
/// `(i, j, t, p) ~ (j, i, t, p)`.
fn swap_orbit_key(i: usize, j: usize, t: usize, p: usize) -> [usize; 4] {
    [i.min(j), i.max(j), t, p]
}

const FAMILIES: [&str; 4] = ["x", "u", "v", "y"];

/// The SDP for `((n, M, d; c))` with `|T1| = 2^s`, `|T2| = M 2^s`.
pub fn build_sdp(n: usize, c: usize, d: usize, m: u64, s: usize, opts: &BuildOptions) -> Result<BuiltProgram> {
    check_params(n, c, d, m, s)?;
    let mut prog = FeasibilityProgram::new(format!("sdp n={n} c={c} d={d} M={m} s={s} link={}", opts.link_mode));
    let (a, b) = add_linear(&mut prog, n, c, d, m, s, opts);
    let dom = TupleDomain::new(n);
    let one = BigRational::one;
    let mq = big(m as i128);
    let t1 = pow2(s);
    let t2 = &mq * &t1;
    let i0 = |i: usize| dom.index(i, 0, 0, 0).expect("(i,0,0,0) is a valid tuple");
    let gamma_i0 = |i: usize| big(gamma(i, 0, 0, 0, n));

    // One variable per symmetry class, registered in canonical order of the
    // class's first tuple.
    let mut fam_vars: Vec<Vec<usize>> = Vec::new();
    for (f, name) in FAMILIES.iter().enumerate() {
        // z ≤ z_{i,i}^{i,i} and Σ_i γ_{i,0}^{0,0} z_{i,i}^{i,i} ≤ |T2|, tighter for x.
        let size = if f == 0 { &t1 } else { &t2 };
        let full = f == 0 || f == 3 || opts.uv_symmetry == UvSymmetry::Full;
        let key = |(i, j, t, p): (usize, usize, usize, usize)| if full { full_orbit_key(i, j, t, p) } else { swap_orbit_key(i, j, t, p) };
        let mut class_of: BTreeMap<[usize; 4], usize> = BTreeMap::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let tuple_class: Vec<usize> = dom
            .iter()
            .enumerate()
            .map(|(k, tp)| {
                let o = *class_of.entry(key(tp)).or_insert_with(|| {
                    members.push(Vec::new());
                    members.len() - 1
                });
                members[o].push(k);
                o
            })
            .collect();
        let vars: Vec<usize> = members
            .iter()
            .map(|ms| {
                let (i, j, t, p) = dom.tuple(ms[0]);
                let upper = ms.iter().map(|&k| size / gamma_i0(dom.tuple(k).0)).min().expect("classes are nonempty");
                prog.add_var(format!("{name}[{i},{j},{t},{p}]"), Some(upper))
            })
            .collect();
        fam_vars.push(tuple_class.iter().map(|&o| vars[o]).collect());
    }
    let var = |f: usize, k: usize| fam_vars[f][k];
    let (x, u, v, y) = (0, 1, 2, 3);

    // 2, 3
    for (f, size) in [(x, &t1), (v, &t1), (u, &t2), (y, &t2)] {
        let terms = (0..=n).map(|i| (var(f, i0(i)), gamma_i0(i))).collect();
        prog.add_constraint(format!("sum gamma {}[i,0,0,0] = |T|", FAMILIES[f]), terms, Sense::Eq, size.clone());
    }
    // 4
    let mut seen: BTreeSet<(usize, usize, bool)> = BTreeSet::new();
    for k in 0..dom.len() {
        for (lo, hi, scaled) in [(var(x, k), var(u, k), false), (var(x, k), var(v, k), false), (var(u, k), var(y, k), true), (var(v, k), var(y, k), true)] {
            if !seen.insert((lo, hi, scaled)) {
                continue;
            }
            let (nl, nh) = (prog.variables[lo].name.clone(), prog.variables[hi].name.clone());
            let coef = if scaled { mq.clone() } else { one() };
            let label = if scaled { format!("{nl} <= M {nh}") } else { format!("{nl} <= {nh}") };
            prog.add_constraint(label, vec![(hi, coef), (lo, -one())], Sense::Ge, BigRational::zero());
        }
    }
    // 5, 6, and 8 as `z ≤ z_{i,i}^{i,i}` (the diagonal of the R matrix); for
    // x and y this is the same variable as `z_{i,0}^{0,0}`.
    let mut pairs: BTreeSet<(usize, usize, bool)> = BTreeSet::new();
    for (k, (i, j, _, _)) in dom.iter().enumerate() {
        if i < d || j < d {
            pairs.insert((var(x, k), var(v, k), true));
        }
        if i < d && j < d {
            pairs.insert((var(x, k), var(u, k), true));
        }
        let diag = dom.index(i, i, i, i).expect("(i,i,i,i) is a valid tuple");
        for f in 0..4 {
            pairs.insert((var(f, diag), var(f, k), false));
        }
    }
    for (p, q, eq) in pairs {
        if p == q {
            continue;
        }
        let (np, nq) = (prog.variables[p].name.clone(), prog.variables[q].name.clone());
        if eq {
            prog.add_constraint(format!("{np} = {nq}"), vec![(p, one()), (q, -one())], Sense::Eq, BigRational::zero());
        } else {
            prog.add_constraint(format!("{nq} <= {np}"), vec![(p, one()), (q, -one())], Sense::Ge, BigRational::zero());
        }
    }
    // 7
    let origin = dom.index(0, 0, 0, 0).expect("origin tuple");
    for f in 0..4 {
        prog.add_constraint(format!("{}[0,0,0,0] = 1", FAMILIES[f]), vec![(var(f, origin), one())], Sense::Eq, one());
    }
    // Delsarte-type inequalities for x, u, y.
    let kn = KravchukTable::new(n);
    for f in [x, u, y] {
        for i in 0..=n {
            let terms = (0..=n)
                .filter(|&k| kn.get(i, k) != 0)
                .map(|k| (var(f, i0(k)), gamma_i0(k) * big(kn.get(i, k))))
                .collect();
            prog.add_constraint(format!("Delsarte {} {i}", FAMILIES[f]), terms, Sense::Ge, BigRational::zero());
        }
    }
    // Link to B.
    for i in 0..=n {
        let mut terms = vec![(var(y, i0(i)), gamma_i0(i))];
        match opts.link_mode {
            LinkMode::BI0 => terms.push((b[i * (c + 1)], -one())),
            LinkMode::AntiDiagonal => {
                for r in i.saturating_sub(c)..=i {
                    terms.push((b[r * (c + 1) + (i - r)], -one()));
                }
            }
        }
        prog.add_constraint(format!("link y[{i},0,0,0]"), terms, Sense::Eq, BigRational::zero());
    }
    // PSD families: plain and primed, on the integer congruent blocks.
    let specs = block_specs(n);
    for f in 0..4 {
        for primed in [false, true] {
            for spec in &specs {
                let mut entries = Vec::new();
                for r in 0..spec.dim {
                    for q in r..spec.dim {
                        let mut terms = Vec::new();
                        for term in spec.entry(r, q) {
                            let coef = big(term.int_coef);
                            if primed {
                                let (i, j, t, p) = dom.tuple(term.tuple);
                                terms.push((var(f, i0(i + j - t - p)), coef.clone()));
                                terms.push((var(f, term.tuple), -coef));
                            } else {
                                terms.push((var(f, term.tuple), coef));
                            }
                        }
                        let terms = crate::solver::program::merge_terms(terms);
                        if !terms.is_empty() {
                            entries.push(BlockEntry { row: r, col: q, terms, constant: BigRational::zero() });
                        }
                    }
                }
                prog.add_block(PsdConstraint {
                    label: format!("R{}[{}] a={} k={}", if primed { "'" } else { "" }, FAMILIES[f], spec.a, spec.k),
                    dim: spec.dim,
                    entries,
                    congruence: spec.congruence(n),
                });
            }
        }
    }
    Ok(BuiltProgram { program: prog, layout: Layout { n, c, a, b, families: Some(fam_vars.try_into().expect("four families")) } })
}

/// Exact statistics of a realized code, for plug-in checks.
#[derive(Clone, Debug)]
pub struct RealizedStats {
    pub a: ExactEnumerator,
    pub b: ExactEnumerator,
    /// `T1 = S_I`, `T2 = WS_I`.
    pub stats: NormalizedStats,
    /// `log2 |S_I|`.
    pub s: usize,
}

/// `A`, `B` and normalized triple statistics of an unassisted CWS code.
pub fn realized_stats(code: &CwsCode) -> Result<RealizedStats> {
    if code.c() != 0 {
        return Err(Error::InvalidParameters("realized statistics need an exact split A, available for c = 0".into()));
    }
    let a = SplitEnumerator::from_unsplit(EnumKind::A, analysis::combinatorial_a(code)?)?;
    let b = analysis::combinatorial_b(code)?;
    let si = code.isotropic_subgroup()?;
    let t1 = PauliSet::from_group(&si)?;
    let t2 = PauliSet::coset_set(&code.word_set()?, &si)?;
    let stats = pauli::triple_statistics(&t1, &t2)?.normalized();
    Ok(RealizedStats { a, b, stats, s: si.rank() })
}

/// Assignment of a built program's variables from realized statistics.
/// Fails if the statistics break the orbit symmetry the program assumes.
pub fn realized_assignment(built: &BuiltProgram, real: &RealizedStats) -> Result<Vec<BigRational>> {
    let lay = &built.layout;
    real.a.check_shape(lay.n, lay.c)?;
    real.b.check_shape(lay.n, lay.c)?;
    let mut z: Vec<Option<BigRational>> = vec![None; built.program.variables.len()];
    let mut set = |k: usize, v: BigRational, what: &str| -> Result<()> {
        match &z[k] {
            Some(old) if *old != v => Err(Error::InvalidParameters(format!("{what}: {} gets both {old} and {v}", built.program.variables[k].name))),
            _ => {
                z[k] = Some(v);
                Ok(())
            }
        }
    };
    for r in 0..=lay.n {
        for q in 0..=lay.c {
            set(lay.a_var(r, q), real.a.get(r, q).clone(), "A")?;
            set(lay.b_var(r, q), real.b.get(r, q).clone(), "B")?;
        }
    }
    if let Some(fams) = &lay.families {
        let vals: [&QuadStats; 4] = [&real.stats.x, &real.stats.u, &real.stats.v, &real.stats.y];
        for (f, vars) in fams.iter().enumerate() {
            for (k, &var) in vars.iter().enumerate() {
                set(var, vals[f].values()[k].clone(), FAMILIES[f])?;
            }
        }
    }
    z.into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::Internal(format!("variable {k} not assigned"))))
        .collect()
}

/// A complete sweep request.
#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub n: usize,
    pub c: usize,
    pub d: usize,
    pub method: Method,
    pub options: BuildOptions,
    pub s_range: Vec<usize>,
    pub tolerances: ToleranceSet,
    /// Extra `M` values probed after the first infeasible one.
    pub k_extra: u64,
    /// The sweep gives up (unverified) past this `M`.
    pub m_max: u64,
    pub exec: Execution,
}

impl BoundQuery {
    pub fn new(n: usize, c: usize, d: usize, method: Method) -> Result<Self> {
        let q = BoundQuery {
            n,
            c,
            d,
            method,
            options: BuildOptions::default(),
            s_range: (n.saturating_sub(c)..=n).collect(),
            tolerances: ToleranceSet::default(),
            k_extra: 3,
            m_max: 1 << 14,
            exec: Execution::default(),
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_link_mode(mut self, mode: LinkMode) -> Self {
        self.options.link_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.n, self.c, self.d, 1, self.n)?;
        if self.s_range.is_empty() {
            return Err(Error::InvalidParameters("empty s range".into()));
        }
        for &s in &self.s_range {
            check_params(self.n, self.c, self.d, 1, s)?;
        }
        Ok(())
    }
}

/// Verdict for one `(M, s)` program.
#[derive(Clone, Debug)]
pub struct CellVerdict {
    pub s: usize,
    pub verdict: Verdict,
    /// Which check decided the cell: `lp-exact`, `sdp`, or `lp-exact+sdp`.
    pub decided_by: &'static str,
    pub certificate: String,
    pub seconds: f64,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct MVerdict {
    pub m: u64,
    pub verdict: Verdict,
    pub cells: Vec<CellVerdict>,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct BoundResult {
    pub n: usize,
    pub c: usize,
    pub d: usize,
    pub method: Method,
    pub link_mode: LinkMode,
    pub verdicts: Vec<MVerdict>,
    /// Largest feasible `M`, `None` when no probed `M` is feasible.
    pub bound: Option<u64>,
    /// Some verdict that could change the bound is inconclusive.
    pub unverified: bool,
    /// Infeasible `M` values below the bound.
    pub anomalies: Vec<u64>,
    pub seconds: f64,
}

fn certificate_kind(out: &SolveOutcome) -> String {
    match &out.certificate {
        solver::Certificate::None => match out.verdict {
            Verdict::Feasible => "witness".into(),
            _ => "none".into(),
        },
        solver::Certificate::Equalities(_) => "equalities".into(),
        solver::Certificate::Farkas(y) => format!("farkas/{}", y.iter().filter(|v| !v.is_zero()).count()),
        solver::Certificate::Dual(_) => format!("dual/margin={:.2e}", out.residuals.certificate_margin),
    }
}

/// Decides one `(M, s)` cell. SDP cells are first checked with the exact LP,
/// whose infeasibility settles them.
pub fn decide_cell(q: &BoundQuery, m: u64, s: usize) -> Result<CellVerdict> {
    let start = Instant::now();
    let lp = build_lp(q.n, q.c, q.d, m, s, &q.options)?;
    let lp_out = solver::solve_lp_exact(&lp.program)?;
    let mut cell = CellVerdict {
        s,
        verdict: lp_out.verdict,
        decided_by: "lp-exact",
        certificate: certificate_kind(&lp_out),
        seconds: 0.0,
        note: String::new(),
    };
    if q.method == Method::Sdp && lp_out.verdict == Verdict::Feasible {
        let sdp = build_sdp(q.n, q.c, q.d, m, s, &q.options)?;
        let out = solver::solve_feasibility(&sdp.program, q.tolerances)?;
        cell.verdict = out.verdict;
        cell.decided_by = "lp-exact+sdp";
        cell.certificate = certificate_kind(&out);
        cell.note = out.note;
    }
    cell.seconds = start.elapsed().as_secs_f64();
    Ok(cell)
}

/// Decides `M`: feasible if some `s` is, infeasible if every `s` is.
pub fn decide_m(q: &BoundQuery, m: u64) -> Result<MVerdict> {
    let start = Instant::now();
    let cells = par::map_slice(q.exec, &q.s_range, |&s| decide_cell(q, m, s)).into_iter().collect::<Result<Vec<_>>>()?;
    let verdict = if cells.iter().any(|c| c.verdict == Verdict::Feasible) {
        Verdict::Feasible
    } else if cells.iter().all(|c| c.verdict == Verdict::Infeasible) {
        Verdict::Infeasible
    } else {
        Verdict::Inconclusive
    };
    Ok(MVerdict { m, verdict, cells, seconds: start.elapsed().as_secs_f64() })
}

/// Sweeps `M = 2, 3, …` until the first infeasible value plus `k_extra`
/// probes.
pub fn max_code_size(q: &BoundQuery) -> Result<BoundResult> {
    q.validate()?;
    let start = Instant::now();
    let mut verdicts = Vec::new();
    let mut first_infeasible: Option<u64> = None;
    let mut exhausted = false;
    let mut m = 2u64;
    loop {
        if let Some(f) = first_infeasible {
            if m > f + q.k_extra {
                break;
            }
        }
        if m > q.m_max {
            exhausted = true;
            break;
        }
        let v = decide_m(q, m)?;
        if v.verdict == Verdict::Infeasible && first_infeasible.is_none() {
            first_infeasible = Some(m);
        }
        verdicts.push(v);
        m += 1;
    }
    let bound = verdicts.iter().filter(|v| v.verdict == Verdict::Feasible).map(|v| v.m).max();
    let floor = bound.unwrap_or(1);
    let unverified = exhausted || verdicts.iter().any(|v| v.verdict == Verdict::Inconclusive && v.m > floor);
    let anomalies = verdicts.iter().filter(|v| v.verdict == Verdict::Infeasible && v.m < floor).map(|v| v.m).collect();
    Ok(BoundResult {
        n: q.n,
        c: q.c,
        d: q.d,
        method: q.method,
        link_mode: q.options.link_mode,
        verdicts,
        bound,
        unverified,
        anomalies,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug)]
pub struct OptimalityResult {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    /// `(d, verdict at M = 2^k)` in increasing `d`.
    pub verdicts: Vec<(usize, Verdict)>,
    pub max_d: Option<usize>,
    pub unverified: bool,
}

/// Largest `d` for which `[[n, k; c]]` (`M = 2^k`) passes the program.
pub fn stabilizer_optimality(n: usize, k: usize, c: usize, method: Method, tol: ToleranceSet) -> Result<OptimalityResult> {
    if k >= 63 {
        return Err(Error::InvalidParameters(format!("k = {k} too large")));
    }
    let m = 1u64 << k;
    let mut verdicts = Vec::new();
    for d in 1..=n {
        let mut q = BoundQuery::new(n, c, d, method)?;
        q.tolerances = tol;
        let v = decide_m(&q, m)?.verdict;
        verdicts.push((d, v));
        if v == Verdict::Infeasible {
            break;
        }
    }
    let max_d = verdicts.iter().filter(|(_, v)| *v == Verdict::Feasible).map(|(d, _)| *d).max();
    let unverified = verdicts.iter().any(|(_, v)| *v == Verdict::Inconclusive);
    Ok(OptimalityResult { n, k, c, verdicts, max_d, unverified })
}

/// `3^i C(n, i)`, the number of weight-`i` Paulis on `n` qubits.
pub fn weight_class_size(n: usize, i: usize) -> BigRational {
    big(3i128.pow(i as u32) * binomial(n as i64, i as i64))
}
