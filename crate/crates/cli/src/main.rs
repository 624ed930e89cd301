use clap::{Args, Parser, Subcommand, ValueEnum};
use qbound::analysis::{self, DistanceBound};
use qbound::bounds::{self, BoundQuery, BoundResult, LinkMode, Method, UvSymmetry};
use qbound::codefile::{read_code_file, CodeFile};
use qbound::enumerator::{EnumKind, SplitEnumerator};
use qbound::exact::f64_to_ratio;
use qbound::reference;
use qbound::solver::{sdpa, ToleranceSet, Verdict};
use num_rational::BigRational;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTE: u8 = 2;
const EXIT_UNVERIFIED: u8 = 3;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] qbound::Error),
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(qbound::Error::InvalidParameters(_)) => EXIT_USAGE,
            _ => EXIT_COMPUTE,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "qbound", version, about = "Weight enumerators, spectra and LP/SDP size bounds for EA-CWS codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print weight enumerators of a code file as CSV.
    Enum {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
    },
    /// Spectrum and generalized-stabilizer group of a code file.
    Spectrum { file: PathBuf },
    /// Minimum distance and CWS distance bounds of a code file.
    Distance { file: PathBuf },
    /// Largest feasible code size for one parameter set.
    Bound {
        #[command(flatten)]
        cell: CellArgs,
        #[command(flatten)]
        opts: SolveArgs,
        /// Candidate log2|S_I| values, e.g. `3,4` or `2..4`.
        #[arg(long)]
        s_range: Option<String>,
        #[arg(long, default_value_t = 3)]
        k_extra: u64,
        #[arg(long, default_value_t = 1 << 14)]
        m_max: u64,
    },
    /// Bound tables over parameter ranges, resumable through a journal.
    Table {
        /// Range of n, e.g. `3..6` or `5`.
        #[arg(long)]
        n: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        d: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Lp)]
        method: MethodArg,
        #[command(flatten)]
        opts: SolveArgs,
        #[arg(long, value_enum, default_value_t = TableKind::Bounds)]
        kind: TableKind,
        #[arg(long)]
        out: PathBuf,
        /// Progress journal; defaults to `<out>.journal`.
        #[arg(long)]
        journal: Option<PathBuf>,
        /// Also write a cell-by-cell comparison with the published table.
        #[arg(long)]
        diff: Option<PathBuf>,
        /// Keep only cells that appear in the published table.
        #[arg(long)]
        reference_cells: bool,
    },
    /// Write one feasibility program to a file.
    Export {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Format::Sdpa)]
        format: Format,
        #[arg(long)]
        link_mode: Option<LinkArg>,
        #[arg(long, value_enum, default_value_t = UvArg::Swap)]
        uv_symmetry: UvArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Clone)]
struct CellArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    c: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Lp)]
    method: MethodArg,
}

#[derive(Args, Clone)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = LinkArg::BI0)]
    link_mode: LinkArg,
    #[arg(long, value_enum, default_value_t = UvArg::Swap)]
    uv_symmetry: UvArg,
    /// Phase-I acceptance tolerance on the relaxation τ.
    #[arg(long)]
    phase_tol: Option<f64>,
    /// Smallest accepted infeasibility-certificate margin.
    #[arg(long)]
    cert_tol: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Lower bound on B_{d,0} - A_{d,0}; 0 drops the constraint.
    #[arg(long, default_value_t = 0.0)]
    strict_delta: f64,
}

impl SolveArgs {
    fn tolerances(&self) -> CliResult<ToleranceSet> {
        let mut t = ToleranceSet::default();
        for (v, slot) in [(self.phase_tol, &mut t.phase), (self.cert_tol, &mut t.cert)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!("tolerance must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        if let Some(k) = self.max_iterations {
            if k == 0 {
                return Err(CliError::Usage("--max-iterations must be positive".into()));
            }
            t.max_iterations = k;
        }
        Ok(t)
    }

    fn apply(&self, q: &mut BoundQuery) -> CliResult<()> {
        if !(self.strict_delta >= 0.0 && self.strict_delta.is_finite()) {
            return Err(CliError::Usage("--strict-delta must be nonnegative".into()));
        }
        q.options.link_mode = self.link_mode.into();
        q.options.uv_symmetry = self.uv_symmetry.into();
        q.options.strict_delta = f64_to_ratio(self.strict_delta);
        q.tolerances = self.tolerances()?;
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "D", alias = "d")]
    D,
    Split,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Dense,
    Combinatorial,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Lp,
    Sdp,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Lp => Method::Lp,
            MethodArg::Sdp => Method::Sdp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LinkArg {
    #[value(name = "b_i0")]
    BI0,
    #[value(name = "b_anti_diagonal")]
    AntiDiagonal,
}

impl From<LinkArg> for LinkMode {
    fn from(l: LinkArg) -> LinkMode {
        match l {
            LinkArg::BI0 => LinkMode::BI0,
            LinkArg::AntiDiagonal => LinkMode::AntiDiagonal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UvArg {
    Swap,
    Full,
}

impl From<UvArg> for UvSymmetry {
    fn from(u: UvArg) -> UvSymmetry {
        match u {
            UvArg::Swap => UvSymmetry::Swap,
            UvArg::Full => UvSymmetry::Full,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    /// Largest code size per (n, c, d).
    Bounds,
    /// Feasible/infeasible distance pairs for [[n, k; c]] stabilizer codes.
    Optimal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Sdpa,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("QBOUND_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("QBOUND_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(CliError::Usage("QBOUND_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cmd: Command) -> CliResult<u8> {
    match cmd {
        Command::Enum { file, which, route } => cmd_enum(&file, which, route),
        Command::Spectrum { file } => cmd_spectrum(&file),
        Command::Distance { file } => cmd_distance(&file),
        Command::Bound { cell, opts, s_range, k_extra, m_max } => cmd_bound(&cell, &opts, s_range.as_deref(), k_extra, m_max),
        Command::Table { n, c, d, method, opts, kind, out, journal, diff, reference_cells } => {
            let spec = TableSpec { n: parse_range(&n)?, c: parse_range(&c)?, d: parse_range(&d)?, method: method.into(), opts, kind, reference_cells };
            let journal = journal.unwrap_or_else(|| append_ext(&out, "journal"));
            cmd_table(&spec, &out, &journal, diff.as_deref())
        }
        Command::Export { cell, m, s, format, link_mode, uv_symmetry, out } => cmd_export(&cell, m, s, format, link_mode, uv_symmetry, &out),
    }
}

fn load(file: &Path) -> CliResult<CodeFile> {
    Ok(read_code_file(file)?)
}

/// `a..b` (inclusive), `a,b,c` or a single value.
fn parse_range(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("bad range {s:?}"));
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}

fn append_ext(p: &Path, ext: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn fmt_f64(v: f64) -> String {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        format!("{}", r as i64)
    } else {
        format!("{:.12}", v).trim_end_matches('0').to_string()
    }
}

struct Computed {
    kind: EnumKind,
    dense: Option<SplitEnumerator<f64>>,
    exact: Option<SplitEnumerator<BigRational>>,
}

fn cmd_enum(file: &Path, which: Which, route: Route) -> CliResult<u8> {
    let code = load(file)?;
    let kinds: Vec<EnumKind> = match which {
        Which::A => vec![EnumKind::A],
        Which::B => vec![EnumKind::B],
        Which::D => vec![EnumKind::D],
        Which::Split | Which::All => vec![EnumKind::A, EnumKind::B, EnumKind::D],
    };
    let want_dense = route != Route::Combinatorial;
    let want_comb = route != Route::Dense;
    let dense = if want_dense { Some(code.dense()?) } else { None };
    let (n, c) = (code.n(), code.c());
    let mut results = Vec::new();
    for kind in kinds {
        let d = match &dense {
            Some(dc) => Some(match kind {
                EnumKind::A => analysis::sl_enumerators(dc)?.0,
                EnumKind::B => analysis::sl_enumerators(dc)?.1,
                _ => analysis::shadow_enumerator(dc)?,
            }),
            None => None,
        };
        let e = if want_comb {
            let cws = code.cws().ok_or_else(|| CliError::Usage("the combinatorial route needs a CWS code file".into()))?;
            Some(match kind {
                EnumKind::A => SplitEnumerator::from_rows(n, c, EnumKind::A, analysis::combinatorial_a(cws)?.into_iter().map(|v| vec![v]).collect())?,
                EnumKind::B => analysis::combinatorial_b(cws)?,
                _ => SplitEnumerator::from_rows(n, c, EnumKind::D, analysis::combinatorial_shadow(cws)?.into_iter().map(|v| vec![v]).collect())?,
            })
        } else {
            None
        };
        if let (Some(d), Some(e)) = (&d, &e) {
            let diff = e.max_abs_diff(d)?;
            if diff > 1e-9 {
                return Err(CliError::Mismatch(format!("{kind} enumerator: dense and combinatorial routes differ by {diff:.3e}")));
            }
            eprintln!("{kind}: dense and combinatorial routes agree (max difference {diff:.1e})");
        }
        results.push(Computed { kind, dense: d, exact: e });
    }

    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["enumerator", "i", "j", "value"])?;
    for r in &results {
        let rows: Vec<Vec<String>> = match (&r.exact, &r.dense) {
            (Some(e), _) => e.rows().iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect(),
            (None, Some(d)) => d.rows().iter().map(|row| row.iter().map(|v| fmt_f64(*v)).collect()).collect(),
            _ => unreachable!(),
        };
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                w.write_record([r.kind.to_string(), i.to_string(), j.to_string(), v.clone()])?;
            }
        }
        if which == Which::All && c > 0 {
            let sums: Vec<String> = match (&r.exact, &r.dense) {
                (Some(e), _) => e.unsplit().iter().map(|v| v.to_string()).collect(),
                (None, Some(d)) => d.unsplit().iter().map(|v| fmt_f64(*v)).collect(),
                _ => unreachable!(),
            };
            for (i, v) in sums.into_iter().enumerate() {
                w.write_record([format!("{}_total", r.kind), i.to_string(), String::new(), v])?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}

fn cmd_spectrum(file: &Path) -> CliResult<u8> {
    let code = load(file)?;
    let report = analysis::gs_report(&code.dense()?)?;
    let values: Vec<String> = report.spectrum_values().iter().map(|v| fmt_f64(*v)).collect();
    println!("spectrum: {{{}}}", values.join(", "));
    for s in &report.spectrum {
        println!("  {:>16}  {} Paulis", fmt_f64(s.value), s.count);
    }
    let gens: Vec<String> = report.gs_group.generators().iter().map(|g| g.to_string()).collect();
    println!("GS group order {} generated by [{}]", report.gs_group.order(), gens.join(", "));
    println!("S_+1 ∪ -S_-1 is a group: {}", report.gs_set_is_group());
    if let Some(cws) = code.cws() {
        let same = report.gs_group.order() == cws.stabilizer().order()
            && cws.stabilizer().generators().iter().all(|g| report.gs_group.member_sign(g).ok().flatten().is_some());
        println!("GS group equals the CWS group: {same}");
    }
    Ok(0)
}

fn cmd_distance(file: &Path) -> CliResult<u8> {
    let code = load(file)?;
    let report = analysis::gs_report(&code.dense()?)?;
    let md = report.min_distance();
    if md.undetectable_found {
        println!("minimum distance: {}", md.d);
    } else {
        println!("minimum distance: every error is detectable (reported as n + 1 = {})", md.d);
    }
    if let Some(cws) = code.cws() {
        let show = |b: DistanceBound| match b {
            DistanceBound::Bound(d) => d.to_string(),
            DistanceBound::EmptyDifference => "none (WS_I \\ S_I is empty)".into(),
        };
        println!("CWS bound via S_I: {}", show(analysis::distance_upper_bound(cws)?));
        println!("CWS bound via GS group: {}", show(analysis::distance_upper_bound_gs(cws, &report)?));
    }
    Ok(0)
}

fn build_query(cell: &CellArgs, opts: &SolveArgs) -> CliResult<BoundQuery> {
    if cell.d == 0 || cell.d > cell.n {
        return Err(CliError::Usage(format!("need 1 <= d <= n, got d = {}, n = {}", cell.d, cell.n)));
    }
    let mut q = BoundQuery::new(cell.n, cell.c, cell.d, cell.method.into())?;
    opts.apply(&mut q)?;
    Ok(q)
}

fn cmd_bound(cell: &CellArgs, opts: &SolveArgs, s_range: Option<&str>, k_extra: u64, m_max: u64) -> CliResult<u8> {
    let mut q = build_query(cell, opts)?;
    if let Some(s) = s_range {
        q.s_range = parse_range(s)?;
    }
    q.k_extra = k_extra;
    q.m_max = m_max;
    q.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let r = bounds::max_code_size(&q)?;
    for v in &r.verdicts {
        let cells: Vec<String> = v.cells.iter().map(|c| format!("s={} {} [{}; {}]", c.s, c.verdict, c.decided_by, c.certificate)).collect();
        println!("M = {:>5}: {:<12} {}", v.m, v.verdict.to_string(), cells.join(", "));
    }
    if !r.anomalies.is_empty() {
        println!("anomalies (infeasible below the bound): {:?}", r.anomalies);
    }
    let bound = r.bound.map_or_else(|| "none".to_string(), |b| b.to_string());
    println!(
        "(n, c, d) = ({}, {}, {}) method {} link {}: bound {}{}  [{:.2}s]",
        r.n,
        r.c,
        r.d,
        r.method,
        r.link_mode,
        bound,
        if r.unverified { " (unverified)" } else { "" },
        r.seconds
    );
    Ok(if r.unverified { EXIT_UNVERIFIED } else { 0 })
}

struct TableSpec {
    n: Vec<usize>,
    c: Vec<usize>,
    d: Vec<usize>,
    method: Method,
    opts: SolveArgs,
    kind: TableKind,
    reference_cells: bool,
}

const BOUND_HEADER: [&str; 9] = ["n", "c", "d", "method", "link_mode", "bound", "lp_reference_bound", "status", "seconds"];
const OPTIMAL_HEADER: [&str; 9] = ["n", "k", "c", "d", "method", "verdict_d", "verdict_d_plus_1", "status", "seconds"];

/// Table cells as `(n, c, d)` or, for optimality tables, `(n, k, c)`.
fn table_cells(spec: &TableSpec) -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    match spec.kind {
        TableKind::Bounds => {
            for &n in &spec.n {
                for &c in &spec.c {
                    for &d in &spec.d {
                        if d >= 1 && d <= n && (!spec.reference_cells || reference::lookup(n, c, d).is_some()) {
                            cells.push((n, c, d));
                        }
                    }
                }
            }
        }
        TableKind::Optimal => {
            for code in reference::OPTIMAL_CODES {
                if spec.n.contains(&code.n) && spec.c.contains(&code.c) && spec.d.contains(&code.d) {
                    cells.push((code.n, code.k, code.c));
                }
            }
        }
    }
    cells
}

fn status_of(unverified: bool) -> &'static str {
    if unverified {
        "unverified"
    } else {
        "verified"
    }
}

fn bound_row(spec: &TableSpec, (n, c, d): (usize, usize, usize)) -> Vec<String> {
    let start = Instant::now();
    let run = |method: Method| -> CliResult<BoundResult> {
        let mut q = BoundQuery::new(n, c, d, method)?;
        spec.opts.apply(&mut q)?;
        Ok(bounds::max_code_size(&q)?)
    };
    let show = |b: Option<u64>| b.map_or_else(String::new, |b| b.to_string());
    let link = LinkMode::from(spec.opts.link_mode).to_string();
    let result = run(spec.method).and_then(|r| {
        let lp = if spec.method == Method::Lp { r.clone() } else { run(Method::Lp)? };
        Ok((r, lp))
    });
    let (bound, lp_ref, status) = match result {
        Ok((r, lp)) => (show(r.bound), show(lp.bound), status_of(r.unverified || lp.unverified).to_string()),
        Err(e) => (String::new(), String::new(), format!("error: {e}")),
    };
    vec![
        n.to_string(),
        c.to_string(),
        d.to_string(),
        spec.method.to_string(),
        link,
        bound,
        lp_ref,
        status,
        format!("{:.3}", start.elapsed().as_secs_f64()),
    ]
}

fn optimal_row(spec: &TableSpec, (n, k, c): (usize, usize, usize)) -> Vec<String> {
    let start = Instant::now();
    let d = reference::OPTIMAL_CODES.iter().find(|o| (o.n, o.k, o.c) == (n, k, c)).map_or(0, |o| o.d);
    let decide = |dd: usize| -> CliResult<Verdict> {
        let mut q = BoundQuery::new(n, c, dd, spec.method)?;
        spec.opts.apply(&mut q)?;
        Ok(bounds::decide_m(&q, 1u64 << k)?.verdict)
    };
    let mut row = vec![n.to_string(), k.to_string(), c.to_string(), d.to_string(), spec.method.to_string()];
    let at_d = decide(d);
    let above = if d < n { decide(d + 1).map(|v| v.to_string()) } else { Ok("n/a".to_string()) };
    match (at_d, above) {
        (Ok(a), Ok(b)) => {
            let ok = a == Verdict::Feasible && (b == "infeasible" || b == "n/a");
            let status = if a == Verdict::Inconclusive || b == "inconclusive" {
                "unverified"
            } else if ok {
                "verified"
            } else {
                "mismatch"
            };
            row.extend([a.to_string(), b, status.to_string()]);
        }
        (Err(e), _) | (_, Err(e)) => row.extend([String::new(), String::new(), format!("error: {e}")]),
    }
    row.push(format!("{:.3}", start.elapsed().as_secs_f64()));
    row
}

fn read_journal(path: &Path, header: &[&str]) -> CliResult<BTreeMap<Vec<String>, Vec<String>>> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let mut r = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_path(path)?;
    for rec in r.records() {
        // A truncated final line from an interrupted run is dropped.
        let Ok(rec) = rec else { continue };
        if rec.len() != header.len() {
            continue;
        }
        let row: Vec<String> = rec.iter().map(str::to_string).collect();
        if row[header.len() - 2].starts_with("error") {
            continue;
        }
        done.insert(row[..5].to_vec(), row);
    }
    Ok(done)
}

fn cmd_table(spec: &TableSpec, out: &Path, journal: &Path, diff: Option<&Path>) -> CliResult<u8> {
    spec.opts.tolerances()?;
    let header: &[&str] = match spec.kind {
        TableKind::Bounds => &BOUND_HEADER,
        TableKind::Optimal => &OPTIMAL_HEADER,
    };
    let cells = table_cells(spec);
    let link = LinkMode::from(spec.opts.link_mode).to_string();
    let key = |cell: (usize, usize, usize)| -> Vec<String> {
        let (a, b, c) = cell;
        match spec.kind {
            TableKind::Bounds => vec![a.to_string(), b.to_string(), c.to_string(), spec.method.to_string(), link.clone()],
            TableKind::Optimal => {
                let d = reference::OPTIMAL_CODES.iter().find(|o| (o.n, o.k, o.c) == cell).map_or(0, |o| o.d);
                vec![a.to_string(), b.to_string(), c.to_string(), d.to_string(), spec.method.to_string()]
            }
        }
    };
    let done = read_journal(journal, header)?;
    let todo: Vec<(usize, usize, usize)> = cells.iter().copied().filter(|c| !done.contains_key(&key(*c))).collect();
    if !done.is_empty() {
        eprintln!("resuming: {} of {} cells already in {}", cells.len() - todo.len(), cells.len(), journal.display());
    }

    let fresh = !journal.exists() || std::fs::metadata(journal)?.len() == 0;
    let file = OpenOptions::new().create(true).append(true).open(journal)?;
    let writer = Mutex::new(csv::WriterBuilder::new().has_headers(false).from_writer(file));
    if fresh {
        let mut w = writer.lock().unwrap();
        w.write_record(header)?;
        w.flush()?;
    }
    let results: Vec<CliResult<Vec<String>>> = todo
        .par_iter()
        .map(|&cell| {
            let row = match spec.kind {
                TableKind::Bounds => bound_row(spec, cell),
                TableKind::Optimal => optimal_row(spec, cell),
            };
            eprintln!("{}", row.join(","));
            let mut w = writer.lock().unwrap();
            w.write_record(&row)?;
            w.flush()?;
            Ok(row)
        })
        .collect();
    let mut rows = done;
    for r in results {
        let row = r?;
        rows.insert(row[..5].to_vec(), row);
    }

    let mut w = csv::Writer::from_path(out)?;
    w.write_record(header)?;
    let mut any_unverified = false;
    let mut any_error = false;
    let mut ordered = Vec::new();
    for cell in &cells {
        if let Some(row) = rows.get(&key(*cell)) {
            let status = &row[header.len() - 2];
            any_unverified |= status == "unverified";
            any_error |= status.starts_with("error");
            w.write_record(row)?;
            ordered.push(row.clone());
        }
    }
    w.flush()?;
    if let Some(path) = diff {
        write_diff(spec, &ordered, path)?;
    }
    Ok(if any_error {
        EXIT_COMPUTE
    } else if any_unverified {
        EXIT_UNVERIFIED
    } else {
        0
    })
}

fn write_diff(spec: &TableSpec, rows: &[Vec<String>], path: &Path) -> CliResult<()> {
    let tol = spec.opts.tolerances()?;
    let uv = match spec.opts.uv_symmetry {
        UvArg::Swap => "swap",
        UvArg::Full => "full",
    };
    let mut w = csv::Writer::from_path(path)?;
    match spec.kind {
        TableKind::Bounds => {
            w.write_record(["n", "c", "d", "method", "link_mode", "uv_symmetry", "computed", "published", "match", "status", "phase_tol", "cert_tol"])?;
            for row in rows {
                let (n, c, d): (usize, usize, usize) = (row[0].parse().unwrap(), row[1].parse().unwrap(), row[2].parse().unwrap());
                let published = reference::lookup(n, c, d).map(|cell| if spec.method == Method::Lp { cell.lp } else { cell.sdp });
                let published_s = published.map_or_else(|| "n/a".to_string(), |p| p.to_string());
                let verdict = match published {
                    None => "no-reference",
                    Some(p) if row[5] == p.to_string() => "yes",
                    Some(_) => "no",
                };
                w.write_record([&row[0], &row[1], &row[2], &row[3], &row[4], uv, &row[5], &published_s, verdict, &row[7], &format!("{:e}", tol.phase), &format!("{:e}", tol.cert)])?;
            }
        }
        TableKind::Optimal => {
            w.write_record(["n", "k", "c", "d", "method", "verdict_d", "verdict_d_plus_1", "match", "status", "phase_tol", "cert_tol"])?;
            for row in rows {
                let ok = if row[7] == "verified" { "yes" } else { "no" };
                w.write_record([&row[0], &row[1], &row[2], &row[3], &row[4], &row[5], &row[6], ok, &row[7], &format!("{:e}", tol.phase), &format!("{:e}", tol.cert)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_export(cell: &CellArgs, m: u64, s: usize, format: Format, link: Option<LinkArg>, uv: UvArg, out: &Path) -> CliResult<u8> {
    let Format::Sdpa = format;
    let mut opts = bounds::BuildOptions::default();
    if let Some(l) = link {
        opts.link_mode = l.into();
    }
    opts.uv_symmetry = uv.into();
    let built = match Method::from(cell.method) {
        Method::Lp => bounds::build_lp(cell.n, cell.c, cell.d, m, s, &opts)?,
        Method::Sdp => bounds::build_sdp(cell.n, cell.c, cell.d, m, s, &opts)?,
    };
    sdpa::write_sdpa(&built.program, out)?;
    let p = &built.program;
    eprintln!(
        "wrote {}: {} variables, {} equalities, {} inequalities, {} PSD blocks",
        out.display(),
        p.variables.len(),
        p.equality_count(),
        p.inequality_count(),
        p.blocks.len()
    );
    Ok(0)
}
