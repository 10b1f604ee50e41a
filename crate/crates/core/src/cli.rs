//! The `rpp` command line: gen, locate, window, verify, search, bounds and simulate.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 verification failure,
//! 4 locate failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arr2d::{Arr2D, Params2D};
use crate::bitmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::format::{
    parse_window, read_pattern, write_pattern, Header, Layout, Payload, PatternFile, PatternKind, Region,
};
use crate::oracle::{
    check_modular_1d, min_window_distance_1d, min_window_distance_2d, plotkin_upper, region_corners,
    singleton_upper, sphere_packing_max_positions, DenseArray, Metric, Position, Sampling, VerificationReport,
    WindowSource,
};
use crate::qary::{
    build_crps, construct_ta, construct_tb, exact_rps, exact_rps_full_distance, MixedAlphabet,
};
use crate::rank2d::RankArray;
use crate::redundancy::Redundancy;
use crate::search::{max_rps_length, render_table, search_table, DEFAULT_BUDGET};
use crate::seq1d::{solve_params_1d, solve_params_for_n, ParamSearch, Params1D, Seq1D, MATERIALIZE_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_LOCATE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "rpp", version, about = "Robust positioning sequences and arrays")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a pattern and write it as a pattern file.
    Gen(GenArgs),
    /// Find the position of a (possibly corrupted) window.
    Locate(LocateArgs),
    /// Print the window at a position, optionally with random bit flips.
    Window(WindowArgs),
    /// Check window distances of a pattern file by brute force.
    Verify(VerifyArgs),
    /// Exhaustive search for the longest binary (n, d) sequence.
    Search(SearchArgs),
    /// Print upper bounds on sequence length and position count.
    Bounds(BoundsArgs),
    /// Locate success rate as a function of the number of bit errors.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Rps1d,
    Rpa2d,
    Rank2d,
    QaryTa,
    QaryTb,
    Crps,
    Exact,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long = "nR", alias = "nr")]
    pub n_r: Option<usize>,
    /// Window length (1-D), strength (q-ary) or target length for rps1d.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub r: Option<u64>,
    /// Array rows to materialize, as a..b.
    #[arg(long)]
    pub rows: Option<String>,
    /// Array columns to materialize, as a..b.
    #[arg(long)]
    pub cols: Option<String>,
    /// Write parameters only; windows are produced on demand.
    #[arg(long)]
    pub lazy: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LocateArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    /// Window file; `-` or absent reads stdin.
    #[arg(long)]
    pub window: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long)]
    pub pos: Option<String>,
    #[arg(long)]
    pub row: Option<String>,
    #[arg(long)]
    pub col: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub flips: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Hamming,
    Rank,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub file: PathBuf,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Only compare windows whose starts agree modulo n.
    #[arg(long)]
    pub modular: bool,
    #[arg(long)]
    pub cyclic: bool,
    #[arg(long, value_enum)]
    pub metric: Option<MetricArg>,
    /// Compare this many random window pairs instead of all pairs.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Window starts to check for lazy 1-D patterns, as a..b.
    #[arg(long)]
    pub range: Option<String>,
    /// Corner rows for lazy arrays, as a..b.
    #[arg(long)]
    pub rows: Option<String>,
    /// Corner columns for lazy arrays, as a..b.
    #[arg(long)]
    pub cols: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, required_unless_present = "table")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "table")]
    pub d: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Search every cell with 2 <= d <= n <= TABLE.
    #[arg(long)]
    pub table: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimKind {
    Rps1d,
    Rpa2d,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub construction: SimKind,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long = "nR", alias = "nr")]
    pub n_r: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long = "e-max")]
    pub e_max: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

enum Failure {
    Usage(Error),
    Verify,
    Locate(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Runs the CLI with the given arguments and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, out, err),
        Command::Locate(a) => cmd_locate(&a, out),
        Command::Window(a) => cmd_window(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Search(a) => cmd_search(&a, out),
        Command::Bounds(a) => cmd_bounds(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Verify) => EXIT_VERIFY,
        Err(Failure::Locate(e)) => {
            let _ = writeln!(err, "locate failed: {e}");
            EXIT_LOCATE
        }
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParam(format!("missing --{flag}")))
}

fn parse_big(s: &str) -> Result<BigUint> {
    BigUint::parse_bytes(s.trim().as_bytes(), 10).ok_or_else(|| Error::Parse(format!("not a nonnegative integer: {s:?}")))
}

/// Parses `a..b` into (a, b - a).
fn parse_range(s: &str) -> Result<(BigUint, usize)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("expected a range a..b, got {s:?}")))?;
    let (a, b) = (parse_big(a)?, parse_big(b)?);
    if b <= a {
        return Err(Error::InvalidParam(format!("empty range {s}")));
    }
    let len = (&b - &a)
        .to_usize()
        .ok_or_else(|| Error::InvalidParam(format!("range {s} is too long")))?;
    Ok((a, len))
}

fn to_io(e: io::Error) -> Failure {
    Failure::Usage(e.into())
}

fn read_input(path: Option<&Path>) -> Result<String> {
    let mut s = String::new();
    match path {
        None => io::stdin().read_to_string(&mut s)?,
        Some(p) if p == Path::new("-") => io::stdin().read_to_string(&mut s)?,
        Some(p) => File::open(p)?.read_to_string(&mut s)?,
    };
    Ok(s)
}

fn load_pattern(path: &Path) -> Result<PatternFile> {
    if path == Path::new("-") {
        return read_pattern(io::stdin().lock());
    }
    read_pattern(BufReader::new(File::open(path)?))
}

fn print_json<T: Serialize>(out: &mut dyn Write, v: &T) -> CliResult {
    let s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    writeln!(out, "{s}").map_err(to_io)
}

fn bit_line(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn report_redundancy(w: &mut dyn Write, r: &Redundancy) -> io::Result<()> {
    writeln!(w, "positions: {}", r.positions)?;
    writeln!(w, "redundancy: {} = {:.6} bits", r.formula(), r.bits())
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let mut redundancy = None;
    let binary = MixedAlphabet::Field { q: 2 };
    let file = match a.kind {
        GenKind::Rps1d => {
            let d = need(a.d, "d")?;
            let params = match (a.m, a.n_r, a.n) {
                (Some(m), Some(n_r), _) => solve_params_1d(d, m, n_r)?,
                (_, _, Some(n)) => match solve_params_for_n(n, d)? {
                    ParamSearch::Exact(p) => p,
                    ParamSearch::Nearest(p) => {
                        writeln!(err, "note: no instance has n={n}; using nearest n={}", p.n).map_err(to_io)?;
                        p
                    }
                },
                _ => return Err(Error::InvalidParam("rps1d needs --m and --nR, or --n".into()).into()),
            };
            let seq = Seq1D::from_params(params.clone())?;
            redundancy = Some(seq.redundancy()?);
            let small = params.big_n.to_u64().is_some_and(|t| t <= MATERIALIZE_CAP);
            let payload = if a.lazy || !small {
                Payload::Empty
            } else {
                Payload::Bits(seq.materialize()?)
            };
            PatternFile {
                header: Header {
                    kind: PatternKind::Rps1d,
                    n: params.n,
                    n2: None,
                    d,
                    params: serde_json::to_value(&params).map_err(Error::from)?,
                    alphabet: binary,
                    cyclic: false,
                    layout: if payload == Payload::Empty { Layout::None } else { Layout::Bits },
                    length: match &payload {
                        Payload::Bits(b) => b.len() as u64,
                        _ => 0,
                    },
                    region: None,
                },
                payload,
            }
        }
        GenKind::Rpa2d | GenKind::Rank2d => {
            let (d, m, n1, n2) = (need(a.d, "d")?, need(a.m, "m")?, need(a.n1, "n1")?, need(a.n2, "n2")?);
            let (row0, rows) = match &a.rows {
                Some(s) => parse_range(s)?,
                None => (BigUint::zero(), 2 * n1),
            };
            let (col0, cols) = match &a.cols {
                Some(s) => parse_range(s)?,
                None => (BigUint::zero(), 2 * n2),
            };
            let (kind, params, matrix) = if a.kind == GenKind::Rpa2d {
                let arr = Arr2D::new(d, m, n1, n2)?;
                redundancy = Some(arr.redundancy()?);
                let matrix = if a.lazy { None } else { Some(arr.region(&row0, rows, &col0, cols)?) };
                (PatternKind::Rpa2d, serde_json::to_value(arr.params()).map_err(Error::from)?, matrix)
            } else {
                let arr = RankArray::new(d, m, n1, n2)?;
                let matrix = if a.lazy { None } else { Some(arr.region(&row0, rows, &col0, cols)?) };
                (PatternKind::Rank2d, serde_json::to_value(arr.params()).map_err(Error::from)?, matrix)
            };
            let (layout, length, region, payload) = match matrix {
                Some(mat) => (
                    Layout::Rows,
                    rows as u64,
                    Some(Region { row0, col0, rows, cols }),
                    Payload::Rows(mat),
                ),
                None => (Layout::None, 0, None, Payload::Empty),
            };
            PatternFile {
                header: Header {
                    kind,
                    n: n1,
                    n2: Some(n2),
                    d,
                    params,
                    alphabet: binary,
                    cyclic: false,
                    layout,
                    length,
                    region,
                },
                payload,
            }
        }
        GenKind::QaryTa | GenKind::QaryTb => {
            let (q, k) = (need(a.q, "q")?, need(a.k, "k")?);
            let (kind, seq) = if a.kind == GenKind::QaryTa {
                (PatternKind::QaryTa, construct_ta(q, k)?)
            } else {
                (PatternKind::QaryTb, construct_tb(q, k)?)
            };
            let n = q as usize - 1;
            let d = if kind == PatternKind::QaryTa {
                n.saturating_sub(2 * k)
            } else {
                n.saturating_sub(k + 9).div_ceil(2)
            };
            symbol_file(kind, n, d, serde_json::json!({ "q": q, "k": k }), seq.alphabet, false, seq.symbols)
        }
        GenKind::Crps => {
            let (n, p, r) = (need(a.n, "n")?, need(a.p, "p")?, need(a.r, "r")?);
            let seq = build_crps(n as u64, p, r)?;
            let params = serde_json::json!({ "n": n, "p": p, "r": r });
            symbol_file(PatternKind::Crps, n, n - 1, params, seq.alphabet, true, seq.symbols)
        }
        GenKind::Exact => {
            let (n, d) = (need(a.n, "n")?, need(a.d, "d")?);
            let q = a.q.unwrap_or(2);
            if q > 2 {
                if d != n {
                    return Err(Error::InvalidParam(format!("q-ary closed form needs d = n, got n={n}, d={d}")).into());
                }
                let s = exact_rps_full_distance(q, n)?;
                symbol_file(
                    PatternKind::ExactQ,
                    n,
                    d,
                    serde_json::json!({ "n": n, "d": d, "q": q }),
                    MixedAlphabet::Field { q },
                    false,
                    s,
                )
            } else {
                let bits = exact_rps(n, d)?;
                PatternFile {
                    header: Header {
                        kind: PatternKind::Exact,
                        n,
                        n2: None,
                        d,
                        params: serde_json::json!({ "n": n, "d": d }),
                        alphabet: binary,
                        cyclic: false,
                        layout: Layout::Bits,
                        length: bits.len() as u64,
                        region: None,
                    },
                    payload: Payload::Bits(bits),
                }
            }
        }
    };
    match &a.output {
        Some(path) => {
            let f = File::create(path).map_err(to_io)?;
            write_pattern(io::BufWriter::new(f), &file)?;
            writeln!(out, "wrote {}", path.display()).map_err(to_io)?;
            if let Some(r) = &redundancy {
                report_redundancy(out, r).map_err(to_io)?;
            }
        }
        None => {
            write_pattern(&mut *out, &file)?;
            if let Some(r) = &redundancy {
                report_redundancy(err, r).map_err(to_io)?;
            }
        }
    }
    Ok(())
}

fn symbol_file(
    kind: PatternKind,
    n: usize,
    d: usize,
    params: serde_json::Value,
    alphabet: MixedAlphabet,
    cyclic: bool,
    symbols: Vec<u64>,
) -> PatternFile {
    PatternFile {
        header: Header {
            kind,
            n,
            n2: None,
            d,
            params,
            alphabet,
            cyclic,
            layout: Layout::Symbols,
            length: symbols.len() as u64,
            region: None,
        },
        payload: Payload::Symbols(symbols),
    }
}

fn seq_from_header(h: &Header) -> Result<Seq1D> {
    let params: Params1D = serde_json::from_value(h.params.clone())?;
    Seq1D::from_params(params)
}

fn arr_from_header(h: &Header) -> Result<Arr2D> {
    let params: Params2D = serde_json::from_value(h.params.clone())?;
    Arr2D::from_params(params)
}

fn rank_from_header(h: &Header) -> Result<RankArray> {
    let get = |k: &str| {
        h.params
            .get(k)
            .and_then(|v| v.as_u64())
            .map(|v| v as usize)
            .ok_or_else(|| Error::Parse(format!("rank2d header lacks params.{k}")))
    };
    RankArray::new(get("d")?, get("m")?, get("n1")?, get("n2")?)
}

fn cmd_locate(a: &LocateArgs, out: &mut dyn Write) -> CliResult {
    let pattern = load_pattern(&a.pattern)?;
    let text = read_input(a.window.as_deref())?;
    let rows = parse_window(&text)?;
    let h = &pattern.header;
    let locate_err = |e: Error| match e {
        Error::DecodeFailure(_) | Error::Ambiguous(_) => Failure::Locate(e),
        other => Failure::Usage(other),
    };
    match h.kind {
        PatternKind::Rps1d => {
            let seq = seq_from_header(h)?;
            let w: Vec<u8> = rows.concat();
            let r = seq.locate(&w).map_err(locate_err)?;
            if a.json {
                return print_json(out, &r);
            }
            writeln!(out, "position {}\nerrors {}", r.position, r.errors).map_err(to_io)
        }
        PatternKind::Rpa2d => {
            let arr = arr_from_header(h)?;
            let w = BinaryMatrix::from_rows(&rows)?;
            let r = arr.locate(&w).map_err(locate_err)?;
            if a.json {
                return print_json(out, &r);
            }
            writeln!(out, "row {}\ncol {}\nerrors {}", r.row, r.col, r.errors).map_err(to_io)
        }
        other => Err(Error::InvalidParam(format!("no locating algorithm for {other:?} patterns")).into()),
    }
}

fn cmd_window(a: &WindowArgs, out: &mut dyn Write) -> CliResult {
    let pattern = load_pattern(&a.pattern)?;
    let h = &pattern.header;
    let mut rng = match (a.flips, a.seed) {
        (0, _) => None,
        (_, Some(seed)) => Some(ChaCha8Rng::seed_from_u64(seed)),
        (_, None) => return Err(Error::InvalidParam("--flips needs --seed".into()).into()),
    };
    match h.kind {
        PatternKind::Rps1d => {
            let seq = seq_from_header(h)?;
            let pos = parse_big(a.pos.as_deref().ok_or_else(|| Error::InvalidParam("missing --pos".into()))?)?;
            let mut w = seq.window_at(&pos)?;
            if let Some(rng) = rng.as_mut() {
                if a.flips > w.len() {
                    return Err(Error::InvalidParam(format!("cannot flip {} of {} bits", a.flips, w.len())).into());
                }
                for i in sample(rng, w.len(), a.flips) {
                    w[i] ^= 1;
                }
            }
            writeln!(out, "{}", bit_line(&w)).map_err(to_io)
        }
        PatternKind::Rpa2d | PatternKind::Rank2d => {
            let row = parse_big(a.row.as_deref().ok_or_else(|| Error::InvalidParam("missing --row".into()))?)?;
            let col = parse_big(a.col.as_deref().ok_or_else(|| Error::InvalidParam("missing --col".into()))?)?;
            let mut w = if h.kind == PatternKind::Rpa2d {
                arr_from_header(h)?.window_at(&row, &col)?
            } else {
                rank_from_header(h)?.window_at(&row, &col)?
            };
            if let Some(rng) = rng.as_mut() {
                let cells = w.rows() * w.cols();
                if a.flips > cells {
                    return Err(Error::InvalidParam(format!("cannot flip {} of {cells} bits", a.flips)).into());
                }
                for i in sample(rng, cells, a.flips) {
                    w.flip(i / w.cols(), i % w.cols());
                }
            }
            write!(out, "{w}").map_err(to_io)
        }
        other => Err(Error::InvalidParam(format!("window extraction is not supported for {other:?} files")).into()),
    }
}

fn sampling(a: &VerifyArgs) -> Result<Sampling> {
    match (a.samples, a.seed) {
        (None, _) => Ok(Sampling::Exhaustive),
        (Some(count), Some(seed)) => Ok(Sampling::Pairs { count, seed }),
        (Some(_), None) => Err(Error::InvalidParam("--samples needs --seed".into())),
    }
}

fn emit_report(out: &mut dyn Write, r: &VerificationReport, json: bool) -> CliResult {
    if json {
        print_json(out, r)?;
    } else {
        let fmt_pos = |p: &Position| match p {
            Position::Linear(i) => i.to_string(),
            Position::Grid(r, c) => format!("({r}, {c})"),
        };
        let mut text = format!("property: {}\n", r.property);
        match r.min_distance {
            Some(m) => text += &format!("min distance: {m}\n"),
            None => text += "min distance: none\n",
        }
        if let Some((x, y)) = &r.witness {
            text += &format!("witness: {} {}\n", fmt_pos(x), fmt_pos(y));
        }
        if let Some(t) = r.target {
            text += &format!("target: {t}\n");
        }
        text += &format!("pairs: {} ({:?})\n", r.pairs, r.mode);
        if let Some(s) = r.seed {
            text += &format!("seed: {s}\n");
        }
        text += if r.pass { "PASS\n" } else { "FAIL\n" };
        out.write_all(text.as_bytes()).map_err(to_io)?;
    }
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn verify_1d<T: PartialEq + Sync>(seq: &[T], n: usize, d: usize, modular: bool, cyclic: bool) -> VerificationReport {
    if modular {
        check_modular_1d(seq, n, d)
    } else {
        min_window_distance_1d(seq, n, cyclic).with_target(d)
    }
}

fn shift_witness(mut r: VerificationReport, by: u64) -> VerificationReport {
    if let Some((Position::Linear(x), Position::Linear(y))) = r.witness.as_mut() {
        *x += by;
        *y += by;
    }
    r
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let pattern = load_pattern(&a.file)?;
    let h = &pattern.header;
    let n = a.n.unwrap_or(h.n);
    let d = a.d.unwrap_or(h.d);
    let cyclic = a.cyclic || h.cyclic;
    let metric = match a.metric {
        Some(MetricArg::Hamming) => Metric::Hamming,
        Some(MetricArg::Rank) => Metric::Rank,
        None if h.kind == PatternKind::Rank2d => Metric::Rank,
        None => Metric::Hamming,
    };
    let report = match &pattern.payload {
        Payload::Bits(bits) => verify_1d(bits, n, d, a.modular, cyclic),
        Payload::Symbols(s) => verify_1d(s, n, d, a.modular, cyclic),
        Payload::Rows(array) => {
            let n2 = a.n.map_or(h.n2.unwrap_or(n), |_| h.n2.unwrap_or(n));
            let n1 = h.n;
            if array.rows() < n1 || array.cols() < n2 {
                return Err(Error::Dimension("stored region is smaller than one window".into()).into());
            }
            let src = DenseArray { array: array.clone(), n1, n2 };
            let corners = region_corners(&BigUint::zero(), array.rows() - n1 + 1, &BigUint::zero(), array.cols() - n2 + 1);
            min_window_distance_2d(&src, &corners, metric, sampling(a)?)?.with_target(d)
        }
        Payload::Empty => match h.kind {
            PatternKind::Rps1d => {
                let seq = seq_from_header(h)?;
                let range = a
                    .range
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParam("lazy sequences need --range a..b".into()))?;
                let (start, count) = parse_range(range)?;
                let start_u64 = start.to_u64().ok_or_else(|| Error::OutOfRange("range start too large".into()))?;
                let len = count + seq.n() - 1;
                let mut bits = Vec::with_capacity(len + seq.n());
                let mut pos = start.clone();
                while bits.len() < len {
                    bits.extend(seq.window_at(&pos)?);
                    pos += seq.n();
                }
                bits.truncate(len);
                shift_witness(verify_1d(&bits, n, d, a.modular, false), start_u64)
            }
            PatternKind::Rpa2d | PatternKind::Rank2d => {
                let (r0, rows) = parse_range(a.rows.as_deref().ok_or_else(|| Error::InvalidParam("lazy arrays need --rows".into()))?)?;
                let (c0, cols) = parse_range(a.cols.as_deref().ok_or_else(|| Error::InvalidParam("lazy arrays need --cols".into()))?)?;
                let corners = region_corners(&r0, rows, &c0, cols);
                let src: Box<dyn WindowSource> = if h.kind == PatternKind::Rpa2d {
                    Box::new(arr_from_header(h)?)
                } else {
                    Box::new(rank_from_header(h)?)
                };
                min_window_distance_2d(&src.as_ref(), &corners, metric, sampling(a)?)?.with_target(d)
            }
            other => return Err(Error::InvalidParam(format!("{other:?} file has no payload")).into()),
        },
    };
    emit_report(out, &report, a.json)
}

impl WindowSource for &dyn WindowSource {
    fn window(&self, row: &BigUint, col: &BigUint) -> Result<BinaryMatrix> {
        (**self).window(row, col)
    }
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> CliResult {
    if let Some(n_max) = a.table {
        let results = search_table(n_max, a.budget)?;
        if a.json {
            return print_json(out, &results);
        }
        return write!(out, "{}", render_table(&results)).map_err(to_io);
    }
    let (n, d) = (need(a.n, "n")?, need(a.d, "d")?);
    let r = max_rps_length(n, d, a.budget)?;
    if a.json {
        return print_json(out, &r);
    }
    let status = if r.certified { "certified" } else { "budget exhausted, lower bound only" };
    writeln!(
        out,
        "P({n},{d}) {} {} ({status})\nwitness {}\nnodes {}",
        if r.certified { "=" } else { ">=" },
        r.best,
        r.witness,
        r.nodes
    )
    .map_err(to_io)
}

#[derive(Serialize)]
struct BoundsReport {
    n: Option<usize>,
    d: usize,
    q: u64,
    plotkin: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    singleton: Option<String>,
    sphere_packing_positions: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    sphere_packing_length: Option<String>,
}

fn cmd_bounds(a: &BoundsArgs, out: &mut dyn Write) -> CliResult {
    let (n1, n2) = match (a.n1, a.n2, a.n) {
        (Some(n1), Some(n2), _) => (n1, n2),
        (_, _, Some(n)) => (1, n),
        _ => return Err(Error::InvalidParam("bounds needs --n, or --n1 and --n2".into()).into()),
    };
    let sphere = sphere_packing_max_positions(a.q, n1 as u64, n2 as u64, a.d as u64)?;
    let one_d = a.n.filter(|_| a.n1.is_none());
    let report = BoundsReport {
        n: one_d,
        d: a.d,
        q: a.q,
        plotkin: one_d.filter(|_| a.q == 2).and_then(|n| plotkin_upper(n as u64, a.d as u64).ok()),
        singleton: one_d
            .map(|n| singleton_upper(a.q, n as u64, a.d as u64).map(|b| b.to_string()))
            .transpose()?,
        sphere_packing_length: one_d.map(|n| (&sphere + (n - 1)).to_string()),
        sphere_packing_positions: sphere.to_string(),
    };
    if a.json {
        return print_json(out, &report);
    }
    let mut text = String::new();
    if let Some(n) = one_d {
        match report.plotkin {
            Some(p) => text += &format!("plotkin: P({n},{}) <= {p}\n", a.d),
            None => text += "plotkin: not applicable\n",
        }
        if let Some(s) = &report.singleton {
            text += &format!("singleton: P_{}({n},{}) <= {s}\n", a.q, a.d);
        }
        if let Some(s) = &report.sphere_packing_length {
            text += &format!("sphere packing: length <= {s}\n");
        }
    }
    text += &format!("sphere packing: positions <= {}\n", report.sphere_packing_positions);
    out.write_all(text.as_bytes()).map_err(to_io)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SimRow {
    pub errors: usize,
    pub trials: u64,
    pub success: u64,
    pub ambiguous: u64,
    pub failed: u64,
    pub wrong: u64,
}

#[derive(Serialize)]
struct SimReport {
    construction: String,
    seed: u64,
    radius: usize,
    rows: Vec<SimRow>,
}

fn tally(row: &mut SimRow, outcome: Result<bool>) {
    match outcome {
        Ok(true) => row.success += 1,
        Ok(false) => row.wrong += 1,
        Err(Error::Ambiguous(_)) => row.ambiguous += 1,
        Err(_) => row.failed += 1,
    }
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut rows = Vec::new();
    let radius = (a.d.max(1) - 1) / 2;
    match a.construction {
        SimKind::Rps1d => {
            let seq = Seq1D::new(a.d, a.m, need(a.n_r, "nR")?)?;
            let (n, positions) = (seq.n(), seq.num_positions());
            for e in 0..=a.e_max.min(n) {
                let mut row = SimRow { errors: e, trials: a.trials, ..SimRow::default() };
                for _ in 0..a.trials {
                    let pos = rng.gen_biguint_below(&positions);
                    let mut w = seq.window_at(&pos)?;
                    for i in sample(&mut rng, n, e) {
                        w[i] ^= 1;
                    }
                    tally(&mut row, seq.locate(&w).map(|r| r.position == pos));
                }
                rows.push(row);
            }
        }
        SimKind::Rpa2d => {
            let arr = Arr2D::new(a.d, a.m, need(a.n1, "n1")?, need(a.n2, "n2")?)?;
            let p = arr.params().clone();
            let (h, w) = arr.dims();
            let (max_r, max_c) = (&h - p.n1 + 1u32, &w - p.n2 + 1u32);
            for e in 0..=a.e_max.min(p.area) {
                let mut row = SimRow { errors: e, trials: a.trials, ..SimRow::default() };
                for _ in 0..a.trials {
                    let (r, c) = (rng.gen_biguint_below(&max_r), rng.gen_biguint_below(&max_c));
                    let mut win = arr.window_at(&r, &c)?;
                    for i in sample(&mut rng, p.area, e) {
                        win.flip(i / p.n2, i % p.n2);
                    }
                    tally(&mut row, arr.locate(&win).map(|x| x.row == r && x.col == c));
                }
                rows.push(row);
            }
        }
    }
    let report = SimReport {
        construction: format!("{:?}", a.construction).to_lowercase(),
        seed: a.seed,
        radius,
        rows,
    };
    if a.json {
        return print_json(out, &report);
    }
    let mut text = format!("seed {}\ncorrection radius {}\n", report.seed, radius);
    text += &format!("{:>6} {:>8} {:>8} {:>9} {:>8} {:>6} {:>8}\n", "e", "trials", "success", "ambiguous", "failed", "wrong", "rate");
    for r in &report.rows {
        text += &format!(
            "{:>6} {:>8} {:>8} {:>9} {:>8} {:>6} {:>8.4}\n",
            r.errors,
            r.trials,
            r.success,
            r.ambiguous,
            r.failed,
            r.wrong,
            if r.trials == 0 { 0.0 } else { r.success as f64 / r.trials as f64 }
        );
    }
    out.write_all(text.as_bytes()).map_err(to_io)
}
