//! Command-line front end.
//!
//! Exit codes: 0 simulated, 1 not simulated, 2 undecided within the limits,
//! 64 for malformed input or usage, 70 for internal errors, 74 for I/O
//! failures.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::coloring::{write_coloring_json, StrongOptions, StrongSolver, Verdict, Zone};
use crate::error::Error;
use crate::format::parse_net;
use crate::net::{Config, Ocn, StateId};
use crate::oracle::{bounded_round_winner, bounded_weak_round_winner, BoundedVerdict};
use crate::weaksim::{WeakOptions, WeakSolver};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_IO: i32 = 74;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "ocnsim", version, about = "Simulation preorder checking for one-counter nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args, Debug, Clone, Copy)]
struct Limits {
    /// Largest number of rounds granted to Spoiler searches.
    #[arg(long, global = true)]
    max_depth: Option<u32>,
    /// Largest period tried.
    #[arg(long, global = true)]
    max_period: Option<u64>,
    /// Largest rectangle index tried.
    #[arg(long, global = true)]
    max_rect: Option<u64>,
}

impl Limits {
    fn options(self) -> StrongOptions {
        let d = StrongOptions::default();
        StrongOptions {
            j0: None,
            max_depth: self.max_depth.unwrap_or(d.max_depth),
            max_period: self.max_period.unwrap_or(d.max_period),
            max_rect: self.max_rect.unwrap_or(d.max_rect),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the left configuration is simulated by the right one.
    Check(CheckArgs),
    /// List slope, width and orientation of every belt.
    Belts {
        spoiler: PathBuf,
        duplicator: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Draw the relation of one state pair.
    Render {
        spoiler: PathBuf,
        duplicator: PathBuf,
        /// State pair `q,q'`.
        #[arg(long)]
        pair: String,
        /// Grid size.
        #[arg(long, default_value_t = 16)]
        max: u64,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the semilinear description of the relation as JSON.
    Export {
        spoiler: PathBuf,
        duplicator: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only these pairs, each `q,q'`; repeatable.
        #[arg(long = "pairs")]
        pairs: Vec<String>,
    },
    /// Play the round-bounded game exhaustively.
    Oracle {
        spoiler: PathBuf,
        duplicator: PathBuf,
        left: String,
        right: String,
        #[arg(long, default_value_t = 64)]
        rounds: u32,
        #[arg(long)]
        weak: bool,
        #[arg(long, default_value = "tau")]
        tau: String,
        /// Longest tau-segment Duplicator may use.
        #[arg(long, default_value_t = 4)]
        tau_cap: u32,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    spoiler: PathBuf,
    duplicator: PathBuf,
    /// Spoiler configuration `state:counter`.
    left: String,
    /// Duplicator configuration `state:counter`.
    right: String,
    #[arg(long, conflicts_with = "weak")]
    strong: bool,
    #[arg(long)]
    weak: bool,
    /// Internal action for weak simulation.
    #[arg(long, default_value = "tau")]
    tau: String,
    #[arg(long)]
    json: bool,
    /// Write every approximant pair to this directory.
    #[arg(long)]
    dump_approximants: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Ascii,
    Svg,
}

/// Failure of a command with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Failure {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Internal(_) => EXIT_INTERNAL,
            Error::Undecided(_) => EXIT_UNDECIDED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    configure_threads();
    let limits = cli.limits.options();
    let result = match cli.command {
        Command::Check(a) => cmd_check(a, limits, out),
        Command::Belts {
            spoiler,
            duplicator,
            json,
        } => cmd_belts(&spoiler, &duplicator, json, limits, out),
        Command::Render {
            spoiler,
            duplicator,
            pair,
            max,
            format,
            out: path,
        } => cmd_render(&spoiler, &duplicator, &pair, max, format, path.as_deref(), limits, out),
        Command::Export {
            spoiler,
            duplicator,
            out: path,
            pairs,
        } => cmd_export(&spoiler, &duplicator, path.as_deref(), &pairs, limits, out),
        Command::Oracle {
            spoiler,
            duplicator,
            left,
            right,
            rounds,
            weak,
            tau,
            tau_cap,
        } => cmd_oracle(&spoiler, &duplicator, &left, &right, rounds, weak.then_some((tau.as_str(), tau_cap)), out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("OCNSIM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second call within one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn load(path: &Path) -> std::result::Result<Ocn, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_net(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Parses `state:counter` with a counter of any magnitude.
fn parse_config(net: &Ocn, text: &str) -> std::result::Result<(StateId, BigUint), Failure> {
    let bad = || Failure::from(Error::InvalidConfig(text.to_owned()));
    let (state, counter) = text.rsplit_once(':').ok_or_else(bad)?;
    if counter.is_empty() || !counter.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let q = net
        .state_id(state)
        .ok_or_else(|| Failure::from(Error::UnknownState(state.to_owned())))?;
    let n = counter.parse::<BigUint>().map_err(|_| bad())?;
    Ok((q, n))
}

fn parse_pair(sp: &Ocn, du: &Ocn, text: &str) -> std::result::Result<(StateId, StateId), Failure> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Failure::usage(format!("pair `{text}` is not of the form q,q'")))?;
    let q = sp
        .state_id(a.trim())
        .ok_or_else(|| Failure::from(Error::UnknownState(a.to_owned())))?;
    let q2 = du
        .state_id(b.trim())
        .ok_or_else(|| Failure::from(Error::UnknownState(b.to_owned())))?;
    Ok((q, q2))
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::True => EXIT_TRUE,
        Verdict::False => EXIT_FALSE,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Undecided => "undecided",
    }
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::io(Path::new("<stdout>"), e))
}

#[derive(Serialize)]
struct CheckReport {
    schema: u32,
    verdict: Verdict,
    pair: [String; 2],
    belts_used: usize,
    j: Option<u64>,
    k: Option<u64>,
    elapsed_ms: u64,
}

fn cmd_check(a: CheckArgs, limits: StrongOptions, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let sp = load(&a.spoiler)?;
    let du = load(&a.duplicator)?;
    let (q, n) = parse_config(&sp, &a.left)?;
    let (q2, n2) = parse_config(&du, &a.right)?;
    let (verdict, belts_used, stage) = if a.weak {
        let options = WeakOptions {
            strong: limits,
            dump_dir: a.dump_approximants.clone(),
        };
        match WeakSolver::new(&sp, &du, &a.tau, &options) {
            Ok(mut s) => {
                let v = s.query_big(q, q2, &n, &n2)?;
                let st = s.strong().certified().map(|c| c.stage);
                (v, s.strong().system().nodes().len(), st)
            }
            Err(Error::Undecided(_)) => (Verdict::Undecided, 0, None),
            Err(e) => return Err(e.into()),
        }
    } else {
        let mut s = StrongSolver::for_pairs(&sp, &du, &[(q, q2)], limits)?;
        let v = s.query_big(q, q2, &n, &n2)?;
        let st = s.certified().map(|c| c.stage);
        (v, s.system().nodes().len(), st)
    };
    let text = if a.json {
        let report = CheckReport {
            schema: SCHEMA,
            verdict,
            pair: [a.left.clone(), a.right.clone()],
            belts_used,
            j: stage.map(|s| s.j),
            k: stage.map(|s| s.k),
            elapsed_ms: start.elapsed().as_millis() as u64,
        };
        serde_json::to_string(&report).expect("serialisable") + "\n"
    } else {
        format!("simulated: {}\n", verdict_word(verdict))
    };
    emit(out, &text)?;
    Ok(verdict_code(verdict))
}

#[derive(Serialize)]
struct BeltRow {
    q: String,
    #[serde(rename = "q'")]
    q_dup: String,
    slope: crate::geometry::Slope,
    c: u64,
    belt_constant: u64,
    vertical: bool,
}

#[derive(Serialize)]
struct BeltsReport {
    schema: u32,
    l0: [i64; 2],
    belts: Vec<BeltRow>,
}

fn cmd_belts(sp: &Path, du: &Path, json: bool, limits: StrongOptions, out: &mut dyn Write) -> CmdResult {
    let spn = load(sp)?;
    let dun = load(du)?;
    let solver = StrongSolver::new(&spn, &dun, limits)?;
    let system = solver.system();
    let mut rows = Vec::new();
    for q in 0..spn.state_count() {
        for q2 in 0..dun.state_count() {
            let b = system
                .belt(q, q2)
                .ok_or_else(|| Failure::from(Error::Internal(format!("no belt for ({q},{q2})"))))?;
            rows.push(BeltRow {
                q: spn.state_name(q).to_owned(),
                q_dup: dun.state_name(q2).to_owned(),
                slope: b.slope,
                c: b.c,
                belt_constant: b.bound,
                vertical: b.is_vertical(),
            });
        }
    }
    let text = if json {
        let report = BeltsReport {
            schema: SCHEMA,
            l0: [system.l0.0, system.l0.1],
            belts: rows,
        };
        serde_json::to_string_pretty(&report).expect("serialisable") + "\n"
    } else {
        let mut s = String::from("q\tq'\tslope\tc\tbound\tvertical\n");
        for r in &rows {
            let _ = writeln!(
                s,
                "{}\t{}\t[{},{}]\t{}\t{}\t{}",
                r.q,
                r.q_dup,
                r.slope.rho(),
                r.slope.rho_prime(),
                r.c,
                r.belt_constant,
                if r.vertical { "yes" } else { "no" }
            );
        }
        s
    };
    emit(out, &text)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    sp: &Path,
    du: &Path,
    pair: &str,
    max: u64,
    format: Format,
    path: Option<&Path>,
    limits: StrongOptions,
    out: &mut dyn Write,
) -> CmdResult {
    let spn = load(sp)?;
    let dun = load(du)?;
    let (q, q2) = parse_pair(&spn, &dun, pair)?;
    let mut solver = StrongSolver::for_pairs(&spn, &dun, &[(q, q2)], limits)?;
    // rows from the top are Duplicator counters max-1 down to 0
    let mut grid = Vec::with_capacity(max as usize);
    for n2 in (0..max).rev() {
        let mut row = Vec::with_capacity(max as usize);
        for n in 0..max {
            row.push(solver.query(q, q2, n, n2)?);
        }
        grid.push(row);
    }
    let belt = *solver
        .system()
        .belt(q, q2)
        .ok_or_else(|| Failure::from(Error::Internal("pair not prepared".into())))?;
    let text = match format {
        Format::Ascii => render_ascii(&grid),
        Format::Svg => render_svg(&grid, |n, n2| belt.zone(n as i64, n2 as i64), max),
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::io(p, e))?,
        None => emit(out, &text)?,
    }
    Ok(0)
}

fn cell_char(v: Verdict) -> char {
    match v {
        Verdict::True => '#',
        Verdict::False => '.',
        Verdict::Undecided => '?',
    }
}

fn render_ascii(grid: &[Vec<Verdict>]) -> String {
    let mut s = String::new();
    for row in grid {
        s.extend(row.iter().map(|&v| cell_char(v)));
        s.push('\n');
    }
    s
}

const CELL: u64 = 12;

fn render_svg(grid: &[Vec<Verdict>], zone: impl Fn(u64, u64) -> Zone, max: u64) -> String {
    let size = CELL * max;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    for (y, row) in grid.iter().enumerate() {
        let n2 = max - 1 - y as u64;
        for (n, &v) in row.iter().enumerate() {
            let fill = match (zone(n as u64, n2), v) {
                (_, Verdict::Undecided) => "#9e9e9e",
                (Zone::Inside, Verdict::True) => "#2e7d32",
                (Zone::Inside, Verdict::False) => "#c62828",
                (_, Verdict::True) => "#a5d6a7",
                (_, Verdict::False) => "#ef9a9a",
            };
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#,
                n as u64 * CELL,
                y as u64 * CELL
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_export(
    sp: &Path,
    du: &Path,
    path: Option<&Path>,
    filter: &[String],
    limits: StrongOptions,
    out: &mut dyn Write,
) -> CmdResult {
    let spn = load(sp)?;
    let dun = load(du)?;
    let keep = filter
        .iter()
        .map(|p| parse_pair(&spn, &dun, p))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut solver = StrongSolver::new(&spn, &dun, limits)?;
    if solver.certify()?.is_none() {
        return Err(Failure {
            code: EXIT_UNDECIDED,
            message: "colouring not certified within the limits".into(),
        });
    }
    let cert = solver.certified().expect("certified");
    let system = solver.system();
    let originals = (spn.state_count(), dun.state_count());
    let accept = |p: &crate::coloring::PairColoring| {
        p.pair.0 < originals.0
            && p.pair.1 < originals.1
            && (keep.is_empty() || keep.contains(&p.pair))
    };
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| Failure::io(p, e))?;
            let mut w = std::io::BufWriter::new(file);
            write_coloring_json(&mut w, &cert.coloring, &system.spoiler, &system.duplicator, accept)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::io(p, e))?;
        }
        None => write_coloring_json(&mut *out, &cert.coloring, &system.spoiler, &system.duplicator, accept)
            .map_err(|e| Failure::io(Path::new("<stdout>"), e))?,
    }
    Ok(0)
}

fn cmd_oracle(
    sp: &Path,
    du: &Path,
    left: &str,
    right: &str,
    rounds: u32,
    weak: Option<(&str, u32)>,
    out: &mut dyn Write,
) -> CmdResult {
    let spn = load(sp)?;
    let dun = load(du)?;
    let (q, n) = parse_config(&spn, left)?;
    let (q2, n2) = parse_config(&dun, right)?;
    let small = |x: &BigUint| {
        x.to_u64()
            .filter(|&v| v <= 1 << 20)
            .ok_or_else(|| Failure::usage("the oracle accepts counters up to 2^20"))
    };
    let pos = (Config::new(q, small(&n)?), Config::new(q2, small(&n2)?));
    let v = match weak {
        None => {
            let (nsp, ndu) = crate::net::normalize_pair(&spn, &dun)?;
            bounded_round_winner(&nsp, &ndu, pos, rounds)
        }
        Some((tau, cap)) => bounded_weak_round_winner(&spn, &dun, tau, pos, rounds, cap),
    };
    let (text, code) = match v {
        BoundedVerdict::SpoilerWinsWithin(r) => (format!("spoiler wins within {r} rounds\n"), EXIT_FALSE),
        BoundedVerdict::DuplicatorSurvives(r) => (format!("duplicator survives {r} rounds\n"), EXIT_TRUE),
    };
    emit(out, &text)?;
    Ok(code)
}
