//! Command line front end. [`run`] parses arguments, writes results to `out`
//! and diagnostics (including wall-clock runtime) to `err`, and returns the
//! process exit code: 0 when everything passed, 1 when a check failed, 2 on
//! bad input.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::abelfeed::{self, devlin, Realization};
use crate::bench;
use crate::error::{Error, Result};
use crate::fdbclassical as fdb;
use crate::hopf::{Algorithm, CoordGen, HopfContext};
use crate::numeric::{self, Signal};
use crate::verify::{self, Suite, VerifyConfig};
use crate::words::Word;

#[derive(Parser, Debug)]
#[command(name = "abelfdb", version, about = "Shuffle algebra, Abel generating series and Faà di Bruno antipodes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graded pieces c(1..cap+1) of the Abel generating series
    Devlin(DevlinArgs),
    /// Antipode of coordinate functions a[k;word]
    Antipode(AntipodeArgs),
    /// Run verification suites
    Verify(VerifyArgs),
    /// Time both antipode algorithms per grade (CSV)
    Bench(BenchArgs),
    /// Integrate the Abel equation and check the center condition
    Simulate(SimulateArgs),
    /// Classical Faà di Bruno tables: inverse entries, M_h and its inverse
    Fdb(FdbArgs),
    /// Abel generating series by one of four constructions, or from a realization
    Abel(AbelArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgChoice {
    Classical,
    Coderivation,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Devlin,
    GroupInverse,
    Feedback,
    Realization,
}

#[derive(Args, Debug)]
pub struct DevlinArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct AntipodeArgs {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Number of roots; defaults to m - 1
    #[arg(long)]
    pub mbar: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub root: usize,
    /// Word such as `x1.x2`, or `e` for the empty word
    #[arg(long, default_value = "e")]
    pub word: String,
    /// Print every generator of grade <= G instead of a single one
    #[arg(long)]
    pub grade: Option<usize>,
    #[arg(long)]
    pub all: bool,
    #[arg(long = "alg", value_enum, default_value_t = AlgChoice::Coderivation)]
    pub alg: AlgChoice,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 6)]
    pub cap: usize,
    #[arg(long, default_value_t = 5)]
    pub grade: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 6)]
    pub grade: usize,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long)]
    pub mbar: Option<usize>,
    #[arg(long = "reps", default_value_t = 3)]
    pub repetitions: usize,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// cos-sin, ramp, zero or composition
    #[arg(long, default_value = "cos-sin")]
    pub preset: String,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Period; accepts numbers and multiples of pi such as `2pi` or `pi/2`
    #[arg(long, default_value = "2pi", value_parser = parse_omega)]
    pub omega: f64,
    /// Initial values, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub r: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Write the solution trace as CSV (t, z for each r) to this file
    #[arg(long)]
    pub trace: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FdbArgs {
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct AbelArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Route::Devlin)]
    pub route: Route,
    /// Realization `g_1,..,g_m;z0;h_1,..` with polynomials as coefficient lists
    /// (`0 0 1` is z^2); overrides --route
    #[arg(long)]
    pub realization: Option<String>,
    /// Output index of the realization
    #[arg(long, default_value_t = 1)]
    pub output: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Parses `2pi`, `pi/2`, `0.5pi`, `pi` or a plain number.
pub fn parse_omega(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || format!("cannot read `{s}` as a period");
    let value = if let Some(idx) = t.find("pi") {
        let (pre, post) = (&t[..idx], &t[idx + 2..]);
        let k = match pre.trim_end_matches('*') {
            "" => 1.0,
            p => p.parse::<f64>().map_err(|_| bad())?,
        };
        let d = match post {
            "" => 1.0,
            p => p.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
        };
        k * std::f64::consts::PI / d
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(format!("period must be positive, got `{s}`"))
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return e.exit_code();
        }
    };
    let start = Instant::now();
    let result = dispatch(&cli.command, out, err);
    let _ = writeln!(err, "runtime: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Devlin(a) => cmd_devlin(a, out),
        Command::Antipode(a) => cmd_antipode(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Simulate(a) => cmd_simulate(a, out, err),
        Command::Fdb(a) => cmd_fdb(a, out),
        Command::Abel(a) => cmd_abel(a, out),
    }
}

#[derive(Serialize)]
struct Piece<'a> {
    n: usize,
    series: &'a crate::series::NCSeries,
}

fn cmd_devlin(a: &DevlinArgs, out: &mut dyn Write) -> Result<bool> {
    let table = devlin(a.m, a.cap)?;
    match a.format {
        Format::Json => {
            let pieces: Vec<Piece> = table.pieces.iter().enumerate().map(|(i, s)| Piece { n: i + 1, series: s }).collect();
            writeln!(out, "{}", json(&pieces)?).map_err(io)?;
        }
        _ => {
            for (i, s) in table.pieces.iter().enumerate() {
                writeln!(out, "n={}: {}", i + 1, s.render_row()).map_err(io)?;
            }
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct AntipodeRow {
    generator: String,
    classical: Option<String>,
    coderivation: Option<String>,
    matches: Option<bool>,
}

fn cmd_antipode(a: &AntipodeArgs, out: &mut dyn Write) -> Result<bool> {
    let ctx = HopfContext::new(a.m, a.mbar.unwrap_or(a.m.saturating_sub(1)))?;
    let gens: Vec<CoordGen> = match a.grade {
        Some(g) => ctx.generators(g),
        None if a.all => return Err(Error::InvalidArgument("--all needs --grade".into())),
        None => {
            let g = CoordGen::new(a.root, Word::parse(&a.word)?);
            ctx.check(&g)?;
            vec![g]
        }
    };
    let mut classical = matches!(a.alg, AlgChoice::Classical | AlgChoice::Both).then(|| Algorithm::Classical.build(ctx));
    let mut coder = matches!(a.alg, AlgChoice::Coderivation | AlgChoice::Both).then(|| Algorithm::Coderivation.build(ctx));
    let mut rows = Vec::new();
    let mut all_match = true;
    for g in &gens {
        let c = classical.as_mut().map(|s| s.generator(g));
        let d = coder.as_mut().map(|s| s.generator(g));
        let matches = match (&c, &d) {
            (Some(x), Some(y)) => Some(x == y),
            _ => None,
        };
        all_match &= matches.unwrap_or(true);
        rows.push(AntipodeRow { generator: g.to_string(), classical: c.map(|p| p.to_string()), coderivation: d.map(|p| p.to_string()), matches });
    }
    match a.format {
        Format::Json => writeln!(out, "{}", json(&rows)?).map_err(io)?,
        _ => {
            for r in &rows {
                match (&r.classical, &r.coderivation) {
                    (Some(x), Some(y)) => {
                        writeln!(out, "S {} = {x}  [classical]", r.generator).map_err(io)?;
                        writeln!(out, "S {} = {y}  [coderivation]", r.generator).map_err(io)?;
                        writeln!(out, "{}", if x == y { "MATCH" } else { "MISMATCH" }).map_err(io)?;
                    }
                    (Some(x), None) | (None, Some(x)) => writeln!(out, "S {} = {x}", r.generator).map_err(io)?,
                    (None, None) => {}
                }
            }
        }
    }
    Ok(all_match)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let suite: Suite = a.suite.parse()?;
    let cfg = VerifyConfig { m: a.m, cap: a.cap, grade: a.grade, seed: a.seed };
    let report = verify::run(suite, &cfg)?;
    match a.format {
        Format::Json => writeln!(out, "{}", json(&report)?).map_err(io)?,
        _ => {
            for s in &report.suites {
                for c in &s.checks {
                    let verdict = if c.pass { "PASS" } else { "FAIL" };
                    writeln!(out, "{verdict} [{}] {}: {}", s.suite, c.name, c.detail).map_err(io)?;
                }
            }
            writeln!(out, "{}", if report.pass { "ALL PASS" } else { "FAILURES" }).map_err(io)?;
        }
    }
    Ok(report.pass)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<bool> {
    let ctx = HopfContext::new(a.m, a.mbar.unwrap_or(a.m.saturating_sub(1)))?;
    let rows = bench::bench(ctx, a.grade, a.repetitions)?;
    write!(out, "{}", bench::to_csv(&rows)?).map_err(io)?;
    Ok(true)
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let u = Signal::preset(&a.preset, a.m, a.omega, a.steps + 1)?;
    let report = numeric::center_check(&u, &a.r)?;
    if let Some(path) = &a.trace {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let traces = a
            .r
            .iter()
            .map(|&r| numeric::integrate_abel(&numeric::u_to_v(&u, r)?, a.m, r))
            .collect::<Result<Vec<_>>>()?;
        let mut header = vec!["t".to_string()];
        header.extend(a.r.iter().map(|r| format!("z[r={r}]")));
        w.write_record(&header).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        for k in 0..u.grid_size() {
            let mut row = vec![u.time(k).to_string()];
            row.extend(traces.iter().map(|z| z[k].to_string()));
            w.write_record(&row).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        w.flush().map_err(io)?;
        writeln!(err, "trace written to {}", path.display()).map_err(io)?;
    }
    match a.format {
        Format::Json => writeln!(out, "{}", json(&report)?).map_err(io)?,
        _ => {
            writeln!(out, "E_x1[u](omega) = {:e}", report.e_x1_at_omega).map_err(io)?;
            for s in &report.samples {
                writeln!(out, "r={}: z(omega)={:.12} |z(omega)-r|={:.3e} max|z-closed form|={:.3e}", s.r, s.z_end, s.return_error, s.closed_form_error)
                    .map_err(io)?;
            }
            writeln!(out, "{}", if report.report.pass { "CENTER OK" } else { "CENTER FAILED" }).map_err(io)?;
        }
    }
    Ok(report.report.pass)
}

#[derive(Serialize)]
struct FdbTables {
    inverse_entries: Vec<String>,
    mh: Vec<Vec<String>>,
    mh_inverse_h1_one: Vec<Vec<String>>,
    antipode_row: Vec<String>,
}

fn cmd_fdb(a: &FdbArgs, out: &mut dyn Write) -> Result<bool> {
    if a.n == 0 {
        return Err(Error::InvalidArgument("--n must be >= 1".into()));
    }
    let strings = |m: &fdb::PolyMatrix| -> Vec<Vec<String>> { m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect() };
    let mh = fdb::mh_matrix(a.n);
    let inv = fdb::unitriangular_inverse(&fdb::set_h1_one(&mh))?;
    let tables = FdbTables {
        inverse_entries: fdb::symbolic_toeplitz_inverse(a.n + 1)?.iter().map(ToString::to_string).collect(),
        mh: strings(&mh),
        mh_inverse_h1_one: strings(&inv),
        antipode_row: (1..a.n).map(|j| fdb::fdb_antipode_row(j).map(|p| p.to_string())).collect::<Result<_>>()?,
    };
    match a.format {
        Format::Json => writeln!(out, "{}", json(&tables)?).map_err(io)?,
        _ => {
            for (j, p) in tables.inverse_entries.iter().enumerate() {
                writeln!(out, "h~{} = {p}", j + 1).map_err(io)?;
            }
            writeln!(out, "M_h:\n{}", fdb::render_matrix(&mh)).map_err(io)?;
            writeln!(out, "M_h^-1 at h1 = 1:\n{}", fdb::render_matrix(&inv)).map_err(io)?;
            for (j, p) in tables.antipode_row.iter().enumerate() {
                writeln!(out, "S(a{}) = {p}", j + 2).map_err(io)?;
            }
        }
    }
    Ok(true)
}

fn cmd_abel(a: &AbelArgs, out: &mut dyn Write) -> Result<bool> {
    let series = match &a.realization {
        Some(spec) => abelfeed::generate_from_realization(&Realization::parse(spec)?, a.output, a.cap)?,
        None => match a.route {
            Route::Devlin => devlin(a.m, a.cap)?.sum,
            Route::GroupInverse => abelfeed::abel_via_group_inverse(a.m, a.cap)?,
            Route::Feedback => abelfeed::abel_via_feedback(a.m, a.cap)?,
            Route::Realization => abelfeed::generate_from_realization(&Realization::abel(a.m), 1, a.cap)?,
        },
    };
    match a.format {
        Format::Json => writeln!(out, "{}", json(&series)?).map_err(io)?,
        _ => writeln!(out, "{series}").map_err(io)?,
    }
    Ok(true)
}
