//! Command-line surface.
//!
//! Exit codes: 0 pass, 1 check failure, 2 out-of-scope input, 3 capacity.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytic::{asymptotic_constant, AnalyticError};
use crate::oracle::report::REPRESENTATIVES;
use crate::oracle::{derive_two_adic_tables, ideal_dfs, rational_baseline, verify_local_tables, OracleError};
use crate::primes::primes_up_to;
use crate::quadfield::{splitting_type, validate_field, FieldError, FieldSpec};
use crate::series::{cumulative, euler_pairs_with_workers, extension_counts_from, write_csv, SeriesError};
use crate::localdata::golden_tables_json;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_SCOPE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Fields compared entrywise by the coefficient oracle when no `-D` is given.
pub const COEFFICIENT_FIELDS: [i64; 9] = [-7, -11, -23, -1, -2, -3, 5, 13, 17];

const VERIFY_CHECKPOINTS: u32 = 10;
const DEFAULT_VERIFY_TOL: f64 = 0.05;
const DEFAULT_RATIONAL_TOL: f64 = 0.01;
const DEFAULT_ORACLE_N: u64 = 10_000;
const DEFAULT_RATIONAL_X: u64 = 1_000_000;
const SPLITTING_TABLE_BOUND: u64 = 100;

#[derive(Debug, Parser)]
#[command(name = "quadtally", version, about = "Quadratic extensions of quadratic fields with odd class number")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of the field and the splitting of primes up to 100.
    FieldReport {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ordinary and signed coefficient arrays by conductor norm.
    Coeffs {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'N', long = "N")]
        n: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The asymptotic constant with its factors.
    Constant {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Extension counts against the predicted line at x = X/2^j.
    Verify {
        #[command(flatten)]
        field: FieldArg,
        #[arg(short = 'X', long = "X")]
        x: u64,
        #[arg(long, value_parser = positive_f64)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Brute-force check suites.
    Oracle {
        #[arg(long, value_enum)]
        scope: Scope,
        /// Restrict to one field; by default every field of the suite runs.
        #[arg(short = 'D', allow_negative_numbers = true)]
        d: Option<i64>,
        #[arg(short = 'N', long = "N")]
        n: Option<u64>,
        #[arg(short = 'X', long = "X")]
        x: Option<u64>,
        #[arg(long, value_parser = positive_f64)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct FieldArg {
    /// Squarefree D selecting Q(√D).
    #[arg(short = 'D', allow_negative_numbers = true)]
    pub d: i64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    LocalTables,
    Coefficients,
    Rational,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("tolerance must be positive".into())
    }
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        let code = match e {
            FieldError::Overflow { .. } | FieldError::UnitTooLarge { .. } => EXIT_CAPACITY,
            _ => EXIT_SCOPE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        let code = match e {
            SeriesError::CapacityExceeded { .. } => EXIT_CAPACITY,
            _ => EXIT_FAIL,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::CapacityExceeded { .. } | OracleError::TooLarge { .. } => EXIT_CAPACITY,
            _ => EXIT_FAIL,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<AnalyticError> for Failure {
    fn from(e: AnalyticError) -> Self {
        Failure { code: EXIT_FAIL, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_FAIL, message: e.to_string() }
    }
}

/// Runs a parsed command, writing results to `--out` or `stdout` and
/// diagnostics to `stderr`. Returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        // usage errors count as out-of-scope input; --help and --version succeed
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{}", e.render());
            EXIT_SCOPE
        }
        Err(e) => {
            let _ = write!(stdout, "{}", e.render());
            EXIT_PASS
        }
    }
}

fn emit(output: &OutputArgs, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn emit_json(output: &OutputArgs, stdout: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    emit(output, stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, v).map_err(io::Error::from)?;
        writeln!(w)
    })
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::FieldReport { field, output } => field_report(field.d, &output, stdout),
        Command::Coeffs { field, n, workers, output } => coeffs(field.d, n, workers, &output, stdout),
        Command::Constant { field, output } => constant(field.d, &output, stdout),
        Command::Verify { field, x, tol, workers, output } => {
            verify(field.d, x, tol.unwrap_or(DEFAULT_VERIFY_TOL), workers, &output, stdout)
        }
        Command::Oracle { scope, d, n, x, tol, output } => match scope {
            Scope::LocalTables => oracle_local_tables(d, &output, stdout),
            Scope::Coefficients => oracle_coefficients(d, n.unwrap_or(DEFAULT_ORACLE_N), &output, stdout),
            Scope::Rational => oracle_rational(
                x.or(n).unwrap_or(DEFAULT_RATIONAL_X),
                tol.unwrap_or(DEFAULT_RATIONAL_TOL),
                &output,
                stdout,
            ),
        },
    }
}

#[derive(Serialize)]
struct SplittingRow {
    p: u64,
    #[serde(rename = "type")]
    kind: crate::quadfield::Splitting,
    ideal_norms: Vec<u64>,
}

fn splitting_rows(field: &FieldSpec) -> Vec<SplittingRow> {
    primes_up_to(SPLITTING_TABLE_BOUND)
        .into_iter()
        .map(|p| {
            let s = splitting_type(field, p);
            SplittingRow {
                p,
                kind: s.splitting,
                ideal_norms: s.ideal_norms,
            }
        })
        .collect()
}

fn field_report(d: i64, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let field = validate_field(d)?;
    let rows = splitting_rows(&field);
    match output.format {
        Format::Json => {
            let mut v = serde_json::to_value(&field).expect("field serializes");
            v["splitting"] = json!(rows);
            emit_json(output, stdout, &v)?;
        }
        Format::Csv => emit(output, stdout, |w| {
            write!(w, "p,type,ideal_norms\r\n")?;
            for r in &rows {
                let norms: Vec<String> = r.ideal_norms.iter().map(u64::to_string).collect();
                write!(w, "{},{:?},{}\r\n", r.p, r.kind, norms.join(";"))?;
            }
            Ok(())
        })?,
    }
    Ok(EXIT_PASS)
}

fn coeffs(d: i64, n: u64, workers: usize, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let field = validate_field(d)?;
    let (a0, am) = euler_pairs_with_workers(&field, n, workers)?;
    match output.format {
        Format::Csv => emit(output, stdout, |w| write_csv(w, &a0, &am))?,
        Format::Json => {
            let values = |c: &crate::series::CoeffArray| (1..=n).map(|k| c.get(k)).collect::<Vec<_>>();
            let even: Vec<i64> = (1..=n).map(|k| (a0.get(k) + am.get(k)).div_euclid(2)).collect();
            let v = json!({
                "header": a0.header_json(),
                "a0": values(&a0),
                "aminus": values(&am),
                "even_count": even,
            });
            emit_json(output, stdout, &v)?;
        }
    }
    Ok(EXIT_PASS)
}

fn constant(d: i64, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let field = validate_field(d)?;
    let report = asymptotic_constant(&field)?;
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["d_K"] = json!(field.disc());
    v["conductor_slope"] = json!(report.conductor_slope(&field));
    match output.format {
        Format::Json => emit_json(output, stdout, &v)?,
        Format::Csv => emit(output, stdout, |w| {
            write!(w, "quantity,value\r\n")?;
            for (k, val) in v.as_object().expect("object") {
                let text = match val {
                    Value::Null => String::new(),
                    other => other.to_string(),
                };
                write!(w, "{k},{text}\r\n")?;
            }
            Ok(())
        })?,
    }
    Ok(EXIT_PASS)
}

/// One checkpoint of an asymptotic run.
#[derive(Debug, Clone, Serialize)]
pub struct Checkpoint {
    pub x: u64,
    /// Extensions with conductor norm at most `x`.
    pub count: i64,
    pub predicted: f64,
    pub ratio: Option<f64>,
}

/// Counts at `x = X/2^j`, ascending, against the line `slope · x`.
pub fn checkpoints(cumulative_counts: &[i64], x_max: u64, slope: f64, steps: u32) -> Vec<Checkpoint> {
    let mut xs: Vec<u64> = (0..=steps).map(|j| x_max >> j).filter(|&x| x >= 1).collect();
    xs.dedup();
    xs.reverse();
    xs.into_iter()
        .map(|x| {
            let count = cumulative_counts[x as usize];
            let predicted = slope * x as f64;
            let ratio = (count > 0).then(|| count as f64 / predicted);
            Checkpoint { x, count, predicted, ratio }
        })
        .collect()
}

fn verify(d: i64, x: u64, tol: f64, workers: usize, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let field = validate_field(d)?;
    let (a0, am) = euler_pairs_with_workers(&field, x, workers)?;
    let counts = extension_counts_from(&field, &a0, &am)?;
    let report = asymptotic_constant(&field)?;
    let slope = report.conductor_slope(&field);
    let rows = checkpoints(&cumulative(&counts), x, slope, VERIFY_CHECKPOINTS);
    let status = match rows.last().and_then(|r| r.ratio) {
        None => "INSUFFICIENT",
        Some(r) if (r - 1.0).abs() <= tol => "PASS",
        Some(_) => "FAIL",
    };
    match output.format {
        Format::Json => {
            let v = json!({
                "D": d,
                "X": x,
                "tol": tol,
                "C": report.c,
                "slope": slope,
                "checkpoints": rows,
                "status": status,
            });
            emit_json(output, stdout, &v)?;
        }
        Format::Csv => emit(output, stdout, |w| {
            write!(w, "x,count,predicted,ratio,status\r\n")?;
            let last = rows.len() - 1;
            for (i, r) in rows.iter().enumerate() {
                let ratio = r.ratio.map(|v| v.to_string()).unwrap_or_default();
                let flag = if i == last { status } else { "" };
                write!(w, "{},{},{},{},{}\r\n", r.x, r.count, r.predicted, ratio, flag)?;
            }
            Ok(())
        })?,
    }
    Ok(if status == "PASS" { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Debug, Clone, Serialize)]
struct SuiteLine {
    check: String,
    #[serde(rename = "field_D")]
    field_d: Option<i64>,
    status: &'static str,
    detail: Value,
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn finish_suite(lines: Vec<SuiteLine>, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let passed = lines.iter().all(|l| l.status == "PASS");
    match output.format {
        Format::Json => {
            let v = json!({ "passed": passed, "checks": lines });
            emit_json(output, stdout, &v)?;
        }
        Format::Csv => emit(output, stdout, |w| {
            write!(w, "check,field_D,status\r\n")?;
            for l in &lines {
                let d = l.field_d.map(|d| d.to_string()).unwrap_or_default();
                write!(w, "\"{}\",{},{}\r\n", l.check.replace('"', "\"\""), d, l.status)?;
            }
            Ok(())
        })?,
    }
    Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
}

fn oracle_local_tables(d: Option<i64>, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let fields: Vec<i64> = d.map(|d| vec![d]).unwrap_or_else(|| REPRESENTATIVES.to_vec());
    let mut lines = Vec::new();
    for d in fields {
        let field = validate_field(d)?;
        let report = verify_local_tables(&field);
        for c in report.checks {
            lines.push(SuiteLine {
                check: c.check,
                field_d: Some(d),
                status: c.status,
                detail: json!({ "expected": c.expected, "actual": c.actual }),
            });
        }
    }
    let derived = serde_json::to_value(derive_two_adic_tables()?).expect("tables serialize");
    let golden: Value = serde_json::from_str(&golden_tables_json()).expect("static tables parse");
    lines.push(SuiteLine {
        check: "two-adic tables derived from scratch equal the shipped tables".into(),
        field_d: None,
        status: status(derived == golden),
        detail: json!({ "expected": golden, "actual": derived }),
    });
    finish_suite(lines, output, stdout)
}

fn oracle_coefficients(d: Option<i64>, n: u64, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let fields: Vec<i64> = d.map(|d| vec![d]).unwrap_or_else(|| COEFFICIENT_FIELDS.to_vec());
    let mut lines = Vec::new();
    for d in fields {
        let field = validate_field(d)?;
        let (a0, am) = euler_pairs_with_workers(&field, n, 1)?;
        let dfs = ideal_dfs(&field, n)?;
        for (label, ours, theirs) in [("unsigned", &a0, &dfs.unsigned), ("signed", &am, &dfs.signed)] {
            let mismatches: Vec<u64> = (1..=n).filter(|&k| ours.get(k) != theirs.get(k)).collect();
            let detail = match mismatches.first() {
                Some(&k) => json!({
                    "mismatches": mismatches.len(),
                    "first": { "n": k, "euler": ours.get(k), "dfs": theirs.get(k) },
                }),
                None => json!({ "mismatches": 0 }),
            };
            lines.push(SuiteLine {
                check: format!("{label} coefficients up to N={n}"),
                field_d: Some(d),
                status: status(mismatches.is_empty()),
                detail,
            });
        }
    }
    finish_suite(lines, output, stdout)
}

fn oracle_rational(x: u64, tol: f64, output: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let count = rational_baseline(x)?;
    let predicted = 6.0 / (PI * PI) * x as f64;
    let ratio = count as f64 / predicted;
    let lines = vec![SuiteLine {
        check: format!("quadratic fields with |disc| <= {x} against 6/π² x"),
        field_d: None,
        status: status((ratio - 1.0).abs() <= tol),
        detail: json!({ "count": count, "predicted": predicted, "ratio": ratio, "tol": tol }),
    }];
    finish_suite(lines, output, stdout)
}
