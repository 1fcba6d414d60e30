//! Command-line front end: mean evaluation, `K` by any of its three routes,
//! exact coefficient tables, the ratio scan, and the verification suite.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code, so the whole interface can be driven in-process.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::{self, Write};

use agmean::elliptic::{self, EllipticResult, Method};
use agmean::means::{self, MeanInput};
use agmean::verify::{self, RatioScan, VerificationReport};
use agmean::{build_table, CoefficientTable, Column, Modulus, Profile};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "agmean",
    version,
    about = "Means, complete elliptic integrals, and exact checks of L < M < (pi/2) L"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Significant digits for floating-point text and CSV output (JSON is
    /// always exact).
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a bivariate mean.
    Mean(MeanArgs),
    /// Complete elliptic integral of the first kind.
    Elliptic(EllipticArgs),
    /// Exact coefficient table a_k, b_k, h(k), g(k), S_k.
    Coeffs(CoeffsArgs),
    /// M(1,t)/L(1,t) on a log-spaced grid.
    Scan(ScanArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MeanKind {
    Log,
    Identric,
    Genlog,
    Agm,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long, value_enum)]
    pub kind: MeanKind,
    /// Order of the generalized logarithmic mean.
    #[arg(long, allow_negative_numbers = true, required_if_eq("kind", "genlog"))]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Agm,
    Quadrature,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Series => Method::Series,
            MethodArg::Agm => Method::Agm,
            MethodArg::Quadrature => Method::Quadrature,
        }
    }
}

#[derive(Debug, Args)]
pub struct EllipticArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Modulus in [0, 1).
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["a", "b"], required_unless_present_all = ["a", "b"])]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "b")]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "a")]
    pub b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    /// Largest index, at least 2.
    #[arg(long)]
    pub kmax: u32,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub points: usize,
    #[arg(long)]
    pub tmin: f64,
    #[arg(long)]
    pub tmax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
    pub profile: ProfileArg,
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
}

/// JSON shape of `mean` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanOutput {
    pub kind: MeanKind,
    pub p: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

/// Row of `scan` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t: f64,
    pub ratio: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn domain(e: impl fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

/// Parses `args` (program name first) and executes the subcommand.
///
/// Returns 0 on success, 1 when verification ran and some claim failed, and 2
/// for usage or domain errors, which are reported on `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Domain(message)) => {
            let _ = report_error(cli.format, "domain", &message, err);
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = report_error(cli.format, "io", &e.to_string(), err);
            EXIT_USAGE
        }
    }
}

fn report_error(format: Format, kind: &str, message: &str, err: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            let value = serde_json::json!({ "error": kind, "message": message });
            writeln!(err, "{value}")
        }
        Format::Text | Format::Csv => writeln!(err, "error[{kind}]: {message}"),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let fmt = Float(cli.digits);
    match &cli.command {
        Command::Mean(args) => mean(args, cli.format, fmt, out).map(|()| EXIT_OK),
        Command::Elliptic(args) => elliptic_cmd(args, cli.format, fmt, out).map(|()| EXIT_OK),
        Command::Coeffs(args) => coeffs(args, cli.format, out).map(|()| EXIT_OK),
        Command::Scan(args) => scan(args, cli.format, fmt, out).map(|()| EXIT_OK),
        Command::Verify(args) => verify_cmd(args, cli.format, out),
    }
}

/// Display rounding to a number of significant digits.
#[derive(Debug, Clone, Copy)]
struct Float(u8);

impl Float {
    fn show(self, x: f64) -> String {
        if !x.is_finite() {
            return x.to_string();
        }
        let rounded: f64 = format!("{:.*e}", usize::from(self.0) - 1, x)
            .parse()
            .expect("formatted float parses");
        let magnitude = rounded.abs();
        if rounded == 0.0 || (1e-5..1e15).contains(&magnitude) {
            format!("{rounded}")
        } else {
            format!("{rounded:e}")
        }
    }
}

fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn mean(args: &MeanArgs, format: Format, fmt: Float, out: &mut dyn Write) -> Result<(), Failure> {
    if args.p.is_some() && args.kind != MeanKind::Genlog {
        return Err(domain("--p only applies to --kind genlog"));
    }
    let input = MeanInput::new(args.a, args.b).map_err(domain)?;
    let value = match args.kind {
        MeanKind::Log => means::log_mean(&input),
        MeanKind::Identric => means::identric_mean(&input),
        MeanKind::Agm => means::agm_mean(&input),
        MeanKind::Genlog => {
            let p = args.p.expect("clap enforces --p for genlog");
            means::gen_log_mean(p, &input).map_err(domain)?
        }
    };
    let output = MeanOutput {
        kind: args.kind,
        p: args.p,
        a: args.a,
        b: args.b,
        value,
    };
    match format {
        Format::Text => writeln!(out, "{}", fmt.show(value))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["kind", "p", "a", "b", "value"])?;
            let p = output.p.map(|p| fmt.show(p)).unwrap_or_default();
            let kind = format!("{:?}", output.kind).to_lowercase();
            w.write_record([
                kind,
                p,
                fmt.show(output.a),
                fmt.show(output.b),
                fmt.show(value),
            ])?;
            w.flush()?;
        }
        Format::Json => write_json(&output, out)?,
    }
    Ok(())
}

fn elliptic_cmd(
    args: &EllipticArgs,
    format: Format,
    fmt: Float,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let method = Method::from(args.method);
    let result: EllipticResult = match (args.t, args.a, args.b) {
        (Some(t), _, _) => elliptic::k_modulus(method, Modulus::new(t).map_err(domain)?),
        (None, Some(a), Some(b)) => elliptic::k_pair(method, a, b),
        _ => unreachable!("clap requires --t or both --a and --b"),
    }
    .map_err(domain)?;
    match format {
        Format::Text => {
            writeln!(out, "{}", fmt.show(result.value))?;
            writeln!(out, "method: {}", result.method)?;
            writeln!(out, "terms_or_iterations: {}", result.terms_or_iterations)?;
            writeln!(out, "error_estimate: {}", fmt.show(result.error_estimate))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["method", "value", "terms_or_iterations", "error_estimate"])?;
            w.write_record([
                result.method.to_string(),
                fmt.show(result.value),
                result.terms_or_iterations.to_string(),
                fmt.show(result.error_estimate),
            ])?;
            w.flush()?;
        }
        Format::Json => write_json(&result, out)?,
    }
    Ok(())
}

fn coeffs(args: &CoeffsArgs, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let table = build_table(args.kmax).map_err(domain)?;
    match format {
        Format::Text => write_table_text(&table, out)?,
        Format::Csv => out.write_all(table.to_csv().as_bytes())?,
        Format::Json => write_json(&table, out)?,
    }
    Ok(())
}

fn write_table_text(table: &CoefficientTable, out: &mut dyn Write) -> io::Result<()> {
    for k in 0..=table.k_max() {
        write!(out, "k = {k}")?;
        for column in Column::ALL {
            if let Some(v) = table.get(column, k) {
                write!(out, "  {column} = {v}")?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

fn scan(args: &ScanArgs, format: Format, fmt: Float, out: &mut dyn Write) -> Result<(), Failure> {
    let result: RatioScan =
        verify::scan_ratio(args.points, args.tmin, args.tmax).map_err(domain)?;
    let rows = result
        .grid
        .iter()
        .zip(&result.ratio)
        .map(|(&t, &ratio)| ScanRow {
            t,
            ratio,
            lower_bound: 1.0,
            upper_bound: FRAC_PI_2,
        });
    match format {
        Format::Text => {
            for row in rows {
                writeln!(out, "{}  {}", fmt.show(row.t), fmt.show(row.ratio))?;
            }
            writeln!(
                out,
                "strictly decreasing: {}; range [{}, {}] within (1, pi/2): {}",
                result.monotone_decreasing,
                fmt.show(result.min_value),
                fmt.show(result.max_value),
                result.within_bounds()
            )?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["t", "ratio", "lower_bound", "upper_bound"])?;
            for row in rows {
                w.write_record(
                    [row.t, row.ratio, row.lower_bound, row.upper_bound].map(|x| fmt.show(x)),
                )?;
            }
            w.flush()?;
        }
        Format::Json => write_json(&result, out)?,
    }
    Ok(())
}

fn verify_cmd(args: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let profile = match args.profile {
        ProfileArg::Quick => Profile::Quick,
        ProfileArg::Full => Profile::Full,
    };
    let reports = verify::run_all(profile, args.seed);
    match format {
        Format::Text => {
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            writeln!(out, "{passed}/{} claims passed", reports.len())?;
        }
        Format::Csv => write_reports_csv(&reports, out)?,
        Format::Json => write_json(&reports, out)?,
    }
    Ok(if verify::all_passed(&reports) {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    })
}

fn write_reports_csv(reports: &[VerificationReport], out: &mut dyn Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "claim_id",
        "status",
        "checked_points",
        "witness_input",
        "witness_observed",
        "witness_expected",
    ])?;
    for r in reports {
        let status = if r.passed() { "pass" } else { "fail" };
        let (input, observed, expected) = match &r.witness {
            Some(wi) => (
                wi.input.as_str(),
                wi.observed.as_str(),
                wi.expected.as_str(),
            ),
            None => ("", "", ""),
        };
        w.write_record([
            r.claim_id.as_str(),
            status,
            &r.checked_points.to_string(),
            input,
            observed,
            expected,
        ])?;
    }
    w.flush()?;
    Ok(())
}
