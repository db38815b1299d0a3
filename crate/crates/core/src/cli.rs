//! Command-line front end.
//!
//! Every subcommand prints one JSON report (or a CSV table for the tabular
//! subcommands) to standard output, or to `--out`. Relative `--out` paths
//! are resolved against `PRELOG_OUT_DIR` when that variable is set.
//!
//! Exit codes: 0 on success, 1 when a construction or verification fails,
//! 2 on invalid arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::bounds::{self, Exact, Rational};
use crate::index_sets::{self, IndexSelection};
use crate::jacobian::{self, TrialColoring, TrialSetup};
use crate::linalg::CMatrix;
use crate::model::{ChannelInput, ColoringMatrix, FadingRealization};
use crate::montecarlo::{self, SnrGrid};
use crate::rng;
use crate::{Dims, Error, Result};

/// Environment variable naming the base directory for relative `--out` paths.
pub const OUT_DIR_ENV: &str = "PRELOG_OUT_DIR";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "prelog", version, about = "Pre-log bounds, index sets, Jacobian witnesses and Monte Carlo checks for correlated block-fading MIMO channels")]
#[command(subcommand_required = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact pre-log bounds and the best number of active transmit antennas.
    Bounds {
        #[command(flatten)]
        dims: DimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Row sets I_r, pilot sets P_t, data sets D_t and the sets for adding receive antennas.
    IndexSets {
        #[command(flatten)]
        dims: DimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fraction of random draws with a nonsingular Jacobian.
    JacobianCheck {
        #[command(flatten)]
        dims: DimArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Nonsingular when sigma_min > tol * sigma_max.
        #[arg(long, default_value_t = jacobian::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Coloring::Gaussian)]
        coloring: Coloring,
        /// Use x = 0 in every trial.
        #[arg(long)]
        zero_input: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Explicit (Z, x = 1, s) with a certified nonsingular Jacobian.
    Witness {
        #[command(flatten)]
        dims: DimArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = jacobian::WITNESS_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bezout bound on the number of solutions of the polynomial system.
    Bezout {
        #[command(flatten)]
        dims: DimArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo estimate of E[log |det J|^2].
    McLogdet {
        #[command(flatten)]
        dims: DimArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Draws with sigma_min <= tol * sigma_max are floored at log(tol^2).
        #[arg(long, default_value_t = jacobian::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Coloring::Gaussian)]
        coloring: Coloring,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Slope of a k-NN estimate of I(x; y) / L against log(rho), Gaussian inputs.
    McMi {
        #[command(flatten)]
        dims: DimArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long, default_value_t = montecarlo::DEFAULT_KNN_K)]
        knn_k: usize,
        /// [default: 20]
        #[arg(long, allow_negative_numbers = true)]
        snr_start_db: Option<f64>,
        /// [default: 40]
        #[arg(long, allow_negative_numbers = true)]
        snr_stop_db: Option<f64>,
        #[arg(long, default_value_t = 5)]
        snr_points: usize,
        #[arg(long, value_enum, default_value_t = Coloring::Gaussian)]
        coloring: Coloring,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Slope of E_x[h(y | x)] against log(rho).
    HyxGrowth {
        #[command(flatten)]
        dims: DimArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// [default: 30]
        #[arg(long, allow_negative_numbers = true)]
        snr_start_db: Option<f64>,
        /// [default: 50]
        #[arg(long, allow_negative_numbers = true)]
        snr_stop_db: Option<f64>,
        #[arg(long, default_value_t = 5)]
        snr_points: usize,
        #[arg(long, value_enum, default_value_t = Coloring::Gaussian)]
        coloring: Coloring,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct DimArgs {
    /// Transmit antennas.
    #[arg(long = "T")]
    t: usize,
    /// Receive antennas.
    #[arg(long = "R")]
    r: usize,
    /// Block length.
    #[arg(long = "L")]
    l: usize,
    /// Rank of each correlation matrix.
    #[arg(long = "Q", default_value_t = 1)]
    q: usize,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Coloring matrix used by the stochastic subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coloring {
    /// I.i.d. CN(0, 1) entries drawn from the seed.
    Gaussian,
    /// All entries equal to one.
    Ones,
    /// Every block equal to one CN(0, 1) block drawn from the seed.
    Constant,
}

impl Coloring {
    fn name(self) -> &'static str {
        match self {
            Coloring::Gaussian => "gaussian",
            Coloring::Ones => "ones",
            Coloring::Constant => "constant",
        }
    }

    fn matrix(self, dims: Dims, seed: u64) -> Result<ColoringMatrix> {
        match self {
            Coloring::Gaussian => Ok(ColoringMatrix::from_seed(dims, seed)),
            Coloring::Ones => Ok(ColoringMatrix::ones(dims)),
            Coloring::Constant => {
                let mut r = rng::stream(seed, rng::COLORING_STREAM);
                let base = CMatrix::from_fn(dims.l, dims.q, |_, _| rng::complex_gaussian(&mut r));
                jacobian::constant_fading_z(dims, &base)
            }
        }
    }
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Failed(e.to_string())
        }
    }
}

/// A finished report plus whether the run verified what it was asked to.
struct Report {
    json: Value,
    csv: Option<String>,
    ok: bool,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let text = e.render().to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{}", line.trim_end());
            return 2;
        }
    };
    match execute(cli.command, stdout) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {}", single_line(&msg));
            2
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(stderr, "error: {}", single_line(&msg));
            1
        }
    }
}

fn single_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn execute(command: Command, stdout: &mut dyn Write) -> std::result::Result<bool, Failure> {
    let (report, output) = dispatch(command)?;
    let body = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("reports are plain JSON");
            s.push('\n');
            s
        }
        Format::Csv => match report.csv {
            Some(csv) => csv,
            None => {
                let name = report.json["subcommand"].as_str().unwrap_or_default().to_string();
                return Err(Failure::Usage(format!("{name} has no CSV form; use --format json")));
            }
        },
    };
    match &output.out {
        Some(path) => {
            let path = resolve_out(path);
            std::fs::write(&path, body).map_err(|e| Failure::Failed(format!("cannot write {}: {e}", path.display())))?;
        }
        None => stdout.write_all(body.as_bytes()).map_err(|e| Failure::Failed(format!("cannot write output: {e}")))?,
    }
    if !report.ok {
        let name = report.json["subcommand"].as_str().unwrap_or_default();
        return Err(Failure::Failed(format!("{name}: verification failed")));
    }
    Ok(true)
}

fn resolve_out(path: &std::path::Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(base) if path.is_relative() => PathBuf::from(base).join(path),
        _ => path.to_path_buf(),
    }
}

fn dims_of(d: &DimArgs) -> Result<Dims> {
    Dims::new(d.t, d.r, d.l, d.q)
}

fn construction_dims(d: &DimArgs) -> Result<Dims> {
    let dims = dims_of(d)?;
    dims.require_construction_regime()?;
    Ok(dims)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("--tol must lie in (0, 1), got {tol}")))
    }
}

fn grid(start: Option<f64>, stop: Option<f64>, points: usize, defaults: (f64, f64)) -> Result<SnrGrid> {
    let start = start.unwrap_or(defaults.0);
    let stop = stop.unwrap_or(defaults.1);
    if !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidArgument("SNR endpoints must be finite".into()));
    }
    SnrGrid::log_spaced_db(start, stop, points)
}

fn envelope(subcommand: &str, dims: Dims, seed: Option<u64>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("subcommand".into(), json!(subcommand));
    m.insert("dims".into(), serde_json::to_value(dims).expect("dims serialize"));
    m.insert("seed".into(), json!(seed));
    m
}

fn put_rational(m: &mut Map<String, Value>, key: &str, r: Rational) {
    let e = Exact(r);
    m.insert(key.into(), json!(e.to_string()));
    m.insert(format!("{key}_f64"), json!(e.to_f64()));
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

/// `Z` as `[r][t]` blocks, each L x Q row-major.
fn coloring_json(z: &ColoringMatrix) -> Value {
    let d = z.dims();
    Value::Array((0..d.r).map(|r| Value::Array((0..d.t).map(|t| matrix(z.block(r, t))).collect())).collect())
}

/// `x` as `[t][l]`.
fn input_json(dims: Dims, x: &ChannelInput) -> Value {
    Value::Array((0..dims.t).map(|t| Value::Array(x.antenna(t).iter().map(|&v| complex(v)).collect())).collect())
}

/// `s` as `[t][r][q]`, its stacking order.
fn fading_json(dims: Dims, s: &FadingRealization) -> Value {
    Value::Array(
        (0..dims.t)
            .map(|t| {
                Value::Array(
                    (0..dims.r)
                        .map(|r| Value::Array(s.block(r, t).iter().map(|&v| complex(v)).collect()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn dispatch(command: Command) -> std::result::Result<(Report, OutputArgs), Failure> {
    Ok(match command {
        Command::Bounds { dims, output } => (bounds_report(dims_of(&dims)?), output),
        Command::IndexSets { dims, output } => (index_sets_report(construction_dims(&dims)?)?, output),
        Command::JacobianCheck { dims, seed, trials, tol, coloring, zero_input, output } => {
            let dims = construction_dims(&dims)?;
            check_tol(tol)?;
            (jacobian_check_report(dims, seed, trials, tol, coloring, zero_input)?, output)
        }
        Command::Witness { dims, seed, tol, output } => {
            let dims = construction_dims(&dims)?;
            check_tol(tol)?;
            (witness_report(dims, seed, tol)?, output)
        }
        Command::Bezout { dims, output } => (bezout_report(construction_dims(&dims)?)?, output),
        Command::McLogdet { dims, seed, samples, tol, coloring, output } => {
            let dims = construction_dims(&dims)?;
            check_tol(tol)?;
            (mc_logdet_report(dims, seed, samples, tol, coloring)?, output)
        }
        Command::McMi { dims, seed, samples, knn_k, snr_start_db, snr_stop_db, snr_points, coloring, output } => {
            let dims = dims_of(&dims)?;
            let grid = grid(snr_start_db, snr_stop_db, snr_points, (20.0, 40.0))?;
            (mc_mi_report(dims, seed, samples, knn_k, &grid, coloring)?, output)
        }
        Command::HyxGrowth { dims, seed, samples, snr_start_db, snr_stop_db, snr_points, coloring, output } => {
            let dims = dims_of(&dims)?;
            let grid = grid(snr_start_db, snr_stop_db, snr_points, (30.0, 50.0))?;
            (hyx_growth_report(dims, seed, samples, &grid, coloring)?, output)
        }
    })
}

fn bounds_report(dims: Dims) -> Report {
    let rep = bounds::prelog_report(dims);
    let mut m = envelope("bounds", dims, None);
    let chi_low: Vec<Value> = rep
        .chi_low_per_t
        .iter()
        .map(|e| {
            let mut row = Map::new();
            row.insert("t_prime".into(), json!(e.t_prime));
            put_rational(&mut row, "raw", e.raw);
            put_rational(&mut row, "clamped", e.clamped);
            Value::Object(row)
        })
        .collect();
    m.insert("chi_low".into(), Value::Array(chi_low));
    put_rational(&mut m, "t_opt", rep.t_opt);
    put_rational(&mut m, "eta", rep.eta);
    put_rational(&mut m, "chi_star", rep.chi_star);
    put_rational(&mut m, "chi_star_clamped", rep.chi_star_clamped);
    m.insert("m_star".into(), json!(rep.m_star));
    put_rational(&mut m, "zheng_tse", rep.zheng_tse);
    m.insert("best_t".into(), json!(rep.best_t));
    put_rational(&mut m, "best_chi", rep.best_chi);

    let row = |name: &str, tp: Option<usize>, r: Rational| {
        let e = Exact(r);
        vec![name.to_string(), tp.map(|v| v.to_string()).unwrap_or_default(), e.to_string(), e.to_f64().to_string()]
    };
    let mut rows = Vec::new();
    for e in &rep.chi_low_per_t {
        rows.push(row("chi_low", Some(e.t_prime), e.raw));
        rows.push(row("chi_low_clamped", Some(e.t_prime), e.clamped));
    }
    rows.push(row("t_opt", None, rep.t_opt));
    rows.push(row("eta", None, rep.eta));
    rows.push(row("chi_star", None, rep.chi_star));
    rows.push(row("chi_star_clamped", None, rep.chi_star_clamped));
    rows.push(row("zheng_tse", Some(rep.m_star), rep.zheng_tse));
    rows.push(row("best_chi", Some(rep.best_t), rep.best_chi));
    Report {
        json: Value::Object(m),
        csv: Some(csv_table(&["quantity", "t_prime", "exact", "approx"], rows)),
        ok: true,
    }
}

fn checks_json(checks: &[index_sets::Check]) -> Value {
    serde_json::to_value(checks).expect("checks serialize")
}

fn index_sets_report(dims: Dims) -> Result<Report> {
    let sel = IndexSelection::canonical(dims)?;
    let fill = index_sets::pilot_fill_order(dims)?;
    let validation = index_sets::validate_selection(dims, &sel);
    let mut ok = validation.all_passed();
    let mut m = envelope("index-sets", dims, None);
    m.insert("I".into(), json!(sel.i_sets));
    m.insert("P".into(), json!(sel.p_sets));
    m.insert("P_fill_order".into(), json!(fill));
    m.insert("D".into(), json!(sel.d_sets));
    m.insert("theta".into(), json!(sel.theta));
    m.insert("k".into(), json!(sel.k));
    m.insert("ell".into(), json!(sel.ell));
    m.insert("rows".into(), json!(sel.rows()));
    m.insert("validation".into(), checks_json(&validation.checks));
    if dims.r > dims.t {
        let sets = index_sets::lemma5_sets(dims)?;
        let checks = index_sets::check_lemma5(dims, &sets);
        ok &= checks.iter().all(|c| c.passed);
        let mut l5 = match serde_json::to_value(&sets).expect("sets serialize") {
            Value::Object(o) => o,
            _ => unreachable!("struct serializes to an object"),
        };
        l5.insert("checks".into(), checks_json(&checks));
        m.insert("induction".into(), Value::Object(l5));
    }
    Ok(Report { json: Value::Object(m), csv: None, ok })
}

fn jacobian_check_report(
    dims: Dims,
    seed: u64,
    trials: usize,
    tol: f64,
    coloring: Coloring,
    zero_input: bool,
) -> Result<Report> {
    let sel = IndexSelection::canonical(dims)?;
    let trial_coloring = match coloring {
        Coloring::Gaussian => TrialColoring::Gaussian,
        Coloring::Ones => TrialColoring::Fixed(ColoringMatrix::ones(dims)),
        Coloring::Constant => TrialColoring::ConstantFading,
    };
    let setup = TrialSetup { coloring: trial_coloring, zero_input };
    let rep = jacobian::genericity_trial(dims, &sel, trials, seed, tol, &setup)?;
    // at least 99.9% of the draws nonsingular
    let generic = rep.nonsingular * 1000 >= 999 * rep.trials;
    let mut m = envelope("jacobian-check", dims, Some(seed));
    m.insert("trials".into(), json!(rep.trials));
    m.insert("nonsingular".into(), json!(rep.nonsingular));
    m.insert("singular".into(), json!(rep.trials - rep.nonsingular));
    m.insert("fraction".into(), json!(rep.fraction));
    m.insert("min_ratio".into(), json!(rep.min_ratio));
    m.insert("n".into(), json!(rep.n));
    m.insert("tol".into(), json!(tol));
    m.insert("coloring".into(), json!(coloring.name()));
    m.insert("zero_input".into(), json!(zero_input));
    m.insert("generic".into(), json!(generic));
    // Only the generic configuration has an expected outcome.
    let ok = generic || coloring != Coloring::Gaussian || zero_input;
    Ok(Report { json: Value::Object(m), csv: None, ok })
}

fn witness_report(dims: Dims, seed: u64, tol: f64) -> Result<Report> {
    let w = jacobian::witness(dims, seed, tol)?;
    let mut m = envelope("witness", dims, Some(seed));
    m.insert("Z".into(), coloring_json(&w.z));
    m.insert("x".into(), input_json(dims, &w.x));
    m.insert("s".into(), fading_json(dims, &w.s));
    m.insert("certificate".into(), serde_json::to_value(w.certificate).expect("certificate serializes"));
    m.insert("P".into(), json!(w.selection.p_sets));
    m.insert("I".into(), json!(w.selection.i_sets));
    m.insert("D".into(), json!(w.selection.d_sets));
    Ok(Report { json: Value::Object(m), csv: None, ok: true })
}

fn bezout_report(dims: Dims) -> Result<Report> {
    let sel = IndexSelection::canonical(dims)?;
    let b = jacobian::bezout_exponent(dims, &sel);
    let mut m = envelope("bezout", dims, None);
    m.insert("exponent".into(), json!(b.exponent));
    m.insert("data_columns".into(), json!(b.data_columns));
    m.insert("fading_columns".into(), json!(b.fading_columns));
    m.insert("bound".into(), json!(b.to_string()));
    Ok(Report { json: Value::Object(m), csv: None, ok: true })
}

fn mc_logdet_report(dims: Dims, seed: u64, samples: usize, tol: f64, coloring: Coloring) -> Result<Report> {
    let sel = IndexSelection::canonical(dims)?;
    let z = coloring.matrix(dims, seed)?;
    let est = montecarlo::mc_logdet_with_tol(dims, &z, &sel, samples, seed, tol)?;
    let mut m = envelope("mc-logdet", dims, Some(seed));
    m.insert("mean".into(), json!(est.estimate.mean));
    m.insert("std_err".into(), json!(est.estimate.std_err));
    m.insert("samples".into(), json!(samples));
    m.insert("floored".into(), json!(est.floored));
    m.insert("floored_fraction".into(), json!(est.floored_fraction));
    m.insert("tol".into(), json!(tol));
    m.insert("coloring".into(), json!(coloring.name()));
    Ok(Report { json: Value::Object(m), csv: None, ok: true })
}

fn value_string(v: f64) -> String {
    v.to_string()
}

fn mc_mi_report(dims: Dims, seed: u64, samples: usize, knn_k: usize, grid: &SnrGrid, coloring: Coloring) -> Result<Report> {
    let z = coloring.matrix(dims, seed)?;
    let rep = montecarlo::mc_mi_slope(dims, &z, grid, samples, knn_k, seed)?;
    let mut m = envelope("mc-mi", dims, Some(seed));
    m.insert("slope".into(), json!(rep.slope));
    m.insert("intercept".into(), json!(rep.intercept));
    m.insert("slope_std_err".into(), json!(rep.slope_std_err));
    m.insert("samples".into(), json!(samples));
    m.insert("knn_k".into(), json!(knn_k));
    m.insert("coloring".into(), json!(coloring.name()));
    let points: Vec<Value> = rep
        .per_point
        .iter()
        .map(|p| {
            json!({
                "snr_db": p.snr_db,
                "rho": p.rho,
                "h_y": p.h_y.mean,
                "h_y_std_err": p.h_y.std_err,
                "h_y_given_x": p.h_y_given_x.mean,
                "h_y_given_x_std_err": p.h_y_given_x.std_err,
                "mi": p.mi.mean,
                "mi_std_err": p.mi.std_err,
            })
        })
        .collect();
    m.insert("per_point".into(), Value::Array(points));
    let rows = rep
        .per_point
        .iter()
        .map(|p| {
            [p.snr_db, p.rho, p.h_y.mean, p.h_y.std_err, p.h_y_given_x.mean, p.h_y_given_x.std_err, p.mi.mean, p.mi.std_err]
                .into_iter()
                .map(value_string)
                .collect()
        })
        .collect();
    let header = ["snr_db", "rho", "h_y", "h_y_std_err", "h_y_given_x", "h_y_given_x_std_err", "mi", "mi_std_err"];
    Ok(Report { json: Value::Object(m), csv: Some(csv_table(&header, rows)), ok: true })
}

fn hyx_growth_report(dims: Dims, seed: u64, samples: usize, grid: &SnrGrid, coloring: Coloring) -> Result<Report> {
    let z = coloring.matrix(dims, seed)?;
    let rep = montecarlo::hyx_growth_check(dims, &z, grid, samples, seed)?;
    let expected = dims.t * dims.q * dims.r;
    let mut m = envelope("hyx-growth", dims, Some(seed));
    m.insert("slope".into(), json!(rep.slope));
    m.insert("intercept".into(), json!(rep.intercept));
    m.insert("expected_slope".into(), json!(expected));
    m.insert("samples".into(), json!(samples));
    m.insert("coloring".into(), json!(coloring.name()));
    let points: Vec<Value> = rep
        .per_point
        .iter()
        .map(|p| {
            json!({
                "snr_db": p.snr_db,
                "rho": p.rho,
                "h_y_given_x": p.h_y_given_x.mean,
                "std_err": p.h_y_given_x.std_err,
            })
        })
        .collect();
    m.insert("per_point".into(), Value::Array(points));
    let rows = rep
        .per_point
        .iter()
        .map(|p| [p.snr_db, p.rho, p.h_y_given_x.mean, p.h_y_given_x.std_err].into_iter().map(value_string).collect())
        .collect();
    Ok(Report {
        json: Value::Object(m),
        csv: Some(csv_table(&["snr_db", "rho", "h_y_given_x", "std_err"], rows)),
        ok: true,
    })
}
