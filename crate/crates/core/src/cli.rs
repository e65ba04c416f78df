//! The `wr` command line: polynomial evaluation, relation checks and figure
//! data. Output is CSV with a `# key=value` header by default, or JSON.
//!
//! Exit codes: 0 success (or check passed), 1 check failed or a numerical
//! routine did not converge, 2 invalid arguments or parameters.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::physics::{
    mixed_orthogonality_check, phase_shift, synthesize_from_orthonormal, BasisSpec,
};
use crate::racah::{
    racah_normalize, racah_orthogonality_check, racah_series, RacahForm, RacahParams,
};
use crate::wilson::{
    wilson_normalize, wilson_orthogonality_matrix, wilson_recursion, WilsonParams,
};

/// Default relation-check tolerance when neither `--tol` nor WR_TOL is set.
pub const DEFAULT_TOL: f64 = 1e-8;

const FIG1_PARAMS: [f64; 4] = [0.7, 0.2, 0.5, 0.3];
const FIG2_RACAH: [f64; 3] = [0.7, 10.3, 0.5];
const FIG2_N: usize = 10;
const MIXED_PARAMS: [f64; 4] = [-0.5, 1.2, 1.0, 0.8];
const FIGURE_STATES: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "wr",
    version,
    about = "Wilson and Racah polynomials, orthogonality checks and figure data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Wilson,
    Racah,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    /// Continuous orthogonality of the Wilson polynomials
    A4,
    /// Discrete orthogonality of the Racah polynomials, closed-form norms
    A13,
    /// Orthonormality of the normalized Racah polynomials
    A17,
    /// Dual discrete orthogonality of the Racah polynomials
    A18,
    /// Continuous plus discrete orthogonality with bound states
    Eq7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Bare,
    Tilde,
}

#[derive(Debug, Clone, clap::Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate polynomials of degree 0..=n at one argument
    Eval {
        #[arg(long, value_enum)]
        family: Family,
        /// Highest degree
        #[arg(long)]
        n: usize,
        /// Wilson argument y² (may be negative)
        #[arg(long, allow_hyphen_values = true)]
        y2: Option<f64>,
        /// Racah lattice point m
        #[arg(long)]
        m: Option<usize>,
        /// Wilson parameters μ,ν,a,b
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        /// Racah parameters α,β,γ (δ is derived)
        #[arg(long, allow_hyphen_values = true)]
        racah_params: Option<String>,
        /// Racah lattice size N
        #[arg(long = "N")]
        big_n: Option<usize>,
        /// Racah normalization when not orthonormal
        #[arg(long, value_enum, default_value = "tilde")]
        form: Form,
        /// Orthonormal values
        #[arg(long)]
        normalized: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify an orthogonality relation; writes a JSON report
    Check {
        #[arg(long, value_enum)]
        relation: Relation,
        /// Highest degree for continuous relations
        #[arg(long)]
        nmax: Option<usize>,
        /// Pass/fail tolerance on the residual
        #[arg(long, env = "WR_TOL", default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Wilson parameters μ,ν,a,b
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        /// Racah parameters α,β,γ
        #[arg(long, allow_hyphen_values = true)]
        racah_params: Option<String>,
        /// Racah lattice size N
        #[arg(long = "N")]
        big_n: Option<usize>,
        /// Write the report to this file instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the data behind one of the three figures
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        /// Sampling grid lo:hi:count
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Constraint(_)
            | Error::Param(_)
            | Error::Domain(_)
            | Error::Regime(_)
            | Error::NonFinite(_)
            | Error::Pole { .. } => 2,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// A rectangular table plus its `key=value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}={v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let metadata: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "metadata": metadata,
            "columns": self.columns,
            "rows": self.rows,
        })
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&self.to_json()).unwrap_or_default()
            ),
        }
    }
}

fn parse_list(text: &str, expected: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::usage(format!(
                "{what}: expected {expected} comma-separated numbers, got '{text}'"
            ))
        })?;
    if values.len() != expected {
        return Err(Failure::usage(format!(
            "{what}: expected {expected} values, got {}",
            values.len()
        )));
    }
    Ok(values)
}

fn wilson_params(text: Option<&str>, default: [f64; 4]) -> Result<WilsonParams, Failure> {
    let v = match text {
        Some(t) => parse_list(t, 4, "--params (μ,ν,a,b)")?,
        None => default.to_vec(),
    };
    Ok(WilsonParams::new(v[0], v[1], v[2], v[3])?)
}

fn racah_params(text: Option<&str>, big_n: Option<usize>) -> Result<RacahParams, Failure> {
    let (v, n) = match (text, big_n) {
        (Some(t), Some(n)) => (parse_list(t, 3, "--racah-params (α,β,γ)")?, n),
        (None, None) => (FIG2_RACAH.to_vec(), FIG2_N),
        _ => {
            return Err(Failure::usage(
                "--racah-params and --N must be given together",
            ))
        }
    };
    Ok(RacahParams::new(v[0], v[1], v[2], n)?)
}

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn wilson_meta(t: &mut Table, p: &WilsonParams) {
    t.meta("params", fmt_list(&[p.mu, p.nu, p.a, p.b]));
    t.meta("regime", format!("{:?}", p.regime()).to_lowercase());
}

fn racah_meta(t: &mut Table, r: &RacahParams) {
    t.meta("alpha", r.alpha);
    t.meta("beta", r.beta);
    t.meta("gamma", r.gamma);
    t.meta("delta", r.delta);
    t.meta("N", r.big_n);
}

/// Parsed `lo:hi:count` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Failure::usage(format!("malformed grid '{text}': expected lo:hi:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(bad());
        }
        if !(lo < hi) {
            return Err(Failure::usage(format!(
                "grid needs lo < hi (got {lo}:{hi})"
            )));
        }
        if count < 2 {
            return Err(Failure::usage(format!(
                "grid needs count ≥ 2 (got {count})"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }

    fn label(&self) -> String {
        format!("{}:{}:{}", self.lo, self.hi, self.count)
    }
}

fn eval_table(cmd: &Command) -> Result<Table, Failure> {
    let Command::Eval {
        family,
        n,
        y2,
        m,
        params,
        racah_params: rp,
        big_n,
        form,
        normalized,
        ..
    } = cmd
    else {
        unreachable!()
    };
    match family {
        Family::Wilson => {
            let p =
                wilson_params(
                    Some(params.as_deref().ok_or_else(|| {
                        Failure::usage("--params is required for the wilson family")
                    })?),
                    FIG1_PARAMS,
                )?;
            let y2 = y2.ok_or_else(|| Failure::usage("--y2 is required for the wilson family"))?;
            let mut table = wilson_recursion(*n, y2, &p)?;
            if *normalized {
                table = wilson_normalize(&table)?;
            }
            let mut t = Table::new(&["n", "value"]);
            t.meta("family", "wilson");
            wilson_meta(&mut t, &p);
            t.meta("y2", y2);
            t.meta("normalized", normalized);
            t.meta("method", "recursion");
            for (k, v) in table.values.iter().enumerate() {
                t.rows.push(vec![k as f64, *v]);
            }
            Ok(t)
        }
        Family::Racah => {
            if rp.is_none() || big_n.is_none() {
                return Err(Failure::usage(
                    "--racah-params and --N are required for the racah family",
                ));
            }
            let r = racah_params(rp.as_deref(), *big_n)?;
            let m = m.ok_or_else(|| Failure::usage("--m is required for the racah family"))?;
            if *n > r.big_n || m > r.big_n {
                return Err(Failure::usage(format!(
                    "n ≤ N and m ≤ N violated (n = {n}, m = {m}, N = {})",
                    r.big_n
                )));
            }
            let mut t = if *normalized {
                Table::new(&["n", "m", "re", "im"])
            } else {
                Table::new(&["n", "m", "value"])
            };
            t.meta("family", "racah");
            racah_meta(&mut t, &r);
            t.meta("m", m);
            t.meta("normalized", normalized);
            if *normalized {
                let o = racah_normalize(&r)?;
                for k in 0..=*n {
                    let v = o.values[k][m];
                    t.rows.push(vec![k as f64, m as f64, v.re, v.im]);
                }
            } else {
                let form = match form {
                    Form::Bare => RacahForm::Bare,
                    Form::Tilde => RacahForm::Tilde,
                };
                t.meta("form", format!("{form:?}").to_lowercase());
                for k in 0..=*n {
                    t.rows
                        .push(vec![k as f64, m as f64, racah_series(k, m, &r, form)?]);
                }
            }
            Ok(t)
        }
    }
}

/// Result of `check`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub relation: Relation,
    pub residual: f64,
    pub tolerance: f64,
    pub details: Map<String, Value>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }

    pub fn to_json(&self) -> Value {
        let name = format!("{:?}", self.relation).to_lowercase();
        let mut v = Map::new();
        v.insert("relation".into(), json!(name));
        v.insert("residual".into(), json!(self.residual));
        v.insert("tolerance".into(), json!(self.tolerance));
        v.insert("pass".into(), json!(self.pass()));
        for (k, x) in &self.details {
            v.insert(k.clone(), x.clone());
        }
        Value::Object(v)
    }
}

fn check_report(cmd: &Command) -> Result<CheckReport, Failure> {
    let Command::Check {
        relation,
        nmax,
        tol,
        params,
        racah_params: rp,
        big_n,
        ..
    } = cmd
    else {
        unreachable!()
    };
    if !(tol.is_finite() && *tol > 0.0) {
        return Err(Failure::usage(format!(
            "tolerance > 0 violated (tol = {tol})"
        )));
    }
    // the quadrature must be well below the pass threshold
    let quad_tol = (tol * 1e-2).clamp(1e-13, 1e-8);
    let mut details = Map::new();
    let residual = match relation {
        Relation::A4 => {
            let p = wilson_params(params.as_deref(), FIG1_PARAMS)?;
            let n_max = nmax.unwrap_or(8);
            let g = wilson_orthogonality_matrix(n_max, &p, quad_tol)?;
            details.insert("params".into(), json!([p.mu, p.nu, p.a, p.b]));
            details.insert("nmax".into(), json!(n_max));
            details.insert("max_off_diagonal".into(), json!(g.max_off_diagonal));
            details.insert(
                "max_diagonal_deviation".into(),
                json!(g.max_diagonal_deviation),
            );
            details.insert("quadrature_error".into(), json!(g.quadrature_error));
            g.max_deviation
        }
        Relation::Eq7 => {
            let p = wilson_params(params.as_deref(), MIXED_PARAMS)?;
            let n_max = nmax.unwrap_or(4);
            let r = mixed_orthogonality_check(&p, n_max, quad_tol)?;
            details.insert("params".into(), json!([p.mu, p.nu, p.a, p.b]));
            details.insert("nmax".into(), json!(n_max));
            details.insert("discrete_weights".into(), json!(r.discrete_weights));
            details.insert("quadrature_error".into(), json!(r.quadrature_error));
            r.residual
        }
        Relation::A13 | Relation::A17 | Relation::A18 => {
            let r = racah_params(rp.as_deref(), *big_n)?;
            details.insert("racah_params".into(), json!([r.alpha, r.beta, r.gamma]));
            details.insert("delta".into(), json!(r.delta));
            details.insert("N".into(), json!(r.big_n));
            if *relation == Relation::A17 {
                let o = racah_normalize(&r)?;
                details.insert("transpose_deviation".into(), json!(o.transpose_deviation()));
                details.insert("real".into(), json!(o.is_real()));
                o.gram_deviation()
            } else {
                let rep = racah_orthogonality_check(&r)?;
                details.insert("constants_residual".into(), json!(rep.constants_residual));
                details.insert("lambda_mismatch".into(), json!(rep.lambda_mismatch));
                if *relation == Relation::A13 {
                    rep.primal_residual
                } else {
                    rep.dual_residual
                }
            }
        }
    };
    Ok(CheckReport {
        relation: *relation,
        residual,
        tolerance: *tol,
        details,
    })
}

fn figure_table(id: u8, grid: Option<&str>) -> Result<Table, Failure> {
    let default = match id {
        1 => "0.01:5:500",
        2 => "-10:10:801",
        _ => "0:20:801",
    };
    let spec = GridSpec::parse(grid.unwrap_or(default))?;
    let points = spec.points();
    match id {
        1 => {
            if spec.lo <= 0.0 {
                return Err(Failure::usage(format!(
                    "figure 1 grid needs y > 0 (lo = {})",
                    spec.lo
                )));
            }
            let p = wilson_params(None, FIG1_PARAMS)?;
            let mut t = Table::new(&["y", "delta_over_pi", "delta_unwrapped_over_pi"]);
            t.meta("figure", 1);
            wilson_meta(&mut t, &p);
            t.meta("energy_variable", "y=k/lambda");
            t.meta("grid", spec.label());
            let mut unwrapped: Option<f64> = None;
            for y in points {
                let d = phase_shift(y, &p)?;
                let u = match unwrapped {
                    None => d,
                    Some(prev) => {
                        let two_pi = 2.0 * std::f64::consts::PI;
                        d + two_pi * ((prev - d) / two_pi).round()
                    }
                };
                unwrapped = Some(u);
                let pi = std::f64::consts::PI;
                t.rows.push(vec![y, d / pi, u / pi]);
            }
            Ok(t)
        }
        _ => {
            let r = racah_params(None, None)?;
            let basis = if id == 2 {
                BasisSpec::hermite(1.0)?
            } else {
                if spec.lo < 0.0 {
                    return Err(Failure::usage(format!(
                        "figure 3 grid needs r ≥ 0 (lo = {})",
                        spec.lo
                    )));
                }
                BasisSpec::laguerre(1, 1.0)?
            };
            let o = racah_normalize(&r)?;
            let states = (0..FIGURE_STATES)
                .map(|m| synthesize_from_orthonormal(&o, m, &basis, &points))
                .collect::<Result<Vec<_>, _>>()?;
            let coord = if id == 2 { "x" } else { "r" };
            let mut columns = vec![coord.to_string()];
            columns.extend((0..FIGURE_STATES).map(|m| format!("psi{m}")));
            columns.extend((0..FIGURE_STATES).map(|m| format!("im_psi{m}")));
            let mut t = Table {
                metadata: Vec::new(),
                columns,
                rows: Vec::new(),
            };
            t.meta("figure", id);
            racah_meta(&mut t, &r);
            t.meta("lambda", 1);
            t.meta(
                "basis",
                if id == 2 {
                    "hermite1d"
                } else {
                    "laguerre_radial"
                },
            );
            if id == 3 {
                t.meta("ell", 1);
            }
            t.meta("grid", spec.label());
            t.meta("real_coefficients", o.is_real());
            for (i, x) in points.iter().enumerate() {
                let mut row = vec![*x];
                row.extend(states.iter().map(|s| s.values[i].re));
                row.extend(states.iter().map(|s| s.values[i].im));
                t.rows.push(row);
            }
            Ok(t)
        }
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure {
                code: 1,
                message: format!("cannot write to standard output: {e}"),
            })
        }
    }
}

/// Executes a parsed command; returns the exit code on success.
pub fn execute(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        cmd @ Command::Eval { out, .. } => {
            let t = eval_table(cmd)?;
            emit(&t.render(out.format), out.output.as_ref())?;
            Ok(0)
        }
        cmd @ Command::Check { output, .. } => {
            let report = check_report(cmd)?;
            let text = format!(
                "{}\n",
                serde_json::to_string_pretty(&report.to_json()).unwrap_or_default()
            );
            emit(&text, output.as_ref())?;
            Ok(if report.pass() { 0 } else { 1 })
        }
        Command::Figure { id, grid, out } => {
            let t = figure_table(*id, grid.as_deref())?;
            emit(&t.render(out.format), out.output.as_ref())?;
            Ok(0)
        }
    }
}

/// Parses arguments, runs, prints errors to standard error and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("wr: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("wr").chain(args.iter().copied())).unwrap()
    }

    fn eval(args: &[&str]) -> Result<Table, Failure> {
        eval_table(&parse(args).command)
    }

    #[test]
    fn wilson_eval_examples() {
        let t = eval(&[
            "eval",
            "--family",
            "wilson",
            "--n",
            "1",
            "--y2",
            "1",
            "--params",
            "0.7,0.2,0.5,0.3",
        ])
        .unwrap();
        assert_eq!(t.rows[0], vec![0.0, 1.0]);
        assert!((t.rows[1][1] + 2.018_055_555_555_555_6).abs() < 1e-14);
        let e = eval(&[
            "eval",
            "--family",
            "wilson",
            "--n",
            "1",
            "--y2",
            "1",
            "--params",
            "0.7,-0.2,0.5,0.3",
        ])
        .unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("ν > 0"));
    }

    #[test]
    fn racah_eval_is_the_library_value() {
        let t = eval(&[
            "eval",
            "--family",
            "racah",
            "--n",
            "2",
            "--m",
            "1",
            "--racah-params",
            "0.7,10.3,0.5",
            "--N",
            "10",
        ])
        .unwrap();
        let r = RacahParams::new(0.7, 10.3, 0.5, 10).unwrap();
        assert_eq!(
            t.rows[2][2],
            racah_series(2, 1, &r, RacahForm::Tilde).unwrap()
        );
        let e = eval(&[
            "eval",
            "--family",
            "racah",
            "--n",
            "2",
            "--m",
            "1",
            "--racah-params",
            "0.7,5,0.5",
            "--N",
            "10",
        ])
        .unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("β > N−1"));
    }

    #[test]
    fn grid_parsing() {
        let g = GridSpec::parse("-1:1:3").unwrap();
        assert_eq!(g.points(), vec![-1.0, 0.0, 1.0]);
        for bad in ["1:2", "a:b:c", "2:1:5", "0:1:1", "0:inf:4"] {
            assert_eq!(GridSpec::parse(bad).unwrap_err().code, 2, "{bad}");
        }
    }

    #[test]
    fn csv_header_and_columns() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("k", 1.5);
        t.rows.push(vec![1.0, 0.25]);
        assert_eq!(t.to_csv(), "# k=1.5\na,b\n1,0.25\n");
        let j = t.to_json();
        assert_eq!(j["columns"][1], "b");
        assert_eq!(j["metadata"]["k"], "1.5");
    }

    #[test]
    fn racah_checks_pass_at_default_parameters() {
        for rel in ["a13", "a17", "a18"] {
            let rep = check_report(&parse(&["check", "--relation", rel, "--tol", "1e-9"]).command)
                .unwrap();
            assert!(rep.pass(), "{rel}: {}", rep.residual);
        }
        let rep = check_report(
            &parse(&[
                "check",
                "--relation",
                "a17",
                "--racah-params",
                "0.3,0.5,0.2",
                "--N",
                "0",
            ])
            .command,
        )
        .unwrap();
        assert!(rep.residual < 1e-15);
    }

    #[test]
    fn failing_check_reports_exit_one() {
        let cli = parse(&[
            "check",
            "--relation",
            "a17",
            "--tol",
            "1e-30",
            "--output",
            "/dev/null",
        ]);
        assert_eq!(execute(&cli).unwrap(), 1);
    }

    #[test]
    fn figure_one_is_finite() {
        let t = figure_table(1, None).unwrap();
        assert_eq!(t.rows.len(), 500);
        assert!(t.rows.iter().flatten().all(|v| v.is_finite()));
        assert!(figure_table(1, Some("0:5:10")).is_err());
    }
}
