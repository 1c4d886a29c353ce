//! Command-line front end: `eval`, `table`, `simulate` and `verify`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bridge::{self, IdentityReport};
use crate::catalan::{self, CatalanPoint};
use crate::cbinom::{self, BinomParams};
use crate::distribution::{self, DistParams};
use crate::error::{Error, Result};
use crate::special::{bessel_i, laguerre_assoc, BesselOrder};
use crate::telegraph::{self, TelegraphConfig};

#[derive(Debug, Parser)]
#[command(name = "contlattice", version, about = "Continuous lattice-path functions and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function, e.g. `eval cbinom x=1 s=0`.
    Eval {
        function: String,
        /// Arguments as name=value.
        args: Vec<String>,
    },
    /// Tabulate a function over one variable, e.g. `table pdf x=10 p=0.5 s=0:10`.
    Table {
        function: String,
        /// Fixed arguments as name=value and exactly one sweep as name=start:stop.
        args: Vec<String>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Simulate the telegraph process at time t.
    Simulate {
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the switch times of every path, one row per path.
        #[arg(long)]
        switch_times: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run identity checks by name, or `all`.
    Verify {
        names: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// List the registered identities and exit.
        #[arg(long)]
        list: bool,
    },
}

/// A function reachable from `eval` and `table`.
struct Function {
    name: &'static str,
    params: &'static [&'static str],
    eval: fn(&[f64]) -> Result<f64>,
}

fn order_from(nu: f64) -> Result<BesselOrder> {
    let twice = 2.0 * nu;
    if twice.fract() != 0.0 || twice.abs() > 1e3 {
        return Err(Error::Domain(format!("order must be a multiple of 1/2 (got {nu})")));
    }
    BesselOrder::new(twice as i32)
}

fn whole(v: f64, what: &str) -> Result<u32> {
    if v.fract() != 0.0 || !(0.0..=1e6).contains(&v) {
        return Err(Error::Domain(format!("{what} must be a non-negative integer (got {v})")));
    }
    Ok(v as u32)
}

static FUNCTIONS: &[Function] = &[
    Function { name: "bessel_i", params: &["nu", "z"], eval: |a| Ok(bessel_i(order_from(a[0])?, a[1])?.to_f64()) },
    Function { name: "catalan", params: &["x", "y"], eval: |a| Ok(catalan::catalan(CatalanPoint::new(a[0], a[1])?)) },
    Function { name: "catalan_gf", params: &["x"], eval: |a| catalan::catalan_gf_bridge(a[0]) },
    Function { name: "cbinom", params: &["x", "s"], eval: |a| Ok(cbinom::cbinom(BinomParams::new(a[0], a[1])?)) },
    Function { name: "cdf", params: &["x", "p", "s"], eval: |a| Ok(DistParams::new(a[0], a[1])?.cdf(a[2])) },
    Function { name: "central_binomial", params: &["s"], eval: |a| cbinom::central_binomial(a[0]) },
    Function {
        name: "density",
        params: &["c", "lambda", "t", "s"],
        eval: |a| telegraph::density(&TelegraphConfig::new(a[0], a[1], a[2], 0)?, a[3]),
    },
    Function { name: "laguerre", params: &["n", "k", "x"], eval: |a| laguerre_assoc(whole(a[0], "n")?, whole(a[1], "k")?, a[2]) },
    Function { name: "mgf", params: &["x", "p", "u"], eval: |a| Ok(DistParams::new(a[0], a[1])?.mgf(a[2])) },
    Function { name: "normalization", params: &["x", "p"], eval: |a| distribution::normalization(a[0], a[1]) },
    Function { name: "pdf", params: &["x", "p", "s"], eval: |a| Ok(DistParams::new(a[0], a[1])?.pdf(a[2])) },
    Function { name: "quantile", params: &["x", "p", "q"], eval: |a| DistParams::new(a[0], a[1])?.quantile(a[2]) },
];

fn lookup(name: &str) -> Result<&'static Function> {
    FUNCTIONS.iter().find(|f| f.name == name).ok_or_else(|| {
        let known: Vec<_> = FUNCTIONS.iter().map(|f| f.name).collect();
        Error::Config(format!("unknown function '{name}' (known: {})", known.join(", ")))
    })
}

fn parse_number(name: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("argument {name}: '{text}' is not a number")))
}

enum Arg {
    Fixed(f64),
    Sweep(f64, f64),
}

fn parse_args(function: &Function, raw: &[String]) -> Result<Vec<(String, Arg)>> {
    let mut out: Vec<(String, Arg)> = Vec::new();
    for item in raw {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected name=value, got '{item}'")))?;
        if !function.params.contains(&name) {
            return Err(Error::Config(format!(
                "{} takes ({}), not '{name}'",
                function.name,
                function.params.join(", ")
            )));
        }
        if out.iter().any(|(n, _)| n == name) {
            return Err(Error::Config(format!("argument '{name}' given twice")));
        }
        let arg = match value.split_once(':') {
            Some((a, b)) => Arg::Sweep(parse_number(name, a)?, parse_number(name, b)?),
            None => Arg::Fixed(parse_number(name, value)?),
        };
        out.push((name.to_string(), arg));
    }
    for p in function.params {
        if !out.iter().any(|(n, _)| n == p) {
            return Err(Error::Config(format!(
                "{} needs ({}); missing '{p}'",
                function.name,
                function.params.join(", ")
            )));
        }
    }
    Ok(out)
}

fn ordered_values(function: &Function, args: &[(String, Arg)], sweep_value: f64) -> Vec<f64> {
    function
        .params
        .iter()
        .map(|p| match args.iter().find(|(n, _)| n == p).map(|(_, a)| a) {
            Some(Arg::Fixed(v)) => *v,
            _ => sweep_value,
        })
        .collect()
}

/// `%.15g`-style rendering.
pub fn format_significant(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest decimal that round-trips, switching to exponent form outside
/// `[1e−5, 1e16)`.
pub fn format_shortest(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run_eval(function: &str, raw: &[String]) -> Result<()> {
    let f = lookup(function)?;
    let args = parse_args(f, raw)?;
    if args.iter().any(|(_, a)| matches!(a, Arg::Sweep(..))) {
        return Err(Error::Config("eval takes fixed values only; use table for ranges".into()));
    }
    let value = (f.eval)(&ordered_values(f, &args, 0.0))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{}", format_significant(value))?;
    Ok(())
}

fn run_table(function: &str, raw: &[String], steps: usize, output: &Option<PathBuf>, format: Format) -> Result<()> {
    let f = lookup(function)?;
    let args = parse_args(f, raw)?;
    let sweeps: Vec<_> = args
        .iter()
        .filter_map(|(n, a)| match a {
            Arg::Sweep(lo, hi) => Some((n.clone(), *lo, *hi)),
            Arg::Fixed(_) => None,
        })
        .collect();
    let [(var, start, stop)] = sweeps.as_slice() else {
        return Err(Error::Config(format!("table needs exactly one sweep name=start:stop (got {})", sweeps.len())));
    };
    if steps < 2 {
        return Err(Error::Config(format!("--steps must be at least 2 (got {steps})")));
    }
    if !(start.is_finite() && stop.is_finite()) || start == stop {
        return Err(Error::Config(format!("degenerate range {start}:{stop}")));
    }
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let v = if i == steps {
            *stop
        } else {
            start + (stop - start) * i as f64 / steps as f64
        };
        rows.push((v, (f.eval)(&ordered_values(f, &args, v))?));
    }
    let mut out = open_output(output)?;
    match format {
        Format::Json => {
            for (v, y) in &rows {
                let mut obj = serde_json::Map::new();
                obj.insert(var.clone(), serde_json::json!(v));
                obj.insert("value".into(), serde_json::json!(y));
                writeln!(out, "{}", serde_json::Value::Object(obj))?;
            }
        }
        Format::Csv | Format::Text => {
            writeln!(out, "{var},value")?;
            for (v, y) in &rows {
                writeln!(out, "{},{}", format_shortest(*v), format_shortest(*y))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    config: TelegraphConfig,
    count: usize,
    output: &Option<PathBuf>,
    switch_times: &Option<PathBuf>,
    format: Format,
) -> Result<()> {
    if count == 0 {
        return Err(Error::Config("--count must be at least 1".into()));
    }
    let samples = match switch_times {
        Some(path) => {
            let paths = telegraph::simulate_paths(&config, count);
            telegraph::write_switch_times_csv(BufWriter::new(File::create(path)?), &paths)?;
            paths.into_iter().map(|p| p.sample).collect()
        }
        None => telegraph::simulate(&config, count),
    };
    let mut out = open_output(output)?;
    match format {
        Format::Json => {
            for s in &samples {
                let row = serde_json::json!({
                    "kind": s.kind.as_str(),
                    "position": s.position,
                    "switch_count": s.switch_count,
                });
                writeln!(out, "{row}")?;
            }
            out.flush()?;
        }
        Format::Csv | Format::Text => telegraph::write_samples_csv(&mut out, &samples)?,
    }
    let (atom_fraction, mean) = telegraph::summarize(&samples);
    eprintln!(
        "samples={count} atom_fraction={atom_fraction} expected_atom_fraction={} mean={mean}",
        config.atom_mass()
    );
    Ok(())
}

fn write_reports_csv<W: Write>(mut out: W, reports: &[IdentityReport]) -> Result<()> {
    writeln!(out, "name,residual,tolerance,passed,runtime_ms")?;
    for r in reports {
        writeln!(out, "{},{:e},{:e},{},{:.3}", r.name, r.residual, r.tolerance, r.passed, r.runtime_ms)?;
    }
    out.flush()?;
    Ok(())
}

/// Returns whether every selected identity passed.
fn run_verify(names: &[String], format: Format, output: &Option<PathBuf>, list: bool) -> Result<bool> {
    if list {
        let mut out = open_output(output)?;
        for id in bridge::REGISTRY {
            writeln!(out, "{:<32} {}", id.name, id.description)?;
        }
        out.flush()?;
        return Ok(true);
    }
    let reports = bridge::run_verification_suite(names)?;
    let out = open_output(output)?;
    match format {
        Format::Text => bridge::write_text_table(out, &reports)?,
        Format::Json => bridge::write_json_lines(out, &reports)?,
        Format::Csv => write_reports_csv(out, &reports)?,
    }
    Ok(reports.iter().all(|r| r.passed))
}

fn usage_or_failure(err: &Error) -> ExitCode {
    if let Error::Io(e) = err {
        // a closed downstream pipe (e.g. `| head`) is not a failure
        if e.kind() == io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
    }
    eprintln!("error: {err}");
    match err {
        Error::Config(_) | Error::Domain(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

/// Parses `std::env::args` and dispatches. Exit codes: 0 ok, 1 check or
/// runtime failure, 2 usage error.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> ExitCode {
    let outcome = match &cli.command {
        Command::Eval { function, args } => run_eval(function, args).map(|_| true),
        Command::Table { function, args, steps, output, format } => {
            run_table(function, args, *steps, output, *format).map(|_| true)
        }
        Command::Simulate { c, lambda, t, seed, count, output, switch_times, format } => {
            TelegraphConfig::new(*c, *lambda, *t, *seed)
                .and_then(|cfg| run_simulate(cfg, *count, output, switch_times, *format))
                .map(|_| true)
        }
        Command::Verify { names, format, output, list } => run_verify(names, *format, output, *list),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => usage_or_failure(&e),
    }
}
