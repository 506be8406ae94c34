//! Argument parsing and command dispatch for the `stick` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use stickel_core::finite_field::DEFAULT_FIELD_LIMIT;
use stickel_core::stickelberger::alpha_recipe;
use stickel_core::{
    h_minus_analytic, h_minus_det, jacobi_generators, upper_bound, verify_generator, Conductor,
};

use crate::bench::run_bench;
use crate::document::{json_int, BasisDocument};
use crate::error::CliError;
use crate::suite::{deep_suite, shortness_suite};

/// Environment variable capping the worker threads; `0` or unset means one
/// per core.
pub const THREADS_VAR: &str = "STICK_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "stick",
    version,
    about = "Short Stickelberger bases, relative class numbers and Jacobi-sum generators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the short basis of the Stickelberger ideal of Q(zeta_m).
    Basis {
        m: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the short basis elements; --deep adds the lattice comparisons.
    Verify {
        m: u64,
        #[arg(long)]
        deep: bool,
    },
    /// Relative class number h_m^-.
    Hminus {
        m: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Det)]
        method: MethodArg,
    },
    /// The upper bound 2^{1-a} (phi/8)^{phi/4} for h_m^-.
    Bound { m: u64 },
    /// Jacobi sums generating L^{alpha_m(b)} for a prime L above ell.
    Jacobi {
        m: u64,
        ell: u64,
        /// Only this b instead of every b in M'_m.
        #[arg(long)]
        b: Option<u64>,
        /// Check the ideal factorization of each generator.
        #[arg(long)]
        verify: bool,
        /// Residue fields up to this size are summed directly; larger ones
        /// are evaluated l-adically.
        #[arg(long, default_value_t = DEFAULT_FIELD_LIMIT)]
        field_limit: u64,
    },
    /// Time both class number methods over a range of conductors (CSV).
    Bench {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Det,
    Analytic,
    Both,
}

/// Runs the command line and returns the exit code: 0 on success, 1 when a
/// verification fails, 2 on invalid input.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let result = match thread_limit() {
        Ok(0) => dispatch(cli.command, out, err),
        Ok(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, out, err)),
            Err(e) => Err(CliError::Input(format!("cannot start {n} threads: {e}"))),
        },
        Err(e) => Err(e),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn thread_limit() -> Result<usize, CliError> {
    match std::env::var(THREADS_VAR) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse().map_err(|_| {
            CliError::Input(format!(
                "{THREADS_VAR} must be a non-negative integer, got {v:?}"
            ))
        }),
        _ => Ok(0),
    }
}

fn emit(out: &mut (dyn Write + Send), path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn dispatch(
    cmd: Command,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32, CliError> {
    match cmd {
        Command::Basis {
            m,
            format,
            out: path,
        } => {
            let doc = BasisDocument::build(m)?;
            let text = match format {
                Format::Json => {
                    let mut s = doc.to_json();
                    s.push('\n');
                    s
                }
                Format::Text => doc.to_text(),
            };
            emit(out, path.as_ref(), &text)?;
            Ok(0)
        }
        Command::Verify { m, deep } => {
            let report = if deep {
                deep_suite(m)?
            } else {
                shortness_suite(m)?
            };
            out.write_all(report.render().as_bytes())?;
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            writeln!(
                out,
                "m={m}: {} checks, {failed} failed",
                report.checks.len()
            )?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Hminus { m, method } => hminus(m, method, out),
        Command::Bound { m } => {
            let b = upper_bound(m)?;
            let v = json!({
                "decimal": b.to_decimal(50),
                "exact": b.exact_string(),
                "factor": b.factor.to_string(),
                "m": m,
                "radicand": b.radicand.to_string(),
            });
            out.write_all(pretty(&v).as_bytes())?;
            Ok(0)
        }
        Command::Jacobi {
            m,
            ell,
            b,
            verify,
            field_limit,
        } => jacobi(m, ell, b, verify, field_limit, out),
        Command::Bench { min, max, csv } => {
            writeln!(
                err,
                "note: timings are wall-clock seconds on this machine and are not reproducible"
            )?;
            match csv {
                Some(p) => {
                    let file = std::fs::File::create(&p).map_err(|e| {
                        CliError::Input(format!("cannot write {}: {e}", p.display()))
                    })?;
                    run_bench(min, max, file)?;
                }
                None => {
                    run_bench(min, max, &mut *out)?;
                }
            }
            Ok(0)
        }
    }
}

fn hminus(m: u64, method: MethodArg, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    Conductor::new(m)?;
    let mut v = serde_json::Map::new();
    let det = matches!(method, MethodArg::Det | MethodArg::Both)
        .then(|| h_minus_det(m))
        .transpose()?;
    let analytic = matches!(method, MethodArg::Analytic | MethodArg::Both)
        .then(|| h_minus_analytic(m))
        .transpose()?;
    if let Some(r) = &det {
        v.insert("det".into(), json_int(&r.h_minus));
    }
    if let Some(r) = &analytic {
        v.insert("analytic".into(), json_int(&r.h_minus));
    }
    let mut code = 0;
    if let (Some(d), Some(a)) = (&det, &analytic) {
        let agree = d.h_minus == a.h_minus;
        v.insert("agree".into(), Value::Bool(agree));
        if !agree {
            code = 1;
        }
    }
    out.write_all(pretty(&Value::Object(v)).as_bytes())?;
    Ok(code)
}

fn jacobi(
    m: u64,
    ell: u64,
    only: Option<u64>,
    verify: bool,
    limit: u64,
    out: &mut (dyn Write + Send),
) -> Result<i32, CliError> {
    let c = Conductor::new(m)?;
    let set = jacobi_generators(m, ell, only, limit)?;
    let checks = if verify {
        set.generators
            .par_iter()
            .map(|(b, j)| verify_generator(j, *b, &set.prime).map(Some))
            .collect::<stickel_core::Result<Vec<_>>>()?
    } else {
        vec![None; set.generators.len()]
    };
    let mut all_passed = true;
    let mut rows = Vec::new();
    for ((b, j), check) in set.generators.iter().zip(checks) {
        let (p, r) = alpha_recipe(&c, *b)?.jacobi_pair;
        let mut row = json!({
            "b": b,
            "coeffs": j.coeffs().iter().map(json_int).collect::<Vec<_>>(),
            "jacobi_pair": [p, r],
        });
        if let Some(ch) = check {
            all_passed &= ch.passed();
            row["verification"] = json!({
                "absolute_value_ok": ch.absolute_value_ok,
                "expected_norm": json_int(&ch.expected_norm),
                "norm": json_int(&ch.norm),
                "passed": ch.passed(),
                "valuation_mismatches": ch.valuation_mismatches,
            });
        }
        rows.push(row);
    }
    let v = json!({
        "ell": ell,
        "eta": set.prime.eta,
        "f": set.prime.f,
        "generators": rows,
        "m": m,
        "method": set.method.to_string(),
        "prime_modulus": set.prime.modulus,
        "q": json_int(&set.prime.norm()),
    });
    out.write_all(pretty(&v).as_bytes())?;
    Ok(if all_passed { 0 } else { 1 })
}
