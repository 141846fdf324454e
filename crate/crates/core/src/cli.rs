//! `capped-proj` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed or internal error, 2 usage
//! error, 3 domain error (infeasible or invalid problem data), 4 I/O failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::baselines::SolverConfig;
use crate::bench::{
    parse_methods, run_benchmark_with, solve_with, write_csv, BenchPlan, Method, DEFAULT_SIZES,
};
use crate::error::ProjError;
use crate::kkt::{certify, kkt_residuals};
use crate::oracle::{random_instance, InstanceSpec, RNG_ALGORITHM};
use crate::projection::{project_capped_box_with, ProjectOptions, ProjectionInput};
use crate::vecio::{format_value, format_vector, parse_vector};

/// Environment variable overriding the exact solver's comparison tolerance.
pub const EPS_ENV: &str = "CAPPED_PROJ_EPS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "capped-proj",
    version,
    about = "Euclidean projection onto the capped simplex"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project a vector onto {x : sum(x) = s, 0 <= x <= cap}.
    Project {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        cap: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Significant digits to print (default: shortest exact representation).
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Check the optimality conditions of a candidate x for input y.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        cap: f64,
        /// Candidate solution x.
        #[arg(long)]
        input: PathBuf,
        /// Point y that was projected.
        #[arg(long)]
        against: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run several solvers on one instance and compare them with the exact one.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        cap: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "exact,dykstra,admm")]
        methods: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
    },
    /// Time solvers on generated instances and write a CSV table.
    Bench {
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value = "exact")]
        methods: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
    },
    /// Generate a random instance (y uniform on [-0.5, 0.5], s = round(u * D)).
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Domain(ProjError),
    Io(String),
    Failed(String),
}

impl From<ProjError> for CliError {
    fn from(e: ProjError) -> Self {
        match e {
            ProjError::Internal(_) => CliError::Failed(e.to_string()),
            _ => CliError::Domain(e),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(parse_vector(&text)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn eps_override() -> Result<Option<f64>, CliError> {
    match std::env::var(EPS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|e| e.is_finite() && *e >= 0.0)
            .map(Some)
            .ok_or_else(|| {
                CliError::Domain(ProjError::InvalidInput(format!(
                    "{EPS_ENV}={v:?} is not a tolerance"
                )))
            }),
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit status.
pub fn dispatch<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
        Err(CliError::Io(msg)) => {
            let _ = writeln!(err, "error: i/o: {msg}");
            EXIT_IO
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}

fn emit<W: Write>(out: &mut W, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn run<W: Write>(cmd: Command, out: &mut W) -> Result<i32, CliError> {
    match cmd {
        Command::Project {
            s,
            cap,
            input,
            output,
            digits,
        } => {
            let y = read_vector(&input)?;
            let problem = ProjectionInput::with_cap(y, s, cap)?;
            let r = project_capped_box_with(&problem, &ProjectOptions { eps: eps_override()? })?;
            let line = format!("{}\n", format_vector(&r.x, digits));
            match output {
                Some(path) => write_text(&path, &line)?,
                None => emit(out, &line)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            s,
            cap,
            input,
            against,
            tol,
        } => {
            let x = read_vector(&input)?;
            let y = read_vector(&against)?;
            let problem = ProjectionInput::with_cap(y, s, cap)?;
            let (p, cert) = certify(&problem, &x)?;
            let rep = kkt_residuals(&problem, &x, &cert, tol)?;
            let text = format!(
                "zeros {}\ninterior {}\nat_cap {}\ngamma {}\nstationarity {:e}\nprimal_lower {:e}\nprimal_upper {:e}\nsum {:e}\ndual {:e}\ncomplementarity {:e}\nmax_residual {:e}\ntol {:e}\nresult {}\n",
                p.zeros(),
                p.interior(),
                p.ones(x.len()),
                format_value(cert.gamma, None),
                rep.stationarity_residual,
                rep.primal_lower,
                rep.primal_upper,
                rep.sum_residual,
                rep.dual_residual,
                rep.cs_residual,
                rep.max_residual(),
                tol,
                if rep.passed { "PASS" } else { "FAIL" },
            );
            emit(out, &text)?;
            Ok(if rep.passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Compare {
            s,
            cap,
            input,
            methods,
            tol,
            max_iters,
            rho,
        } => {
            let methods = parse_methods(&methods)?;
            let y = read_vector(&input)?;
            let problem = ProjectionInput::with_cap(y, s, cap)?;
            let cfg = SolverConfig { tol, max_iters, rho };
            cfg.validate()?;
            let eps = eps_override()?;
            let reference = solve_with(Method::Exact, &problem, &cfg, eps)?;
            let mut text =
                String::from("method iterations converged seconds max_diff_vs_exact max_kkt_residual\n");
            for m in methods {
                let r = solve_with(m, &problem, &cfg, eps)?;
                let diff =
                    r.x.iter()
                        .zip(&reference.x)
                        .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
                text.push_str(&format!(
                    "{m} {} {} {:e} {:e} {:e}\n",
                    r.iterations, r.converged, r.seconds, diff, r.max_kkt_residual
                ));
            }
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Bench {
            sizes,
            reps,
            methods,
            seed,
            csv,
            tol,
            max_iters,
        } => {
            let plan = BenchPlan {
                sizes: sizes.unwrap_or_else(|| DEFAULT_SIZES.to_vec()),
                repetitions: reps,
                methods: parse_methods(&methods)?,
                base_seed: seed,
            };
            let cfg = SolverConfig {
                tol,
                max_iters,
                ..SolverConfig::default()
            };
            let records = run_benchmark_with(&plan, &cfg, eps_override()?)?;
            let file = fs::File::create(&csv).map_err(|e| io_err(&csv, e))?;
            write_csv(&records, file).map_err(|e| CliError::Io(format!("{}: {e}", csv.display())))?;
            emit(out, &format!("rng {RNG_ALGORITHM}\nrecords {}\n", records.len()))?;
            Ok(EXIT_OK)
        }
        Command::Gen { d, seed, output } => {
            let inst = random_instance(InstanceSpec { d, seed })?;
            let mut text = format!("# rng={RNG_ALGORITHM} d={d} seed={seed}\n# s={}\n", inst.s);
            for v in &inst.y {
                text.push_str(&format!("{v}\n"));
            }
            match output {
                Some(path) => write_text(&path, &text)?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
    }
}
