mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tridiff::closedform::branch_for;
use tridiff::verify::{self, Mode, VerifyConfig};
use tridiff::{closed, iterate, period_report, uv_from_orbit, Branch, ClosedFormQuery, Component, Error};

use input::{parse_init, parse_t, CoeffSource};

const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "tridiff", version, about = "Exact orbits and closed forms of a coupled third-order rational system")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iterate the system and print the orbit as CSV.
    Simulate {
        #[command(flatten)]
        coeffs: CoeffSource,
        /// Seeds x-2,x-1,x0,y-2,y-1,y0.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long)]
        steps: usize,
        /// Add lossy f64 columns for plotting.
        #[arg(long)]
        float: bool,
        /// Print the invariants U, V instead of x, y.
        #[arg(long)]
        invariants: bool,
    },
    /// Evaluate one value of the explicit solution.
    Closed {
        #[command(flatten)]
        coeffs: CoeffSource,
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        /// Block index n of 4n+j.
        #[arg(long)]
        n: usize,
        /// Residue j of 4n+j, one of -2, -1, 0, 1.
        #[arg(long, allow_negative_numbers = true)]
        j: i64,
        #[arg(long, value_enum, default_value_t = ComponentArg::X)]
        component: ComponentArg,
        /// Evaluator; `auto` picks the most specific one for the coefficients.
        #[arg(long, value_enum, default_value_t = BranchArg::Auto)]
        branch: BranchArg,
    },
    /// Cross-check closed forms against iteration on random instances.
    Verify {
        #[arg(long, default_value = "general")]
        mode: Mode,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        /// Group parameter for `--mode symmetry`.
        #[arg(long, value_name = "p/q", allow_hyphen_values = true)]
        t: Option<String>,
        /// Shorthand for `--mode symmetry --t p/q`.
        #[arg(long, value_name = "t=p/q", allow_hyphen_values = true)]
        symmetry: Option<String>,
    },
    /// Check the periodicity conditions and detect the period of an orbit.
    Period {
        #[command(flatten)]
        coeffs: CoeffSource,
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 40)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComponentArg {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Auto,
    General,
    Constant,
    Unit,
    Period4,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_USAGE,
            error: e.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut out = open_output(cli.out.as_ref())?;
    let code = match cli.command {
        Command::Simulate { coeffs, init, steps, float, invariants } => {
            let spec = coeffs.load()?;
            let init = parse_init(&init)?;
            let orbit = iterate(&spec, &init, steps)?;
            if invariants {
                uv_from_orbit(&orbit).write_csv(&mut out)?;
            } else {
                orbit.write_csv(&mut out, float)?;
            }
            writeln!(out, "{}", orbit.status_line())?;
            0
        }
        Command::Closed { coeffs, init, n, j, component, branch } => {
            let spec = coeffs.load()?;
            let init = parse_init(&init)?;
            let component = match component {
                ComponentArg::X => Component::X,
                ComponentArg::Y => Component::Y,
            };
            let q = ClosedFormQuery::new(n, j, component)?;
            let branch = match branch {
                BranchArg::Auto => branch_for(&spec),
                BranchArg::General => Branch::General,
                BranchArg::Constant => Branch::Constant,
                BranchArg::Unit => Branch::Unit,
                BranchArg::Period4 => Branch::Period4,
            };
            match closed(branch, &spec, &init, q) {
                Ok(v) => writeln!(out, "{component}[{}] = {v}", q.index())?,
                Err(e @ Error::DenominatorVanished { .. }) => {
                    return Err(Failure {
                        code: EXIT_DOMAIN,
                        error: e.into(),
                    })
                }
                Err(e) => return Err(e.into()),
            }
            0
        }
        Command::Verify { mode, trials, seed, nmax, t, symmetry } => {
            let mut cfg = VerifyConfig::new(mode);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.nmax = nmax;
            if let Some(s) = symmetry {
                cfg.mode = Mode::Symmetry;
                cfg.t = parse_t(&s)?;
            }
            if let Some(s) = t {
                cfg.t = parse_t(&s)?;
            }
            if cfg.t.is_zero() {
                return Err(Error::InvalidGroupParameter.into());
            }
            let report = verify::run(&cfg);
            let t_note = if cfg.mode == Mode::Symmetry { format!(" t={}", cfg.t) } else { String::new() };
            writeln!(out, "verify mode={} trials={} seed={} nmax={}{t_note}", cfg.mode, cfg.trials, cfg.seed, cfg.nmax)?;
            writeln!(out, "{}", report.summary())?;
            writeln!(out, "comparisons={}", report.comparisons)?;
            if let Some(ce) = &report.first_failure {
                writeln!(out, "{ce}")?;
            }
            if report.all_passed() {
                0
            } else {
                EXIT_VERIFY
            }
        }
        Command::Period { coeffs, init, steps, max_period } => {
            let spec = coeffs.load()?;
            let init = parse_init(&init)?;
            let orbit = iterate(&spec, &init, steps)?;
            let report = match period_report(&spec, &orbit, max_period) {
                Ok(r) => r,
                Err(e @ Error::ForbiddenSet { .. }) => {
                    return Err(Failure {
                        code: EXIT_DOMAIN,
                        error: e.into(),
                    })
                }
                Err(e) => return Err(e.into()),
            };
            writeln!(out, "{report}")?;
            writeln!(out, "{}", report.line())?;
            0
        }
    };
    out.flush()?;
    Ok(code)
}
