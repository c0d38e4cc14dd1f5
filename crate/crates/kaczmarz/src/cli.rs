//! The `kzm` command line.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use kaczmarz_core::linalg::dist_sq;
use kaczmarz_core::solvers;
use kaczmarz_core::{DatasetSpec, Family, GeneratedSystem, Method, SelectorKind, SolverConfig};

use crate::bench::{self, Calibration, DEFAULT_EPSILON, DEFAULT_ITERATION_CAP, DEFAULT_SEEDS};
use crate::campaign::{self, CampaignConfig};
use crate::error::{Error, Result};
use crate::io;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kzm",
    version,
    about = "Kaczmarz-type solvers, datasets and benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset and write it with its sidecar.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Matrix blob path; `.b`, `.ref` and `.json` files are written next to it.
        #[arg(long)]
        out: PathBuf,
        /// Fix every row's σ (DS1/DS3), giving rows of similar norm.
        #[arg(long)]
        fixed_sigma: Option<f64>,
    },
    /// Run a method for a fixed number of iterations.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        q: Option<usize>,
        /// Override the row selector of a single-row method.
        #[arg(long)]
        selector: Option<SelectorKind>,
        /// Write `iteration,sq_error` rows to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        trace_stride: u64,
    },
    /// Median iterations to reach epsilon over a set of seeds.
    Calibrate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_SEEDS)]
        seeds: usize,
        #[arg(long, default_value_t = DEFAULT_ITERATION_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 0)]
        master_seed: u64,
    },
    /// Run a campaign config and write the CSV report.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the summary table of a campaign CSV.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn out_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate {
            family,
            m,
            n,
            seed,
            out,
            fixed_sigma,
        } => {
            let mut spec = DatasetSpec::new(family, m, n, seed);
            spec.fixed_sigma = fixed_sigma;
            spec.validate().map_err(|e| Error::Usage(e.to_string()))?;
            let g = GeneratedSystem::generate(&spec)?;
            let sidecar = io::save_generated(&out, &g)?;
            writeln!(
                stdout,
                "wrote {} {}×{} (seed {}) to {}",
                sidecar.family,
                m,
                n,
                seed,
                out.display()
            )
            .map_err(out_err)?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            input,
            method,
            iters,
            seed,
            alpha,
            q,
            selector,
            trace,
            trace_stride,
        } => {
            let data = io::load_dataset(&input)?;
            let system = &data.system;
            let reference = system
                .reference()
                .expect("loaded datasets carry a reference");
            let mut config = SolverConfig::new(method, iters.max(1)).with_seed(seed);
            if let Some(a) = alpha {
                config = config.with_alpha(a);
            }
            if let Some(q) = q {
                config = config.with_q(q);
            }
            if let Some(s) = selector {
                config = config.with_selector(s);
            }
            if trace.is_some() {
                config = config.with_trace(trace_stride.max(1));
            }
            config.validate().map_err(|e| Error::Usage(e.to_string()))?;
            let run = if iters == 0 {
                None
            } else {
                Some(solvers::solve(system, &config)?)
            };
            let (x, used) = match &run {
                Some(r) => (r.x_final.to_vec(), r.iterations_used),
                None => (vec![0.0; system.cols()], 0),
            };
            writeln!(stdout, "method: {method}").map_err(out_err)?;
            writeln!(stdout, "iterations: {used}").map_err(out_err)?;
            writeln!(stdout, "final_sq_error: {:e}", dist_sq(&x, reference)).map_err(out_err)?;
            if let (Some(path), Some(run)) = (trace, &run) {
                let mut w = BufWriter::new(File::create(&path).map_err(|e| Error::io(&path, e))?);
                let mut body = String::from("iteration,sq_error\n");
                for (k, e) in &run.error_trace {
                    body.push_str(&format!("{k},{e:e}\n"));
                }
                w.write_all(body.as_bytes())
                    .map_err(|e| Error::io(&path, e))?;
                w.flush().map_err(|e| Error::io(&path, e))?;
            }
            Ok(EXIT_OK)
        }
        Command::Calibrate {
            input,
            method,
            epsilon,
            seeds,
            cap,
            master_seed,
        } => {
            let data = io::load_dataset(&input)?;
            let reference = data
                .system
                .reference()
                .expect("loaded datasets carry a reference");
            let cal = bench::calibrate(
                &data.system,
                &SolverConfig::new(method, 1),
                reference,
                epsilon,
                &bench::run_seeds(master_seed, seeds),
                cap,
            )?;
            match cal {
                Calibration::Converged { k, per_seed } => {
                    writeln!(stdout, "calibrated_k: {k}").map_err(out_err)?;
                    writeln!(stdout, "per_seed: {per_seed:?}").map_err(out_err)?;
                    Ok(EXIT_OK)
                }
                Calibration::CapReached { cap, seed } => {
                    writeln!(
                        stdout,
                        "not converged: seed {seed} reached the cap of {cap} iterations"
                    )
                    .map_err(out_err)?;
                    Ok(EXIT_RUNTIME)
                }
            }
        }
        Command::Bench { config, out } => {
            let file = File::open(&config).map_err(|e| Error::io(&config, e))?;
            let campaign = CampaignConfig::from_reader(BufReader::new(file))?.validate()?;
            let records = campaign::run_campaign(&campaign, campaign::worker_count())?;
            let w = BufWriter::new(File::create(&out).map_err(|e| Error::io(&out, e))?);
            campaign::write_csv(w, &records)?;
            let rows: Vec<_> = records.iter().map(|r| r.row()).collect();
            write!(stdout, "{}", campaign::summary_table(&rows)).map_err(out_err)?;
            let failed = records
                .iter()
                .filter(|r| r.status != campaign::Status::Ok)
                .count();
            writeln!(
                stdout,
                "{} cells, {} not ok; CSV written to {}",
                records.len(),
                failed,
                out.display()
            )
            .map_err(out_err)?;
            Ok(if !records.is_empty() && failed == records.len() {
                EXIT_RUNTIME
            } else {
                EXIT_OK
            })
        }
        Command::Report { input } => {
            let file = File::open(&input).map_err(|e| Error::io(&input, e))?;
            let rows = campaign::read_csv(BufReader::new(file))?;
            write!(stdout, "{}", campaign::summary_table(&rows)).map_err(out_err)?;
            Ok(EXIT_OK)
        }
    }
}
