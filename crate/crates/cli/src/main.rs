// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod orchestrate;

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use distpot::criteria::{brinck, classify, scan_necessary, ClassifyConfig, Perturbation, TrendConfig};
use distpot::forms::{assemble, localization_scan, range_boundary};
use distpot::potential::{build_counterexample, delta_sum, io as potio, miura, CounterexampleKind};
use distpot::verify::{run_all, VerifyOptions};
use distpot::{report, Antiderivative, Error, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "distpot", version, about = "Resolvent compactness and window forms for q = s'")]
struct Cli {
    /// Potential file (antiderivative s as JSON).
    #[arg(long, global = true)]
    potential: Option<PathBuf>,
    /// Window length.
    #[arg(long, global = true, default_value_t = 1.0)]
    a: f64,
    /// Depth of the difference-sector search, in (0, 1].
    #[arg(long, global = true, default_value_t = 1.0)]
    d: f64,
    /// Finite elements per window.
    #[arg(long, global = true, default_value_t = 128)]
    mesh: usize,
    /// Truncate the potential at this point.
    #[arg(long, global = true)]
    xmax: Option<f64>,
    /// Output file (directory for `plot`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the potential and print the verdict with evidence.
    Analyze {
        /// Known compact base s₀ for the perturbation rule.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 10.0)]
        unif_threshold: f64,
        #[arg(long, default_value_t = 1.05)]
        growth_factor: f64,
        #[arg(long, default_value_t = 1e3)]
        abs_threshold: f64,
    },
    /// Per-window sectors and inf-modulus bounds.
    Scan {
        #[arg(long, default_value_t = 64)]
        angles: usize,
    },
    /// Write a potential file.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Run the randomised property suites.
    Verify {
        #[arg(long, hide = true)]
        corrupt_matrix: bool,
    },
    /// Write CSV series for external plotting into the `--out` directory.
    Plot {
        #[arg(long, default_value_t = 64)]
        angles: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GenerateKind {
    /// Sum of point interactions: s jumps by each strength at each position.
    Delta {
        #[arg(long, value_delimiter = ',', required = true)]
        positions: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        strengths: Vec<f64>,
        #[arg(long)]
        x_end: f64,
    },
    /// s = γ + b + ∫γ², with γ from a file or constant.
    Miura {
        #[arg(long, conflicts_with = "gamma_const")]
        gamma: Option<PathBuf>,
        #[arg(long)]
        gamma_const: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long)]
        x_end: Option<f64>,
    },
    /// Spikes on S = x²/2 at N_k = 4 + k.
    S1 {
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long)]
        x_end: Option<f64>,
    },
    /// Staircase counterexample with the block schedule searched block by block.
    S2 {
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long, default_value_t = 4.0)]
        h0: f64,
        #[arg(long)]
        x_end: Option<f64>,
    },
}

/// Usage and input problems exit with 2, numeric failures with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Numeric(_) | Error::Assembly(_) | Error::Dimension { .. }) => 1,
        _ => 2,
    }
}

struct NumericFailure(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(NumericFailure(msg))) => {
            eprintln!("distpot: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("distpot: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn load(cli: &Cli) -> Result<Antiderivative> {
    let path = cli.potential.as_ref().ok_or_else(|| anyhow!("--potential is required for this command"))?;
    let s = potio::read_file(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(match cli.xmax {
        Some(x) => s.restrict(x)?,
        None => s,
    })
}

fn check_common(cli: &Cli) -> Result<()> {
    if !(cli.a > 0.0) {
        return Err(Error::Parameter(format!("--a must be positive, got {}", cli.a)).into());
    }
    if !(cli.d > 0.0 && cli.d <= 1.0) {
        return Err(Error::Parameter(format!("--d must lie in (0, 1], got {}", cli.d)).into());
    }
    if cli.mesh < 8 {
        return Err(Error::Parameter(format!("--mesh must be at least 8, got {}", cli.mesh)).into());
    }
    Ok(())
}

fn emit(cli: &Cli, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cli.out {
        Some(p) => {
            let mut f = io::BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            write(&mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    emit(cli, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn run(cli: &Cli) -> Result<Option<NumericFailure>> {
    check_common(cli)?;
    match &cli.command {
        Command::Analyze { base, epsilon, unif_threshold, growth_factor, abs_threshold } => {
            let s = load(cli)?;
            let trend = TrendConfig { growth_factor: *growth_factor, abs_threshold: *abs_threshold };
            let perturbation = match base {
                Some(p) => Some(Perturbation {
                    base: potio::read_file(p).with_context(|| format!("reading {}", p.display()))?,
                    epsilon: *epsilon,
                    unif_threshold: *unif_threshold,
                }),
                None => None,
            };
            let config = ClassifyConfig { a: cli.a, d: cli.d, trend, perturbation };
            match cli.format {
                Format::Json => emit_json(cli, &classify(&s, &config)?)?,
                Format::Csv => {
                    let (series, _) = scan_necessary(&s, cli.a.min(s.domain_end()), &trend)?;
                    emit(cli, |w| Ok(report::write_series(w, &series)?))?;
                }
            }
        }
        Command::Scan { angles } => {
            let s = load(cli)?;
            let table = localization_scan(&s, cli.mesh, *angles)?;
            match cli.format {
                Format::Json => emit_json(cli, &table)?,
                Format::Csv => emit(cli, |w| Ok(report::write_scan(w, &table)?))?,
            }
        }
        Command::Generate { kind } => generate(cli, kind)?,
        Command::Verify { corrupt_matrix } => {
            let rep = run_all(VerifyOptions { seed: cli.seed, corrupt_matrix: *corrupt_matrix })?;
            emit_json(cli, &rep)?;
            if !rep.all_passed {
                let failed: Vec<&str> = rep.suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
                return Ok(Some(NumericFailure(format!("failed suites: {}", failed.join(", ")))));
            }
        }
        Command::Plot { angles } => plot(cli, *angles)?,
    }
    Ok(None)
}

fn write_potential(cli: &Cli, s: &Antiderivative) -> Result<()> {
    let text = potio::to_json_string(s)?;
    emit(cli, |w| {
        writeln!(w, "{text}")?;
        Ok(())
    })
}

fn generate(cli: &Cli, kind: &GenerateKind) -> Result<()> {
    match kind {
        GenerateKind::Delta { positions, strengths, x_end } => {
            if positions.len() != strengths.len() {
                bail!("{} positions but {} strengths", positions.len(), strengths.len());
            }
            let st: Vec<Complex64> = strengths.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            write_potential(cli, &delta_sum(positions, &st, *x_end)?)
        }
        GenerateKind::Miura { gamma, gamma_const, b, x_end } => {
            let g = match (gamma, gamma_const) {
                (Some(p), _) => potio::read_file(p).with_context(|| format!("reading {}", p.display()))?,
                (None, Some(c)) => {
                    let x = x_end.ok_or_else(|| anyhow!("--x-end is required with --gamma-const"))?;
                    Antiderivative::real_polynomial(x, &[*c])?
                }
                (None, None) => bail!("one of --gamma or --gamma-const is required"),
            };
            write_potential(cli, &miura(&g, *b)?)
        }
        GenerateKind::S1 { blocks, theta, x_end } => {
            let kind = CounterexampleKind::S1 { blocks: *blocks, theta: *theta, domain_end: *x_end };
            write_potential(cli, &build_counterexample(&kind)?)
        }
        GenerateKind::S2 { blocks, theta, h0, x_end } => {
            let out = cli.out.as_ref().ok_or_else(|| anyhow!("generate s2 needs --out for the provenance sidecar"))?;
            let (schedule, prov) = orchestrate::s2_schedule(*theta, *blocks, *h0, cli.mesh)?;
            let kind = CounterexampleKind::S2 { theta: *theta, schedule, domain_end: *x_end };
            write_potential(cli, &build_counterexample(&kind)?)?;
            let side = sidecar_path(out);
            fs::write(&side, serde_json::to_string_pretty(&prov)? + "\n")
                .with_context(|| format!("writing {}", side.display()))?;
            Ok(())
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".provenance.json");
    out.with_file_name(name)
}

fn plot(cli: &Cli, angles: usize) -> Result<()> {
    let s = load(cli)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_file = |name: &str| -> Result<io::BufWriter<File>> {
        let p = dir.join(name);
        Ok(io::BufWriter::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?))
    };
    let a = cli.a.min(s.domain_end());
    let trend = TrendConfig::default();
    let (dbl, _) = scan_necessary(&s, a, &trend)?;
    report::write_series(csv_file("dbl.csv")?, &dbl)?;
    let br = brinck(&s, cli.d, a, &trend)?;
    report::write_series(csv_file("growth.csv")?, &br.growth)?;
    let first = Interval::new(0.0, s.domain_end().min(1.0))?;
    let range = range_boundary(&assemble(&s, first, cli.mesh, None)?, angles)?;
    report::write_points(csv_file("range.csv")?, &range.samples)?;
    // the window scan needs a full pair of unit windows
    if s.domain_end() >= 2.0 {
        let table = localization_scan(&s, cli.mesh, angles)?;
        report::write_scan(csv_file("infmod.csv")?, &table)?;
    }
    Ok(())
}
