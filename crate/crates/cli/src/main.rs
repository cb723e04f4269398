use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mz_core::experiments::{
    self, mz_constant_auto, run_hs_check, run_lemma_check, write_csv, write_json, write_report,
    Format, SCHEMA_VERSION,
};
use mz_core::lemmas::critical_exponent;
use mz_core::{
    ap_constant, generating_weight, perturbed_family, CircleGrid, NecessityConfig,
    PerturbationSchedule, RadiusRule, ScheduleKind, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "mzkit",
    version,
    about = "Marcinkiewicz–Zygmund experiments on perturbed roots of unity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the node angles of one perturbed family.
    Nodes(Common),
    /// Two-sided MZ constant of one family (exact at p = 2, probes otherwise).
    Mzconst(Common),
    /// Uniform (A_p) estimate for |F_n|^p.
    Apconst(Common),
    /// Threshold sweep over n and delta.
    Sweep(Common),
    /// Blow-up run on the extremal family.
    Necessity(Common),
    /// sup |log R_n| of the product comparison.
    LemmaCheck(Common),
    /// Helson–Szegő data for the damped generating polynomial.
    HsCheck(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Exponent p in (1, ∞).
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Perturbation amplitude(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,
    /// constant | alternating | random | one-sided-necessity
    #[arg(long, default_value = "alternating")]
    schedule: String,
    #[arg(long, default_value_t = 100.0)]
    kappa: f64,
    /// Degree(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Grid size as a multiple of n + 1.
    #[arg(long = "grid-oversample", default_value_t = 32)]
    grid_oversample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; results go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    /// Random probes for p ≠ 2.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
}

impl Common {
    fn kind(&self) -> Result<ScheduleKind> {
        Ok(self.schedule.parse()?)
    }

    fn single_n(&self) -> Result<usize> {
        match self.n.as_slice() {
            [n] => Ok(*n),
            [] => bail!("--n is required"),
            _ => bail!("this command takes a single --n"),
        }
    }

    fn single_delta(&self) -> Result<f64> {
        match self.delta.as_slice() {
            [] => Ok(0.0),
            [d] => Ok(*d),
            _ => bail!("this command takes a single --delta"),
        }
    }

    fn n_list(&self) -> Vec<usize> {
        if self.n.is_empty() {
            experiments::DEFAULT_N_LIST.to_vec()
        } else {
            self.n.clone()
        }
    }

    fn schedule(&self) -> Result<PerturbationSchedule> {
        Ok(PerturbationSchedule::new(
            self.kind()?,
            self.single_delta()?,
            self.seed,
        )?)
    }
}

/// Rows to `--out DIR/<stem>.*` or to stdout.
fn emit<R: Serialize, S: Serialize>(c: &Common, stem: &str, rows: &[R], summary: &S) -> Result<()> {
    match &c.out {
        Some(dir) => {
            let files = write_report(dir, stem, c.format.into(), rows, summary)
                .with_context(|| format!("writing into {}", dir.display()))?;
            for f in files {
                eprintln!("wrote {}", f.display());
            }
        }
        None => {
            let stdout = io::stdout().lock();
            match c.format {
                OutFormat::Csv => write_csv(rows, stdout)?,
                OutFormat::Json => {
                    #[derive(Serialize)]
                    struct Doc<'a, S, R> {
                        summary: &'a S,
                        rows: &'a [R],
                    }
                    write_json(&Doc { summary, rows }, stdout)?
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Header<'a> {
    schema: u32,
    command: &'a str,
}

fn header(command: &str) -> Header<'_> {
    Header {
        schema: SCHEMA_VERSION,
        command,
    }
}

#[derive(Serialize)]
struct NodeRow {
    j: usize,
    angle: f64,
    offset: f64,
}

fn nodes(c: &Common) -> Result<bool> {
    let n = c.single_n()?;
    let schedule = c.schedule()?;
    let set = perturbed_family::<f64>(n, &schedule)?;
    let offsets: Vec<f64> = schedule.offsets(n)?;
    let rows: Vec<NodeRow> = set
        .angles()
        .iter()
        .zip(offsets)
        .enumerate()
        .map(|(j, (&angle, offset))| NodeRow { j, angle, offset })
        .collect();
    emit(c, "nodes", &rows, &header("nodes"))?;
    Ok(true)
}

fn mzconst(c: &Common) -> Result<bool> {
    let n = c.single_n()?;
    let schedule = c.schedule()?;
    let set = perturbed_family::<f64>(n, &schedule)?;
    let report = mz_constant_auto(&set, c.p, c.budget, c.seed)?;
    emit(
        c,
        "mzconst",
        &[report.row(Some(&schedule))],
        &header("mzconst"),
    )?;
    Ok(true)
}

fn apconst(c: &Common) -> Result<bool> {
    let n = c.single_n()?;
    let schedule = c.schedule()?;
    let set = perturbed_family::<f64>(n, &schedule)?;
    let grid = CircleGrid::oversampled(n, c.grid_oversample);
    let weight = generating_weight(&set, RadiusRule::DegreeRatio, &grid)?;
    let report = ap_constant(&weight, c.p)?;
    emit(
        c,
        "apconst",
        &[report.row(n, schedule.delta)],
        &header("apconst"),
    )?;
    Ok(true)
}

fn sweep(c: &Common) -> Result<bool> {
    let mut cfg = SweepConfig::new(c.p)?;
    cfg.n_list = c.n_list();
    if !c.delta.is_empty() {
        cfg.delta_list = c.delta.clone();
    }
    cfg.schedule = c.kind()?;
    cfg.kappa = c.kappa;
    cfg.oversampling = c.grid_oversample;
    cfg.probe_budget = c.budget;
    cfg.seed = c.seed;
    let out = experiments::run_sweep(&cfg)?;
    emit(c, "sweep", &out.rows, &out.summary)?;
    Ok(!out.has_errors())
}

fn necessity(c: &Common) -> Result<bool> {
    let q = critical_exponent(c.p)?;
    let delta = if c.delta.is_empty() {
        0.5 / q
    } else {
        c.single_delta()?
    };
    let mut cfg = NecessityConfig::new(c.p, delta);
    cfg.n_list = c.n_list();
    cfg.oversampling = c.grid_oversample;
    cfg.probe_budget = c.budget;
    cfg.seed = c.seed;
    let out = experiments::run_necessity(&cfg)?;
    emit(c, "necessity", &out.rows, &out.summary)?;
    Ok(!out.has_errors())
}

fn lemma_check(c: &Common) -> Result<bool> {
    let rows = run_lemma_check(&c.n_list(), c.alpha, c.kappa, &c.schedule()?)?;
    emit(c, "lemma", &rows, &header("lemma-check"))?;
    Ok(true)
}

fn hs_check(c: &Common) -> Result<bool> {
    let rows = run_hs_check(&c.n_list(), &c.schedule()?, c.kappa, c.grid_oversample)?;
    emit(c, "hs", &rows, &header("hs-check"))?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Nodes(c) => nodes(c),
        Command::Mzconst(c) => mzconst(c),
        Command::Apconst(c) => apconst(c),
        Command::Sweep(c) => sweep(c),
        Command::Necessity(c) => necessity(c),
        Command::LemmaCheck(c) => lemma_check(c),
        Command::HsCheck(c) => hs_check(c),
    };
    let _ = io::stdout().flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some cells failed; see the error column");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
