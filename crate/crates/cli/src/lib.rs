//! Command-line front-end for the time-average gamble model.
//!
//! Exit codes: 0 on success, 2 for domain or validation errors (including
//! bad flags), 3 for I/O errors.

pub mod config;
pub mod figure;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use timeavg_core::numfmt::sig9;
use timeavg_core::sim::{simulate_with_paths, write_divergence_csv, write_paths_csv};
use timeavg_core::survey::{bundled_survey, OptionLabel};
use timeavg_core::{
    analyze, classify, decide, divergence_demo, load_survey, risk_seeking_crossover, simulate,
    AgreementReport, ContrastReport, Decision, DeformationIndex, Domain, GambleSpec, SimConfig,
    SimSummary,
};

use config::Defaults;
use figure::{FigureId, FigureSpec, Grid, ParamSet};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] timeavg_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_io() => 3,
            CliError::Model(_) | CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Output(_) => 3,
            CliError::Json(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "timeavg", version, about = "Time-average decision model for simple gambles")]
pub struct Cli {
    /// key = value file with defaults for rho and threshold_db.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the sure and risky option of a gamble.
    Decide(DecideArgs),
    /// Contrast ratio in dB and fuzzy/crisp classification.
    Contrast(ContrastArgs),
    /// Loss below which the sure loss is preferred.
    Crossover(CrossoverArgs),
    /// Write the data behind one of the model figures as CSV.
    Figure(FigureArgs),
    /// Monte Carlo time-average growth factor.
    Simulate(SimulateArgs),
    /// Ensemble mean vs median wealth per step, as CSV.
    Divergence(DivergenceArgs),
    /// Model agreement with a choice poll.
    Survey(SurveyArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DecideArgs {
    #[arg(long, value_parser = parse_domain)]
    pub domain: Domain,
    #[arg(long)]
    pub p: f64,
    /// Stake, in currency.
    #[arg(long = "M")]
    pub stake: f64,
    /// Initial wealth, in currency.
    #[arg(long = "W0")]
    pub initial_wealth: f64,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ContrastArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    pub figure: FigureId,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub min: Option<f64>,
    #[arg(long)]
    pub max: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Probability of each curve; repeat for several curves.
    #[arg(long = "p")]
    pub ps: Vec<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 1)]
    pub trajectories: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write every trajectory as trajectory_id,t,wealth CSV.
    #[arg(long)]
    pub paths: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DivergenceArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = 20)]
    pub steps: u64,
    #[arg(long, default_value_t = 100_000)]
    pub trajectories: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    /// Survey CSV; the bundled three-problem poll when omitted.
    #[arg(long)]
    pub path: Option<PathBuf>,
    /// Overrides each problem's rho.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    s.parse().map_err(|e: timeavg_core::Error| e.to_string())
}

#[derive(Debug, Serialize, serde::Deserialize)]
pub struct DecideOutput {
    pub gamble: GambleSpec,
    pub x: f64,
    pub decision: Decision,
}

#[derive(Debug, Serialize, serde::Deserialize)]
pub struct SurveyOutput {
    pub problems: Vec<AgreementReport>,
    pub agreed: usize,
    pub total: usize,
}

fn index(p: f64) -> Result<DeformationIndex, CliError> {
    Ok(DeformationIndex::new(p)?)
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn label(l: Option<OptionLabel>) -> String {
    l.map(|l| l.to_string()).unwrap_or_else(|| "-".into())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let defaults = match &cli.config {
        Some(path) => Defaults::load(path)?,
        None => Defaults::default(),
    };
    match cli.command {
        Command::Decide(a) => cmd_decide(a, &defaults, out),
        Command::Contrast(a) => cmd_contrast(a, &defaults, out),
        Command::Crossover(a) => {
            let rho = a.rho.unwrap_or(defaults.rho);
            let x = risk_seeking_crossover(index(a.p)?, rho)?;
            writeln!(out, "crossover: {}", sig9(x))?;
            Ok(())
        }
        Command::Figure(a) => cmd_figure(a, &defaults, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Divergence(a) => {
            let cfg = SimConfig::new(index(a.p)?, a.x, a.steps, a.trajectories, a.seed)?;
            let rows = divergence_demo(&cfg)?;
            match &a.out {
                Some(path) => write_divergence_csv(create(path)?, &rows)?,
                None => write_divergence_csv(&mut *out, &rows)?,
            }
            Ok(())
        }
        Command::Survey(a) => cmd_survey(a, &defaults, out),
    }
}

pub fn cmd_decide(a: DecideArgs, defaults: &Defaults, out: &mut dyn Write) -> Result<(), CliError> {
    let rho = a.rho.unwrap_or(defaults.rho);
    let gamble = GambleSpec::new(a.domain, a.stake, a.initial_wealth, index(a.p)?, rho)?;
    let decision = decide(&gamble)?;
    let result = DecideOutput {
        gamble,
        x: gamble.change(),
        decision,
    };
    if a.json {
        return write_json(out, &result);
    }
    writeln!(out, "domain: {:?}", gamble.domain)?;
    writeln!(out, "p: {}", sig9(gamble.p.get()))?;
    writeln!(out, "x: {}", sig9(result.x))?;
    if gamble.domain == Domain::Loss {
        writeln!(out, "rho: {}", sig9(rho))?;
    }
    writeln!(out, "chosen: {:?}", decision.chosen)?;
    writeln!(out, "sure_change: {}", sig9(decision.sure_change))?;
    writeln!(out, "risky_equivalent_change: {}", sig9(decision.risky_equivalent_change))?;
    Ok(())
}

pub fn cmd_contrast(a: ContrastArgs, defaults: &Defaults, out: &mut dyn Write) -> Result<(), CliError> {
    let threshold = a.threshold.unwrap_or(defaults.threshold_db);
    let report: ContrastReport = classify(index(a.p)?, a.x, threshold)?;
    if a.json {
        return write_json(out, &report);
    }
    let edge = |b: Option<f64>| b.map(sig9).unwrap_or_else(|| "domain edge".into());
    writeln!(out, "cr_db: {}", sig9(report.cr_db))?;
    writeln!(out, "classification: {:?}", report.classification)?;
    writeln!(out, "threshold_db: {}", sig9(report.threshold_db))?;
    writeln!(out, "loss_boundary: {}", edge(report.loss_boundary))?;
    writeln!(out, "gain_boundary: {}", edge(report.gain_boundary))?;
    Ok(())
}

pub fn cmd_figure(a: FigureArgs, defaults: &Defaults, out: &mut dyn Write) -> Result<(), CliError> {
    let mut spec = FigureSpec::default_for(a.figure);
    spec.threshold_db = a.threshold.unwrap_or(defaults.threshold_db);
    spec.grid = Grid {
        min: a.min.unwrap_or(spec.grid.min),
        max: a.max.unwrap_or(spec.grid.max),
        count: a.count.unwrap_or(spec.grid.count),
    };
    if !a.ps.is_empty() {
        let rho = spec.params[0].rho;
        spec.params = a
            .ps
            .iter()
            .map(|&p| Ok(ParamSet { p: index(p)?, rho }))
            .collect::<Result<_, CliError>>()?;
    }
    let rho = match a.figure {
        FigureId::Fig4 => Some(a.rho.unwrap_or(defaults.rho)),
        FigureId::Fig2 => a.rho,
        _ => None,
    };
    if rho.is_some() {
        for s in &mut spec.params {
            s.rho = rho;
        }
    }
    let data = figure::generate(&spec)?;
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            figure::write_csv(&data, &mut w)?;
            w.flush().map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
        }
        None => figure::write_csv(&data, &mut *out)?,
    }
    Ok(())
}

fn print_summary(out: &mut dyn Write, s: &SimSummary) -> std::io::Result<()> {
    writeln!(out, "empirical_growth_factor: {}", sig9(s.empirical_growth_factor))?;
    writeln!(out, "analytic_growth_factor: {}", sig9(s.analytic_growth_factor))?;
    writeln!(out, "relative_error: {}", sig9(s.relative_error))?;
    writeln!(out, "ensemble_mean_factor: {}", sig9(s.ensemble_mean_factor))?;
    writeln!(out, "analytic_ensemble_factor: {}", sig9(s.analytic_ensemble_factor))?;
    writeln!(out, "ruined_trajectories: {}", s.ruined_trajectories)
}

pub fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = SimConfig::new(index(a.p)?, a.x, a.steps, a.trajectories, a.seed)?;
    let summary = match &a.paths {
        Some(path) => {
            let (summary, paths) = simulate_with_paths(&cfg)?;
            let mut w = create(path)?;
            write_paths_csv(&mut w, &paths)?;
            w.flush()?;
            summary
        }
        None => simulate(&cfg)?,
    };
    if a.json {
        write_json(out, &summary)
    } else {
        Ok(print_summary(out, &summary)?)
    }
}

pub fn cmd_survey(a: SurveyArgs, defaults: &Defaults, out: &mut dyn Write) -> Result<(), CliError> {
    let problems = match &a.path {
        Some(path) => load_survey(path)?,
        None => bundled_survey(),
    };
    let threshold = a.threshold.unwrap_or(defaults.threshold_db);
    let reports = problems
        .iter()
        .map(|p| analyze(p, a.rho, threshold))
        .collect::<Result<Vec<_>, _>>()?;
    let agreed = reports.iter().filter(|r| r.agree).count();
    let result = SurveyOutput {
        total: reports.len(),
        agreed,
        problems: reports,
    };
    if a.json {
        return write_json(out, &result);
    }
    writeln!(
        out,
        "{:<12} {:>5} {:>9} {:>8} {:>8} {:>6} {:>6} {:>10} {:>10}",
        "id", "n", "majority", "share", "entropy", "model", "agree", "cr_db", "class"
    )?;
    for r in &result.problems {
        writeln!(
            out,
            "{:<12} {:>5} {:>9} {:>8.4} {:>8.4} {:>6} {:>6} {:>10.4} {:>10}",
            r.id,
            r.respondents,
            label(r.observed_majority),
            r.majority_share,
            r.entropy_bits,
            label(r.model_choice),
            if r.agree { "yes" } else { "no" },
            r.cr_db,
            format!("{:?}", r.classification),
        )?;
    }
    writeln!(out, "agreement: {}/{}", result.agreed, result.total)?;
    Ok(())
}
