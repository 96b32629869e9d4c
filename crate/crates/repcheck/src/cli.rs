//! Command-line driver: `analyze`, `simulate` and `coverage`.
//!
//! Data goes to `--out` or standard output; diagnostics, warnings and the
//! effective configuration go to the error stream.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use repcheck_core::report::{figure1_rows, figure_s1_histogram, figure_s2_rows, SubsetFilter};
use repcheck_core::{
    build_report, classify_portfolio, coverage_experiment, impute, Correlation, Probability,
    SimulationConfig, StudyRecord, DEFAULT_SEED,
};
use serde::Serialize;

use crate::dataset::{load_studies, StudyTable, TableFormat};
use crate::output;
use crate::parallel::simulate_parallel;

#[derive(Debug, Parser)]
#[command(
    name = "repcheck",
    version,
    about = "Prediction-interval checks for replication studies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify each replication against the prediction interval from its original study.
    Analyze(AnalyzeArgs),
    /// Simulate perfect replications and tabulate how often each comes out significant.
    Simulate(SimulateArgs),
    /// Monte Carlo coverage of the prediction interval for one design.
    Coverage(CoverageArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    All,
    #[value(name = "one_df")]
    OneDf,
}

impl From<Subset> for SubsetFilter {
    fn from(s: Subset) -> Self {
        match s {
            Subset::All => SubsetFilter::All,
            Subset::OneDf => SubsetFilter::OneDf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn open_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} must lie strictly between 0 and 1"))
    }
}

fn correlation_arg(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    Correlation::new(v).map(|_| v).map_err(|e| e.to_string())
}

fn sample_size(s: &str) -> Result<u32, String> {
    let v: u32 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a positive integer"))?;
    if v > 3 {
        Ok(v)
    } else {
        Err(format!("{v} must be greater than 3"))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Study table (CSV or TSV with a header row).
    #[arg(long)]
    pub input: PathBuf,
    /// Table format [default: tsv for .tsv/.tab files, csv otherwise].
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
    /// Studies to include.
    #[arg(long, value_enum, default_value_t = Subset::All)]
    pub subset: Subset,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// For csv: a directory receiving one file per table. For json: a file.
    /// Standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output_format: OutputFormat,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Interval level is 1 - alpha.
    #[arg(long, default_value_t = 0.05, value_parser = open_probability)]
    pub alpha: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Significance threshold; a simulated P-value counts when strictly below it.
    #[arg(long, default_value_t = 0.05, value_parser = open_probability)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Simulated replications per study.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_sims: u32,
    /// Worker threads [default: all cores]. Output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoverageArgs {
    /// True correlation shared by original and replication.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, value_parser = correlation_arg)]
    pub rho: f64,
    #[arg(long, default_value_t = 50, value_parser = sample_size)]
    pub n_orig: u32,
    #[arg(long, default_value_t = 50, value_parser = sample_size)]
    pub n_rep: u32,
    #[arg(long, default_value_t = 0.05, value_parser = open_probability)]
    pub alpha: f64,
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct Echo<'a, T: Serialize> {
    command: &'static str,
    #[serde(flatten)]
    args: &'a T,
}

fn echo_config<T: Serialize>(
    err: &mut dyn Write,
    command: &'static str,
    args: &T,
) -> anyhow::Result<()> {
    let json = serde_json::to_string(&Echo { command, args })?;
    writeln!(err, "config: {json}")?;
    Ok(())
}

fn load(input: &InputArgs, err: &mut dyn Write) -> anyhow::Result<StudyTable> {
    let format = input
        .format
        .unwrap_or_else(|| TableFormat::from_path(&input.input));
    let table = load_studies(&input.input, format)?;
    for w in &table.parse_warnings {
        writeln!(
            err,
            "warning: {}:{}: {} (row skipped)",
            table.source_path, w.line, w.message
        )?;
    }
    Ok(table)
}

fn create_file(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("cannot create `{}`", path.display()))?;
    Ok(BufWriter::new(f))
}

fn csv_dir(out: &Path) -> anyhow::Result<&Path> {
    fs::create_dir_all(out)
        .with_context(|| format!("cannot create directory `{}`", out.display()))?;
    Ok(out)
}

fn write_json<T: Serialize>(
    value: &T,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(
                File::create(path)
                    .with_context(|| format!("cannot create `{}`", path.display()))?,
            );
            serde_json::to_writer_pretty(&mut f, value)?;
            writeln!(f)?;
            f.flush()?;
        }
        None => {
            serde_json::to_writer_pretty(&mut *stdout, value)?;
            writeln!(stdout)?;
        }
    }
    Ok(())
}

pub fn cmd_analyze(
    args: &AnalyzeArgs,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<()> {
    echo_config(err, "analyze", args)?;
    let alpha = Probability::open(args.alpha)?;
    let table = load(&args.input, err)?;
    let selection: SubsetFilter = args.input.subset.into();
    let classified = classify_portfolio(&table.records, alpha)
        .with_context(|| format!("in `{}`", args.input.input.display()))?;
    let selected: Vec<_> = classified
        .into_iter()
        .filter(|s| selection.matches(s))
        .collect();
    let extra: &[SubsetFilter] = match selection {
        SubsetFilter::All => &[SubsetFilter::OneDf],
        SubsetFilter::OneDf => &[],
    };
    let report = build_report(&selected, extra, alpha);
    let fig1 = figure1_rows(&selected);
    let fig_s2 = figure_s2_rows(&selected);
    let c = &report.overall;
    writeln!(
        err,
        "classified {} of {} studies: {} below, {} inside, {} above",
        c.n_classifiable, c.n_total, c.n_below, c.n_inside, c.n_above
    )?;

    let out = args.output.out.as_deref();
    match args.output.output_format {
        OutputFormat::Json => {
            let doc = output::analysis_json(
                args,
                &report,
                selection,
                &fig1,
                &fig_s2,
                &table.parse_warnings,
            );
            write_json(&doc, out, stdout)?;
        }
        OutputFormat::Csv => match out {
            Some(dir) => {
                let dir = csv_dir(dir)?;
                output::write_report_csv(&report, selection, create_file(dir, "report.csv")?)?;
                output::write_figure1_csv(&fig1, create_file(dir, "figure1.csv")?)?;
                output::write_figure_s2_csv(&fig_s2, create_file(dir, "figure_s2.csv")?)?;
            }
            None => output::write_report_csv(&report, selection, stdout)?,
        },
    }
    Ok(())
}

pub fn cmd_simulate(
    args: &SimulateArgs,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<()> {
    echo_config(err, "simulate", args)?;
    let records = load(&args.input, err)?.records;
    // medians come from the whole table, then the subset is taken
    let (imputed, log) = impute(&records)?;
    let selection: SubsetFilter = args.input.subset.into();
    let selected: Vec<StudyRecord> = imputed
        .into_iter()
        .filter(|r| selection == SubsetFilter::All || r.one_df)
        .collect();
    if selected.is_empty() {
        bail!("no studies selected by subset `{}`", selection.name());
    }
    let cfg = SimulationConfig {
        n_sims: args.n_sims,
        seed: args.seed,
        alpha_sig: Probability::open(args.alpha)?,
    };
    let mut sim = simulate_parallel(&selected, &cfg, args.threads.map(|t| t as usize))?;
    sim.imputation_log = log
        .into_iter()
        .filter(|e| selected.iter().any(|r| r.id == e.id))
        .collect();
    for e in &sim.imputation_log {
        writeln!(
            err,
            "imputed {} for `{}` = {} from {}",
            e.field.as_str(),
            e.id,
            e.value,
            e.source.as_str()
        )?;
    }
    let fracs = &sim.per_sim_significant_fraction;
    let min = fracs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = fracs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    writeln!(
        err,
        "simulated {} studies x {} replications: significant fraction ranges {min} to {max}",
        selected.len(),
        cfg.n_sims
    )?;

    let bins = figure_s1_histogram(&sim);
    let out = args.output.out.as_deref();
    match args.output.output_format {
        OutputFormat::Json => write_json(&output::simulation_json(args, &sim, &bins), out, stdout)?,
        OutputFormat::Csv => match out {
            Some(dir) => {
                let dir = csv_dir(dir)?;
                output::write_figure_s1_csv(&bins, create_file(dir, "figure_s1.csv")?)?;
                output::write_sim_fractions_csv(
                    &sim,
                    create_file(dir, "simulation_fractions.csv")?,
                )?;
                output::write_sim_studies_csv(&sim, create_file(dir, "simulation_studies.csv")?)?;
                output::write_imputation_csv(
                    &sim.imputation_log,
                    create_file(dir, "imputation.csv")?,
                )?;
            }
            None => output::write_figure_s1_csv(&bins, stdout)?,
        },
    }
    Ok(())
}

#[derive(Serialize)]
struct CoverageJson<'a> {
    config: &'a CoverageArgs,
    coverage: f64,
}

pub fn cmd_coverage(
    args: &CoverageArgs,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<()> {
    echo_config(err, "coverage", args)?;
    let coverage = coverage_experiment(
        Correlation::new(args.rho)?,
        args.n_orig,
        args.n_rep,
        Probability::open(args.alpha)?,
        args.trials,
        args.seed,
    )?;
    writeln!(err, "coverage {coverage} (nominal {})", 1.0 - args.alpha)?;
    let out = args.output.out.as_deref();
    match args.output.output_format {
        OutputFormat::Json => write_json(
            &CoverageJson {
                config: args,
                coverage,
            },
            out,
            stdout,
        )?,
        OutputFormat::Csv => {
            let write = |w: &mut dyn Write| -> anyhow::Result<()> {
                let mut w = csv::Writer::from_writer(w);
                w.write_record([
                    "rho", "n_orig", "n_rep", "alpha", "trials", "seed", "coverage",
                ])?;
                w.write_record([
                    args.rho.to_string(),
                    args.n_orig.to_string(),
                    args.n_rep.to_string(),
                    args.alpha.to_string(),
                    args.trials.to_string(),
                    args.seed.to_string(),
                    coverage.to_string(),
                ])?;
                w.flush()?;
                Ok(())
            };
            match out {
                Some(dir) => {
                    let dir = csv_dir(dir)?;
                    write(&mut create_file(dir, "coverage.csv")?)?
                }
                None => write(stdout)?,
            }
        }
    }
    Ok(())
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<()> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, stdout, err),
        Command::Simulate(a) => cmd_simulate(a, stdout, err),
        Command::Coverage(a) => cmd_coverage(a, stdout, err),
    }
}
