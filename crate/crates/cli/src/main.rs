use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use paramlab_cli::commands;
use paramlab_cli::config::Config;
use paramlab_cli::output::OutputMeta;

/// Laboratory for tuning the (1+1) EA's mutation rate: deterministic
/// landscape certification and seeded tuning experiments.
#[derive(Parser)]
#[command(name = "lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Experiment config file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV results.
    #[arg(long)]
    out: PathBuf,
    /// Master seed override (defaults to the config's campaign seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = automatic).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify landscape unimodality and emit the cutoff tables.
    Landscape(Common),
    /// Run tuning campaigns and emit one row per campaign.
    Tune(Common),
    /// Chi-square test of the tuner against the coin-flip-walk reference.
    Blindness(Common),
    /// Simulation-versus-theory validation checks.
    Validate(Common),
    /// Recompute both tables and compare against the golden references.
    Tables(Common),
}

fn load(common: &Common) -> Result<(Config, OutputMeta)> {
    let text = std::fs::read_to_string(&common.config)
        .with_context(|| format!("reading config {}", common.config.display()))?;
    let cfg = Config::from_toml(&text)?;
    let seed = common.seed.unwrap_or(cfg.campaign.master_seed);
    Ok((cfg, OutputMeta::new(&text, seed)))
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match &cli.command {
        Cmd::Landscape(c) => {
            let (cfg, meta) = load(c)?;
            let summary = commands::cmd_landscape(&cfg, &meta, &c.out)?;
            println!(
                "landscape: {} certified ranges, {} finishes-first pairs, certified={}",
                summary.table1_rows, summary.table2_pairs, summary.certified
            );
            Ok(if summary.certified { 0 } else { 2 })
        }
        Cmd::Tune(c) => {
            let (cfg, meta) = load(c)?;
            let rows = commands::cmd_tune(&cfg, &meta, &c.out, c.workers)?;
            println!("tune: {} campaigns written", rows.len());
            Ok(0)
        }
        Cmd::Blindness(c) => {
            let (cfg, meta) = load(c)?;
            let res = commands::cmd_blindness(&cfg, &meta, &c.out, c.workers)?;
            println!(
                "blindness: chi2={:.3} dof={} p={:.4} pass={}",
                res.chi2.statistic, res.chi2.dof, res.chi2.p_value, res.pass
            );
            Ok(0)
        }
        Cmd::Validate(c) => {
            let (cfg, meta) = load(c)?;
            let reports = commands::cmd_validate(&cfg, &meta, &c.out)?;
            for r in &reports {
                println!(
                    "validate: {} estimate={:.4} pass={}",
                    r.metric, r.estimate, r.pass
                );
            }
            Ok(if reports.iter().all(|r| r.pass) { 0 } else { 2 })
        }
        Cmd::Tables(c) => {
            let (cfg, meta) = load(c)?;
            let verdict = commands::cmd_tables(&cfg, &meta, &c.out)?;
            let failed = verdict.rows.iter().filter(|r| !r.pass).count();
            println!(
                "tables: {} comparisons, {} outside tolerance",
                verdict.rows.len(),
                failed
            );
            Ok(if verdict.all_pass { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
