use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use diffclass::harness::{
    family_from_config, gram_diagnostic, report, run_adversarial_experiment,
    run_estimation_experiment, run_rate_experiment, simulate_dataset, ExperimentConfig,
};
use diffclass::{par, Error, Result};

#[derive(Parser)]
#[command(name = "diffclass", version, about = "Rate experiments for plug-in classification of diffusion paths")]
struct Cli {
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory (default: the config's output_path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Excess risk of the plug-in classifier across the N grid.
    Rate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Empirical-norm error of the drift and diffusion estimators.
    Estimation {
        #[arg(long)]
        config: PathBuf,
    },
    /// Conditioning of the empirical Gram matrix at one sample size.
    Gram {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "N")]
        n_total: usize,
    },
    /// Worst-case excess risk over the bump hypothesis family.
    Adversarial {
        #[arg(long)]
        config: PathBuf,
    },
    /// Writes the first training set of the grid's smallest N.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        dump: PathBuf,
    },
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let out_dir = |cfg: &ExperimentConfig| {
        cli.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(&cfg.output_path))
    };
    let report_paths = |(csv, json): (PathBuf, PathBuf)| {
        eprintln!("wrote {} and {}", csv.display(), json.display());
    };
    match &cli.command {
        Command::Rate { config } => {
            let cfg = load(config, cli.seed)?;
            let rep = par::with_threads(cli.threads, || run_rate_experiment(&cfg))?;
            if let Some(fit) = &rep.fit {
                eprintln!("excess-risk slope {:.4} (r² {:.4})", fit.slope, fit.r_squared);
            }
            report_paths(report::write_outputs(&out_dir(&cfg), "rate", &rep.table, &cfg, &rep)?);
        }
        Command::Estimation { config } => {
            let cfg = load(config, cli.seed)?;
            let rep = par::with_threads(cli.threads, || run_estimation_experiment(&cfg))?;
            for (name, fit) in [("b0", &rep.fit_b0), ("b1", &rep.fit_b1), ("sigma_sq", &rep.fit_sigma_sq)] {
                if let Some(fit) = fit {
                    eprintln!("{name} norm slope {:.4} (r² {:.4})", fit.slope, fit.r_squared);
                }
            }
            report_paths(report::write_outputs(&out_dir(&cfg), "estimation", &rep.table, &cfg, &rep)?);
        }
        Command::Gram { config, n_total } => {
            let cfg = load(config, cli.seed)?;
            let rep = par::with_threads(cli.threads, || gram_diagnostic(&cfg, *n_total))?;
            eprintln!("positive definite on every non-degenerate class: {}", rep.all_positive_definite);
            report_paths(report::write_outputs(&out_dir(&cfg), "gram", &rep.table, &cfg, &rep)?);
        }
        Command::Adversarial { config } => {
            let cfg = load(config, cli.seed)?;
            let family = family_from_config(&cfg)?;
            let rep = par::with_threads(cli.threads, || run_adversarial_experiment(&family, &cfg))?;
            for p in &rep.points {
                eprintln!(
                    "N = {}: max {:.5} (member {}), mean {:.5}",
                    p.n_total, p.max_over_members, p.worst_member, p.mean_over_members
                );
            }
            let aggregates = serde_json::json!({ "family": family, "report": rep });
            report_paths(report::write_outputs(&out_dir(&cfg), "adversarial", &rep.table, &cfg, aggregates)?);
        }
        Command::Simulate { config, dump } => {
            let cfg = load(config, cli.seed)?;
            let n_total = cfg.n_grid[0];
            let ds = par::with_threads(cli.threads, || simulate_dataset(&cfg, n_total))?;
            ds.write_text(BufWriter::new(File::create(dump)?))?;
            eprintln!("wrote {} paths with n = {} to {}", ds.len(), ds.n(), dump.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config() {
        2
    } else {
        3
    }
}
