use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use swe_cli::{phasespace, rabi, run_verify, sample, write_rabi, Backend, FieldKind, ScenarioConfig, VerifyOptions};
use swe_core::output::to_json_17;
use swe_core::phasespace::GaussianKernel;

#[derive(Parser, Debug)]
#[command(name = "swe", version, about = "Semiclassical wave equation simulator for an atom in a cavity")]
struct Cli {
    /// Scenario configuration (JSON); the resonant vacuum-Rabi scenario when absent
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the configuration
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Wave-equation backend: bargmann or grid
    #[arg(long, global = true)]
    backend: Option<Backend>,
    /// Sampling seed, overriding the configuration
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reference and wave-equation runs side by side
    Rabi,
    /// Writes a phase-space field at one time
    Phasespace {
        #[arg(long, default_value_t = 0.0)]
        time: f64,
        /// wigner, husimi or swe-density
        #[arg(long)]
        kind: FieldKind,
    },
    /// Checks every identity at the scenario's scale; exit status 0 iff all pass
    Verify {
        /// Mean square of the coarse-graining kernel (negative control)
        #[arg(long, hide = true)]
        kernel_mean_square: Option<f64>,
    },
    /// Draws classical field values from the wave's density
    Sample {
        /// Defaults to the configured end time
        #[arg(long)]
        time: Option<f64>,
    },
}

fn load(cli: &Cli) -> Result<ScenarioConfig> {
    let mut config = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if let Some(backend) = cli.backend {
        config.swe_backend = backend;
    }
    if let Some(seed) = cli.seed {
        let mut sampling = config.sampling.unwrap_or(swe_cli::config::SamplingSpec { count: 10_000, seed });
        sampling.seed = seed;
        config.sampling = Some(sampling);
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<bool> {
    let config = load(cli)?;
    let dir = config.output_dir.clone();
    match &cli.command {
        Command::Rabi => {
            let report = rabi(&config).context("rabi scenario failed")?;
            for path in write_rabi(&report, &dir)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Phasespace { time, kind } => {
            let path = phasespace(&config, *time, *kind, &dir).context("phasespace command failed")?;
            println!("{}", path.display());
            Ok(true)
        }
        Command::Verify { kernel_mean_square } => {
            let mut options = VerifyOptions::default();
            if let Some(s) = kernel_mean_square {
                options.kernel = GaussianKernel::with_mean_square(*s)?;
            }
            let checks = run_verify(&config, &options).context("verification could not run")?;
            let json = to_json_17(&checks)?;
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            std::fs::write(dir.join("report.json"), &json)?;
            println!("{json}");
            Ok(checks.iter().all(|c| c.passed))
        }
        Command::Sample { time } => {
            let t = time.unwrap_or(config.time.t_end);
            let report = sample(&config, t, &dir).context("sample command failed")?;
            println!("{}", to_json_17(&report)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
