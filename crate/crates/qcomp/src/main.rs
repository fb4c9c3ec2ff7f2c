use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcomp::experiment::{format_summary, run_experiment, ExperimentSpec, Preset};

#[derive(Parser)]
#[command(name = "qcomp", about = "Multicell beamforming experiment runner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Override the config's preset.
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Exit 0 even when some runs did not converge.
        #[arg(long)]
        allow_nonconverged: bool,
    },
    /// Parse a config file and print the fully resolved spec.
    Validate { config: PathBuf },
    /// Run the built-in identity and closed-form checks.
    Selftest,
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum PresetArg {
    MaxPowerVsSinr,
    AntennaCdf,
    PaprTable,
    SingleRun,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::MaxPowerVsSinr => Preset::MaxPowerVsSinr,
            PresetArg::AntennaCdf => Preset::AntennaCdf,
            PresetArg::PaprTable => Preset::PaprTable,
            PresetArg::SingleRun => Preset::SingleRun,
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run() -> qcomp::Result<ExitCode> {
    match Cli::parse().command {
        Command::Run {
            config,
            preset,
            seed,
            out,
            jobs,
            allow_nonconverged,
        } => {
            let mut spec = ExperimentSpec::from_file(&config)?;
            if let Some(p) = preset {
                spec.preset = p.into();
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(dir) = out {
                spec.out_dir = dir;
            }
            if let Some(j) = jobs {
                spec.jobs = j;
            }
            let summary = run_experiment(&spec)?;
            print!("{}", format_summary(&spec, &summary));
            for file in &summary.files {
                println!("wrote {}", file.display());
            }
            if summary.n_nonconverged > 0 && !allow_nonconverged {
                eprintln!(
                    "{} runs did not converge (pass --allow-nonconverged to ignore)",
                    summary.n_nonconverged
                );
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let spec = ExperimentSpec::from_file(&config)?;
            println!("{}", spec.to_toml_string()?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let results = qcomp::selftest::run_all();
            let mut failed = 0;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                println!("{status} {} — {}", r.name, r.detail);
                failed += (!r.passed) as usize;
            }
            println!("{}/{} checks passed", results.len() - failed, results.len());
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
