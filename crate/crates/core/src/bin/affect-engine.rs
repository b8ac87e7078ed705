use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use affect_engine::io::{emit_all, emit_resolved_configs, output_names, parse_config, Format};
use affect_engine::scenario::{run_suite_each, ScenarioConfig};
use affect_engine::{Error, SelectionMode};

/// Seed override read from the environment.
const SEED_ENV: &str = "AFFECT_ENGINE_SEED";

#[derive(Parser)]
#[command(
    name = "affect-engine",
    version,
    about = "Active-inference search agent with circumplex affect"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the episodes described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Only run configs with this scenario id.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        scenario: Option<u8>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Comma-separated subset of csv,json,svg.
        #[arg(long, default_value = "csv,json,svg", value_delimiter = ',')]
        format: Vec<Format>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        precision: Option<f64>,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Force argmax action selection.
        #[arg(long)]
        deterministic: bool,
    },
    /// Print the five built-in scenario configs as JSON.
    Scenarios,
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn env_seed() -> Result<Option<u64>, Error> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Scenarios => {
            let text = serde_json::to_string_pretty(&ScenarioConfig::presets())
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            println!("{text}");
            Ok(())
        }
        Command::Validate { config } => {
            let configs = parse_config(&config)?;
            println!(
                "{}: {} valid scenario config(s)",
                config.display(),
                configs.len()
            );
            Ok(())
        }
        Command::Run {
            config,
            scenario,
            seed,
            out_dir,
            format,
            horizon,
            precision,
            max_steps,
            deterministic,
        } => {
            let env_seed = env_seed()?;
            let mut configs = parse_config(&config)?;
            if let Some(id) = scenario {
                configs.retain(|c| c.scenario_id == Some(id));
                if configs.is_empty() {
                    return Err(Error::Config(format!(
                        "{} has no config for scenario {id}",
                        config.display()
                    )));
                }
            }
            for c in &mut configs {
                if let Some(s) = seed.or(env_seed) {
                    c.seed = s;
                }
                if let Some(h) = horizon {
                    c.horizon = h;
                }
                if let Some(g) = precision {
                    c.policy_precision = g;
                }
                if let Some(m) = max_steps {
                    c.max_steps = m;
                }
                if deterministic {
                    c.selection = SelectionMode::Argmax;
                }
                c.validate()?;
            }

            std::fs::create_dir_all(&out_dir).map_err(|e| Error::Io {
                path: out_dir.clone(),
                source: e,
            })?;
            emit_resolved_configs(&configs, out_dir.join("resolved_config.json"))?;

            let mut failures = Vec::new();
            let names = output_names(&configs);
            for (name, result) in names.iter().zip(run_suite_each(&configs)?) {
                match result
                    .and_then(|log| emit_all(&log, &out_dir, name, &format).map(|b| (log, b)))
                {
                    Ok((log, bundle)) => {
                        let last = log.steps.last().map(|s| s.affect.label.to_string());
                        println!(
                            "{name}: {} steps, {:?}, final label {}",
                            log.steps.len(),
                            log.outcome,
                            last.as_deref().unwrap_or("-")
                        );
                        for path in bundle.emitted {
                            println!("  wrote {}", path.display());
                        }
                    }
                    Err(e) => failures.push(format!("{name}: {e}")),
                }
            }
            if failures.is_empty() {
                Ok(())
            } else {
                Err(Error::Suite {
                    failed: failures.len(),
                    total: configs.len(),
                    messages: failures,
                })
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
