use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qbound_cli::config::parse_param;
use qbound_cli::{configure_threads, emit_report, run_scenario, CliError, Format, Result, ScenarioConfig, Units, SCENARIOS};
use qbound_core::accinfo::{default_outcomes, maximize_mutual_info};
use qbound_core::haarmc::{uniform_closed_form, uniform_ensemble_info_mc};
use qbound_core::{Ensemble, Measurement, C64};

#[derive(Parser)]
#[command(name = "qbound", version, about = "Information bounds for quantum ensembles and measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the bound-chain campaign.
    Verify(Common),
    /// Run a named scenario.
    Scenario {
        /// Scenario name; `list` prints the registry.
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Maximize mutual information over rank-one POVMs for an ensemble.
    Optimize {
        /// Ensemble JSON (`{"probs": [...], "states": [matrix, ...]}`). Without it,
        /// the equiprobable pure pair with overlap `--overlap` is used.
        #[arg(long)]
        ensemble: Option<PathBuf>,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8.cos())]
        overlap: f64,
        /// Outcome count; defaults to the squared dimension.
        #[arg(long)]
        outcomes: Option<usize>,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "nats")]
        units: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo over Haar states for one measurement.
    Haar {
        /// Measurement JSON (`{"kraus": [matrix, ...]}`); defaults to the computational basis.
        #[arg(long)]
        measurement: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "nats")]
        units: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = qbound_cli::config::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value = "nats")]
    units: String,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scenario parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

impl Common {
    fn config(&self, name: &str) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::new(name)?
            .with_seed(self.seed)
            .with_tol(self.tol)
            .with_units(self.units.parse()?);
        if let Some(d) = self.dim {
            cfg = cfg.with_dim(d);
        }
        if let Some(t) = self.trials {
            cfg = cfg.with_trials(t);
        }
        for raw in &self.params {
            let (k, v) = parse_param(raw)?;
            cfg.params.insert(k, v);
        }
        Ok(cfg)
    }

    fn run(&self, name: &str) -> Result<bool> {
        let cfg = self.config(name)?;
        let report = run_scenario(&cfg)?;
        emit_report(&report, self.format.parse::<Format>()?, self.out.as_deref())?;
        Ok(report.all_passed())
    }
}

fn scale(units: Units) -> f64 {
    match units {
        Units::Nats => 1.0,
        Units::Bits => std::f64::consts::LN_2,
    }
}

fn write_json(value: &serde_json::Value, out: Option<&std::path::Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Verify(common) => common.run("bound-chain"),
        Command::Scenario { name, common } => {
            if name == "list" {
                for s in SCENARIOS {
                    println!("{:<24}{}", s.name, s.about);
                }
                return Ok(true);
            }
            common.run(&name)
        }
        Command::Optimize {
            ensemble,
            overlap,
            outcomes,
            budget,
            restarts,
            seed,
            units,
            out,
        } => {
            let units: Units = units.parse()?;
            let e: Ensemble = match ensemble {
                Some(path) => serde_json::from_slice(&std::fs::read(path)?)?,
                None => {
                    if !(0.0..=1.0).contains(&overlap) {
                        return Err(CliError::InvalidConfig(format!("overlap {overlap} outside [0, 1]")));
                    }
                    let a = overlap.acos() / 2.0;
                    let r = |x: f64| C64::new(x, 0.0);
                    Ensemble::from_pure_states(
                        vec![0.5, 0.5],
                        &[vec![r(a.cos()), r(a.sin())], vec![r(a.cos()), r(-a.sin())]],
                    )?
                }
            };
            let k = outcomes.unwrap_or_else(|| default_outcomes(e.dim()));
            let result = maximize_mutual_info(&e, k, budget, restarts, seed)?;
            let s = scale(units);
            let trace: Vec<_> = result.trace.iter().map(|(i, v)| json!([i, v.0 / s])).collect();
            write_json(
                &json!({
                    "units": units,
                    "best_value": result.best_value.0 / s,
                    "best_measurement": result.best_measurement,
                    "trace": trace,
                    "restarts": result.restarts,
                    "seed": result.seed,
                }),
                out.as_deref(),
            )?;
            Ok(true)
        }
        Command::Haar {
            measurement,
            dim,
            trials,
            seed,
            units,
            out,
        } => {
            let units: Units = units.parse()?;
            let m: Measurement = match measurement {
                Some(path) => serde_json::from_slice(&std::fs::read(path)?)?,
                None => Measurement::computational_basis(dim),
            };
            let est = uniform_ensemble_info_mc(&m, trials, seed)?;
            let closed = uniform_closed_form(&m)?.0;
            let s = scale(units);
            let within = est.within_sigmas(closed, 3.0);
            write_json(
                &json!({
                    "units": units,
                    "dim": m.dim(),
                    "trials": est.trials,
                    "seed": est.seed,
                    "mc_mean": est.mean.0 / s,
                    "std_error": est.std_error.0 / s,
                    "closed_form": closed / s,
                    "sigmas": est.sigmas_from(closed),
                    "within_three_sigma": within,
                }),
                out.as_deref(),
            )?;
            Ok(within)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qbound: {e}");
            ExitCode::from(2)
        }
    }
}
