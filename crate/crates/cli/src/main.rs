use clap::{Parser, Subcommand, ValueEnum};
use flexplan_cli::config::{ModeName, ObjectiveName, ParameterName};
use flexplan_cli::{run, CliError, RunConfig, Verb};
use std::path::PathBuf;
use std::process::ExitCode;

/// Design and scheduling of flexible industrial loads with local PV, wind
/// and battery under day-ahead and intraday market participation.
#[derive(Debug, Parser)]
#[command(name = "flexplan", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for clustering and synthetic inputs; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true, env = "FLEXPLAN_OUT")]
    out: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Simultaneous,
    IdOnly,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Tac,
    Gwi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParameterArg {
    Oversizing,
    MinPartLoad,
    StorageHours,
    RampLimit,
    CapacityScale,
}

#[derive(Debug, clap::Args)]
struct ModelArgs {
    /// Market participation.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest the input series into daily bundles.
    Preprocess,
    /// Cluster the days and write the scenario tree.
    Cluster {
        /// Number of clusters.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Solve one design problem.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        /// Upper bound on annual GWI in kgCO2/a (TAC objective only).
        #[arg(long)]
        gwi_bound: Option<f64>,
        /// Also write the LP in CPLEX LP format as model.lp.
        #[arg(long)]
        dump_lp: bool,
    },
    /// Trace the TAC/GWI Pareto front by epsilon constraints.
    Pareto {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of points including both endpoints.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Sweep one flexibility parameter with and without the local system.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        parameter: Option<ParameterArg>,
        /// Comma-separated parameter values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Optimal capacities over oversizing and capacity-limit scale.
    Heatmap {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated oversizing values (rows).
        #[arg(long, value_delimiter = ',')]
        oversizing: Option<Vec<f64>>,
        /// Comma-separated capacity-limit scale factors (columns).
        #[arg(long, value_delimiter = ',')]
        scale: Option<Vec<f64>>,
    },
    /// Intraday-only against simultaneous trading, and the savings decomposition.
    CompareMarkets,
    /// Summarize the artifacts in the output directory as report.md.
    Report,
}

fn apply_mode(cfg: &mut RunConfig, model: &ModelArgs) {
    if let Some(m) = model.mode {
        cfg.market_mode = match m {
            ModeArg::Simultaneous => ModeName::Simultaneous,
            ModeArg::IdOnly => ModeName::IdOnly,
        };
    }
}

/// Folds the command-line overrides into the configuration.
fn configure(cli: &Cli) -> Result<(RunConfig, Verb, PathBuf), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let verb = match &cli.command {
        Command::Preprocess => Verb::Preprocess,
        Command::Cluster { k } => {
            if let Some(k) = k {
                cfg.clusters = *k;
            }
            Verb::Cluster
        }
        Command::Solve {
            model,
            objective,
            gwi_bound,
            dump_lp,
        } => {
            apply_mode(&mut cfg, model);
            if let Some(o) = objective {
                cfg.objective = match o {
                    ObjectiveArg::Tac => ObjectiveName::Tac,
                    ObjectiveArg::Gwi => ObjectiveName::Gwi,
                };
            }
            if gwi_bound.is_some() {
                cfg.gwi_bound = *gwi_bound;
            }
            Verb::Solve { dump_lp: *dump_lp }
        }
        Command::Pareto { model, points } => {
            apply_mode(&mut cfg, model);
            if let Some(p) = points {
                cfg.studies.pareto_points = *p;
            }
            Verb::Pareto
        }
        Command::Sweep {
            model,
            parameter,
            values,
        } => {
            apply_mode(&mut cfg, model);
            if let Some(p) = parameter {
                cfg.studies.sweep_parameter = match p {
                    ParameterArg::Oversizing => ParameterName::Oversizing,
                    ParameterArg::MinPartLoad => ParameterName::MinPartLoad,
                    ParameterArg::StorageHours => ParameterName::StorageHours,
                    ParameterArg::RampLimit => ParameterName::RampLimit,
                    ParameterArg::CapacityScale => ParameterName::CapacityScale,
                };
                // Values given for another parameter no longer apply.
                if values.is_none() {
                    cfg.studies.sweep_values = None;
                }
            }
            if values.is_some() {
                cfg.studies.sweep_values = values.clone();
            }
            Verb::Sweep
        }
        Command::Heatmap {
            model,
            oversizing,
            scale,
        } => {
            apply_mode(&mut cfg, model);
            if let Some(o) = oversizing {
                cfg.studies.heatmap_oversizing = o.clone();
            }
            if let Some(s) = scale {
                cfg.studies.heatmap_scale = s.clone();
            }
            Verb::Heatmap
        }
        Command::CompareMarkets => Verb::CompareMarkets,
        Command::Report => Verb::Report,
    };
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("flexplan-out"));
    Ok((cfg, verb, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    let result =
        configure(&cli).and_then(|(cfg, verb, out)| run(&cfg, &verb, &out).map(|m| (m, out)));
    match result {
        Ok((m, out)) => {
            log::info!(
                "{} wrote {} files to {}",
                m.verb,
                m.outputs.len(),
                out.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
