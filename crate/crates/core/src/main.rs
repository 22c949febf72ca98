use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cryo_eo_sim::config::{load_config, RunConfig};
use cryo_eo_sim::run::{parse_target, run};

/// Pump-heating and state-transfer fidelity simulator for cryogenic
/// electro-optic transducers.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// Scenario (simulate-thermal, sweep-power, sweep-coupling, sweep-thickness,
    /// optimize) or figure preset (fig2a … fig4d).
    target: String,
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CRYO_EO_SIM_LOG", "warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: &Cli) -> cryo_eo_sim::Result<String> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| cryo_eo_sim::Error::InvalidParameter(e.to_string()))?;
    }
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    let target = match parse_target(&cli.target) {
        Ok(t) => t,
        Err(e) => match (cli.target.as_str(), cfg.scenario) {
            ("run", Some(s)) => cryo_eo_sim::run::Target::Scenario(s),
            _ => return Err(e),
        },
    };
    let report = run(&cfg, target, cli.svg)?;
    if report.failed_rows > 0 {
        log::warn!("{} sweep rows failed", report.failed_rows);
    }
    Ok(report.summary)
}
