//! Command-line front end: scenario configuration, the six baked-in
//! reference experiments, and structured CSV/JSON output.
//!
//! Exit statuses: 0 success (including "no blow-up within horizon"),
//! 2 usage error, 3 simple-wave rejection, 4 integrator failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plasma_osc::certifier;
use plasma_osc::experiments::{self, InitialData};
use plasma_osc::scenario::{self, RunArtifacts, ScenarioConfig};
use plasma_osc::{PlasmaError, Result};

#[derive(Parser)]
#[command(name = "plasma-osc", version, about = "Solver and smoothness certifier for 1D relativistic cold-plasma oscillations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Config file plus per-field overrides; flags win over the file.
#[derive(Args, Debug, Default)]
struct ConfigFlags {
    /// JSON file with ScenarioConfig fields (unknown keys rejected).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho_star: Option<f64>,
    #[arg(long)]
    domain_half_width: Option<f64>,
    #[arg(long)]
    d_rho_coarse: Option<f64>,
    #[arg(long)]
    d_rho_fine: Option<f64>,
    #[arg(long)]
    d_theta: Option<f64>,
    #[arg(long)]
    theta_cap: Option<f64>,
    /// Comma-separated horizon orders, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<u32>>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: blow-up search, condition dynamics, density and
    /// profile diagnostics, CSV/JSON artifacts.
    Simulate(ConfigFlags),
    /// Evaluate the order-n sufficient condition on the initial data
    /// and print the infimum per n.
    Certify(ConfigFlags),
    /// Blow-up search only.
    Blowup(ConfigFlags),
    /// Re-run one of the six baked-in experiments (k = 1..6).
    Reproduce {
        k: u32,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

fn resolve_config(flags: &ConfigFlags) -> Result<ScenarioConfig> {
    let mut config = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                PlasmaError::Usage(format!("cannot read {}: {e}", path.display()))
            })?;
            serde_json::from_str::<ScenarioConfig>(&text)
                .map_err(|e| PlasmaError::Usage(format!("bad config {}: {e}", path.display())))?
        }
        None => {
            let (Some(alpha), Some(beta), Some(rho_star)) =
                (flags.alpha, flags.beta, flags.rho_star)
            else {
                return Err(PlasmaError::Usage(
                    "without --config, --alpha, --beta and --rho-star are required".into(),
                ));
            };
            serde_json::from_value(serde_json::json!({
                "alpha": alpha, "beta": beta, "rho_star": rho_star
            }))
            .expect("default config construction")
        }
    };
    if let Some(v) = flags.alpha {
        config.alpha = v;
    }
    if let Some(v) = flags.beta {
        config.beta = v;
    }
    if let Some(v) = flags.rho_star {
        config.rho_star = v;
    }
    if let Some(v) = flags.domain_half_width {
        config.domain_half_width = Some(v);
    }
    if let Some(v) = flags.d_rho_coarse {
        config.d_rho_coarse = v;
    }
    if let Some(v) = flags.d_rho_fine {
        config.d_rho_fine = v;
    }
    if let Some(v) = flags.d_theta {
        config.d_theta = v;
    }
    if let Some(v) = flags.theta_cap {
        config.theta_cap = v;
    }
    if let Some(v) = &flags.n_list {
        config.n_list = v.clone();
    }
    if let Some(v) = &flags.output_dir {
        config.output_dir = Some(v.clone());
    }
    if config.output_dir.is_none() {
        if let Ok(dir) = std::env::var("PLASMA_OSC_OUTPUT_DIR") {
            config.output_dir = Some(PathBuf::from(dir));
        }
    }
    config.validate()?;
    Ok(config)
}

fn print_artifacts(artifacts: &RunArtifacts) {
    match artifacts.report.t_br {
        Some(t) => {
            println!("T_br = {t:.6}");
            for (i, (rho, label)) in artifacts
                .report
                .rho_br
                .iter()
                .zip(artifacts.report.rho0_star.iter())
                .enumerate()
            {
                println!("rho_br[{i}] = {rho:.6} (label rho0 = {label:.6})");
            }
        }
        None => println!("no blow-up detected within horizon"),
    }
    for d in &artifacts.dynamics {
        match (d.theta_n, d.t_n_sm) {
            (Some(theta), Some(t_sm)) => {
                println!("n = {}: theta_n = {theta:.4}, T_n_sm = {t_sm:.4}", d.n)
            }
            _ => println!("n = {}: theta_n absent (no prediction)", d.n),
        }
    }
}

fn run_simulate(flags: &ConfigFlags) -> Result<()> {
    let config = resolve_config(flags)?;
    let artifacts = scenario::run_scenario(&config, 0)?;
    print_artifacts(&artifacts);
    Ok(())
}

fn run_certify(flags: &ConfigFlags) -> Result<()> {
    let config = resolve_config(flags)?;
    let field = config.pulse()?;
    let labels = experiments::label_grid(config.half_width(), config.d_rho_coarse);
    let samples: Vec<_> = labels.iter().map(|&r| field.cert_sample(r)).collect();
    for &n in &config.n_list {
        let cert = certifier::certify(&samples, n)?;
        println!(
            "n = {}: infimum = {:.6e} at rho0 = {:.4}, holds = {}, horizon = {:.6}",
            cert.n, cert.infimum, cert.argmin_rho, cert.holds, cert.horizon
        );
    }
    Ok(())
}

fn run_blowup(flags: &ConfigFlags) -> Result<()> {
    let config = resolve_config(flags)?;
    let field = config.pulse()?;
    let report = experiments::find_blowup(
        &field,
        config.half_width(),
        config.d_rho_coarse,
        config.d_rho_fine,
        config.d_theta,
        config.theta_cap,
    )?;
    match report.t_br {
        Some(t) => {
            println!("T_br = {t:.6}");
            for (rho, label) in report.rho_br.iter().zip(report.rho0_star.iter()) {
                println!("rho_br = {rho:.6} (label rho0 = {label:.6})");
            }
        }
        None => println!("no blow-up detected within horizon"),
    }
    Ok(())
}

fn run_reproduce(k: u32, output_dir: Option<&PathBuf>) -> Result<()> {
    let artifacts = scenario::reproduce_variant(k, output_dir.map(|p| p.as_path()))?;
    println!("variant {k}");
    print_artifacts(&artifacts);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Simulate(flags) => run_simulate(flags),
        Cmd::Certify(flags) => run_certify(flags),
        Cmd::Blowup(flags) => run_blowup(flags),
        Cmd::Reproduce { k, output_dir } => run_reproduce(*k, output_dir.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                PlasmaError::SimpleWave => 3,
                PlasmaError::IntegratorFailure { .. } => 4,
                _ => 2,
            })
        }
    }
}
