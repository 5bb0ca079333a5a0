use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use svel_cli::config::{parse_config, RunConfig};
use svel_cli::convergence::{self, run_convergence};
use svel_cli::driver;
use svel_cli::trend::{self, run_trend, SweepParam};

#[derive(Parser)]
#[command(name = "svel", about = "1-D shallow viscoelastic flow solver", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write snapshot/step CSV files.
    Run(CommonArgs),
    /// Run a grid-refinement study and report L1 distances.
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated ascending cell counts, each dividing the next.
        #[arg(long = "cell_list", default_value = "50,100,200,400")]
        cell_list: String,
    },
    /// Sweep eta_p or lambda and report front/contact positions.
    Trend {
        #[command(flatten)]
        common: CommonArgs,
        /// Swept parameter: eta_p or lambda.
        #[arg(long, default_value = "eta_p")]
        param: String,
        /// Comma-separated parameter values.
        #[arg(long, default_value = "0.1,10,1000")]
        values: String,
        /// Depth deviation that marks the front.
        #[arg(long = "front_threshold", default_value_t = 0.01)]
        front_threshold: f64,
    },
}

/// Flags mirror the configuration keys; values given here override the
/// configuration file.
#[derive(Args)]
struct CommonArgs {
    /// Path to a key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario number 1..=4 or 'custom'.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    cells: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long = "eta_p")]
    eta_p: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long = "t_final")]
    t_final: Option<String>,
    /// Comma-separated ascending times within [0, t_final].
    #[arg(long = "snapshot_times")]
    snapshot_times: Option<String>,
    #[arg(long = "output_dir")]
    output_dir: Option<String>,
    /// Boundary condition: neumann or periodic.
    #[arg(long)]
    bc: Option<String>,
    #[arg(long = "dt_floor")]
    dt_floor: Option<String>,
}

impl CommonArgs {
    fn build_config(&self) -> Result<RunConfig, String> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                parse_config(&text).map_err(|e| e.to_string())?
            }
            None => RunConfig::default(),
        };
        let overrides: [(&str, &Option<String>); 11] = [
            ("scenario", &self.scenario),
            ("cells", &self.cells),
            ("cfl", &self.cfl),
            ("g", &self.g),
            ("eta_p", &self.eta_p),
            ("lambda", &self.lambda),
            ("t_final", &self.t_final),
            ("snapshot_times", &self.snapshot_times),
            ("output_dir", &self.output_dir),
            ("bc", &self.bc),
            ("dt_floor", &self.dt_floor),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                config.apply(key, v).map_err(|e| e.to_string())?;
            }
        }
        Ok(config)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| format!("malformed {what} entry: '{p}'"))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run_command(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run(common) => {
            let resolved = common
                .build_config()?
                .resolve()
                .map_err(|e| e.to_string())?;
            let report = driver::run(&resolved).map_err(|e| e.to_string())?;
            println!(
                "completed {} steps to t = {}; min h = {:.3e}, min sigma = {:.3e}",
                report.steps, report.final_time, report.min_h, report.min_sigma
            );
            for path in &report.snapshots {
                println!("wrote {}", path.display());
            }
            println!("wrote {}", resolved.output_dir.join("steps.csv").display());
            if report.domain_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("invariant violation: negative depth or conformation observed");
                Ok(ExitCode::from(2))
            }
        }
        Command::Converge { common, cell_list } => {
            let resolved = common
                .build_config()?
                .resolve()
                .map_err(|e| e.to_string())?;
            let cells: Vec<usize> = parse_list(&cell_list, "cell_list")?;
            let rows = run_convergence(&resolved, &cells).map_err(|e| e.to_string())?;
            println!("coarse -> fine: L1(h), L1(hu), L1(h*sigma_xx), L1(h*sigma_zz)");
            for r in &rows {
                println!(
                    "{:>6} -> {:<6}: {:.6e}, {:.6e}, {:.6e}, {:.6e}",
                    r.coarse, r.fine, r.l1_h, r.l1_hu, r.l1_hsxx, r.l1_hszz
                );
            }
            std::fs::create_dir_all(&resolved.output_dir)
                .map_err(|e| format!("cannot create output dir: {e}"))?;
            let path = resolved.output_dir.join("convergence.csv");
            convergence::write_table(&path, &rows).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Trend {
            common,
            param,
            values,
            front_threshold,
        } => {
            let resolved = common
                .build_config()?
                .resolve()
                .map_err(|e| e.to_string())?;
            let param = SweepParam::parse(&param)
                .ok_or_else(|| format!("unknown sweep parameter '{param}'"))?;
            let values: Vec<f64> = parse_list(&values, "values")?;
            let rows = run_trend(&resolved, param, &values, front_threshold)
                .map_err(|e| e.to_string())?;
            println!(
                "{}: front_position, contact_position, contact_h_jump, contact_sxx_jump, contact_szz_jump",
                param.name()
            );
            for r in &rows {
                println!(
                    "{:>10.3e}: {:.4}, {:.4}, {:.6e}, {:.6e}, {:.6e}",
                    r.value,
                    r.front_position,
                    r.contact_position,
                    r.contact_h_jump,
                    r.contact_sxx_jump,
                    r.contact_szz_jump
                );
            }
            std::fs::create_dir_all(&resolved.output_dir)
                .map_err(|e| format!("cannot create output dir: {e}"))?;
            let path = resolved.output_dir.join("trend.csv");
            trend::write_table(&path, param, &rows).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
