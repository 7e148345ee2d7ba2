use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bphs_cli::commands::{cmd_check, cmd_derive, cmd_simulate, cmd_study, ReportFormat};
use bphs_cli::systemfile::{from_builtin, load_file, set_param, SimSettings, SystemDefinition};
use bphs_cli::CliError;
use bphs_core::rational::parse_rational;

/// Boundary port-Hamiltonian systems: derivation and simulation.
#[derive(Parser)]
#[command(name = "bphs", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SourceArgs {
    /// Path to a system-definition JSON file.
    #[arg(long)]
    system: Option<PathBuf>,
    /// Builtin preset name: rod_symplectic, rod_first_order, rod_nonlocal.
    #[arg(long)]
    builtin: Option<String>,
    /// Material parameters, e.g. --param k=1,T=1,rhoA=1,mu=1/20.
    #[arg(long)]
    param: Vec<String>,
}

#[derive(Args)]
struct SimArgs {
    /// Number of grid cells (overrides the file's sim.N).
    #[arg(long = "N")]
    n: Option<usize>,
    /// Time step (overrides sim.dt).
    #[arg(long)]
    dt: Option<f64>,
    /// Final time (overrides sim.t_end).
    #[arg(long)]
    t_end: Option<f64>,
    /// Finite-difference scheme order: 2 or 4 (overrides sim.scheme_order).
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Tree,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate the structural invariants of a system definition.
    Check {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Compute and print the derived boundary structures.
    Derive {
        #[command(flatten)]
        source: SourceArgs,
        /// Output format when printing to stdout.
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Directory receiving derive.txt and derive.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a simulation with the energy-balance audit and write the CSV.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Output directory for audit.csv.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Fail (exit 4) if the max relative balance residual exceeds this.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the {N, 2N, 4N} x {dt, dt/2, dt/4} refinement grid.
    Study {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
}

fn load(source: &SourceArgs) -> Result<SystemDefinition, CliError> {
    let mut def = match (&source.system, &source.builtin) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation("--system and --builtin are mutually exclusive".into()))
        }
        (Some(path), None) => load_file(path)?,
        (None, Some(name)) => from_builtin(
            name,
            name.clone(),
            Default::default(),
            (0.0, 1.0),
            bphs_core::sim::model::BoundaryCondition::Clamped,
            bphs_core::sim::model::BoundaryCondition::Clamped,
            SimSettings::default(),
        )?,
        (None, None) => {
            return Err(CliError::Validation("no system given: pass --system <path> or --builtin <name>".into()))
        }
    };
    let overrides: Vec<&str> = source
        .param
        .iter()
        .flat_map(|p| p.split(','))
        .filter(|s| !s.is_empty())
        .collect();
    if !overrides.is_empty() {
        let mut params = def.params.clone();
        for item in overrides {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("--param item \"{item}\" is not name=value")))?;
            let r = parse_rational(value.trim())
                .map_err(|e| CliError::Parse(format!("--param {name}: {e}")))?;
            set_param(&mut params, name.trim(), r)?;
        }
        def = match def.preset {
            Some(preset) => from_builtin(
                preset.name(),
                def.name,
                params,
                def.domain,
                def.bc_a,
                def.bc_b,
                def.sim,
            )?,
            None => {
                return Err(CliError::Validation(
                    "--param only applies to builtin preset systems".into(),
                ))
            }
        };
    }
    Ok(def)
}

fn apply_sim_args(def: &mut SystemDefinition, sim: &SimArgs) -> Result<(), CliError> {
    if let Some(n) = sim.n {
        def.sim.n_cells = n;
    }
    if let Some(dt) = sim.dt {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(CliError::Validation(format!("--dt must be positive, got {dt}")));
        }
        def.sim.dt = dt;
    }
    if let Some(t_end) = sim.t_end {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(CliError::Validation(format!("--t-end must be positive, got {t_end}")));
        }
        def.sim.t_end = t_end;
    }
    if let Some(order) = sim.order {
        if order != 2 && order != 4 {
            return Err(CliError::Validation(format!("--order must be 2 or 4, got {order}")));
        }
        def.sim.order = order;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Check { source } => cmd_check(&load(&source)?),
        Cmd::Derive { source, format, out } => {
            let fmt = match format {
                Format::Text => ReportFormat::Text,
                Format::Tree => ReportFormat::Tree,
            };
            cmd_derive(&load(&source)?, fmt, out.as_deref())
        }
        Cmd::Simulate { source, sim, out, tol } => {
            let mut def = load(&source)?;
            apply_sim_args(&mut def, &sim)?;
            cmd_simulate(&def, &out, tol)
        }
        Cmd::Study { source, sim } => {
            let mut def = load(&source)?;
            apply_sim_args(&mut def, &sim)?;
            cmd_study(&def)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bphs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
