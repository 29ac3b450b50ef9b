use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::warn;
use splittrap_cli::spec::TG_PROXY_G;
use splittrap_cli::sweep::{render_levels, spectrum_levels};
use splittrap_cli::{g1d_from_physical, run_sweep, CliError, Format, Mode, PartialSpec, TrapUnits};

/// Ground-state properties of two bosons in a harmonic trap split by a
/// point barrier.
#[derive(Parser)]
#[command(name = "splittrap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-particle levels of the split trap.
    Spectrum {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Number of levels per barrier strength.
        #[arg(long, default_value_t = 6)]
        count: usize,
    },
    /// Hard-core (infinite g1d) pair from the exact mapping.
    Tonks(SweepArgs),
    /// Finite-g1d pair on the two-dimensional mesh.
    Dvr(SweepArgs),
    /// Sweep driven by a config file; the mode comes from `mode = ...` or --mode.
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        mode: Option<String>,
    },
    /// Scaled g1d from trap frequencies, mass and 3D scattering length.
    Units(UnitsArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Barrier strengths, comma separated; `inf` where allowed.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Contact strengths, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    g1d: Option<String>,
    #[arg(long)]
    n_points: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k_span: Option<String>,
    #[arg(long)]
    k_points: Option<String>,
    /// Comma-separated subset of energy, rspd, momentum, entropy, schmidt.
    #[arg(long)]
    outputs: Option<String>,
    /// Result table path; matrix and momentum files are written beside it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    workers: Option<String>,
}

impl SweepArgs {
    fn to_spec(&self, mode: Option<Mode>) -> Result<PartialSpec, CliError> {
        let base = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::validation(format!("cannot read {}: {e}", path.display()))
                })?;
                PartialSpec::from_config(&text)?
            }
            None => PartialSpec::default(),
        };
        let mut flags = PartialSpec {
            mode,
            out: self.out.clone(),
            ..Default::default()
        };
        let pairs = [
            ("kappa", &self.kappa),
            ("g1d", &self.g1d),
            ("n_points", &self.n_points),
            ("dx", &self.dx),
            ("k_span", &self.k_span),
            ("k_points", &self.k_points),
            ("outputs", &self.outputs),
            ("format", &self.format),
            ("workers", &self.workers),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v).map_err(|e| {
                    CliError::validation(format!("--{}: {}", key.replace('_', "-"), e.message()))
                })?;
            }
        }
        Ok(base.overridden_by(flags))
    }
}

#[derive(Args)]
struct UnitsArgs {
    /// Transverse trap frequency, rad/s.
    #[arg(long)]
    omega_perp: f64,
    /// Axial trap frequency, rad/s.
    #[arg(long)]
    omega: f64,
    /// Particle mass, kg.
    #[arg(long)]
    mass: f64,
    /// 3D s-wave scattering length, m.
    #[arg(long, allow_hyphen_values = true)]
    a3d: f64,
    #[arg(long)]
    format: Option<String>,
}

fn sweep(partial: PartialSpec) -> Result<(), CliError> {
    let spec = partial.finish()?;
    let (result, table) = run_sweep(&spec)?;
    if let Some(table) = table {
        print!("{table}");
    }
    match result.failures.len() {
        0 => Ok(()),
        n => Err(CliError::Solver(format!(
            "{n} of {} sweep points failed; see the failure manifest",
            spec.points().len()
        ))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum { sweep: args, count } => {
            let spec = args.to_spec(Some(Mode::Spectrum))?.finish()?;
            if count == 0 {
                return Err(CliError::validation("--count must be at least 1"));
            }
            let text = render_levels(&spectrum_levels(&spec.kappa_values, count)?, spec.format)?;
            match &spec.out {
                Some(path) => fs::write(path, text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Tonks(args) => sweep(args.to_spec(Some(Mode::Tonks))?),
        Command::Dvr(args) => {
            let mut partial = args.to_spec(Some(Mode::Dvr))?;
            if partial.map_infinite_g_to_proxy() {
                warn!("g1d = inf is not representable on the mesh; using g1d = {TG_PROXY_G} as the hard-core proxy");
            }
            sweep(partial)
        }
        Command::Sweep { sweep: args, mode } => {
            let mode = mode.map(|m| m.parse()).transpose()?;
            sweep(args.to_spec(mode)?)
        }
        Command::Units(args) => {
            let units = TrapUnits {
                omega_perp: args.omega_perp,
                omega: args.omega,
                mass: args.mass,
                a3d: args.a3d,
            };
            let format: Format = args
                .format
                .as_deref()
                .map(str::parse)
                .transpose()?
                .unwrap_or_default();
            let coupling = g1d_from_physical(&units)?;
            for w in &coupling.warnings {
                warn!("{w}");
            }
            match format {
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&coupling)
                            .map_err(|e| CliError::Io(e.to_string()))?
                    )
                }
                Format::Csv => {
                    println!("g1d,g1d_si,a1d,d,d_perp");
                    println!(
                        "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
                        coupling.g1d, coupling.g1d_si, coupling.a1d, coupling.d, coupling.d_perp
                    );
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
