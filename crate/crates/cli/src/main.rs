use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qlmc::Tolerances;
use qlmc_cli::spec::{parse_n_list, parse_q_grid, parse_q_list};
use qlmc_cli::{
    cmd_density, cmd_molecules_list, cmd_sweep, cmd_table1, CliError, Config, Output, Settings, SweepOverrides,
};

#[derive(Parser)]
#[command(
    name = "qlmc",
    version,
    about = "Entropy, disequilibrium and LMC complexity of q-deformed eigenstates"
)]
struct Cli {
    /// absolute quadrature tolerance (overrides the per-measure defaults)
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// relative quadrature tolerance
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// fail when table1 deviates from the published values
    #[arg(long, global = true)]
    strict: bool,
    /// write CSV here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON sweep definition; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// S, D, C for n in {0, 5, 10} and q in {0.001, 0.4, 1}
    Table1,
    /// one CSV row per (n, q)
    Sweep(GridArgs),
    /// long-format density samples per (n, q)
    Density(GridArgs),
    /// molecule registry
    Molecules {
        #[command(subcommand)]
        action: MoleculesAction,
    },
}

#[derive(Subcommand)]
enum MoleculesAction {
    List,
}

#[derive(Args)]
struct GridArgs {
    /// qho or morse
    #[arg(long)]
    system: Option<String>,
    /// molecule name for morse (HCl, H2 or one from the config)
    #[arg(long)]
    molecule: Option<String>,
    /// quantum numbers, e.g. 0,5,10 or 1..7
    #[arg(long)]
    n: Option<String>,
    /// q values, e.g. 0.35,0.5,1
    #[arg(long, conflicts_with = "q_grid")]
    q: Option<String>,
    /// evenly spaced q values start:end:count
    #[arg(long)]
    q_grid: Option<String>,
    /// comma-separated: measures, energies, uncertainty
    #[arg(long)]
    outputs: Option<String>,
    /// samples per density slice
    #[arg(long)]
    points: Option<usize>,
}

impl GridArgs {
    fn overrides(self) -> Result<SweepOverrides, CliError> {
        let q = match (self.q, self.q_grid) {
            (Some(q), _) => Some(parse_q_list(&q)?),
            (None, Some(g)) => Some(parse_q_grid(&g)?),
            (None, None) => None,
        };
        let outputs = self
            .outputs
            .map(|o| o.split(',').map(str::parse).collect::<Result<Vec<Output>, _>>())
            .transpose()?;
        Ok(SweepOverrides {
            system: self.system,
            molecule: self.molecule,
            n: self.n.as_deref().map(parse_n_list).transpose()?,
            q,
            outputs,
            points: self.points,
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let abs_tol = cli.abs_tol.or(cfg.abs_tol);
    let rel_tol = cli.rel_tol.or(cfg.rel_tol);
    let tol = match (abs_tol, rel_tol) {
        (None, None) => Tolerances::default(),
        (a, r) => {
            let d = Tolerances::default();
            Tolerances::uniform(a.unwrap_or(d.density.abs_tol), r.unwrap_or(d.density.rel_tol))
        }
    };
    if !(tol.density.abs_tol > 0.0 && tol.density.rel_tol > 0.0) {
        return Err(CliError::Spec("tolerances must be positive".into()));
    }
    let settings = Settings {
        tol,
        strict: cli.strict,
    };

    let (csv, deviations) = match cli.command {
        Command::Table1 => cmd_table1(&settings)?,
        Command::Sweep(args) => {
            let spec = args.overrides()?.resolve(&cfg, &[Output::Measures])?;
            (cmd_sweep(&spec, &settings)?, vec![])
        }
        Command::Density(args) => {
            let spec = args.overrides()?.resolve(&cfg, &[Output::Density])?;
            (cmd_density(&spec, &settings)?, vec![])
        }
        Command::Molecules {
            action: MoleculesAction::List,
        } => (cmd_molecules_list(&cfg.registry())?, vec![]),
    };

    match &cli.out {
        Some(path) => std::fs::write(path, csv.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
        None => std::io::stdout()
            .lock()
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    if !deviations.is_empty() {
        return Err(CliError::Deviation(deviations));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
