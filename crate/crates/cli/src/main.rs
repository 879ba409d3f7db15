use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pseudodot::Scenario;
use pseudodot_cli::{run, CliError, Command, Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "pseudodot", version, about = "Bound states of the pseudo-dot confinement")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Flat key=value file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// exact or approx
    #[arg(long, global = true)]
    scenario: Option<Scenario>,

    /// Well depth in fm^-1, repeatable
    #[arg(long = "De", global = true)]
    de: Vec<f64>,

    #[arg(long, global = true)]
    r0: Option<f64>,

    #[arg(long, global = true)]
    m0: Option<f64>,

    #[arg(long, global = true)]
    nmax: Option<u32>,

    #[arg(long, global = true)]
    lmax: Option<u32>,

    /// Number of interior oracle grid points
    #[arg(long = "grid-points", global = true)]
    grid_points: Option<usize>,

    /// Outer edge of the oracle grid, fm
    #[arg(long, global = true)]
    rmax: Option<f64>,

    /// csv or json
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Relative perturbation injected into the verification inputs
    #[arg(long, global = true)]
    perturb: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Energy table with oracle cross-check
    Spectrum,
    /// Normalised radial densities
    Density,
    /// Effective potentials at the solved energies
    Effpot,
    /// Run the invariant checks and write a report
    Verify,
    /// Regenerate every plotted data set and the comparison report
    ReproduceFigures,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Density => Command::Density,
            Cmd::Effpot => Command::Effpot,
            Cmd::Verify => Command::Verify,
            Cmd::ReproduceFigures => Command::ReproduceFigures,
        }
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = cli.scenario {
        cfg.scenario = s;
    }
    if !cli.de.is_empty() {
        cfg.depths = cli.de.clone();
    }
    macro_rules! apply {
        ($($field:ident => $target:ident),*) => {
            $(if let Some(v) = cli.$field.clone() { cfg.$target = v; })*
        };
    }
    apply!(r0 => r0, m0 => m0, nmax => n_max, lmax => l_max, grid_points => grid_points,
        rmax => r_max, format => format, out => out, perturb => perturb);
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let command = Command::from(cli.command);
    match run(command, &cfg) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if outcome.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &outcome.failures {
                    eprintln!("{command}: {f}");
                }
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
