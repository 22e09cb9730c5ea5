use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracfact_cli::config::{Format, Overrides, RunConfig};
use fracfact_cli::{commands, Result};

#[derive(Parser)]
#[command(
    name = "fracfact",
    version,
    about = "Ladder operators, states and energies of the fractional oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Momentum and position samples of φₙ as CSV.
    States(Common),
    /// Local energy curves E_n(k) as CSV, with exclusion metadata.
    Energies(Common),
    /// Run the identity suite and write verification_report.json.
    Verify(Common),
    /// Six-panel wavefunction and energy figure as SVG plus CSV.
    Figure(Common),
    /// Print conventions, defaults and exit codes.
    Info,
}

#[derive(Args)]
struct Common {
    /// Comma-separated α values in (1, 2].
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Comma-separated excitation levels.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Momentum half-width of the grid.
    #[arg(long)]
    k_max: Option<f64>,
    /// Grid points, a power of two.
    #[arg(long)]
    points: Option<usize>,
    /// Uniform tolerance replacing every per-check default.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated output formats: csv, svg, json.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use the printed E₂ instead of the form reproduced by Hφ₂/φ₂.
    #[arg(long)]
    paper_verbatim_e2: bool,
    /// Add reference curves to the figure.
    #[arg(long)]
    overlay: bool,
}

impl Common {
    fn resolve(self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        let flags = Overrides {
            alpha: self.alpha,
            n: self.n,
            k_max: self.k_max,
            points: self.points,
            tol: self.tol,
            out: self.out,
            format: self.format,
            paper_verbatim_e2: self.paper_verbatim_e2.then_some(true),
            overlay: self.overlay.then_some(true),
        };
        file.merged_with(flags).into_config()
    }
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::States(c) => print_written(&commands::states(&c.resolve()?)?),
        Command::Energies(c) => print_written(&commands::energies(&c.resolve()?)?),
        Command::Figure(c) => print_written(&commands::figure(&c.resolve()?)?),
        Command::Verify(c) => {
            let config = c.resolve()?;
            let report = commands::verify(&config)?;
            print!("{}", report.summary(config.paper_verbatim_e2));
            commands::require_pass(&report)?;
        }
        Command::Info => print!("{}", commands::info()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
