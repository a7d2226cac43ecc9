use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use carrot_guide::cli;
use carrot_guide::io::Figure;

#[derive(Parser)]
#[command(name = "carrot-guide", version, about = "Carrot-chasing path-following guidance simulator")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fly a waypoint mission and write the trajectory CSV.
    Simulate {
        #[arg(long)]
        waypoints: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Write shortest round-trip floats instead of 9 significant digits.
        #[arg(long)]
        full_precision: bool,
    },
    /// Evaluate a (K, delta) grid and write one row per cell.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        full_precision: bool,
    },
    /// Rerun one of the reference scenarios (2, 3 or 4).
    ReplicateFigure {
        figure: Figure,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn run(args: Args) -> Result<()> {
    match args.command {
        Command::Simulate { waypoints, config, out, plot, full_precision } => {
            let record = cli::simulate(&waypoints, &config, &out, plot.as_deref(), full_precision)?;
            let m = &record.metrics;
            match m.steps_to_converge {
                Some(n) => println!("converged after {n} steps, max |e| = {:.4} m", m.max_abs_e),
                None if m.diverged => println!("diverged after {} samples", record.trajectory.len()),
                None => println!("not converged after {} samples", record.trajectory.len()),
            }
        }
        Command::Sweep { spec, out, plot, full_precision } => {
            let cells = cli::sweep(&spec, &out, plot.as_deref(), full_precision)?;
            println!("{} cells written to {}", cells.len(), out.display());
        }
        Command::ReplicateFigure { figure, out_dir } => {
            let run = cli::replicate(figure, &out_dir)?;
            println!("{}", run.svg.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) if !err.use_stderr() => err.exit(),
        Err(err) => {
            let rendered = err.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
