use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmpass_cli::{load, run, Command, ConfigError, Overrides};

#[derive(Parser)]
#[command(name = "dmpass", version, about = "Mountain-pass solver and deformation harness for periodic difference systems")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Eigenvalues of the circulant second-difference matrix.
    Spectrum(Common),
    /// Condition checks and the coercivity / norm bounds.
    Check(Common),
    /// Pinned-path minimax, Newton polishing and catalog match.
    Solve(Common),
    /// Deformation verdicts on a toy landscape.
    Deform(Common),
    /// Multistart Newton catalog.
    Oracle(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to `output.dir` in the config, then `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    ensemble: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Check(a) => (Command::Check, a),
        Sub::Solve(a) => (Command::Solve, a),
        Sub::Deform(a) => (Command::Deform, a),
        Sub::Oracle(a) => (Command::Oracle, a),
    };
    let overrides = Overrides { seed: args.seed, ensemble: args.ensemble, eps: args.eps };
    let result = load(&args.config, &overrides).map_err(anyhow::Error::from).and_then(|cfg| {
        let out = args.out.clone().or_else(|| cfg.config.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
        run(command, &cfg, &out)
    });
    match result {
        Ok(o) => {
            println!("{}", o.report.display());
            for p in o.csv {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) if e.is::<ConfigError>() => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
