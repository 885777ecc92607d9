use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sqrtx::NormKind;
use sqrtx_cli::commands::{self, QUAD_NODES_VAR};
use sqrtx_cli::verify::RunConfig;
use sqrtx_cli::{CliError, Outcome};

#[derive(Parser)]
#[command(name = "sqrtx", version, about = "Square roots of SPD matrices, their derivatives and Taylor bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Principal square root and the residual ||S^2 - A||_F
    Sqrt { a: PathBuf },
    /// Directional derivatives of orders 1..=n at A along H
    Frechet {
        a: PathBuf,
        h: PathBuf,
        #[arg(long, short = 'n', default_value_t = 1)]
        order: usize,
    },
    /// Taylor approximation of sqrt(A + H) with its remainder bound, as JSON
    Taylor {
        a: PathBuf,
        h: PathBuf,
        #[arg(long, short = 'n', default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = NormKind::Spectral)]
        norm: NormKind,
    },
    /// Randomized check of every bound and oracle, summarized as JSON
    Verify {
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 10)]
        dim_max: usize,
        #[arg(long, default_value_t = 0.3)]
        rho: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long, default_value_t = 0.1)]
        lambda_lo: f64,
        #[arg(long, default_value_t = 10.0)]
        lambda_hi: f64,
        #[arg(long, default_value_t = 1.0, hide = true)]
        bound_scale: f64,
    },
}

fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Sqrt { a } => commands::sqrt(&a),
        Command::Frechet { a, h, order } => commands::frechet(&a, &h, order),
        Command::Taylor { a, h, order, norm } => commands::taylor(&a, &h, order, norm),
        Command::Verify {
            cases,
            dim_max,
            rho,
            seed,
            max_order,
            lambda_lo,
            lambda_hi,
            bound_scale,
        } => {
            let mut config = RunConfig {
                cases,
                dim_max,
                rho,
                seed,
                max_order,
                lambda_lo,
                lambda_hi,
                bound_scale,
                ..RunConfig::default()
            };
            let nodes = std::env::var(QUAD_NODES_VAR).ok();
            commands::apply_quad_nodes(&mut config, nodes.as_deref())?;
            commands::verify(&config)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
