use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hktlab::scenario::{all_ok, render_json, render_text};
use hktlab::ctxfile::{shipped_context, SHIPPED};
use hktlab::{run_scenario, write_context, Params};

#[derive(Parser)]
#[command(name = "hktlab", version, about = "Exact verification of HKT and holomorphic Poisson identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification scenario.
    Verify {
        /// su3, su5, stem, stereo, eq2, duality, flat-twistor, section5, injectivity or all.
        scenario: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        /// Real value of the SU(3) family parameter (formal when omitted).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long)]
        chart: Option<u8>,
        /// Write the machine report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Keep elapsed times in the JSON report.
        #[arg(long)]
        timings: bool,
        /// Print both sides of every check.
        #[arg(long, short)]
        verbose: bool,
    },
    /// Print a shipped context in the context file format.
    Context {
        /// su3, sl2 or abelian2.
        name: String,
    },
}

fn color() -> bool {
    std::env::var("HKTLAB_COLOR").is_ok_and(|v| v == "1")
}

fn shipped(name: &str) -> Result<String, String> {
    match shipped_context(name) {
        Some(ctx) => ctx.map(|c| write_context(&c)).map_err(|e| e.to_string()),
        None => Err(format!("unknown context {name:?}; expected one of {}", SHIPPED.join(", "))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Context { name } => match shipped(&name) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Verify { scenario, m, ell, a, chart, json, seed, timings, verbose } => {
            let params = Params { m, ell, a, chart, seed };
            let reports = match run_scenario(&scenario, &params) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            print!("{}", render_text(&reports, color(), verbose));
            if let Some(path) = json {
                if let Err(e) = std::fs::write(&path, render_json(&scenario, &params, &reports, timings)) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if all_ok(&reports) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
