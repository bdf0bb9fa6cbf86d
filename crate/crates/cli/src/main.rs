use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toprt_cli::scenarios::{self, Scenario};
use toprt_core::protocol::decode_inputs;
use toprt_core::session::replay;
use toprt_server::{visualize_task, ServerConfig};

#[derive(Parser)]
#[command(name = "toprt", version, about = "Run task-oriented example workflows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in examples.
    List,
    /// Serve an example over HTTP.
    Serve {
        #[arg(long)]
        example: String,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = "PORT", default_value_t = 3000)]
        port: u16,
        #[arg(long, default_value = "web/dist")]
        assets_dir: PathBuf,
    },
    /// Replay a JSON array of inputs and print the final description.
    Script {
        #[arg(long)]
        example: String,
        #[arg(long)]
        inputs: PathBuf,
    },
}

fn lookup(name: &str) -> Result<Scenario, ExitCode> {
    scenarios::find(name).ok_or_else(|| {
        eprintln!(
            "unknown example {name:?}; available: {}",
            scenarios::names().join(", ")
        );
        ExitCode::from(2)
    })
}

fn script(scenario: &Scenario, path: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return ExitCode::from(1);
        }
    };
    let inputs = match decode_inputs(&text) {
        Ok(inputs) => inputs,
        Err(e) => {
            eprintln!("{}: {}: {e}", path.display(), e.code());
            return ExitCode::from(1);
        }
    };
    match replay(&scenario.program, &inputs) {
        Ok(descriptions) => {
            let last = match descriptions.last() {
                Some(d) => d.clone(),
                None => match toprt_core::Session::new(scenario.program.clone()).initial() {
                    Ok(d) => d,
                    Err(e) => {
                        eprintln!("initial task: {}: {e}", e.code());
                        return ExitCode::from(1);
                    }
                },
            };
            println!("{last}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            match e.step {
                Some(step) => eprintln!("step {step}: {}: {}", e.error.code(), e.error),
                None => eprintln!("initial task: {}: {}", e.error.code(), e.error),
            }
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for name in scenarios::names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Script { example, inputs } => match lookup(&example) {
            Ok(scenario) => script(&scenario, &inputs),
            Err(code) => code,
        },
        Command::Serve {
            example,
            host,
            port,
            assets_dir,
        } => {
            let scenario = match lookup(&example) {
                Ok(s) => s,
                Err(code) => return code,
            };
            tracing_subscriber::fmt()
                .with_writer(std::io::stderr)
                .init();
            let config = ServerConfig {
                host,
                port,
                assets_dir,
            };
            let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
            match runtime.block_on(visualize_task(scenario.program, config)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
