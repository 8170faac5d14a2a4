use std::process::ExitCode;

use clap::Parser;
use comax::cli::{emit, run, Args, RunConfig, EXIT_INPUT};

fn main() -> ExitCode {
    let args = Args::parse();
    let command = args.command;
    let config = match RunConfig::try_from(args) {
        Ok(config) => config,
        Err(e) => {
            let diagnostic = serde_json::json!({
                "command": command.name(),
                "error": { "kind": "usage", "message": e.to_string() },
            });
            println!("{}", serde_json::to_string_pretty(&diagnostic).unwrap());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let outcome = run(&config);
    if let Err(e) = emit(&config, &outcome) {
        eprintln!("comax: cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    ExitCode::from(outcome.exit_code)
}
