use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use chow::cli::{json_requested, run, Cli};

fn command_name(cli: &Cli) -> &'static str {
    use chow::cli::Command::*;
    match cli.command {
        Chow { .. } => "chow",
        Principal { .. } => "principal",
        OrderInfo { .. } => "order-info",
        FindTrivial { .. } => "find-trivial",
        ConductorTest { .. } => "conductor-test",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = json_requested(&cli);
    let code = match run(&cli) {
        Ok(report) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("json values serialize"));
            } else {
                print!("{}", report.text);
            }
            report.code
        }
        Err(f) => {
            if as_json {
                let v = json!({ "command": command_name(&cli), "error": f.message, "exit_code": f.code });
                println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
            } else {
                eprintln!("error: {}", f.message);
            }
            f.code
        }
    };
    ExitCode::from(code as u8)
}
