mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::Value;

use commands::{dispatch, Command};

#[derive(Parser, Debug)]
#[command(
    name = "qsl2",
    version,
    about = "Exact checks for level-0 and level-1 modules of quantum affine sl2"
)]
struct Cli {
    /// Print the report as JSON with sorted keys.
    #[arg(long, global = true)]
    json: bool,
    /// Ledger file; defaults to $QSL2_LEDGER, then ./constants-ledger.json.
    #[arg(long, global = true)]
    ledger: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Machine-readable outcome of one run.
#[derive(Serialize)]
struct Report {
    command: String,
    parameters: Value,
    pass: bool,
    result: Value,
    error: Option<String>,
}

fn print_text(r: &Report) {
    println!("{}: {}", r.command, if r.pass { "PASS" } else { "FAIL" });
    if let Some(e) = &r.error {
        println!("error: {e}");
    }
    if let Value::Object(map) = &r.result {
        for (k, v) in map {
            match v {
                Value::String(s) => println!("{k}: {s}"),
                other => println!("{k}: {other}"),
            }
        }
    } else if !r.result.is_null() {
        println!("{}", r.result);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ledger = cli
        .ledger
        .clone()
        .unwrap_or_else(qsl2_core::ledger::Ledger::default_path);
    let name = cli.command.name().to_string();
    let parameters = cli.command.parameters();
    let (report, code) = match dispatch(&cli.command, &ledger) {
        Ok(out) => {
            let code = if out.pass { 0 } else { 1 };
            (
                Report {
                    command: name,
                    parameters,
                    pass: out.pass,
                    result: out.result,
                    error: None,
                },
                code,
            )
        }
        Err(e) => {
            let code = e.exit_code();
            (
                Report {
                    command: name,
                    parameters,
                    pass: false,
                    result: Value::Null,
                    error: Some(e.to_string()),
                },
                code,
            )
        }
    };
    if cli.json {
        let v = serde_json::to_value(&report).expect("report serializes");
        println!("{}", serde_json::to_string_pretty(&v).expect("value serializes"));
    } else {
        print_text(&report);
    }
    if let Some(e) = report.error.as_ref().filter(|_| !cli.json) {
        eprintln!("qsl2: {e}");
    }
    ExitCode::from(code)
}
