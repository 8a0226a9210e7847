use std::process::ExitCode;

use clap::Parser;
use koszul::{execute, Cli};
use serde_json::json;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match execute(&cli, &argv) {
        Ok(out) => {
            print!("{}", out.render(cli.global.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let payload = json!({"schema": koszul::report::SCHEMA, "command": argv, "error": e.to_json()});
            println!("{}", serde_json::to_string_pretty(&payload).expect("errors serialize"));
            eprintln!("koszul: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
