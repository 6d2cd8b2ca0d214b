use std::fs;
use std::process::ExitCode;

use clap::Parser;
use nileta_cli::{enum_cap_from_env, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (text, code) = match enum_cap_from_env() {
        Ok(cap) => run(&RunConfig::from_cli(cli.clone(), cap)),
        Err(e) => (nileta_core::report::render(&e.to_json()), e.exit_code()),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("nileta: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if code != 0 {
        eprintln!("nileta: {} failed (exit {code})", cli.lattice);
    }
    ExitCode::from(code as u8)
}
