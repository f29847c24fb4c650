mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;
use commands::Failure;
use report::{render, Header};

fn execute(cli: &Cli) -> Result<bool, Failure> {
    let input = commands::load(cli)?;
    let (report, ok) = commands::run(cli, &input)?;
    let th = commands::thresholds(cli);
    let header = Header {
        command: serde_json::to_value(&cli.command)
            .ok()
            .and_then(|v| match v {
                serde_json::Value::String(s) => Some(s),
                serde_json::Value::Object(o) => o.keys().next().cloned(),
                _ => None,
            })
            .unwrap_or_default(),
        config: commands::config_value(cli),
        thresholds: json!({
            "tau": th.tau,
            "last_windows": th.last_windows,
            "ladder_order": th.order,
            "monotone_slack": th.monotone_slack,
            "delta": cli.thresholds.delta,
            "cluster_tol": cli.thresholds.cluster_tol,
        }),
    };
    let bytes = render(&header, &report, cli.format).map_err(Failure::Analysis)?;
    match &cli.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| Failure::Input(e.to_string()))?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("adicscope: {}", f.message());
            ExitCode::from(f.code() as u8)
        }
    }
}
