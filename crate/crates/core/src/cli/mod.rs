//! Configuration-driven batch runner behind the `relsusy` binary.
//!
//! See `docs/reports.md` for the report layout and the CSV columns.

pub mod config;
pub mod output;
pub mod run;

pub use config::{ConfigError, RunConfig};
pub use run::{run_command, Command, CommandResult, ExitCode};

/// Runs `command` on a JSON configuration string and returns the exit code
/// together with the full report document.
pub fn run_json(command: &str, config_json: &str) -> (u8, String) {
    let Some(command) = Command::parse(command) else {
        return (ExitCode::Config.code(), config_error(&format!("unknown command {command:?}")));
    };
    let cfg = match RunConfig::from_json(config_json) {
        Ok(c) => c,
        Err(e) => return (ExitCode::Config.code(), config_error(&e.to_string())),
    };
    let results = run_command(command, &cfg);
    let payload = output::payload(command, &cfg, &results);
    (payload.exit_code, output::report_json(&payload))
}

fn config_error(message: &str) -> String {
    serde_json::json!({ "error": { "kind": "config", "message": message } }).to_string()
}
