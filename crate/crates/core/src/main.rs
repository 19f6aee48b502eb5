use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use relsusy::cli::{output, run_command, Command, RunConfig};

/// Verification suites for supersymmetric relativistic Landau Hamiltonians.
#[derive(Parser, Debug)]
#[command(name = "relsusy", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Report path; overrides `output.json_path`. Without either the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Spectrum table path; overrides `output.csv_path`.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Suppress the summary and the stdout report.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("relsusy: {e}");
            return ExitCode::from(2);
        }
    };

    let results = run_command(args.command, &cfg);
    let payload = output::payload(args.command, &cfg, &results);
    let code = payload.exit_code;

    for r in &results {
        if let Some(d) = &r.error {
            eprintln!("relsusy: {} error in {}: {}", d.kind, d.check, d.message);
        }
        if !args.quiet {
            for rep in &r.reports {
                for e in rep.entries.iter().filter(|e| !e.pass) {
                    eprintln!(
                        "  FAIL {}.{}.{}: {:.3e} vs {:.1e}",
                        r.command.name(),
                        rep.title,
                        e.name,
                        e.residual,
                        e.tolerance
                    );
                }
            }
            let status = match r.exit_code {
                0 => "PASS",
                1 => "FAIL",
                _ => "ERROR",
            };
            eprintln!("{:<13} {status}", r.command.name());
        }
    }

    let report = output::report_json(&payload);
    let json_path = args.out.or(cfg.output.json_path.clone());
    match json_path {
        Some(p) => {
            if let Err(e) = output::write_atomic(&p, &report) {
                eprintln!("relsusy: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None if !args.quiet => print!("{report}"),
        None => {}
    }

    if let Some(p) = args.csv.or(cfg.output.csv_path.clone()) {
        let rows: Vec<_> = results.iter().filter_map(|r| r.rows.as_ref()).flatten().copied().collect();
        if let Err(e) = output::write_atomic(&p, &output::csv_table(&rows)) {
            eprintln!("relsusy: cannot write {}: {e}", p.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
