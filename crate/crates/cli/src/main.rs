use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use umtl_cli::args::Cli;
use umtl_cli::commands::{command_name, run};
use umtl_cli::report::{ReportDocument, Timings};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start workers: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match pool.install(|| run(&cli)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    print!("{}", outcome.text);
    if let Some(path) = &cli.json {
        let mut doc = ReportDocument::new(
            command_name(&cli.command),
            cli.u2_parse,
            outcome.inputs,
            outcome.code,
            outcome.result,
        );
        if cli.timings {
            doc.timings = Some(Timings {
                total_ms: start.elapsed().as_secs_f64() * 1000.0,
            });
        }
        if let Err(e) = fs::write(path, doc.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.code as u8)
}
