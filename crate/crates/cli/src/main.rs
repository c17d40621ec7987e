use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use cso_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let result = run(&cli, &command).and_then(|mut output| {
        if cli.timing {
            output.report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
        }
        emit(&cli, &output, &mut std::io::stdout().lock())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
