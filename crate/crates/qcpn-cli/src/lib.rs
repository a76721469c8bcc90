//! Library side of the `qcpn` binary: expression parser, configuration,
//! report rendering and command dispatch.

pub mod cli;
pub mod commands;
pub mod config;
pub mod parse;
pub mod report;

pub use commands::{run, CliError, Output};
pub use parse::{parse_expr, parse_raw, ParseError};

use std::time::Instant;

/// Run a parsed command line and return (stdout text, exit code) or an error.
pub fn execute(args: &cli::Cli) -> Result<(String, i32), CliError> {
    let file = match &args.global.config {
        Some(path) => config::load_config(path).map_err(|e| CliError::Usage(e.to_string()))?,
        None => Default::default(),
    };
    let flags = config::Overrides {
        q0: args.global.q0,
        m_max: args.global.m_max,
        l_max: args.global.l_max,
        tol: args.global.tol,
        threads: None,
    };
    let settings = config::Settings::merge(&file, &flags).map_err(CliError::Usage)?;
    init_threads(settings.threads);
    let start = Instant::now();
    match run(&args.command, &settings)? {
        Output::Raw(text) => Ok((text, 0)),
        Output::Report(mut r) => {
            if args.global.timing {
                r.meta("wall_time_s", format!("{:.3}", start.elapsed().as_secs_f64()));
            }
            let code = if r.pass() { 0 } else { 1 };
            Ok((r.render(args.global.format()), code))
        }
    }
}

/// Size the global worker pool: QCPN_THREADS caps the configured count.
fn init_threads(configured: Option<usize>) {
    let env = std::env::var("QCPN_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&t| t > 0);
    let threads = match (env, configured) {
        (Some(e), Some(c)) => Some(e.min(c)),
        (e, c) => e.or(c),
    };
    if let Some(t) = threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}
