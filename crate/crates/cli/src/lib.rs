//! Command-line front end: the system-definition language, model
//! resolution, commands and reports.

pub mod commands;
pub mod dsl;
pub mod fixtures;
pub mod model;
pub mod report;
pub mod selftest;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::Parser;
use serde_json::json;

use commands::{execute, Cli, CliError};

/// Runs the program on `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let pretty = cli.global.pretty;
    let spec = cli.global.spec.clone();
    let source = spec
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "<args>".into());

    let (echo, outcome) = match catch_unwind(AssertUnwindSafe(|| execute(cli))) {
        Ok(r) => r,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            let _ = writeln!(err, "internal error: {msg}");
            let body = report::error_json(&json!(null), "internal", &msg);
            let _ = write!(out, "{}", report::render_value(&body, pretty));
            return 2;
        }
    };
    match outcome {
        Ok(o) => {
            let _ = write!(out, "{}", o.report.render(pretty));
            o.exit
        }
        Err(e) => {
            let code = e.exit_code();
            let body = match &e {
                CliError::Diagnostics(diags) => {
                    for d in diags {
                        let _ = writeln!(err, "{source}:{d}");
                    }
                    report::diagnostics_json(&echo, diags)
                }
                CliError::Usage(m) => {
                    let _ = writeln!(err, "error: {m}");
                    report::error_json(&echo, "usage", m)
                }
                CliError::Io(m) => {
                    let _ = writeln!(err, "error: {m}");
                    report::error_json(&echo, "io", m)
                }
                CliError::Core(c) => {
                    let kind = if code == 2 { "internal" } else { "domain" };
                    let _ = writeln!(err, "error: {c}");
                    report::error_json(&echo, kind, &c.to_string())
                }
            };
            let _ = write!(out, "{}", report::render_value(&body, pretty));
            code
        }
    }
}
