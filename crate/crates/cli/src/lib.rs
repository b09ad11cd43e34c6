//! Command-line front end for `falva-core`: key=value problem files,
//! sampled path and field files, fixed-format CSV output and alpha sweeps.

pub mod args;
pub mod csv_out;
mod error;
pub mod fields;
pub mod run;
pub mod spec;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use error::CliError;
pub use spec::{Form, Kind, ProblemSpec, RawSpec};

use args::Cli;

/// Builds the validated spec for one invocation.
pub fn load_spec(cli: &Cli) -> Result<ProblemSpec, CliError> {
    let (kind, flags, of) = cli.command.kind_and_flags();
    let mut raw = match &flags.spec {
        Some(path) => RawSpec::from_file(path)?,
        None => RawSpec::default(),
    };
    raw.merge_flags(flags);
    ProblemSpec::from_raw(kind, of, &raw)
}

/// Entry point shared by the binary and the tests; returns the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(stderr, "FALVA-ERR 2: {msg}");
            return 2;
        }
    };
    match load_spec(&cli).and_then(|spec| run::execute(&spec, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.diagnostic());
            e.exit_code()
        }
    }
}
