//! `hedgehog`: command-line front end for `hedgehog-core`.
//!
//! Exit codes: 0 success, 2 usage error, 3 computation error, 4 failed
//! acceptance check (or a replay whose output differs).

mod args;
mod commands;
mod manifest;
mod table;

use std::io::{IsTerminal, Write as _};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, ReplayArgs};
use commands::{Ctx, Report};
use manifest::{manifest_path, RunManifest};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Computation(hedgehog_core::Error),
    Io(String),
}

impl From<hedgehog_core::Error> for CliError {
    fn from(e: hedgehog_core::Error) -> Self {
        CliError::Computation(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Computation(_) | CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Computation(e) => write!(f, "computation error: {e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("hedgehog: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs the command; `Ok(false)` signals a failed check.
fn execute(cli: &Cli) -> Result<bool, CliError> {
    if let Command::Replay(a) = &cli.command {
        return replay(a);
    }
    let ctx = Ctx {
        format: cli.output.format(),
        digits: cli.output.digits,
        stream: cli.output.out.is_none() && std::io::stdout().is_terminal(),
    };
    let report = commands::run(&cli.command, &ctx)?;
    match &cli.output.out {
        Some(path) => {
            write_file(path, &report.body)?;
            let m = manifest_for(cli, path);
            let json = serde_json::to_string_pretty(&m).map_err(|e| CliError::Io(e.to_string()))?;
            write_file(&manifest_path(path), &(json + "\n"))?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(report.body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(!report.failed_check)
}

fn manifest_for(cli: &Cli, out: &Path) -> RunManifest {
    let mut parameters = cli.command.parameters();
    parameters.insert("format".into(), cli.output.format().name().into());
    parameters.insert("digits".into(), cli.output.digits.to_string());
    RunManifest {
        command: cli.command.name().to_string(),
        parameters,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cli.command.seed(),
        outputs: vec![out.display().to_string()],
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Re-runs a manifest's command and compares with (or rewrites) its output.
fn replay(a: &ReplayArgs) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&a.manifest)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.manifest.display())))?;
    let m: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.manifest.display())))?;
    let recorded = Cli::try_parse_from(m.argv())
        .map_err(|e| CliError::Usage(format!("manifest arguments: {e}")))?;
    if matches!(recorded.command, Command::Replay(_)) {
        return Err(CliError::Usage("a manifest cannot record a replay".into()));
    }
    let ctx = Ctx {
        format: recorded.output.format(),
        digits: recorded.output.digits,
        stream: false,
    };
    let Report { body, .. } = commands::run(&recorded.command, &ctx)?;
    let Some(output) = m.outputs.first() else {
        return Err(CliError::Usage("manifest lists no outputs".into()));
    };
    if m.tool_version != env!("CARGO_PKG_VERSION") {
        eprintln!(
            "hedgehog: manifest written by version {}, replaying with {}",
            m.tool_version,
            env!("CARGO_PKG_VERSION")
        );
    }
    if a.write {
        write_file(Path::new(output), &body)?;
        println!("wrote {output}");
        return Ok(true);
    }
    let previous =
        std::fs::read_to_string(output).map_err(|e| CliError::Io(format!("{output}: {e}")))?;
    if previous == body {
        println!("identical: {output}");
        Ok(true)
    } else {
        println!("differs: {output}");
        Ok(false)
    }
}
