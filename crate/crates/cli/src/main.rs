mod args;
mod commands;
mod error;
mod figures;
mod output;

use clap::Parser;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use args::{Cli, Command};
use error::CliError;
use output::{Manifest, Metadata, Report};

fn run(cli: &Cli) -> Result<(), CliError> {
    let opts = &cli.opts;
    let outcome = match cli.command {
        Command::Symbol => commands::symbol(opts),
        Command::Gram => commands::gram(opts),
        Command::Block => commands::block(opts),
        Command::Spectrum => commands::spectrum(opts),
        Command::Decay => commands::decay(opts),
        Command::Circulant => commands::circulant(opts),
        Command::Framebounds => commands::framebounds(opts),
        Command::Figure => commands::figure(opts),
    }?;

    let timestamp = opts.stamp.then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let report = Report {
        manifest: Manifest {
            command: cli.command.name().to_string(),
            params: outcome.params,
            format: opts.format,
            output: opts.out.as_ref().map(|p| p.display().to_string()),
        },
        data: outcome.tables,
        metadata: Metadata {
            version: splinegram::VERSION.to_string(),
            tolerances: outcome.tolerances,
            timestamp,
            extra: outcome.meta,
        },
    };
    let stem = opts.figure.map(|id| format!("fig{id}"));
    let stem = match cli.command {
        Command::Figure => stem,
        _ => None,
    };
    for path in output::emit(&report, opts.out.as_deref(), stem.as_deref())? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("splinegram: {e}");
            e.exit_code()
        }
    }
}
