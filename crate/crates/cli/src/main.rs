use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod fair;
mod ftrs;
mod gen;
mod oracle;
mod report;

use args::{Cli, FairCmd, FtrsCmd, GenCmd, Group, OracleCmd};

const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_USAGE: u8 = 64;

fn report_path(g: &Group) -> Option<&std::path::PathBuf> {
    let out = match g {
        Group::Ftrs(FtrsCmd::Build { output, .. } | FtrsCmd::Verify { output, .. }) => output,
        Group::Fair(
            FairCmd::Closest { output, .. }
            | FairCmd::Consensus { output, .. }
            | FairCmd::Stream { output, .. }
            | FairCmd::FairfyCc { output, .. },
        ) => output,
        Group::Gen(GenCmd::Threepartition { output, .. } | GenCmd::Random { output, .. }) => output,
        Group::Oracle(
            OracleCmd::ClosestFair { output, .. }
            | OracleCmd::FairConsensus { output, .. }
            | OracleCmd::CcOpt { output, .. },
        ) => output,
    };
    out.report.as_ref()
}

fn threads(cli: &Cli) -> Result<Option<usize>, String> {
    let n = match cli.threads {
        Some(n) => n,
        None => match std::env::var("ROBUSTFAIR_THREADS") {
            Ok(v) => v.trim().parse().map_err(|_| format!("ROBUSTFAIR_THREADS={v:?} is not a count"))?,
            Err(_) => return Ok(None),
        },
    };
    if n == 0 {
        return Err("thread count must be positive".into());
    }
    Ok(Some(n))
}

fn run(cli: &Cli) -> Result<report::Outcome> {
    match &cli.command {
        Group::Ftrs(c) => ftrs::run(c),
        Group::Fair(c) => fair::run(c),
        Group::Gen(c) => gen::run(c),
        Group::Oracle(c) => oracle::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match threads(&cli) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let passed = outcome.passed;
    let elapsed = cli.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
    let json = outcome.into_json(elapsed);
    let text = serde_json::to_string_pretty(&json).expect("report serializes") + "\n";
    let written: Result<()> = match report_path(&cli.command) {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INPUT);
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed; see the report");
        ExitCode::from(EXIT_VERIFY)
    }
}
