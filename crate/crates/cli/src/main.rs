//! `orbisurf` command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use orbisurf::io::{exit_code, fixture_listing, COMMANDS, DEFAULT_MAX_STEPS};
use orbisurf::{load_bundle, run_command, BundleSources, ConfigSource, CurveId, Error, Options, Rational};

#[derive(Parser, Debug)]
#[command(name = "orbisurf", version, about = "Exact computations on orbifold surface pairs")]
struct Cli {
    /// One of: validate, classify-curve, artin-test, discrep, b-discrep, classify-pair, mmp-run.
    command: Option<String>,

    /// Surface configuration file (JSON).
    #[arg(long, value_name = "FILE", conflicts_with = "fixture")]
    config: Option<PathBuf>,

    /// Use a built-in configuration instead of --config.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,

    /// Orbifold boundary file (JSON).
    #[arg(long, value_name = "FILE")]
    boundary: Option<PathBuf>,

    /// b-divisor ramification spec (JSON).
    #[arg(long, value_name = "FILE")]
    bdiv: Option<PathBuf>,

    /// List built-in configurations and exit.
    #[arg(long)]
    fixtures: bool,

    /// Blowup tower depth.
    #[arg(long, default_value_t = orbisurf::discrepancy::DEFAULT_DEPTH)]
    depth: usize,

    /// Threshold for the epsilon-classes, as a rational.
    #[arg(long, default_value = "1/10")]
    epsilon: Rational,

    /// Cycle enumeration bound as a multiple of the fundamental cycle.
    #[arg(long, default_value_t = orbisurf::contraction::DEFAULT_BOUND_MULTIPLIER)]
    bound_multiplier: u64,

    /// Step limit for mmp-run.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,

    /// Curve label; repeat to give a support.
    #[arg(long = "curve", value_name = "ID")]
    curves: Vec<String>,
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(err) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.fixtures {
        print!("{}", fixture_listing());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: no command given; expected one of {}", COMMANDS.join(", "));
        return ExitCode::from(2);
    };
    if !COMMANDS.contains(&command.as_str()) {
        return fail(&Error::UnknownCommand(command));
    }
    let config = match (cli.config, cli.fixture) {
        (Some(p), _) => ConfigSource::File(p),
        (None, Some(name)) => ConfigSource::Fixture(name),
        (None, None) => {
            return fail(&Error::InvalidArgument(
                "one of --config or --fixture is required".into(),
            ))
        }
    };
    let sources = BundleSources {
        config,
        boundary: cli.boundary,
        bdiv: cli.bdiv,
    };
    let options = Options {
        depth: cli.depth,
        epsilon: cli.epsilon,
        bound_multiplier: cli.bound_multiplier,
        max_steps: cli.max_steps,
        curves: cli.curves.into_iter().map(CurveId).collect(),
    };
    let bundle = match load_bundle(&sources, options) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    match run_command(&bundle, &command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
