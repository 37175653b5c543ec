use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nullkan::cli::{run, CheckKind, Command, Input, RunOptions};

#[derive(Parser)]
#[command(name = "nullkan", version, about = "Lift nullity structures along comma categories and check the results")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Spec file to load.
    #[arg(long, global = true, conflicts_with = "model")]
    spec: Option<PathBuf>,
    /// Builtin model: identity, f2_trivial, f2_proper, injections_card_1.
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on search steps and minimality candidates.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    #[arg(long, global = true)]
    text: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the setup assumptions and category laws.
    Validate,
    /// Run the pipeline and print the nullity structures.
    Construct,
    /// Run one verifier.
    Check { which: Which },
    /// Compare the pipeline with the direct max-min formula.
    OracleCompare,
    /// Dump the comma categories and slice sizes.
    Materialize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Thm1,
    Thm3,
    Ext,
    Lemmas,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Validate => Command::Validate,
        Cmd::Construct => Command::Construct,
        Cmd::Check { which } => Command::Check(match which {
            Which::Thm1 => CheckKind::Thm1,
            Which::Thm3 => CheckKind::Thm3,
            Which::Ext => CheckKind::Ext,
            Which::Lemmas => CheckKind::Lemmas,
        }),
        Cmd::OracleCompare => Command::OracleCompare,
        Cmd::Materialize => Command::Materialize,
    };
    let input = match (&args.spec, &args.model) {
        (Some(path), _) => match std::fs::read(path) {
            Ok(bytes) => Input::Spec(bytes),
            Err(e) => {
                eprintln!("nullkan: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, Some(m)) => Input::Model(m.clone()),
        (None, None) => Input::None,
    };
    let mut opts = RunOptions {
        budget: args.budget,
        ..RunOptions::default()
    };
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    let report = run(command, &input, &opts);
    let body = if args.text { report.to_text() } else { report.to_json() };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("nullkan: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    for d in &report.diagnostics {
        eprintln!("nullkan: {d}");
    }
    ExitCode::from(report.exit_code() as u8)
}
