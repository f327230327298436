use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nicadil::scenario::{run_scenario_text, RunOptions, Verdict, REPORT_SCHEMA, SCENARIO_SCHEMA};

/// Builds and verifies truncated isometric dilations from JSON scenarios.
#[derive(Debug, Parser)]
#[command(name = "nicadil", version, args_conflicts_with_subcommands = true)]
struct Cli {
    /// Print the scenario JSON schema and exit.
    #[arg(long)]
    schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario file (`-` reads stdin) and emit its report.
    Run(RunArgs),
    /// Print the scenario schema, or the report schema with `--report`.
    Schema {
        #[arg(long)]
        report: bool,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    scenario: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the identity-check tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the default grid depth.
    #[arg(long)]
    depth: Option<u32>,
    /// Suppress diagnostics on stderr.
    #[arg(long)]
    quiet: bool,
    /// Run tasks concurrently; report order is unchanged.
    #[arg(long)]
    parallel: bool,
}

fn read_scenario(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn run(args: RunArgs) -> ExitCode {
    let text = match read_scenario(&args.scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.scenario.display());
            return ExitCode::from(2);
        }
    };
    let options = RunOptions {
        seed: args.seed,
        tol: args.tol,
        depth: args.depth,
        parallel: args.parallel,
    };
    let report = match run_scenario_text(&text, &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{json}"),
    }
    if !args.quiet {
        for e in &report.setup_errors {
            eprintln!("setup error [{}]: {}", e.kind, e.message);
        }
        for t in &report.tasks {
            if t.verdict != Verdict::Pass {
                let why = t
                    .error
                    .as_ref()
                    .map(|e| format!("{}: {}", e.kind, e.message))
                    .unwrap_or_else(|| {
                        t.checks
                            .iter()
                            .filter(|c| !c.pass)
                            .map(|c| format!("{} = {:e} vs {:e}", c.name, c.value, c.tolerance))
                            .collect::<Vec<_>>()
                            .join(", ")
                    });
                eprintln!("{} {:?}: {why}", t.name, t.verdict);
            }
        }
        let s = &report.summary;
        eprintln!(
            "{} tasks: {} passed, {} failed, {} errors",
            s.total, s.passed, s.failed, s.errors
        );
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Some(Command::Run(args)) => run(args),
        Some(Command::Schema { report }) => {
            print!("{}", if report { REPORT_SCHEMA } else { SCENARIO_SCHEMA });
            ExitCode::SUCCESS
        }
        None if cli.schema => {
            print!("{SCENARIO_SCHEMA}");
            ExitCode::SUCCESS
        }
        None => {
            use clap::CommandFactory;
            eprintln!("{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
    }
}
