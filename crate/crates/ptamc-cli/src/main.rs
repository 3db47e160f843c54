//! `ptamc`: check, generate and export models from the command line.
//!
//! Exit codes: 0 when the query holds (or player 1 wins), 1 when it does not,
//! 2 on usage or validation errors.

mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use ptamc::mdp::Objective;
use ptamc::oracle::{OracleConfig, DEFAULT_CAP};

use report::RunReport;
use run::{CheckArgs, Format, Target};

#[derive(Parser, Debug)]
#[command(name = "ptamc", version, about = "Model checking for probabilistic timed automata")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest constant the region oracle accepts.
    #[arg(long, global = true, env = "PTAMC_ORACLE_CAP", default_value_t = DEFAULT_CAP)]
    oracle_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a formula, picking the engine from its class and the clock count.
    Check {
        /// Model file; omit with --batch.
        #[arg(required_unless_present = "batch", conflicts_with = "batch")]
        model: Option<PathBuf>,
        #[arg(long)]
        formula: String,
        /// Query state as `location,value[,value]`; the initial state by default.
        #[arg(long)]
        at: Option<String>,
        /// Check every file of a directory concurrently.
        #[arg(long, value_name = "DIR")]
        batch: Option<PathBuf>,
        /// Print the automaton in DOT on stdout; the text report goes to stderr.
        #[arg(long)]
        emit_dot: bool,
    },
    /// Decide a formula on the region graph.
    OracleCheck {
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// Who wins a countdown game from `(state, count)`.
    SolveCountdown {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        count: u64,
    },
    /// Build a model from a countdown game.
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        count: u64,
    },
    /// Reachability probability on the forward reachability MDP.
    ForwardReach {
        file: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
        /// Print the MDP in DOT on stdout; the text summary goes to stderr.
        #[arg(long)]
        emit_dot: bool,
    },
    /// Re-print a model in another format.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dsl")]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenerateKind {
    #[value(name = "countdown-to-tmdp")]
    Tmdp,
    #[value(name = "countdown-to-1cpta")]
    OneClock,
    #[value(name = "countdown-to-2cpta")]
    TwoClock,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Dsl,
    Json,
    Dot,
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json values serialise"));
        return;
    }
    if let Some(n) = &report.notice {
        eprintln!("note: {}", n);
    }
    let text = report.to_text();
    if let Some(dot) = &report.dot {
        // the graph owns stdout so it can be piped straight into dot
        print!("{}", dot);
        eprint!("{}", text);
    } else if report.error.is_some() {
        eprint!("{}", text);
    } else {
        print!("{}", text);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let oracle = OracleConfig { cap: cli.oracle_cap, ..Default::default() };
    let code = match cli.command {
        Command::Check { model, formula, at, batch, emit_dot } => {
            let args = CheckArgs { formula: &formula, at: at.as_deref(), oracle, force_oracle: false, emit_dot };
            match (model, batch) {
                (_, Some(dir)) => match run::check_batch(&dir, &args) {
                    Ok(reports) => {
                        if cli.json {
                            let all: Vec<Value> = reports.iter().map(RunReport::to_json).collect();
                            println!("{}", serde_json::to_string_pretty(&all).expect("json values serialise"));
                        } else {
                            for r in &reports {
                                let file = r.inputs.first().map_or("?", |d| d.source.as_str());
                                match (&r.error, r.verdict) {
                                    (Some(e), _) => println!("{}: error: {}", file, e),
                                    (None, Some(v)) => {
                                        println!("{}: {} ({})", file, v, r.engine.map_or("-", |e| e.name()))
                                    }
                                    (None, None) => println!("{}: -", file),
                                }
                            }
                        }
                        reports.iter().map(RunReport::exit_code).max().unwrap_or(0)
                    }
                    Err(e) => {
                        eprintln!("error: {}", e);
                        2
                    }
                },
                (Some(model), None) => {
                    let report = run::check(&model, &args);
                    emit(&report, cli.json);
                    report.exit_code()
                }
                (None, None) => unreachable!("clap requires a model or --batch"),
            }
        }
        Command::OracleCheck { model, formula, at } => {
            let args = CheckArgs { formula: &formula, at: at.as_deref(), oracle, force_oracle: true, emit_dot: false };
            let report = run::check(&model, &args);
            emit(&report, cli.json);
            report.exit_code()
        }
        Command::SolveCountdown { file, state, count } => {
            let report = run::solve(&file, &state, count);
            emit(&report, cli.json);
            report.exit_code()
        }
        Command::Generate { kind, file, state, count } => {
            let target = match kind {
                GenerateKind::Tmdp => Target::Tmdp,
                GenerateKind::OneClock => Target::OneClock,
                GenerateKind::TwoClock => Target::TwoClock,
            };
            let report = run::generate(&file, target, &state, count, cli.json);
            emit(&report, cli.json);
            report.exit_code()
        }
        Command::ForwardReach { file, target, objective, emit_dot } => {
            let objective = match objective {
                ObjectiveArg::Max => Objective::Max,
                ObjectiveArg::Min => Objective::Min,
            };
            let report = run::forward(&file, &target, objective, emit_dot);
            emit(&report, cli.json);
            report.exit_code()
        }
        Command::Export { file, format } => {
            let format = match format {
                FormatArg::Dsl => Format::Dsl,
                FormatArg::Json => Format::Json,
                FormatArg::Dot => Format::Dot,
            };
            let report = run::export(&file, format);
            emit(&report, cli.json);
            report.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
