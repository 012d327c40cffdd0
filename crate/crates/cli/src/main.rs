//! Command line front end: checking, elaboration and pruning of Alethe
//! proofs with machine-readable diagnostics and exit codes.
//!
//! Exit codes: 0 the proof is valid, 1 the proof is invalid, 2 anything
//! else (parse, sort or IO errors, unknown goal). Errors print a single
//! machine-parsable line on stderr.

use std::fs;
use std::io::{Read, Write};
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use alethe_core::checker::{StepStatus, StrictnessConfig, Verdict};
use alethe_core::{
    check_proof, elaborate_proof, parse_problem, parse_proof, print_proof, prune, CheckConfig,
    CheckReport, Problem, ProofCommand, TermPool,
};

#[derive(Parser)]
#[command(name = "alethe-check", version, about = "Check, elaborate and prune Alethe proofs")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Subcommand)]
enum Mode {
    /// Check a proof against a problem.
    Check(CommonArgs),
    /// Rewrite lenient trans steps to the target strictness, then check the
    /// result.
    Elaborate(TransformArgs),
    /// Drop steps unreachable from the goal, then check the result.
    Prune(TransformArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// SMT-LIB problem file.
    problem: PathBuf,
    /// Alethe proof file, or `-` for stdin.
    proof: String,
    /// Strictness of the trans rule (1: ordered and oriented, 2: ordered,
    /// 3: unordered).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    trans_level: u8,
    /// Mark steps with unknown rules as assumed instead of failing them.
    #[arg(long)]
    skip_unknown: bool,
    /// Step that must establish the result.
    #[arg(long)]
    goal: Option<String>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Write the transformed proof to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the transformed proof to stdout (the report then goes to
    /// stderr).
    #[arg(long)]
    stdout: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Serialize)]
struct StepLine<'a> {
    id: &'a str,
    rule: &'a str,
    verdict: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    verdict: &'a str,
    steps: usize,
    failures: usize,
}

fn main() -> ExitCode {
    match panic::catch_unwind(run) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("error: internal panic");
            ExitCode::from(2)
        }
    }
}

fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {}", message.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.mode {
        Mode::Check(args) => {
            let (mut pool, problem, commands) = load(&args)?;
            let report = check_proof(&mut pool, &problem, &commands, &config(&args))
                .map_err(|e| e.to_string())?;
            emit_report(&report, args.format, &mut std::io::stdout())
                .map_err(|e| e.to_string())?;
            Ok(exit_for(&report))
        }
        Mode::Elaborate(args) => {
            let (mut pool, problem, commands) = load(&args.common)?;
            let target = StrictnessConfig::new().with_level("trans", args.common.trans_level);
            let result = elaborate_proof(&mut pool, &commands, &target);
            finish_transform(pool, problem, result.commands, args)
        }
        Mode::Prune(args) => {
            let (mut pool, problem, commands) = load(&args.common)?;
            let pruned = prune(&pool, &commands, args.common.goal.as_deref())
                .map_err(|e| e.to_string())?;
            let _ = &mut pool;
            finish_transform(pool, problem, pruned, args)
        }
    }
}

fn load(args: &CommonArgs) -> Result<(TermPool, Problem, Vec<ProofCommand>), String> {
    let problem_text = fs::read_to_string(&args.problem)
        .map_err(|e| format!("cannot read {}: {e}", args.problem.display()))?;
    let proof_text = if args.proof == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        buffer
    } else {
        fs::read_to_string(&args.proof).map_err(|e| format!("cannot read {}: {e}", args.proof))?
    };
    let mut pool = TermPool::new();
    let problem = parse_problem(&mut pool, &problem_text).map_err(|e| e.to_string())?;
    let commands = parse_proof(&mut pool, &problem, &proof_text).map_err(|e| e.to_string())?;
    Ok((pool, problem, commands))
}

fn config(args: &CommonArgs) -> CheckConfig {
    CheckConfig {
        strictness: StrictnessConfig::new().with_level("trans", args.trans_level),
        skip_unknown: args.skip_unknown,
        goal: args.goal.clone(),
    }
}

/// Writes the transformed proof, re-checks it, and reports on the result.
fn finish_transform(
    mut pool: TermPool,
    problem: Problem,
    commands: Vec<ProofCommand>,
    args: TransformArgs,
) -> Result<ExitCode, String> {
    let printed = print_proof(&pool, &commands);
    let to_stdout = match (&args.output, args.stdout) {
        (Some(path), false) => {
            fs::write(path, &printed).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            false
        }
        (None, true) => {
            print!("{printed}");
            true
        }
        (Some(_), true) => return Err("pass either --output or --stdout, not both".into()),
        (None, false) => return Err("elaborate/prune need --output or --stdout".into()),
    };
    let report = check_proof(&mut pool, &problem, &commands, &config(&args.common))
        .map_err(|e| e.to_string())?;
    if to_stdout {
        emit_report(&report, args.common.format, &mut std::io::stderr())
    } else {
        emit_report(&report, args.common.format, &mut std::io::stdout())
    }
    .map_err(|e| e.to_string())?;
    Ok(exit_for(&report))
}

fn exit_for(report: &CheckReport) -> ExitCode {
    match report.verdict {
        Verdict::Valid | Verdict::ValidWithAssumptions => ExitCode::SUCCESS,
        Verdict::Invalid => ExitCode::from(1),
        Verdict::Error => ExitCode::from(2),
    }
}

fn emit_report(report: &CheckReport, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Text => emit_text(report, out),
        Format::Jsonl => emit_jsonl(report, out),
    }
}

fn emit_text(report: &CheckReport, out: &mut dyn Write) -> std::io::Result<()> {
    for step in report.steps.iter() {
        if let StepStatus::Failure(reason) = &step.status {
            writeln!(out, "{}: {}: {}", step.id, step.rule, reason)?;
        }
    }
    use alethe_core::checker::Established;
    let summary = match (&report.verdict, &report.established) {
        (Verdict::Invalid | Verdict::Error, _) => report.verdict.as_str().to_owned(),
        (_, Established::EmptyClause(id)) => {
            format!("{} (empty clause at {id})", report.verdict.as_str())
        }
        (_, Established::Goal(id)) => format!("{} (goal {id})", report.verdict.as_str()),
        (_, Established::Nothing) => {
            format!("{}; all steps ok, no conclusion", report.verdict.as_str())
        }
    };
    writeln!(out, "{summary}")
}

fn emit_jsonl(report: &CheckReport, out: &mut dyn Write) -> std::io::Result<()> {
    for step in report.steps.iter() {
        let (verdict, reason) = match &step.status {
            StepStatus::Ok => ("ok", None),
            StepStatus::Assumed => ("assumed", None),
            StepStatus::Failure(reason) => ("failure", Some(reason.as_str())),
        };
        let line = StepLine { id: &step.id, rule: &step.rule, verdict, reason };
        writeln!(out, "{}", serde_json::to_string(&line).expect("report serializes"))?;
    }
    let summary = SummaryLine {
        verdict: report.verdict.as_str(),
        steps: report.steps.len(),
        failures: report.failures().count(),
    };
    writeln!(out, "{}", serde_json::to_string(&summary).expect("report serializes"))
}
