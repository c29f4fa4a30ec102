//! Command-line interface.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use goal_arbiter_core::arguments::{ArgError, ArgId};
use goal_arbiter_core::attacks::AttackRelation;
use goal_arbiter_core::frameworks::{build_af, successful_filter, ArgFramework, FrameworkError};
use goal_arbiter_core::postulates::{
    check_closure, check_direct_consistency_with, check_indirect, Postulate, PostulateReport,
};
use goal_arbiter_core::semantics::{select, Policy, SemanticsError, DEFAULT_BOUND, MAX_NODES};

use crate::dsl::{parse_kb, DslError};
use crate::pipeline::{Analysis, PipelineError};
use crate::{dot, report};

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INVALID_KB: u8 = 3;
pub const EXIT_ENUMERATION: u8 = 4;
pub const EXIT_SIZE_BOUND: u8 = 5;
pub const EXIT_OTHER: u8 = 6;

#[derive(Parser, Debug)]
#[command(name = "goal-arbiter", version, about = "Detect conflicts between an agent's goals and select compatible goal sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List every instrumental argument.
    Arguments(Options),
    /// Print attack relations.
    Attacks(Options),
    /// Print an argumentation framework.
    Framework(Options),
    /// Run the compatible-goal selection.
    Select(Options),
    /// Verify the rationality postulates on the selection output.
    Check(Options),
    /// Write a framework as Graphviz (or report) text.
    Export(Options),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    T,
    R,
    S,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Arguments,
    Goals,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    GoalsFirst,
    UtilityFirst,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Report,
    Dot,
    Tree,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Knowledge base file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub kind: Kind,
    /// Keep only successful attacks.
    #[arg(long)]
    pub filtered: bool,
    #[arg(long, value_enum, default_value = "arguments")]
    pub level: Level,
    #[arg(long, value_enum, default_value = "goals-first")]
    pub policy: PolicyArg,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Largest framework to enumerate extensions of.
    #[arg(long, env = "GOAL_ARBITER_BOUND", default_value_t = DEFAULT_BOUND,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..=MAX_NODES as u64))]
    pub bound: usize,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: DslError },
    #[error("{0}")]
    Arguments(#[from] ArgError),
    #[error("{0}")]
    Framework(#[from] FrameworkError),
    #[error("{0} (raise it with --bound or GOAL_ARBITER_BOUND)")]
    Semantics(#[from] SemanticsError),
    #[error("{0}")]
    Usage(String),
}

impl From<PipelineError> for AppError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Arguments(a) => AppError::Arguments(a),
            PipelineError::Framework(f) => AppError::Framework(f),
        }
    }
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Parse { .. } => EXIT_INVALID_KB,
            AppError::Arguments(_) => EXIT_ENUMERATION,
            AppError::Semantics(SemanticsError::SizeBoundExceeded { .. }) => EXIT_SIZE_BOUND,
            AppError::Usage(_) => EXIT_USAGE,
            _ => EXIT_OTHER,
        }
    }
}

/// Rendered output plus whether a `check` passed.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

fn load(opts: &Options) -> Result<Analysis, AppError> {
    let text = std::fs::read_to_string(&opts.input).map_err(|source| AppError::Io {
        path: opts.input.clone(),
        source,
    })?;
    let kb = parse_kb(&text).map_err(|source| AppError::Parse {
        path: opts.input.clone(),
        source,
    })?;
    Ok(Analysis::run(&kb)?)
}

fn relations(a: &Analysis, kind: Kind) -> Vec<&AttackRelation> {
    match kind {
        Kind::T => vec![&a.terminal],
        Kind::R => vec![&a.resource],
        Kind::S => vec![&a.superfluous],
        Kind::All => vec![&a.terminal, &a.resource, &a.superfluous],
    }
}

fn policy(p: PolicyArg) -> (Policy, &'static str) {
    match p {
        PolicyArg::GoalsFirst => (Policy::GoalsFirst, "goals-first"),
        PolicyArg::UtilityFirst => (Policy::UtilityFirst, "utility-first"),
    }
}

fn argument_framework(a: &Analysis, opts: &Options) -> Result<ArgFramework, AppError> {
    let af = build_af(&relations(a, opts.kind), &a.store)?;
    Ok(if opts.filtered {
        successful_filter(&af, &a.store, a.store.kb().preferences())?
    } else {
        af
    })
}

fn reject_tree(opts: &Options, command: &str) -> Result<(), AppError> {
    if opts.format == Some(Format::Tree) {
        return Err(AppError::Usage(format!("--format tree applies only to `arguments`, not `{command}`")));
    }
    Ok(())
}

fn framework_text(a: &Analysis, opts: &Options, default: Format) -> Result<String, AppError> {
    let format = opts.format.unwrap_or(default);
    Ok(match opts.level {
        Level::Goals => {
            let gf = a.goal_framework()?;
            match format {
                Format::Dot => dot::goal_framework(&gf),
                _ => report::goal_framework(&gf),
            }
        }
        Level::Arguments => {
            let af = argument_framework(a, opts)?;
            match format {
                Format::Dot => dot::framework(&af, &a.store),
                _ => report::framework(&af, &a.store),
            }
        }
    })
}

fn selected_extensions(a: &Analysis, opts: &Options) -> Result<Vec<Vec<ArgId>>, AppError> {
    let (pol, _) = policy(opts.policy);
    let val = a.filtered.valuation(&a.store)?;
    let result = select(&a.filtered.digraph(), &val, pol, opts.bound)?;
    Ok(result
        .proper_extensions
        .iter()
        .map(|s| s.iter().map(|i| a.filtered.nodes[i]).collect())
        .collect())
}

pub fn execute(cli: &Cli) -> Result<Outcome, AppError> {
    let done = |text: String| Ok(Outcome { text, ok: true });
    match &cli.command {
        Command::Arguments(opts) => {
            let a = load(opts)?;
            done(match opts.format.unwrap_or(Format::Report) {
                Format::Report => report::arguments(&a.store),
                Format::Tree => report::argument_trees(&a.store),
                Format::Dot => dot::arguments(&a.store),
            })
        }
        Command::Attacks(opts) => {
            reject_tree(opts, "attacks")?;
            let a = load(opts)?;
            let rels = relations(&a, opts.kind);
            let text = match opts.format.unwrap_or(Format::Report) {
                Format::Dot => {
                    let af = build_af(&rels, &a.store)?;
                    dot::framework(&af, &a.store)
                }
                _ => rels.iter().map(|r| report::relation(r)).collect::<Vec<_>>().join("\n"),
            };
            done(text)
        }
        Command::Framework(opts) => {
            reject_tree(opts, "framework")?;
            let a = load(opts)?;
            done(framework_text(&a, opts, Format::Report)?)
        }
        Command::Export(opts) => {
            reject_tree(opts, "export")?;
            let a = load(opts)?;
            done(framework_text(&a, opts, Format::Dot)?)
        }
        Command::Select(opts) => {
            reject_tree(opts, "select")?;
            let a = load(opts)?;
            let (pol, pol_name) = policy(opts.policy);
            let text = match opts.level {
                Level::Arguments => {
                    let val = a.filtered.valuation(&a.store)?;
                    let result = select(&a.filtered.digraph(), &val, pol, opts.bound)?;
                    let labels: Vec<String> = a.filtered.nodes.iter().map(|id| id.to_string()).collect();
                    report::selection(&result, &val, &labels, "arguments", pol_name)
                }
                Level::Goals => {
                    let gf = a.goal_framework()?;
                    let val = gf.valuation();
                    let result = select(&gf.digraph(), &val, pol, opts.bound)?;
                    let labels: Vec<String> = gf.nodes.iter().map(|g| g.to_string()).collect();
                    report::selection(&result, &val, &labels, "goals", pol_name)
                }
            };
            done(text)
        }
        Command::Check(opts) => {
            reject_tree(opts, "check")?;
            let a = load(opts)?;
            let exts = selected_extensions(&a, opts)?;
            let mut direct = PostulateReport {
                postulate: Postulate::DirectConsistency,
                violations: Vec::new(),
            };
            for e in &exts {
                let r = check_direct_consistency_with(e, &a.store, a.store.kb().resources(), &a.superfluous);
                direct.violations.extend(r.violations);
            }
            let reports = vec![direct, check_closure(&exts, &a.store), check_indirect(&exts, &a.store)];
            let ok = reports.iter().all(|r| r.passed());
            Ok(Outcome {
                text: report::postulates(&exts, &reports),
                ok,
            })
        }
    }
}

fn output_path(cli: &Cli) -> Option<&PathBuf> {
    let opts = match &cli.command {
        Command::Arguments(o)
        | Command::Attacks(o)
        | Command::Framework(o)
        | Command::Select(o)
        | Command::Check(o)
        | Command::Export(o) => o,
    };
    opts.out.as_ref()
}

/// Runs the parsed command, writing output and returning the process exit code.
pub fn run(cli: Cli) -> ExitCode {
    match execute(&cli) {
        Ok(outcome) => {
            if let Some(path) = output_path(&cli) {
                if let Err(e) = std::fs::write(path, &outcome.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_OTHER);
                }
            } else {
                print!("{}", outcome.text);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
