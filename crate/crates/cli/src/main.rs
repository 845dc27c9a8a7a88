//! `topolog`: checks project files and runs the propositional and local
//! language tools from the command line.

mod commands;
mod error;
mod project;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Outcome;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "topolog", version, about = "Heyting-valued and topos-valued logic of finite physical systems")]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a project file and run every check it supports.
    Validate { file: PathBuf },
    /// Print the sub-object classifier of a category.
    Omega {
        file: PathBuf,
        #[arg(long)]
        category: String,
    },
    /// Sub-objects of a presheaf.
    #[command(subcommand)]
    Sub(SubCommand),
    /// The propositional language.
    #[command(subcommand)]
    Pl(PlCommand),
    /// The typed local language.
    #[command(subcommand)]
    Ls(LsCommand),
    /// Built-in demonstrations.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Subcommand)]
enum SubCommand {
    /// Every sub-object with its characteristic arrow.
    Classify {
        file: PathBuf,
        #[arg(long)]
        presheaf: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormulaArg {
    /// Name of a formula in the project file.
    #[arg(long)]
    formula: Option<String>,
    /// Formula text.
    #[arg(long)]
    text: Option<String>,
}

#[derive(Subcommand)]
enum PlCommand {
    /// Parse a formula and print it in normal form.
    Parse { formula: String },
    /// The element representing a formula in a classical system or an algebra.
    Represent {
        file: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, conflicts_with = "algebra")]
        system: Option<String>,
        #[arg(long, requires = "assign")]
        algebra: Option<String>,
        /// `primitive=element` pairs for an algebra.
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Truth of a formula at a state of a classical system.
    Truth {
        file: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        system: String,
        #[arg(long)]
        state: String,
    },
    /// Intuitionistic validity, with a Kripke countermodel when invalid.
    Decide { formula: String },
    /// Check the Hilbert proofs of a project file.
    Prove {
        file: PathBuf,
        #[arg(long)]
        proof: Option<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TermArg {
    /// Name of a term in the project file.
    #[arg(long)]
    term: Option<String>,
    /// Term text.
    #[arg(long)]
    text: Option<String>,
}

#[derive(Subcommand)]
enum LsCommand {
    /// Infer the type of a term.
    Typecheck {
        file: PathBuf,
        #[command(flatten)]
        term: TermArg,
        /// Signature for `--text`.
        #[arg(long)]
        signature: Option<String>,
        /// `name:Type` bindings for the free variables of `--text`.
        #[arg(long = "var")]
        vars: Vec<String>,
    },
    /// The arrow interpreting a term in a representation.
    Represent {
        file: PathBuf,
        #[arg(long)]
        rep: String,
        #[command(flatten)]
        term: TermArg,
        #[arg(long = "var")]
        vars: Vec<String>,
    },
    /// Check every axiom of a representation.
    CheckAxioms {
        file: PathBuf,
        #[arg(long)]
        rep: String,
    },
    /// Check the sequent derivations of a project file.
    Derive {
        file: PathBuf,
        #[arg(long)]
        proof: Option<String>,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Where `a | ~a` falls short of true.
    ExcludedMiddle,
    /// The subspace lattice of the plane is not distributive.
    Nondistributivity,
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    use commands as c;
    match cli.command {
        Command::Validate { file } => c::validate(&file, cli.seed),
        Command::Omega { file, category } => c::omega(&file, &category),
        Command::Sub(SubCommand::Classify { file, presheaf }) => c::sub_classify(&file, &presheaf),
        Command::Pl(cmd) => match cmd {
            PlCommand::Parse { formula } => c::pl_parse(&formula),
            PlCommand::Represent {
                file,
                formula,
                system,
                algebra,
                assign,
            } => c::pl_represent(&file, formula.formula, formula.text, system, algebra, &assign),
            PlCommand::Truth {
                file,
                formula,
                system,
                state,
            } => c::pl_truth(&file, formula.formula, formula.text, &system, &state),
            PlCommand::Decide { formula } => c::pl_decide(&formula),
            PlCommand::Prove { file, proof } => c::pl_prove(&file, proof.as_deref()),
        },
        Command::Ls(cmd) => match cmd {
            LsCommand::Typecheck {
                file,
                term,
                signature,
                vars,
            } => c::ls_typecheck(&file, term.term, term.text, signature, &vars),
            LsCommand::Represent { file, rep, term, vars } => c::ls_represent(&file, &rep, term.term, term.text, &vars),
            LsCommand::CheckAxioms { file, rep } => c::ls_check_axioms(&file, &rep),
            LsCommand::Derive { file, proof } => c::ls_derive(&file, proof.as_deref()),
        },
        Command::Demo(DemoCommand::ExcludedMiddle) => c::demo_excluded_middle(),
        Command::Demo(DemoCommand::Nondistributivity) => Ok(c::demo_nondistributivity()),
    }
}

fn emit(json: &serde_json::Value, summary: &str) {
    let mut out = std::io::stdout().lock();
    let text = serde_json::to_string_pretty(json).expect("JSON values serialize");
    let _ = writeln!(out, "{text}");
    eprintln!("{summary}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::Usage(e.render().to_string().trim().to_string());
            emit(&err.to_json(), &e.render().to_string());
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(outcome) => {
            emit(&outcome.json, &outcome.summary);
            ExitCode::from(outcome.code)
        }
        Err(err) => {
            let summary = match err.pointer() {
                Some(p) => format!("error ({}) at {p}: {err}", err.kind()),
                None => format!("error ({}): {err}", err.kind()),
            };
            emit(&err.to_json(), &summary);
            ExitCode::from(2)
        }
    }
}
