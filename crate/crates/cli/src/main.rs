//! Command-line workbench for pushdown automata systems.
//!
//! Exit codes, uniformly: 0 accepted/verified, 1 rejected/disagreement,
//! 2 budget exhausted/inconclusive, 3 usage or validation error.

mod ops;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "pdsys", version, about = "Workbench for pushdown automata systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Search budget: most stored configurations.
    #[arg(long, global = true, default_value_t = 100_000, value_name = "N")]
    pub max_configs: u64,
    /// Search budget: most expansion steps.
    #[arg(long, global = true, default_value_t = 100_000, value_name = "N")]
    pub max_steps: u64,
    /// Also write a machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args)]
pub struct WordArg {
    /// Input word; one character per symbol, empty for the empty word.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub word: String,
    /// Read the word as space-separated symbol names instead.
    #[arg(long)]
    pub symbols: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum QuantifierArg {
    /// Every component must finish in a final state.
    All,
    /// One finishing component suffices.
    Some,
}

#[derive(Clone, Copy, Default, ValueEnum)]
pub enum StepArg {
    /// Internal steps need every non-stalled component to move.
    #[default]
    Strict,
    /// Components without an applicable move idle.
    Relaxed,
}

#[derive(Clone, Copy, Default, ValueEnum)]
pub enum ModeArg {
    /// Append an end-of-input marker; the compiled system is deterministic.
    #[default]
    Endmarker,
    /// Keep the word as is; the main component guesses where it ends.
    Faithful,
}

#[derive(Subcommand)]
pub enum Command {
    /// Single pushdown machines: run words, check determinism, convert.
    #[command(subcommand)]
    Pda(PdaCommand),
    /// Parallel systems communicating by stack transfer.
    #[command(subcommand)]
    Pcpa(PcpaCommand),
    /// Queue-machine programs and their translation to parallel systems.
    #[command(subcommand)]
    Post(PostCommand),
    /// Distributed systems taking turns on one shared input.
    #[command(subcommand)]
    Udpas(UdpasCommand),
    /// The shuffle-membership construction over two machines.
    #[command(subcommand)]
    Reduce(ReduceCommand),
}

#[derive(Subcommand)]
pub enum PdaCommand {
    /// Decide a word and optionally print an accepting move sequence.
    Run {
        machine: PathBuf,
        #[command(flatten)]
        word: WordArg,
        /// Print the accepting move sequence.
        #[arg(long)]
        witness: bool,
    },
    /// Check the syntactic determinism condition.
    CheckDet { machine: PathBuf },
    /// Convert final-state acceptance to empty-stack acceptance.
    ToEmptyStack {
        machine: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum PcpaCommand {
    /// Decide a word by search over system configurations.
    Run {
        system: PathBuf,
        #[command(flatten)]
        word: WordArg,
        /// Override the acceptance quantifier declared in the file.
        #[arg(long, value_enum)]
        quantifier: Option<QuantifierArg>,
        #[arg(long = "step-semantics", value_enum, default_value_t)]
        step_semantics: StepArg,
    },
    /// Follow the unique run and print every step.
    Trace {
        system: PathBuf,
        #[command(flatten)]
        word: WordArg,
        #[arg(long, value_enum)]
        quantifier: Option<QuantifierArg>,
        #[arg(long = "step-semantics", value_enum, default_value_t)]
        step_semantics: StepArg,
    },
}

#[derive(Subcommand)]
pub enum PostCommand {
    /// Interpret a program on a word.
    Run {
        program: PathBuf,
        #[command(flatten)]
        word: WordArg,
    },
    /// Translate a program into a two-component parallel system.
    Compile {
        program: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Prefix for generated stack-symbol names.
        #[arg(long, default_value = "")]
        prefix: String,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run interpreter and compiled system side by side on all short words.
    Verify {
        program: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Exit 0 even when some words stayed inconclusive.
        #[arg(long)]
        allow_inconclusive: bool,
    },
}

#[derive(Subcommand)]
pub enum UdpasCommand {
    /// Decide a word operationally, switching turns on blocking.
    Run {
        system: PathBuf,
        #[command(flatten)]
        word: WordArg,
    },
    /// Decide membership by guessing a distribution of the word's positions
    /// over identical copies.
    MemberNp {
        component: PathBuf,
        /// Number of copies.
        #[arg(short = 'n', long = "copies", value_parser = clap::value_parser!(u64).range(1..))]
        copies: u64,
        #[command(flatten)]
        word: WordArg,
    },
}

#[derive(Subcommand)]
pub enum ReduceCommand {
    /// Build the combined machine and markers for two source machines.
    Build {
        first: PathBuf,
        second: PathBuf,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the padded input word fed to the combined system.
    Transform {
        #[command(flatten)]
        word: WordArg,
    },
    /// Check the distributed system against direct shuffle membership.
    Verify {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Exit 0 even when some words stayed inconclusive.
        #[arg(long)]
        allow_inconclusive: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 3 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match ops::dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
