use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use netdyn_core::replace::{brute_force_replaceable, default_max_len, SearchStrategy};
use netdyn_core::{
    export_dot, find_replacement, find_replacement_multi, load_model, model_to_json, parse,
    reduce_with, satisfies, search_irreplaceable, sequences_equivalent, Error, LinkMode, Model,
    Rational, SearchConfig, Update, UpdateSequence,
};

/// Model checker for threshold diffusion and similarity-driven networks.
///
/// Exit status: 0 for success or a true/positive answer, 1 for a
/// false/negative answer, 2 for usage and validation errors.
#[derive(Parser)]
#[command(name = "netdyn", version, about)]
struct Cli {
    /// Override the link mode stored in the model document.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    /// Suppress diagnostics on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Literal,
    Irreflexive,
}

impl From<Mode> for LinkMode {
    fn from(m: Mode) -> LinkMode {
        match m {
            Mode::Literal => LinkMode::Literal,
            Mode::Irreflexive => LinkMode::Irreflexive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Diff,
    Net,
    Sync,
}

impl From<Op> for Update {
    fn from(op: Op) -> Update {
        match op {
            Op::Diff => Update::Diff,
            Op::Net => Update::Net,
            Op::Sync => Update::Sync,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula; prints `true` or `false`.
    Eval { model: PathBuf, formula: String },
    /// Apply a comma-separated update sequence and print the result.
    Update {
        model: PathBuf,
        #[arg(long)]
        seq: UpdateSequence,
    },
    /// Apply one update until nothing changes; the step count goes to stderr.
    Stabilize {
        model: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
    },
    /// Rewrite a formula into an equivalent one without update operators.
    Reduce {
        #[arg(long)]
        model: PathBuf,
        formula: String,
        /// Also unfold sim, pressure and ψ abbreviations.
        #[arg(long)]
        expand: bool,
        /// Print every rewrite step to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Compare two update sequences on a model.
    Equiv {
        model: PathBuf,
        #[arg(long)]
        seq1: UpdateSequence,
        #[arg(long)]
        seq2: UpdateSequence,
    },
    /// Find a diff/net sequence that reproduces the synchronous update.
    Replace { model: PathBuf },
    /// Stage-wise replacement of `m` consecutive synchronous updates.
    ReplaceMulti {
        model: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Brute-force search for a replacing sequence.
    Oracle {
        model: PathBuf,
        /// Longest sequence tried; defaults to the agent count plus one.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Search for a model on which the synchronous update is irreplaceable.
    SearchCounterexample {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        features: usize,
        #[arg(long)]
        omega: Rational,
        #[arg(long)]
        tau: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Enumerate every model instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Accept any irreplaceable model, even if some proof facts fail.
        #[arg(long)]
        any: bool,
    },
    /// Print the model as a Graphviz digraph.
    ExportDot { model: PathBuf },
}

enum Outcome {
    Yes,
    No,
}

fn open(path: &PathBuf, mode: Option<Mode>) -> Result<Model> {
    let model = load_model(path).with_context(|| format!("cannot load {}", path.display()))?;
    Ok(match mode {
        Some(m) => model.with_mode(m.into())?,
        None => model,
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    let diag = |msg: String| {
        if !cli.quiet {
            eprintln!("{msg}");
        }
    };
    let mode = cli.mode;
    match cli.command {
        Command::Eval { model, formula } => {
            let m = open(&model, mode)?;
            let value = satisfies(&m, &parse(&formula)?)?;
            println!("{value}");
            Ok(if value { Outcome::Yes } else { Outcome::No })
        }
        Command::Update { model, seq } => {
            let m = open(&model, mode)?;
            print!("{}", model_to_json(&m.apply_sequence(&seq)));
            Ok(Outcome::Yes)
        }
        Command::Stabilize { model, op } => {
            let m = open(&model, mode)?;
            let (fixpoint, steps) = m.stabilize(op.into());
            print!("{}", model_to_json(&fixpoint));
            eprintln!("steps: {steps}");
            Ok(Outcome::Yes)
        }
        Command::Reduce {
            model,
            formula,
            expand,
            trace,
        } => {
            let m = open(&model, mode)?;
            let f = parse(&formula)?;
            let (out, steps) = reduce_with(&f, m.signature(), &m.params(), expand)?;
            if trace {
                for s in &steps.steps {
                    diag(format!(
                        "{} at {:?}: {} => {}",
                        s.rule, s.path, s.before, s.after
                    ));
                }
            }
            println!("{out}");
            Ok(Outcome::Yes)
        }
        Command::Equiv { model, seq1, seq2 } => {
            let m = open(&model, mode)?;
            match sequences_equivalent(&m, &seq1, &seq2).witness {
                None => {
                    println!("equivalent");
                    Ok(Outcome::Yes)
                }
                Some(atom) => {
                    println!("differ at {atom}");
                    Ok(Outcome::No)
                }
            }
        }
        Command::Replace { model } => {
            let m = open(&model, mode)?;
            let verdict = find_replacement(&m)?;
            match verdict.sequence {
                Some(seq) => {
                    println!("{seq}");
                    Ok(Outcome::Yes)
                }
                None => {
                    let failed: Vec<String> =
                        verdict.failed.iter().map(|k| k.to_string()).collect();
                    println!("irreplaceable: {}", failed.join(", "));
                    Ok(Outcome::No)
                }
            }
        }
        Command::ReplaceMulti { model, m: steps } => {
            let m = open(&model, mode)?;
            match find_replacement_multi(&m, steps)? {
                Some(seq) => {
                    println!("{seq}");
                    Ok(Outcome::Yes)
                }
                None => {
                    println!("none");
                    diag("some stage is not replaceable; a replacement may still exist".into());
                    Ok(Outcome::No)
                }
            }
        }
        Command::Oracle { model, max_len } => {
            let m = open(&model, mode)?;
            let max_len = max_len.unwrap_or_else(|| default_max_len(&m));
            match brute_force_replaceable(&m, max_len)? {
                Some(seq) => {
                    println!("{seq}");
                    Ok(Outcome::Yes)
                }
                None => {
                    println!("none");
                    Ok(Outcome::No)
                }
            }
        }
        Command::SearchCounterexample {
            agents,
            features,
            omega,
            tau,
            seed,
            budget,
            exhaustive,
            any,
        } => {
            let mut cfg = SearchConfig::new(agents, features, omega, tau);
            cfg.mode = mode.map_or(LinkMode::Literal, Into::into);
            cfg.seed = seed;
            cfg.budget = budget;
            cfg.require_proof_facts = !any;
            if exhaustive {
                cfg.strategy = SearchStrategy::Exhaustive;
            }
            match search_irreplaceable(&cfg) {
                Ok(w) => {
                    print!("{}", model_to_json(&w.model));
                    diag(format!("examined {} candidates\n{}", w.examined, w.facts));
                    Ok(Outcome::Yes)
                }
                Err(e @ Error::SearchExhausted { .. }) => {
                    diag(e.to_string());
                    Ok(Outcome::No)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::ExportDot { model } => {
            let m = open(&model, mode)?;
            print!("{}", export_dot(&m));
            Ok(Outcome::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
