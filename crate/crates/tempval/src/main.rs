use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use tempval::bench::run_bench;
use tempval::difftest::run_difftest;
use tempval::driver::{self, CheckOptions, Verdict};
use tempval::gen::GenBounds;
use tempval_core::semantics::InvariantMode;
use tempval_core::validator::Mutation;

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "tempval",
    about = "Validator for temporal plans with exact rational time",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Semantics {
    /// Check invariants strictly inside each action's interval.
    Strict,
    /// Also check the state entering each action's end point (default).
    RightClosed,
}

impl From<Semantics> for InvariantMode {
    fn from(s: Semantics) -> InvariantMode {
        match s {
            Semantics::Strict => InvariantMode::Strict,
            Semantics::RightClosed => InvariantMode::RightClosed,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MutationArg {
    InvariantGapOffByOne,
    MissedEndSnap,
    DeleteAfterAdd,
    UnsortedInsert,
    SkipPairwiseCheck,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Mutation {
        match m {
            MutationArg::InvariantGapOffByOne => Mutation::InvariantGapOffByOne,
            MutationArg::MissedEndSnap => Mutation::MissedEndSnap,
            MutationArg::DeleteAfterAdd => Mutation::DeleteAfterAdd,
            MutationArg::UnsortedInsert => Mutation::UnsortedInsert,
            MutationArg::SkipPairwiseCheck => Mutation::SkipPairwiseCheck,
        }
    }
}

#[derive(Args)]
struct InputFiles {
    domain: PathBuf,
    problem: PathBuf,
    plan: PathBuf,
    /// Invariant-interval variant.
    #[arg(long, value_enum, default_value = "right-closed")]
    semantics: Semantics,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a plan against a domain and problem.
    Check {
        #[command(flatten)]
        files: InputFiles,
        /// Build the happening sequence by sorted list insertion regardless
        /// of plan size.
        #[arg(long)]
        list_path: bool,
    },
    /// Print the happening sequence the plan induces, one line per happening.
    Happenings {
        #[command(flatten)]
        files: InputFiles,
    },
    /// Cross-check the declarative and executable checkers on random
    /// instances.
    Difftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 8)]
        max_atoms: usize,
        #[arg(long, default_value_t = 6)]
        max_actions: usize,
        #[arg(long, default_value_t = 6)]
        max_steps: usize,
        #[arg(long, default_value_t = 8)]
        max_denominator: i64,
        /// Seed a known bug into the executable pipeline; the run must then
        /// find disagreements.
        #[arg(long, value_enum)]
        mutation: Option<MutationArg>,
    },
    /// Validate a synthetic chain plan and report timing.
    Bench {
        #[arg(short = 'n', long, default_value_t = 10_000)]
        size: usize,
        /// Force the sorted-list construction path.
        #[arg(long)]
        list_path: bool,
    },
}

fn read_file(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        2
    })
}

fn run_check(files: &InputFiles, list_path: bool) -> u8 {
    let (Ok(domain), Ok(problem), Ok(plan)) = (
        read_file(&files.domain),
        read_file(&files.problem),
        read_file(&files.plan),
    ) else {
        return 2;
    };
    let report = driver::check_texts(
        &domain,
        &problem,
        &plan,
        CheckOptions {
            mode: files.semantics.into(),
            force_list_path: list_path,
        },
    );
    println!("{}", report.verdict);
    match &report.verdict {
        Verdict::Valid => {}
        Verdict::Invalid(e) => {
            eprintln!("{e}");
            eprintln!("{}", e.detail());
        }
        Verdict::IllFormed(messages) => {
            for m in messages {
                eprintln!("{m}");
            }
        }
        Verdict::ParseFailure(message) => eprintln!("{message}"),
    }
    report.verdict.exit_code() as u8
}

fn run_happenings(files: &InputFiles) -> u8 {
    let (Ok(domain), Ok(problem), Ok(plan)) = (
        read_file(&files.domain),
        read_file(&files.problem),
        read_file(&files.plan),
    ) else {
        return 2;
    };
    let (domain, problem, plan) = match (
        tempval::parse_domain(&domain),
        tempval::parse_problem(&problem),
        tempval::parse_plan(&plan),
    ) {
        (Ok(d), Ok(p), Ok(pl)) => (d, p, pl),
        (d, p, pl) => {
            for e in [d.err(), p.err(), pl.err()].into_iter().flatten() {
                eprintln!("{e}");
            }
            return 2;
        }
    };
    match driver::ground(&domain, &problem, &plan) {
        Ok(grounded) => {
            print!("{}", driver::happenings_dump(&grounded, files.semantics.into()));
            0
        }
        Err(failure) => {
            for m in failure.messages() {
                eprintln!("{m}");
            }
            1
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Check { files, list_path } => run_check(&files, list_path),
        Command::Happenings { files } => run_happenings(&files),
        Command::Difftest {
            seed,
            count,
            max_atoms,
            max_actions,
            max_steps,
            max_denominator,
            mutation,
        } => {
            let bounds = GenBounds {
                max_atoms,
                max_actions,
                max_steps,
                max_denominator,
            };
            let mutation = mutation.map_or(Mutation::None, Into::into);
            let report = run_difftest(seed, count, bounds, mutation);
            println!(
                "{} cases in {:?}, {} disagreement(s)",
                report.cases,
                report.elapsed,
                report.disagreements.len()
            );
            for d in &report.disagreements {
                eprintln!(
                    "case {} ({:?}): declarative={} executable={}",
                    d.case_index, d.mode, d.reference, d.executable
                );
                eprintln!("{}", d.reproducer);
            }
            if mutation == Mutation::None {
                u8::from(!report.agreed())
            } else {
                // With a seeded bug the run succeeds exactly when the bug was
                // caught.
                u8::from(report.agreed())
            }
        }
        Command::Bench { size, list_path } => {
            let outcome = run_bench(size, list_path);
            println!(
                "verdict: {}, steps: {}, happenings: {}, wall-clock: {:?}",
                if outcome.valid { "valid" } else { "invalid" },
                outcome.steps,
                outcome.happenings,
                outcome.duration
            );
            u8::from(!outcome.valid)
        }
    };
    ExitCode::from(code)
}
