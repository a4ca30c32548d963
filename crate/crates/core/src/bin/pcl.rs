use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pcl::experiment::{self, ExperimentConfig, TargetSize, TrialSettings};
use pcl::snapshot::{self, Snapshot};
use pcl::{EpochOrder, Error, PclMachine, TargetConjunction, DEFAULT_HALF_SIZE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "pcl", version, about = "Probabilistic concept learning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence sweep and write CSV.
    Sweep(SweepArgs),
    /// Train one clause on one target and print what it learned.
    Trial(TrialArgs),
    /// Check the frequency tables, Lemma 1 and the theorem conditions.
    VerifyTheory {
        #[arg(long, default_value_t = 6)]
        max_n: usize
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Figure3a,
    Figure3b
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    preset:      Option<Preset>,
    /// Feature counts, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    n:           Vec<usize>,
    /// Inclusion probabilities, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    p:           Vec<f64>,
    /// Epoch budgets, comma separated. Defaults to 100..=1000 step 100.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    epochs:      Vec<usize>,
    #[arg(long)]
    trials:      Option<usize>,
    /// Automaton half-size N.
    #[arg(long)]
    states_half: Option<u32>,
    #[arg(long)]
    seed:        Option<u64>,
    /// Shuffle the samples every epoch.
    #[arg(long)]
    shuffle:     bool,
    /// Fixed target size instead of uniform in 1..=n.
    #[arg(long)]
    m:           Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out:         Option<PathBuf>
}

#[derive(clap::Args)]
struct TrialArgs {
    #[arg(long, default_value_t = 4)]
    n:           usize,
    #[arg(long, default_value_t = 0.75)]
    p:           f64,
    #[arg(long, default_value_t = 1000)]
    epochs:      usize,
    #[arg(long, default_value_t = DEFAULT_HALF_SIZE)]
    states_half: u32,
    #[arg(long, default_value_t = 42)]
    seed:        u64,
    #[arg(long)]
    shuffle:     bool,
    /// Fixed target size instead of uniform in 1..=n.
    #[arg(long)]
    m:           Option<usize>,
    /// Target such as "x1 AND NOT x3"; random when absent.
    #[arg(long)]
    target:      Option<String>,
    /// Write the trained machine here.
    #[arg(long)]
    snapshot:    Option<PathBuf>
}

/// Errors caused by the arguments map to exit code 2.
fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::InvalidParameter(_) | Error::EnumerationBound { .. } | Error::DimensionMismatch { .. } => ExitCode::from(2),
        _ => ExitCode::from(1)
    }
}

fn order(shuffle: bool) -> EpochOrder {
    if shuffle {
        EpochOrder::Shuffled
    } else {
        EpochOrder::Fixed
    }
}

fn target_size(m: Option<usize>) -> TargetSize {
    m.map_or(TargetSize::UniformInN, TargetSize::Fixed)
}

fn sweep_config(args: &SweepArgs) -> Result<ExperimentConfig, Error> {
    let mut config = match args.preset {
        Some(Preset::Figure3a) => ExperimentConfig::figure3a(),
        Some(Preset::Figure3b) => ExperimentConfig::figure3b(),
        None => {
            if args.n.is_empty() || args.p.is_empty() {
                return Err(Error::InvalidParameter("give --preset or both --n and --p".into()));
            }
            ExperimentConfig {
                n_values:    vec![],
                p_values:    vec![],
                epoch_grid:  experiment::default_epoch_grid(),
                trials:      100,
                master_seed: 42,
                settings:    TrialSettings::default()
            }
        }
    };
    if !args.n.is_empty() {
        config.n_values = args.n.clone();
    }
    if !args.p.is_empty() {
        config.p_values = args.p.clone();
    }
    if !args.epochs.is_empty() {
        config.epoch_grid = args.epochs.clone();
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(h) = args.states_half {
        config.settings.half_size = h;
    }
    if let Some(s) = args.seed {
        config.master_seed = s;
    }
    if args.shuffle {
        config.settings.order = EpochOrder::Shuffled;
    }
    if args.m.is_some() {
        config.settings.target_size = target_size(args.m);
    }
    config.validate()?;
    Ok(config)
}

fn run_sweep(args: &SweepArgs) -> Result<(), Error> {
    let config = sweep_config(args)?;
    let result = experiment::sweep(&config)?;
    match &args.out {
        Some(path) => experiment::emit_csv(&result, path),
        None => {
            print!("{}", experiment::csv_string(&result)?);
            Ok(())
        }
    }
}

fn run_trial(args: &TrialArgs) -> Result<(), Error> {
    let settings = TrialSettings {
        half_size:   args.states_half,
        order:       order(args.shuffle),
        target_size: target_size(args.m),
        ..TrialSettings::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let target = match &args.target {
        Some(text) => TargetConjunction::parse(args.n, text)?,
        None => experiment::random_target(args.n, &mut rng, settings.target_size)?
    };
    let data = target.truth_table()?;
    let mut machine = PclMachine::single(args.n, args.p, settings.half_size, settings.init, &mut rng)?;
    let _ = machine.train_epochs(&data, args.epochs, settings.order, &mut rng)?;
    let clause = &machine.clauses()[0];
    println!("target:  {target}");
    println!("learned: {}", clause.mask());
    println!("success: {}", clause.converged_to(&target)?);
    if let Some(path) = &args.snapshot {
        snapshot::save(&Snapshot::Pcl(machine), path)?;
    }
    Ok(())
}

fn verify_theory(max_n: usize) -> Result<bool, Error> {
    let report = pcl::theory::verify_theory(max_n)?;
    for check in &report.checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({} cases)", check.name, check.cases);
        for c in check.counterexamples.iter().take(5) {
            println!("     {c}");
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(args) => run_sweep(args).map(|()| true),
        Command::Trial(args) => run_trial(args).map(|()| true),
        Command::VerifyTheory { max_n } => verify_theory(*max_n)
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
