//! Convergence sweeps: random targets, single-clause training on the full
//! truth table, and success counts per `(n, p, epochs)` cell.
//!
//! Seeding: trial `i` of cell `(n, p_index, epochs)` runs on a ChaCha8
//! stream seeded with [`trial_seed`], a SplitMix64 fold of
//! `master_seed, n, p_index, epochs, i` in that order. The stream is used
//! for, in order, the target, the initial automaton states, and training.

use std::io::Write;
use std::path::Path;

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::{InitPolicy, DEFAULT_HALF_SIZE};
use crate::error::{Error, Result};
use crate::logic::{IncludeMask, Literal, TargetConjunction, MAX_ENUMERATION_FEATURES};
use crate::learner::{EpochOrder, PclMachine};

/// How many literals a random target gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetSize {
    /// `m` uniform in `1..=n`.
    #[default]
    UniformInN,
    /// Exactly `m` literals (clamped to `n`).
    Fixed(usize)
}

/// Draws a non-contradictory target: `m` distinct variables, each with a
/// uniform polarity.
pub fn random_target<R: Rng + ?Sized>(n: usize, rng: &mut R, size: TargetSize) -> Result<TargetConjunction> {
    if n == 0 {
        return Err(Error::InvalidParameter("feature count must be at least 1".into()));
    }
    let m = match size {
        TargetSize::UniformInN => rng.random_range(1..=n),
        TargetSize::Fixed(m) if m >= 1 => m.min(n),
        TargetSize::Fixed(_) => return Err(Error::InvalidParameter("fixed target size must be at least 1".into()))
    };
    let mut vars = sample_indices(rng, n, m).into_vec();
    vars.sort_unstable();
    let lits: Vec<Literal> = vars
        .into_iter()
        .map(|v| {
            if rng.random::<bool>() {
                Literal::negative(v)
            } else {
                Literal::positive(v)
            }
        })
        .collect();
    TargetConjunction::from_literals(n, lits)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed. Stable across versions; changing it changes every CSV.
pub fn trial_seed(master_seed: u64, n: usize, p_index: usize, epochs: usize, trial: usize) -> u64 {
    [n as u64, p_index as u64, epochs as u64, trial as u64]
        .into_iter()
        .fold(splitmix64(master_seed), |h, x| splitmix64(h ^ x))
}

/// Half-size used by the `figure3a` preset. Large enough for `n = 8` to
/// settle within 1000 epochs.
pub const FIGURE3A_HALF_SIZE: u32 = 512;

/// Half-size used by the `figure3b` preset.
pub const FIGURE3B_HALF_SIZE: u32 = 64;

/// Settings shared by every trial of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSettings {
    pub half_size:   u32,
    pub order:       EpochOrder,
    pub target_size: TargetSize,
    pub init:        InitPolicy
}

impl Default for TrialSettings {
    fn default() -> Self {
        Self {
            half_size:   DEFAULT_HALF_SIZE,
            order:       EpochOrder::Fixed,
            target_size: TargetSize::UniformInN,
            init:        InitPolicy::FiftyFifty
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub target:  TargetConjunction,
    pub learned: IncludeMask,
    pub success: bool
}

/// One trial: fresh target, fresh single-clause machine, `epochs` passes over
/// all `2^n` inputs, success iff the learned mask equals the target.
pub fn run_trial(n: usize, p: f64, epochs: usize, seed: u64, settings: &TrialSettings) -> Result<TrialOutcome> {
    if n > MAX_ENUMERATION_FEATURES {
        return Err(Error::EnumerationBound {
            n,
            max: MAX_ENUMERATION_FEATURES
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = random_target(n, &mut rng, settings.target_size)?;
    run_trial_on(&target, p, epochs, &mut rng, settings)
}

/// Like [`run_trial`] but with a given target and rng.
pub fn run_trial_on<R: Rng + ?Sized>(
    target: &TargetConjunction,
    p: f64,
    epochs: usize,
    rng: &mut R,
    settings: &TrialSettings
) -> Result<TrialOutcome> {
    let data = target.truth_table()?;
    let mut machine = PclMachine::single(target.n(), p, settings.half_size, settings.init, rng)?;
    let _ = machine.train_epochs(&data, epochs, settings.order, rng)?;
    let clause = &machine.clauses()[0];
    Ok(TrialOutcome {
        target:  target.clone(),
        learned: clause.mask(),
        success: clause.converged_to(target)?
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_values:    Vec<usize>,
    pub p_values:    Vec<f64>,
    pub epoch_grid:  Vec<usize>,
    pub trials:      usize,
    pub master_seed: u64,
    pub settings:    TrialSettings
}

impl ExperimentConfig {
    /// `p = 0.75`, `n` in `2..=8`, epochs `100..=1000` step 100.
    pub fn figure3a() -> Self {
        Self {
            n_values:    (2..=8).collect(),
            p_values:    vec![0.75],
            epoch_grid:  default_epoch_grid(),
            trials:      100,
            master_seed: 42,
            settings:    TrialSettings {
                half_size: FIGURE3A_HALF_SIZE,
                ..TrialSettings::default()
            }
        }
    }

    /// `n = 4`, `p` from 0.1 to 1.0, epochs `100..=1000` step 100.
    pub fn figure3b() -> Self {
        Self {
            n_values:    vec![4],
            p_values:    vec![0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0],
            epoch_grid:  default_epoch_grid(),
            trials:      100,
            master_seed: 42,
            settings:    TrialSettings {
                half_size: FIGURE3B_HALF_SIZE,
                ..TrialSettings::default()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n == 0 || n > MAX_ENUMERATION_FEATURES) {
            return Err(Error::InvalidParameter(format!(
                "feature count {n} outside 1..={MAX_ENUMERATION_FEATURES}"
            )));
        }
        if let Some(&p) = self.p_values.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter(format!("inclusion probability {p} outside [0, 1]")));
        }
        if self.settings.half_size == 0 {
            return Err(Error::InvalidParameter("automaton half-size must be at least 1".into()));
        }
        if let TargetSize::Fixed(0) = self.settings.target_size {
            return Err(Error::InvalidParameter("fixed target size must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn default_epoch_grid() -> Vec<usize> {
    (1..=10).map(|i| i * 100).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n:         usize,
    pub p:         f64,
    pub epochs:    usize,
    pub trials:    usize,
    pub successes: usize,
    pub seed:      u64
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>
}

impl SweepResult {
    /// Row for a cell, if present.
    pub fn cell(&self, n: usize, p: f64, epochs: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.n == n && r.p == p && r.epochs == epochs)
    }
}

/// Runs every `(n, p, epochs)` cell of `config`. Trials run in parallel;
/// rows come back sorted by `(n, p, epochs)`.
pub fn sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut cells = Vec::new();
    for &n in &config.n_values {
        for (pi, &p) in config.p_values.iter().enumerate() {
            for &epochs in &config.epoch_grid {
                cells.push((n, pi, p, epochs));
            }
        }
    }
    let mut rows = cells
        .par_iter()
        .map(|&(n, pi, p, epochs)| {
            let successes = (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = trial_seed(config.master_seed, n, pi, epochs, t);
                    run_trial(n, p, epochs, seed, &config.settings).map(|o| usize::from(o.success))
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(SweepRow {
                n,
                p,
                epochs,
                trials: config.trials,
                successes,
                seed: config.master_seed
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.p.total_cmp(&b.p))
            .then(a.epochs.cmp(&b.epochs))
    });
    Ok(SweepResult { rows })
}

/// Writes `n,p,epochs,trials,successes,seed` plus one line per row.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["n", "p", "epochs", "trials", "successes", "seed"])
        .map_err(|e| Error::Csv(e.to_string()))?;
    for row in &result.rows {
        w.serialize(row).map_err(|e| Error::Csv(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn csv_string(result: &SweepResult) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source
    };
    let file = std::fs::File::create(path).map_err(io)?;
    let mut buf = std::io::BufWriter::new(file);
    write_csv(result, &mut buf).map_err(|e| match e {
        Error::Csv(msg) => io(std::io::Error::other(msg)),
        other => other
    })?;
    buf.flush().map_err(io)
}

pub fn parse_csv(text: &str) -> Result<SweepResult> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| Error::Csv(e.to_string()))?;
    if headers != vec!["n", "p", "epochs", "trials", "successes", "seed"] {
        return Err(Error::Csv(format!("unexpected header {headers:?}")));
    }
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<SweepRow>, _>>()
        .map_err(|e| Error::Csv(e.to_string()))?;
    Ok(SweepResult { rows })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn single_variable_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for size in [TargetSize::UniformInN, TargetSize::Fixed(1), TargetSize::Fixed(3)] {
            let t = random_target(1, &mut rng, size).unwrap();
            assert_eq!(t.m(), 1);
            assert!(t.to_string() == "x1" || t.to_string() == "NOT x1");
        }
    }

    #[test]
    fn fixed_size_uses_every_variable() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let t = random_target(4, &mut rng, TargetSize::Fixed(4)).unwrap();
            assert_eq!(t.m(), 4);
            let vars: Vec<usize> = t.mask().literals().map(|l| l.var()).collect();
            let mut sorted = vars.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn target_size_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0usize; 5];
        let mut negated = 0;
        let mut total_lits = 0;
        for _ in 0..10_000 {
            let t = random_target(4, &mut rng, TargetSize::UniformInN).unwrap();
            counts[t.m()] += 1;
            negated += t.mask().literals().filter(|l| l.is_negated()).count();
            total_lits += t.m();
        }
        assert_eq!(counts[0], 0);
        for &c in &counts[1..] {
            assert!((c as f64 / 10_000.0 - 0.25).abs() < 0.02, "{counts:?}");
        }
        assert!((negated as f64 / total_lits as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn seeds_differ_by_coordinate() {
        let base = trial_seed(42, 4, 0, 100, 0);
        assert_ne!(base, trial_seed(43, 4, 0, 100, 0));
        assert_ne!(base, trial_seed(42, 5, 0, 100, 0));
        assert_ne!(base, trial_seed(42, 4, 1, 100, 0));
        assert_ne!(base, trial_seed(42, 4, 0, 200, 0));
        assert_ne!(base, trial_seed(42, 4, 0, 100, 1));
        assert_eq!(base, trial_seed(42, 4, 0, 100, 0));
    }

    #[test]
    fn untrained_trial_keeps_its_initial_mask() {
        let settings = TrialSettings::default();
        let mut hits = 0;
        for seed in 0..200 {
            let o = run_trial(3, 0.75, 0, seed, &settings).unwrap();
            // initial mask is a fair coin per literal
            hits += usize::from(o.success);
            assert_eq!(o.success, o.learned == *o.target.mask());
        }
        // success probability 2^-6 per trial
        assert!(hits < 15, "{hits}");
    }

    #[test]
    fn trial_rejects_oversized_n() {
        assert!(matches!(
            run_trial(21, 0.75, 1, 0, &TrialSettings::default()),
            Err(Error::EnumerationBound { .. })
        ));
    }

    #[test]
    fn one_cell_sweep() {
        let config = ExperimentConfig {
            n_values:    vec![2],
            p_values:    vec![0.75],
            epoch_grid:  vec![10],
            trials:      1,
            master_seed: 7,
            settings:    TrialSettings::default()
        };
        let r = sweep(&config).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].successes <= 1);
        assert_eq!(r.rows[0].seed, 7);
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::figure3b();
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::figure3b();
        c.p_values.push(1.5);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::figure3a();
        c.n_values.push(21);
        assert!(c.validate().is_err());
        assert!(ExperimentConfig::figure3a().validate().is_ok());
    }

    #[test]
    fn csv_format() {
        let empty = csv_string(&SweepResult::default()).unwrap();
        assert_eq!(empty, "n,p,epochs,trials,successes,seed\n");
        let one = SweepResult {
            rows: vec![SweepRow {
                n:         4,
                p:         0.75,
                epochs:    1000,
                trials:    100,
                successes: 98,
                seed:      42
            }]
        };
        assert_eq!(
            csv_string(&one).unwrap(),
            "n,p,epochs,trials,successes,seed\n4,0.75,1000,100,98,42\n"
        );
    }

    #[test]
    fn csv_rejects_bad_header() {
        assert!(parse_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn emit_csv_reports_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("missing").join("out.csv");
        let err = emit_csv(&SweepResult::default(), &bad).unwrap_err();
        assert!(err.to_string().contains("missing"), "{err}");
        let good = dir.path().join("out.csv");
        emit_csv(&SweepResult::default(), &good).unwrap();
        assert_eq!(std::fs::read_to_string(good).unwrap(), "n,p,epochs,trials,successes,seed\n");
    }

    proptest! {
        #[test]
        fn csv_round_trips(rows in proptest::collection::vec(
            (1usize..21, 0u32..=1000, 0usize..100_000, 1usize..1000, any::<u64>()),
            0..20,
        )) {
            let result = SweepResult {
                rows: rows
                    .into_iter()
                    .map(|(n, pm, epochs, trials, seed)| SweepRow {
                        n,
                        p: pm as f64 / 1000.0,
                        epochs,
                        trials,
                        successes: trials / 2,
                        seed
                    })
                    .collect()
            };
            prop_assert_eq!(parse_csv(&csv_string(&result).unwrap()).unwrap(), result);
        }
    }
}
