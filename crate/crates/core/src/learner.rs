//! Probabilistic concept learning.
//!
//! Each clause owns one automaton per literal and an inclusion probability
//! `p`. Feedback ignores the clause output: every literal is reinforced on
//! its own from the sample label, the literal's value and its current
//! action, and every step is either a reward or a penalty (no inaction).

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Action, Automaton, InitPolicy};
use crate::error::{Error, Result};
use crate::logic::{IncludeMask, Sample, TargetConjunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feedback {
    Reward,
    Penalty
}

/// Reward probability for a single literal.
///
/// | label    | literal | Include | Exclude |
/// |----------|---------|---------|---------|
/// | positive | 1       | p       | 1 - p   |
/// | positive | 0       | 0       | 1       |
/// | negative | 1       | 1 - p   | p       |
/// | negative | 0       | p       | 1 - p   |
///
/// Penalty takes the remaining mass.
#[inline]
pub fn reward_probability(positive: bool, literal: bool, action: Action, p: f64) -> f64 {
    match (positive, literal, action) {
        (true, true, Action::Include) => p,
        (true, true, Action::Exclude) => 1.0 - p,
        (true, false, Action::Include) => 0.0,
        (true, false, Action::Exclude) => 1.0,
        (false, true, Action::Include) => 1.0 - p,
        (false, true, Action::Exclude) => p,
        (false, false, Action::Include) => p,
        (false, false, Action::Exclude) => 1.0 - p
    }
}

/// Applies one reward-or-penalty step to `automaton`. Consumes exactly one
/// uniform draw from `rng` regardless of the cell.
#[inline]
pub fn literal_feedback<R: Rng + ?Sized>(
    automaton: &mut Automaton,
    positive: bool,
    literal: bool,
    p: f64,
    rng: &mut R
) -> Feedback {
    let u: f64 = rng.random();
    if u < reward_probability(positive, literal, automaton.action(), p) {
        automaton.reward();
        Feedback::Reward
    } else {
        automaton.penalize();
        Feedback::Penalty
    }
}

fn validate_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("inclusion probability {p} outside [0, 1]")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PclClause {
    automata: Vec<Automaton>,
    p:        f64
}

impl PclClause {
    pub fn new<R: Rng + ?Sized>(n: usize, p: f64, half: u32, policy: InitPolicy, rng: &mut R) -> Result<Self> {
        validate_p(p)?;
        if n == 0 {
            return Err(Error::InvalidParameter("feature count must be at least 1".into()));
        }
        let automata = (0..2 * n)
            .map(|_| Automaton::new(half, policy, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { automata, p })
    }

    /// Clause over explicit automata; `automata.len()` must be `2n`.
    pub fn from_automata(automata: Vec<Automaton>, p: f64) -> Result<Self> {
        validate_p(p)?;
        if automata.is_empty() || !automata.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "a clause needs 2n automata, got {}",
                automata.len()
            )));
        }
        if automata.windows(2).any(|w| w[0].half_size() != w[1].half_size()) {
            return Err(Error::InvalidParameter("automata in a clause must share N".into()));
        }
        Ok(Self { automata, p })
    }

    pub fn n(&self) -> usize {
        self.automata.len() / 2
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn half_size(&self) -> u32 {
        self.automata[0].half_size()
    }

    pub fn automata(&self) -> &[Automaton] {
        &self.automata
    }

    pub fn automata_mut(&mut self) -> &mut [Automaton] {
        &mut self.automata
    }

    pub fn mask(&self) -> IncludeMask {
        IncludeMask::from_bools(self.automata.iter().map(Automaton::is_included).collect())
            .expect("clause holds an even number of automata")
    }

    pub fn eval(&self, bits: &[bool]) -> Result<bool> {
        self.mask().eval(bits)
    }

    fn check_len(&self, bits: &[bool]) -> Result<()> {
        if bits.len() == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                actual:   bits.len()
            })
        }
    }

    /// Feedback for a sample of either label.
    pub fn feedback<R: Rng + ?Sized>(&mut self, sample: &Sample, rng: &mut R) -> Result<()> {
        self.check_len(&sample.bits)?;
        self.apply(&sample.bits, sample.label, rng);
        Ok(())
    }

    pub fn feedback_positive<R: Rng + ?Sized>(&mut self, sample: &Sample, rng: &mut R) -> Result<()> {
        if !sample.label {
            return Err(Error::LabelMismatch {
                expected: "positive",
                actual:   "negative"
            });
        }
        self.feedback(sample, rng)
    }

    pub fn feedback_negative<R: Rng + ?Sized>(&mut self, sample: &Sample, rng: &mut R) -> Result<()> {
        if sample.label {
            return Err(Error::LabelMismatch {
                expected: "negative",
                actual:   "positive"
            });
        }
        self.feedback(sample, rng)
    }

    // one draw per literal, literal-index order
    fn apply<R: Rng + ?Sized>(&mut self, bits: &[bool], positive: bool, rng: &mut R) {
        let n = bits.len();
        let (pos, neg) = self.automata.split_at_mut(n);
        for (a, &b) in pos.iter_mut().zip(bits) {
            literal_feedback(a, positive, b, self.p, rng);
        }
        for (a, &b) in neg.iter_mut().zip(bits) {
            literal_feedback(a, positive, !b, self.p, rng);
        }
    }

    /// Definition of success: the extracted mask equals the target exactly.
    pub fn converged_to(&self, target: &TargetConjunction) -> Result<bool> {
        if target.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual:   target.n()
            });
        }
        Ok(self
            .automata
            .iter()
            .zip(target.mask().as_bools())
            .all(|(a, &want)| a.is_included() == want))
    }
}

/// Sample order within an epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpochOrder {
    /// Dataset order, every epoch.
    #[default]
    Fixed,
    /// Fresh permutation each epoch, drawn from the training rng.
    Shuffled
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[must_use]
pub enum TrainStatus {
    Completed { steps: usize },
    /// `epochs > 0` but the dataset held no samples; nothing was updated.
    EmptyDataset
}

/// A disjunction of PCL clauses over `n` features.
#[derive(Debug, Clone, PartialEq)]
pub struct PclMachine {
    n:       usize,
    clauses: Vec<PclClause>
}

impl PclMachine {
    /// One clause per entry of `ps`, all with half-size `half`.
    pub fn new<R: Rng + ?Sized>(n: usize, ps: &[f64], half: u32, policy: InitPolicy, rng: &mut R) -> Result<Self> {
        let clauses = ps
            .iter()
            .map(|&p| PclClause::new(n, p, half, policy, rng))
            .collect::<Result<Vec<_>>>()?;
        Self::from_clauses(clauses)
    }

    pub fn single<R: Rng + ?Sized>(n: usize, p: f64, half: u32, policy: InitPolicy, rng: &mut R) -> Result<Self> {
        Self::new(n, &[p], half, policy, rng)
    }

    pub fn from_clauses(clauses: Vec<PclClause>) -> Result<Self> {
        let n = clauses
            .first()
            .ok_or_else(|| Error::InvalidParameter("a machine needs at least one clause".into()))?
            .n();
        if let Some(c) = clauses.iter().find(|c| c.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual:   c.n()
            });
        }
        if clauses.windows(2).any(|w| w[0].half_size() != w[1].half_size()) {
            return Err(Error::InvalidParameter("clauses in a machine must share N".into()));
        }
        Ok(Self { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[PclClause] {
        &self.clauses
    }

    pub fn clauses_mut(&mut self) -> &mut [PclClause] {
        &mut self.clauses
    }

    pub fn masks(&self) -> Vec<IncludeMask> {
        self.clauses.iter().map(PclClause::mask).collect()
    }

    /// `C_1 OR ... OR C_k` on `bits`.
    pub fn classify(&self, bits: &[bool]) -> Result<bool> {
        let mut out = false;
        for clause in &self.clauses {
            out |= clause.eval(bits)?;
        }
        Ok(out)
    }

    /// Feeds `sample` to every clause, each with its own `p`.
    pub fn train_step<R: Rng + ?Sized>(&mut self, sample: &Sample, rng: &mut R) -> Result<()> {
        if sample.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual:   sample.n()
            });
        }
        for clause in &mut self.clauses {
            clause.apply(&sample.bits, sample.label, rng);
        }
        Ok(())
    }

    pub fn train_epochs<R: Rng + ?Sized>(
        &mut self,
        dataset: &[Sample],
        epochs: usize,
        order: EpochOrder,
        rng: &mut R
    ) -> Result<TrainStatus> {
        if epochs == 0 {
            return Ok(TrainStatus::Completed { steps: 0 });
        }
        if dataset.is_empty() {
            return Ok(TrainStatus::EmptyDataset);
        }
        if let Some(s) = dataset.iter().find(|s| s.n() != self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual:   s.n()
            });
        }
        let mut idx: Vec<usize> = (0..dataset.len()).collect();
        for _ in 0..epochs {
            if order == EpochOrder::Shuffled {
                idx.shuffle(rng);
            }
            for &i in &idx {
                let s = &dataset[i];
                for clause in &mut self.clauses {
                    clause.apply(&s.bits, s.label, rng);
                }
            }
        }
        Ok(TrainStatus::Completed {
            steps: epochs * dataset.len()
        })
    }
}
