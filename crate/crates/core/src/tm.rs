//! Vanilla Tsetlin Machine used as a baseline.
//!
//! Clauses alternate polarity by index: the first, third, ... clause votes
//! for class 1 and the second, fourth, ... votes against. The vote sum is
//! clamped to `[-T, T]`; each clause is picked for feedback with probability
//! `(T - v) / 2T` for `y = 1` and `(T + v) / 2T` for `y = 0`. Picked clauses
//! get Type I feedback when their polarity agrees with `y`, Type II
//! otherwise.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Action, Automaton, InitPolicy, DEFAULT_HALF_SIZE};
use crate::error::{Error, Result};
use crate::logic::{IncludeMask, Sample};
use crate::learner::{EpochOrder, TrainStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative
}

impl Polarity {
    /// Polarity of the clause at zero-based position `index`.
    pub fn of_index(index: usize) -> Self {
        if index.is_multiple_of(2) {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }
}

/// Outcome distribution of one table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellProbs {
    pub reward:   f64,
    pub inaction: f64,
    pub penalty:  f64
}

impl CellProbs {
    const INACTION: CellProbs = CellProbs {
        reward:   0.0,
        inaction: 1.0,
        penalty:  0.0
    };

    fn reward(p: f64) -> Self {
        Self {
            reward:   p,
            inaction: 1.0 - p,
            penalty:  0.0
        }
    }

    fn penalty(p: f64) -> Self {
        Self {
            reward:   0.0,
            inaction: 1.0 - p,
            penalty:  p
        }
    }
}

/// Type I cell for a given clause output, literal value and action.
pub fn type_i_probs(clause: bool, literal: bool, action: Action, s: f64, boost_true_positive: bool) -> CellProbs {
    let high = if boost_true_positive { 1.0 } else { (s - 1.0) / s };
    let low = 1.0 / s;
    match (clause, literal, action) {
        // Ia
        (true, true, Action::Include) => CellProbs::reward(high),
        (true, true, Action::Exclude) => CellProbs::penalty(high),
        // Ib
        (true, false, Action::Exclude) => CellProbs::reward(low),
        // an included 0-literal forces the clause to 0
        (true, false, Action::Include) => CellProbs::INACTION,
        (false, _, Action::Include) => CellProbs::penalty(low),
        (false, _, Action::Exclude) => CellProbs::reward(low)
    }
}

/// Type II cell: only an excluded 0-literal in a 1-valued clause moves.
pub fn type_ii_probs(clause: bool, literal: bool, action: Action) -> CellProbs {
    match (clause, literal, action) {
        (true, false, Action::Exclude) => CellProbs::penalty(1.0),
        _ => CellProbs::INACTION
    }
}

/// Probability that a clause is picked for feedback.
pub fn feedback_probability(v: i64, y: bool, margin: u32) -> f64 {
    let t = i64::from(margin.max(1));
    let v = v.clamp(-t, t);
    let eps = if y { t - v } else { t + v };
    eps as f64 / (2 * t) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmClause {
    automata: Vec<Automaton>,
    polarity: Polarity
}

impl TmClause {
    pub fn from_automata(automata: Vec<Automaton>, polarity: Polarity) -> Result<Self> {
        if automata.is_empty() || !automata.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "a clause needs 2n automata, got {}",
                automata.len()
            )));
        }
        Ok(Self { automata, polarity })
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn n(&self) -> usize {
        self.automata.len() / 2
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

    pub fn eval(&self, bits: &[bool]) -> bool {
        let n = self.n();
        self.automata.iter().enumerate().all(|(k, a)| {
            let lit = if k < n { bits[k] } else { !bits[k - n] };
            !a.is_included() || lit
        })
    }

    fn literal(bits: &[bool], k: usize) -> bool {
        let n = bits.len();
        if k < n {
            bits[k]
        } else {
            !bits[k - n]
        }
    }

    fn apply<R: Rng + ?Sized, F: Fn(bool, Action) -> CellProbs>(&mut self, bits: &[bool], cell: F, rng: &mut R) {
        for (k, a) in self.automata.iter_mut().enumerate() {
            let probs = cell(Self::literal(bits, k), a.action());
            let u: f64 = rng.random();
            if u < probs.reward {
                a.reward();
            } else if u < probs.reward + probs.penalty {
                a.penalize();
            }
        }
    }

    /// Type I feedback. Draws one uniform per literal.
    pub fn type_i_feedback<R: Rng + ?Sized>(&mut self, bits: &[bool], s: f64, boost: bool, rng: &mut R) -> Result<()> {
        self.check(bits)?;
        let out = self.eval(bits);
        self.apply(bits, |lit, action| type_i_probs(out, lit, action, s, boost), rng);
        Ok(())
    }

    /// Type II feedback. Deterministic.
    pub fn type_ii_feedback(&mut self, bits: &[bool]) -> Result<()> {
        self.check(bits)?;
        if !self.eval(bits) {
            return Ok(());
        }
        let n = self.n();
        for (k, a) in self.automata.iter_mut().enumerate() {
            let lit = if k < n { bits[k] } else { !bits[k - n] };
            if !lit && a.action() == Action::Exclude {
                a.penalize();
            }
        }
        Ok(())
    }

    fn check(&self, bits: &[bool]) -> Result<()> {
        if bits.len() == self.n() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                actual:   bits.len()
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmConfig {
    /// Clause count `u`, even.
    pub clauses:             usize,
    /// Voting margin `T`.
    pub margin:              u32,
    /// Specificity `s > 1`.
    pub specificity:         f64,
    pub boost_true_positive: bool,
    pub half_size:           u32,
    pub init:                InitPolicy
}

impl Default for TmConfig {
    fn default() -> Self {
        Self {
            clauses:             2,
            margin:              1,
            specificity:         3.9,
            boost_true_positive: false,
            half_size:           DEFAULT_HALF_SIZE,
            init:                InitPolicy::FiftyFifty
        }
    }
}

impl TmConfig {
    fn validate(&self) -> Result<()> {
        if self.clauses == 0 || !self.clauses.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "clause count must be positive and even, got {}",
                self.clauses
            )));
        }
        if self.margin == 0 {
            return Err(Error::InvalidParameter("voting margin T must be at least 1".into()));
        }
        if self.specificity.is_nan() || self.specificity <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "specificity s must exceed 1, got {}",
                self.specificity
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmMachine {
    n:                   usize,
    clauses:             Vec<TmClause>,
    margin:              u32,
    specificity:         f64,
    boost_true_positive: bool
}

impl TmMachine {
    pub fn new<R: Rng + ?Sized>(n: usize, config: &TmConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        if n == 0 {
            return Err(Error::InvalidParameter("feature count must be at least 1".into()));
        }
        let clauses = (0..config.clauses)
            .map(|j| {
                let automata = (0..2 * n)
                    .map(|_| Automaton::new(config.half_size, config.init, rng))
                    .collect::<Result<Vec<_>>>()?;
                TmClause::from_automata(automata, Polarity::of_index(j))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            clauses,
            margin: config.margin,
            specificity: config.specificity,
            boost_true_positive: config.boost_true_positive
        })
    }

    /// Rebuilds a machine from clause automata; polarity follows position.
    pub fn from_parts(
        clause_automata: Vec<Vec<Automaton>>,
        margin: u32,
        specificity: f64,
        boost_true_positive: bool
    ) -> Result<Self> {
        let config = TmConfig {
            clauses: clause_automata.len(),
            margin,
            specificity,
            boost_true_positive,
            ..TmConfig::default()
        };
        config.validate()?;
        let clauses = clause_automata
            .into_iter()
            .enumerate()
            .map(|(j, a)| TmClause::from_automata(a, Polarity::of_index(j)))
            .collect::<Result<Vec<_>>>()?;
        let n = clauses[0].n();
        if let Some(c) = clauses.iter().find(|c| c.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual:   c.n()
            });
        }
        let half = clauses[0].automata()[0].half_size();
        if clauses.iter().flat_map(|c| c.automata()).any(|a| a.half_size() != half) {
            return Err(Error::InvalidParameter("automata in a machine must share N".into()));
        }
        Ok(Self {
            n,
            clauses,
            margin,
            specificity,
            boost_true_positive
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn specificity(&self) -> f64 {
        self.specificity
    }

    pub fn boost_true_positive(&self) -> bool {
        self.boost_true_positive
    }

    pub fn clauses(&self) -> &[TmClause] {
        &self.clauses
    }

    pub fn clauses_mut(&mut self) -> &mut [TmClause] {
        &mut self.clauses
    }

    fn check(&self, bits: &[bool]) -> Result<()> {
        if bits.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                actual:   bits.len()
            })
        }
    }

    /// Positive-polarity votes minus negative-polarity votes.
    pub fn vote_sum(&self, bits: &[bool]) -> Result<i64> {
        self.check(bits)?;
        Ok(self
            .clauses
            .iter()
            .map(|c| match (c.polarity, c.eval(bits)) {
                (_, false) => 0,
                (Polarity::Positive, true) => 1,
                (Polarity::Negative, true) => -1
            })
            .sum())
    }

    /// Class 1 iff the vote sum is non-negative.
    pub fn classify(&self, bits: &[bool]) -> Result<bool> {
        Ok(self.vote_sum(bits)? >= 0)
    }

    pub fn accuracy(&self, data: &[Sample]) -> Result<f64> {
        if data.is_empty() {
            return Ok(1.0);
        }
        let mut right = 0;
        for s in data {
            right += usize::from(self.classify(&s.bits)? == s.label);
        }
        Ok(right as f64 / data.len() as f64)
    }

    pub fn train_step<R: Rng + ?Sized>(&mut self, sample: &Sample, rng: &mut R) -> Result<()> {
        let v = self.vote_sum(&sample.bits)?;
        let y = sample.label;
        let prob = feedback_probability(v, y, self.margin);
        let (s, boost) = (self.specificity, self.boost_true_positive);
        for clause in &mut self.clauses {
            let picked = rng.random::<f64>() < prob;
            if !picked {
                continue;
            }
            let type_i = matches!(
                (clause.polarity, y),
                (Polarity::Positive, true) | (Polarity::Negative, false)
            );
            if type_i {
                clause.type_i_feedback(&sample.bits, s, boost, rng)?;
            } else {
                clause.type_ii_feedback(&sample.bits)?;
            }
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
        let mut idx: Vec<usize> = (0..dataset.len()).collect();
        for _ in 0..epochs {
            if order == EpochOrder::Shuffled {
                idx.shuffle(rng);
            }
            for &i in &idx {
                self.train_step(&dataset[i], rng)?;
            }
        }
        Ok(TrainStatus::Completed {
            steps: epochs * dataset.len()
        })
    }
}
