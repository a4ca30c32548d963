//! Computable side of the single-clause convergence argument.
//!
//! Relative to a target `C_T` with `m` literals over `n` features, each
//! literal is correct (`L1`, in `C_T`), negated-correct (`L2`, its negation
//! is in `C_T`) or irrelevant (`L3`). For a fixed literal, each of the `2^n`
//! inputs falls into one of four sample classes:
//!
//! * `A1`: positive, literal satisfied
//! * `A2`: positive, literal violated
//! * `A3`: negative, literal satisfied
//! * `A4`: negative, literal violated
//!
//! Class counts are exact integers. Relative frequencies `alpha = count / 2^n`
//! are dyadic and therefore exact in `f64` for `n <= 52`; only products with
//! `p` carry rounding, so strict inequalities are checked with a `1e-12`
//! margin.

use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{all_inputs, Literal, TargetConjunction, MAX_ENUMERATION_FEATURES};

/// Margin for strict inequalities between probabilities.
pub const STRICT_MARGIN: f64 = 1e-12;

/// Largest `n` accepted by the closed-form frequencies (`2^n` must fit in `u64`).
pub const MAX_CLOSED_FORM_FEATURES: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiteralClass {
    L1,
    L2,
    L3
}

impl LiteralClass {
    pub const ALL: [LiteralClass; 3] = [LiteralClass::L1, LiteralClass::L2, LiteralClass::L3];
}

impl fmt::Display for LiteralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiteralClass::L1 => "L1",
            LiteralClass::L2 => "L2",
            LiteralClass::L3 => "L3"
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SampleClass {
    A1,
    A2,
    A3,
    A4
}

impl SampleClass {
    pub const ALL: [SampleClass; 4] = [SampleClass::A1, SampleClass::A2, SampleClass::A3, SampleClass::A4];

    pub fn from_parts(positive: bool, satisfied: bool) -> Self {
        match (positive, satisfied) {
            (true, true) => SampleClass::A1,
            (true, false) => SampleClass::A2,
            (false, true) => SampleClass::A3,
            (false, false) => SampleClass::A4
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, SampleClass::A1 | SampleClass::A2)
    }

    pub fn literal_satisfied(self) -> bool {
        matches!(self, SampleClass::A1 | SampleClass::A3)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SampleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.slot() + 1)
    }
}

/// Sample counts per class `A1..A4` for one literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassCounts(pub [u64; 4]);

impl ClassCounts {
    pub fn get(&self, class: SampleClass) -> u64 {
        self.0[class.slot()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `count / 2^n` for every class.
    pub fn alphas(&self, n: usize) -> [f64; 4] {
        let denom = (1u64 << n) as f64;
        self.0.map(|c| c as f64 / denom)
    }
}

/// Closed-form counts for every literal class, with `n` and `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    pub n:    usize,
    pub m:    usize,
    /// `None` for `L3` when `m == n`.
    pub rows: [Option<ClassCounts>; 3]
}

impl FrequencyTable {
    pub fn closed_form(n: usize, m: usize) -> Result<Self> {
        let row = |lc| match freq_closed_form(n, m, lc) {
            Ok(c) => Ok(Some(c)),
            Err(Error::EmptyLiteralClass(_)) => Ok(None),
            Err(e) => Err(e)
        };
        Ok(Self {
            n,
            m,
            rows: [row(LiteralClass::L1)?, row(LiteralClass::L2)?, row(LiteralClass::L3)?]
        })
    }

    pub fn row(&self, lc: LiteralClass) -> Option<ClassCounts> {
        self.rows[lc as usize]
    }
}

/// Positive iff `bits` satisfies every literal of the target.
pub fn label_sample(target: &TargetConjunction, bits: &[bool]) -> Result<bool> {
    target.label(bits)
}

pub fn classify_literal(target: &TargetConjunction, lit: Literal) -> LiteralClass {
    if target.contains(lit) {
        LiteralClass::L1
    } else if target.contains(lit.negate()) {
        LiteralClass::L2
    } else {
        LiteralClass::L3
    }
}

pub fn classify_sample(target: &TargetConjunction, lit: Literal, bits: &[bool]) -> Result<SampleClass> {
    let positive = target.label(bits)?;
    let satisfied = lit
        .eval(bits)
        .ok_or_else(|| Error::InvalidParameter(format!("{lit} out of range for n = {}", bits.len())))?;
    Ok(SampleClass::from_parts(positive, satisfied))
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::InvalidParameter(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    if n > MAX_CLOSED_FORM_FEATURES {
        return Err(Error::InvalidParameter(format!(
            "n = {n} exceeds {MAX_CLOSED_FORM_FEATURES} for closed-form counts"
        )));
    }
    Ok(())
}

/// Closed-form class counts `(A1, A2, A3, A4)` for a literal of class `lc`.
pub fn freq_closed_form(n: usize, m: usize, lc: LiteralClass) -> Result<ClassCounts> {
    check_nm(n, m)?;
    let all = 1u64 << n;
    let half = 1u64 << (n - 1);
    let pos = 1u64 << (n - m);
    Ok(ClassCounts(match lc {
        LiteralClass::L1 => [pos, 0, all - pos - half, half],
        LiteralClass::L2 => [0, pos, half, all - pos - half],
        LiteralClass::L3 => {
            if m == n {
                return Err(Error::EmptyLiteralClass(n));
            }
            let q = 1u64 << (n - m - 1);
            [q, q, half - q, half - q]
        }
    }))
}

/// Class counts for `lit` by walking all `2^n` inputs.
pub fn freq_enumerate(target: &TargetConjunction, lit: Literal) -> Result<ClassCounts> {
    let n = target.n();
    if n > MAX_ENUMERATION_FEATURES {
        return Err(Error::EnumerationBound {
            n,
            max: MAX_ENUMERATION_FEATURES
        });
    }
    if lit.var() >= n {
        return Err(Error::InvalidParameter(format!("{lit} out of range for n = {n}")));
    }
    let mut counts = ClassCounts::default();
    for bits in all_inputs(n)? {
        counts.0[classify_sample(target, lit, &bits)?.slot()] += 1;
    }
    Ok(counts)
}

/// `alpha * p + (1 - alpha) * (1 - p)`.
pub fn lemma1_value(p: f64, alpha: f64) -> f64 {
    alpha * p + (1.0 - alpha) * (1.0 - p)
}

pub fn lemma1_exceeds_half(p: f64, alpha: f64) -> bool {
    lemma1_value(p, alpha) > 0.5
}

/// Probability that one step reinforces Include for a literal seen in a
/// sample of class `class`: reward-given-Include, which equals
/// penalty-given-Exclude. Reinforcing Exclude takes the complement.
pub fn include_reinforce_prob(class: SampleClass, p: f64) -> f64 {
    match class {
        SampleClass::A1 => p,
        SampleClass::A2 => 0.0,
        SampleClass::A3 => 1.0 - p,
        SampleClass::A4 => p
    }
}

/// Per-step probabilities of reinforcing Include and Exclude for one literal,
/// averaged over a uniformly drawn input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reinforcement {
    pub include: f64,
    pub exclude: f64
}

/// Closed forms for each literal class.
pub fn reinforcement_probs(lc: LiteralClass, n: usize, m: usize, p: f64) -> Result<Reinforcement> {
    let a = freq_closed_form(n, m, lc)?.alphas(n);
    Ok(match lc {
        LiteralClass::L1 => {
            let alpha = a[0] + a[3];
            Reinforcement {
                include: alpha * p + (1.0 - alpha) * (1.0 - p),
                exclude: alpha * (1.0 - p) + (1.0 - alpha) * p
            }
        }
        LiteralClass::L2 => Reinforcement {
            include: a[2] * (1.0 - p) + a[3] * p,
            exclude: a[1] + a[2] * p + a[3] * (1.0 - p)
        },
        LiteralClass::L3 => Reinforcement {
            include: (a[0] + a[3]) * p + a[2] * (1.0 - p),
            exclude: a[0] * (1.0 - p) + 0.5
        }
    })
}

/// The same quantities summed directly over the four class frequencies with
/// [`include_reinforce_prob`], without the per-class simplifications.
pub fn reinforcement_by_class_sum(lc: LiteralClass, n: usize, m: usize, p: f64) -> Result<Reinforcement> {
    let a = freq_closed_form(n, m, lc)?.alphas(n);
    let include: f64 = SampleClass::ALL
        .iter()
        .map(|&c| a[c.slot()] * include_reinforce_prob(c, p))
        .sum();
    let exclude: f64 = SampleClass::ALL
        .iter()
        .map(|&c| a[c.slot()] * (1.0 - include_reinforce_prob(c, p)))
        .sum();
    Ok(Reinforcement { include, exclude })
}

/// Sufficient condition for convergence of a single clause: `0.5 < p < 1`.
pub fn theorem_condition(p: f64) -> bool {
    p > 0.5 && p < 1.0
}

/// One named check in a [`TheoryReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name:            &'static str,
    pub cases:           usize,
    pub counterexamples: Vec<String>
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryReport {
    pub max_n:  usize,
    pub checks: Vec<CheckResult>
}

impl TheoryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// `0.05, 0.10, ..., 0.95` without `0.5`.
pub fn lemma_grid() -> Vec<f64> {
    (1..=19).filter(|&i| i != 10).map(|i| i as f64 * 0.05).collect()
}

/// `0.55, 0.60, ..., 0.95`.
pub fn theorem_grid() -> Vec<f64> {
    (11..=19).map(|i| i as f64 * 0.05).collect()
}

/// Every target over `n` variables with exactly `m` literals.
pub fn targets_with_m(n: usize, m: usize) -> impl Iterator<Item = TargetConjunction> {
    // each variable: absent, positive or negative
    let total = 3usize.pow(n as u32);
    (0..total).filter_map(move |mut code| {
        let mut lits = Vec::with_capacity(m);
        for var in 0..n {
            match code % 3 {
                1 => lits.push(Literal::positive(var)),
                2 => lits.push(Literal::negative(var)),
                _ => {}
            }
            code /= 3;
        }
        (lits.len() == m).then(|| TargetConjunction::from_literals(n, lits).expect("valid by construction"))
    })
}

fn check_frequencies(max_n: usize) -> Result<CheckResult> {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            for target in targets_with_m(n, m) {
                for k in 1..=2 * n {
                    let lit = Literal::from_id(k, n)?;
                    let lc = classify_literal(&target, lit);
                    let counted = freq_enumerate(&target, lit)?;
                    let closed = freq_closed_form(n, m, lc)?;
                    cases += 1;
                    if counted != closed || counted.total() != 1u64 << n {
                        bad.push(format!("n={n} target={target} literal={lit}: {counted:?} vs {closed:?}"));
                    }
                }
            }
        }
    }
    Ok(CheckResult {
        name: "enumerated class counts equal closed forms",
        cases,
        counterexamples: bad
    })
}

fn check_alpha_identities(max_n: usize) -> Result<CheckResult> {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            let l1 = freq_closed_form(n, m, LiteralClass::L1)?.alphas(n);
            let l2 = freq_closed_form(n, m, LiteralClass::L2)?.alphas(n);
            cases += 2;
            if l1[3] != 0.5 {
                bad.push(format!("n={n} m={m}: alpha_1,4 = {}", l1[3]));
            }
            if l2[2] != 0.5 {
                bad.push(format!("n={n} m={m}: alpha_2,3 = {}", l2[2]));
            }
            if m < n {
                let l3 = freq_closed_form(n, m, LiteralClass::L3)?.alphas(n);
                cases += 1;
                if l3[0] + l3[2] != 0.5 {
                    bad.push(format!("n={n} m={m}: alpha_3,1 + alpha_3,3 = {}", l3[0] + l3[2]));
                }
            }
        }
    }
    Ok(CheckResult {
        name: "alpha identities",
        cases,
        counterexamples: bad
    })
}

fn check_lemma() -> CheckResult {
    let grid = lemma_grid();
    let mut cases = 0;
    let mut bad = Vec::new();
    for &p in &grid {
        for &alpha in &grid {
            cases += 1;
            let value = lemma1_value(p, alpha);
            let expected = (p > 0.5 && alpha > 0.5) || (p < 0.5 && alpha < 0.5);
            // off the 0.5 lines the value is bounded away from 0.5
            let strict = if expected {
                value > 0.5 + STRICT_MARGIN
            } else {
                value <= 0.5 - STRICT_MARGIN
            };
            if lemma1_exceeds_half(p, alpha) != expected || !strict {
                bad.push(format!("p={p} alpha={alpha}: value {value}"));
            }
        }
    }
    CheckResult {
        name: "lemma biconditional on the 0.05 grid",
        cases,
        counterexamples: bad
    }
}

fn check_theorem_direction(max_n: usize) -> Result<CheckResult> {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            for &p in &theorem_grid() {
                for lc in LiteralClass::ALL {
                    if lc == LiteralClass::L3 && m == n {
                        continue;
                    }
                    cases += 1;
                    let r = reinforcement_probs(lc, n, m, p)?;
                    let (hi, lo) = match lc {
                        LiteralClass::L1 => (r.include, r.exclude),
                        _ => (r.exclude, r.include)
                    };
                    if !(hi > 0.5 + STRICT_MARGIN && lo < 0.5 - STRICT_MARGIN) {
                        bad.push(format!("{lc} n={n} m={m} p={p}: I+={} E+={}", r.include, r.exclude));
                    }
                }
            }
        }
    }
    Ok(CheckResult {
        name: "reinforcement direction for 0.5 < p < 1",
        cases,
        counterexamples: bad
    })
}

fn check_l3_boundary(max_n: usize) -> Result<CheckResult> {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 2..=max_n {
        for m in 1..n {
            cases += 1;
            let r = reinforcement_probs(LiteralClass::L3, n, m, 1.0)?;
            if r.exclude != 0.5 {
                bad.push(format!("n={n} m={m}: E+ = {}", r.exclude));
            }
        }
    }
    Ok(CheckResult {
        name: "irrelevant literals lose their exclude bias at p = 1",
        cases,
        counterexamples: bad
    })
}

fn check_closed_forms_against_class_sums(max_n: usize) -> Result<CheckResult> {
    let mut cases = 0;
    let mut bad = Vec::new();
    let ps: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    for n in 1..=max_n {
        for m in 1..=n {
            for &p in &ps {
                for lc in LiteralClass::ALL {
                    if lc == LiteralClass::L3 && m == n {
                        continue;
                    }
                    cases += 1;
                    let a = reinforcement_probs(lc, n, m, p)?;
                    let b = reinforcement_by_class_sum(lc, n, m, p)?;
                    let close = (a.include - b.include).abs() < STRICT_MARGIN
                        && (a.exclude - b.exclude).abs() < STRICT_MARGIN
                        && (a.include + a.exclude - 1.0).abs() < STRICT_MARGIN;
                    if !close {
                        bad.push(format!("{lc} n={n} m={m} p={p}: {a:?} vs {b:?}"));
                    }
                }
            }
        }
    }
    Ok(CheckResult {
        name: "closed-form reinforcement equals class-weighted sum",
        cases,
        counterexamples: bad
    })
}

/// Runs every theory check for `n <= max_n`.
pub fn verify_theory(max_n: usize) -> Result<TheoryReport> {
    if max_n == 0 || max_n > MAX_ENUMERATION_FEATURES {
        return Err(Error::InvalidParameter(format!(
            "max n must lie in 1..={MAX_ENUMERATION_FEATURES}, got {max_n}"
        )));
    }
    Ok(TheoryReport {
        max_n,
        checks: vec![
            check_frequencies(max_n)?,
            check_alpha_identities(max_n)?,
            check_lemma(),
            check_theorem_direction(max_n)?,
            check_l3_boundary(max_n)?,
            check_closed_forms_against_class_sums(max_n)?,
        ]
    })
}
