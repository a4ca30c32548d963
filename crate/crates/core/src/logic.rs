//! Literals, include masks, samples and target conjunctions.
//!
//! For `n` features the literal set is `x1..xn, NOT x1..NOT xn`. Literal ids
//! run `1..=2n` with ids above `n` denoting negations; internally masks are
//! indexed `0..2n` in the same order.

use std::fmt;

use crate::error::{Error, Result};

/// Largest feature count for which the full `2^n` sample set is materialized.
pub const MAX_ENUMERATION_FEATURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var:     usize,
    negated: bool
}

impl Literal {
    /// `x_{var+1}`; `var` is zero-based.
    pub const fn positive(var: usize) -> Self {
        Self { var, negated: false }
    }

    /// `NOT x_{var+1}`; `var` is zero-based.
    pub const fn negative(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// Literal with one-based id `k` in `1..=2n`.
    pub fn from_id(k: usize, n: usize) -> Result<Self> {
        match k {
            k if (1..=n).contains(&k) => Ok(Self::positive(k - 1)),
            k if (n + 1..=2 * n).contains(&k) => Ok(Self::negative(k - n - 1)),
            _ => Err(Error::InvalidParameter(format!("literal id {k} outside 1..={}", 2 * n)))
        }
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        if index < n {
            Self::positive(index)
        } else {
            Self::negative(index - n)
        }
    }

    pub const fn var(self) -> usize {
        self.var
    }

    pub const fn is_negated(self) -> bool {
        self.negated
    }

    pub const fn negate(self) -> Self {
        Self {
            var:     self.var,
            negated: !self.negated
        }
    }

    /// Zero-based position in a `2n` literal vector.
    pub const fn index(self, n: usize) -> usize {
        if self.negated {
            n + self.var
        } else {
            self.var
        }
    }

    pub const fn id(self, n: usize) -> usize {
        self.index(n) + 1
    }

    /// Truth value on `bits`; `None` if the variable is out of range.
    #[inline]
    pub fn eval(self, bits: &[bool]) -> Option<bool> {
        bits.get(self.var).map(|&b| b != self.negated)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "NOT x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

/// Value of literal id `k` (one-based) on a sample's bits.
pub fn literal_value(bits: &[bool], k: usize) -> Result<bool> {
    let lit = Literal::from_id(k, bits.len())?;
    Ok(lit.eval(bits).expect("id validated against bits length"))
}

/// Set of included literals over `2n` positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncludeMask {
    n:        usize,
    included: Vec<bool>
}

impl IncludeMask {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            included: vec![false; 2 * n]
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            included: vec![true; 2 * n]
        }
    }

    pub fn from_literals<I: IntoIterator<Item = Literal>>(n: usize, literals: I) -> Result<Self> {
        let mut mask = Self::empty(n);
        for lit in literals {
            if lit.var() >= n {
                return Err(Error::InvalidParameter(format!("{lit} out of range for n = {n}")));
            }
            mask.insert(lit);
        }
        Ok(mask)
    }

    /// Builds a mask from a `2n` inclusion vector.
    pub fn from_bools(included: Vec<bool>) -> Result<Self> {
        if !included.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "include vector has odd length {}",
                included.len()
            )));
        }
        Ok(Self {
            n: included.len() / 2,
            included
        })
    }

    /// Parses `x1 AND NOT x2`; `TRUE` or an empty string gives the empty mask.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text.eq_ignore_ascii_case("true") {
            return Ok(Self::empty(n));
        }
        let mut lits = Vec::new();
        for term in text.split(" AND ") {
            let term = term.trim();
            let (negated, name) = match term.strip_prefix("NOT ") {
                Some(rest) => (true, rest.trim()),
                None => (false, term)
            };
            let var = name
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::InvalidParameter(format!("cannot parse literal `{term}`")))?;
            lits.push(if negated {
                Literal::negative(var - 1)
            } else {
                Literal::positive(var - 1)
            });
        }
        Self::from_literals(n, lits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, lit: Literal) {
        let i = lit.index(self.n);
        self.included[i] = true;
    }

    pub fn remove(&mut self, lit: Literal) {
        let i = lit.index(self.n);
        self.included[i] = false;
    }

    pub fn contains(&self, lit: Literal) -> bool {
        lit.var() < self.n && self.included[lit.index(self.n)]
    }

    pub fn len(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.included.iter().any(|&b| b)
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.included
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        let n = self.n;
        self.included
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| Literal::from_index(i, n))
    }

    /// True when some variable is included with both polarities.
    pub fn is_contradictory(&self) -> bool {
        (0..self.n).any(|v| self.included[v] && self.included[self.n + v])
    }

    /// Conjunction of the included literals; the empty mask is true everywhere.
    #[inline]
    pub fn eval(&self, bits: &[bool]) -> Result<bool> {
        if bits.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual:   bits.len()
            });
        }
        Ok(self.eval_unchecked(bits))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, bits: &[bool]) -> bool {
        let (pos, neg) = self.included.split_at(self.n);
        bits.iter()
            .zip(pos.iter().zip(neg))
            .all(|(&b, (&p, &q))| (!p || b) && (!q || !b))
    }
}

impl fmt::Display for IncludeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("TRUE");
        }
        // variable order, positive before negative
        let mut lits: Vec<Literal> = self.literals().collect();
        lits.sort_by_key(|l| (l.var(), l.is_negated()));
        for (i, lit) in lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// Clause evaluation: 1 iff every included literal is 1 on `bits`.
pub fn clause_eval(mask: &IncludeMask, bits: &[bool]) -> Result<bool> {
    mask.eval(bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub bits:  Vec<bool>,
    pub label: bool
}

impl Sample {
    pub fn new(bits: Vec<bool>, label: bool) -> Self {
        Self { bits, label }
    }

    pub fn positive(bits: Vec<bool>) -> Self {
        Self::new(bits, true)
    }

    pub fn negative(bits: Vec<bool>) -> Self {
        Self::new(bits, false)
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }
}

/// Parses a `0`/`1` string such as `1010` into bits.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidParameter(format!("unexpected character `{other}` in bit string")))
        })
        .collect()
}

/// All `2^n` inputs in lexicographic order, `x1` most significant.
pub fn all_inputs(n: usize) -> Result<impl Iterator<Item = Vec<bool>>> {
    if n > MAX_ENUMERATION_FEATURES {
        return Err(Error::EnumerationBound {
            n,
            max: MAX_ENUMERATION_FEATURES
        });
    }
    Ok((0u64..1 << n).map(move |i| (0..n).map(|j| (i >> (n - 1 - j)) & 1 == 1).collect()))
}

/// Ground-truth conjunction: non-contradictory, `1 <= m <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TargetConjunction {
    mask: IncludeMask
}

impl TargetConjunction {
    pub fn new(mask: IncludeMask) -> Result<Self> {
        let m = mask.len();
        if m == 0 {
            return Err(Error::InvalidParameter("target conjunction needs at least one literal".into()));
        }
        if mask.is_contradictory() {
            return Err(Error::InvalidParameter(format!(
                "target conjunction `{mask}` uses a variable with both polarities"
            )));
        }
        Ok(Self { mask })
    }

    pub fn from_literals<I: IntoIterator<Item = Literal>>(n: usize, literals: I) -> Result<Self> {
        Self::new(IncludeMask::from_literals(n, literals)?)
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        Self::new(IncludeMask::parse(n, text)?)
    }

    pub fn n(&self) -> usize {
        self.mask.n()
    }

    /// Number of literals `m = |C_T|`.
    pub fn m(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &IncludeMask {
        &self.mask
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.mask.contains(lit)
    }

    /// Label of `bits` under the target: positive iff every literal holds.
    pub fn label(&self, bits: &[bool]) -> Result<bool> {
        self.mask.eval(bits)
    }

    /// Every input labeled by the target, in lexicographic order.
    pub fn truth_table(&self) -> Result<Vec<Sample>> {
        Ok(all_inputs(self.n())?
            .map(|bits| {
                let label = self.mask.eval_unchecked(&bits);
                Sample::new(bits, label)
            })
            .collect())
    }
}

impl fmt::Display for TargetConjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mask.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn literal_values_on_example_sample() {
        let e = [true, false, true, false];
        // satisfied: x1, NOT x2, x3, NOT x4
        for k in [1, 6, 3, 8] {
            assert!(literal_value(&e, k).unwrap(), "k={k}");
        }
        // violated: NOT x1, x2, NOT x3, x4
        for k in [5, 2, 7, 4] {
            assert!(!literal_value(&e, k).unwrap(), "k={k}");
        }
        let zeros = [false; 5];
        for j in 6..=10 {
            assert!(literal_value(&zeros, j).unwrap());
        }
        assert!(matches!(literal_value(&e, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(literal_value(&e, 9), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn literal_ids_round_trip() {
        for n in 1..6 {
            for k in 1..=2 * n {
                assert_eq!(Literal::from_id(k, n).unwrap().id(n), k);
            }
        }
    }

    #[test]
    fn clause_eval_examples() {
        let mask = IncludeMask::from_literals(2, [Literal::positive(0), Literal::negative(1)]).unwrap();
        assert!(clause_eval(&mask, &[true, false]).unwrap());
        assert!(!clause_eval(&mask, &[true, true]).unwrap());
        let empty = IncludeMask::empty(3);
        for bits in all_inputs(3).unwrap() {
            assert!(clause_eval(&empty, &bits).unwrap());
        }
        assert!(matches!(
            clause_eval(&mask, &[true]),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn contradictory_mask_rejects_everything() {
        let mask = IncludeMask::from_literals(3, [Literal::positive(1), Literal::negative(1)]).unwrap();
        assert!(mask.is_contradictory());
        assert!(all_inputs(3).unwrap().all(|bits| !mask.eval(&bits).unwrap()));
        assert!(TargetConjunction::new(mask).is_err());
    }

    #[test]
    fn display_and_parse() {
        let mask = IncludeMask::from_literals(3, [Literal::negative(1), Literal::positive(0)]).unwrap();
        assert_eq!(mask.to_string(), "x1 AND NOT x2");
        assert_eq!(IncludeMask::parse(3, "x1 AND NOT x2").unwrap(), mask);
        assert_eq!(IncludeMask::empty(2).to_string(), "TRUE");
        assert!(IncludeMask::parse(2, "x3").is_err());
        assert!(IncludeMask::parse(2, "y1").is_err());
    }

    #[test]
    fn inputs_are_lexicographic() {
        let rows: Vec<Vec<bool>> = all_inputs(2).unwrap().collect();
        assert_eq!(
            rows,
            vec![vec![false, false], vec![false, true], vec![true, false], vec![true, true]]
        );
        assert!(matches!(all_inputs(21), Err(Error::EnumerationBound { n: 21, .. })));
    }

    #[test]
    fn target_validation() {
        assert!(TargetConjunction::new(IncludeMask::empty(3)).is_err());
        let t = TargetConjunction::parse(3, "x1 AND NOT x2").unwrap();
        assert_eq!((t.n(), t.m()), (3, 2));
        let positives = t.truth_table().unwrap().iter().filter(|s| s.label).count();
        assert_eq!(positives, 2);
    }

    proptest! {
        // brute-force AND over included literal values, n <= 10
        #[test]
        fn clause_eval_matches_brute_force(n in 1usize..=10, raw in proptest::collection::vec(any::<bool>(), 20), x in any::<u16>()) {
            let mask = IncludeMask::from_bools(raw[..2 * n].to_vec()).unwrap();
            let bits: Vec<bool> = (0..n).map(|j| (x >> j) & 1 == 1).collect();
            let mut expected = true;
            for k in 1..=2 * n {
                if mask.as_bools()[k - 1] {
                    expected &= literal_value(&bits, k).unwrap();
                }
            }
            prop_assert_eq!(clause_eval(&mask, &bits).unwrap(), expected);
        }

        #[test]
        fn parse_inverts_display(n in 1usize..=8, raw in proptest::collection::vec(any::<bool>(), 16)) {
            let mask = IncludeMask::from_bools(raw[..2 * n].to_vec()).unwrap();
            prop_assert_eq!(IncludeMask::parse(n, &mask.to_string()).unwrap(), mask);
        }
    }
}
