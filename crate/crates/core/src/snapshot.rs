//! Line-oriented machine snapshots.
//!
//! PCL:
//!
//! ```text
//! pcl <N>
//! <n>
//! <p>                      # one pair of lines per clause
//! <s_1> <s_2> ... <s_2n>
//! ```
//!
//! Tsetlin Machine:
//!
//! ```text
//! tm <N>
//! <n>
//! <T> <s> <boost 0|1>
//! <s_1> <s_2> ... <s_2n>   # one line per clause
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so
//! `parse(&write(m)) == m` holds exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::automata::Automaton;
use crate::error::{Error, Result};
use crate::learner::{PclClause, PclMachine};
use crate::tm::TmMachine;

/// Either kind of machine, as read back from a snapshot.
#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Pcl(PclMachine),
    Tm(TmMachine)
}

impl Snapshot {
    pub fn to_text(&self) -> String {
        match self {
            Snapshot::Pcl(m) => write_pcl(m),
            Snapshot::Tm(m) => write_tm(m)
        }
    }
}

fn states_line(automata: &[Automaton]) -> String {
    let states: Vec<String> = automata.iter().map(|a| a.state().to_string()).collect();
    states.join(" ")
}

fn half_size(automata: &[Automaton]) -> u32 {
    automata.first().map_or(crate::DEFAULT_HALF_SIZE, Automaton::half_size)
}

pub fn write_pcl(m: &PclMachine) -> String {
    let half = half_size(m.clauses()[0].automata());
    let mut out = format!("pcl {half}\n{}\n", m.n());
    for c in m.clauses() {
        let _ = writeln!(out, "{}", c.p());
        let _ = writeln!(out, "{}", states_line(c.automata()));
    }
    out
}

pub fn write_tm(m: &TmMachine) -> String {
    let half = half_size(m.clauses()[0].automata());
    let mut out = format!(
        "tm {half}\n{}\n{} {} {}\n",
        m.n(),
        m.margin(),
        m.specificity(),
        u8::from(m.boost_true_positive())
    );
    for c in m.clauses() {
        let _ = writeln!(out, "{}", states_line(c.automata()));
    }
    out
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    next:  usize
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.lines().collect();
        while lines.last().is_some_and(|l| l.trim().is_empty()) {
            lines.pop();
        }
        Lines { lines, next: 0 }
    }

    fn line_no(&self) -> usize {
        self.next
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Snapshot {
            line:   self.next,
            reason: reason.into()
        }
    }

    fn take(&mut self, what: &str) -> Result<&'a str> {
        let line = self.lines.get(self.next).copied();
        self.next += 1;
        line.map(str::trim).ok_or_else(|| self.err(format!("missing {what}")))
    }

    fn done(&self) -> bool {
        self.next >= self.lines.len()
    }

    fn value<T: FromStr>(&self, token: &str, what: &str) -> Result<T> {
        token.parse().map_err(|_| self.err(format!("bad {what} '{token}'")))
    }

    fn header(&mut self, tag: &str) -> Result<u32> {
        let line = self.take("header")?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(tag) {
            return Err(self.err(format!("expected '{tag} <N>' header")));
        }
        let half = parts.next().ok_or_else(|| self.err("missing half-size"))?;
        let half = self.value(half, "half-size")?;
        if parts.next().is_some() {
            return Err(self.err("trailing tokens in header"));
        }
        Ok(half)
    }

    fn features(&mut self) -> Result<usize> {
        let line = self.take("feature count")?;
        let n: usize = self.value(line, "feature count")?;
        if n == 0 {
            return Err(self.err("feature count must be positive"));
        }
        Ok(n)
    }

    fn automata(&mut self, n: usize, half: u32) -> Result<Vec<Automaton>> {
        let line = self.take("state line")?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 * n {
            return Err(self.err(format!("expected {} states, found {}", 2 * n, tokens.len())));
        }
        tokens
            .iter()
            .map(|t| {
                let s = self.value(t, "state")?;
                Automaton::with_state(half, s).map_err(|e| self.err(e.to_string()))
            })
            .collect()
    }
}

pub fn parse_pcl(text: &str) -> Result<PclMachine> {
    let mut lines = Lines::new(text);
    let half = lines.header("pcl")?;
    let n = lines.features()?;
    let mut clauses = Vec::new();
    while !lines.done() {
        let p = lines.take("inclusion probability")?;
        let p: f64 = lines.value(p, "inclusion probability")?;
        let automata = lines.automata(n, half)?;
        clauses.push(PclClause::from_automata(automata, p).map_err(|e| lines.err(e.to_string()))?);
    }
    if clauses.is_empty() {
        return Err(lines.err("no clauses"));
    }
    PclMachine::from_clauses(clauses)
}

pub fn parse_tm(text: &str) -> Result<TmMachine> {
    let mut lines = Lines::new(text);
    let half = lines.header("tm")?;
    let n = lines.features()?;
    let params = lines.take("T s boost line")?;
    let tokens: Vec<&str> = params.split_whitespace().collect();
    let [t, s, boost] = tokens[..] else {
        return Err(lines.err("expected '<T> <s> <boost>'"));
    };
    let margin: u32 = lines.value(t, "margin")?;
    let specificity: f64 = lines.value(s, "specificity")?;
    let boost = match boost {
        "0" => false,
        "1" => true,
        other => return Err(lines.err(format!("bad boost flag '{other}'")))
    };
    let mut clauses = Vec::new();
    while !lines.done() {
        clauses.push(lines.automata(n, half)?);
    }
    let line = lines.line_no();
    TmMachine::from_parts(clauses, margin, specificity, boost).map_err(|e| Error::Snapshot {
        line,
        reason: e.to_string()
    })
}

/// Reads either kind, dispatching on the header tag.
pub fn parse(text: &str) -> Result<Snapshot> {
    let tag = text.split_whitespace().next();
    match tag {
        Some("pcl") => parse_pcl(text).map(Snapshot::Pcl),
        Some("tm") => parse_tm(text).map(Snapshot::Tm),
        _ => Err(Error::Snapshot {
            line:   1,
            reason: "unknown machine kind".into()
        })
    }
}

pub fn save(snapshot: &Snapshot, path: &Path) -> Result<()> {
    fs::write(path, snapshot.to_text()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source
    })
}

pub fn load(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source
    })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::automata::InitPolicy;
    use crate::tm::TmConfig;

    #[test]
    fn pcl_text_layout() {
        let c = PclClause::from_automata(
            [3, 2, 1, 4].iter().map(|&s| Automaton::with_state(2, s).unwrap()).collect(),
            0.75
        )
        .unwrap();
        let m = PclMachine::from_clauses(vec![c]).unwrap();
        assert_eq!(write_pcl(&m), "pcl 2\n2\n0.75\n3 2 1 4\n");
    }

    #[test]
    fn tm_text_layout() {
        let automata = vec![vec![Automaton::with_state(3, 4).unwrap(); 2], vec![Automaton::with_state(3, 1).unwrap(); 2]];
        let m = TmMachine::from_parts(automata, 2, 3.9, true).unwrap();
        assert_eq!(write_tm(&m), "tm 3\n1\n2 3.9 1\n4 4\n1 1\n");
    }

    #[test]
    fn dispatch_on_tag() {
        assert!(matches!(parse("pcl 2\n1\n1\n1 2\n").unwrap(), Snapshot::Pcl(_)));
        assert!(matches!(parse("tm 2\n1\n1 3.9 0\n1 2\n1 2\n").unwrap(), Snapshot::Tm(_)));
        assert!(matches!(parse("svm 2\n"), Err(Error::Snapshot { line: 1, .. })));
    }

    #[test]
    fn malformed_input_reports_line() {
        let cases = [
            ("pcl\n2\n", 1),
            ("pcl 2\n0\n", 2),
            ("pcl 2\n2\n0.5\n1 2 3\n", 4),
            ("pcl 2\n2\n0.5\n1 2 3 5\n", 4),
            ("pcl 2\n2\n1.5\n1 2 3 4\n", 4),
            ("pcl 2\n2\nabc\n1 2 3 4\n", 3),
            ("pcl 2\n2\n0.5\n", 4),
            ("pcl 2\n2\n", 2),
            ("tm 2\n1\n1 3.9\n1 1\n1 1\n", 3),
            ("tm 2\n1\n1 3.9 2\n1 1\n1 1\n", 3),
            ("tm 2\n1\n1 3.9 0\n1 1\n", 4)
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(Error::Snapshot { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}")
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let snap = Snapshot::Pcl(PclMachine::single(3, 0.6, 5, InitPolicy::UniformRandom, &mut rng).unwrap());
        save(&snap, &path).unwrap();
        assert_eq!(load(&path).unwrap(), snap);
        assert!(matches!(load(&dir.path().join("missing")), Err(Error::Io { .. })));
    }

    proptest! {
        #[test]
        fn pcl_round_trip(n in 1usize..6, half in 1u32..20, ps in proptest::collection::vec(0.0f64..=1.0, 1..4), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = PclMachine::new(n, &ps, half, InitPolicy::UniformRandom, &mut rng).unwrap();
            let text = write_pcl(&m);
            let back = parse_pcl(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(write_pcl(&back), text);
        }

        #[test]
        fn tm_round_trip(n in 1usize..6, half in 1u32..20, pairs in 1usize..4, t in 1u32..10, s in 1.01f64..50.0, boost in any::<bool>(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let config = TmConfig {
                clauses: 2 * pairs,
                margin: t,
                specificity: s,
                boost_true_positive: boost,
                half_size: half,
                init: InitPolicy::UniformRandom
            };
            let m = TmMachine::new(n, &config, &mut rng).unwrap();
            let text = write_tm(&m);
            let back = parse_tm(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(write_tm(&back), text);
        }
    }
}
