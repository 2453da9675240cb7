//! Subshifts of finite type, locally constant potentials and eventually
//! periodic points.
//!
//! Symbols are stored as indices into [`SubshiftSystem::symbols`]. The
//! transition matrix is read row to column: `transition[i][j]` says whether
//! symbol `j` may follow symbol `i`. Shifts are one-sided.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite word over the symbol indices of a system.
pub type Word = Vec<usize>;

/// Function of a point that only looks at its first `depth` symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantPotential<T> {
    pub depth: usize,
    pub values: BTreeMap<Word, T>,
    /// Value used for allowed words missing from `values`.
    pub default: T,
}

impl<T: Scalar> LocallyConstantPotential<T> {
    pub fn constant(depth: usize, value: T) -> Self {
        Self { depth, values: BTreeMap::new(), default: value }
    }

    pub fn value(&self, word: &[usize]) -> T {
        debug_assert_eq!(word.len(), self.depth);
        self.values.get(word).copied().unwrap_or(self.default)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(T) -> U) -> LocallyConstantPotential<U> {
        LocallyConstantPotential {
            depth: self.depth,
            values: self.values.iter().map(|(w, v)| (w.clone(), f(*v))).collect(),
            default: f(self.default),
        }
    }
}

/// A one-sided subshift of finite type together with a locally constant
/// potential.
#[derive(Debug, Clone, PartialEq)]
pub struct SubshiftSystem<T> {
    pub symbols: Vec<String>,
    pub transition: Vec<Vec<bool>>,
    pub potential: LocallyConstantPotential<T>,
}

impl<T: Scalar> SubshiftSystem<T> {
    /// Validates and builds a system. `transition` must be a square 0/1
    /// matrix and every potential key an allowed word of length `depth`
    /// whose symbols all survive trimming.
    pub fn new(
        symbols: Vec<String>,
        transition: Vec<Vec<i64>>,
        potential: LocallyConstantPotential<T>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        let n = symbols.len();
        if n == 0 {
            return Err(Error::Empty("symbol list"));
        }
        if transition.len() != n {
            return Err(Error::NonSquare { rows: n, row: transition.len(), len: transition.len() });
        }
        let mut matrix = Vec::with_capacity(n);
        for (i, row) in transition.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare { rows: n, row: i, len: row.len() });
            }
            let mut bits = Vec::with_capacity(n);
            for (j, &entry) in row.iter().enumerate() {
                match entry {
                    0 => bits.push(false),
                    1 => bits.push(true),
                    value => return Err(Error::BadEntry { row: i, col: j, value }),
                }
            }
            matrix.push(bits);
        }
        if potential.depth < 1 {
            return Err(Error::BadDepth);
        }
        let system = Self { symbols, transition: matrix, potential };
        let alive = system.alive_symbols();
        for word in system.potential.values.keys() {
            let labels = || word.iter().map(|&s| system.label(s).to_string()).collect::<Vec<_>>();
            if word.len() != system.potential.depth {
                return Err(Error::Malformed(format!(
                    "potential word {:?} has length {}, depth is {}",
                    labels(),
                    word.len(),
                    system.potential.depth
                )));
            }
            if let Some(&bad) = word.iter().find(|&&s| s >= n) {
                return Err(Error::UnknownSymbol(bad.to_string()));
            }
            if !system.is_allowed_word(word) || !word.iter().all(|&s| alive[s]) {
                return Err(Error::DisallowedWord(labels()));
            }
        }
        Ok(system)
    }

    pub fn n_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn label(&self, symbol: usize) -> &str {
        &self.symbols[symbol]
    }

    pub fn symbol_index(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }

    pub fn allowed(&self, from: usize, to: usize) -> bool {
        self.transition[from][to]
    }

    pub fn is_allowed_word(&self, word: &[usize]) -> bool {
        word.iter().all(|&s| s < self.n_symbols()) && word.windows(2).all(|p| self.allowed(p[0], p[1]))
    }

    /// Symbols that admit an infinite forward continuation.
    pub fn alive_symbols(&self) -> Vec<bool> {
        let n = self.n_symbols();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                if alive[i] && !(0..n).any(|j| alive[j] && self.allowed(i, j)) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(T) -> U) -> SubshiftSystem<U> {
        SubshiftSystem {
            symbols: self.symbols.clone(),
            transition: self.transition.clone(),
            potential: self.potential.map_scalar(f),
        }
    }

    /// Same shift space with a different potential. The potential keys are
    /// re-validated.
    pub fn with_potential<U: Scalar>(&self, potential: LocallyConstantPotential<U>) -> Result<SubshiftSystem<U>> {
        SubshiftSystem::new(self.symbols.clone(), self.transition_as_ints(), potential)
    }

    pub fn transition_as_ints(&self) -> Vec<Vec<i64>> {
        self.transition.iter().map(|row| row.iter().map(|&b| b as i64).collect()).collect()
    }

    /// Parses a word given as a list of labels.
    pub fn word_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Word> {
        labels
            .iter()
            .map(|l| self.symbol_index(l.as_ref()).ok_or_else(|| Error::UnknownSymbol(l.as_ref().to_string())))
            .collect()
    }

    pub fn labels_of(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&s| self.label(s).to_string()).collect()
    }
}

// ---------------------------------------------------------------------------
// JSON document

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub symbols: Vec<String>,
    pub transition: Vec<Vec<i64>>,
    pub potential: PotentialDocument,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialDocument {
    pub depth: usize,
    #[serde(default)]
    pub default: f64,
    #[serde(default)]
    pub values: Vec<WordValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WordValue {
    pub word: Vec<String>,
    pub value: f64,
}

impl SystemDocument {
    pub fn into_system(self) -> Result<SubshiftSystem<f64>> {
        let n = self.symbols.len();
        let index: BTreeMap<&str, usize> = self.symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != n {
            let mut seen = BTreeSet::new();
            let dup = self.symbols.iter().find(|s| !seen.insert(s.as_str())).cloned().unwrap_or_default();
            return Err(Error::DuplicateSymbol(dup));
        }
        let mut values = BTreeMap::new();
        for entry in &self.potential.values {
            let word = entry
                .word
                .iter()
                .map(|l| index.get(l.as_str()).copied().ok_or_else(|| Error::UnknownSymbol(l.clone())))
                .collect::<Result<Word>>()?;
            if !entry.value.is_finite() {
                return Err(Error::Malformed(format!("non-finite potential value for {:?}", entry.word)));
            }
            if values.insert(word, entry.value).is_some() {
                return Err(Error::Malformed(format!("potential word {:?} listed twice", entry.word)));
            }
        }
        let potential = LocallyConstantPotential { depth: self.potential.depth, values, default: self.potential.default };
        SubshiftSystem::new(self.symbols, self.transition, potential)
    }

    pub fn from_system<T: Scalar>(system: &SubshiftSystem<T>) -> Self {
        SystemDocument {
            symbols: system.symbols.clone(),
            transition: system.transition_as_ints(),
            potential: PotentialDocument {
                depth: system.potential.depth,
                default: system.potential.default.as_f64(),
                values: system
                    .potential
                    .values
                    .iter()
                    .map(|(w, v)| WordValue { word: system.labels_of(w), value: v.as_f64() })
                    .collect(),
            },
        }
    }
}

/// Parses a system description document (JSON).
pub fn parse_system(text: &str) -> Result<SubshiftSystem<f64>> {
    let doc: SystemDocument = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.into_system()
}

// ---------------------------------------------------------------------------
// Points

/// The point `preperiod · period · period · …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventuallyPeriodicPoint {
    pub preperiod: Word,
    pub period: Word,
}

impl EventuallyPeriodicPoint {
    pub fn new(preperiod: Word, period: Word) -> Self {
        Self { preperiod, period }
    }

    pub fn periodic(period: Word) -> Self {
        Self { preperiod: Vec::new(), period }
    }

    pub fn symbol_at(&self, i: usize) -> usize {
        let n0 = self.preperiod.len();
        if i < n0 {
            self.preperiod[i]
        } else {
            self.period[(i - n0) % self.period.len()]
        }
    }

    /// `x_i … x_{i+len-1}`.
    pub fn window(&self, i: usize, len: usize) -> Word {
        (i..i + len).map(|j| self.symbol_at(j)).collect()
    }

    pub fn validate<T: Scalar>(&self, system: &SubshiftSystem<T>) -> Result<()> {
        if self.period.is_empty() {
            return Err(Error::InvalidPoint("period must be nonempty".into()));
        }
        let n = system.n_symbols();
        let len = self.preperiod.len() + 2 * self.period.len();
        let word = self.window(0, len);
        if let Some(&s) = word.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidPoint(format!("symbol index {s} out of range")));
        }
        if let Some(p) = word.windows(2).find(|p| !system.allowed(p[0], p[1])) {
            return Err(Error::InvalidPoint(format!(
                "transition {} -> {} is not allowed",
                system.label(p[0]),
                system.label(p[1])
            )));
        }
        Ok(())
    }

    /// The image under the shift map.
    pub fn shift(&self) -> Self {
        if self.preperiod.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            Self { preperiod: Vec::new(), period }
        } else {
            Self { preperiod: self.preperiod[1..].to_vec(), period: self.period.clone() }
        }
    }

    /// Parses `"pre|period"` with comma separated symbol labels, e.g.
    /// `"a|1,0"`.
    pub fn parse<T: Scalar>(text: &str, system: &SubshiftSystem<T>) -> Result<Self> {
        let (pre, per) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidPoint(format!("{text:?}: expected \"preperiod|period\"")))?;
        let word = |part: &str| -> Result<Word> {
            let part = part.trim();
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|l| system.symbol_index(l.trim()).ok_or_else(|| Error::UnknownSymbol(l.trim().to_string())))
                .collect()
        };
        let point = Self { preperiod: word(pre)?, period: word(per)? };
        point.validate(system)?;
        Ok(point)
    }

    pub fn display<'a, T>(&'a self, system: &'a SubshiftSystem<T>) -> PointDisplay<'a, T> {
        PointDisplay { point: self, system }
    }
}

pub struct PointDisplay<'a, T> {
    point: &'a EventuallyPeriodicPoint,
    system: &'a SubshiftSystem<T>,
}

impl<T> fmt::Display for PointDisplay<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[usize]| w.iter().map(|&s| self.system.symbols[s].as_str()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.point.preperiod), join(&self.point.period))
    }
}

/// `φ(x) + φ(Tx) + … + φ(T^{n-1}x)`, by unrolling the point.
pub fn birkhoff_sum<T: Scalar>(point: &EventuallyPeriodicPoint, n: usize, system: &SubshiftSystem<T>) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    point.validate(system)?;
    let k = system.potential.depth;
    Ok((0..n).fold(T::zero(), |acc, i| acc + system.potential.value(&point.window(i, k))))
}

/// The potential evaluated along the first `n` positions of `point`.
pub fn potential_along<T: Scalar>(point: &EventuallyPeriodicPoint, n: usize, system: &SubshiftSystem<T>) -> Vec<T> {
    let k = system.potential.depth;
    (0..n).map(|i| system.potential.value(&point.window(i, k))).collect()
}

pub fn shift(point: &EventuallyPeriodicPoint) -> EventuallyPeriodicPoint {
    point.shift()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const PAPER_DOC: &str = r#"{ "symbols": ["0","1","a"],
        "transition": [[0,1,0],[1,0,0],[0,1,0]],
        "potential": { "depth": 1, "default": 0.0,
                       "values": [ {"word": ["1"], "value": 1.0},
                                   {"word": ["a"], "value": 0.25} ] } }"#;

    #[test]
    fn parses_three_point_document() {
        let sys = parse_system(PAPER_DOC).unwrap();
        assert_eq!(sys.n_symbols(), 3);
        assert_eq!(sys.potential.value(&[0]), 0.0);
        assert_eq!(sys.potential.value(&[1]), 1.0);
        assert_eq!(sys.potential.value(&[2]), 0.25);
        assert!(sys.allowed(2, 1) && !sys.allowed(1, 2));
        assert_eq!(sys, fixtures::three_point_system(0.25));
    }

    #[test]
    fn parses_full_shift() {
        let doc = r#"{"symbols":["0","1"],"transition":[[1,1],[1,1]],"potential":{"depth":1,"default":0.0,"values":[]}}"#;
        let sys = parse_system(doc).unwrap();
        assert_eq!(sys.n_symbols(), 2);
        assert!(sys.transition.iter().flatten().all(|&b| b));
    }

    #[test]
    fn rejects_key_on_dead_symbol() {
        // symbol "x" has an all-zero row, so it is trimmed
        let doc = r#"{"symbols":["0","x"],"transition":[[1,1],[0,0]],
            "potential":{"depth":1,"values":[{"word":["x"],"value":1.0}]}}"#;
        assert_eq!(parse_system(doc), Err(Error::DisallowedWord(vec!["x".into()])));
        // the same system without the key is fine
        let ok = r#"{"symbols":["0","x"],"transition":[[1,1],[0,0]],"potential":{"depth":1}}"#;
        let sys = parse_system(ok).unwrap();
        assert_eq!(sys.alive_symbols(), vec![true, false]);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            (r#"{"symbols":["0"]}"#, "missing"),
            (r#"{"symbols":["0","1"],"transition":[[1,1]],"potential":{"depth":1}}"#, "rows"),
            (r#"{"symbols":["0","1"],"transition":[[1,1],[1]],"potential":{"depth":1}}"#, "ragged"),
            (r#"{"symbols":["0","1"],"transition":[[1,2],[1,1]],"potential":{"depth":1}}"#, "entry"),
            (r#"{"symbols":["0","1"],"transition":[[1,1],[1,1]],"potential":{"depth":0}}"#, "depth"),
            (r#"{"symbols":["0","0"],"transition":[[1,1],[1,1]],"potential":{"depth":1}}"#, "dup"),
            (
                r#"{"symbols":["0","1"],"transition":[[1,1],[1,1]],"potential":{"depth":1,"values":[{"word":["z"],"value":1}]}}"#,
                "unknown",
            ),
            (
                r#"{"symbols":["0","1"],"transition":[[1,1],[1,0]],"potential":{"depth":2,"values":[{"word":["1","1"],"value":1}]}}"#,
                "disallowed",
            ),
            (
                r#"{"symbols":["0","1"],"transition":[[1,1],[1,1]],"potential":{"depth":2,"values":[{"word":["1"],"value":1}]}}"#,
                "length",
            ),
        ];
        for (doc, what) in cases {
            let err = parse_system(doc).unwrap_err();
            let ok = match what {
                "missing" => matches!(err, Error::Malformed(_)),
                "rows" | "ragged" => matches!(err, Error::NonSquare { .. }),
                "entry" => matches!(err, Error::BadEntry { value: 2, .. }),
                "depth" => err == Error::BadDepth,
                "dup" => matches!(err, Error::DuplicateSymbol(_)),
                "unknown" => matches!(err, Error::UnknownSymbol(_)),
                "disallowed" => matches!(err, Error::DisallowedWord(_)),
                "length" => matches!(err, Error::Malformed(_)),
                _ => unreachable!(),
            };
            assert!(ok, "{what}: got {err:?}");
        }
    }

    #[test]
    fn document_round_trip() {
        let sys = fixtures::three_point_system(0.25);
        let doc = SystemDocument::from_system(&sys);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_system(&text).unwrap(), sys);
    }

    #[test]
    fn point_syntax() {
        let sys = fixtures::three_point_system(0.25);
        let p = EventuallyPeriodicPoint::parse("a|1,0", &sys).unwrap();
        assert_eq!(p, EventuallyPeriodicPoint::new(vec![2], vec![1, 0]));
        assert_eq!(p.display(&sys).to_string(), "a|1,0");
        let q = EventuallyPeriodicPoint::parse("|0,1", &sys).unwrap();
        assert_eq!(q, EventuallyPeriodicPoint::periodic(vec![0, 1]));
        // a(01)^∞ is not a point of this subshift: a cannot be followed by 0
        assert!(matches!(EventuallyPeriodicPoint::parse("a|0,1", &sys), Err(Error::InvalidPoint(_))));
        assert!(matches!(EventuallyPeriodicPoint::parse("|", &sys), Err(Error::InvalidPoint(_))));
        assert!(matches!(EventuallyPeriodicPoint::parse("0,1", &sys), Err(Error::InvalidPoint(_))));
        assert!(matches!(EventuallyPeriodicPoint::parse("|0,q", &sys), Err(Error::UnknownSymbol(_))));
        // wrap pair 1 -> 1 is forbidden
        assert!(EventuallyPeriodicPoint::parse("|1,0,1", &sys).is_err());
    }

    #[test]
    fn shift_examples() {
        let p = EventuallyPeriodicPoint::new(vec![2], vec![1, 0]);
        assert_eq!(p.shift(), EventuallyPeriodicPoint::periodic(vec![1, 0]));
        assert_eq!(p.shift().shift(), EventuallyPeriodicPoint::periodic(vec![0, 1]));
        let q = EventuallyPeriodicPoint::periodic(vec![0, 1, 1, 0, 0]);
        let mut r = q.clone();
        for _ in 0..q.period.len() {
            r = r.shift();
        }
        assert_eq!(r, q);
    }

    #[test]
    fn birkhoff_examples() {
        let sys = fixtures::three_point_system(0.25);
        let ten = EventuallyPeriodicPoint::periodic(vec![1, 0]);
        let zero_one = EventuallyPeriodicPoint::periodic(vec![0, 1]);
        assert_eq!(birkhoff_sum(&ten, 3, &sys).unwrap(), 2.0);
        assert_eq!(birkhoff_sum(&zero_one, 1, &sys).unwrap(), 0.0);
        assert!(birkhoff_sum(&ten, 0, &sys).is_err());
        let constant = fixtures::full_shift(2, 1.5);
        let p = EventuallyPeriodicPoint::new(vec![0, 0, 1], vec![1, 0, 1]);
        assert_eq!(birkhoff_sum(&p, 7, &constant).unwrap(), 7.0 * 1.5);
    }
}
