//! Symbolic model of the Cantor set.
//!
//! Points of `Ω^ℕ` are restricted to eventually periodic sequences so that
//! equality and cylinder membership are decidable. Languages (full shifts,
//! finite-type subshifts, odometer digit spaces) are described by the
//! [`Language`] trait, which only needs to answer "which symbols may follow
//! this word".

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Symbol = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("alphabet must have at least two symbols, got {0}")]
    AlphabetTooSmall(usize),
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("symbol index {index} outside alphabet of size {size}")]
    AlphabetMismatch { index: usize, size: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("point period must be nonempty")]
    EmptyPeriod,
    #[error("malformed point `{0}`: expected `preperiod(period)`")]
    MalformedPoint(String),
    #[error("cannot normalize to level {level}: combination has a word of length {max_len}")]
    LevelTooLow { level: usize, max_len: usize },
    #[error("word `{0}` is not admissible")]
    Inadmissible(String),
}

/// Ordered finite set of symbol identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self, SymbolicError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.len() < 2 {
            return Err(SymbolicError::AlphabetTooSmall(symbols.len()));
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(SymbolicError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols })
    }

    /// Alphabet `{0, 1, ..., n-1}`.
    pub fn digits(n: usize) -> Result<Self, SymbolicError> {
        Self::new((0..n).map(|d| d.to_string()))
    }

    pub fn binary() -> Self {
        Self::digits(2).expect("two symbols")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, index: Symbol) -> Option<&str> {
        self.symbols.get(index as usize).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name).map(|i| i as Symbol)
    }

    fn single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub fn check_word(&self, word: &Word) -> Result<(), SymbolicError> {
        for &s in word.symbols() {
            if s as usize >= self.len() {
                return Err(SymbolicError::AlphabetMismatch { index: s as usize, size: self.len() });
            }
        }
        Ok(())
    }

    pub fn check_point(&self, point: &Point) -> Result<(), SymbolicError> {
        self.check_word(point.preperiod())?;
        self.check_word(point.period())
    }

    /// Words are written by concatenation for single-character alphabets and
    /// joined by `.` otherwise.
    pub fn format_word(&self, word: &Word) -> String {
        let parts = word.symbols().iter().map(|&s| self.symbol(s).unwrap_or("?"));
        if self.single_char() {
            parts.collect()
        } else {
            parts.collect::<Vec<_>>().join(".")
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, SymbolicError> {
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let symbols = if self.single_char() {
            text.chars()
                .map(|c| {
                    let s = c.to_string();
                    self.index_of(&s).ok_or(SymbolicError::UnknownSymbol(s))
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            text.split('.')
                .map(|s| self.index_of(s).ok_or_else(|| SymbolicError::UnknownSymbol(s.to_string())))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(Word::new(symbols))
    }

    /// `preperiod(period)`, e.g. `1(0)`.
    pub fn format_point(&self, point: &Point) -> String {
        format!("{}({})", self.format_word(point.preperiod()), self.format_word(point.period()))
    }

    pub fn parse_point(&self, text: &str) -> Result<Point, SymbolicError> {
        let text = text.trim();
        let open = text.find('(').ok_or_else(|| SymbolicError::MalformedPoint(text.to_string()))?;
        if !text.ends_with(')') || open + 1 > text.len() - 1 {
            return Err(SymbolicError::MalformedPoint(text.to_string()));
        }
        let pre = self.parse_word(&text[..open])?;
        let period = self.parse_word(&text[open + 1..text.len() - 1])?;
        Point::new(pre, period)
    }
}

/// Finite word over an alphabet, stored as symbol indices.
///
/// The derived order is lexicographic with prefixes first, which agrees with
/// the canonical enumeration order on words of a fixed length.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }

    pub fn child(&self, symbol: Symbol) -> Word {
        let mut v = self.0.clone();
        v.push(symbol);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n.min(self.len())..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Proper prefixes `ν` with `self = νλ`, `λ` nonempty, shortest first.
    pub fn prefixes(&self) -> Vec<Word> {
        (0..self.len()).map(|n| self.prefix(n)).collect()
    }

    pub fn common_prefix(&self, other: &Word) -> Word {
        let n = self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count();
        self.prefix(n)
    }

    /// Order used to enumerate `ℓ²(Y)`: by length, then lexicographically.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn contains_factor(&self, factor: &Word) -> bool {
        if factor.is_empty() {
            return true;
        }
        self.0.windows(factor.len()).any(|w| w == factor.symbols())
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// Eventually periodic one-sided sequence `preperiod · period · period · …`,
/// always held in canonical form (primitive period, shortest preperiod).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    preperiod: Word,
    period: Word,
}

impl Point {
    pub fn new(preperiod: Word, period: Word) -> Result<Self, SymbolicError> {
        if period.is_empty() {
            return Err(SymbolicError::EmptyPeriod);
        }
        Ok(Self::canonical(preperiod, period))
    }

    pub fn constant(symbol: Symbol) -> Self {
        Self { preperiod: Word::empty(), period: Word(vec![symbol]) }
    }

    /// `word · tail^∞`.
    pub fn with_tail(word: &Word, tail: &Word) -> Result<Self, SymbolicError> {
        Self::new(word.clone(), tail.clone())
    }

    fn canonical(preperiod: Word, period: Word) -> Self {
        let mut period = primitive_root(period.0);
        let mut pre = preperiod.0;
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Self { preperiod: Word(pre), period: Word(period) }
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// 0-based symbol access.
    pub fn symbol_at(&self, i: usize) -> Symbol {
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - pre) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.symbol_at(i)).collect())
    }

    /// Drop the first `k` symbols.
    pub fn shift(&self, k: usize) -> Point {
        let pre = self.preperiod.len();
        if k <= pre {
            Self::canonical(self.preperiod.suffix_from(k), self.period.clone())
        } else {
            let mut p = self.period.0.clone();
            p.rotate_left((k - pre) % self.period.len());
            Self::canonical(Word::empty(), Word(p))
        }
    }

    pub fn prepend(&self, word: &Word) -> Point {
        Self::canonical(word.concat(&self.preperiod), self.period.clone())
    }

    /// Number of leading symbols after which two canonical points that agree
    /// so far agree forever.
    pub fn comparison_horizon(&self, other: &Point) -> usize {
        let l = num_integer::lcm(self.period.len(), other.period.len());
        self.preperiod.len().max(other.preperiod.len()) + l
    }

    /// 1-based index of the first disagreement, `None` when equal.
    pub fn first_disagreement(&self, other: &Point) -> Option<usize> {
        (0..self.comparison_horizon(other)).find(|&i| self.symbol_at(i) != other.symbol_at(i)).map(|i| i + 1)
    }
}

fn primitive_root(mut v: Vec<Symbol>) -> Vec<Symbol> {
    let n = v.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| v[i] == v[i - d]) {
            v.truncate(d);
            return v;
        }
    }
    v
}

/// Distance `2^{-j+1}` where `j` is the (1-based) first index of disagreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Distance {
    first_disagreement: Option<usize>,
}

impl Distance {
    pub fn zero() -> Self {
        Self { first_disagreement: None }
    }

    pub fn first_disagreement(&self) -> Option<usize> {
        self.first_disagreement
    }

    pub fn is_zero(&self) -> bool {
        self.first_disagreement.is_none()
    }

    pub fn as_f64(&self) -> f64 {
        match self.first_disagreement {
            None => 0.0,
            Some(j) => 2f64.powi(1 - j as i32),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.first_disagreement, other.first_disagreement) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

pub fn metric(x: &Point, y: &Point) -> Distance {
    Distance { first_disagreement: x.first_disagreement(y) }
}

/// `C_μ`: all sequences beginning with `μ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderSet {
    word: Word,
}

impl CylinderSet {
    pub fn new(word: Word) -> Self {
        Self { word }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.word.symbols().iter().enumerate().all(|(i, &s)| p.symbol_at(i) == s)
    }

    /// `C_self ⊆ C_other`.
    pub fn is_subset_of(&self, other: &CylinderSet) -> bool {
        other.word.is_prefix_of(&self.word)
    }
}

pub fn cylinder_contains(alphabet: &Alphabet, p: &Point, mu: &Word) -> Result<bool, SymbolicError> {
    alphabet.check_point(p)?;
    alphabet.check_word(mu)?;
    Ok(CylinderSet::new(mu.clone()).contains(p))
}

/// The admissible finite words of a one-sided symbolic space.
pub trait Language: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    /// Symbols `a` such that `word · a` is admissible, in alphabet order.
    /// Only called on admissible words.
    fn next_symbols(&self, word: &Word) -> Vec<Symbol>;

    fn is_admissible(&self, word: &Word) -> bool {
        (0..word.len()).all(|n| self.next_symbols(&word.prefix(n)).contains(&word.symbols()[n]))
    }

    /// Children `μa` of an admissible word.
    fn refine(&self, word: &Word) -> Vec<Word> {
        self.next_symbols(word).into_iter().map(|a| word.child(a)).collect()
    }

    /// Admissible words of length `n`, lexicographic.
    fn level(&self, n: usize) -> Vec<Word> {
        let mut words = vec![Word::empty()];
        for _ in 0..n {
            words = words.iter().flat_map(|w| self.refine(w)).collect();
        }
        words
    }

    /// Admissible words of length `≤ n` in `(length, lex)` order.
    fn words_up_to(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut words = vec![Word::empty()];
        for k in 0..=n {
            if k > 0 {
                words = words.iter().flat_map(|w| self.refine(w)).collect();
            }
            out.extend(words.iter().cloned());
        }
        out
    }

    fn point_admissible(&self, p: &Point) -> bool;

    /// Some eventually periodic admissible point of `C_word`.
    fn extend_to_point(&self, word: &Word) -> Option<Point>;

    /// An admissible point of `C_word` that avoids `C_{word·avoid}`.
    fn extend_avoiding(&self, word: &Word, avoid: Symbol) -> Option<Point> {
        self.next_symbols(word).into_iter().filter(|&a| a != avoid).find_map(|a| self.extend_to_point(&word.child(a)))
    }
}

/// One-sided subshift of finite type: a forbidden-word list and an optional
/// set of allowed initial symbols. The empty list is the full shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subshift {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
    initial: Option<Vec<Symbol>>,
}

impl Subshift {
    pub fn full(alphabet: Alphabet) -> Self {
        Self { alphabet, forbidden: Vec::new(), initial: None }
    }

    pub fn with_forbidden(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self, SymbolicError> {
        for w in &forbidden {
            alphabet.check_word(w)?;
        }
        Ok(Self { alphabet, forbidden, initial: None })
    }

    pub fn with_initial(mut self, initial: Vec<Symbol>) -> Result<Self, SymbolicError> {
        for &s in &initial {
            if s as usize >= self.alphabet.len() {
                return Err(SymbolicError::AlphabetMismatch { index: s as usize, size: self.alphabet.len() });
            }
        }
        self.initial = Some(initial);
        Ok(self)
    }

    /// Binary sequences with no `11`.
    pub fn golden_mean() -> Self {
        Self::with_forbidden(Alphabet::binary(), vec![Word::new(vec![1, 1])]).expect("binary words")
    }

    /// Edge sequences of the stationary diagram with transition matrix
    /// `[[1,1],[1,0]]`, edges labelled `0,1` (into the first vertex) and `2`
    /// (into the second). Paths start at the root with `0` or `2`.
    pub fn golden_mean_paths() -> Self {
        let alphabet = Alphabet::digits(3).expect("three symbols");
        let forbidden = [[0, 1], [1, 1], [2, 0], [2, 2]].iter().map(|w| Word::new(w.to_vec())).collect();
        Self::with_forbidden(alphabet, forbidden).and_then(|s| s.with_initial(vec![0, 2])).expect("valid path subshift")
    }

    pub fn is_full(&self) -> bool {
        self.forbidden.is_empty() && self.initial.is_none()
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    fn max_forbidden_len(&self) -> usize {
        self.forbidden.iter().map(Word::len).max().unwrap_or(0)
    }

    fn ends_forbidden(&self, word: &Word) -> bool {
        self.forbidden.iter().any(|f| f.len() <= word.len() && word.symbols()[word.len() - f.len()..] == *f.symbols())
    }
}

impl Language for Subshift {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn next_symbols(&self, word: &Word) -> Vec<Symbol> {
        (0..self.alphabet.len() as Symbol)
            .filter(|&a| {
                if word.is_empty() {
                    if let Some(init) = &self.initial {
                        if !init.contains(&a) {
                            return false;
                        }
                    }
                }
                !self.ends_forbidden(&word.child(a))
            })
            .collect()
    }

    fn is_admissible(&self, word: &Word) -> bool {
        if self.alphabet.check_word(word).is_err() {
            return false;
        }
        if let (Some(init), Some(&first)) = (&self.initial, word.symbols().first()) {
            if !init.contains(&first) {
                return false;
            }
        }
        !self.forbidden.iter().any(|f| word.contains_factor(f))
    }

    fn point_admissible(&self, p: &Point) -> bool {
        let k = self.max_forbidden_len().max(1);
        let n = p.preperiod().len() + p.period().len() * (k + 1) + k;
        self.is_admissible(&p.prefix(n))
    }

    fn extend_to_point(&self, word: &Word) -> Option<Point> {
        if !self.is_admissible(word) {
            return None;
        }
        // Bounded search over connectors and short periods; enough for the
        // small finite-type shifts used here.
        let a = self.alphabet.len() as Symbol;
        let max_conn = 2usize;
        let max_period = 3usize;
        let mut connectors = vec![Word::empty()];
        for _ in 0..=max_conn {
            for conn in &connectors {
                for plen in 1..=max_period {
                    for period in all_words(a, plen) {
                        if let Ok(p) = Point::new(word.concat(conn), period) {
                            if self.point_admissible(&p) {
                                return Some(p);
                            }
                        }
                    }
                }
            }
            connectors = connectors.iter().flat_map(|c| (0..a).map(move |s| c.child(s))).collect();
        }
        None
    }
}

fn all_words(alphabet_size: Symbol, len: usize) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    for _ in 0..len {
        words = words.iter().flat_map(|w| (0..alphabet_size).map(move |s| w.child(s))).collect();
    }
    words
}

/// Integer combination of cylinder indicators, an element of `C(X, Z)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndicatorCombination {
    terms: BTreeMap<Word, i64>,
}

impl IndicatorCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1_X = χ_{C_ε}`.
    pub fn unit() -> Self {
        Self::indicator(Word::empty())
    }

    pub fn indicator(word: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(word, 1);
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn add_term(&mut self, word: Word, coefficient: i64) {
        let entry = self.terms.entry(word).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, &c)| (w.clone(), c * k)))
    }

    /// Value at a point: sum of the coefficients of the cylinders containing it.
    pub fn evaluate(&self, p: &Point) -> i64 {
        self.terms.iter().filter(|(w, _)| CylinderSet::new((*w).clone()).contains(p)).map(|(_, &c)| c).sum()
    }

    /// Rewrite every term at length `n` using `χ_{C_μ} = Σ_a χ_{C_{μa}}`.
    pub fn normalize_to_level(&self, language: &dyn Language, n: usize) -> Result<Self, SymbolicError> {
        let max_len = self.max_len();
        if n < max_len {
            return Err(SymbolicError::LevelTooLow { level: n, max_len });
        }
        let mut out = Self::zero();
        for (w, &c) in &self.terms {
            let mut frontier = vec![w.clone()];
            for _ in w.len()..n {
                frontier = frontier.iter().flat_map(|u| language.refine(u)).collect();
            }
            for u in frontier {
                out.add_term(u, c);
            }
        }
        Ok(out)
    }

    /// True if, at its own maximal level, every coefficient is 0 or 1.
    pub fn is_projection(&self, language: &dyn Language) -> bool {
        match self.normalize_to_level(language, self.max_len()) {
            Ok(n) => n.terms.values().all(|&c| c == 1),
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    fn pt(s: &str) -> Point {
        Alphabet::binary().parse_point(s).unwrap()
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(Alphabet::new(["a"]).unwrap_err(), SymbolicError::AlphabetTooSmall(1));
        assert!(matches!(Alphabet::new(["a", "a"]), Err(SymbolicError::DuplicateSymbol(_))));
        let a = Alphabet::new(["ab", "cd", "e"]).unwrap();
        let word = a.parse_word("cd.e.ab").unwrap();
        assert_eq!(word.symbols(), &[1, 2, 0]);
        assert_eq!(a.format_word(&word), "cd.e.ab");
    }

    #[test]
    fn cylinder_membership_examples() {
        let a = Alphabet::binary();
        assert!(cylinder_contains(&a, &pt("(0)"), &w("00")).unwrap());
        assert!(cylinder_contains(&a, &pt("1(0)"), &w("10")).unwrap());
        assert!(!cylinder_contains(&a, &pt("(10)"), &w("11")).unwrap());
        let bad = Word::new(vec![5]);
        assert!(matches!(cylinder_contains(&a, &pt("(0)"), &bad), Err(SymbolicError::AlphabetMismatch { .. })));
    }

    #[test]
    fn points_are_canonical() {
        assert_eq!(pt("0101(01)"), pt("(01)"));
        assert_eq!(pt("1(0000)"), pt("1(0)"));
        assert_eq!(pt("10(10)").preperiod().len(), 0);
        assert_eq!(Alphabet::binary().format_point(&pt("11(0)")), "11(0)");
        assert_eq!(pt("1(01)").shift(1), pt("(01)"));
        assert_eq!(pt("(01)").shift(3), pt("(10)"));
    }

    #[test]
    fn level_partition_examples() {
        let full = Subshift::full(Alphabet::binary());
        let names: Vec<String> = full.level(2).iter().map(|u| u.to_string()).collect();
        assert_eq!(names, ["00", "01", "10", "11"]);
        assert_eq!(full.level(0), vec![Word::empty()]);
        // brute force: {0,1}^3 minus words containing 11
        let brute = all_words(2, 3).into_iter().filter(|u| !u.contains_factor(&w("11"))).count();
        assert_eq!(brute, 5);
        assert_eq!(Subshift::golden_mean().level(3).len(), brute);
    }

    #[test]
    fn refine_examples() {
        let full = Subshift::full(Alphabet::binary());
        assert_eq!(full.refine(&w("0")), vec![w("00"), w("01")]);
        assert_eq!(full.refine(&Word::empty()), vec![w("0"), w("1")]);
        assert_eq!(Subshift::golden_mean().refine(&w("1")), vec![w("10")]);
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(w("010").prefixes(), vec![Word::empty(), w("0"), w("01")]);
        assert!(Word::empty().prefixes().is_empty());
    }

    #[test]
    fn metric_examples() {
        assert!(metric(&pt("(01)"), &pt("(01)")).is_zero());
        assert_eq!(metric(&pt("(0)"), &pt("1(0)")).as_f64(), 1.0);
        // 1010... and 1000... first differ at index 3
        assert_eq!(metric(&pt("(10)"), &pt("1(0)")).as_f64(), 0.25);
        assert_eq!(metric(&pt("(10)"), &pt("(1)")).as_f64(), 0.5);
    }

    #[test]
    fn normalize_examples() {
        let full = Subshift::full(Alphabet::binary());
        let unit = IndicatorCombination::unit().normalize_to_level(&full, 1).unwrap();
        assert_eq!(unit, IndicatorCombination::from_terms([(w("0"), 1), (w("1"), 1)]));
        assert_eq!(unit.normalize_to_level(&full, 1).unwrap(), unit);
        let f = IndicatorCombination::from_terms([(w("0"), 2), (w("01"), -1)]);
        let g = f.normalize_to_level(&full, 2).unwrap();
        assert_eq!(g, IndicatorCombination::from_terms([(w("00"), 2), (w("01"), 1)]));
        assert!(matches!(g.normalize_to_level(&full, 1), Err(SymbolicError::LevelTooLow { .. })));
    }

    #[test]
    fn golden_mean_paths_language() {
        let s = Subshift::golden_mean_paths();
        // path counts follow the Fibonacci recursion 2, 3, 5, 8, ...
        let counts: Vec<usize> = (1..=5).map(|n| s.level(n).len()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13]);
        let p = s.extend_to_point(&Word::new(vec![0, 2])).unwrap();
        assert!(s.point_admissible(&p));
        assert_eq!(p.prefix(3), Word::new(vec![0, 2, 1]));
    }
}
