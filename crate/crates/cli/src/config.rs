//! Job configuration: a TOML document with a `command`, optional run
//! settings and a `[params]` table whose schema depends on the command.
//! Validation walks the whole document and reports every violation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cantor_core::crossed_product::SpectrumBounds;
use cantor_core::dynamics::OdometerSpec;
use cantor_core::fredholm::{ChoiceFunction, ChoicePair, ChoiceSpec, DiracExponent, OddCycleSpec, Side};
use cantor_core::k_theory::IndexHom;
use cantor_core::symbolic::{Alphabet, IndicatorCombination, Language, Point, Subshift, Word};
use sha2::{Digest, Sha256};
use thiserror::Error;
use toml::{Table, Value};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_UNITARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Space,
    Dynamics,
    K0,
    GmDemo,
    PairEven,
    PairOdd,
    Trace,
    Summability,
    Synthesize,
    Crossed,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Space,
        Command::Dynamics,
        Command::K0,
        Command::GmDemo,
        Command::PairEven,
        Command::PairOdd,
        Command::Trace,
        Command::Summability,
        Command::Synthesize,
        Command::Crossed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Space => "space",
            Command::Dynamics => "dynamics",
            Command::K0 => "k0",
            Command::GmDemo => "gm-demo",
            Command::PairEven => "pair-even",
            Command::PairOdd => "pair-odd",
            Command::Trace => "trace",
            Command::Summability => "summability",
            Command::Synthesize => "synthesize",
            Command::Crossed => "crossed",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
            format!("unknown command `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Dsv,
    Doc,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dsv" => Ok(Format::Dsv),
            "doc" => Ok(Format::Doc),
            _ => Err(format!("unknown format `{s}` (expected dsv or doc)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub tolerance: f64,
    pub unitary_tolerance: f64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// A symbolic space: a subshift, or the digit space of an odometer.
#[derive(Debug, Clone)]
pub enum Space {
    Shift(Subshift),
    Odometer(OdometerSpec),
}

impl Space {
    pub fn language(&self) -> &dyn Language {
        match self {
            Space::Shift(s) => s,
            Space::Odometer(o) => o,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.language().alphabet()
    }
}

#[derive(Debug, Clone)]
pub enum DynamicsSystem {
    Odometer(OdometerSpec),
    GoldenMean,
}

#[derive(Debug, Clone)]
pub enum K0System {
    GoldenMean { elements: Vec<(usize, Vec<i64>)>, target_level: usize },
    Odometer { spec: OdometerSpec, functions: Vec<IndicatorCombination> },
}

#[derive(Debug, Clone)]
pub enum Growth {
    FullShift(u32),
    Counts(Vec<u128>),
    Language(Space),
}

#[derive(Debug, Clone)]
pub enum TraceKind {
    Even { pair: ChoicePair, f: IndicatorCombination },
    Odd { spec: OddCycleSpec, power: i64, window: usize },
}

#[derive(Debug, Clone)]
pub enum Params {
    Space {
        space: Space,
        max_level: usize,
        list_level: usize,
    },
    Dynamics {
        system: DynamicsSystem,
        depth: usize,
        points: Vec<Point>,
        steps: i64,
        samples: usize,
    },
    K0(K0System),
    GmDemo {
        level: usize,
    },
    PairEven {
        space: Space,
        pair: ChoicePair,
        words: Vec<Word>,
        level: usize,
        order: usize,
    },
    PairOdd {
        space: Space,
        spec: OddCycleSpec,
        powers: Vec<i64>,
        window: usize,
        level: usize,
        order: usize,
        weight: f64,
    },
    Trace {
        space: Space,
        kind: TraceKind,
        orders: Vec<usize>,
        level: usize,
        schatten: Vec<f64>,
    },
    Summability {
        weight: f64,
        exponent: DiracExponent,
        ps: Vec<f64>,
        depth: usize,
        growth: Growth,
    },
    Synthesize {
        space: Space,
        level: usize,
        target: IndexHom,
    },
    Crossed {
        odometer: OdometerSpec,
        pair: ChoicePair,
        weight: f64,
        base_p: f64,
        qs: Vec<f64>,
        depth: usize,
        bounds: SpectrumBounds,
        head: usize,
        decay_word: Word,
        m_range: (i64, i64),
    },
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: Command,
    pub params: Params,
    pub settings: Settings,
    /// SHA-256 of the configuration document, hex encoded.
    pub hash: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Malformed(String),
    #[error("{} schema violation(s):\n{}", .0.len(), .0.iter().map(|s| format!("  {s}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<String>),
}

impl ConfigError {
    pub fn issues(&self) -> Vec<String> {
        match self {
            ConfigError::Malformed(m) => vec![m.clone()],
            ConfigError::Invalid(v) => v.clone(),
        }
    }
}

pub fn config_hash(document: &str) -> String {
    hex::encode(Sha256::digest(document.as_bytes()))
}

/// Collected schema violations.
#[derive(Default)]
struct Issues(Vec<String>);

impl Issues {
    fn push(&mut self, path: &str, msg: impl fmt::Display) {
        self.0.push(format!("{path}: {msg}"));
    }
}

/// A table being validated, with its dotted path for messages.
struct Node<'a> {
    table: &'a Table,
    path: String,
}

fn type_name(v: &Value) -> &'static str {
    v.type_str()
}

impl<'a> Node<'a> {
    fn root(table: &'a Table) -> Self {
        Self { table, path: String::new() }
    }

    fn key(&self, k: &str) -> String {
        if self.path.is_empty() {
            k.to_string()
        } else {
            format!("{}.{k}", self.path)
        }
    }

    fn has(&self, k: &str) -> bool {
        self.table.contains_key(k)
    }

    fn child(&self, k: &str, is: &mut Issues) -> Option<Node<'a>> {
        match self.table.get(k)? {
            Value::Table(t) => Some(Node { table: t, path: self.key(k) }),
            v => {
                is.push(&self.key(k), format!("expected a table, found {}", type_name(v)));
                None
            }
        }
    }

    fn required(&self, k: &str, is: &mut Issues) -> Option<&'a Value> {
        let v = self.table.get(k);
        if v.is_none() {
            is.push(&self.key(k), "missing required key");
        }
        v
    }

    fn unknown_keys(&self, allowed: &[&str], is: &mut Issues) {
        for k in self.table.keys() {
            if !allowed.contains(&k.as_str()) {
                is.push(&self.key(k), format!("unknown key (allowed: {})", allowed.join(", ")));
            }
        }
    }

    fn as_int(&self, k: &str, v: &Value, lo: i64, hi: i64, is: &mut Issues) -> Option<i64> {
        match v {
            Value::Integer(x) if (lo..=hi).contains(x) => Some(*x),
            Value::Integer(x) => {
                is.push(&self.key(k), format!("{x} is out of range [{lo}, {hi}]"));
                None
            }
            v => {
                is.push(&self.key(k), format!("expected an integer, found {}", type_name(v)));
                None
            }
        }
    }

    fn int(&self, k: &str, lo: i64, hi: i64, is: &mut Issues) -> Option<i64> {
        self.required(k, is).and_then(|v| self.as_int(k, v, lo, hi, is))
    }

    fn opt_int(&self, k: &str, default: i64, lo: i64, hi: i64, is: &mut Issues) -> Option<i64> {
        match self.table.get(k) {
            None => Some(default),
            Some(v) => self.as_int(k, v, lo, hi, is),
        }
    }

    fn as_float(&self, k: &str, v: &Value, check: (&str, fn(f64) -> bool), is: &mut Issues) -> Option<f64> {
        let x = match v {
            Value::Float(x) => *x,
            Value::Integer(x) => *x as f64,
            v => {
                is.push(&self.key(k), format!("expected a number, found {}", type_name(v)));
                return None;
            }
        };
        if !x.is_finite() || !(check.1)(x) {
            is.push(&self.key(k), format!("{x} must be {}", check.0));
            return None;
        }
        Some(x)
    }

    fn float(&self, k: &str, check: (&str, fn(f64) -> bool), is: &mut Issues) -> Option<f64> {
        self.required(k, is).and_then(|v| self.as_float(k, v, check, is))
    }

    fn opt_float(&self, k: &str, default: f64, check: (&str, fn(f64) -> bool), is: &mut Issues) -> Option<f64> {
        match self.table.get(k) {
            None => Some(default),
            Some(v) => self.as_float(k, v, check, is),
        }
    }

    /// A number or an array of numbers.
    fn floats(
        &self,
        k: &str,
        default: Option<Vec<f64>>,
        check: (&str, fn(f64) -> bool),
        is: &mut Issues,
    ) -> Option<Vec<f64>> {
        match self.table.get(k) {
            None if default.is_some() => default,
            None => {
                is.push(&self.key(k), "missing required key");
                None
            }
            Some(Value::Array(a)) if a.is_empty() => {
                is.push(&self.key(k), "must not be empty");
                None
            }
            Some(Value::Array(a)) => {
                let out: Vec<Option<f64>> =
                    a.iter().enumerate().map(|(i, v)| self.as_float(&format!("{k}[{i}]"), v, check, is)).collect();
                out.into_iter().collect()
            }
            Some(v) => self.as_float(k, v, check, is).map(|x| vec![x]),
        }
    }

    fn ints(&self, k: &str, default: Option<Vec<i64>>, lo: i64, hi: i64, is: &mut Issues) -> Option<Vec<i64>> {
        match self.table.get(k) {
            None if default.is_some() => default,
            None => {
                is.push(&self.key(k), "missing required key");
                None
            }
            Some(Value::Array(a)) => {
                let out: Vec<Option<i64>> =
                    a.iter().enumerate().map(|(i, v)| self.as_int(&format!("{k}[{i}]"), v, lo, hi, is)).collect();
                out.into_iter().collect()
            }
            Some(v) => self.as_int(k, v, lo, hi, is).map(|x| vec![x]),
        }
    }

    fn as_str(&self, k: &str, v: &'a Value, is: &mut Issues) -> Option<&'a str> {
        match v {
            Value::String(s) => Some(s),
            v => {
                is.push(&self.key(k), format!("expected a string, found {}", type_name(v)));
                None
            }
        }
    }

    fn str(&self, k: &str, is: &mut Issues) -> Option<&'a str> {
        self.required(k, is).and_then(|v| self.as_str(k, v, is))
    }

    fn opt_str(&self, k: &str, is: &mut Issues) -> Option<Option<&'a str>> {
        match self.table.get(k) {
            None => Some(None),
            Some(v) => self.as_str(k, v, is).map(Some),
        }
    }

    fn strs(&self, k: &str, is: &mut Issues) -> Option<Vec<&'a str>> {
        match self.required(k, is)? {
            Value::Array(a) => {
                let out: Vec<Option<&str>> =
                    a.iter().enumerate().map(|(i, v)| self.as_str(&format!("{k}[{i}]"), v, is)).collect();
                out.into_iter().collect()
            }
            v => {
                is.push(&self.key(k), format!("expected an array, found {}", type_name(v)));
                None
            }
        }
    }

    fn choice_of<T>(&self, k: &str, default: Option<T>, options: &[(&str, T)], is: &mut Issues) -> Option<T>
    where
        T: Clone,
    {
        match self.opt_str(k, is)? {
            None if default.is_some() => default,
            None => {
                is.push(&self.key(k), "missing required key");
                None
            }
            Some(s) => match options.iter().find(|(n, _)| *n == s) {
                Some((_, v)) => Some(v.clone()),
                None => {
                    let names: Vec<_> = options.iter().map(|(n, _)| *n).collect();
                    is.push(&self.key(k), format!("`{s}` is not one of {}", names.join(", ")));
                    None
                }
            },
        }
    }
}

const POSITIVE: (&str, fn(f64) -> bool) = ("positive", |x| x > 0.0);
const ABOVE_ONE: (&str, fn(f64) -> bool) = ("greater than 1", |x| x > 1.0);
const ANY: (&str, fn(f64) -> bool) = ("finite", |_| true);

fn word_in(node: &Node<'_>, k: &str, text: &str, space: &Space, is: &mut Issues) -> Option<Word> {
    match space.alphabet().parse_word(text) {
        Ok(w) if space.language().is_admissible(&w) => Some(w),
        Ok(_) => {
            is.push(&node.key(k), format!("word `{text}` is not admissible"));
            None
        }
        Err(e) => {
            is.push(&node.key(k), format!("word `{text}`: {e}"));
            None
        }
    }
}

fn point_in(node: &Node<'_>, k: &str, text: &str, alphabet: &Alphabet, is: &mut Issues) -> Option<Point> {
    match alphabet.parse_point(text) {
        Ok(p) => Some(p),
        Err(e) => {
            is.push(&node.key(k), format!("point `{text}`: {e}"));
            None
        }
    }
}

fn words_in(node: &Node<'_>, k: &str, space: &Space, is: &mut Issues) -> Option<Vec<Word>> {
    let texts = node.strs(k, is)?;
    let out: Vec<Option<Word>> =
        texts.iter().enumerate().map(|(i, t)| word_in(node, &format!("{k}[{i}]"), t, space, is)).collect();
    out.into_iter().collect()
}

/// `{ "word" = coefficient, ... }`.
fn word_table(node: &Node<'_>, k: &str, space: &Space, is: &mut Issues) -> Option<BTreeMap<Word, i64>> {
    let t = node.child(k, is);
    if t.is_none() && !node.has(k) {
        is.push(&node.key(k), "missing required key");
    }
    let t = t?;
    let mut out = BTreeMap::new();
    let mut ok = true;
    for (w, v) in t.table {
        let word = word_in(&t, w, w, space, is);
        let c = t.as_int(w, v, -1_000_000, 1_000_000, is);
        match (word, c) {
            (Some(word), Some(c)) => {
                out.insert(word, c);
            }
            _ => ok = false,
        }
    }
    ok.then_some(out)
}

fn alphabet_of(node: &Node<'_>, is: &mut Issues) -> Option<Alphabet> {
    let v = node.required("alphabet", is)?;
    let result = match v {
        Value::Integer(n) if *n < 2 => {
            is.push(&node.key("alphabet"), format!("alphabet size {n} is too small; size ≥ 2 required"));
            return None;
        }
        Value::Integer(n) if *n > 36 => {
            is.push(&node.key("alphabet"), format!("alphabet size {n} exceeds 36"));
            return None;
        }
        Value::Integer(n) => Alphabet::digits(*n as usize),
        Value::Array(a) => {
            let names: Option<Vec<String>> = a.iter().map(|v| v.as_str().map(str::to_string)).collect();
            match names {
                Some(n) if n.len() < 2 => {
                    is.push(
                        &node.key("alphabet"),
                        format!("alphabet size {} is too small; size ≥ 2 required", n.len()),
                    );
                    return None;
                }
                Some(n) => Alphabet::new(n),
                None => {
                    is.push(&node.key("alphabet"), "symbols must be strings");
                    return None;
                }
            }
        }
        v => {
            is.push(
                &node.key("alphabet"),
                format!("expected an integer or an array of symbols, found {}", type_name(v)),
            );
            return None;
        }
    };
    match result {
        Ok(a) => Some(a),
        Err(e) => {
            is.push(&node.key("alphabet"), e);
            None
        }
    }
}

/// `[…language]`: a preset, or an alphabet with optional forbidden words and
/// initial symbols. Absent means the full binary shift.
fn space_of(parent: &Node<'_>, k: &str, is: &mut Issues) -> Option<Space> {
    if !parent.has(k) {
        return Some(Space::Shift(Subshift::full(Alphabet::binary())));
    }
    let node = parent.child(k, is)?;
    node.unknown_keys(&["preset", "alphabet", "forbidden", "initial"], is);
    if node.has("preset") {
        if node.has("alphabet") || node.has("forbidden") || node.has("initial") {
            is.push(&node.path, "`preset` excludes alphabet, forbidden and initial");
        }
        return node
            .choice_of(
                "preset",
                None,
                &[
                    ("full-binary", Subshift::full(Alphabet::binary())),
                    ("golden-mean", Subshift::golden_mean()),
                    ("golden-mean-paths", Subshift::golden_mean_paths()),
                ],
                is,
            )
            .map(Space::Shift);
    }
    let alphabet = alphabet_of(&node, is)?;
    let full = Space::Shift(Subshift::full(alphabet.clone()));
    let forbidden = if node.has("forbidden") {
        let texts = node.strs("forbidden", is)?;
        let mut out = Vec::new();
        for (i, t) in texts.iter().enumerate() {
            match alphabet.parse_word(t) {
                Ok(w) if !w.is_empty() => out.push(w),
                Ok(_) => is.push(&node.key(&format!("forbidden[{i}]")), "forbidden words must be nonempty"),
                Err(e) => is.push(&node.key(&format!("forbidden[{i}]")), format!("word `{t}`: {e}")),
            }
        }
        out
    } else {
        Vec::new()
    };
    let mut shift = match Subshift::with_forbidden(alphabet.clone(), forbidden) {
        Ok(s) => s,
        Err(e) => {
            is.push(&node.path, e);
            return Some(full);
        }
    };
    if node.has("initial") {
        let texts = node.strs("initial", is)?;
        let mut symbols = Vec::new();
        for (i, t) in texts.iter().enumerate() {
            match alphabet.index_of(t) {
                Some(s) => symbols.push(s),
                None => is.push(&node.key(&format!("initial[{i}]")), format!("unknown symbol `{t}`")),
            }
        }
        match shift.clone().with_initial(symbols) {
            Ok(s) => shift = s,
            Err(e) => is.push(&node.key("initial"), e),
        }
    }
    if shift.level(1).is_empty() {
        is.push(&node.path, "language has no words of length 1");
    }
    Some(Space::Shift(shift))
}

/// `"binary"`, or `{ preperiod = [...], period = [...] }`.
fn odometer_of(parent: &Node<'_>, k: &str, is: &mut Issues) -> Option<OdometerSpec> {
    match parent.required(k, is)? {
        Value::String(s) if s == "binary" => Some(OdometerSpec::binary()),
        Value::String(s) => {
            is.push(&parent.key(k), format!("unknown odometer `{s}` (use \"binary\" or a table)"));
            None
        }
        Value::Table(_) => {
            let node = parent.child(k, is)?;
            node.unknown_keys(&["preperiod", "period"], is);
            let pre = node.ints("preperiod", Some(Vec::new()), 2, 36, is);
            let period = node.ints("period", None, 2, 36, is);
            let (pre, period) = (pre?, period?);
            let to_u32 = |v: Vec<i64>| v.into_iter().map(|x| x as u32).collect();
            match OdometerSpec::new(to_u32(pre), to_u32(period)) {
                Ok(o) => Some(o),
                Err(e) => {
                    is.push(&node.path, e);
                    None
                }
            }
        }
        v => {
            is.push(&parent.key(k), format!("expected a string or a table, found {}", type_name(v)));
            None
        }
    }
}

/// `{ rule = "constant-tail", tail = "0" }`, `{ rule = "golden-parity" }` or
/// `{ rule = "table", default_tail = "0", entries = { "01" = "01(1)" } }`.
fn choice_of(parent: &Node<'_>, k: &str, space: &Space, is: &mut Issues) -> Option<ChoiceFunction> {
    let node = parent.child(k, is);
    if node.is_none() && !parent.has(k) {
        is.push(&parent.key(k), "missing required key");
    }
    let node = node?;
    let rule = node.str("rule", is)?;
    let alphabet = space.alphabet();
    let tail_of = |key: &str, is: &mut Issues| -> Option<Word> {
        let text = node.str(key, is)?;
        match alphabet.parse_word(text) {
            Ok(w) if !w.is_empty() => Some(w),
            Ok(_) => {
                is.push(&node.key(key), "tail must be nonempty");
                None
            }
            Err(e) => {
                is.push(&node.key(key), format!("word `{text}`: {e}"));
                None
            }
        }
    };
    let spec = match rule {
        "constant-tail" => {
            node.unknown_keys(&["rule", "tail"], is);
            ChoiceSpec::ConstantTail { tail: tail_of("tail", is)? }
        }
        "golden-parity" => {
            node.unknown_keys(&["rule"], is);
            if alphabet.len() != 3 {
                is.push(&node.key("rule"), "golden-parity needs the three-letter path alphabet");
                return None;
            }
            ChoiceSpec::GoldenParity
        }
        "table" => {
            node.unknown_keys(&["rule", "default_tail", "entries"], is);
            let tail = tail_of("default_tail", is);
            let mut entries = BTreeMap::new();
            if let Some(t) = node.child("entries", is) {
                for (w, v) in t.table {
                    let word = word_in(&t, w, w, space, is);
                    let p = t.as_str(w, v, is).and_then(|s| point_in(&t, w, s, alphabet, is));
                    if let (Some(word), Some(p)) = (word, p) {
                        entries.insert(word, p);
                    }
                }
            }
            ChoiceSpec::Table { default_tail: tail?, entries }
        }
        other => {
            is.push(&node.key("rule"), format!("unknown rule `{other}` (constant-tail, golden-parity, table)"));
            return None;
        }
    };
    match ChoiceFunction::from_spec(spec) {
        Ok(f) => Some(f),
        Err(e) => {
            is.push(&node.path, e);
            None
        }
    }
}

fn pair_of(node: &Node<'_>, space: &Space, is: &mut Issues) -> Option<ChoicePair> {
    let plus = choice_of(node, "plus", space, is);
    let minus = choice_of(node, "minus", space, is);
    let restriction = match node.opt_str("restriction", is) {
        Some(Some(t)) => Some(word_in(node, "restriction", t, space, is)),
        Some(None) => Some(None),
        None => None,
    };
    let (plus, minus, restriction) = (plus?, minus?, restriction?);
    Some(ChoicePair { plus, minus, restriction })
}

fn side_of(node: &Node<'_>, is: &mut Issues) -> Option<Side> {
    node.choice_of("side", Some(Side::Positive), &[("positive", Side::Positive), ("negative", Side::Negative)], is)
}

fn odd_spec_of(node: &Node<'_>, space: &Space, is: &mut Issues) -> Option<OddCycleSpec> {
    let tau = choice_of(node, "tau", space, is);
    let words = words_in(node, "words", space, is);
    let side = side_of(node, is);
    Some(OddCycleSpec::new(tau?, words?, side?))
}

const MAX_LEVEL: i64 = 12;

fn params_space(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(&["language", "max_level", "list_level"], is);
    let space = space_of(p, "language", is);
    let max_level = p.opt_int("max_level", 4, 0, MAX_LEVEL, is);
    let list_level = p.opt_int("list_level", 3, 0, MAX_LEVEL, is);
    Some(Params::Space { space: space?, max_level: max_level? as usize, list_level: list_level? as usize })
}

fn params_dynamics(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(&["system", "odometer", "depth", "points", "steps", "samples"], is);
    let system =
        p.choice_of("system", Some("odometer"), &[("odometer", "odometer"), ("golden-mean", "golden-mean")], is)?;
    let depth = p.opt_int("depth", 4, 1, MAX_LEVEL, is);
    let steps = p.opt_int("steps", 8, -10_000, 10_000, is);
    let samples = p.opt_int("samples", 100, 0, 100_000, is);
    let (system, alphabet) = if system == "odometer" {
        let spec = if p.has("odometer") { odometer_of(p, "odometer", is) } else { Some(OdometerSpec::binary()) };
        let spec = spec?;
        let a = spec.alphabet().clone();
        (DynamicsSystem::Odometer(spec), a)
    } else {
        if p.has("odometer") {
            is.push(&p.key("odometer"), "only used with system = \"odometer\"");
        }
        (DynamicsSystem::GoldenMean, Alphabet::digits(3).expect("three symbols"))
    };
    let points = if p.has("points") {
        let texts = p.strs("points", is)?;
        let parsed: Vec<Option<Point>> =
            texts.iter().enumerate().map(|(i, t)| point_in(p, &format!("points[{i}]"), t, &alphabet, is)).collect();
        parsed.into_iter().collect::<Option<Vec<_>>>()?
    } else {
        Vec::new()
    };
    if let (DynamicsSystem::Odometer(spec), true) = (&system, !points.is_empty()) {
        for (i, pt) in points.iter().enumerate() {
            if let Err(e) = spec.validate_point(pt) {
                is.push(&p.key(&format!("points[{i}]")), e);
            }
        }
    }
    if matches!(system, DynamicsSystem::GoldenMean) && !points.is_empty() {
        is.push(&p.key("points"), "point orbits are only available for odometers");
    }
    Some(Params::Dynamics { system, depth: depth? as usize, points, steps: steps?, samples: samples? as usize })
}

fn params_k0(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    let system = p.choice_of("system", None, &[("golden-mean", "golden-mean"), ("odometer", "odometer")], is)?;
    if system == "golden-mean" {
        p.unknown_keys(&["system", "elements", "target_level"], is);
        let target = p.opt_int("target_level", 6, 1, 40, is);
        let mut elements = Vec::new();
        match p.required("elements", is) {
            Some(Value::Array(a)) => {
                for (i, v) in a.iter().enumerate() {
                    let key = format!("elements[{i}]");
                    let Value::Table(t) = v else {
                        is.push(&p.key(&key), "expected a table { level, vector }");
                        continue;
                    };
                    let n = Node { table: t, path: p.key(&key) };
                    n.unknown_keys(&["level", "vector"], is);
                    let level = n.int("level", 1, 40, is);
                    let vector = n.ints("vector", None, -1_000_000_000, 1_000_000_000, is);
                    if let Some(v) = &vector {
                        if v.len() != 2 {
                            is.push(&n.key("vector"), format!("expected 2 entries, found {}", v.len()));
                            continue;
                        }
                    }
                    if let (Some(l), Some(v)) = (level, vector) {
                        elements.push((l as usize, v));
                    }
                }
            }
            Some(v) => is.push(&p.key("elements"), format!("expected an array, found {}", type_name(v))),
            None => {}
        }
        let target = target? as usize;
        for (i, (l, _)) in elements.iter().enumerate() {
            if *l > target {
                is.push(&p.key(&format!("elements[{i}].level")), format!("level {l} is above target_level {target}"));
            }
        }
        Some(Params::K0(K0System::GoldenMean { elements, target_level: target }))
    } else {
        p.unknown_keys(&["system", "odometer", "functions"], is);
        let spec = if p.has("odometer") { odometer_of(p, "odometer", is)? } else { OdometerSpec::binary() };
        let space = Space::Odometer(spec.clone());
        let mut functions = Vec::new();
        match p.required("functions", is) {
            Some(Value::Array(a)) => {
                for (i, v) in a.iter().enumerate() {
                    let key = format!("functions[{i}]");
                    let Value::Table(t) = v else {
                        is.push(&p.key(&key), "expected a table of word = coefficient");
                        continue;
                    };
                    let wrapper = Table::from_iter([(key.clone(), Value::Table(t.clone()))]);
                    let n = Node { table: &wrapper, path: p.path.clone() };
                    if let Some(m) = word_table(&n, &key, &space, is) {
                        functions.push(IndicatorCombination::from_terms(m));
                    }
                }
            }
            Some(v) => is.push(&p.key("functions"), format!("expected an array, found {}", type_name(v))),
            None => {}
        }
        Some(Params::K0(K0System::Odometer { spec, functions }))
    }
}

fn params_gm_demo(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(&["level"], is);
    let level = p.opt_int("level", 1, 1, 4, is)?;
    Some(Params::GmDemo { level: level as usize })
}

fn params_pair_even(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(&["language", "plus", "minus", "restriction", "words", "max_len", "level", "order"], is);
    let space = space_of(p, "language", is)?;
    let pair = pair_of(p, &space, is);
    let words = match (p.has("words"), p.has("max_len")) {
        (true, true) => {
            is.push(&p.path, "give either `words` or `max_len`, not both");
            None
        }
        (true, false) => words_in(p, "words", &space, is),
        (false, _) => p.opt_int("max_len", 3, 0, 8, is).map(|n| space.language().words_up_to(n as usize)),
    };
    let order = p.opt_int("order", 2, 2, 12, is);
    if order.is_some_and(|n| n % 2 != 0) {
        is.push(&p.key("order"), "even pairings need an even order");
    }
    let (pair, words, order) = (pair?, words?, order?);
    let needed = words.iter().map(Word::len).max().unwrap_or(0).max(pair.restriction.as_ref().map_or(0, Word::len));
    let level = p.opt_int("level", needed as i64 + 2, needed as i64, MAX_LEVEL, is)?;
    Some(Params::PairEven { space, pair, words, level: level as usize, order: order as usize })
}

fn params_pair_odd(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(&["language", "tau", "words", "side", "powers", "window", "level", "order", "weight"], is);
    let space = space_of(p, "language", is)?;
    let spec = odd_spec_of(p, &space, is);
    let powers = p.ints("powers", Some(vec![1]), -20, 20, is);
    let order = p.opt_int("order", 1, 1, 11, is);
    if order.is_some_and(|n| n % 2 == 0) {
        is.push(&p.key("order"), "odd pairings need an odd order");
    }
    let weight = p.opt_float("weight", 3.0, ABOVE_ONE, is);
    let (spec, powers, order, weight) = (spec?, powers?, order?, weight?);
    let kmax = powers.iter().map(|k| k.abs()).max().unwrap_or(0);
    let window = p.opt_int("window", kmax + 2, kmax + 1, 60, is);
    let needed = spec.words().iter().map(Word::len).max().unwrap_or(0) as i64;
    let level = p.opt_int("level", needed.clamp(4, MAX_LEVEL), needed, 8, is);
    Some(Params::PairOdd {
        space,
        spec,
        powers,
        window: window? as usize,
        level: level? as usize,
        order: order as usize,
        weight,
    })
}

fn params_trace(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    let parity = p.choice_of("parity", None, &[("even", true), ("odd", false)], is)?;
    let space = space_of(p, "language", is)?;
    let schatten = p.floats("schatten", Some(vec![1.0, 2.0]), POSITIVE, is);
    if parity {
        p.unknown_keys(
            &["parity", "language", "plus", "minus", "restriction", "function", "orders", "level", "schatten"],
            is,
        );
        let pair = pair_of(p, &space, is);
        let f = word_table(p, "function", &space, is).map(IndicatorCombination::from_terms);
        let orders = p.ints("orders", Some(vec![2, 4, 6]), 2, 12, is);
        if let Some(o) = &orders {
            if o.iter().any(|n| n % 2 != 0) {
                is.push(&p.key("orders"), "even trace formulas need even orders");
            }
        }
        let (pair, f, orders) = (pair?, f?, orders?);
        if !f.is_projection(space.language()) {
            is.push(&p.key("function"), "function must be a projection (0/1 valued)");
        }
        let needed = f.max_len().max(pair.restriction.as_ref().map_or(0, Word::len)) as i64;
        let level = p.opt_int("level", needed + 2, needed, MAX_LEVEL, is)?;
        Some(Params::Trace {
            space,
            kind: TraceKind::Even { pair, f },
            orders: orders.into_iter().map(|n| n as usize).collect(),
            level: level as usize,
            schatten: schatten?,
        })
    } else {
        p.unknown_keys(
            &["parity", "language", "tau", "words", "side", "power", "orders", "window", "level", "schatten"],
            is,
        );
        let spec = odd_spec_of(p, &space, is);
        let power = p.opt_int("power", 1, -20, 20, is);
        let orders = p.ints("orders", Some(vec![1, 3, 5]), 1, 11, is);
        if let Some(o) = &orders {
            if o.iter().any(|n| n % 2 == 0) {
                is.push(&p.key("orders"), "odd trace formulas need odd orders");
            }
        }
        let (spec, power, orders) = (spec?, power?, orders?);
        let window = p.opt_int("window", power.abs() + 2, power.abs() + 1, 60, is);
        let needed = spec.words().iter().map(Word::len).max().unwrap_or(0) as i64;
        let level = p.opt_int("level", needed.max(2), needed, 8, is);
        Some(Params::Trace {
            space,
            kind: TraceKind::Odd { spec, power, window: window? as usize },
            orders: orders.into_iter().map(|n| n as usize).collect(),
            level: level? as usize,
            schatten: schatten?,
        })
    }
}

fn params_summability(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(&["weight", "p", "depth", "exponent", "omega", "counts", "language"], is);
    let weight = p.float("weight", ABOVE_ONE, is);
    let ps = p.floats("p", None, POSITIVE, is);
    let exponent = p.choice_of(
        "exponent",
        Some(DiracExponent::Word),
        &[("word", DiracExponent::Word), ("lifted", DiracExponent::Lifted)],
        is,
    );
    let given: Vec<&str> = ["omega", "counts", "language"].into_iter().filter(|k| p.has(k)).collect();
    if given.len() > 1 {
        is.push(&p.path, format!("give only one of omega, counts, language (found {})", given.join(", ")));
    }
    let (growth, max_depth) = match given.first().copied() {
        Some("counts") => {
            let c = p.ints("counts", None, 0, i64::MAX, is);
            if c.as_ref().is_some_and(|c| c.len() < 2) {
                is.push(&p.key("counts"), "need counts for at least levels 0 and 1");
            }
            let n = c.as_ref().map_or(1, |c| c.len() as i64 - 1);
            (c.map(|c| Growth::Counts(c.into_iter().map(|x| x as u128).collect())), n.max(1))
        }
        Some("language") => (space_of(p, "language", is).map(Growth::Language), 16),
        _ => {
            let omega = p.opt_int("omega", 2, 2, 64, is);
            // omega^depth must fit in u128
            let cap = omega.map_or(126, |o| (127.0 / (o as f64).log2()).floor() as i64);
            (omega.map(|o| Growth::FullShift(o as u32)), cap)
        }
    };
    let depth = p.opt_int("depth", 30.min(max_depth), 1, max_depth, is);
    Some(Params::Summability { weight: weight?, exponent: exponent?, ps: ps?, depth: depth? as usize, growth: growth? })
}

fn params_synthesize(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(&["language", "level", "target", "target_level"], is);
    let space = space_of(p, "language", is)?;
    let level = p.opt_int("level", 3, 1, 8, is);
    let target = word_table(p, "target", &space, is);
    let (level, target) = (level?, target?);
    let deepest = target.keys().map(Word::len).max().unwrap_or(0) as i64;
    let target_level = p.opt_int("target_level", level.max(deepest), level.max(deepest), 10, is)?;
    match IndexHom::new(target_level as usize, target) {
        Ok(t) => {
            if let Err(e) = t.check(space.language(), target_level as usize) {
                is.push(&p.key("target"), e);
            }
            Some(Params::Synthesize { space, level: level as usize, target: t })
        }
        Err(e) => {
            is.push(&p.key("target"), e);
            None
        }
    }
}

fn params_crossed(p: &Node<'_>, is: &mut Issues) -> Option<Params> {
    p.unknown_keys(
        &[
            "odometer",
            "plus",
            "minus",
            "restriction",
            "weight",
            "base_p",
            "q",
            "depth",
            "n_max",
            "m_max",
            "word_level",
            "head",
            "decay_word",
            "m_min",
            "m_max_decay",
        ],
        is,
    );
    let odometer = if p.has("odometer") { odometer_of(p, "odometer", is)? } else { OdometerSpec::binary() };
    let space = Space::Odometer(odometer.clone());
    let pair = pair_of(p, &space, is);
    let weight = p.opt_float("weight", 4.0, ABOVE_ONE, is);
    let base_p = p.opt_float("base_p", 1.0, POSITIVE, is);
    let qs = p.floats("q", None, ANY, is);
    let depth = p.opt_int("depth", 20, 1, 200, is);
    let n_max = p.opt_int("n_max", 20, 0, 60, is);
    let m_max = p.opt_int("m_max", 20, 0, 1000, is);
    let word_level = p.opt_int("word_level", 6, 0, 10, is);
    let head = p.opt_int("head", 20, 0, 10_000, is);
    let decay_word = match p.opt_str("decay_word", is) {
        Some(Some(t)) => word_in(p, "decay_word", t, &space, is),
        Some(None) => Some(Word::new(vec![0])),
        None => None,
    };
    let m_min = p.opt_int("m_min", -50, -100_000, 100_000, is);
    let m_hi = p.opt_int("m_max_decay", 50, -100_000, 100_000, is);
    if let (Some(a), Some(b)) = (m_min, m_hi) {
        if a > b {
            is.push(&p.key("m_min"), format!("m_min {a} exceeds m_max_decay {b}"));
        }
    }
    Some(Params::Crossed {
        odometer,
        pair: pair?,
        weight: weight?,
        base_p: base_p?,
        qs: qs?,
        depth: depth? as usize,
        bounds: SpectrumBounds { n_max: n_max? as u32, m_max: m_max? as u32, word_level: word_level? as usize },
        head: head? as usize,
        decay_word: decay_word?,
        m_range: (m_min?, m_hi?),
    })
}

/// Parse and validate a configuration document. Every violation found is
/// reported; parameter checks continue past the first failure wherever the
/// remaining checks do not depend on it.
pub fn parse_config(document: &str) -> Result<JobConfig, ConfigError> {
    parse_config_for(document, None)
}

/// Like [`parse_config`], with the command supplied out of band. The document
/// may then omit `command`; if it names one, the two must agree.
pub fn parse_config_for(document: &str, requested: Option<Command>) -> Result<JobConfig, ConfigError> {
    let root: Table = document.parse().map_err(|e: toml::de::Error| ConfigError::Malformed(e.message().to_string()))?;
    let node = Node::root(&root);
    let mut is = Issues::default();
    node.unknown_keys(&["command", "tolerance", "unitary_tolerance", "seed", "format", "out", "params"], &mut is);
    let named = if requested.is_some() && !node.has("command") {
        requested
    } else {
        node.str("command", &mut is).and_then(|s| match s.parse::<Command>() {
            Ok(c) => Some(c),
            Err(e) => {
                is.push("command", e);
                None
            }
        })
    };
    let command = match (named, requested) {
        (Some(a), Some(b)) if a != b => {
            is.push("command", format!("document is for `{a}` but `{b}` was requested"));
            None
        }
        (c, _) => c,
    };
    let tolerance = node.opt_float("tolerance", DEFAULT_TOLERANCE, POSITIVE, &mut is);
    let unitary_tolerance = node.opt_float("unitary_tolerance", DEFAULT_UNITARY_TOLERANCE, POSITIVE, &mut is);
    let seed = node.opt_int("seed", 0, 0, i64::MAX, &mut is);
    let format = match node.opt_str("format", &mut is) {
        Some(Some(s)) => s.parse::<Format>().map_err(|e| is.push("format", e)).ok(),
        Some(None) => Some(Format::default()),
        None => None,
    };
    let out = node.opt_str("out", &mut is).map(|o| o.map(PathBuf::from));
    let empty = Table::new();
    let params_node = if node.has("params") {
        node.child("params", &mut is)
    } else {
        Some(Node { table: &empty, path: "params".into() })
    };
    let params = match (command, params_node) {
        (Some(c), Some(p)) => match c {
            Command::Space => params_space(&p, &mut is),
            Command::Dynamics => params_dynamics(&p, &mut is),
            Command::K0 => params_k0(&p, &mut is),
            Command::GmDemo => params_gm_demo(&p, &mut is),
            Command::PairEven => params_pair_even(&p, &mut is),
            Command::PairOdd => params_pair_odd(&p, &mut is),
            Command::Trace => params_trace(&p, &mut is),
            Command::Summability => params_summability(&p, &mut is),
            Command::Synthesize => params_synthesize(&p, &mut is),
            Command::Crossed => params_crossed(&p, &mut is),
        },
        _ => None,
    };
    match (command, params, tolerance, unitary_tolerance, seed, format, out) {
        (
            Some(command),
            Some(params),
            Some(tolerance),
            Some(unitary_tolerance),
            Some(seed),
            Some(format),
            Some(out),
        ) if is.0.is_empty() => Ok(JobConfig {
            command,
            params,
            settings: Settings { tolerance, unitary_tolerance, seed: seed as u64, format, out },
            hash: config_hash(document),
        }),
        _ => {
            if is.0.is_empty() {
                is.0.push("configuration rejected".into());
            }
            Err(ConfigError::Invalid(is.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_pair_odd() {
        let cfg = parse_config(
            r#"
            command = "pair-odd"
            [params]
            language = { alphabet = 2 }
            tau = { rule = "constant-tail", tail = "0" }
            words = ["0"]
            side = "positive"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::PairOdd);
        let Params::PairOdd { spec, window, level, .. } = cfg.params else { panic!() };
        assert_eq!(spec.size(), 1);
        assert_eq!((window, level), (3, 4));
        assert_eq!(cfg.settings.tolerance, 1e-9);
        assert_eq!(cfg.settings.unitary_tolerance, 1e-12);
    }

    #[test]
    fn alphabet_of_size_one_rejected() {
        let err = parse_config("command = \"space\"\n[params.language]\nalphabet = 1\n").unwrap_err();
        assert!(err.issues().iter().any(|m| m.contains("size ≥ 2")), "{err}");
        let err = parse_config("command = \"space\"\n[params.language]\nalphabet = [\"a\"]\n").unwrap_err();
        assert!(err.issues().iter().any(|m| m.contains("size ≥ 2")));
    }

    #[test]
    fn gm_demo_level_zero_rejected() {
        let err = parse_config("command = \"gm-demo\"\n[params]\nlevel = 0\n").unwrap_err();
        assert!(err.issues()[0].contains("params.level"));
    }

    #[test]
    fn all_violations_reported() {
        let err = parse_config(
            r#"
            command = "pair-odd"
            tolerance = -1.0
            format = "xml"
            [params]
            tau = { rule = "nope" }
            words = ["0", "2"]
            side = "up"
            bogus = 1
            "#,
        )
        .unwrap_err();
        let issues = err.issues();
        for needle in ["tolerance", "format", "params.tau.rule", "params.words[1]", "params.side", "params.bogus"] {
            assert!(issues.iter().any(|m| m.starts_with(needle)), "{needle} missing from {issues:?}");
        }
    }

    #[test]
    fn unknown_command_and_malformed() {
        let err = parse_config("command = \"frobnicate\"\n").unwrap_err();
        assert!(err.issues()[0].contains("unknown command"));
        assert!(matches!(parse_config("command = "), Err(ConfigError::Malformed(_))));
    }

    #[test]
    fn hash_is_of_the_document() {
        let doc = "command = \"gm-demo\"\n";
        let a = parse_config(doc).unwrap();
        assert_eq!(a.hash, config_hash(doc));
        assert_eq!(a.hash.len(), 64);
        assert_ne!(a.hash, parse_config("command = \"gm-demo\"\n\n").unwrap().hash);
    }

    #[test]
    fn inconsistent_synthesis_target() {
        let err = parse_config("command = \"synthesize\"\n[params]\nlevel = 2\ntarget = { \"0\" = 3, \"00\" = 1 }\n")
            .unwrap_err();
        assert!(err.issues().iter().any(|m| m.starts_with("params.target")));
    }
}
