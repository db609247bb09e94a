//! Choice functions `τ : Y → X` satisfying the cylinder condition
//! `τ(μ) ∈ C_μ`, and a registry of named rules.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::symbolic::{CylinderSet, Point, Word};

use super::FredholmError;

/// A deterministic rule `Word → Point`.
pub trait ChoiceRule: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn choose(&self, mu: &Word) -> Point;
}

/// `μ ↦ μ · tail^∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantTail {
    pub tail: Word,
}

impl ChoiceRule for ConstantTail {
    fn name(&self) -> &'static str {
        "constant-tail"
    }

    fn choose(&self, mu: &Word) -> Point {
        Point::with_tail(mu, &self.tail).expect("tail is nonempty")
    }
}

/// On golden-mean edge sequences over `{0,1,2}`: `μ0^∞` when `μ` ends in
/// `0` or `1` (or is empty), `μ10^∞` when it ends in `2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldenParity;

impl ChoiceRule for GoldenParity {
    fn name(&self) -> &'static str {
        "golden-parity"
    }

    fn choose(&self, mu: &Word) -> Point {
        let zero = Word::new(vec![0]);
        match mu.last() {
            Some(2) => Point::with_tail(&mu.child(1), &zero),
            _ => Point::with_tail(mu, &zero),
        }
        .expect("nonempty tail")
    }
}

/// Explicit values on finitely many words, a constant tail elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRule {
    pub default_tail: Word,
    pub entries: BTreeMap<Word, Point>,
}

impl ChoiceRule for TableRule {
    fn name(&self) -> &'static str {
        "table"
    }

    fn choose(&self, mu: &Word) -> Point {
        match self.entries.get(mu) {
            Some(p) => p.clone(),
            None => Point::with_tail(mu, &self.default_tail).expect("nonempty tail"),
        }
    }
}

/// Parameters accepted by the registered rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoiceSpec {
    ConstantTail { tail: Word },
    GoldenParity,
    Table { default_tail: Word, entries: BTreeMap<Word, Point> },
}

impl ChoiceSpec {
    pub fn rule_name(&self) -> &'static str {
        match self {
            ChoiceSpec::ConstantTail { .. } => "constant-tail",
            ChoiceSpec::GoldenParity => "golden-parity",
            ChoiceSpec::Table { .. } => "table",
        }
    }
}

#[derive(Clone)]
pub struct ChoiceFunction {
    spec: ChoiceSpec,
    rule: Arc<dyn ChoiceRule>,
}

impl fmt::Debug for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChoiceFunction({:?})", self.spec)
    }
}

impl PartialEq for ChoiceFunction {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl ChoiceFunction {
    pub fn from_spec(spec: ChoiceSpec) -> Result<Self, FredholmError> {
        ChoiceRegistry::standard().build(spec)
    }

    pub fn constant_tail(tail: Word) -> Result<Self, FredholmError> {
        Self::from_spec(ChoiceSpec::ConstantTail { tail })
    }

    pub fn golden_parity() -> Self {
        Self::from_spec(ChoiceSpec::GoldenParity).expect("built-in rule")
    }

    pub fn table(default_tail: Word, entries: BTreeMap<Word, Point>) -> Result<Self, FredholmError> {
        Self::from_spec(ChoiceSpec::Table { default_tail, entries })
    }

    pub fn spec(&self) -> &ChoiceSpec {
        &self.spec
    }

    pub fn name(&self) -> &'static str {
        self.rule.name()
    }

    /// The rule's raw output, unchecked.
    pub fn raw(&self, mu: &Word) -> Point {
        self.rule.choose(mu)
    }
}

/// `τ(μ)`, checked against the cylinder condition.
pub fn choice_eval(tau: &ChoiceFunction, mu: &Word) -> Result<Point, FredholmError> {
    let p = tau.raw(mu);
    if !CylinderSet::new(mu.clone()).contains(&p) {
        return Err(FredholmError::CylinderCondition { word: mu.clone(), point: p });
    }
    Ok(p)
}

type RuleBuilder = fn(&ChoiceSpec) -> Result<Arc<dyn ChoiceRule>, FredholmError>;

/// Named constructors for choice rules.
#[derive(Clone)]
pub struct ChoiceRegistry {
    builders: BTreeMap<&'static str, RuleBuilder>,
}

impl ChoiceRegistry {
    pub fn empty() -> Self {
        Self { builders: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register("constant-tail", |s| match s {
            ChoiceSpec::ConstantTail { tail } if !tail.is_empty() => {
                Ok(Arc::new(ConstantTail { tail: tail.clone() }) as Arc<dyn ChoiceRule>)
            }
            _ => Err(FredholmError::BadRule("constant-tail needs a nonempty tail".into())),
        });
        r.register("golden-parity", |_| Ok(Arc::new(GoldenParity) as Arc<dyn ChoiceRule>));
        r.register("table", |s| match s {
            ChoiceSpec::Table { default_tail, entries } if !default_tail.is_empty() => {
                Ok(Arc::new(TableRule { default_tail: default_tail.clone(), entries: entries.clone() })
                    as Arc<dyn ChoiceRule>)
            }
            _ => Err(FredholmError::BadRule("table needs a nonempty default tail".into())),
        });
        r
    }

    pub fn register(&mut self, name: &'static str, builder: RuleBuilder) {
        self.builders.insert(name, builder);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.builders.keys().copied().collect()
    }

    pub fn build(&self, spec: ChoiceSpec) -> Result<ChoiceFunction, FredholmError> {
        let name = spec.rule_name();
        let builder = self.builders.get(name).ok_or_else(|| FredholmError::UnknownRule(name.to_string()))?;
        let rule = builder(&spec)?;
        Ok(ChoiceFunction { spec, rule })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Alphabet, Language, Subshift};

    fn w(s: &str) -> Word {
        Alphabet::digits(3).unwrap().parse_word(s).unwrap()
    }

    fn pt(s: &str) -> Point {
        Alphabet::digits(3).unwrap().parse_point(s).unwrap()
    }

    #[test]
    fn constant_tail_example() {
        let tau = ChoiceFunction::constant_tail(w("0")).unwrap();
        assert_eq!(choice_eval(&tau, &w("10")).unwrap(), pt("10(0)"));
        assert!(ChoiceFunction::constant_tail(Word::empty()).is_err());
    }

    #[test]
    fn golden_parity_rule_stays_admissible() {
        let tau = ChoiceFunction::golden_parity();
        assert_eq!(choice_eval(&tau, &w("02")).unwrap(), pt("021(0)"));
        assert_eq!(choice_eval(&tau, &w("021")).unwrap(), pt("021(0)"));
        assert_eq!(choice_eval(&tau, &Word::empty()).unwrap(), pt("(0)"));
        let paths = Subshift::golden_mean_paths();
        for mu in paths.words_up_to(7) {
            assert!(paths.point_admissible(&choice_eval(&tau, &mu).unwrap()), "{mu}");
        }
    }

    #[test]
    fn table_rule_and_violation() {
        let mut entries = BTreeMap::new();
        entries.insert(w("0"), pt("01(1)"));
        let tau = ChoiceFunction::table(w("0"), entries.clone()).unwrap();
        assert_eq!(choice_eval(&tau, &w("0")).unwrap(), pt("0(1)"));
        assert_eq!(choice_eval(&tau, &w("1")).unwrap(), pt("1(0)"));
        entries.insert(w("1"), pt("(0)"));
        let bad = ChoiceFunction::table(w("0"), entries).unwrap();
        assert!(matches!(choice_eval(&bad, &w("1")), Err(FredholmError::CylinderCondition { .. })));
    }

    #[test]
    fn registry_lists_rules() {
        assert_eq!(ChoiceRegistry::standard().names(), vec!["constant-tail", "golden-parity", "table"]);
        assert!(matches!(ChoiceRegistry::empty().build(ChoiceSpec::GoldenParity), Err(FredholmError::UnknownRule(_))));
    }
}
