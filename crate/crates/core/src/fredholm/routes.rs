//! Independent evaluation routes for the even and odd pairings, looked up by
//! name so reports can iterate over whatever is registered.

use std::sync::Arc;

use crate::crossed_product::CrossedElement;
use crate::dynamics::CantorDynamics;
use crate::symbolic::{IndicatorCombination, Language, Word};

use super::even::{even_bp_pairing, even_rank_pairing, even_trace_formula, ChoicePair};
use super::odd::{odd_fredholm_index, odd_pairing, odd_trace_formula, OddCycleSpec};
use super::{integer_value, FredholmError};

/// Tolerance for rounding a trace to an integer.
pub const TRACE_TOL: f64 = 1e-9;

pub trait EvenRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn pairing(
        &self,
        pair: &ChoicePair,
        language: &dyn Language,
        mu: &Word,
        level: usize,
    ) -> Result<i64, FredholmError>;
}

/// Inputs of an odd evaluation.
pub struct OddInput<'a> {
    pub spec: &'a OddCycleSpec,
    pub f: &'a CrossedElement,
    pub dynamics: Option<&'a dyn CantorDynamics>,
    pub language: &'a dyn Language,
    pub window: usize,
    pub level: usize,
}

pub trait OddRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn index(&self, input: &OddInput<'_>) -> Result<i64, FredholmError>;
}

struct EvenCount;
struct EvenRank;
struct EvenTrace {
    order: usize,
}

impl EvenRoute for EvenCount {
    fn name(&self) -> &'static str {
        "combinatorial"
    }
    fn pairing(&self, pair: &ChoicePair, _: &dyn Language, mu: &Word, _: usize) -> Result<i64, FredholmError> {
        even_bp_pairing(pair, mu)
    }
}

impl EvenRoute for EvenRank {
    fn name(&self) -> &'static str {
        "fredholm"
    }
    fn pairing(
        &self,
        pair: &ChoicePair,
        language: &dyn Language,
        mu: &Word,
        level: usize,
    ) -> Result<i64, FredholmError> {
        even_rank_pairing(pair, language, mu, level)
    }
}

impl EvenRoute for EvenTrace {
    fn name(&self) -> &'static str {
        "trace"
    }
    fn pairing(
        &self,
        pair: &ChoicePair,
        language: &dyn Language,
        mu: &Word,
        level: usize,
    ) -> Result<i64, FredholmError> {
        let f = IndicatorCombination::indicator(mu.clone());
        integer_value(even_trace_formula(pair, language, &f, self.order, level)?, TRACE_TOL)
    }
}

struct OddCount;
struct OddIndex;
struct OddTrace {
    order: usize,
}

impl OddRoute for OddCount {
    fn name(&self) -> &'static str {
        "combinatorial"
    }
    fn index(&self, input: &OddInput<'_>) -> Result<i64, FredholmError> {
        let k =
            input.f.as_pure_power().ok_or_else(|| FredholmError::NotApplicable("closed form needs f = u^k".into()))?;
        Ok(odd_pairing(input.spec, k))
    }
}

impl OddRoute for OddIndex {
    fn name(&self) -> &'static str {
        "fredholm"
    }
    fn index(&self, i: &OddInput<'_>) -> Result<i64, FredholmError> {
        odd_fredholm_index(i.spec, i.f, i.dynamics, i.window, i.level)
    }
}

impl OddRoute for OddTrace {
    fn name(&self) -> &'static str {
        "trace"
    }
    fn index(&self, i: &OddInput<'_>) -> Result<i64, FredholmError> {
        let t = odd_trace_formula(i.spec, i.f, i.dynamics, i.language, self.order, i.window, i.level)?;
        integer_value(t, TRACE_TOL)
    }
}

/// Ordered collections of routes; reports list them in registration order.
#[derive(Clone, Default)]
pub struct RouteRegistry {
    even: Vec<Arc<dyn EvenRoute>>,
    odd: Vec<Arc<dyn OddRoute>>,
}

impl RouteRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Count, truncated Fredholm index and trace formula for both parities,
    /// with the given trace orders.
    pub fn standard(even_order: usize, odd_order: usize) -> Self {
        let mut r = Self::empty();
        r.register_even(Arc::new(EvenCount));
        r.register_even(Arc::new(EvenRank));
        r.register_even(Arc::new(EvenTrace { order: even_order }));
        r.register_odd(Arc::new(OddCount));
        r.register_odd(Arc::new(OddIndex));
        r.register_odd(Arc::new(OddTrace { order: odd_order }));
        r
    }

    /// A route with an existing name is replaced in place.
    pub fn register_even(&mut self, route: Arc<dyn EvenRoute>) {
        match self.even.iter_mut().find(|r| r.name() == route.name()) {
            Some(slot) => *slot = route,
            None => self.even.push(route),
        }
    }

    pub fn register_odd(&mut self, route: Arc<dyn OddRoute>) {
        match self.odd.iter_mut().find(|r| r.name() == route.name()) {
            Some(slot) => *slot = route,
            None => self.odd.push(route),
        }
    }

    pub fn even_names(&self) -> Vec<&'static str> {
        self.even.iter().map(|r| r.name()).collect()
    }

    pub fn odd_names(&self) -> Vec<&'static str> {
        self.odd.iter().map(|r| r.name()).collect()
    }

    pub fn even(&self, name: &str) -> Result<&dyn EvenRoute, FredholmError> {
        self.even
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
            .ok_or_else(|| FredholmError::UnknownRoute(name.into()))
    }

    pub fn odd(&self, name: &str) -> Result<&dyn OddRoute, FredholmError> {
        self.odd
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
            .ok_or_else(|| FredholmError::UnknownRoute(name.into()))
    }

    pub fn evaluate_even(
        &self,
        pair: &ChoicePair,
        language: &dyn Language,
        mu: &Word,
        level: usize,
    ) -> Vec<(&'static str, Result<i64, FredholmError>)> {
        self.even.iter().map(|r| (r.name(), r.pairing(pair, language, mu, level))).collect()
    }

    pub fn evaluate_odd(&self, input: &OddInput<'_>) -> Vec<(&'static str, Result<i64, FredholmError>)> {
        self.odd.iter().map(|r| (r.name(), r.index(input))).collect()
    }
}

/// `true` when every successful route agrees and at least one succeeded;
/// routes that do not apply are skipped.
pub fn routes_agree(results: &[(&'static str, Result<i64, FredholmError>)]) -> bool {
    let mut values = results.iter().filter_map(|(_, r)| match r {
        Ok(v) => Some(Ok(*v)),
        Err(FredholmError::NotApplicable(_)) => None,
        Err(_) => Some(Err(())),
    });
    let Some(Ok(first)) = values.next() else {
        return false;
    };
    values.all(|v| v == Ok(first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::{ChoiceFunction, Side};
    use crate::symbolic::{Alphabet, Subshift};

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    #[test]
    fn even_routes_agree() {
        let full = Subshift::full(Alphabet::binary());
        let pair = ChoicePair::new(
            ChoiceFunction::constant_tail(w("0")).unwrap(),
            ChoiceFunction::constant_tail(w("1")).unwrap(),
        );
        let reg = RouteRegistry::standard(2, 1);
        assert_eq!(reg.even_names(), vec!["combinatorial", "fredholm", "trace"]);
        for mu in ["", "0", "1", "011"] {
            let r = reg.evaluate_even(&pair, &full, &w(mu), 4);
            assert!(routes_agree(&r), "{mu}: {r:?}");
        }
    }

    #[test]
    fn odd_routes_agree() {
        let full = Subshift::full(Alphabet::binary());
        let spec =
            OddCycleSpec::new(ChoiceFunction::constant_tail(w("0")).unwrap(), vec![w("0"), w("11")], Side::Positive);
        let reg = RouteRegistry::standard(2, 3);
        for k in [1, 2, -1] {
            let f = CrossedElement::u_power(k);
            let input = OddInput { spec: &spec, f: &f, dynamics: None, language: &full, window: 4, level: 2 };
            let r = reg.evaluate_odd(&input);
            assert!(routes_agree(&r), "{k}: {r:?}");
            assert_eq!(*r[0].1.as_ref().unwrap(), -2 * k);
        }
        assert!(matches!(reg.even("nope"), Err(FredholmError::UnknownRoute(_))));
    }
}
