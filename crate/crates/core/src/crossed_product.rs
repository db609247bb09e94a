//! Covariant representations of `C(X) ⋊ Z` on `ℓ²(Z) ⊗ H` and the
//! crossed-product extension of even triples over odometers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{CantorDynamics, OdometerSpec};
use crate::fredholm::even::{even_bp_pairing, ChoicePair};
use crate::fredholm::summability::Verdict;
use crate::fredholm::FredholmError;
use crate::symbolic::{CylinderSet, IndicatorCombination, Language, Point, Word};

/// `Σ_k a_k u^k` with finitely many nonzero integer-valued `a_k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossedElement {
    terms: BTreeMap<i64, IndicatorCombination>,
}

impl CrossedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::u_power(0)
    }

    /// `u^k` (coefficient `1_X`).
    pub fn u_power(k: i64) -> Self {
        Self::monomial(k, IndicatorCombination::unit())
    }

    /// `a u^k`.
    pub fn monomial(k: i64, a: IndicatorCombination) -> Self {
        let mut out = Self::zero();
        out.add_term(k, a);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, IndicatorCombination)>) -> Self {
        let mut out = Self::zero();
        for (k, a) in terms {
            out.add_term(k, a);
        }
        out
    }

    pub fn add_term(&mut self, k: i64, a: IndicatorCombination) {
        let sum = self.terms.get(&k).map_or(a.clone(), |b| b.add(&a));
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, IndicatorCombination> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_power(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    pub fn max_power(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn max_abs_power(&self) -> u64 {
        self.terms.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    /// `Some(k)` when the element is exactly `u^k`.
    pub fn as_pure_power(&self) -> Option<i64> {
        match self.terms.iter().collect::<Vec<_>>().as_slice() {
            [(k, a)] if **a == IndicatorCombination::unit() => Some(**k),
            _ => None,
        }
    }

    /// `true` when every coefficient is a multiple of `1_X`.
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(|a| a.terms().keys().all(Word::is_empty))
    }

    /// `(a u^j)(b u^k) = a·α^j(b) u^{j+k}` with `α(b) = b ∘ φ⁻¹`.
    pub fn mul(&self, other: &Self, odo: &OdometerSpec) -> Self {
        let mut out = Self::zero();
        for (&j, a) in &self.terms {
            for (&k, b) in &other.terms {
                out.add_term(j + k, product(a, &pullback(b, odo, -j)));
            }
        }
        out
    }

    /// `(a u^k)* = α^{−k}(a) u^{−k}`.
    pub fn adjoint(&self, odo: &OdometerSpec) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, a)| (-k, pullback(a, odo, k))))
    }
}

/// `a ∘ φ^j`: on cylinders, `χ_{C_w} ∘ φ^j = χ_{C_{w − j}}`.
pub fn pullback(a: &IndicatorCombination, odo: &OdometerSpec, j: i64) -> IndicatorCombination {
    IndicatorCombination::from_terms(a.terms().iter().map(|(w, &c)| (odo.add_to_word(w, -j), c)))
}

/// Pointwise product; cylinders meet in the longer word or not at all.
pub fn product(a: &IndicatorCombination, b: &IndicatorCombination) -> IndicatorCombination {
    let mut out = IndicatorCombination::zero();
    for (v, &c) in a.terms() {
        for (w, &d) in b.terms() {
            if v.is_prefix_of(w) {
                out.add_term(w.clone(), c * d);
            } else if w.is_prefix_of(v) {
                out.add_term(v.clone(), c * d);
            }
        }
    }
    out
}

/// `a(φ^j(x))`, moving the point when a dynamical system is available.
pub fn moved_value(
    a: &IndicatorCombination,
    dynamics: Option<&dyn CantorDynamics>,
    x: &Point,
    j: i64,
) -> Result<i64, FredholmError> {
    if a.terms().keys().all(Word::is_empty) {
        return Ok(a.terms().values().sum());
    }
    let d = dynamics.ok_or(FredholmError::NoDynamics)?;
    Ok(a.evaluate(&d.iterate(x, j)?))
}

/// Column of `π̂(g)` at `e_m ⊗ δ`, where `δ` is represented by the point
/// `x = τ(μ)`: `π̂(a u^k)(e_m ⊗ δ) = a(φ^{m+k}(x)) e_{m+k} ⊗ δ`.
pub fn pi_hat_column(
    g: &CrossedElement,
    dynamics: Option<&dyn CantorDynamics>,
    x: &Point,
    m: i64,
) -> Result<Vec<(i64, i64)>, FredholmError> {
    let mut out = Vec::with_capacity(g.terms.len());
    for (&k, a) in &g.terms {
        let c = moved_value(a, dynamics, x, m + k)?;
        if c != 0 {
            out.push((m + k, c));
        }
    }
    Ok(out)
}

/// Basis label `e_m ⊗ δ_μ` in the `+` or `−` summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CovariantLabel {
    pub m: i64,
    pub word: Word,
    pub plus: bool,
}

/// `π̂(g)` applied to one basis vector of `ℓ²(Z) ⊗ (ℓ²(Y) ⊕ ℓ²(Y))`, for the
/// representation `π_{τ₊} ⊕ π_{τ₋}` of a choice pair.
pub fn covariant_apply(
    g: &CrossedElement,
    odo: &OdometerSpec,
    pair: &ChoicePair,
    label: &CovariantLabel,
    window: i64,
) -> Result<Vec<(CovariantLabel, i64)>, FredholmError> {
    let (p, q) = pair.images(&label.word)?;
    let x = if label.plus { p } else { q };
    if let Some(r) = &pair.restriction {
        if !CylinderSet::new(r.clone()).contains(&x) {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::new();
    for (&k, a) in &g.terms {
        let target = label.m + k;
        if target.abs() > window {
            return Err(FredholmError::WindowTooSmall {
                window: window as usize,
                needed: target.unsigned_abs() as usize,
            });
        }
        let c = pullback(a, odo, label.m + k).evaluate(&x);
        if c != 0 {
            out.push((CovariantLabel { m: target, word: label.word.clone(), plus: label.plus }, c));
        }
    }
    Ok(out)
}

/// Base even triple (choice pair with weights `W^{|ν|}`) over an odometer.
#[derive(Debug, Clone)]
pub struct HSWZTriple {
    pub pair: ChoicePair,
    pub weight: f64,
    /// Summability exponent of the base triple.
    pub base_p: f64,
    pub odometer: OdometerSpec,
}

impl HSWZTriple {
    pub fn new(pair: ChoicePair, weight: f64, base_p: f64, odometer: OdometerSpec) -> Result<Self, FredholmError> {
        if weight.is_nan() || weight <= 1.0 || base_p.is_nan() || base_p <= 0.0 {
            return Err(FredholmError::BadRule(format!("need W > 1 and p > 0, got W = {weight}, p = {base_p}")));
        }
        Ok(Self { pair, weight, base_p, odometer })
    }

    /// Largest digit base, the growth rate used in the summability bounds.
    pub fn omega(&self) -> u32 {
        let n = self.odometer.preperiod().len() + self.odometer.period().len();
        (0..n).map(|i| self.odometer.base(i)).max().unwrap_or(2)
    }

    /// `W^p > |Ω|`.
    pub fn base_summable(&self) -> bool {
        self.weight.powf(self.base_p) > self.omega() as f64
    }
}

/// Truncation bounds for the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumBounds {
    pub n_max: u32,
    pub m_max: u32,
    pub word_level: usize,
}

/// `{W^{2(n+|μ|)} + m²}` with multiplicity 2, over `0 ≤ n ≤ n_max`,
/// `|m| ≤ m_max` and admissible `|μ| ≤ word_level`; sorted ascending.
pub fn hswz_spectrum(t: &HSWZTriple, bounds: SpectrumBounds) -> Vec<f64> {
    let mut counts = vec![0usize; bounds.word_level + 1];
    for w in t.odometer.words_up_to(bounds.word_level) {
        counts[w.len()] += 1;
    }
    let mut out = Vec::new();
    for (len, &c) in counts.iter().enumerate() {
        for n in 0..=bounds.n_max {
            let base = t.weight.powi(2 * (n as i32 + len as i32));
            for m in -(bounds.m_max as i64)..=bounds.m_max as i64 {
                let v = base + (m * m) as f64;
                out.extend(std::iter::repeat_n(v, 2 * c));
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HswzReport {
    pub q: f64,
    pub partial_sum: f64,
    pub tail_bound: Option<f64>,
    pub verdict: Verdict,
}

/// `Σ (1 + W^{2(n+|μ|)} + m²)^{−q/2}` over `n + |μ| ≤ depth`, `|m| ≤ depth`,
/// with a tail bound when the full series converges. The verdict claims
/// summability only for `q > p + 1` and reports `q = p + 1` as excluded.
pub fn hswz_summability(t: &HSWZTriple, omega: u32, q: f64, depth: usize) -> HswzReport {
    let w = t.weight;
    let om = omega as f64;
    let mut partial = 0.0;
    let mut level_weight = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        // pairs (n, μ) with n + |μ| = k
        let c: f64 = (0..=k).map(|j| om.powi(j as i32)).sum();
        level_weight.push(c);
        let a = w.powi(2 * k as i32);
        for m in -(depth as i64)..=depth as i64 {
            partial += 2.0 * c * (1.0 + a + (m * m) as f64).powf(-q / 2.0);
        }
    }
    let converges = q > 1.0 && w.powf(q - 1.0) > om;
    let tail_bound = converges.then(|| {
        let d = depth.max(1) as f64;
        let m_tail: f64 = level_weight.iter().map(|c| 2.0 * c * 2.0 * d.powf(1.0 - q) / (q - 1.0)).sum();
        let rho = om * w.powf(1.0 - q);
        let per_level = 2.0 * (3.0 + 2.0 / (q - 1.0)) * om / (om - 1.0);
        m_tail + per_level * rho.powi(depth as i32 + 1) / (1.0 - rho)
    });
    let p = t.base_p;
    let boundary = (q - (p + 1.0)).abs() <= 1e-12 * (p + 1.0);
    let verdict = if boundary {
        Verdict::Boundary
    } else if !converges {
        Verdict::NotSummable
    } else if q > p + 1.0 && t.base_summable() {
        Verdict::Summable
    } else {
        Verdict::Undecided
    };
    HswzReport { q, partial_sum: partial, tail_bound, verdict }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub m: i64,
    /// `φ^{−m}(χ_μ) = χ_{C_{μ'}}`.
    pub orbit_word: Word,
    pub norm: f64,
    pub bound: f64,
    /// Rank difference of the fiber, equal to the base pairing of `χ_{μ'}`.
    pub rank_difference: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    /// `W^{|μ|−1}`, a constant that works for every `m`.
    pub bound_constant: f64,
    /// `max_m norm(m)·√(1+m²)`.
    pub fitted_constant: f64,
    pub holds: bool,
}

/// Per-fiber norms of the bounded-transform commutator for `χ_μ` moved
/// along the orbit. On the fiber `m` the block for `ν` is nonzero only when
/// the two images of `ν` disagree on `C_{μ'}`, where it has norm
/// `W^{|ν|}/√(1 + m² + W^{2|ν|})`.
pub fn hswz_commutator_decay(
    t: &HSWZTriple,
    mu: &Word,
    m_range: std::ops::RangeInclusive<i64>,
) -> Result<DecayReport, FredholmError> {
    let w = t.weight;
    let bound_constant = w.powi(mu.len() as i32 - 1);
    let mut rows = Vec::new();
    let mut fitted: f64 = 0.0;
    for m in m_range {
        let orbit_word = t.odometer.add_to_word(mu, -m);
        let mut norm: f64 = 0.0;
        for nu in orbit_word.prefixes() {
            let (p, q) = t.pair.images(&nu)?;
            let cyl = CylinderSet::new(orbit_word.clone());
            let r = t.pair.restriction.as_ref().map(|r| CylinderSet::new(r.clone()));
            let a = cyl.contains(&p) && r.as_ref().is_none_or(|r| r.contains(&p));
            let b = cyl.contains(&q) && r.as_ref().is_none_or(|r| r.contains(&q));
            if a != b {
                let s = w.powi(nu.len() as i32);
                norm = norm.max(s / (1.0 + (m * m) as f64 + s * s).sqrt());
            }
        }
        let scale = (1.0 + (m * m) as f64).sqrt();
        fitted = fitted.max(norm * scale);
        rows.push(DecayRow {
            m,
            rank_difference: even_bp_pairing(&t.pair, &orbit_word)?,
            orbit_word,
            norm,
            bound: bound_constant / scale,
        });
    }
    let holds = rows.iter().all(|r| r.norm <= r.bound * (1.0 + 1e-12));
    Ok(DecayReport { rows, bound_constant, fitted_constant: fitted, holds })
}

/// `max_{m, μ} ‖[D, π(φ^m(χ_μ))]‖` for the unbounded weights `D = W^{|ν|}`
/// on each `ν` block; finite because the orbit of each cylinder is periodic.
pub fn equicontinuity_sup_check(
    pair: &ChoicePair,
    odo: &OdometerSpec,
    weight: f64,
    f: &IndicatorCombination,
    m_range: std::ops::RangeInclusive<i64>,
) -> Result<f64, FredholmError> {
    let mut sup: f64 = 0.0;
    for m in m_range {
        // φ^m(f) = f ∘ φ^{−m}
        let g = pullback(f, odo, -m);
        let mut seen = std::collections::BTreeSet::new();
        for w in g.terms().keys() {
            for nu in w.prefixes() {
                seen.insert(nu);
            }
        }
        if let Some(r) = &pair.restriction {
            seen.extend(r.prefixes());
        }
        for nu in seen {
            let (p, q) = pair.images(&nu)?;
            let restrict =
                |x: &Point| pair.restriction.as_ref().is_none_or(|r| CylinderSet::new(r.clone()).contains(x));
            let a = if restrict(&p) { g.evaluate(&p) } else { 0 };
            let b = if restrict(&q) { g.evaluate(&q) } else { 0 };
            sup = sup.max(weight.powi(nu.len() as i32) * (a - b).abs() as f64);
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::choice::ChoiceFunction;
    use crate::symbolic::Alphabet;

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    fn example_pair() -> ChoicePair {
        ChoicePair::new(ChoiceFunction::constant_tail(w("0")).unwrap(), ChoiceFunction::constant_tail(w("1")).unwrap())
    }

    fn label(m: i64, s: &str, plus: bool) -> CovariantLabel {
        CovariantLabel { m, word: w(s), plus }
    }

    #[test]
    fn covariant_apply_examples() {
        let bin = OdometerSpec::binary();
        let pair = example_pair();
        let u = CrossedElement::u_power(1);
        assert_eq!(
            covariant_apply(&u, &bin, &pair, &label(3, "01", true), 10).unwrap(),
            vec![(label(4, "01", true), 1)]
        );
        let chi0 = CrossedElement::monomial(0, IndicatorCombination::indicator(w("0")));
        // τ₊(ε) = (0); φ(000…) = 100… ∉ C_0
        assert!(covariant_apply(&chi0, &bin, &pair, &label(1, "", true), 10).unwrap().is_empty());
        // τ₋(ε) = (1); φ(111…) = 000… ∈ C_0
        assert_eq!(
            covariant_apply(&chi0, &bin, &pair, &label(1, "", false), 10).unwrap(),
            vec![(label(1, "", false), 1)]
        );
        assert!(covariant_apply(&CrossedElement::zero(), &bin, &pair, &label(0, "", true), 10).unwrap().is_empty());
        assert!(covariant_apply(&u, &bin, &pair, &label(10, "", true), 10).is_err());
    }

    #[test]
    fn pullback_matches_point_iteration() {
        let odo = OdometerSpec::new(vec![3], vec![2]).unwrap();
        let a = IndicatorCombination::from_terms([(w("01"), 2), (w("1"), -1)]);
        let alpha = Alphabet::digits(3).unwrap();
        for x in ["(0)", "2(1)", "10(01)", "21(0)"] {
            let x = alpha.parse_point(x).unwrap();
            for j in -7..=7 {
                assert_eq!(pullback(&a, &odo, j).evaluate(&x), moved_value(&a, Some(&odo), &x, j).unwrap());
            }
        }
    }

    #[test]
    fn crossed_products_and_adjoints() {
        let bin = OdometerSpec::binary();
        let u = CrossedElement::u_power(1);
        let uinv = CrossedElement::u_power(-1);
        assert_eq!(u.mul(&uinv, &bin), CrossedElement::identity());
        let a = CrossedElement::monomial(0, IndicatorCombination::indicator(w("01")));
        // u a u* = α(a)
        let conj = u.mul(&a, &bin).mul(&uinv, &bin);
        let alpha = CrossedElement::monomial(0, pullback(&IndicatorCombination::indicator(w("01")), &bin, -1));
        assert_eq!(conj, alpha);
        assert_eq!(u.adjoint(&bin), uinv);
        assert_eq!(CrossedElement::u_power(3).as_pure_power(), Some(3));
        assert_eq!(a.as_pure_power(), None);
    }

    #[test]
    fn spectrum_examples() {
        let t = HSWZTriple::new(example_pair(), 2.0, 1.5, OdometerSpec::binary()).unwrap();
        let s = hswz_spectrum(&t, SpectrumBounds { n_max: 0, m_max: 0, word_level: 0 });
        assert_eq!(s, vec![1.0, 1.0]);
        let s = hswz_spectrum(&t, SpectrumBounds { n_max: 3, m_max: 2, word_level: 2 });
        assert_eq!(s.len(), 2 * 5 * 4 * 7);
        let axis: Vec<f64> = (0..4)
            .map(|n| hswz_spectrum(&t, SpectrumBounds { n_max: n, m_max: 0, word_level: 0 })[2 * n as usize])
            .collect();
        assert_eq!(axis, vec![1.0, 4.0, 16.0, 64.0]);
    }

    #[test]
    fn summability_examples() {
        let t = HSWZTriple::new(example_pair(), 4.0, 1.0, OdometerSpec::binary()).unwrap();
        assert_eq!(hswz_summability(&t, 2, 2.5, 10).verdict, Verdict::Summable);
        assert_eq!(hswz_summability(&t, 2, 1.0, 10).verdict, Verdict::NotSummable);
        assert_eq!(hswz_summability(&t, 2, 2.0, 10).verdict, Verdict::Boundary);
        let r = hswz_summability(&t, 2, 3.0, 12);
        assert!(r.tail_bound.unwrap() > 0.0);
    }

    #[test]
    fn decay_examples() {
        let t = HSWZTriple::new(example_pair(), 2.0, 1.5, OdometerSpec::binary()).unwrap();
        let r = hswz_commutator_decay(&t, &w("0"), -50..=50).unwrap();
        assert!(r.holds);
        assert!(r.fitted_constant.is_finite() && r.fitted_constant <= r.bound_constant);
        let diffs: Vec<i64> = r.rows.iter().take(4).map(|row| row.rank_difference).collect();
        assert_eq!(diffs, vec![1, -1, 1, -1]);
        let same = ChoicePair::new(
            ChoiceFunction::constant_tail(w("1")).unwrap(),
            ChoiceFunction::constant_tail(w("1")).unwrap(),
        );
        let t0 = HSWZTriple::new(same, 2.0, 1.5, OdometerSpec::binary()).unwrap();
        assert!(hswz_commutator_decay(&t0, &w("01"), -5..=5).unwrap().rows.iter().all(|r| r.norm == 0.0));
    }

    #[test]
    fn equicontinuity_examples() {
        let bin = OdometerSpec::binary();
        let pair = example_pair();
        assert_eq!(equicontinuity_sup_check(&pair, &bin, 2.0, &IndicatorCombination::unit(), -10..=10).unwrap(), 0.0);
        let chi0 = IndicatorCombination::indicator(w("0"));
        let a = equicontinuity_sup_check(&pair, &bin, 2.0, &chi0, -2..=2).unwrap();
        let b = equicontinuity_sup_check(&pair, &bin, 2.0, &chi0, -4..=4).unwrap();
        assert!(a > 0.0 && a == b);
    }
}
