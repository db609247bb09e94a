//! Even Bellissard–Pearson modules `(ℓ²(Y) ⊕ ℓ²(Y), π_{τ₊} ⊕ π_{τ₋}, F)`
//! built from a pair of choice functions, optionally restricted to a
//! cylinder.

use crate::linalg::{SparseOperator, C64};
use crate::symbolic::{CylinderSet, IndicatorCombination, Language, Point, Word};

use super::choice::{choice_eval, ChoiceFunction};
use super::{FredholmError, EVEN_CALIBRATION};

#[derive(Debug, Clone, PartialEq)]
pub struct ChoicePair {
    pub plus: ChoiceFunction,
    pub minus: ChoiceFunction,
    /// `μ₀`: the represented function is multiplied by `χ_{C_{μ₀}}`.
    pub restriction: Option<Word>,
}

impl ChoicePair {
    pub fn new(plus: ChoiceFunction, minus: ChoiceFunction) -> Self {
        Self { plus, minus, restriction: None }
    }

    pub fn restricted(plus: ChoiceFunction, minus: ChoiceFunction, mu0: Word) -> Self {
        Self { plus, minus, restriction: Some(mu0) }
    }

    /// `1` if `p ∈ C_μ` (intersected with `C_{μ₀}` when restricted).
    fn member(&self, p: &Point, mu: &Word) -> bool {
        CylinderSet::new(mu.clone()).contains(p)
            && self.restriction.as_ref().is_none_or(|r| CylinderSet::new(r.clone()).contains(p))
    }

    /// Both images of `ν`.
    pub fn images(&self, nu: &Word) -> Result<(Point, Point), FredholmError> {
        Ok((choice_eval(&self.plus, nu)?, choice_eval(&self.minus, nu)?))
    }

    /// The cylinder actually counted for `μ`: `C_μ ∩ C_{μ₀}`, which is again
    /// a cylinder or empty.
    pub fn effective_word(&self, mu: &Word) -> Option<Word> {
        match &self.restriction {
            None => Some(mu.clone()),
            Some(r) if r.is_prefix_of(mu) => Some(mu.clone()),
            Some(r) if mu.is_prefix_of(r) => Some(r.clone()),
            Some(_) => None,
        }
    }
}

/// `#{ν : τ₊(ν) ∈ C_μ, τ₋(ν) ∉ C_μ} − #{ν : τ₋(ν) ∈ C_μ, τ₊(ν) ∉ C_μ}`.
///
/// Only proper prefixes of the counted cylinder can contribute: other words
/// have both images inside or both outside.
pub fn even_bp_pairing(pair: &ChoicePair, mu: &Word) -> Result<i64, FredholmError> {
    let Some(m) = pair.effective_word(mu) else {
        return Ok(0);
    };
    let mut total = 0;
    for nu in m.prefixes() {
        let (p, q) = pair.images(&nu)?;
        total += pair.member(&p, mu) as i64 - pair.member(&q, mu) as i64;
    }
    Ok(total)
}

/// Linear extension of [`even_bp_pairing`].
pub fn even_bp_pairing_of(pair: &ChoicePair, f: &IndicatorCombination) -> Result<i64, FredholmError> {
    let mut total = 0;
    for (w, &c) in f.terms() {
        total += c * even_bp_pairing(pair, w)?;
    }
    Ok(total)
}

fn required_level(pair: &ChoicePair, len: usize) -> usize {
    len.max(pair.restriction.as_ref().map_or(0, Word::len))
}

/// `rank P₊(1 − P₋) − rank P₋(1 − P₊)` for the diagonal projections
/// `P_± = π_{τ±}(χ_μ)` on `ℓ²` of all admissible words of length `≤ L`.
pub fn even_rank_pairing(
    pair: &ChoicePair,
    language: &dyn Language,
    mu: &Word,
    level: usize,
) -> Result<i64, FredholmError> {
    let needed = required_level(pair, mu.len());
    if level < needed {
        return Err(FredholmError::LevelTooLow { level, needed });
    }
    let basis = language.words_up_to(level);
    let mut plus = Vec::with_capacity(basis.len());
    let mut minus = Vec::with_capacity(basis.len());
    for nu in &basis {
        let (p, q) = pair.images(nu)?;
        plus.push(pair.member(&p, mu));
        minus.push(pair.member(&q, mu));
    }
    let diag = |v: &[bool]| {
        let mut op = SparseOperator::zero(basis.clone());
        for (i, &x) in v.iter().enumerate() {
            op.set(i, i, C64::new(x as u8 as f64, 0.0));
        }
        op
    };
    let p_plus = diag(&plus);
    let p_minus = diag(&minus);
    let one = SparseOperator::identity(basis.clone());
    let a = p_plus.mul(&one.sub(&p_minus));
    let b = p_minus.mul(&one.sub(&p_plus));
    Ok(a.rank(1e-9) as i64 - b.rank(1e-9) as i64)
}

/// Label of `ℓ²(Y) ⊕ ℓ²(Y)`: a word and the summand it lives in.
pub type GradedLabel = (Word, bool);

/// `(ρ(f), F, γ)` on `ℓ²(Y) ⊕ ℓ²(Y)` truncated to words of length `≤ L`:
/// `F` swaps the summands and `γ = diag(1, −1)`.
pub fn even_operators(
    pair: &ChoicePair,
    language: &dyn Language,
    f: &IndicatorCombination,
    level: usize,
) -> Result<[SparseOperator<GradedLabel>; 3], FredholmError> {
    let needed = required_level(pair, f.max_len());
    if level < needed {
        return Err(FredholmError::LevelTooLow { level, needed });
    }
    let words = language.words_up_to(level);
    let mut basis: Vec<GradedLabel> = Vec::with_capacity(2 * words.len());
    for w in &words {
        basis.push((w.clone(), true));
        basis.push((w.clone(), false));
    }
    let restrict = |p: &Point| pair.restriction.as_ref().is_none_or(|r| CylinderSet::new(r.clone()).contains(p));
    let mut rho = SparseOperator::zero(basis.clone());
    let mut swap = SparseOperator::zero(basis.clone());
    for (i, w) in words.iter().enumerate() {
        let (p, q) = pair.images(w)?;
        let a = if restrict(&p) { f.evaluate(&p) } else { 0 };
        let b = if restrict(&q) { f.evaluate(&q) } else { 0 };
        rho.set(2 * i, 2 * i, C64::new(a as f64, 0.0));
        rho.set(2 * i + 1, 2 * i + 1, C64::new(b as f64, 0.0));
        swap.set(2 * i, 2 * i + 1, C64::new(1.0, 0.0));
        swap.set(2 * i + 1, 2 * i, C64::new(1.0, 0.0));
    }
    let grading = SparseOperator::diagonal(basis, |l| C64::new(if l.1 { 1.0 } else { -1.0 }, 0.0));
    Ok([rho, swap, grading])
}

/// `[F, ρ(f)]` on the truncation.
pub fn even_commutator(
    pair: &ChoicePair,
    language: &dyn Language,
    f: &IndicatorCombination,
    level: usize,
) -> Result<SparseOperator<GradedLabel>, FredholmError> {
    let [rho, swap, _] = even_operators(pair, language, f, level)?;
    Ok(swap.commutator(&rho))
}

/// `(−1)^{n(n−1)/2} Tr(γ ρ(f) [F, ρ(f)]ⁿ)` on the truncation to words of
/// length `≤ L`.
pub fn even_trace_formula(
    pair: &ChoicePair,
    language: &dyn Language,
    f: &IndicatorCombination,
    order: usize,
    level: usize,
) -> Result<C64, FredholmError> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(FredholmError::OrderParity { order, expected: "even and at least 2" });
    }
    if !f.is_projection(language) {
        return Err(FredholmError::NotProjection);
    }
    let [rho, swap, grading] = even_operators(pair, language, f, level)?;
    let comm = swap.commutator(&rho);
    let product = grading.mul(&rho).mul(&comm.pow(order as u32));
    let sign = if (order * (order - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(product.trace() * sign * EVEN_CALIBRATION as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Alphabet, Subshift};

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    fn tails(a: &str, b: &str) -> ChoicePair {
        ChoicePair::new(ChoiceFunction::constant_tail(w(a)).unwrap(), ChoiceFunction::constant_tail(w(b)).unwrap())
    }

    #[test]
    fn count_examples() {
        let pair = tails("0", "1");
        assert_eq!(even_bp_pairing(&pair, &w("0")).unwrap(), 1);
        assert_eq!(even_bp_pairing(&pair, &w("1")).unwrap(), -1);
        assert_eq!(even_bp_pairing(&pair, &Word::empty()).unwrap(), 0);
        assert_eq!(even_bp_pairing(&pair, &w("0110")).unwrap(), 1);
        let same = tails("01", "01");
        for mu in ["", "0", "01", "1101"] {
            assert_eq!(even_bp_pairing(&same, &w(mu)).unwrap(), 0);
        }
    }

    #[test]
    fn restricted_count() {
        let plus = ChoiceFunction::constant_tail(w("0")).unwrap();
        let minus = ChoiceFunction::constant_tail(w("1")).unwrap();
        let pair = ChoicePair::restricted(plus, minus, w("00"));
        // on 1_X the count runs over the proper prefixes of 00
        assert_eq!(even_bp_pairing(&pair, &Word::empty()).unwrap(), 2);
        assert_eq!(even_bp_pairing(&pair, &w("1")).unwrap(), 0);
        // only ν = 00 separates: 00(1) lies in C_001, 00(0) does not
        assert_eq!(even_bp_pairing(&pair, &w("001")).unwrap(), -1);
    }

    #[test]
    fn rank_route_agrees() {
        let full = Subshift::full(Alphabet::binary());
        let pair = tails("0", "1");
        assert_eq!(even_rank_pairing(&pair, &full, &w("0"), 3).unwrap(), 1);
        for mu in ["", "1", "01", "0110"] {
            let c = even_bp_pairing(&pair, &w(mu)).unwrap();
            for l in [w(mu).len(), w(mu).len() + 4] {
                assert_eq!(even_rank_pairing(&pair, &full, &w(mu), l).unwrap(), c);
            }
        }
        assert!(even_rank_pairing(&pair, &full, &w("010"), 2).is_err());
    }

    #[test]
    fn trace_route_agrees() {
        let full = Subshift::full(Alphabet::binary());
        let pair = tails("0", "1");
        let chi0 = IndicatorCombination::indicator(w("0"));
        let t = even_trace_formula(&pair, &full, &chi0, 2, 3).unwrap();
        assert!((t - C64::new(1.0, 0.0)).norm() < 1e-12);
        let t4 = even_trace_formula(&pair, &full, &chi0, 4, 3).unwrap();
        assert!((t4 - t).norm() < 1e-12);
        let unit = IndicatorCombination::unit();
        assert!(even_trace_formula(&pair, &full, &unit, 2, 2).unwrap().norm() < 1e-12);
        let same = tails("1", "1");
        assert!(even_trace_formula(&same, &full, &chi0, 2, 3).unwrap().norm() < 1e-12);
        assert!(even_trace_formula(&pair, &full, &chi0, 3, 3).is_err());
        let two = IndicatorCombination::from_terms([(w("0"), 2)]);
        assert!(matches!(even_trace_formula(&pair, &full, &two, 2, 3), Err(FredholmError::NotProjection)));
    }
}
