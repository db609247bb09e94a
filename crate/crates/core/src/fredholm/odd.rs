//! Odd cycles `(ℓ²(Z × Y), π̂_τ, 2P_N − 1)` for `C(X) ⋊ Z`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::crossed_product::{pi_hat_column, CrossedElement};
use crate::dynamics::CantorDynamics;
use crate::linalg::{exact_rank, SparseOperator, C64};
use crate::symbolic::{Language, Point, Word};

use super::choice::{choice_eval, ChoiceFunction};
use super::{FredholmError, ODD_CALIBRATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `P_N` projects onto `e_m ⊗ δ_μ` with `m > 0`, `μ ∈ N`.
    Positive,
    /// `P_N` projects onto `m ≤ 0`, `μ ∈ N`.
    Negative,
}

impl Side {
    fn sign(self) -> i64 {
        match self {
            Side::Positive => 1,
            Side::Negative => -1,
        }
    }

    /// `m` of the `d`-th basis vector counted from the cut (`d ≥ 1`).
    fn m_at(self, d: i64) -> i64 {
        match self {
            Side::Positive => d,
            Side::Negative => 1 - d,
        }
    }

    fn contains(self, m: i64) -> bool {
        match self {
            Side::Positive => m > 0,
            Side::Negative => m <= 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OddCycleSpec {
    pub tau: ChoiceFunction,
    words: BTreeSet<Word>,
    pub side: Side,
}

impl OddCycleSpec {
    /// Duplicate words are dropped with a warning; `|N|` is the set size.
    pub fn new(tau: ChoiceFunction, words: Vec<Word>, side: Side) -> Self {
        let n = words.len();
        let set: BTreeSet<Word> = words.into_iter().collect();
        if set.len() < n {
            log::warn!("odd cycle: {} duplicate word(s) in N ignored", n - set.len());
        }
        Self { tau, words: set, side }
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    /// Eigenvalue of `2P_N − 1` on `e_m ⊗ δ_μ`.
    pub fn sign_at(&self, m: i64, mu: &Word) -> i64 {
        if self.side.contains(m) && self.words.contains(mu) {
            1
        } else {
            -1
        }
    }
}

/// `−k|N|` for the positive side, `+k|N|` for the negative side.
pub fn odd_pairing(spec: &OddCycleSpec, k: i64) -> i64 {
    -spec.side.sign() * k * spec.size() as i64
}

/// Index of the compression of `π̂(f)` to one fiber `μ ∈ N`, computed from
/// finitely supported kernel and cokernel vectors inside a window of `window`
/// basis vectors on the projected side.
fn fiber_index(
    side: Side,
    f: &CrossedElement,
    dynamics: Option<&dyn CantorDynamics>,
    x: &Point,
    window: i64,
) -> Result<i64, FredholmError> {
    // shifts measured away from the cut
    let s = side.sign();
    let k_hi = f.terms().keys().map(|k| s * k).max().unwrap_or(0);
    let k_lo = f.terms().keys().map(|k| s * k).min().unwrap_or(0);
    let rows_hi = window + k_hi.max(0);
    let column = |d: i64| -> Result<Vec<(i64, i64)>, FredholmError> {
        let col = pi_hat_column(f, dynamics, x, side.m_at(d))?;
        Ok(col.into_iter().map(|(m, c)| (s * (m - side.m_at(0)), c)).collect())
    };
    // depth coordinate of the target: m = m_at(d') ⇔ d' = s·(m − m_at(0))
    let mut dense = vec![vec![0i64; window as usize]; rows_hi.max(0) as usize];
    for d in 1..=window {
        for (target, c) in column(d)? {
            if target >= 1 && target <= rows_hi {
                dense[(target - 1) as usize][(d - 1) as usize] += c;
            }
        }
    }
    let kernel = window as usize - exact_rank(&dense);
    // cokernel vectors supported on depths 1..=window + k_lo have their
    // adjoint image entirely inside the domain window
    let co_rows = (window + k_lo).clamp(0, rows_hi) as usize;
    let cokernel = co_rows - exact_rank(&dense[..co_rows]);
    Ok(kernel as i64 - cokernel as i64)
}

fn check_unitary(
    f: &CrossedElement,
    dynamics: Option<&dyn CantorDynamics>,
    x: &Point,
    window: i64,
) -> Result<(), FredholmError> {
    // columns of π̂(f) on [-window, window] over the full line
    let mut cols: Vec<Vec<(i64, i64)>> = Vec::new();
    for m in -window..=window {
        cols.push(pi_hat_column(f, dynamics, x, m)?);
    }
    let mut defect: i64 = 0;
    for (i, a) in cols.iter().enumerate() {
        for (j, b) in cols.iter().enumerate() {
            let dot: i64 =
                a.iter().map(|(r, c)| b.iter().filter(|(s, _)| s == r).map(|(_, d)| c * d).sum::<i64>()).sum();
            let want = (i == j) as i64;
            defect = defect.max((dot - want).abs());
        }
    }
    if defect > 0 {
        return Err(FredholmError::NotUnitary(defect as f64));
    }
    Ok(())
}

/// `dim ker − dim coker` of `P_N π̂(f) P_N` on the truncated basis
/// `{e_m ⊗ δ_μ : |m| ≤ M, |μ| ≤ L}`, checked for stability at `M + 2`.
pub fn odd_fredholm_index(
    spec: &OddCycleSpec,
    f: &CrossedElement,
    dynamics: Option<&dyn CantorDynamics>,
    window: usize,
    level: usize,
) -> Result<i64, FredholmError> {
    let needed = f.max_abs_power() as usize + 1;
    if window < needed {
        return Err(FredholmError::WindowTooSmall { window, needed });
    }
    if let Some(w) = spec.words.iter().find(|w| w.len() > level) {
        return Err(FredholmError::LevelTooLow { level, needed: w.len() });
    }
    let mut totals = [0i64; 2];
    for mu in &spec.words {
        let x = choice_eval(&spec.tau, mu)?;
        check_unitary(f, dynamics, &x, window as i64)?;
        for (slot, extra) in totals.iter_mut().zip([0, 2]) {
            *slot += fiber_index(spec.side, f, dynamics, &x, (window + extra) as i64)?;
        }
    }
    if totals[0] != totals[1] {
        return Err(FredholmError::Unstable { window, first: totals[0], second: totals[1] });
    }
    Ok(totals[0])
}

pub type OddLabel = (i64, Word);

fn truncated_basis(language: &dyn Language, window: usize, level: usize) -> Vec<OddLabel> {
    let words = language.words_up_to(level);
    let w = window as i64;
    (-w..=w).flat_map(|m| words.iter().map(move |mu| (m, mu.clone()))).collect()
}

/// `π̂(g)` compressed to the truncated basis.
pub fn truncated_pi_hat(
    spec: &OddCycleSpec,
    g: &CrossedElement,
    dynamics: Option<&dyn CantorDynamics>,
    basis: Vec<OddLabel>,
) -> Result<SparseOperator<OddLabel>, FredholmError> {
    let mut op = SparseOperator::zero(basis);
    for col in 0..op.dim() {
        let (m, mu) = op.basis()[col].clone();
        let x = choice_eval(&spec.tau, &mu)?;
        for (target, c) in pi_hat_column(g, dynamics, &x, m)? {
            if let Some(row) = op.position(&(target, mu.clone())) {
                op.add_at(row, col, C64::new(c as f64, 0.0));
            }
        }
    }
    Ok(op)
}

fn sign_operator(spec: &OddCycleSpec, basis: Vec<OddLabel>) -> SparseOperator<OddLabel> {
    SparseOperator::diagonal(basis, |(m, mu)| C64::new(spec.sign_at(*m, mu) as f64, 0.0))
}

/// `[2P_N − 1, π̂(g)]` on the truncation `|m| ≤ M`, `|μ| ≤ L`.
pub fn odd_commutator(
    spec: &OddCycleSpec,
    g: &CrossedElement,
    dynamics: Option<&dyn CantorDynamics>,
    language: &dyn Language,
    window: usize,
    level: usize,
) -> Result<SparseOperator<OddLabel>, FredholmError> {
    let needed = g.max_abs_power() as usize + 1;
    if window < needed {
        return Err(FredholmError::WindowTooSmall { window, needed });
    }
    let basis = truncated_basis(language, window, level);
    let t = truncated_pi_hat(spec, g, dynamics, basis.clone())?;
    Ok(sign_operator(spec, basis).commutator(&t))
}

/// `(K − L + 1)|N|` for `g = Σ_{k=L}^{K} a_k u^k`, the range taken to
/// contain 0 (so `u²` counts as `L = 0, K = 2`).
pub fn odd_rank_bound(spec: &OddCycleSpec, g: &CrossedElement) -> usize {
    if g.is_zero() {
        return 0;
    }
    let (lo, hi) = (g.min_power().min(0), g.max_power().max(0));
    (hi - lo + 1) as usize * spec.size()
}

/// `((−1)^{(n−1)/2 − 1}/2ⁿ) Tr(ρ(f*)([F,ρ(f)][F,ρ(f*)])^{(n−1)/2}[F,ρ(f)])`
/// with `F = 2P_N − 1`, on the truncation.
pub fn odd_trace_formula(
    spec: &OddCycleSpec,
    f: &CrossedElement,
    dynamics: Option<&dyn CantorDynamics>,
    language: &dyn Language,
    order: usize,
    window: usize,
    level: usize,
) -> Result<C64, FredholmError> {
    if order.is_multiple_of(2) {
        return Err(FredholmError::OrderParity { order, expected: "odd" });
    }
    let needed = f.max_abs_power() as usize + 1;
    if window < needed {
        return Err(FredholmError::WindowTooSmall { window, needed });
    }
    let basis = truncated_basis(language, window, level);
    let t = truncated_pi_hat(spec, f, dynamics, basis.clone())?;
    let ts = t.adjoint();
    let sign = sign_operator(spec, basis);
    let c = sign.commutator(&t);
    let cs = sign.commutator(&ts);
    let half = (order - 1) / 2;
    let product = ts.mul(&c.mul(&cs).pow(half as u32)).mul(&c);
    let exponent = half as i64 - 1;
    let constant = if exponent.rem_euclid(2) == 0 { 1.0 } else { -1.0 } / 2f64.powi(order as i32);
    Ok(product.trace() * constant * ODD_CALIBRATION as f64)
}

/// `D = ±W^{|m|+|μ|}`, positive exactly on the range of `P_N`; checks that
/// `D|D|⁻¹` reproduces `2P_N − 1` on the truncation.
pub fn unbounded_lift_check(
    spec: &OddCycleSpec,
    language: &dyn Language,
    weight: f64,
    window: usize,
    level: usize,
) -> bool {
    if weight.is_nan() || weight <= 1.0 {
        return false;
    }
    let basis = truncated_basis(language, window, level);
    let in_range = |m: i64, mu: &Word| spec.side.contains(m) && spec.words.contains(mu);
    let d = SparseOperator::diagonal(basis.clone(), |(m, mu)| {
        let e = weight.powi((m.unsigned_abs() as usize + mu.len()) as i32);
        C64::new(if in_range(*m, mu) { e } else { -e }, 0.0)
    });
    let mut p = SparseOperator::zero(basis.clone());
    for (i, (m, mu)) in basis.iter().enumerate() {
        if in_range(*m, mu) {
            p.set(i, i, C64::new(1.0, 0.0));
        }
    }
    let two_p_minus_one = p.scale(C64::new(2.0, 0.0)).sub(&SparseOperator::identity(basis));
    let phase = d.entries().all(|(r, c, v)| r == c && v.norm() > 0.0);
    let mut ok = phase;
    for i in 0..d.dim() {
        let v = d.get(i, i);
        ok &= (v / v.norm() - two_p_minus_one.get(i, i)).norm() < 1e-12;
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::OdometerSpec;
    use crate::symbolic::{Alphabet, IndicatorCombination, Subshift};

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    fn spec(words: &[&str], side: Side) -> OddCycleSpec {
        OddCycleSpec::new(ChoiceFunction::constant_tail(w("0")).unwrap(), words.iter().map(|s| w(s)).collect(), side)
    }

    #[test]
    fn combinatorial_values() {
        assert_eq!(odd_pairing(&spec(&["0"], Side::Positive), 1), -1);
        assert_eq!(odd_pairing(&spec(&["0", "1", "01"], Side::Negative), 1), 3);
        assert_eq!(odd_pairing(&spec(&[], Side::Positive), 5), 0);
        assert_eq!(spec(&["0", "0"], Side::Positive).size(), 1);
    }

    #[test]
    fn fredholm_examples() {
        let s1 = spec(&["0"], Side::Positive);
        assert_eq!(odd_fredholm_index(&s1, &CrossedElement::u_power(1), None, 3, 4).unwrap(), -1);
        let s2 = spec(&["0", "11"], Side::Positive);
        assert_eq!(odd_fredholm_index(&s2, &CrossedElement::u_power(2), None, 4, 4).unwrap(), -4);
        assert_eq!(odd_fredholm_index(&s2, &CrossedElement::identity(), None, 2, 4).unwrap(), 0);
        let neg = spec(&["0", "11"], Side::Negative);
        assert_eq!(odd_fredholm_index(&neg, &CrossedElement::u_power(-3), None, 5, 4).unwrap(), -6);
        assert!(matches!(
            odd_fredholm_index(&s1, &CrossedElement::u_power(3), None, 2, 4),
            Err(FredholmError::WindowTooSmall { .. })
        ));
        let not_unitary =
            CrossedElement::from_terms([(0, IndicatorCombination::unit()), (1, IndicatorCombination::unit())]);
        assert!(matches!(odd_fredholm_index(&s1, &not_unitary, None, 3, 4), Err(FredholmError::NotUnitary(_))));
    }

    #[test]
    fn fredholm_with_moving_coefficients() {
        // χ_{C_0} u + χ_{C_1} u^{-1} twisted by the odometer; unitary since the
        // two pieces are swapped by the dynamics
        let bin = OdometerSpec::binary();
        let s1 = spec(&["0"], Side::Positive);
        let f = CrossedElement::from_terms([
            (1, IndicatorCombination::indicator(w("0"))),
            (-1, IndicatorCombination::indicator(w("0"))),
        ]);
        let res = odd_fredholm_index(&s1, &f, Some(&bin), 4, 4);
        match res {
            Ok(v) => assert_eq!(v, 0),
            Err(FredholmError::NotUnitary(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn commutator_examples() {
        let full = Subshift::full(Alphabet::binary());
        let s1 = spec(&["0"], Side::Positive);
        let c = odd_commutator(&s1, &CrossedElement::u_power(1), None, &full, 3, 2).unwrap();
        assert_eq!(c.rank(1e-9), 1);
        assert_eq!(c.nnz(), 1);
        let p0 = c.position(&(0, w("0"))).unwrap();
        let p1 = c.position(&(1, w("0"))).unwrap();
        assert_eq!(c.get(p1, p0), C64::new(2.0, 0.0));
        let bin = OdometerSpec::binary();
        let a0 = CrossedElement::monomial(0, IndicatorCombination::indicator(w("01")));
        assert!(odd_commutator(&s1, &a0, Some(&bin), &full, 3, 2).unwrap().is_zero(0.0));
        let s2 = spec(&["0", "11"], Side::Positive);
        for k in -3..=3 {
            let g = CrossedElement::u_power(k);
            let r = odd_commutator(&s2, &g, None, &full, 5, 3).unwrap().rank(1e-9);
            assert_eq!(r, k.unsigned_abs() as usize * 2, "k = {k}");
            assert!(r <= odd_rank_bound(&s2, &g));
        }
        assert_eq!(odd_rank_bound(&s1, &CrossedElement::u_power(1)), 2);
    }

    #[test]
    fn trace_examples() {
        let full = Subshift::full(Alphabet::binary());
        let s1 = spec(&["0"], Side::Positive);
        let u = CrossedElement::u_power(1);
        for n in [1, 3] {
            let t = odd_trace_formula(&s1, &u, None, &full, n, 3, 2).unwrap();
            assert!((t - C64::new(-1.0, 0.0)).norm() < 1e-12, "n = {n}: {t}");
        }
        let s2 = spec(&["0", "1"], Side::Positive);
        let a = odd_trace_formula(&s2, &u, None, &full, 1, 3, 2).unwrap();
        let b = odd_trace_formula(&s2, &u, None, &full, 3, 3, 2).unwrap();
        assert!((a - b).norm() < 1e-12 && (a.re + 2.0).abs() < 1e-12);
        assert!(odd_trace_formula(&s1, &CrossedElement::identity(), None, &full, 1, 3, 2).unwrap().norm() < 1e-12);
        assert!(odd_trace_formula(&s1, &u, None, &full, 2, 3, 2).is_err());
    }

    #[test]
    fn lift_examples() {
        let full = Subshift::full(Alphabet::binary());
        assert!(unbounded_lift_check(&spec(&["0"], Side::Positive), &full, 3.0, 3, 2));
        assert!(unbounded_lift_check(&spec(&[], Side::Positive), &full, 3.0, 3, 2));
        assert!(unbounded_lift_check(&spec(&["1", "01"], Side::Negative), &full, 2.0, 3, 2));
        assert!(!unbounded_lift_check(&spec(&["0"], Side::Positive), &full, 1.0, 3, 2));
        let empty = spec(&[], Side::Positive);
        assert!((-3..=3).all(|m| empty.sign_at(m, &w("0")) == -1));
    }
}
