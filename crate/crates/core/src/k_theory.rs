//! Dimension groups, K₀ classes of projections, odometer K₀ and index
//! homomorphisms `K₀ → Z`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::af_embedding::{BlockMatrix, GM_TRANSITION};
use crate::dynamics::{BratteliDiagram, OdometerSpec};
use crate::linalg::exact_rank;
use crate::symbolic::{IndicatorCombination, Language, SymbolicError, Word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KTheoryError {
    #[error("level {level} is outside [{min}, {max}]")]
    LevelOutOfRange { level: usize, min: usize, max: usize },
    #[error("vector has {got} entries but level {level} has {expected} vertices")]
    DimensionMismatch { level: usize, expected: usize, got: usize },
    #[error("not a projection (defect {defect:.3e})")]
    NotProjection { defect: f64 },
    #[error("index homomorphism is inconsistent at {word:?}: supplied {supplied}, children sum to {summed}")]
    Inconsistent { word: Word, supplied: i64, summed: i64 },
    #[error("word {word:?} is longer than the homomorphism level {level}")]
    TooDeep { word: Word, level: usize },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// A K₀ class of a Bratteli diagram, as an integer vector at some level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimensionGroupElement {
    pub level: usize,
    pub vector: Vec<i64>,
}

impl DimensionGroupElement {
    pub fn new(d: &BratteliDiagram, level: usize, vector: Vec<i64>) -> Result<Self, KTheoryError> {
        if level > d.depth() {
            return Err(KTheoryError::LevelOutOfRange { level, min: 0, max: d.depth() });
        }
        let expected = d.vertex_count(level);
        if vector.len() != expected {
            return Err(KTheoryError::DimensionMismatch { level, expected, got: vector.len() });
        }
        Ok(Self { level, vector })
    }
}

fn apply(s: &[Vec<u32>], v: &[i64]) -> Vec<i64> {
    s.iter().map(|row| row.iter().zip(v).map(|(&a, &x)| a as i64 * x).sum()).collect()
}

/// Push `e` up to level `to_level` through `S_{e.level+1}, …, S_{to_level}`.
pub fn k0_telescope(
    d: &BratteliDiagram,
    e: &DimensionGroupElement,
    to_level: usize,
) -> Result<DimensionGroupElement, KTheoryError> {
    if to_level < e.level || to_level > d.depth() {
        return Err(KTheoryError::LevelOutOfRange { level: to_level, min: e.level, max: d.depth() });
    }
    let mut v = e.vector.clone();
    for n in e.level + 1..=to_level {
        v = apply(d.transition(n), &v);
    }
    Ok(DimensionGroupElement { level: to_level, vector: v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum K0Equality {
    Equal,
    Distinct,
    /// Vectors differ at every checked level but a later non-injective
    /// transition could still identify them.
    Undecided,
}

pub const DEFAULT_K0_SLACK: usize = 3;

pub fn k0_equal(d: &BratteliDiagram, a: &DimensionGroupElement, b: &DimensionGroupElement) -> K0Equality {
    k0_equal_with_slack(d, a, b, DEFAULT_K0_SLACK)
}

/// Telescope both to `max(a.level, b.level) + slack` (capped at the depth).
/// Differences are conclusive when every transition after the common level is
/// injective over Z.
pub fn k0_equal_with_slack(
    d: &BratteliDiagram,
    a: &DimensionGroupElement,
    b: &DimensionGroupElement,
    slack: usize,
) -> K0Equality {
    let common = a.level.max(b.level);
    let top = (common + slack).min(d.depth()).max(common);
    for level in common..=top {
        let (Ok(x), Ok(y)) = (k0_telescope(d, a, level), k0_telescope(d, b, level)) else {
            return K0Equality::Undecided;
        };
        if x == y {
            return K0Equality::Equal;
        }
    }
    let injective = (common + 1..=d.depth()).all(|n| {
        let s: Vec<Vec<i64>> = d.transition(n).iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        exact_rank(&s) == d.vertex_count(n - 1)
    });
    if injective {
        K0Equality::Distinct
    } else {
        K0Equality::Undecided
    }
}

/// Block-rank vector of a projection in the golden-mean filtration.
pub fn k0_class_of_projection(p: &BlockMatrix, tol: f64) -> Result<DimensionGroupElement, KTheoryError> {
    let defect = p.projection_defect();
    if defect > tol {
        return Err(KTheoryError::NotProjection { defect });
    }
    Ok(DimensionGroupElement { level: p.level(), vector: p.projection_ranks().into_iter().map(|r| r as i64).collect() })
}

/// The rational `numerator / (d₁⋯d_m)` with `m` minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OdometerK0Element {
    pub numerator: i128,
    pub denominator_level: usize,
    pub denominator: u128,
}

impl OdometerK0Element {
    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for OdometerK0Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// `[χ_{C_μ}] = 1/(d₁⋯d_{|μ|})`, extended linearly.
pub fn odometer_k0_class(spec: &OdometerSpec, f: &IndicatorCombination) -> Result<OdometerK0Element, KTheoryError> {
    let m = f.max_len();
    let mut numerator: i128 = 0;
    for (w, &c) in f.terms() {
        if !spec.is_admissible(w) {
            return Err(SymbolicError::Inadmissible(w.to_string()).into());
        }
        numerator += c as i128 * (spec.product(m) / spec.product(w.len())) as i128;
    }
    let mut level = m;
    while level > 0 && numerator.is_multiple_of(&(spec.base(level - 1) as i128)) {
        numerator /= spec.base(level - 1) as i128;
        level -= 1;
    }
    if numerator == 0 {
        level = 0;
    }
    Ok(OdometerK0Element { numerator, denominator_level: level, denominator: spec.product(level) })
}

/// A homomorphism `K₀(C(X)) → Z` given by values on cylinder generators.
///
/// Values may be supplied at several levels; the table at `level` is the
/// source of truth and missing level-`level` words default to 0. Shorter
/// words act as constraints checked by [`IndexHom::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexHom {
    level: usize,
    values: BTreeMap<Word, i64>,
}

impl IndexHom {
    pub fn new(level: usize, values: impl IntoIterator<Item = (Word, i64)>) -> Result<Self, KTheoryError> {
        let values: BTreeMap<Word, i64> = values.into_iter().collect();
        if let Some(w) = values.keys().find(|w| w.len() > level) {
            return Err(KTheoryError::TooDeep { word: w.clone(), level });
        }
        Ok(Self { level, values })
    }

    /// The zero homomorphism.
    pub fn zero(level: usize) -> Self {
        Self { level, values: BTreeMap::new() }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn supplied(&self) -> &BTreeMap<Word, i64> {
        &self.values
    }

    /// Sum of the level-`level` values below `word`.
    pub fn value_of(&self, language: &dyn Language, word: &Word) -> i64 {
        if word.len() == self.level {
            return self.values.get(word).copied().unwrap_or(0);
        }
        language.refine(word).iter().map(|c| self.value_of(language, c)).sum()
    }

    /// Generator table at `level`, the form emitted in reports.
    pub fn generator_table(&self, language: &dyn Language) -> Vec<(Word, i64)> {
        language
            .level(self.level)
            .into_iter()
            .map(|w| {
                let v = self.values.get(&w).copied().unwrap_or(0);
                (w, v)
            })
            .collect()
    }

    /// First supplied value (of length `≤ depth`) that disagrees with the sum
    /// of its children.
    pub fn check(&self, language: &dyn Language, depth: usize) -> Result<(), KTheoryError> {
        for (w, &supplied) in &self.values {
            if w.len() < self.level && w.len() <= depth {
                let summed = self.value_of(language, w);
                if summed != supplied {
                    return Err(KTheoryError::Inconsistent { word: w.clone(), supplied, summed });
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self, language: &dyn Language, depth: usize) -> bool {
        self.check(language, depth).is_ok()
    }

    /// Linear extension to an indicator combination.
    pub fn eval(&self, language: &dyn Language, f: &IndicatorCombination) -> Result<i64, KTheoryError> {
        self.check(language, self.level)?;
        if let Some(w) = f.terms().keys().find(|w| w.len() > self.level) {
            return Err(KTheoryError::TooDeep { word: w.clone(), level: self.level });
        }
        Ok(f.terms().iter().map(|(w, &c)| c * self.value_of(language, w)).sum())
    }
}

/// Values `I(e₁₁^{(k)})` on the minimal projections of one golden-mean
/// filtration level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AfIndexHom {
    pub level: usize,
    pub values: [i64; 2],
}

impl AfIndexHom {
    pub fn new(level: usize, values: [i64; 2]) -> Result<Self, KTheoryError> {
        if level == 0 {
            return Err(KTheoryError::LevelOutOfRange { level, min: 1, max: usize::MAX });
        }
        Ok(Self { level, values })
    }

    pub fn eval(&self, e: &DimensionGroupElement) -> Result<i64, KTheoryError> {
        if e.level != self.level {
            return Err(KTheoryError::LevelOutOfRange { level: e.level, min: self.level, max: self.level });
        }
        Ok(self.values.iter().zip(&e.vector).map(|(a, b)| a * b).sum())
    }

    /// Restriction along the inclusion: `I_n = Sᵀ I_{n+1}`.
    pub fn restrict(&self) -> Result<Self, KTheoryError> {
        if self.level <= 1 {
            return Err(KTheoryError::LevelOutOfRange { level: self.level - 1, min: 1, max: usize::MAX });
        }
        let s = GM_TRANSITION;
        let v = self.values;
        Ok(Self { level: self.level - 1, values: [s[0][0] * v[0] + s[1][0] * v[1], s[0][1] * v[0] + s[1][1] * v[1]] })
    }

    /// The unique extension to level `to_level` (`S` is invertible over Z).
    pub fn telescope(&self, to_level: usize) -> Result<Self, KTheoryError> {
        if to_level < self.level {
            return Err(KTheoryError::LevelOutOfRange { level: to_level, min: self.level, max: usize::MAX });
        }
        let mut v = self.values;
        for _ in self.level..to_level {
            // (Sᵀ)⁻¹ = [[0,1],[1,-1]]
            v = [v[1], v[0] - v[1]];
        }
        Ok(Self { level: to_level, values: v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af_embedding::gm_include;
    use crate::symbolic::{Alphabet, Subshift};

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    fn dge(level: usize, v: [i64; 2]) -> DimensionGroupElement {
        DimensionGroupElement { level, vector: v.to_vec() }
    }

    #[test]
    fn telescope_examples() {
        let d = BratteliDiagram::golden_mean(6);
        assert_eq!(k0_telescope(&d, &dge(1, [1, 0]), 2).unwrap(), dge(2, [1, 1]));
        assert_eq!(k0_telescope(&d, &dge(3, [4, -1]), 3).unwrap(), dge(3, [4, -1]));
        // S²(0,1) = S(1,0) = (1,1)
        assert_eq!(k0_telescope(&d, &dge(1, [0, 1]), 3).unwrap(), dge(3, [1, 1]));
        assert!(k0_telescope(&d, &dge(2, [0, 1]), 1).is_err());
        assert!(k0_telescope(&d, &dge(2, [0, 1]), 7).is_err());
    }

    #[test]
    fn equality_examples() {
        let d = BratteliDiagram::golden_mean(6);
        assert_eq!(k0_equal(&d, &dge(1, [1, 0]), &dge(2, [1, 1])), K0Equality::Equal);
        assert_eq!(k0_equal(&d, &dge(1, [1, 0]), &dge(1, [0, 1])), K0Equality::Distinct);
        assert_eq!(k0_equal(&d, &dge(4, [2, 7]), &dge(4, [2, 7])), K0Equality::Equal);
    }

    #[test]
    fn non_injective_transition_is_undecided() {
        let d = BratteliDiagram::new(
            vec![1, 2, 2],
            vec![vec![vec![1], vec![1]], vec![vec![1, 1], vec![1, 1]]],
            vec![vec![vec![0], vec![0]], vec![vec![0, 1], vec![0, 1]]],
        )
        .unwrap();
        assert_eq!(k0_equal_with_slack(&d, &dge(1, [1, 0]), &dge(1, [0, 1]), 0), K0Equality::Undecided);
        assert_eq!(k0_equal_with_slack(&d, &dge(1, [1, 0]), &dge(1, [0, 1]), 1), K0Equality::Equal);
    }

    #[test]
    fn projection_classes() {
        let id = BlockMatrix::identity(1);
        assert_eq!(k0_class_of_projection(&id, 1e-9).unwrap(), dge(1, [5, 3]));
        let e11 = BlockMatrix::matrix_unit(1, 0, 0, 0).unwrap();
        assert_eq!(k0_class_of_projection(&e11, 1e-9).unwrap(), dge(1, [1, 0]));
        assert_eq!(k0_class_of_projection(&gm_include(&e11), 1e-9).unwrap(), dge(2, [1, 1]));
        let off = BlockMatrix::matrix_unit(1, 0, 0, 1).unwrap();
        assert!(matches!(k0_class_of_projection(&off, 1e-9), Err(KTheoryError::NotProjection { .. })));
    }

    #[test]
    fn odometer_classes() {
        let bin = OdometerSpec::binary();
        let half = odometer_k0_class(&bin, &IndicatorCombination::indicator(w("0"))).unwrap();
        assert_eq!((half.numerator, half.denominator), (1, 2));
        let one = odometer_k0_class(&bin, &IndicatorCombination::unit()).unwrap();
        assert_eq!((one.numerator, one.denominator_level), (1, 0));
        let split = IndicatorCombination::from_terms([(w("00"), 1), (w("01"), 1)]);
        assert_eq!(odometer_k0_class(&bin, &split).unwrap(), half);
        assert_eq!(half.to_string(), "1/2");
        let mixed = OdometerSpec::new(vec![3], vec![2]).unwrap();
        let c = odometer_k0_class(&mixed, &IndicatorCombination::from_terms([(w("10"), 1)])).unwrap();
        assert_eq!((c.numerator, c.denominator), (1, 6));
    }

    #[test]
    fn index_hom_examples() {
        let full = Subshift::full(Alphabet::binary());
        let good = IndexHom::new(1, [(Word::empty(), 0), (w("0"), 1), (w("1"), -1)]).unwrap();
        assert!(good.validate(&full, 1));
        let bad = IndexHom::new(1, [(Word::empty(), 1), (w("0"), 1), (w("1"), 1)]).unwrap();
        assert!(!bad.validate(&full, 1));
        assert!(IndexHom::new(3, [(w("010"), 5)]).unwrap().validate(&full, 3));

        assert_eq!(good.eval(&full, &IndicatorCombination::indicator(w("0"))).unwrap(), 1);
        assert_eq!(good.eval(&full, &IndicatorCombination::unit()).unwrap(), 0);
        let f = IndicatorCombination::from_terms([(w("0"), 2), (w("1"), -1)]);
        assert_eq!(good.eval(&full, &f).unwrap(), 3);
        assert!(bad.eval(&full, &f).is_err());
    }

    #[test]
    fn af_hom_telescopes_consistently() {
        let i = AfIndexHom::new(1, [1, 0]).unwrap();
        let up = i.telescope(4).unwrap();
        assert_eq!(up.restrict().unwrap().restrict().unwrap().restrict().unwrap(), i);
        let d = BratteliDiagram::golden_mean(6);
        let e = dge(1, [3, -2]);
        assert_eq!(up.eval(&k0_telescope(&d, &e, 4).unwrap()).unwrap(), i.eval(&e).unwrap());
    }
}
