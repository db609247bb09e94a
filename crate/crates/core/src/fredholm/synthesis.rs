//! Even modules realizing a prescribed index homomorphism on cylinders.
//!
//! A nonzero value `k` on `1_X` is carried by a module restricted to a base
//! cylinder `C_ν`, `|ν| = |k| + 1`, which acts as `k` times a point mass.
//! What is left sums to zero on `1_X` and is split into dipoles
//! `δ_{x⁺} − δ_{x⁻}` by matching unit charges on level-`L` cylinders bottom
//! up; a dipole sitting at its branching word `ν` is realized by
//! `τ₊(ν) = x⁺`, `τ₋(ν) = x⁻`. The `j`-th dipole of every word goes into the
//! `j`-th component.

use std::collections::BTreeMap;

use crate::k_theory::IndexHom;
use crate::symbolic::{Language, Point, Word};

use super::choice::{ChoiceFunction, ChoiceSpec};
use super::even::{even_bp_pairing, ChoicePair};
use super::FredholmError;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisDescription {
    pub level: usize,
    /// Restriction word of the main component when `I(1_X) ≠ 0`.
    pub base_word: Option<Word>,
    /// Main component first, auxiliary components after it.
    pub components: Vec<ChoicePair>,
}

impl SynthesisDescription {
    pub fn trivial(level: usize) -> Self {
        Self { level, base_word: None, components: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    pub fn main(&self) -> Option<&ChoicePair> {
        self.components.first()
    }

    pub fn auxiliary(&self) -> &[ChoicePair] {
        self.components.get(1..).unwrap_or(&[])
    }
}

/// A flattened, serializable view of one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTable {
    pub restriction: Option<Word>,
    pub plus: BTreeMap<Word, Point>,
    pub minus: BTreeMap<Word, Point>,
}

impl ComponentTable {
    pub fn of(pair: &ChoicePair) -> Self {
        let entries = |f: &ChoiceFunction| match f.spec() {
            ChoiceSpec::Table { entries, .. } => entries.clone(),
            _ => BTreeMap::new(),
        };
        Self { restriction: pair.restriction.clone(), plus: entries(&pair.plus), minus: entries(&pair.minus) }
    }
}

fn default_tail() -> Word {
    Word::new(vec![0])
}

fn table(entries: BTreeMap<Word, Point>) -> Result<ChoiceFunction, FredholmError> {
    ChoiceFunction::table(default_tail(), entries)
}

fn point_in(language: &dyn Language, w: &Word) -> Result<Point, FredholmError> {
    language.extend_to_point(w).ok_or_else(|| FredholmError::Unrealizable(format!("no admissible point extends {w}")))
}

/// First admissible word of length `n` (depth first, alphabet order) along
/// which every prefix shorter than `branching` has a second continuation.
fn base_word(language: &dyn Language, n: usize, branching: usize) -> Option<Word> {
    fn go(language: &dyn Language, w: Word, n: usize, branching: usize) -> Option<Word> {
        if w.len() == n {
            return language.extend_to_point(&w).map(|_| w);
        }
        let next = language.next_symbols(&w);
        if w.len() < branching && next.len() < 2 {
            return None;
        }
        next.into_iter().find_map(|a| go(language, w.child(a), n, branching))
    }
    go(language, Word::empty(), n, branching)
}

/// Restricted component pairing as `k · δ_{ν·tail}`.
fn restricted_component(language: &dyn Language, k: i64) -> Result<(Word, Point, ChoicePair), FredholmError> {
    let m = k.unsigned_abs() as usize;
    let nu = base_word(language, m + 1, m).ok_or_else(|| {
        FredholmError::Unrealizable(format!("no admissible base word of length {} branching at every step", m + 1))
    })?;
    let x0 = point_in(language, &nu)?;
    let mut toward = BTreeMap::new();
    let mut away = BTreeMap::new();
    for pi in nu.prefixes().into_iter().take(m) {
        let avoid = nu.symbols()[pi.len()];
        let other = language
            .extend_avoiding(&pi, avoid)
            .ok_or_else(|| FredholmError::Unrealizable(format!("{pi} has no continuation other than {avoid}")))?;
        toward.insert(pi.clone(), x0.clone());
        away.insert(pi, other);
    }
    let (plus, minus) = if k > 0 { (toward, away) } else { (away, toward) };
    let pair = ChoicePair::restricted(table(plus)?, table(minus)?, nu.clone());
    Ok((nu, x0, pair))
}

struct Dipole {
    at: Word,
    plus: Word,
    minus: Word,
}

/// Match unit charges below `node`; returns the unmatched ones (all of one
/// sign) as `(leaf, sign)`.
fn match_charges(
    language: &dyn Language,
    node: &Word,
    level: usize,
    charge: &BTreeMap<Word, i64>,
    out: &mut Vec<Dipole>,
) -> Vec<(Word, i64)> {
    if node.len() == level {
        let v = charge.get(node).copied().unwrap_or(0);
        return std::iter::repeat_n((node.clone(), v.signum()), v.unsigned_abs() as usize).collect();
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for child in language.refine(node) {
        for (leaf, s) in match_charges(language, &child, level, charge, out) {
            if s > 0 {
                plus.push(leaf)
            } else {
                minus.push(leaf)
            }
        }
    }
    let n = plus.len().min(minus.len());
    for (p, m) in plus.drain(..n).zip(minus.drain(..n)) {
        out.push(Dipole { at: node.clone(), plus: p, minus: m });
    }
    plus.into_iter().map(|w| (w, 1)).chain(minus.into_iter().map(|w| (w, -1))).collect()
}

/// A finite direct sum of even modules whose summed pairing equals `I` on every
/// cylinder of length `≤ level`.
pub fn synthesize_index(
    target: &IndexHom,
    language: &dyn Language,
    level: usize,
) -> Result<SynthesisDescription, FredholmError> {
    if level > target.level() {
        return Err(FredholmError::LevelTooLow { level: target.level(), needed: level });
    }
    target.check(language, level)?;
    let leaves = language.level(level);
    let mut charge: BTreeMap<Word, i64> = leaves.iter().map(|w| (w.clone(), target.value_of(language, w))).collect();
    let mut desc = SynthesisDescription::trivial(level);
    let k = target.value_of(language, &Word::empty());
    if k != 0 {
        let (nu, x0, pair) = restricted_component(language, k)?;
        *charge.entry(x0.prefix(level)).or_insert(0) -= k;
        desc.base_word = Some(nu);
        desc.components.push(pair);
    }
    let mut dipoles = Vec::new();
    let rest = match_charges(language, &Word::empty(), level, &charge, &mut dipoles);
    if let Some((leaf, _)) = rest.first() {
        return Err(FredholmError::Unrealizable(format!("unmatched charge at {leaf}")));
    }
    let mut layers: Vec<(BTreeMap<Word, Point>, BTreeMap<Word, Point>)> = Vec::new();
    let mut seen: BTreeMap<Word, usize> = BTreeMap::new();
    // dipoles come out deepest first; order by (length, word) for the layering
    dipoles.sort_by(|a, b| a.at.shortlex_cmp(&b.at));
    for d in dipoles {
        let j = seen.entry(d.at.clone()).or_insert(0);
        if layers.len() <= *j {
            layers.push((BTreeMap::new(), BTreeMap::new()));
        }
        layers[*j].0.insert(d.at.clone(), point_in(language, &d.plus)?);
        layers[*j].1.insert(d.at.clone(), point_in(language, &d.minus)?);
        *j += 1;
    }
    for (plus, minus) in layers {
        desc.components.push(ChoicePair::new(table(plus)?, table(minus)?));
    }
    Ok(desc)
}

/// Summed pairing of all components against `I` on every admissible word of
/// length `≤ level`.
pub fn verify_synthesis(desc: &SynthesisDescription, target: &IndexHom, language: &dyn Language, level: usize) -> bool {
    if level > target.level() {
        return false;
    }
    language.words_up_to(level).iter().all(|mu| {
        let got: Result<i64, _> = desc.components.iter().map(|c| even_bp_pairing(c, mu)).sum();
        got.is_ok_and(|v| v == target.value_of(language, mu))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Alphabet, Subshift};

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    fn full() -> Subshift {
        Subshift::full(Alphabet::binary())
    }

    #[test]
    fn trivial_target() {
        let i = IndexHom::zero(3);
        let d = synthesize_index(&i, &full(), 3).unwrap();
        assert!(d.is_trivial());
        assert!(verify_synthesis(&d, &i, &full(), 3));
    }

    #[test]
    fn single_dipole() {
        let i = IndexHom::new(1, [(w("0"), 1), (w("1"), -1)]).unwrap();
        let d = synthesize_index(&i, &full(), 1).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.base_word, None);
        let main = d.main().unwrap();
        assert_eq!(
            main.images(&Word::empty()).unwrap(),
            (Point::with_tail(&w("0"), &w("0")).unwrap(), Point::with_tail(&w("1"), &w("0")).unwrap())
        );
        assert_eq!(even_bp_pairing(main, &w("0")).unwrap(), 1);
        assert!(verify_synthesis(&d, &i, &full(), 1));
    }

    #[test]
    fn nonzero_total() {
        let i = IndexHom::new(2, [(w("00"), 2), (w("11"), 1), (w("10"), -1)]).unwrap();
        let d = synthesize_index(&i, &full(), 2).unwrap();
        assert_eq!(d.base_word.as_ref().map(Word::len), Some(3));
        assert_eq!(d.main().unwrap().restriction, d.base_word);
        assert!(verify_synthesis(&d, &i, &full(), 2));
        let neg = IndexHom::new(2, [(w("01"), -3)]).unwrap();
        let d = synthesize_index(&neg, &full(), 2).unwrap();
        assert_eq!(d.base_word.as_ref().map(Word::len), Some(4));
        assert!(verify_synthesis(&d, &neg, &full(), 2));
    }

    #[test]
    fn overflow_uses_auxiliary_components() {
        // |I(χ_0)| = 3 > |0|
        let i = IndexHom::new(2, [(w("00"), 2), (w("01"), 1), (w("10"), -3)]).unwrap();
        let d = synthesize_index(&i, &full(), 2).unwrap();
        assert_eq!(d.auxiliary().len(), 2);
        assert!(verify_synthesis(&d, &i, &full(), 2));
    }

    #[test]
    fn corrupted_description_fails() {
        let i = IndexHom::new(2, [(w("00"), 1), (w("10"), -1)]).unwrap();
        let mut d = synthesize_index(&i, &full(), 2).unwrap();
        let ChoiceSpec::Table { default_tail, mut entries } = d.components[0].plus.spec().clone() else {
            panic!("table rule expected");
        };
        entries.insert(Word::empty(), Point::with_tail(&w("01"), &w("0")).unwrap());
        d.components[0].plus = ChoiceFunction::table(default_tail, entries).unwrap();
        assert!(!verify_synthesis(&d, &i, &full(), 2));
    }

    #[test]
    fn golden_paths() {
        let gm = Subshift::golden_mean_paths();
        let a = Alphabet::digits(3).unwrap();
        let i = IndexHom::new(2, [(a.parse_word("00").unwrap(), 2), (a.parse_word("21").unwrap(), -1)]).unwrap();
        let d = synthesize_index(&i, &gm, 2).unwrap();
        assert!(verify_synthesis(&d, &i, &gm, 2));
        for c in &d.components {
            let t = ComponentTable::of(c);
            assert!(t.plus.values().chain(t.minus.values()).all(|p| gm.point_admissible(p)));
        }
    }

    #[test]
    fn inconsistent_target_rejected() {
        let i = IndexHom::new(2, [(w("0"), 5), (w("00"), 1)]).unwrap();
        assert!(synthesize_index(&i, &full(), 2).is_err());
    }
}
