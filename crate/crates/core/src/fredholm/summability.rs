//! Summability diagnostics for weighted Dirac operators `D = ±W^{ℓ}`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Summable,
    NotSummable,
    /// Exactly on a threshold that the sufficient condition excludes.
    Boundary,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Summable => "summable",
            Verdict::NotSummable => "not-summable",
            Verdict::Boundary => "boundary",
            Verdict::Undecided => "undecided",
        }
    }
}

/// How the eigenvalue exponent is read off a basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiracExponent {
    /// `W^{|μ|}` on `δ_μ` (one summand of an even module).
    Word,
    /// `W^{|n|+|μ|}` on `e_n ⊗ δ_μ` (odd lift).
    Lifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedDirac {
    pub weight: f64,
    pub exponent: DiracExponent,
}

impl WeightedDirac {
    pub fn new(weight: f64, exponent: DiracExponent) -> Option<Self> {
        (weight > 1.0 && weight.is_finite()).then_some(Self { weight, exponent })
    }

    /// Multiplicity of eigenvalue exponent `k`, given word counts per length.
    pub fn level_counts(&self, word_counts: &[u128]) -> Vec<f64> {
        match self.exponent {
            DiracExponent::Word => word_counts.iter().map(|&c| c as f64).collect(),
            DiracExponent::Lifted => (0..word_counts.len())
                .map(|k| (0..=k).map(|j| word_counts[j] as f64 * if k == j { 1.0 } else { 2.0 }).sum())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummabilityReport {
    pub p: f64,
    pub depth: usize,
    pub partial_sum: f64,
    /// Upper estimate of the remaining series, present when it converges.
    pub tail_bound: Option<f64>,
    /// Smallest and largest observed growth ratio `c_{n+1}/c_n`.
    pub growth: (f64, f64),
    pub verdict: Verdict,
}

/// `Σ_{n ≤ depth} c_n (1 + W^{2n})^{−p/2}` with a geometric tail estimate.
///
/// `word_counts[n]` is the number of admissible words of length `n`; depth is
/// clipped to the counts supplied. The verdict compares `W^p` with the observed
/// growth ratios: above all of them is summable, at or below all of them is
/// not, in between is undecided.
pub fn summability_report(d: &WeightedDirac, word_counts: &[u128], p: f64, depth: usize) -> SummabilityReport {
    let counts = d.level_counts(word_counts);
    let depth = depth.min(counts.len().saturating_sub(1));
    let w = d.weight;
    let partial: f64 = (0..=depth).map(|n| counts[n] * (1.0 + w.powi(2 * n as i32)).powf(-p / 2.0)).sum();
    let ratios: Vec<f64> = (1..=depth).filter(|&n| counts[n - 1] > 0.0).map(|n| counts[n] / counts[n - 1]).collect();
    let (r_min, r_max) = if ratios.is_empty() {
        (0.0, 0.0)
    } else {
        let skip = usize::from(ratios.len() > 1 && d.exponent == DiracExponent::Lifted);
        ratios[skip..].iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)))
    };
    let wp = w.powf(p);
    let verdict = if wp > r_max {
        Verdict::Summable
    } else if wp <= r_min * (1.0 + 1e-12) {
        Verdict::NotSummable
    } else {
        Verdict::Undecided
    };
    let tail_bound = (verdict == Verdict::Summable).then(|| {
        let q = r_max / wp;
        counts[depth] * wp.powi(-(depth as i32)) * q / (1.0 - q)
    });
    SummabilityReport { p, depth, partial_sum: partial, tail_bound, growth: (r_min, r_max), verdict }
}

/// `(2 − W^{−p}) Σ_{n ≤ depth} (|Ω|/W^p)ⁿ`.
pub fn geometric_bound(weight: f64, omega: u32, p: f64, depth: usize) -> f64 {
    let r = omega as f64 / weight.powf(p);
    (2.0 - weight.powf(-p)) * (0..=depth).map(|n| r.powi(n as i32)).sum::<f64>()
}
