//! The golden-mean orbit-breaking AF filtration `A_1 ⊂ A_2 ⊂ ⋯` with
//! `A_n ≅ M_{n₁} ⊕ M_{n₂}`, its inclusions, and the unitaries `v_n`, `z`,
//! `w_n` used to embed cylinder projections.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::C64;

/// Stationary transition matrix: rank vectors map `r ↦ S r` under inclusion.
pub const GM_TRANSITION: [[i64; 2]; 2] = [[1, 1], [1, 0]];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("filtration level must be at least 1, got {0}")]
    LevelTooLow(usize),
    #[error("level {level} expects block sizes {expected:?}, got {got:?}")]
    SizeMismatch { level: usize, expected: (usize, usize), got: Vec<(usize, usize)> },
    #[error("index ({row}, {col}) outside block {block}")]
    IndexOutOfRange { block: usize, row: usize, col: usize },
    #[error("not a projection (defect {0:.3e})")]
    NotProjection(f64),
    #[error("levels differ: {0} vs {1}")]
    LevelMismatch(usize, usize),
}

/// Block sizes at level `n`, with the seed `(3, 2)` at level 0.
fn sizes(n: usize) -> (usize, usize) {
    let (mut a, mut b) = (3, 2);
    for _ in 0..n {
        (a, b) = (a + b, a);
    }
    (a, b)
}

pub fn gm_level_sizes(n: usize) -> Result<(usize, usize), EmbeddingError> {
    if n == 0 {
        return Err(EmbeddingError::LevelTooLow(n));
    }
    Ok(sizes(n))
}

/// An element of `A_n = M_{n₁}(C) ⊕ M_{n₂}(C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    level: usize,
    blocks: [DMatrix<C64>; 2],
}

impl BlockMatrix {
    pub fn new(level: usize, first: DMatrix<C64>, second: DMatrix<C64>) -> Result<Self, EmbeddingError> {
        let expected = gm_level_sizes(level)?;
        let got = vec![first.shape(), second.shape()];
        if got != [(expected.0, expected.0), (expected.1, expected.1)] {
            return Err(EmbeddingError::SizeMismatch { level, expected, got });
        }
        Ok(Self { level, blocks: [first, second] })
    }

    fn from_fn(level: usize, f: impl Fn(usize, usize, usize) -> C64) -> Self {
        let (a, b) = sizes(level);
        Self { level, blocks: [DMatrix::from_fn(a, a, |i, j| f(0, i, j)), DMatrix::from_fn(b, b, |i, j| f(1, i, j))] }
    }

    pub fn identity(level: usize) -> Self {
        Self::from_fn(level, |_, i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn zero(level: usize) -> Self {
        Self::from_fn(level, |_, _, _| C64::new(0.0, 0.0))
    }

    /// `e_{ij}` in block `block` (0-based indices).
    pub fn matrix_unit(level: usize, block: usize, i: usize, j: usize) -> Result<Self, EmbeddingError> {
        gm_level_sizes(level)?;
        let mut out = Self::zero(level);
        let n = out.blocks.get(block).map(|m| m.nrows()).unwrap_or(0);
        if i >= n || j >= n {
            return Err(EmbeddingError::IndexOutOfRange { block, row: i, col: j });
        }
        out.blocks[block][(i, j)] = C64::new(1.0, 0.0);
        Ok(out)
    }

    /// Diagonal projection with the given 0/1 diagonals.
    pub fn diagonal_projection(level: usize, first: &[bool], second: &[bool]) -> Result<Self, EmbeddingError> {
        let expected = gm_level_sizes(level)?;
        if (first.len(), second.len()) != expected {
            return Err(EmbeddingError::SizeMismatch {
                level,
                expected,
                got: vec![(first.len(), first.len()), (second.len(), second.len())],
            });
        }
        let diag = [first, second];
        Ok(Self::from_fn(level, |k, i, j| if i == j && diag[k][i] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }))
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn blocks(&self) -> &[DMatrix<C64>; 2] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &DMatrix<C64> {
        &self.blocks[k]
    }

    fn zip(&self, other: &Self, f: impl Fn(&DMatrix<C64>, &DMatrix<C64>) -> DMatrix<C64>) -> Self {
        assert_eq!(self.level, other.level, "block matrices at different levels");
        Self { level: self.level, blocks: [f(&self.blocks[0], &other.blocks[0]), f(&self.blocks[1], &other.blocks[1])] }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn adjoint(&self) -> Self {
        Self { level: self.level, blocks: [self.blocks[0].adjoint(), self.blocks[1].adjoint()] }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.level);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Largest singular value over both blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().filter(|m| !m.is_empty()).map(|m| m.clone().singular_values().max()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.level, other.level);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    pub fn commutator_norm(&self, other: &Self) -> f64 {
        self.mul(other).distance(&other.mul(self))
    }

    /// `‖U*U − 1‖`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().mul(self).distance(&Self::identity(self.level))
    }

    /// `max(‖p² − p‖, ‖p* − p‖)`.
    pub fn projection_defect(&self) -> f64 {
        self.mul(self).distance(self).max(self.adjoint().distance(self))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.projection_defect() <= tol
    }

    /// Block ranks of a projection, read off its traces.
    pub fn projection_ranks(&self) -> [usize; 2] {
        [0, 1].map(|k| self.blocks[k].trace().re.round().max(0.0) as usize)
    }

    /// `true` where the (row, col) entry is nonzero beyond `tol`.
    pub fn pattern(&self, block: usize, tol: f64) -> Vec<Vec<bool>> {
        let m = &self.blocks[block];
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm() > tol).collect()).collect()
    }
}

/// `(T₁, T₂) ↦ (diag(T₁, T₂), T₁)`.
pub fn gm_include(t: &BlockMatrix) -> BlockMatrix {
    let (a, b) = sizes(t.level);
    let mut first = DMatrix::zeros(a + b, a + b);
    first.view_mut((0, 0), (a, a)).copy_from(&t.blocks[0]);
    first.view_mut((a, a), (b, b)).copy_from(&t.blocks[1]);
    BlockMatrix { level: t.level + 1, blocks: [first, t.blocks[0].clone()] }
}

/// Include `t` up to level `to_level ≥ t.level()`.
pub fn gm_include_to(t: &BlockMatrix, to_level: usize) -> Result<BlockMatrix, EmbeddingError> {
    if to_level < t.level {
        return Err(EmbeddingError::LevelMismatch(t.level, to_level));
    }
    let mut out = t.clone();
    while out.level < to_level {
        out = gm_include(&out);
    }
    Ok(out)
}

/// Cyclic shift `e_i ↦ e_{i+1}`, `e_k ↦ e_1`.
fn cyclic_shift(k: usize) -> DMatrix<C64> {
    DMatrix::from_fn(k, k, |i, j| if i == (j + 1) % k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn gm_v(n: usize) -> Result<BlockMatrix, EmbeddingError> {
    let (a, b) = gm_level_sizes(n)?;
    Ok(BlockMatrix { level: n, blocks: [cyclic_shift(a), cyclic_shift(b)] })
}

/// `σ(S) = C S C*` with `C` the cyclic shift, i.e. `σ(S)_{ij} = S_{(i-1)(j-1)}`
/// with indices read cyclically.
pub fn gm_sigma(m: &DMatrix<C64>) -> DMatrix<C64> {
    let k = m.nrows();
    assert_eq!(k, m.ncols(), "sigma needs a square matrix");
    DMatrix::from_fn(k, k, |i, j| m[((i + k - 1) % k, (j + k - 1) % k)])
}

fn root_of_swap_power(n: usize, k: u64) -> [[C64; 2]; 2] {
    // H diag(1, λ^k) H with λ = e^{iπ/2ⁿ}, H the normalized Hadamard matrix
    let angle = PI * (k as f64) / 2f64.powi(n as i32);
    let lam = Complex64::from_polar(1.0, angle);
    let one = C64::new(1.0, 0.0);
    let d = (one + lam) * 0.5;
    let o = (one - lam) * 0.5;
    [[d, o], [o, d]]
}

/// `z^k` for the level-`n` root of swap, built at level `n+1` where it acts
/// on indices `{1, N₂+1}` of the first block.
pub fn gm_z_pow(n: usize, k: u64) -> Result<BlockMatrix, EmbeddingError> {
    gm_level_sizes(n)?;
    let mut z = BlockMatrix::identity(n + 1);
    let (_, n2) = sizes(n + 1);
    let idx = [0, n2];
    let r = root_of_swap_power(n, k);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            z.blocks[0][(i, j)] = r[a][b];
        }
    }
    Ok(z)
}

pub fn gm_z(n: usize) -> Result<BlockMatrix, EmbeddingError> {
    gm_z_pow(n, 1)
}

/// Number of σ-factors after the leading `z^{2ⁿ}` in `w_n`. The literal
/// count `2ⁿ − 1` is capped so that no factor wraps past the level-`n−1`
/// tower of the first block.
pub fn gm_w_factor_count(n: usize) -> usize {
    let literal = (1usize << n) - 1;
    literal.min(sizes(n - 1).0 - 1)
}

/// `w_n = (z^{2ⁿ} σ(z^{2ⁿ−1}) ⋯ σ^J(z^{2ⁿ−J}), Id)` at level `n+1`, where
/// `z^{2ⁿ} = v_{n+1} v_n^*`.
pub fn gm_w_with_factors(n: usize, factors: usize) -> Result<BlockMatrix, EmbeddingError> {
    gm_level_sizes(n)?;
    let top = 1u64 << n;
    let mut w = gm_z_pow(n, top)?.blocks[0].clone();
    for j in 1..=factors {
        let mut f = gm_z_pow(n, top.saturating_sub(j as u64))?.blocks[0].clone();
        for _ in 0..j {
            f = gm_sigma(&f);
        }
        w *= f;
    }
    let (_, b) = sizes(n + 1);
    Ok(BlockMatrix { level: n + 1, blocks: [w, DMatrix::identity(b, b)] })
}

pub fn gm_w(n: usize) -> Result<BlockMatrix, EmbeddingError> {
    if n == 0 {
        return Err(EmbeddingError::LevelTooLow(0));
    }
    gm_w_with_factors(n, gm_w_factor_count(n))
}

/// `w_n ⋯ w_1` at level `n+1`.
pub fn gm_w_product(n: usize) -> Result<BlockMatrix, EmbeddingError> {
    let mut out = BlockMatrix::identity(n + 1);
    for i in 1..=n {
        out = gm_include_to(&gm_w(i)?, n + 1)?.mul(&out);
    }
    Ok(out)
}

/// `ι(f) = w₁⁻¹ ⋯ w_n⁻¹ f w_n ⋯ w₁` at level `n+1`.
pub fn embed_iota(f: &BlockMatrix, tol: f64) -> Result<BlockMatrix, EmbeddingError> {
    let defect = f.projection_defect();
    if defect > tol {
        return Err(EmbeddingError::NotProjection(defect));
    }
    let n = f.level;
    let w = gm_w_product(n)?;
    Ok(w.adjoint().mul(&gm_include(f)).mul(&w))
}

/// Closed-form `w₁` from the worked example: a permutation part on
/// `{1,6}` and a rotation on `{2,7}` with entries `e^{±iπ/4}/√2`.
pub fn reference_w1() -> BlockMatrix {
    let plus = Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0);
    let minus = Complex64::from_polar(FRAC_1_SQRT_2, -PI / 4.0);
    let mut first = DMatrix::zeros(8, 8);
    let one = C64::new(1.0, 0.0);
    first[(0, 5)] = one;
    first[(5, 0)] = one;
    first[(1, 1)] = plus;
    first[(1, 6)] = minus;
    first[(6, 1)] = minus;
    first[(6, 6)] = plus;
    for i in [2, 3, 4, 7] {
        first[(i, i)] = one;
    }
    BlockMatrix { level: 2, blocks: [first, DMatrix::identity(5, 5)] }
}

/// Closed-form `z` for `n = 1` (level 2).
pub fn reference_z1() -> BlockMatrix {
    let plus = Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0);
    let minus = Complex64::from_polar(FRAC_1_SQRT_2, -PI / 4.0);
    let mut z = BlockMatrix::identity(2);
    z.blocks[0][(0, 0)] = plus;
    z.blocks[0][(5, 5)] = plus;
    z.blocks[0][(0, 5)] = minus;
    z.blocks[0][(5, 0)] = minus;
    z
}

/// Permutation matrix from rows listing the column of the single 1.
pub fn permutation_block(cols: &[usize]) -> DMatrix<C64> {
    let k = cols.len();
    DMatrix::from_fn(k, k, |i, j| if cols[i] == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}
