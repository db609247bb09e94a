//! Finite truncations of operators and the exact/dense linear algebra used to
//! evaluate them.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

pub type C64 = Complex64;

/// Sparse operator on a finite enumerated basis.
///
/// Entries are stored in a `BTreeMap` keyed by `(row, col)`, so every
/// reduction walks the entries in a fixed order.
#[derive(Debug, Clone)]
pub struct SparseOperator<L> {
    basis: Vec<L>,
    index: HashMap<L, usize>,
    entries: BTreeMap<(usize, usize), C64>,
}

impl<L: Clone + Eq + Hash> SparseOperator<L> {
    pub fn zero(basis: Vec<L>) -> Self {
        let index = basis.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Self { basis, index, entries: BTreeMap::new() }
    }

    pub fn identity(basis: Vec<L>) -> Self {
        let mut op = Self::zero(basis);
        for i in 0..op.dim() {
            op.entries.insert((i, i), C64::new(1.0, 0.0));
        }
        op
    }

    pub fn diagonal(basis: Vec<L>, f: impl Fn(&L) -> C64) -> Self {
        let mut op = Self::zero(basis);
        for i in 0..op.dim() {
            let v = f(&op.basis[i]);
            op.set(i, i, v);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[L] {
        &self.basis
    }

    pub fn position(&self, label: &L) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        if value == C64::zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_at(&mut self, row: usize, col: usize, value: C64) {
        let v = self.get(row, col) + value;
        self.set(row, col, v);
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries.get(&(row, col)).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries.values().all(|v| v.norm() <= tol)
    }

    fn same_basis(&self, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "operators on different bases");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_basis(other);
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_at(r, c, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self { basis: self.basis.clone(), index: self.index.clone(), entries: BTreeMap::new() };
        for (r, c, v) in self.entries() {
            out.set(r, c, v * s);
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self { basis: self.basis.clone(), index: self.index.clone(), entries: BTreeMap::new() };
        for (r, c, v) in self.entries() {
            out.set(c, r, v.conj());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_basis(other);
        let mut rows_of_other: BTreeMap<usize, Vec<(usize, C64)>> = BTreeMap::new();
        for (r, c, v) in other.entries() {
            rows_of_other.entry(r).or_default().push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (i, k, a) in self.entries() {
            if let Some(row) = rows_of_other.get(&k) {
                for &(j, b) in row {
                    *acc.entry((i, j)).or_default() += a * b;
                }
            }
        }
        let mut out = Self { basis: self.basis.clone(), index: self.index.clone(), entries: BTreeMap::new() };
        for ((i, j), v) in acc {
            out.set(i, j, v);
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::identity(self.basis.clone());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Trace with compensated summation in index order.
    pub fn trace(&self) -> C64 {
        let mut sum = KahanSum::default();
        for (r, c, v) in self.entries() {
            if r == c {
                sum.add(v);
            }
        }
        sum.value()
    }

    /// Rows and columns carrying at least one nonzero entry.
    pub fn support(&self) -> (Vec<usize>, Vec<usize>) {
        let mut rows: Vec<usize> = self.entries.keys().map(|&(r, _)| r).collect();
        let mut cols: Vec<usize> = self.entries.keys().map(|&(_, c)| c).collect();
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        (rows, cols)
    }

    /// Dense block on the support rows/columns.
    pub fn support_block(&self) -> DMatrix<C64> {
        let (rows, cols) = self.support();
        let rpos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cpos: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = DMatrix::zeros(rows.len(), cols.len());
        for (r, c, v) in self.entries() {
            m[(rpos[&r], cpos[&c])] = v;
        }
        m
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.entries.is_empty() {
            return Vec::new();
        }
        let block = self.support_block();
        let mut sv: Vec<f64> = block.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
        sv
    }

    pub fn numerical_rank(&self, tol: f64) -> usize {
        self.singular_values().iter().filter(|&&s| s > tol).count()
    }

    /// Entries as integers when every entry is a Gaussian integer with zero
    /// imaginary part (up to `tol`).
    pub fn integer_support_block(&self, tol: f64) -> Option<Vec<Vec<i64>>> {
        let block = self.support_block();
        let mut out = vec![vec![0i64; block.ncols()]; block.nrows()];
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                let v = block[(i, j)];
                let re = v.re.round();
                if (v.re - re).abs() > tol || v.im.abs() > tol {
                    return None;
                }
                out[i][j] = re as i64;
            }
        }
        Some(out)
    }

    /// Exact rank for integer operators, numerical rank otherwise.
    pub fn rank(&self, tol: f64) -> usize {
        match self.integer_support_block(tol) {
            Some(m) => exact_rank(&m),
            None => self.numerical_rank(tol),
        }
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

/// Kahan-compensated complex accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: C64,
    carry: C64,
}

impl KahanSum {
    pub fn add(&mut self, x: C64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> C64 {
        self.sum
    }
}

/// Rank over `Q` by fraction-free (Bareiss) elimination on big integers.
pub fn exact_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Integer kernel dimension of an `rows × cols` matrix acting on `Z^cols`.
pub fn exact_nullity(m: &[Vec<i64>], cols: usize) -> usize {
    if m.is_empty() {
        return cols;
    }
    cols - exact_rank(m)
}

/// `(Σ s_i^p)^{1/p}` over the singular values.
pub fn schatten_norm<L: Clone + Eq + Hash>(op: &SparseOperator<L>, p: f64) -> f64 {
    assert!(p > 0.0, "Schatten exponent must be positive");
    let sum: f64 = op.singular_values().iter().map(|s| s.powf(p)).sum();
    sum.powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn bareiss_rank() {
        assert_eq!(exact_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(exact_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(exact_rank(&[vec![2, 0, 1], vec![0, 3, 1], vec![2, 3, 2]]), 2);
        assert_eq!(exact_rank(&[vec![0, 1], vec![1, 0]]), 2);
        // pivot with negative sign
        assert_eq!(exact_rank(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]), 3);
        assert_eq!(exact_nullity(&[vec![1, 1, 1]], 3), 2);
    }

    #[test]
    fn rank_matches_numerical_on_random_integer_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..6);
            let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect()).collect();
            let mut op = SparseOperator::zero((0..n).collect::<Vec<_>>());
            for (i, row) in m.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    op.set(i, j, c(v as f64));
                }
            }
            assert_eq!(exact_rank(&m), op.numerical_rank(1e-9));
        }
    }

    #[test]
    fn schatten_examples() {
        let mut op = SparseOperator::zero(vec![0, 1, 2]);
        op.set(2, 0, C64::new(0.0, 1.0));
        for p in [0.5, 1.0, 2.0, 7.0] {
            assert!((schatten_norm(&op, p) - 1.0).abs() < 1e-12);
        }
        let d = SparseOperator::diagonal(vec![0, 1], |&i| c(if i == 0 { 3.0 } else { 4.0 }));
        assert!((schatten_norm(&d, 2.0) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn products_and_traces() {
        let basis: Vec<i32> = (0..4).collect();
        let mut shift = SparseOperator::zero(basis.clone());
        for i in 0..3 {
            shift.set(i + 1, i, c(1.0));
        }
        let p = shift.adjoint().mul(&shift);
        assert_eq!(p.trace(), c(3.0));
        assert_eq!(shift.pow(4).nnz(), 0);
        assert_eq!(shift.commutator(&shift).nnz(), 0);
    }
}
