//! Even AF modules built from finite-rank projections: the class of `e₁₁^{(k)}`
//! is represented with rank `|I(e₁₁^{(k)})|` on the side given by its sign.

use nalgebra::DMatrix;

use crate::af_embedding::{gm_include_to, BlockMatrix};
use crate::k_theory::{k0_class_of_projection, AfIndexHom};
use crate::linalg::C64;

use super::FredholmError;

const PROJECTION_TOL: f64 = 1e-9;

/// Bring `I` and `p` to a common level.
fn align(i: &AfIndexHom, p: &BlockMatrix) -> Result<(AfIndexHom, BlockMatrix), FredholmError> {
    if p.level() >= i.level {
        Ok((i.telescope(p.level())?, p.clone()))
    } else {
        Ok((i.clone(), gm_include_to(p, i.level)?))
    }
}

/// `Σ_k rank_k(p) · I(e₁₁^{(k)})`.
pub fn rave_af_pairing(i: &AfIndexHom, p: &BlockMatrix) -> Result<i64, FredholmError> {
    let (i, p) = align(i, p)?;
    let class = k0_class_of_projection(&p, PROJECTION_TOL)?;
    Ok(i.eval(&class)?)
}

/// `rank P⁺ − rank P⁻` with `P^± = ⊕_k p_k ⊗ 1_{r_k^±}`, `r_k^± = max(±I_k, 0)`;
/// ranks come from singular values of the assembled dense operators.
pub fn rave_fredholm_index(i: &AfIndexHom, p: &BlockMatrix) -> Result<i64, FredholmError> {
    let (i, p) = align(i, p)?;
    if p.projection_defect() > PROJECTION_TOL {
        return Err(FredholmError::NotProjection);
    }
    let side = |sign: i64| -> usize {
        let blocks: Vec<(&DMatrix<C64>, usize)> =
            (0..2).map(|k| (p.block(k), (sign * i.values[k]).max(0) as usize)).collect();
        let dim: usize = blocks.iter().map(|(b, r)| b.nrows() * r).sum();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        let mut at = 0;
        for (b, r) in blocks {
            for _ in 0..r {
                m.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
                at += b.nrows();
            }
        }
        if dim == 0 {
            return 0;
        }
        m.singular_values().iter().filter(|&&s| s > PROJECTION_TOL.sqrt()).count()
    };
    Ok(side(1) as i64 - side(-1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af_embedding::embed_iota;

    #[test]
    fn examples() {
        let i = AfIndexHom::new(1, [1, 0]).unwrap();
        assert_eq!(rave_af_pairing(&i, &BlockMatrix::identity(1)).unwrap(), 5);
        let e11 = BlockMatrix::matrix_unit(1, 0, 0, 0).unwrap();
        assert_eq!(rave_af_pairing(&i, &e11).unwrap(), 1);
        let j = AfIndexHom::new(1, [2, -3]).unwrap();
        for p in [BlockMatrix::identity(1), e11.clone(), BlockMatrix::matrix_unit(1, 1, 2, 2).unwrap()] {
            assert_eq!(rave_af_pairing(&j, &p).unwrap(), rave_fredholm_index(&j, &p).unwrap());
        }
        assert!(rave_af_pairing(&i, &BlockMatrix::matrix_unit(1, 0, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn levels_are_aligned() {
        let i = AfIndexHom::new(2, [1, 1]).unwrap();
        let p = BlockMatrix::identity(1);
        // I restricted to level 1 is (2, 1): 5·2 + 3·1
        assert_eq!(rave_af_pairing(&i, &p).unwrap(), 13);
        assert_eq!(rave_fredholm_index(&i, &p).unwrap(), 13);
    }

    #[test]
    fn invariant_under_embedding() {
        let i = AfIndexHom::new(1, [3, -1]).unwrap();
        let p = BlockMatrix::diagonal_projection(1, &[true, false, true, false, false], &[false, true, true]).unwrap();
        let q = embed_iota(&p, 1e-9).unwrap();
        assert_eq!(rave_af_pairing(&i.telescope(q.level()).unwrap(), &q).unwrap(), rave_af_pairing(&i, &p).unwrap());
    }
}
