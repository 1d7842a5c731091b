//! Maps that leave every pure state unchanged up to scale.

use crate::error::Result;
use crate::linalg::Matrix;
use crate::maps::LinearMap;
use crate::scalar::Scalar;
use crate::space::StateSpace;

/// One projector per irreducible summand: identity on the summand's span,
/// zero on the others. The nondisturbing maps are exactly their nonnegative
/// combinations.
pub fn nondisturbing_basis<S: Scalar>(space: &StateSpace<S>) -> Result<Vec<LinearMap<S>>> {
    let summands = space.decompose_cone()?;
    let columns: Vec<Vec<S>> = summands.iter().flat_map(|s| s.basis.iter().cloned()).collect();
    let basis = Matrix::from_columns(&columns)?;
    let inv = basis
        .inverse(space.tol())
        .ok_or_else(|| crate::error::Error::Inconsistent("summand spans do not form a direct sum".into()))?;
    let n = space.dim();
    let mut offset = 0;
    let mut out = Vec::with_capacity(summands.len());
    for s in &summands {
        let mut select = Matrix::zeros(n, n);
        for k in offset..offset + s.basis.len() {
            select[(k, k)] = S::one();
        }
        offset += s.basis.len();
        out.push(LinearMap::new(basis.matmul(&select).matmul(&inv)));
    }
    Ok(out)
}

/// Positive and `T(g) = c_g·g` with `c_g >= 0` on every extreme ray.
pub fn is_nondisturbing<S: Scalar>(space: &StateSpace<S>, t: &LinearMap<S>) -> Result<bool> {
    Ok(t.is_positive(space.cone(), space.cone())? && t.fixes_rays_up_to_scale(space.cone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::scalar::{qv, Rational};

    #[test]
    fn classical_basis_is_diagonal_idempotents() {
        let c = models::classical::<Rational>(3).unwrap();
        let basis = nondisturbing_basis(&c).unwrap();
        assert_eq!(basis.len(), 3);
        for (i, p) in basis.iter().enumerate() {
            let mut want = Matrix::zeros(3, 3);
            want[(i, i)] = Rational::from_int(1);
            assert_eq!(p.matrix(), &want);
        }
    }

    #[test]
    fn square_plus_ray_has_two_projectors() {
        let s = models::direct_sum(&models::squit::<Rational>(), &models::classical(1).unwrap()).unwrap();
        let basis = nondisturbing_basis(&s).unwrap();
        assert_eq!(basis.len(), 2);
        let sum = basis[0].matrix().add(basis[1].matrix());
        assert_eq!(sum, Matrix::identity(4));
        for p in &basis {
            assert_eq!(p.matrix().matmul(p.matrix()), *p.matrix());
            assert!(is_nondisturbing(&s, p).unwrap());
        }
    }

    #[test]
    fn examples() {
        let s = models::squit::<Rational>();
        assert!(is_nondisturbing(&s, &LinearMap::new(Matrix::identity(3).scaled(&Rational::from_int(3)))).unwrap());
        let rot = LinearMap::new(Matrix::from_rows(&[qv(&[0, -1, 0]), qv(&[1, 0, 0]), qv(&[0, 0, 1])]).unwrap());
        assert!(!is_nondisturbing(&s, &rot).unwrap());
        let c2 = models::classical::<Rational>(2).unwrap();
        let diag = LinearMap::new(Matrix::from_rows(&[qv(&[2, 0]), qv(&[0, 3])]).unwrap());
        assert!(is_nondisturbing(&c2, &diag).unwrap());
        assert_eq!(nondisturbing_basis(&models::polygon::<f64>(5).unwrap()).unwrap().len(), 1);
    }
}
