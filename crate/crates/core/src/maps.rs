//! Linear maps between ordered spaces and their order-theoretic predicates.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::cone::{in_lorentz, ConeKind, ConeRep};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{sub, Scalar};
use crate::space::StateSpace;

/// Coordinate matrix of a linear map, `dim_out × dim_in`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<S> {
    matrix: Matrix<S>,
}

impl<S: Scalar> From<Matrix<S>> for LinearMap<S> {
    fn from(matrix: Matrix<S>) -> Self {
        LinearMap { matrix }
    }
}

impl<S: Scalar> LinearMap<S> {
    pub fn new(matrix: Matrix<S>) -> Self {
        LinearMap { matrix }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap { matrix: Matrix::identity(n) }
    }

    /// `x ↦ u(x)·ω`, the preparation of `ω`.
    pub fn preparation(unit: &[S], state: &[S]) -> Self {
        LinearMap { matrix: Matrix::outer(state, unit) }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.matrix
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        LinearMap { matrix: self.matrix.matmul(&inner.matrix) }
    }

    pub fn inverse(&self, eps: f64) -> Option<Self> {
        self.matrix.inverse(eps).map(LinearMap::new)
    }

    fn check_shape(&self, domain: &ConeRep<S>, codomain: &ConeRep<S>) -> Result<()> {
        check_dim(domain.dim(), self.matrix.ncols())?;
        check_dim(codomain.dim(), self.matrix.nrows())
    }

    /// Maps `domain` into `codomain`.
    ///
    /// * polyhedral domain: every generator image is tested for membership;
    /// * Lorentz domain, polyhedral codomain: each facet pulled back through
    ///   the map must lie in the (self-dual) Lorentz cone, exact in both modes;
    /// * Lorentz to Lorentz: decided numerically through the S-lemma
    ///   certificate `TᵀJT − λJ ⪰ 0` in `f64`, whatever the scalar type.
    pub fn is_positive(&self, domain: &ConeRep<S>, codomain: &ConeRep<S>) -> Result<bool> {
        self.check_shape(domain, codomain)?;
        match (domain.kind(), codomain.kind()) {
            (ConeKind::Polyhedral, _) => {
                for g in domain.generators()? {
                    if !codomain.contains(&self.apply(g))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (ConeKind::Lorentz, ConeKind::Polyhedral) => {
                for f in codomain.facets()? {
                    let pulled = self.matrix.vec_mul(f);
                    if !in_lorentz(&pulled, codomain.tol()) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (ConeKind::Lorentz, ConeKind::Lorentz) => Ok(lorentz_preserving(&self.matrix, domain.tol())),
        }
    }

    /// `u_codomain(T x) <= u_domain(x)` on the domain cone, i.e.
    /// `u_domain − Tᵀ u_codomain` is in the dual cone.
    pub fn is_norm_contractive(&self, domain: &StateSpace<S>, codomain: &StateSpace<S>) -> Result<bool> {
        self.check_shape(domain.cone(), codomain.cone())?;
        let pulled = self.matrix.vec_mul(codomain.unit());
        domain.cone().dual_contains(&sub(domain.unit(), &pulled))
    }

    /// Invertible, positive, with positive inverse. Singular maps give `false`.
    pub fn is_order_isomorphism(&self, domain: &ConeRep<S>, codomain: &ConeRep<S>) -> Result<bool> {
        self.check_shape(domain, codomain)?;
        if !self.matrix.is_square() {
            return Ok(false);
        }
        let Some(inv) = self.inverse(domain.tol()) else {
            return Ok(false);
        };
        Ok(self.is_positive(domain, codomain)? && inv.is_positive(codomain, domain)?)
    }

    /// Eigen-style test `T(g) = c_g·g, c_g >= 0` on every extreme ray.
    pub fn fixes_rays_up_to_scale(&self, cone: &ConeRep<S>) -> Result<bool> {
        check_dim(cone.dim(), self.matrix.ncols())?;
        check_dim(cone.dim(), self.matrix.nrows())?;
        let tol = cone.tol();
        for g in cone.generators()? {
            let image = self.apply(g);
            let (k, gk) = g
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
                .ok_or_else(|| Error::Invalid("empty generator".into()))?;
            let c = image[k].clone() / gk.clone();
            if !c.is_nonneg(tol) {
                return Ok(false);
            }
            let scaled: Vec<S> = g.iter().map(|x| x.clone() * c.clone()).collect();
            if !crate::scalar::vec_approx_eq(&scaled, &image, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `space → dual space` order isomorphism: the space is weakly self-dual and `t` witnesses it.
pub fn verify_self_duality_witness<S: Scalar>(space: &StateSpace<S>, t: &LinearMap<S>) -> Result<bool> {
    let dual = space.cone().dual()?;
    t.is_order_isomorphism(space.cone(), &dual)
}

/// Does `t` map the Lorentz cone (apex coordinate last) into itself?
fn lorentz_preserving<S: Scalar>(t: &Matrix<S>, tol: f64) -> bool {
    let n = t.nrows();
    let m = DMatrix::from_fn(n, t.ncols(), |i, j| t[(i, j)].to_f64());
    let tol = tol.max(1e-12);
    let scale = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1.0);
    let rank = m.rank(tol * scale);
    if rank == 0 {
        return true;
    }
    let apex: Vec<f64> = (0..n).map(|i| m[(i, n - 1)]).collect();
    if rank == 1 {
        // T = y xᵀ: positive iff y and x lie in the cone together (or both in its negative).
        let (col, _) = (0..m.ncols())
            .map(|j| (j, m.column(j).norm()))
            .fold((0, 0.0), |best, c| if c.1 > best.1 { c } else { best });
        let y: Vec<f64> = m.column(col).iter().copied().collect();
        let yy: f64 = y.iter().map(|v| v * v).sum();
        let x: Vec<f64> = (0..m.ncols())
            .map(|j| m.column(j).iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / yy)
            .collect();
        let neg = |v: &[f64]| v.iter().map(|a| -a).collect::<Vec<_>>();
        return (in_lorentz(&y, tol) && in_lorentz(&x, tol)) || (in_lorentz(&neg(&y), tol) && in_lorentz(&neg(&x), tol));
    }
    if !in_lorentz(&apex, tol * scale) {
        return false;
    }
    let mut j = DMatrix::<f64>::from_diagonal_element(n, n, -1.0);
    j[(n - 1, n - 1)] = 1.0;
    let tjt = m.transpose() * &j * &m;
    let min_eig = |lambda: f64| -> f64 {
        let mat = &tjt - &j * lambda;
        SymmetricEigen::new(mat).eigenvalues.min()
    };
    // min_eig is concave in lambda; golden-section search for its maximum.
    let (mut lo, mut hi) = (0.0f64, tjt[(n - 1, n - 1)].max(0.0) + 1.0);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (min_eig(a), min_eig(b));
    for _ in 0..200 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = min_eig(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = min_eig(a);
        }
    }
    let best = fa.max(fb).max(min_eig(0.0));
    best >= -tol * scale * scale * 10.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::scalar::{q, qv, Rational};

    fn m(rows: &[&[i64]]) -> LinearMap<Rational> {
        LinearMap::new(Matrix::from_rows(&rows.iter().map(|r| qv(r)).collect::<Vec<_>>()).unwrap())
    }

    #[test]
    fn identity_and_negation() {
        let s = models::squit();
        let id = LinearMap::identity(3);
        assert!(id.is_positive(s.cone(), s.cone()).unwrap());
        assert!(id.is_norm_contractive(&s, &s).unwrap());
        assert!(id.is_order_isomorphism(s.cone(), s.cone()).unwrap());
        let o = ConeRep::<Rational>::orthant(2).unwrap();
        assert!(!m(&[&[-1, 0], &[0, -1]]).is_positive(&o, &o).unwrap());
        let two = LinearMap::new(Matrix::identity(3).scaled(&q("2")));
        assert!(!two.is_norm_contractive(&s, &s).unwrap());
    }

    #[test]
    fn rotation_scale_from_dual_square_to_square() {
        let s = models::squit();
        let dual = s.cone().dual().unwrap();
        let t = m(&[&[1, -1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert!(t.is_positive(&dual, s.cone()).unwrap());
        assert!(t.is_order_isomorphism(&dual, s.cone()).unwrap());
    }

    #[test]
    fn preparation_is_contractive_but_singular() {
        let s = models::squit();
        let prep = LinearMap::preparation(s.unit(), &qv(&[1, 1, 1]));
        assert!(prep.is_positive(s.cone(), s.cone()).unwrap());
        assert!(prep.is_norm_contractive(&s, &s).unwrap());
        assert!(!prep.is_order_isomorphism(s.cone(), s.cone()).unwrap());
    }

    #[test]
    fn simplex_permutation_is_isomorphism() {
        let c = models::classical::<Rational>(3).unwrap();
        let p = m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert!(p.is_order_isomorphism(c.cone(), c.cone()).unwrap());
    }

    #[test]
    fn square_self_duality_witness() {
        let s = models::squit();
        let half = |x: i64| Rational::from_ratio(x, 2);
        let w = LinearMap::new(
            Matrix::from_rows(&[vec![half(1), half(-1), q("0")], vec![half(1), half(1), q("0")], qv(&[0, 0, 1])])
                .unwrap(),
        );
        assert!(verify_self_duality_witness(&s, &w).unwrap());
        assert!(!verify_self_duality_witness(&s, &LinearMap::identity(3)).unwrap());
    }

    #[test]
    fn lorentz_maps() {
        let qubit = models::ball::<f64>(3).unwrap();
        let c = qubit.cone();
        assert!(LinearMap::<f64>::identity(4).is_order_isomorphism(c, c).unwrap());
        // A spatial rotation preserves the cone; a boost-free shrink of the spatial part too.
        let rot = LinearMap::new(
            Matrix::from_rows(&[vec![0.0, -1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]])
                .unwrap(),
        );
        assert!(rot.is_order_isomorphism(c, c).unwrap());
        let shrink = LinearMap::new(
            Matrix::from_rows(&[vec![0.5, 0.0, 0.0, 0.0], vec![0.0, 0.5, 0.0, 0.0], vec![0.0, 0.0, 0.5, 0.0], vec![0.0, 0.0, 0.0, 1.0]])
                .unwrap(),
        );
        assert!(shrink.is_positive(c, c).unwrap());
        assert!(!shrink.is_order_isomorphism(c, c).unwrap());
        let stretch = LinearMap::new(Matrix::from_rows(&[vec![2.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]]).unwrap());
        assert!(!stretch.is_positive(c, c).unwrap());
        // Lorentz into a polyhedral cone: the trace map onto a ray.
        let ray = ConeRep::<f64>::orthant(1).unwrap();
        let trace = LinearMap::new(Matrix::from_rows(&[vec![0.0, 0.0, 0.0, 1.0]]).unwrap());
        assert!(trace.is_positive(c, &ray).unwrap());
        let sx = LinearMap::new(Matrix::from_rows(&[vec![1.0, 0.0, 0.0, 0.5]]).unwrap());
        assert!(!sx.is_positive(c, &ray).unwrap());
    }
}
