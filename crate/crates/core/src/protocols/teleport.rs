//! Conclusive and deterministic teleportation, and compression witnesses.
//!
//! `A` is teleported through `B`: Alice holds `A ⊗ B`, measures an effect
//! `f`, and the shared state `ω` lives on `B ⊗ A`. The overall action on the
//! input is `μ = ω̂ ∘ f̂ : A → A`.

use crate::composites::{BipartiteEffect, BipartiteState};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::maps::LinearMap;
use crate::scalar::{vec_approx_eq, Scalar};
use crate::space::StateSpace;

#[derive(Clone, Debug, PartialEq)]
pub struct TeleportationCertificate<S> {
    /// `ω̂ ∘ f̂`.
    pub mu: LinearMap<S>,
    /// `c` with `μ = c·J`, `J` an order automorphism; `None` when `μ` does not
    /// scale the unit uniformly.
    pub constant: Option<S>,
    /// `τ = J⁻¹`, undoing the teleported state's distortion.
    pub correction: Option<LinearMap<S>>,
    pub verdict: bool,
    /// Why the verdict is `false`.
    pub reason: Option<String>,
}

impl<S: Scalar> TeleportationCertificate<S> {
    fn reject(mu: LinearMap<S>, constant: Option<S>, reason: impl Into<String>) -> Self {
        TeleportationCertificate { mu, constant, correction: None, verdict: false, reason: Some(reason.into()) }
    }
}

/// Decide whether outcome `f` together with `ω` teleports `A` through `B`
/// conclusively, and produce the correction map.
pub fn verify_teleportation<S: Scalar>(
    a: &StateSpace<S>,
    b: &StateSpace<S>,
    f: &BipartiteEffect<S>,
    omega: &BipartiteState<S>,
) -> Result<TeleportationCertificate<S>> {
    check_dim(a.dim(), f.coords().nrows())?;
    check_dim(b.dim(), f.coords().ncols())?;
    check_dim(b.dim(), omega.coords().nrows())?;
    check_dim(a.dim(), omega.coords().ncols())?;
    let tol = a.tol().max(b.tol());
    let mu = omega.omega_hat().compose(&f.f_hat());
    if !f.is_min_effect(a, b)? {
        return Ok(TeleportationCertificate::reject(mu, None, "f is not an effect on the minimal tensor product"));
    }
    if !omega.is_positive(b, a)? || !omega.is_normalized(b, a)? {
        return Ok(TeleportationCertificate::reject(mu, None, "omega is not a normalized state of the maximal tensor product"));
    }
    // u ∘ μ = c·u: the probability of the outcome does not depend on the input.
    let pulled = mu.matrix().vec_mul(a.unit());
    let k = a
        .unit()
        .iter()
        .position(|x| !x.is_zero_tol(tol))
        .ok_or_else(|| Error::Invalid("zero unit".into()))?;
    let c = pulled[k].clone() / a.unit()[k].clone();
    let scaled_unit: Vec<S> = a.unit().iter().map(|x| x.clone() * c.clone()).collect();
    if !vec_approx_eq(&pulled, &scaled_unit, tol) {
        return Ok(TeleportationCertificate::reject(mu, None, "outcome probability depends on the input state"));
    }
    if !c.is_pos(tol) {
        return Ok(TeleportationCertificate::reject(mu, Some(c), "outcome never occurs"));
    }
    let inv_c = S::one() / c.clone();
    let j = LinearMap::new(mu.matrix().scaled(&inv_c));
    if !j.is_order_isomorphism(a.cone(), a.cone())? {
        return Ok(TeleportationCertificate::reject(mu, Some(c), "mu is not proportional to an order automorphism"));
    }
    let tau = j.inverse(tol).ok_or_else(|| Error::Solver("order automorphism lost invertibility".into()))?;
    if !tau.is_positive(a.cone(), a.cone())? || !tau.is_norm_contractive(a, a)? {
        return Ok(TeleportationCertificate::reject(mu, Some(c), "correction is not an allowed map"));
    }
    Ok(TeleportationCertificate { mu, constant: Some(c), correction: Some(tau), verdict: true, reason: None })
}

/// Teleportation that needs no correction: `μ` is already a multiple of the identity.
pub fn verify_correction_free<S: Scalar>(
    a: &StateSpace<S>,
    b: &StateSpace<S>,
    f: &BipartiteEffect<S>,
    omega: &BipartiteState<S>,
) -> Result<bool> {
    let cert = verify_teleportation(a, b, f, omega)?;
    Ok(cert.verdict && cert.correction.is_some_and(|t| t.matrix().approx_eq(&Matrix::identity(a.dim()), a.tol())))
}

/// `ω̂⁻¹ ∘ J : A → A*` for a successful certificate with `B = A`; this is
/// `f̂ / c` and is an order isomorphism onto the dual cone.
pub fn self_duality_witness<S: Scalar>(
    cert: &TeleportationCertificate<S>,
    omega: &BipartiteState<S>,
    tol: f64,
) -> Option<LinearMap<S>> {
    if !cert.verdict {
        return None;
    }
    let c = cert.constant.clone()?;
    let j = LinearMap::new(cert.mu.matrix().scaled(&(S::one() / c)));
    let omega_inv = omega.omega_hat().inverse(tol)?;
    Some(omega_inv.compose(&j))
}

/// A symmetry group acting transitively on the pure states, and an
/// equivariant order isomorphism `ω̂ : A* → A`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryWitness<S> {
    pub group: Vec<LinearMap<S>>,
    pub omega_hat: LinearMap<S>,
}

impl<S: Scalar> SymmetryWitness<S> {
    /// Cyclic permutations of an `n`-outcome classical system with `ω̂ = I/n`.
    pub fn classical(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Invalid("classical systems need n >= 1".into()));
        }
        let group = (0..n)
            .map(|k| {
                let mut m = Matrix::zeros(n, n);
                for i in 0..n {
                    m[((i + k) % n, i)] = S::one();
                }
                LinearMap::new(m)
            })
            .collect();
        let omega_hat = LinearMap::new(Matrix::identity(n).scaled(&S::from_ratio(1, n as i64)));
        Ok(SymmetryWitness { group, omega_hat })
    }

    /// Rotations of the regular `n`-gon. `ω̂` rotates and shrinks the dual
    /// polygon onto the state polygon; `n = 4` uses the exact square-bit data.
    pub fn polygon(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Invalid("polygons need n >= 3".into()));
        }
        if n == 4 {
            let r = |rows: [[i64; 3]; 3]| {
                LinearMap::new(Matrix::from_rows(&rows.map(|row| row.map(S::from_int).to_vec())).expect("3x3"))
            };
            let g = r([[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
            let mut group = vec![LinearMap::identity(3)];
            for _ in 1..4 {
                let next = g.compose(group.last().expect("nonempty"));
                group.push(next);
            }
            let omega_hat = r([[1, -1, 0], [1, 1, 0], [0, 0, 1]]);
            return Ok(SymmetryWitness { group, omega_hat });
        }
        let f = |x: f64| S::from_f64(x).ok_or_else(|| Error::Inexact(format!("polygon:{n} needs float arithmetic")));
        let rot = |theta: f64, scale: f64| -> Result<LinearMap<S>> {
            let (c, s) = (scale * theta.cos(), scale * theta.sin());
            Ok(LinearMap::new(Matrix::from_rows(&[
                vec![f(c)?, f(-s)?, S::zero()],
                vec![f(s)?, f(c)?, S::zero()],
                vec![S::zero(), S::zero(), S::one()],
            ])?))
        };
        let step = std::f64::consts::TAU / n as f64;
        let group = (0..n).map(|k| rot(step * k as f64, 1.0)).collect::<Result<Vec<_>>>()?;
        let phi = if n.is_multiple_of(2) { std::f64::consts::PI / n as f64 } else { 0.0 };
        let omega_hat = rot(phi, (std::f64::consts::PI / n as f64).cos())?;
        Ok(SymmetryWitness { group, omega_hat })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterministicTeleportation<S> {
    /// One effect per group element, summing to `u ⊗ u`.
    pub observable: Vec<BipartiteEffect<S>>,
    pub omega: BipartiteState<S>,
    pub group: Vec<LinearMap<S>>,
    /// Per-outcome certificates; the correction for outcome `g` is `g⁻¹`.
    pub certificates: Vec<TeleportationCertificate<S>>,
}

/// Build the observable `f_g` with `f̂_g = |G|⁻¹ ω̂⁻¹ ∘ g` and certify that
/// every outcome teleports with correction `g⁻¹`.
pub fn construct_deterministic_teleportation<S: Scalar>(
    space: &StateSpace<S>,
    witness: &SymmetryWitness<S>,
) -> Result<DeterministicTeleportation<S>> {
    let d = space.dim();
    let tol = space.tol();
    let cone = space.cone();
    if witness.group.is_empty() {
        return Err(Error::Invalid("empty group".into()));
    }
    let mut inverses = Vec::with_capacity(witness.group.len());
    for g in &witness.group {
        check_dim(d, g.matrix().nrows())?;
        check_dim(d, g.matrix().ncols())?;
        if !g.is_order_isomorphism(cone, cone)? {
            return Err(Error::Invalid("group element is not an order automorphism".into()));
        }
        if !vec_approx_eq(&g.matrix().vec_mul(space.unit()), space.unit(), tol) {
            return Err(Error::Invalid("group element does not preserve the unit".into()));
        }
        inverses.push(g.inverse(tol).ok_or_else(|| Error::Invalid("singular group element".into()))?);
    }
    let pure = space.pure_states()?;
    let first = &pure[0];
    for p in &pure {
        if !witness.group.iter().any(|g| vec_approx_eq(&g.apply(first), p, tol)) {
            return Err(Error::Invalid("group does not act transitively on pure states".into()));
        }
    }
    let dual = cone.dual()?;
    if !witness.omega_hat.is_order_isomorphism(&dual, cone)? {
        return Err(Error::Invalid("omega_hat is not an order isomorphism from the dual cone".into()));
    }
    for (g, g_inv) in witness.group.iter().zip(&inverses) {
        let lhs = g.matrix().matmul(witness.omega_hat.matrix());
        let rhs = witness.omega_hat.matrix().matmul(&g_inv.matrix().transpose());
        if !lhs.approx_eq(&rhs, tol) {
            return Err(Error::Invalid("omega_hat is not equivariant".into()));
        }
    }
    let norm = crate::scalar::dot(space.unit(), &witness.omega_hat.apply(space.unit()));
    if !norm.is_pos(tol) {
        return Err(Error::Invalid("omega_hat annihilates the unit".into()));
    }
    let omega_hat = LinearMap::new(witness.omega_hat.matrix().scaled(&(S::one() / norm)));
    let omega = BipartiteState::from_omega_hat(&omega_hat);
    let omega_inv = omega_hat.inverse(tol).ok_or_else(|| Error::Invalid("omega_hat is singular".into()))?;
    let order = S::from_int(witness.group.len() as i64);
    let observable: Vec<BipartiteEffect<S>> = witness
        .group
        .iter()
        .map(|g| {
            let phi = LinearMap::new(omega_inv.compose(g).matrix().scaled(&(S::one() / order.clone())));
            BipartiteEffect::from_f_hat(&phi)
        })
        .collect();
    let mut total = Matrix::zeros(d, d);
    for f in &observable {
        total = total.add(f.coords());
    }
    if !total.approx_eq(&Matrix::outer(space.unit(), space.unit()), tol) {
        return Err(Error::Invalid("effects do not sum to the product unit".into()));
    }
    let mut certificates = Vec::with_capacity(observable.len());
    for (f, g_inv) in observable.iter().zip(&inverses) {
        if !f.is_min_effect(space, space)? {
            return Err(Error::Invalid("an outcome is not a valid effect on the minimal tensor product".into()));
        }
        let cert = verify_teleportation(space, space, f, &omega)?;
        let matches = cert.correction.as_ref().is_some_and(|t| t.matrix().approx_eq(g_inv.matrix(), tol));
        if !cert.verdict || !matches {
            return Err(Error::Inconsistent(format!(
                "outcome fails to teleport with correction g^-1: {}",
                cert.reason.clone().unwrap_or_else(|| "correction mismatch".into())
            )));
        }
        certificates.push(cert);
    }
    Ok(DeterministicTeleportation { observable, omega, group: witness.group.clone(), certificates })
}

/// `P : A2* → A1` and `ι : A1 → A2*` positive with `P ∘ ι = id`, so `ι ∘ P`
/// is a positive idempotent on `A2*` whose image is order-isomorphic to `A1`.
pub fn verify_compression_witness<S: Scalar>(
    a1: &StateSpace<S>,
    a2: &StateSpace<S>,
    p: &LinearMap<S>,
    iota: &LinearMap<S>,
) -> Result<bool> {
    let dual2 = a2.cone().dual()?;
    check_dim(a1.dim(), p.matrix().nrows())?;
    check_dim(a2.dim(), p.matrix().ncols())?;
    check_dim(a2.dim(), iota.matrix().nrows())?;
    check_dim(a1.dim(), iota.matrix().ncols())?;
    let tol = a1.tol().max(a2.tol());
    if !p.is_positive(&dual2, a1.cone())? || !iota.is_positive(a1.cone(), &dual2)? {
        return Ok(false);
    }
    if !p.compose(iota).matrix().approx_eq(&Matrix::identity(a1.dim()), tol) {
        return Ok(false);
    }
    let e = iota.compose(p);
    Ok(e.compose(&e).matrix().approx_eq(e.matrix(), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::verify_self_duality_witness;
    use crate::models;
    use crate::scalar::{qv, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn classical_identity_outcome_teleports_without_correction() {
        for n in 2..5 {
            let c = models::classical::<Rational>(n).unwrap();
            let f = BipartiteEffect::new(Matrix::identity(n));
            let omega = BipartiteState::new(Matrix::identity(n).scaled(&q(1, n as i64)));
            let cert = verify_teleportation(&c, &c, &f, &omega).unwrap();
            assert!(cert.verdict);
            assert_eq!(cert.constant, Some(q(1, n as i64)));
            assert_eq!(cert.mu.matrix(), &Matrix::identity(n).scaled(&q(1, n as i64)));
            assert!(verify_correction_free(&c, &c, &f, &omega).unwrap());
        }
    }

    #[test]
    fn product_state_cannot_teleport() {
        let s = models::squit::<Rational>();
        let f = BipartiteEffect::product(&[q(1, 4), q(1, 4), q(1, 2)], &[q(1, 4), q(1, 4), q(1, 2)]);
        let omega = BipartiteState::product(&qv(&[1, 1, 1]), &qv(&[1, 1, 1]));
        let cert = verify_teleportation(&s, &s, &f, &omega).unwrap();
        assert!(!cert.verdict);
        assert!(cert.reason.is_some());
    }

    #[test]
    fn square_deterministic_teleportation() {
        let s = models::squit::<Rational>();
        let w = SymmetryWitness::polygon(4).unwrap();
        let t = construct_deterministic_teleportation(&s, &w).unwrap();
        assert_eq!(t.observable.len(), 4);
        for (cert, g) in t.certificates.iter().zip(&t.group) {
            assert_eq!(cert.constant, Some(q(1, 4)));
            assert_eq!(cert.mu.matrix(), &g.matrix().scaled(&q(1, 4)));
            let witness = self_duality_witness(cert, &t.omega, 0.0).unwrap();
            assert!(verify_self_duality_witness(&s, &witness).unwrap());
        }
        assert!(verify_correction_free(&s, &s, &t.observable[0], &t.omega).unwrap());
        assert!(!verify_correction_free(&s, &s, &t.observable[1], &t.omega).unwrap());
        let sum = t.observable.iter().fold(Matrix::zeros(3, 3), |acc, f| acc.add(f.coords()));
        assert_eq!(sum, Matrix::outer(s.unit(), s.unit()));
    }

    #[test]
    fn float_polygons_and_classical() {
        for n in [3usize, 5, 6, 7, 8] {
            let p = models::polygon::<f64>(n).unwrap();
            let t = construct_deterministic_teleportation(&p, &SymmetryWitness::polygon(n).unwrap()).unwrap();
            assert_eq!(t.certificates.len(), n);
        }
        for n in 1..5 {
            let c = models::classical::<Rational>(n).unwrap();
            let t = construct_deterministic_teleportation(&c, &SymmetryWitness::classical(n).unwrap()).unwrap();
            assert_eq!(t.observable[0].coords(), &Matrix::identity(n));
        }
    }

    #[test]
    fn witness_errors() {
        let s = models::squit::<Rational>();
        let mut w = SymmetryWitness::polygon(4).unwrap();
        w.group.truncate(1);
        assert!(construct_deterministic_teleportation(&s, &w).is_err());
        let mut w = SymmetryWitness::polygon(4).unwrap();
        w.omega_hat = LinearMap::identity(3);
        assert!(construct_deterministic_teleportation(&s, &w).is_err());
    }

    #[test]
    fn compression_witnesses() {
        // A classical bit sits inside the square bit along a diagonal.
        let c2 = models::classical::<Rational>(2).unwrap();
        let s = models::squit::<Rational>();
        // A2* has extreme rays (±1, 0, 1), (0, ±1, 1).
        let iota = LinearMap::new(Matrix::from_rows(&[qv(&[1, -1]), qv(&[0, 0]), qv(&[1, 1])]).unwrap());
        let p = LinearMap::new(
            Matrix::from_rows(&[vec![q(1, 2), q(0, 1), q(1, 2)], vec![q(-1, 2), q(0, 1), q(1, 2)]]).unwrap(),
        );
        assert!(verify_compression_witness(&c2, &s, &p, &iota).unwrap());
        let bad = LinearMap::new(Matrix::from_rows(&[qv(&[1, 0, 0]), qv(&[0, 1, 0])]).unwrap());
        assert!(!verify_compression_witness(&c2, &s, &bad, &iota).unwrap());
        let zero = LinearMap::new(Matrix::zeros(2, 3));
        assert!(!verify_compression_witness(&c2, &s, &zero, &iota).unwrap());
        // The square is its own compression through the self-duality isomorphism.
        let w = SymmetryWitness::<Rational>::polygon(4).unwrap().omega_hat;
        let w_inv = w.inverse(0.0).unwrap();
        assert!(verify_compression_witness(&s, &s, &w, &w_inv).unwrap());
    }
}
