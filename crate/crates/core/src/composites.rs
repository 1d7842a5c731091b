//! Bipartite composites as spaces of bilinear forms on `A* × B*`.
//!
//! A bipartite vector is stored as a `dim_A × dim_B` matrix `W` with
//! `ω(a, b) = aᵀ W b`; flattened row-major it is the Kronecker coordinate
//! vector, so a product state `α ⊗ β` is `kron(α, β)`.

use crate::cone::ConeRep;
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::maps::LinearMap;
use crate::scalar::{dot, kron, Scalar};
use crate::space::StateSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositeKind {
    Min,
    Max,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// A state space on `A ⊗ B` together with its factors.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeSpace<S> {
    space: StateSpace<S>,
    a: StateSpace<S>,
    b: StateSpace<S>,
    kind: CompositeKind,
}

impl<S: Scalar> CompositeSpace<S> {
    /// Wrap a candidate cone on `A ⊗ B`, checking it is sandwiched between the
    /// minimal and maximal tensor products.
    pub fn custom(a: &StateSpace<S>, b: &StateSpace<S>, space: StateSpace<S>) -> Result<Self> {
        if !is_composite(a, b, &space)? {
            return Err(Error::Invalid("cone is not between the minimal and maximal tensor products".into()));
        }
        Ok(CompositeSpace { space, a: a.clone(), b: b.clone(), kind: CompositeKind::Custom })
    }

    pub fn space(&self) -> &StateSpace<S> {
        &self.space
    }
    pub fn factor_a(&self) -> &StateSpace<S> {
        &self.a
    }
    pub fn factor_b(&self) -> &StateSpace<S> {
        &self.b
    }
    pub fn kind(&self) -> CompositeKind {
        self.kind
    }

    pub fn contains(&self, state: &BipartiteState<S>) -> Result<bool> {
        self.space.cone().contains(state.coords.as_flat())
    }
}

fn product_unit<S: Scalar>(a: &StateSpace<S>, b: &StateSpace<S>) -> Vec<S> {
    kron(a.unit(), b.unit())
}

fn products<S: Scalar>(xs: &[Vec<S>], ys: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(kron(x, y));
        }
    }
    out
}

fn composite_tol<S: Scalar>(a: &StateSpace<S>, b: &StateSpace<S>) -> f64 {
    a.tol().max(b.tol())
}

/// Conic hull of the product states `g_A ⊗ g_B`; facets by enumeration.
pub fn min_tensor<S: Scalar>(a: &StateSpace<S>, b: &StateSpace<S>) -> Result<CompositeSpace<S>> {
    let gens = products(a.cone().generators()?, b.cone().generators()?);
    let cone = ConeRep::from_generators_tol(gens, composite_tol(a, b))?;
    let space = StateSpace::new(cone, product_unit(a, b))?;
    Ok(CompositeSpace { space, a: a.clone(), b: b.clone(), kind: CompositeKind::Min })
}

/// All forms positive on product effects: facets `f_A ⊗ f_B`; rays by enumeration.
pub fn max_tensor<S: Scalar>(a: &StateSpace<S>, b: &StateSpace<S>) -> Result<CompositeSpace<S>> {
    let facets = products(a.cone().facets()?, b.cone().facets()?);
    let cone = ConeRep::from_facets_tol(facets, composite_tol(a, b))?;
    let space = StateSpace::new(cone, product_unit(a, b))?;
    Ok(CompositeSpace { space, a: a.clone(), b: b.clone(), kind: CompositeKind::Max })
}

/// `A ⊗_min B ≤ candidate ≤ A ⊗_max B` with the product unit.
///
/// Needs no enumeration: product generators are tested against the
/// candidate's facets, and the candidate's generators against product facets.
pub fn is_composite<S: Scalar>(a: &StateSpace<S>, b: &StateSpace<S>, candidate: &StateSpace<S>) -> Result<bool> {
    check_dim(a.dim() * b.dim(), candidate.dim())?;
    let tol = candidate.tol();
    if !crate::scalar::vec_approx_eq(candidate.unit(), &product_unit(a, b), tol) {
        return Err(Error::Invalid("candidate unit differs from u_A ⊗ u_B".into()));
    }
    for ga in a.cone().generators()? {
        for gb in b.cone().generators()? {
            if !candidate.cone().contains(&kron(ga, gb))? {
                return Ok(false);
            }
        }
    }
    let (fa, fb) = (a.cone().facets()?, b.cone().facets()?);
    for g in candidate.cone().generators()? {
        let w = Matrix::from_flat(a.dim(), b.dim(), g.clone())?;
        for x in fa {
            let partial = w.vec_mul(x);
            if fb.iter().any(|y| !dot(&partial, y).is_nonneg(tol)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Bipartite state as the coefficient matrix of a bilinear form on `A* × B*`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState<S> {
    coords: Matrix<S>,
}

impl<S: Scalar> BipartiteState<S> {
    pub fn new(coords: Matrix<S>) -> Self {
        BipartiteState { coords }
    }

    pub fn product(alpha: &[S], beta: &[S]) -> Self {
        BipartiteState { coords: Matrix::outer(alpha, beta) }
    }

    pub fn from_flat(dim_a: usize, dim_b: usize, flat: Vec<S>) -> Result<Self> {
        Ok(BipartiteState { coords: Matrix::from_flat(dim_a, dim_b, flat)? })
    }

    pub fn coords(&self) -> &Matrix<S> {
        &self.coords
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.coords.nrows(), self.coords.ncols())
    }

    pub fn flat(&self) -> &[S] {
        self.coords.as_flat()
    }

    /// `ω(a, b)`.
    pub fn evaluate(&self, a: &[S], b: &[S]) -> S {
        dot(&self.coords.vec_mul(a), b)
    }

    /// Positive on every pair of extreme effects, i.e. a member of `A ⊗_max B`.
    pub fn is_positive(&self, a: &StateSpace<S>, b: &StateSpace<S>) -> Result<bool> {
        self.check(a, b)?;
        let tol = composite_tol(a, b);
        for x in a.cone().facets()? {
            let partial = self.coords.vec_mul(x);
            if b.cone().facets()?.iter().any(|y| !dot(&partial, y).is_nonneg(tol)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_normalized(&self, a: &StateSpace<S>, b: &StateSpace<S>) -> Result<bool> {
        self.check(a, b)?;
        Ok(self.evaluate(a.unit(), b.unit()).approx_eq(&S::one(), composite_tol(a, b)))
    }

    fn check(&self, a: &StateSpace<S>, b: &StateSpace<S>) -> Result<()> {
        check_dim(a.dim(), self.coords.nrows())?;
        check_dim(b.dim(), self.coords.ncols())
    }

    /// Partial evaluation against the other factor's unit: `ω(·, u_B)` or `ω(u_A, ·)`.
    pub fn marginal(&self, a: &StateSpace<S>, b: &StateSpace<S>, keep: Side) -> Result<Vec<S>> {
        self.check(a, b)?;
        Ok(match keep {
            Side::A => self.coords.mul_vec(b.unit()),
            Side::B => self.coords.vec_mul(a.unit()),
        })
    }

    /// `ω(a, ·)`, the un-normalized conditional state of `B`.
    pub fn partial_evaluate(&self, effect_a: &[S]) -> Vec<S> {
        self.coords.vec_mul(effect_a)
    }

    /// `ω(a, ·) / ω_A(a)`; the zero vector when the outcome has probability zero.
    pub fn conditional(&self, a: &StateSpace<S>, b: &StateSpace<S>, effect_a: &[S]) -> Result<Vec<S>> {
        self.check(a, b)?;
        check_dim(a.dim(), effect_a.len())?;
        let unnormalized = self.partial_evaluate(effect_a);
        let p = dot(&unnormalized, b.unit());
        if p.is_zero_tol(composite_tol(a, b)) {
            return Ok(vec![S::zero(); b.dim()]);
        }
        Ok(unnormalized.into_iter().map(|x| x / p.clone()).collect())
    }

    /// `ω̂ : A* → B`, `a ↦ ω(a, ·)`.
    pub fn omega_hat(&self) -> LinearMap<S> {
        LinearMap::new(self.coords.transpose())
    }

    /// State whose operator view is `psi : A* → B`.
    pub fn from_omega_hat(psi: &LinearMap<S>) -> Self {
        BipartiteState { coords: psi.matrix().transpose() }
    }
}

/// Functional on `A ⊗ B` with `f(α ⊗ β) = αᵀ F β`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteEffect<S> {
    coords: Matrix<S>,
}

impl<S: Scalar> BipartiteEffect<S> {
    pub fn new(coords: Matrix<S>) -> Self {
        BipartiteEffect { coords }
    }

    pub fn product(a: &[S], b: &[S]) -> Self {
        BipartiteEffect { coords: Matrix::outer(a, b) }
    }

    pub fn coords(&self) -> &Matrix<S> {
        &self.coords
    }

    pub fn flat(&self) -> &[S] {
        self.coords.as_flat()
    }

    pub fn evaluate(&self, state: &BipartiteState<S>) -> S {
        dot(self.flat(), state.flat())
    }

    /// `f̂ : A → B*`, `α ↦ f(α ⊗ ·)`.
    pub fn f_hat(&self) -> LinearMap<S> {
        LinearMap::new(self.coords.transpose())
    }

    /// Effect whose operator view is `phi : A → B*`.
    pub fn from_f_hat(phi: &LinearMap<S>) -> Self {
        BipartiteEffect { coords: phi.matrix().transpose() }
    }

    /// `0 <= f <= u_A ⊗ u_B` on `A ⊗_min B`, checked on product generators.
    pub fn is_min_effect(&self, a: &StateSpace<S>, b: &StateSpace<S>) -> Result<bool> {
        check_dim(a.dim(), self.coords.nrows())?;
        check_dim(b.dim(), self.coords.ncols())?;
        let tol = composite_tol(a, b);
        for ga in a.cone().generators()? {
            let partial = self.coords.vec_mul(ga);
            let ua = a.evaluate_unit(ga);
            for gb in b.cone().generators()? {
                let v = dot(&partial, gb);
                let cap = ua.clone() * b.evaluate_unit(gb);
                if !v.is_nonneg(tol) || !(cap - v).is_nonneg(tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Marginal of a bipartite state on one side.
pub fn marginal<S: Scalar>(
    state: &BipartiteState<S>,
    a: &StateSpace<S>,
    b: &StateSpace<S>,
    keep: Side,
) -> Result<Vec<S>> {
    state.marginal(a, b, keep)
}

/// Normalized conditional state of `B` given effect `a` on `A`.
pub fn conditional<S: Scalar>(
    state: &BipartiteState<S>,
    a: &StateSpace<S>,
    b: &StateSpace<S>,
    effect_a: &[S],
) -> Result<Vec<S>> {
    state.conditional(a, b, effect_a)
}

pub fn omega_hat<S: Scalar>(state: &BipartiteState<S>) -> LinearMap<S> {
    state.omega_hat()
}

pub fn f_hat<S: Scalar>(effect: &BipartiteEffect<S>) -> LinearMap<S> {
    effect.f_hat()
}

/// Entangled: a positive form outside the minimal tensor product.
pub fn is_entangled<S: Scalar>(state: &BipartiteState<S>, a: &StateSpace<S>, b: &StateSpace<S>) -> Result<bool> {
    let min = min_tensor(a, b)?;
    Ok(!min.contains(state)?)
}

/// Conditional state of `C` after outcome `f` on `AB`, for the input `α ⊗ ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct RemoteEvaluation<S> {
    pub unnormalized: Vec<S>,
    /// `None` when the outcome has probability zero.
    pub normalized: Option<Vec<S>>,
    pub probability: S,
}

/// Contract `α ⊗ ω` (an element of `A ⊗ B ⊗ C`) with `f ⊗ id_C`.
///
/// Works on the flattened tripartite coordinate vector, independently of the
/// operator views; [`remote_evaluate`] compares the two routes.
pub fn tripartite_partial_contraction<S: Scalar>(
    alpha: &[S],
    omega: &BipartiteState<S>,
    f: &BipartiteEffect<S>,
) -> Result<Vec<S>> {
    let (db, dc) = omega.dims();
    let da = alpha.len();
    check_dim(da, f.coords.nrows())?;
    check_dim(db, f.coords.ncols())?;
    let tensor = kron(alpha, omega.flat());
    let fflat = f.flat();
    let mut out = vec![S::zero(); dc];
    for ab in 0..da * db {
        let fv = &fflat[ab];
        if fv.is_zero_tol(0.0) {
            continue;
        }
        for (k, o) in out.iter_mut().enumerate() {
            *o = o.clone() + fv.clone() * tensor[ab * dc + k].clone();
        }
    }
    Ok(out)
}

/// Remote evaluation on `A ⊗_min (B ⊗_max C)`: the conditional state of `C`
/// is `ω̂(f̂(α))`, normalized by its base norm (which on the cone is `u_C`).
pub fn remote_evaluate<S: Scalar>(
    spaces: (&StateSpace<S>, &StateSpace<S>, &StateSpace<S>),
    alpha: &[S],
    omega: &BipartiteState<S>,
    f: &BipartiteEffect<S>,
) -> Result<RemoteEvaluation<S>> {
    let (a, b, c) = spaces;
    if !a.is_state(alpha)? {
        return Err(Error::Invalid("alpha is not a normalized state".into()));
    }
    if !omega.is_positive(b, c)? || !omega.is_normalized(b, c)? {
        return Err(Error::Invalid("omega is not a normalized state of B ⊗_max C".into()));
    }
    if !f.is_min_effect(a, b)? {
        return Err(Error::Invalid("f is not an effect on A ⊗_min B".into()));
    }
    let direct = tripartite_partial_contraction(alpha, omega, f)?;
    let via_operators = omega.omega_hat().apply(&f.f_hat().apply(alpha));
    let tol = a.tol().max(b.tol()).max(c.tol());
    if !crate::scalar::vec_approx_eq(&direct, &via_operators, tol) {
        return Err(Error::Inconsistent("tensor contraction disagrees with ω̂ ∘ f̂".into()));
    }
    let probability = c.evaluate_unit(&direct);
    let normalized = (!probability.is_zero_tol(tol)).then(|| c.normalize(&direct));
    Ok(RemoteEvaluation { unnormalized: direct, normalized, probability })
}

/// Every generator of `A ⊗_min (B ⊗_max C)` satisfies every facet of
/// `(A ⊗_min B) ⊗_max C`, with both living on the row-major `(i, j, k)` layout.
pub fn check_distributive_inclusion<S: Scalar>(
    a: &StateSpace<S>,
    b: &StateSpace<S>,
    c: &StateSpace<S>,
) -> Result<bool> {
    let bc = max_tensor(b, c)?;
    let ab = min_tensor(a, b)?;
    let tol = a.tol().max(b.tol()).max(c.tol());
    let gens = products(a.cone().generators()?, bc.space().cone().generators()?);
    let facets = products(ab.space().cone().facets()?, c.cone().facets()?);
    Ok(gens.iter().all(|g| facets.iter().all(|f| dot(f, g).is_nonneg(tol))))
}
