//! Abstract state spaces: a cone plus a strictly positive order unit.

use crate::cone::{ConeKind, ConeRep};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::lp::{LinearProgram, Relation};
use crate::scalar::{dot, sub, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace<S> {
    cone: ConeRep<S>,
    unit: Vec<S>,
}

impl<S: Scalar> StateSpace<S> {
    /// Rejects units that are not strictly positive on the cone, since then
    /// the normalized states would not form a compact base.
    pub fn new(cone: ConeRep<S>, unit: Vec<S>) -> Result<Self> {
        check_dim(cone.dim(), unit.len())?;
        if !cone.strictly_positive(&unit)? {
            return Err(Error::UnitNotStrictlyPositive(format!(
                "unit {:?} vanishes or is negative on some nonzero member",
                unit.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        Ok(StateSpace { cone, unit })
    }

    pub fn cone(&self) -> &ConeRep<S> {
        &self.cone
    }
    pub fn unit(&self) -> &[S] {
        &self.unit
    }
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }
    pub fn tol(&self) -> f64 {
        self.cone.tol()
    }
    pub fn kind(&self) -> ConeKind {
        self.cone.kind()
    }

    pub fn with_tol(self, tol: f64) -> Self {
        StateSpace { cone: self.cone.with_tol(tol), unit: self.unit }
    }

    pub fn evaluate_unit(&self, x: &[S]) -> S {
        dot(&self.unit, x)
    }

    /// Extreme rays rescaled onto the normalized-state set; these are the pure states.
    pub fn pure_states(&self) -> Result<Vec<Vec<S>>> {
        Ok(self.cone.generators()?.iter().map(|g| self.normalize(g)).collect())
    }

    /// `x / u(x)`; the zero vector when `u(x)` vanishes.
    pub fn normalize(&self, x: &[S]) -> Vec<S> {
        let n = self.evaluate_unit(x);
        if n.is_zero_tol(self.tol()) {
            return vec![S::zero(); x.len()];
        }
        x.iter().map(|v| v.clone() / n.clone()).collect()
    }

    pub fn is_state(&self, x: &[S]) -> Result<bool> {
        Ok(self.cone.contains(x)? && self.evaluate_unit(x).approx_eq(&S::one(), self.tol()))
    }

    /// `0 <= a <= u` in the dual order.
    pub fn is_effect(&self, a: &[S]) -> Result<bool> {
        check_dim(self.dim(), a.len())?;
        Ok(self.cone.dual_contains(a)? && self.cone.dual_contains(&sub(&self.unit, a))?)
    }

    /// Base norm `min { u(v⁺) + u(v⁻) : v = v⁺ − v⁻, v± in the cone }`.
    ///
    /// Polyhedral cones solve the decomposition LP over the generators. Lorentz
    /// cones with the standard unit use the closed form `max(|t|, ‖x‖)`, which
    /// in exact mode needs a rational square root.
    pub fn base_norm(&self, v: &[S]) -> Result<S> {
        check_dim(self.dim(), v.len())?;
        let tol = self.tol();
        match self.kind() {
            ConeKind::Polyhedral => {
                let gens = self.cone.generators()?;
                let k = gens.len();
                let mut lp = LinearProgram::new(2 * k);
                for row in 0..self.dim() {
                    let mut coeffs = Vec::with_capacity(2 * k);
                    coeffs.extend(gens.iter().map(|g| g[row].clone()));
                    coeffs.extend(gens.iter().map(|g| -g[row].clone()));
                    lp.constraint(coeffs, Relation::Eq, v[row].clone());
                }
                let weights: Vec<S> = gens.iter().map(|g| self.evaluate_unit(g)).collect();
                lp.minimize([weights.clone(), weights].concat());
                let (_, value) = lp
                    .solve(tol)?
                    .optimal()
                    .ok_or_else(|| Error::Solver("base-norm decomposition LP has no optimum".into()))?;
                Ok(value)
            }
            ConeKind::Lorentz => {
                let d = self.dim();
                let standard = self.unit[..d - 1].iter().all(|x| x.is_zero_tol(0.0))
                    && self.unit[d - 1].approx_eq(&S::one(), 0.0);
                if !standard {
                    return Err(Error::Unsupported("Lorentz base norm needs the unit (0, …, 0, 1)".into()));
                }
                let sq = v[..d - 1].iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone());
                let r = sq
                    .sqrt()
                    .ok_or_else(|| Error::Inexact(format!("sqrt({sq}) is irrational")))?;
                let t = v[d - 1].abs();
                Ok(if r > t { r } else { t })
            }
        }
    }

    /// Irreducible direct-sum decomposition of a polyhedral cone.
    ///
    /// Extreme rays are grouped into the connected components of their linear
    /// matroid: with a basis `B` drawn from the rays, each remaining ray joins
    /// every basis ray that appears in its expansion over `B`. Components have
    /// independent spans that sum to the whole space, and no finer partition
    /// does. Summands are ordered by their lowest ray index.
    pub fn decompose_cone(&self) -> Result<Vec<Summand<S>>> {
        let rays = self.cone.generators()?;
        let tol = self.tol();
        let basis = independent_subset(rays, tol);
        let bm = Matrix::from_columns(&basis.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>())?;

        let mut parent: Vec<usize> = (0..rays.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut c = i;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for (i, r) in rays.iter().enumerate() {
            if basis.contains(&i) {
                continue;
            }
            let coeffs = bm
                .solve(r, tol)
                .ok_or_else(|| Error::Inconsistent("ray outside the span of a basis".into()))?;
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero_tol(tol) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, basis[k]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }

        let mut summands: Vec<Summand<S>> = Vec::new();
        let mut root_of_block: Vec<usize> = Vec::new();
        for i in 0..rays.len() {
            let r = find(&mut parent, i);
            match root_of_block.iter().position(|&x| x == r) {
                Some(b) => summands[b].rays.push(i),
                None => {
                    root_of_block.push(r);
                    summands.push(Summand { rays: vec![i], basis: Vec::new() });
                }
            }
        }
        for s in &mut summands {
            let vs: Vec<Vec<S>> = s.rays.iter().map(|&i| rays[i].clone()).collect();
            s.basis = independent_subset(&vs, tol).into_iter().map(|i| vs[i].clone()).collect();
        }
        Ok(summands)
    }
}

/// One irreducible summand: the generator indices it owns and a basis of its span.
#[derive(Clone, Debug, PartialEq)]
pub struct Summand<S> {
    pub rays: Vec<usize>,
    pub basis: Vec<Vec<S>>,
}

/// A functional with `0 <= a <= u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect<S>(Vec<S>);

impl<S: Scalar> Effect<S> {
    pub fn new(space: &StateSpace<S>, functional: Vec<S>) -> Result<Self> {
        if !space.is_effect(&functional)? {
            return Err(Error::Invalid("functional is not an effect".into()));
        }
        Ok(Effect(functional))
    }

    pub fn functional(&self) -> &[S] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }

    pub fn probability(&self, state: &[S]) -> S {
        dot(&self.0, state)
    }
}

/// Effects summing to the order unit.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable<S> {
    effects: Vec<Effect<S>>,
}

impl<S: Scalar> Observable<S> {
    pub fn new(space: &StateSpace<S>, effects: Vec<Effect<S>>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Invalid("an observable needs at least one effect".into()));
        }
        let mut total = vec![S::zero(); space.dim()];
        for e in &effects {
            check_dim(space.dim(), e.0.len())?;
            total = crate::scalar::add(&total, &e.0);
        }
        if !crate::scalar::vec_approx_eq(&total, space.unit(), space.tol()) {
            return Err(Error::Invalid("effects do not sum to the order unit".into()));
        }
        Ok(Observable { effects })
    }

    pub fn effects(&self) -> &[Effect<S>] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Outcome probabilities on a state.
    pub fn distribution(&self, state: &[S]) -> Vec<S> {
        self.effects.iter().map(|e| e.probability(state)).collect()
    }
}

/// Effects `a_1..a_k` with `a_i(ω_j) = δ_ij` summing to the unit, or `None`
/// when the states cannot be told apart by a single measurement.
///
/// Among all feasible observables the one returned maximizes the smallest
/// value any effect takes on a pure state outside the input set (capped at 1),
/// which picks a central, symmetric solution instead of an arbitrary LP
/// vertex. Solver failures surface as errors, distinct from `None`.
pub fn one_shot_distinguishing_observable<S: Scalar>(
    space: &StateSpace<S>,
    states: &[Vec<S>],
) -> Result<Option<Observable<S>>> {
    let d = space.dim();
    let k = states.len();
    if k == 0 {
        return Err(Error::Invalid("empty state list".into()));
    }
    for s in states {
        check_dim(d, s.len())?;
        if !space.is_state(s)? {
            return Err(Error::Invalid("input is not a normalized state".into()));
        }
    }
    let tol = space.tol();
    let pure = space.pure_states()?;
    let outside: Vec<&Vec<S>> = pure
        .iter()
        .filter(|p| !states.iter().any(|s| crate::scalar::vec_approx_eq(s, p, tol)))
        .collect();

    // Variables: k effect vectors (free) and the margin t >= 0.
    let t = k * d;
    let var = |i: usize, c: usize| i * d + c;
    let mut lp = LinearProgram::<S>::new(k * d + 1);
    for j in 0..k * d {
        lp.set_free(j);
    }
    for i in 0..k {
        for g in &pure {
            let terms: Vec<(usize, S)> = (0..d).map(|c| (var(i, c), g[c].clone())).collect();
            lp.constraint_sparse(&terms, Relation::Ge, S::zero());
        }
        for (j, s) in states.iter().enumerate() {
            let terms: Vec<(usize, S)> = (0..d).map(|c| (var(i, c), s[c].clone())).collect();
            let rhs = if i == j { S::one() } else { S::zero() };
            lp.constraint_sparse(&terms, Relation::Eq, rhs);
        }
        for g in &outside {
            let mut terms: Vec<(usize, S)> = (0..d).map(|c| (var(i, c), g[c].clone())).collect();
            terms.push((t, -S::one()));
            lp.constraint_sparse(&terms, Relation::Ge, S::zero());
        }
    }
    for c in 0..d {
        let terms: Vec<(usize, S)> = (0..k).map(|i| (var(i, c), S::one())).collect();
        lp.constraint_sparse(&terms, Relation::Eq, space.unit()[c].clone());
    }
    lp.constraint_sparse(&[(t, S::one())], Relation::Le, S::one());
    let mut obj = vec![S::zero(); k * d + 1];
    obj[t] = S::one();
    lp.maximize(obj);

    let Some((x, _)) = lp.solve(tol)?.optimal() else {
        return Ok(None);
    };
    let effects = (0..k)
        .map(|i| Effect::new(space, x[i * d..(i + 1) * d].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Observable::new(space, effects).map(Some)
}
