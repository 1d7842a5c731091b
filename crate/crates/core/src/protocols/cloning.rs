//! Cloning and broadcasting of finite state sets.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{rank_of, Matrix};
use crate::maps::LinearMap;
use crate::scalar::{kron, vec_approx_eq, Scalar};
use crate::space::{one_shot_distinguishing_observable, Observable, StateSpace};

use super::exposing_effect;

/// A set of states can be cloned exactly when one measurement tells them apart.
pub fn is_clonable<S: Scalar>(space: &StateSpace<S>, states: &[Vec<S>]) -> Result<bool> {
    Ok(one_shot_distinguishing_observable(space, states)?.is_some())
}

/// `x ↦ Σ_i a_i(x)·ω_i ⊗ ω_i`, a map `A → A ⊗_min A` cloning every `ω_i`.
pub fn build_cloner<S: Scalar>(
    space: &StateSpace<S>,
    states: &[Vec<S>],
    observable: &Observable<S>,
) -> Result<LinearMap<S>> {
    if observable.len() != states.len() {
        return Err(Error::DimensionMismatch { expected: states.len(), found: observable.len() });
    }
    let tol = space.tol();
    for (i, e) in observable.effects().iter().enumerate() {
        for (j, s) in states.iter().enumerate() {
            check_dim(space.dim(), s.len())?;
            let want = if i == j { S::one() } else { S::zero() };
            if !e.probability(s).approx_eq(&want, tol) {
                return Err(Error::Invalid(format!("effect {i} does not single out state {i} (fails on state {j})")));
            }
        }
    }
    Ok(LinearMap::new(copy_map(states, observable)))
}

fn copy_map<S: Scalar>(states: &[Vec<S>], observable: &Observable<S>) -> Matrix<S> {
    let d = states[0].len();
    let mut m = Matrix::zeros(d * d, d);
    for (s, e) in states.iter().zip(observable.effects()) {
        m = m.add(&Matrix::outer(&kron(s, s), e.functional()));
    }
    m
}

/// Bounds on the broadcasting search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BroadcastSearch {
    /// Largest candidate simplex; `None` means the dimension of the space.
    pub max_size: Option<usize>,
    /// Candidate subsets examined before giving up as inconclusive.
    pub max_subsets: usize,
}

impl Default for BroadcastSearch {
    fn default() -> Self {
        BroadcastSearch { max_size: None, max_subsets: 200_000 }
    }
}

#[derive(Clone, Debug)]
pub enum BroadcastVerdict<S> {
    /// The states lie in the hull of `simplex`, whose vertices are jointly
    /// distinguishable; `broadcaster` broadcasts all of them.
    Broadcastable { simplex: Vec<Vec<S>>, observable: Observable<S>, broadcaster: LinearMap<S> },
    NotBroadcastable,
    Inconclusive { examined: usize },
}

impl<S> BroadcastVerdict<S> {
    pub fn is_broadcastable(&self) -> Option<bool> {
        match self {
            BroadcastVerdict::Broadcastable { .. } => Some(true),
            BroadcastVerdict::NotBroadcastable => Some(false),
            BroadcastVerdict::Inconclusive { .. } => None,
        }
    }
}

/// Search for a simplex of jointly distinguishable states whose hull contains
/// every input state. Candidate vertices are the exposed pure states, the
/// input states, and the boundary points where a line from one of those
/// through an input state leaves the state space.
pub fn is_broadcastable<S: Scalar>(
    space: &StateSpace<S>,
    states: &[Vec<S>],
    search: BroadcastSearch,
) -> Result<BroadcastVerdict<S>> {
    if states.is_empty() {
        return Err(Error::Invalid("empty state list".into()));
    }
    let tol = space.tol();
    for s in states {
        check_dim(space.dim(), s.len())?;
        if !space.is_state(s)? {
            return Err(Error::Invalid("input is not a normalized state".into()));
        }
    }
    let mut candidates: Vec<Vec<S>> = Vec::new();
    for p in space.pure_states()? {
        if exposing_effect(space, &p)?.is_some() {
            candidates.push(p);
        }
    }
    for s in states {
        push_new(&mut candidates, s.clone(), tol);
    }
    let base = candidates.clone();
    for c in &base {
        for s in states {
            if let Some(e) = exit_point(space, c, s)? {
                push_new(&mut candidates, e, tol);
            }
        }
    }
    let max_size = search.max_size.unwrap_or(space.dim()).min(space.dim()).min(candidates.len());
    let mut examined = 0;
    for size in 1..=max_size {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            examined += 1;
            if examined > search.max_subsets {
                return Ok(BroadcastVerdict::Inconclusive { examined: search.max_subsets });
            }
            let simplex: Vec<Vec<S>> = idx.iter().map(|&i| candidates[i].clone()).collect();
            if let Some(found) = try_simplex(space, states, simplex)? {
                return Ok(found);
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
    }
    Ok(BroadcastVerdict::NotBroadcastable)
}

fn push_new<S: Scalar>(list: &mut Vec<Vec<S>>, v: Vec<S>, tol: f64) {
    if !list.iter().any(|c| vec_approx_eq(c, &v, tol)) {
        list.push(v);
    }
}

/// Last point of the ray `from + t(through − from)`, `t >= 1`, inside the cone.
fn exit_point<S: Scalar>(space: &StateSpace<S>, from: &[S], through: &[S]) -> Result<Option<Vec<S>>> {
    let tol = space.tol();
    if vec_approx_eq(from, through, tol) {
        return Ok(None);
    }
    let dir = crate::scalar::sub(through, from);
    let mut best: Option<S> = None;
    for f in space.cone().facets()? {
        let slope = crate::scalar::dot(f, &dir);
        if slope.sign(tol) == std::cmp::Ordering::Less {
            let t = crate::scalar::dot(f, from) / (-slope);
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
    }
    Ok(best.map(|t| crate::scalar::add(from, &crate::scalar::scale(&dir, &t))))
}

fn try_simplex<S: Scalar>(
    space: &StateSpace<S>,
    states: &[Vec<S>],
    simplex: Vec<Vec<S>>,
) -> Result<Option<BroadcastVerdict<S>>> {
    let tol = space.tol();
    if rank_of(&simplex, tol) < simplex.len() {
        return Ok(None);
    }
    let basis = Matrix::from_columns(&simplex)?;
    for s in states {
        // Vertices are normalized, so coordinates of a normalized state sum to 1.
        match basis.solve(s, tol) {
            Some(w) if w.iter().all(|x| x.is_nonneg(tol)) => {}
            _ => return Ok(None),
        }
    }
    let Some(observable) = one_shot_distinguishing_observable(space, &simplex)? else {
        return Ok(None);
    };
    let broadcaster = LinearMap::new(copy_map(&simplex, &observable));
    Ok(Some(BroadcastVerdict::Broadcastable { simplex, observable, broadcaster }))
}

/// Advance `idx` to the next increasing `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composites::{min_tensor, BipartiteState};
    use crate::models;
    use crate::scalar::{qv, Rational};

    fn half(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_ratio(x, 2)).collect()
    }

    #[test]
    fn square_cloning() {
        let s = models::squit::<Rational>();
        let (v1, v2, v3) = (qv(&[1, 1, 1]), qv(&[-1, 1, 1]), qv(&[-1, -1, 1]));
        assert!(is_clonable(&s, &[v1.clone(), v3.clone()]).unwrap());
        assert!(is_clonable(&s, &[v1.clone(), v2.clone()]).unwrap());
        assert!(!is_clonable(&s, &[v1.clone(), v2.clone(), v3.clone()]).unwrap());
        assert!(!is_clonable(&s, &[v1.clone(), qv(&[0, 0, 1])]).unwrap());
    }

    #[test]
    fn cloner_lands_in_min_tensor_and_copies() {
        let s = models::squit::<Rational>();
        let states = vec![qv(&[1, 1, 1]), qv(&[-1, -1, 1])];
        let obs = one_shot_distinguishing_observable(&s, &states).unwrap().unwrap();
        let m = build_cloner(&s, &states, &obs).unwrap();
        let min = min_tensor(&s, &s).unwrap();
        for g in s.cone().generators().unwrap() {
            let image = BipartiteState::from_flat(3, 3, m.apply(g)).unwrap();
            assert!(min.contains(&image).unwrap());
        }
        for w in &states {
            assert_eq!(m.apply(w), kron(w, w));
        }
    }

    #[test]
    fn classical_sets_are_broadcastable() {
        let c = models::classical::<Rational>(3).unwrap();
        let mixed = vec![qv(&[1, 1, 0]).iter().map(|x| x.clone() / Rational::from_int(2)).collect(), qv(&[0, 0, 1])];
        let v = is_broadcastable(&c, &mixed, BroadcastSearch::default()).unwrap();
        assert_eq!(v.is_broadcastable(), Some(true));
    }

    #[test]
    fn square_broadcasting() {
        let s = models::squit::<Rational>();
        let (v1, v2, v3) = (qv(&[1, 1, 1]), qv(&[-1, 1, 1]), qv(&[-1, -1, 1]));
        let mid = half(&[0, 0, 2]);
        match is_broadcastable(&s, &[v1.clone(), v3.clone(), mid], BroadcastSearch::default()).unwrap() {
            BroadcastVerdict::Broadcastable { simplex, .. } => assert_eq!(simplex, vec![v1.clone(), v3.clone()]),
            other => panic!("expected a simplex, got {other:?}"),
        }
        let edge = is_broadcastable(&s, &[v1.clone(), v2.clone()], BroadcastSearch::default()).unwrap();
        assert_eq!(edge.is_broadcastable(), Some(true));
        let three = is_broadcastable(&s, &[v1.clone(), v2, v3.clone()], BroadcastSearch::default()).unwrap();
        assert_eq!(three.is_broadcastable(), Some(false));
        // v1 and (0, 1/2, 1) lie on the chord from v1 to the midpoint of edge v2-v3,
        // and those two endpoints are distinguishable.
        let inner = vec![Rational::from_int(0), Rational::from_ratio(1, 2), Rational::from_int(1)];
        let v = is_broadcastable(&s, &[v1.clone(), inner], BroadcastSearch::default()).unwrap();
        match v {
            BroadcastVerdict::Broadcastable { simplex, .. } => {
                assert!(simplex.contains(&qv(&[-1, 0, 1])) && simplex.contains(&v1));
            }
            other => panic!("expected a simplex, got {other:?}"),
        }
        let center = qv(&[0, 0, 1]);
        let v = is_broadcastable(&s, &[v1.clone(), qv(&[-1, 1, 1]), center], BroadcastSearch::default()).unwrap();
        assert_eq!(v.is_broadcastable(), Some(false));
        let capped = is_broadcastable(&s, &[v1], BroadcastSearch { max_size: None, max_subsets: 0 }).unwrap();
        assert_eq!(capped.is_broadcastable(), None);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![2, 3]);
    }
}
