//! Bit commitment from a state with two disjoint pure decompositions.
//!
//! Alice commits to `b` by drawing `n` labels from branch `b` and sending the
//! matching pure states. To Bob every round looks like `ω`. At reveal she
//! announces `b` and the labels; Bob measures each label's exposing effect
//! and accepts when every one fires.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::scalar::{dot, vec_approx_eq, Scalar};
use crate::space::StateSpace;

use super::cloning::next_combination;
use super::exposing_effect;

/// Exposed points beyond which the decomposition search refuses to run.
pub const MAX_EXPOSED: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedState<S> {
    pub state: Vec<S>,
    pub probability: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleDecomposition<S> {
    pub omega: Vec<S>,
    pub branch0: Vec<WeightedState<S>>,
    pub branch1: Vec<WeightedState<S>>,
    /// `distinguishers0[i]` is 1 on `branch0[i]` and below 1 on every other pure state.
    pub distinguishers0: Vec<Vec<S>>,
    pub distinguishers1: Vec<Vec<S>>,
}

impl<S: Scalar> DoubleDecomposition<S> {
    pub fn branch(&self, bit: u8) -> &[WeightedState<S>] {
        if bit == 0 {
            &self.branch0
        } else {
            &self.branch1
        }
    }

    pub fn distinguishers(&self, bit: u8) -> &[Vec<S>] {
        if bit == 0 {
            &self.distinguishers0
        } else {
            &self.distinguishers1
        }
    }

    /// Total number of pure states used by both branches.
    pub fn size(&self) -> usize {
        self.branch0.len() + self.branch1.len()
    }

    /// Both branches average to `omega`, use disjoint pure states, and every
    /// distinguisher is an effect that exposes its state.
    pub fn validate(&self, space: &StateSpace<S>) -> Result<bool> {
        let tol = space.tol();
        let pure = space.pure_states()?;
        for bit in [0u8, 1] {
            let branch = self.branch(bit);
            let dist = self.distinguishers(bit);
            if branch.is_empty() || branch.len() != dist.len() {
                return Ok(false);
            }
            let mut mix = vec![S::zero(); space.dim()];
            let mut total = S::zero();
            for (w, a) in branch.iter().zip(dist) {
                check_dim(space.dim(), w.state.len())?;
                if !w.probability.is_pos(tol) || !space.is_effect(a)? {
                    return Ok(false);
                }
                if !dot(a, &w.state).approx_eq(&S::one(), tol) {
                    return Ok(false);
                }
                for p in pure.iter().filter(|p| !vec_approx_eq(p, &w.state, tol)) {
                    if !(S::one() - dot(a, p)).is_pos(tol) {
                        return Ok(false);
                    }
                }
                mix = crate::scalar::add(&mix, &crate::scalar::scale(&w.state, &w.probability));
                total = total + w.probability.clone();
            }
            if !total.approx_eq(&S::one(), tol) || !vec_approx_eq(&mix, &self.omega, tol) {
                return Ok(false);
            }
        }
        let disjoint = self
            .branch0
            .iter()
            .all(|x| !self.branch1.iter().any(|y| vec_approx_eq(&x.state, &y.state, tol)));
        Ok(disjoint)
    }
}

/// Search disjoint sets of exposed pure states, smallest total size first,
/// for two whose convex hulls meet.
pub fn find_double_decomposition<S: Scalar>(space: &StateSpace<S>) -> Result<DoubleDecomposition<S>> {
    let tol = space.tol();
    let pure = space.pure_states()?;
    if pure.len() <= space.dim() {
        return Err(Error::Simplicial);
    }
    let mut exposed = Vec::new();
    for p in pure {
        if let Some((a, _)) = exposing_effect(space, &p)? {
            exposed.push((p, a));
        }
    }
    if exposed.len() > MAX_EXPOSED {
        return Err(Error::SearchCap(format!("{} exposed points, limit {MAX_EXPOSED}", exposed.len())));
    }
    let m = exposed.len();
    for total in 2..=m {
        for k0 in 1..total {
            let k1 = total - k0;
            if k0 > k1 {
                continue;
            }
            let mut x0: Vec<usize> = (0..k0).collect();
            loop {
                let rest: Vec<usize> = (0..m).filter(|i| !x0.contains(i)).collect();
                if k1 <= rest.len() {
                    let mut y: Vec<usize> = (0..k1).collect();
                    loop {
                        let x1: Vec<usize> = y.iter().map(|&i| rest[i]).collect();
                        // Equal sizes would be found twice; keep the ordering with x0 first.
                        if k0 < k1 || x0[0] < x1[0] {
                            if let Some(found) = hull_meet(&exposed, &x0, &x1, space.dim(), tol)? {
                                return Ok(found);
                            }
                        }
                        if !next_combination(&mut y, rest.len()) {
                            break;
                        }
                    }
                }
                if !next_combination(&mut x0, m) {
                    break;
                }
            }
        }
    }
    Err(Error::Inconsistent("no two disjoint sets of exposed points have intersecting hulls".into()))
}

type Exposed<S> = (Vec<S>, Vec<S>);

fn hull_meet<S: Scalar>(
    exposed: &[Exposed<S>],
    x0: &[usize],
    x1: &[usize],
    d: usize,
    tol: f64,
) -> Result<Option<DoubleDecomposition<S>>> {
    let (k0, k1) = (x0.len(), x1.len());
    let mut lp = LinearProgram::<S>::new(k0 + k1);
    for c in 0..d {
        let mut terms: Vec<(usize, S)> = x0.iter().enumerate().map(|(i, &e)| (i, exposed[e].0[c].clone())).collect();
        terms.extend(x1.iter().enumerate().map(|(j, &e)| (k0 + j, -exposed[e].0[c].clone())));
        lp.constraint_sparse(&terms, Relation::Eq, S::zero());
    }
    let ones0: Vec<(usize, S)> = (0..k0).map(|i| (i, S::one())).collect();
    let ones1: Vec<(usize, S)> = (0..k1).map(|j| (k0 + j, S::one())).collect();
    lp.constraint_sparse(&ones0, Relation::Eq, S::one());
    lp.constraint_sparse(&ones1, Relation::Eq, S::one());
    lp.minimize(vec![S::zero(); k0 + k1]);
    let Some((w, _)) = lp.solve(tol)?.optimal() else {
        return Ok(None);
    };
    let side = |idx: &[usize], weights: &[S]| {
        let mut states = Vec::new();
        let mut dist = Vec::new();
        for (&e, p) in idx.iter().zip(weights) {
            if p.is_pos(tol) {
                states.push(WeightedState { state: exposed[e].0.clone(), probability: p.clone() });
                dist.push(exposed[e].1.clone());
            }
        }
        (states, dist)
    };
    let (branch0, distinguishers0) = side(x0, &w[..k0]);
    let (branch1, distinguishers1) = side(x1, &w[k0..]);
    let mut omega = vec![S::zero(); d];
    for s in &branch0 {
        omega = crate::scalar::add(&omega, &crate::scalar::scale(&s.state, &s.probability));
    }
    Ok(Some(DoubleDecomposition { omega, branch0, branch1, distinguishers0, distinguishers1 }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommitmentTranscript<S> {
    pub seed: u64,
    pub bit: u8,
    /// Labels `x_k`, indices into the committed branch.
    pub samples: Vec<usize>,
    pub committed: Vec<Vec<S>>,
    pub revealed_bit: u8,
    pub revealed_samples: Vec<usize>,
    /// Whether Bob's check fired in each round.
    pub outcomes: Vec<bool>,
    pub verdict: Verdict,
}

/// Honest commit and reveal of `bit` over `n` rounds, driven by a ChaCha8
/// stream seeded with `seed`.
pub fn bc_run<S: Scalar>(dd: &DoubleDecomposition<S>, bit: u8, n: usize, seed: u64) -> Result<CommitmentTranscript<S>> {
    if bit > 1 {
        return Err(Error::Invalid(format!("bit must be 0 or 1, got {bit}")));
    }
    if n < 1 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let branch = dd.branch(bit);
    let weights: Vec<f64> = branch.iter().map(|w| w.probability.to_f64()).collect();
    let pick = WeightedIndex::new(&weights).map_err(|e| Error::Invalid(format!("branch weights: {e}")))?;
    let samples: Vec<usize> = (0..n).map(|_| pick.sample(&mut rng)).collect();
    let committed: Vec<Vec<S>> = samples.iter().map(|&i| branch[i].state.clone()).collect();
    let (outcomes, verdict) = bc_verify(dd, &committed, bit, &samples, &mut rng)?;
    Ok(CommitmentTranscript {
        seed,
        bit,
        revealed_samples: samples.clone(),
        samples,
        committed,
        revealed_bit: bit,
        outcomes,
        verdict,
    })
}

/// Bob's check: in round `k` measure `{a_{x_k}, u − a_{x_k}}` from the revealed
/// branch on the state he holds, and accept when every round gives `a`.
pub fn bc_verify<S: Scalar, R: Rng + ?Sized>(
    dd: &DoubleDecomposition<S>,
    committed: &[Vec<S>],
    revealed_bit: u8,
    revealed_samples: &[usize],
    rng: &mut R,
) -> Result<(Vec<bool>, Verdict)> {
    if revealed_bit > 1 {
        return Err(Error::Invalid(format!("bit must be 0 or 1, got {revealed_bit}")));
    }
    if committed.len() != revealed_samples.len() {
        return Err(Error::DimensionMismatch { expected: committed.len(), found: revealed_samples.len() });
    }
    let dist = dd.distinguishers(revealed_bit);
    let mut outcomes = Vec::with_capacity(committed.len());
    for (state, &x) in committed.iter().zip(revealed_samples) {
        let a = dist.get(x).ok_or_else(|| Error::Invalid(format!("label {x} outside the revealed branch")))?;
        let p = dot(a, state).to_f64().clamp(0.0, 1.0);
        outcomes.push(p >= 1.0 || rng.gen::<f64>() < p);
    }
    let verdict = if outcomes.iter().all(|&o| o) { Verdict::Accept } else { Verdict::Reject };
    Ok((outcomes, verdict))
}

/// Best per-round success of a cheating Alice who sends the same state in
/// every round and decides the bit only at reveal.
#[derive(Clone, Debug, PartialEq)]
pub struct CheatBound<S> {
    pub per_round: S,
    /// The optimal state `σ`.
    pub state: Vec<S>,
    /// Labels she reveals for bit 0 and for bit 1.
    pub labels: (usize, usize),
    pub rounds: usize,
    pub overall: S,
}

/// `max_σ max_{i,j} min(a⁰_i(σ), a¹_j(σ))`, one LP per label pair, raised to the `n`-th power.
pub fn bc_cheat_bound<S: Scalar>(space: &StateSpace<S>, dd: &DoubleDecomposition<S>, n: usize) -> Result<CheatBound<S>> {
    let tol = space.tol();
    let pure = space.pure_states()?;
    let m = pure.len();
    let t = m;
    let mut best: Option<CheatBound<S>> = None;
    for (i, a0) in dd.distinguishers0.iter().enumerate() {
        for (j, a1) in dd.distinguishers1.iter().enumerate() {
            let mut lp = LinearProgram::<S>::new(m + 1);
            for a in [a0, a1] {
                let mut terms: Vec<(usize, S)> = pure.iter().enumerate().map(|(k, p)| (k, dot(a, p))).collect();
                terms.push((t, -S::one()));
                lp.constraint_sparse(&terms, Relation::Ge, S::zero());
            }
            let ones: Vec<(usize, S)> = (0..m).map(|k| (k, S::one())).collect();
            lp.constraint_sparse(&ones, Relation::Eq, S::one());
            let mut obj = vec![S::zero(); m + 1];
            obj[t] = S::one();
            lp.maximize(obj);
            let (x, value) = lp
                .solve(tol)?
                .optimal()
                .ok_or_else(|| Error::Solver("cheat LP has no optimum".into()))?;
            if best.as_ref().is_none_or(|b| value > b.per_round) {
                let mut state = vec![S::zero(); space.dim()];
                for (k, p) in pure.iter().enumerate() {
                    state = crate::scalar::add(&state, &crate::scalar::scale(p, &x[k]));
                }
                best = Some(CheatBound {
                    overall: value.pow(n as u32),
                    per_round: value,
                    state,
                    labels: (i, j),
                    rounds: n,
                });
            }
        }
    }
    best.ok_or_else(|| Error::Invalid("empty decomposition".into()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheatEstimate {
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub stderr: f64,
}

/// Monte Carlo of the product cheating strategy: Alice sends `σ` in all `n`
/// rounds, flips a fair coin for the bit at reveal, and announces the
/// matching label every round.
pub fn bc_simulate_product_cheat<S: Scalar, R: Rng + ?Sized>(
    dd: &DoubleDecomposition<S>,
    bound: &CheatBound<S>,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<CheatEstimate> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be positive".into()));
    }
    let committed = vec![bound.state.clone(); n];
    let mut successes = 0;
    for _ in 0..trials {
        let bit: u8 = rng.gen_range(0..2);
        let label = if bit == 0 { bound.labels.0 } else { bound.labels.1 };
        let (_, verdict) = bc_verify(dd, &committed, bit, &vec![label; n], rng)?;
        if verdict == Verdict::Accept {
            successes += 1;
        }
    }
    let rate = successes as f64 / trials as f64;
    Ok(CheatEstimate { n, trials, successes, rate, stderr: (rate * (1.0 - rate) / trials as f64).sqrt() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    pub analytic_bound: f64,
    pub empirical_rate: f64,
    pub stderr: f64,
}

/// Cheating success against `n = 1..=max_n`, analytic and simulated, from one seeded stream.
pub fn decay_curve<S: Scalar>(
    space: &StateSpace<S>,
    dd: &DoubleDecomposition<S>,
    max_n: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<DecayRow>> {
    let bound = bc_cheat_bound(space, dd, 1)?;
    let per_round = bound.per_round.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=max_n)
        .map(|n| {
            let est = bc_simulate_product_cheat(dd, &bound, n, trials, &mut rng)?;
            Ok(DecayRow {
                n,
                analytic_bound: per_round.powi(n as i32),
                empirical_rate: est.rate,
                stderr: est.stderr,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::scalar::{qv, Rational};

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn square_decomposition() {
        let s = models::squit::<Rational>();
        let dd = find_double_decomposition(&s).unwrap();
        assert_eq!(dd.omega, qv(&[0, 0, 1]));
        assert_eq!(dd.size(), 4);
        assert!(dd.branch0.iter().chain(&dd.branch1).all(|w| w.probability == r(1, 2)));
        let b0: Vec<_> = dd.branch0.iter().map(|w| w.state.clone()).collect();
        assert_eq!(b0, vec![qv(&[1, 1, 1]), qv(&[-1, -1, 1])]);
        assert_eq!(dd.distinguishers0[0], vec![r(1, 4), r(1, 4), r(1, 2)]);
        assert!(dd.validate(&s).unwrap());
    }

    #[test]
    fn simplices_are_rejected() {
        let c = models::classical::<Rational>(3).unwrap();
        assert!(matches!(find_double_decomposition(&c), Err(Error::Simplicial)));
    }

    #[test]
    fn pentagon_decomposition_is_valid() {
        let p = models::polygon::<f64>(5).unwrap();
        let dd = find_double_decomposition(&p).unwrap();
        assert!(dd.validate(&p).unwrap());
        assert!(dd.size() >= 4);
    }

    #[test]
    fn honest_runs_accept() {
        let s = models::squit::<Rational>();
        let dd = find_double_decomposition(&s).unwrap();
        for seed in 0..20 {
            for bit in [0, 1] {
                let t = bc_run(&dd, bit, 16, seed).unwrap();
                assert_eq!(t.verdict, Verdict::Accept);
                assert_eq!(t.revealed_bit, bit);
            }
        }
        let again = bc_run(&dd, 1, 16, 7).unwrap();
        assert_eq!(again, bc_run(&dd, 1, 16, 7).unwrap());
    }

    #[test]
    fn flipped_reveal_is_caught() {
        let s = models::squit::<Rational>();
        let dd = find_double_decomposition(&s).unwrap();
        let t = bc_run(&dd, 0, 40, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (_, v) = bc_verify(&dd, &t.committed, 1, &vec![0; 40], &mut rng).unwrap();
        assert_eq!(v, Verdict::Reject);
    }

    #[test]
    fn square_cheat_bound_is_three_quarters() {
        let s = models::squit::<Rational>();
        let dd = find_double_decomposition(&s).unwrap();
        let b = bc_cheat_bound(&s, &dd, 3).unwrap();
        assert_eq!(b.per_round, r(3, 4));
        assert_eq!(b.overall, r(27, 64));
        assert!(s.is_state(&b.state).unwrap());
    }

    #[test]
    fn decay_tracks_bound() {
        let s = models::squit::<Rational>();
        let dd = find_double_decomposition(&s).unwrap();
        let rows = decay_curve(&s, &dd, 6, 4000, 42).unwrap();
        for row in rows {
            assert!((row.empirical_rate - row.analytic_bound).abs() <= 4.0 * row.stderr.max(1e-3), "{row:?}");
        }
    }
}
