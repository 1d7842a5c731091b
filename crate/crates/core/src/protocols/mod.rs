//! Information-processing results as decision procedures and simulators.

pub mod bitcommit;
pub mod cloning;
pub mod nondisturb;
pub mod teleport;

pub use bitcommit::{
    bc_cheat_bound, bc_run, bc_simulate_product_cheat, bc_verify, decay_curve, find_double_decomposition, MAX_EXPOSED,
    CheatBound, CheatEstimate, CommitmentTranscript, DecayRow, DoubleDecomposition, Verdict, WeightedState,
};
pub use cloning::{build_cloner, is_broadcastable, is_clonable, BroadcastSearch, BroadcastVerdict};
pub use nondisturb::{is_nondisturbing, nondisturbing_basis};
pub use teleport::{
    construct_deterministic_teleportation, verify_compression_witness, verify_correction_free, verify_teleportation,
    self_duality_witness, DeterministicTeleportation, SymmetryWitness, TeleportationCertificate,
};

use crate::error::{check_dim, Result};
use crate::lp::{LinearProgram, Relation};
use crate::scalar::{sub, Scalar};
use crate::space::StateSpace;

/// An effect equal to 1 on `state` with the largest possible gap below 1 on
/// every other pure state. `None` when no positive gap exists (the state is
/// not exposed, or the gap is within tolerance).
pub fn exposing_effect<S: Scalar>(space: &StateSpace<S>, state: &[S]) -> Result<Option<(Vec<S>, S)>> {
    let d = space.dim();
    check_dim(d, state.len())?;
    let tol = space.tol();
    let pure = space.pure_states()?;
    let gap = d;
    let mut lp = LinearProgram::<S>::new(d + 1);
    for j in 0..d {
        lp.set_free(j);
    }
    let row = |v: &[S], gap_coeff: S| {
        let mut c = v.to_vec();
        c.push(gap_coeff);
        c
    };
    lp.constraint(row(state, S::zero()), Relation::Eq, S::one());
    for g in &pure {
        lp.constraint(row(g, S::zero()), Relation::Ge, S::zero());
        lp.constraint(row(g, S::zero()), Relation::Le, space.evaluate_unit(g));
        if !crate::scalar::vec_approx_eq(g, state, tol) {
            lp.constraint(row(g, S::one()), Relation::Le, S::one());
        }
    }
    let mut cap = vec![S::zero(); d + 1];
    cap[gap] = S::one();
    lp.constraint(cap.clone(), Relation::Le, S::one());
    lp.maximize(cap);
    let Some((x, value)) = lp.solve(tol)?.optimal() else {
        return Ok(None);
    };
    if !value.is_pos(tol) {
        return Ok(None);
    }
    let effect = x[..d].to_vec();
    debug_assert!(space.cone().dual_contains(&sub(space.unit(), &effect)).unwrap_or(false));
    Ok(Some((effect, value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::scalar::{q, qv, Rational};

    #[test]
    fn square_vertex_exposed_by_quarter_effect() {
        let s = models::squit::<Rational>();
        let (a, gap) = exposing_effect(&s, &qv(&[1, 1, 1])).unwrap().unwrap();
        assert_eq!(a, vec![q("1/4"), q("1/4"), q("1/2")]);
        assert_eq!(gap, q("1/2"));
    }

    #[test]
    fn center_is_not_exposed() {
        let s = models::squit::<Rational>();
        assert!(exposing_effect(&s, &qv(&[0, 0, 1])).unwrap().is_none());
    }
}
