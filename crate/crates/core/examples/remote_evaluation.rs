//! Conditioning one half of a bipartite state on a joint outcome with a third system.
//!
//! For `α ⊗ ω` on `A ⊗ (B ⊗ C)` and an effect `f` on `A ⊗ B`, the state left
//! on `C` is `ω̂(f̂(α))` up to normalization.

use gpt_kit::composites::{
    check_distributive_inclusion, marginal, remote_evaluate, BipartiteEffect, BipartiteState, Side,
};
use gpt_kit::models;
use gpt_kit::{Matrix, Rational, Result, Scalar};

fn main() -> Result<()> {
    let c2 = models::classical::<Rational>(2)?;
    let half = Rational::from_ratio(1, 2);
    // Perfectly correlated bits.
    let omega = BipartiteState::new(Matrix::identity(2).scaled(&half));
    println!("marginal on B: {:?}", strs(&marginal(&omega, &c2, &c2, Side::A)?));

    // f(i, j) = 1 when the bits agree.
    let f = BipartiteEffect::new(Matrix::identity(2));
    let alpha = vec![Rational::from_ratio(1, 3), Rational::from_ratio(2, 3)];
    let r = remote_evaluate((&c2, &c2, &c2), &alpha, &omega, &f)?;
    println!(
        "outcome probability {}, conditional state on C {:?}",
        r.probability,
        r.normalized.as_deref().map(strs)
    );

    let squit = models::squit::<Rational>();
    println!(
        "A ⊗min (B ⊗max C) sits inside (A ⊗min B) ⊗max C for squit, classical:2, squit: {}",
        check_distributive_inclusion(&squit, &c2, &squit)?
    );
    Ok(())
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}
