//! Minimal and maximal tensor products, and an entangled state of two square bits.

use gpt_kit::composites::{is_entangled, max_tensor, min_tensor, BipartiteState};
use gpt_kit::models;
use gpt_kit::{Rational, Result, Scalar};

fn main() -> Result<()> {
    let c2 = models::classical::<Rational>(2)?;
    let min = min_tensor(&c2, &c2)?;
    let max = max_tensor(&c2, &c2)?;
    println!(
        "classical:2 x classical:2  min and max coincide: {}",
        max.space().cone().same_members(min.space().cone())?
    );

    let s = models::squit::<Rational>();
    let min = min_tensor(&s, &s)?;
    let max = max_tensor(&s, &s)?;
    println!(
        "squit x squit  min: {} rays / {} facets, max: {} rays / {} facets",
        min.space().cone().generators()?.len(),
        min.space().cone().facets()?.len(),
        max.space().cone().generators()?.len(),
        max.space().cone().facets()?.len()
    );

    // Every extreme ray of the maximal product outside the minimal one is entangled.
    let entangled = max
        .space()
        .cone()
        .generators()?
        .iter()
        .filter(|g| !min.space().cone().contains(g).unwrap_or(true))
        .count();
    println!("entangled extreme rays: {entangled}");

    let ray = max
        .space()
        .cone()
        .generators()?
        .iter()
        .find(|g| !min.space().cone().contains(g).unwrap_or(true))
        .cloned()
        .expect("the square bits admit entanglement");
    let state = BipartiteState::from_flat(3, 3, ray)?;
    let norm = state.evaluate(s.unit(), s.unit());
    let state = BipartiteState::new(state.coords().scaled(&(Rational::one() / norm)));
    println!("normalized: {}, entangled: {}", state.is_normalized(&s, &s)?, is_entangled(&state, &s, &s)?);
    println!("coefficients:\n{}", state.coords());
    Ok(())
}
