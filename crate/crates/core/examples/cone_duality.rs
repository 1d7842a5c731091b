//! Dual cones, pure states, base norms and a self-duality witness for the square bit.
//!
//! Run with `cargo run --example cone_duality`.

use gpt_kit::maps::verify_self_duality_witness;
use gpt_kit::models;
use gpt_kit::{LinearMap, Matrix, Rational, Result, Scalar};

fn main() -> Result<()> {
    let squit = models::squit::<Rational>();
    println!("pure states:");
    for p in squit.pure_states()? {
        println!("  {}", fmt(&p));
    }
    let dual = squit.cone().dual()?;
    println!("extreme effects (dual rays):");
    for f in dual.generators()? {
        println!("  {}", fmt(f));
    }

    let half = Rational::from_ratio(1, 2);
    let w = LinearMap::new(Matrix::from_rows(&[
        vec![half.clone(), -half.clone(), Rational::zero()],
        vec![half.clone(), half.clone(), Rational::zero()],
        vec![Rational::zero(), Rational::zero(), Rational::one()],
    ])?);
    println!("rotate-and-shrink map is a self-duality witness: {}", verify_self_duality_witness(&squit, &w)?);

    for v in [[0, 0, 1], [1, 1, 1], [2, 0, 0], [1, 1, 0]] {
        let v: Vec<Rational> = v.iter().map(|&x| Rational::from_int(x)).collect();
        println!("base norm of {} = {}", fmt(&v), squit.base_norm(&v)?);
    }
    Ok(())
}

fn fmt(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}
