//! Maps that leave every pure state alone, for a reducible and an irreducible system.

use gpt_kit::models;
use gpt_kit::protocols::{is_nondisturbing, nondisturbing_basis};
use gpt_kit::{LinearMap, Matrix, Rational, Result, Scalar};

fn main() -> Result<()> {
    let squit = models::squit::<Rational>();
    let sum = models::direct_sum(&squit, &models::classical(1)?)?;
    let basis = nondisturbing_basis(&sum)?;
    println!("squit (+) ray: {} summands", basis.len());
    for p in &basis {
        println!("{}", p.matrix());
    }
    // 2·id on the square part plus 5·id on the ray.
    let t = LinearMap::new(
        basis[0].matrix().scaled(&Rational::from_int(2)).add(&basis[1].matrix().scaled(&Rational::from_int(5))),
    );
    println!("combination is nondisturbing: {}", is_nondisturbing(&sum, &t)?);

    let rotation = LinearMap::new(Matrix::from_rows(&[
        vec![Rational::zero(), -Rational::one(), Rational::zero()],
        vec![Rational::one(), Rational::zero(), Rational::zero()],
        vec![Rational::zero(), Rational::zero(), Rational::one()],
    ])?);
    println!("quarter turn of the square is nondisturbing: {}", is_nondisturbing(&squit, &rotation)?);
    println!("pentagon summands: {}", nondisturbing_basis(&models::polygon::<f64>(5)?)?.len());
    Ok(())
}
