//! The Bloch ball as a Lorentz cone: states, effects, norms and positive maps.

use gpt_kit::models;
use gpt_kit::{LinearMap, Matrix, Result};

fn main() -> Result<()> {
    let qubit = models::ball::<f64>(3)?;
    let up = vec![0.0, 0.0, 1.0, 1.0];
    let mixed = vec![0.3, 0.0, 0.0, 1.0];
    let outside = vec![1.0, 1.0, 0.0, 1.0];
    for s in [&up, &mixed, &outside] {
        println!("{s:?} is a state: {}", qubit.is_state(s)?);
    }
    // Effect measuring "spin up along z": (1 + z) / 2.
    let effect = vec![0.0, 0.0, 0.5, 0.5];
    println!("effect valid: {}, p(up) = {}", qubit.is_effect(&effect)?, gpt_kit::scalar::dot(&effect, &up));
    println!("base norm of (0, 0, 2, 0): {}", qubit.base_norm(&[0.0, 0.0, 2.0, 0.0])?);

    let depolarize = LinearMap::new(Matrix::from_rows(&[
        vec![0.5, 0.0, 0.0, 0.0],
        vec![0.0, 0.5, 0.0, 0.0],
        vec![0.0, 0.0, 0.5, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ])?);
    let cone = qubit.cone();
    println!("depolarizing map positive: {}", depolarize.is_positive(cone, cone)?);
    let stretch = LinearMap::new(Matrix::identity(4).add(&Matrix::from_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
    ])?));
    println!("stretching x is positive: {}", stretch.is_positive(cone, cone)?);
    Ok(())
}
