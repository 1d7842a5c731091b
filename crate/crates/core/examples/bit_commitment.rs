//! Bit commitment with square bits: decomposition, an honest run, and the cheating curve.

use gpt_kit::io::decay_csv;
use gpt_kit::models;
use gpt_kit::protocols::{bc_cheat_bound, bc_run, decay_curve, find_double_decomposition};
use gpt_kit::{Rational, Result, Scalar};

fn main() -> Result<()> {
    let s = models::squit::<Rational>();
    let dd = find_double_decomposition(&s)?;
    for (bit, branch) in [(0, &dd.branch0), (1, &dd.branch1)] {
        let parts: Vec<String> = branch
            .iter()
            .map(|w| format!("{} * {:?}", w.probability, w.state.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .collect();
        println!("branch {bit}: {}", parts.join(" + "));
    }

    let t = bc_run(&dd, 1, 8, 2024)?;
    println!("honest run, seed {}: labels {:?}, verdict {:?}", t.seed, t.samples, t.verdict);

    let bound = bc_cheat_bound(&s, &dd, 20)?;
    println!("per-round cheat bound {}, after 20 rounds {:.3e}", bound.per_round, bound.overall.to_f64());
    print!("{}", decay_csv(&decay_curve(&s, &dd, 8, 20_000, 7)?));
    Ok(())
}
