//! Which sets of square-bit states can be cloned or broadcast.

use gpt_kit::composites::{BipartiteState, Side};
use gpt_kit::models;
use gpt_kit::protocols::{build_cloner, is_broadcastable, is_clonable, BroadcastSearch, BroadcastVerdict};
use gpt_kit::space::one_shot_distinguishing_observable;
use gpt_kit::{Rational, Result, Scalar};

fn v(x: i64, y: i64) -> Vec<Rational> {
    vec![Rational::from_int(x), Rational::from_int(y), Rational::one()]
}

fn main() -> Result<()> {
    let s = models::squit::<Rational>();
    let (v1, v2, v3) = (v(1, 1), v(-1, 1), v(-1, -1));
    println!("{{v1, v3}} clonable: {}", is_clonable(&s, &[v1.clone(), v3.clone()])?);
    println!("{{v1, v2, v3}} clonable: {}", is_clonable(&s, &[v1.clone(), v2.clone(), v3.clone()])?);

    let pair = vec![v1.clone(), v3.clone()];
    let obs = one_shot_distinguishing_observable(&s, &pair)?.expect("opposite corners are distinguishable");
    let cloner = build_cloner(&s, &pair, &obs)?;
    let mid = v(0, 0);
    let out = BipartiteState::from_flat(3, 3, cloner.apply(&mid))?;
    println!(
        "midpoint broadcast: marginals {:?} and {:?}",
        strs(&out.marginal(&s, &s, Side::A)?),
        strs(&out.marginal(&s, &s, Side::B)?)
    );

    match is_broadcastable(&s, &[v1, v3, mid], BroadcastSearch::default())? {
        BroadcastVerdict::Broadcastable { simplex, .. } => {
            println!("{{v1, v3, centre}} broadcastable inside {:?}", simplex.iter().map(|p| strs(p)).collect::<Vec<_>>())
        }
        other => println!("unexpected: {other:?}"),
    }
    let three = is_broadcastable(&s, &[v(1, 1), v2, v(-1, -1)], BroadcastSearch::default())?;
    println!("{{v1, v2, v3}} broadcastable: {:?}", three.is_broadcastable());
    Ok(())
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}
