//! Deterministic teleportation of the square bit and of a pentagon system.

use gpt_kit::maps::verify_self_duality_witness;
use gpt_kit::models;
use gpt_kit::protocols::{construct_deterministic_teleportation, self_duality_witness, SymmetryWitness};
use gpt_kit::{Rational, Result};

fn main() -> Result<()> {
    let squit = models::squit::<Rational>();
    let protocol = construct_deterministic_teleportation(&squit, &SymmetryWitness::polygon(4)?)?;
    println!("shared state coefficients:\n{}", protocol.omega.coords());
    for (k, cert) in protocol.certificates.iter().enumerate() {
        println!("outcome {k}: probability {}, correction", cert.constant.as_ref().expect("verified"));
        println!("{}", cert.correction.as_ref().expect("verified").matrix());
        let w = self_duality_witness(cert, &protocol.omega, 0.0).expect("verified");
        assert!(verify_self_duality_witness(&squit, &w)?);
    }

    let pentagon = models::polygon::<f64>(5)?;
    let p = construct_deterministic_teleportation(&pentagon, &SymmetryWitness::polygon(5)?)?;
    println!("pentagon: {} outcomes, all certified", p.certificates.len());
    Ok(())
}
