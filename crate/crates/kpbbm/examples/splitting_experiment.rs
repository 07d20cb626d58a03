//! Direct measurement of the manifold splitting in the slow normal form,
//! compared against the Melnikov prediction τΔ(c).
//!
//! For τ > 0 the saddle survives on the slow manifold with one-dimensional
//! stable/unstable manifolds. Shooting both from the saddle to the section
//! {ψ = 0, φ > φ₂} and differencing a tilted energy
//! E = H + (φ*/(bc))ω at the crossings gives a signed gap that matches
//! τΔ(c) to O(τ²). The raw Hamiltonian difference carries a sign-constant
//! O(τ) offset and misses the root entirely, so the ω tilt matters.
//!
//! Run with: cargo run --release --example splitting_experiment

use kpbbm::dynamics::{splitting_gap, SplittingOptions};
use kpbbm::melnikov::{reference_polynomial, MelnikovVariant};
use kpbbm::model::FamilyParams;
use kpbbm::DelayKind;

fn main() -> kpbbm::Result<()> {
    let family = FamilyParams::new(-1.0, 1.0, -1.0);
    let opts = SplittingOptions::default();

    println!("signed gap / tau versus the Melnikov polynomial (tau = 1e-3):");
    println!("  c      measured gap/tau   tau*Delta(c)/tau   rel diff");
    for c in [0.5, 0.7, 0.9, 1.2] {
        let params = family.at(c, 1e-3)?;
        let m = splitting_gap(DelayKind::Local, &params, &opts)?;
        let poly = reference_polynomial(MelnikovVariant::LOCAL_FULL, c, &family)?;
        let measured = m.signed_gap / params.tau;
        println!(
            "  {c:<5}  {measured:+.8e}    {poly:+.8e}    {:.1e}",
            ((measured - poly) / poly).abs()
        );
    }

    // The agreement sharpens like O(tau) in gap/tau, i.e. the gap itself
    // matches tau*Delta to second order.
    let c = 0.9;
    let poly = reference_polynomial(MelnikovVariant::LOCAL_FULL, c, &family)?;
    println!("\nconvergence at c = {c}:");
    println!("  tau      |gap/tau - Delta(c)|");
    for tau in [4e-3, 2e-3, 1e-3, 5e-4] {
        let params = family.at(c, tau)?;
        let m = splitting_gap(DelayKind::Local, &params, &opts)?;
        println!("  {tau:<7}  {:.3e}", (m.signed_gap / tau - poly).abs());
    }

    // Diagnostics: the un-tilted Hamiltonian gap never changes sign, so it
    // cannot locate the persistent speed.
    println!("\nraw Hamiltonian gap / tau (no omega tilt), tau = 1e-3:");
    for c in [0.5, 0.9, 1.2] {
        let params = family.at(c, 1e-3)?;
        let m = splitting_gap(DelayKind::Local, &params, &opts)?;
        println!(
            "  c = {c:<4} H-gap/tau = {:+.4}   tilted gap/tau = {:+.4}",
            m.hamiltonian_gap / params.tau,
            m.signed_gap / params.tau
        );
    }
    println!(
        "\nthe tilted gap changes sign near c* = {:.6};",
        (7.0f64 / 12.0).sqrt()
    );
    println!("the raw H-gap stays positive everywhere.");
    Ok(())
}
