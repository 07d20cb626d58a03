//! Unperturbed phase plane: equilibria, the homoclinic loop, and level
//! sets of the first integral.
//!
//! The traveling-wave ansatz u = φ(x + y − ct) reduces the PDE to the
//! planar system φ' = ψ, ψ' = [(c−k−1)φ + aφ²]/(bc). For a < 0, b > 0 and
//! 0 ≤ k+1 < c the origin is a saddle whose separatrix loop Γ encloses a
//! center; the loop has the closed form φ(ξ) = φ* sech²(qξ).
//!
//! Run with: cargo run --example phase_portrait

use kpbbm::model::{self, HomoclinicOrbit, ModelParams, PhasePoint};

fn main() -> kpbbm::Result<()> {
    let params = ModelParams::new(-1.0, 1.0, -1.0, 1.0, 0.0)?;
    println!(
        "parameters: a = {}, b = {}, k = {}, c = {}",
        params.a, params.b, params.k, params.c
    );
    println!("homoclinic regime: {}\n", params.homoclinic_regime());

    let [saddle, center] = model::equilibria(&params)?;
    println!("equilibria:");
    for e in [&saddle, &center] {
        println!(
            "  ({:+.4}, {:+.4})  {:?}  det J = {:+.4}  tr J = {:+.4}",
            e.point.phi, e.point.psi, e.kind, e.jacobian_det, e.jacobian_trace
        );
    }

    let orbit = HomoclinicOrbit::new(&params)?;
    println!(
        "\nhomoclinic loop: phi* = {:.6}, q = {:.6}",
        orbit.phi_star(),
        orbit.q()
    );

    println!("\n  xi        phi           psi           H(phi, psi)");
    for i in -4..=4 {
        let xi = 2.5 * i as f64;
        let p = orbit.sample(xi);
        let h = model::hamiltonian(p, &params).0;
        println!("  {xi:+5.1}  {:+.6e}  {:+.6e}  {h:+.3e}", p.phi, p.psi);
    }

    // The loop lives on H = 0; the center sits at the extreme level h2.
    let h2 = model::hamiltonian(center.point, &params).0;
    println!("\ncenter level h2 = {h2:+.6}");
    println!("levels between 0 and h2 carry closed periodic orbits;");
    println!("levels below h2 on phi < 0 are unbounded arcs.");

    // Residual check: the closed form satisfies the wave ODE pointwise.
    let worst = (-120..=120)
        .map(|i| orbit.ode_residual(0.25 * i as f64).abs())
        .fold(0.0, f64::max);
    println!("\nmax |wave ODE residual| on xi in [-30, 30]: {worst:.2e}");

    // H is exactly conserved along the planar field.
    let p = PhasePoint::new(0.7, 0.3);
    let rhs = model::planar_rhs(p, &params);
    let grad_h = ((params.k + 1.0 - params.c) * p.phi - params.a * p.phi * p.phi) / params.bc();
    let drift = grad_h * rhs.phi + p.psi * rhs.psi;
    println!(
        "dH/dxi along the field at ({}, {}): {drift:+.3e}",
        p.phi, p.psi
    );
    Ok(())
}
