//! Geometric singular perturbation view: the five-dimensional delay
//! systems, their critical manifolds, and the saddle frame of the slow
//! normal form.
//!
//! Writing the delay chain as extra states (η, ζ) turns each delayed wave
//! equation into a fast-slow system. The local chain relaxes on the
//! critical manifold {η = φ, ζ = 2φ} with a repelling layer; the nonlocal
//! chain (in ε = √τ) uses {η = φ, ζ = 0} with a saddle layer. First-order
//! manifold expansions reproduce the slow flow to O(τ²).
//!
//! Run with: cargo run --example slow_fast_manifold

use kpbbm::dynamics::{
    full5_rhs, integrate_system, layer_base, manifold_expansion, saddle_frame, FullPoint,
    ReducedSystem, TimeFrame,
};
use kpbbm::model::ModelParams;
use kpbbm::ode::OdeOptions;
use kpbbm::DelayKind;

fn main() -> kpbbm::Result<()> {
    let tau = 1e-3;
    let params = ModelParams::new(-1.0, 1.0, -1.0, 1.0, tau)?;

    // Saddle frame of the three-dimensional normal form at the origin.
    let frame = saddle_frame(&params)?;
    println!("saddle frame at the origin (tau = {tau}):");
    println!("  mu_unstable = {:+.8}", frame.mu_unstable);
    println!("  mu_stable   = {:+.8}", frame.mu_stable);
    println!("  unstable direction: {:?}", frame.unstable);
    println!("  stable   direction: {:?}", frame.stable);
    println!("  center   direction: {:?}", frame.center);
    println!("  (tau = 0 collapses both to the planar eigenvalues ±1)");

    // Critical manifolds of the two five-dimensional systems.
    println!("\ncritical manifold base points at phi = 0.8:");
    for delay in [DelayKind::Local, DelayKind::Nonlocal] {
        let [eta, zeta] = layer_base(delay, 0.8)?;
        println!("  {delay:?}: eta = {eta}, zeta = {zeta}");
    }

    // First-order expansion: on the corrected graph the fast chain states
    // move exactly with their slow counterparts, so the layer equations
    // are satisfied to the order of the expansion.
    let (phi, psi, omega) = (0.8, 0.3, 0.05);
    for delay in [DelayKind::Local, DelayKind::Nonlocal] {
        let [eta, zeta] = manifold_expansion(delay, &params, phi, psi, omega)?;
        let p = FullPoint {
            phi,
            psi,
            omega,
            eta,
            zeta,
        };
        let dp = full5_rhs(delay, p, &params)?;
        let (r_eta, r_zeta) = match delay {
            // eta tracks phi, zeta tracks 2*phi.
            DelayKind::Local => (dp.eta - psi, dp.zeta - 2.0 * psi),
            // eta tracks phi, zeta tracks sqrt(tau)*psi.
            DelayKind::Nonlocal => (dp.eta - psi, dp.zeta - tau.sqrt() * omega),
            DelayKind::None => unreachable!(),
        };
        println!("\n{delay:?} expansion at (phi, psi, omega) = ({phi}, {psi}, {omega}):");
        println!("  eta = {eta:.6}, zeta = {zeta:.6}");
        println!("  layer-equation residuals: ({r_eta:+.3e}, {r_zeta:+.3e})");
    }

    // Layer behavior, local chain: the manifold is repelling, so forward
    // integration amplifies an off-manifold defect while backward
    // integration kills it.
    let system = ReducedSystem::Full5(DelayKind::Local);
    let base = [0.8, 0.0, 0.0];
    let [eta0, zeta0] = layer_base(DelayKind::Local, 0.8)?;
    let y0 = [base[0], base[1], base[2], eta0 + 1e-6, zeta0];
    let opts = OdeOptions::default();
    println!("\nlocal layer (repelling): defect |eta - phi| from 1e-6 at xi = 0");
    for xi in [-2e-3, -1e-3, 1e-3, 2e-3] {
        let run = integrate_system(system, &params, &y0, 0.0, xi, TimeFrame::Slow, &opts)?;
        let y = run.final_state();
        println!("  xi = {xi:+.0e}: {:.3e}", (y[3] - y[0]).abs());
    }
    println!("backward time contracts onto the manifold, forward time escapes:");
    println!("persistence arguments for this chain run against the flow.");
    Ok(())
}
