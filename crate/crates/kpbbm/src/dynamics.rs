//! Reduced traveling-wave systems and the measured manifold splitting.
//!
//! For τ > 0 the wave profile satisfies a third-order equation coupled to
//! delay variables. Two reductions are implemented:
//!
//! - the five-dimensional systems (φ, ψ, ω, η, ζ) with the delay resolved
//!   by a linear chain, where (η, ζ) form a fast layer with an invariant
//!   slow manifold near {η = φ};
//! - the three-dimensional normal forms on that slow manifold, one per
//!   delay kind, which perturb the planar Hamiltonian system at O(τ).
//!
//! The saddle at the origin persists for τ > 0 with a one-dimensional
//! unstable and a one-dimensional stable direction. Launching on each and
//! integrating to the section {ψ = 0, φ > φ₂} measures the splitting of
//! the homoclinic loop: the signed gap in the tilted energy
//!
//! ```text
//! E = H(φ, ψ) + (φ*/(bc)) ω
//! ```
//!
//! between the stable and unstable crossings equals τ·Δ(c) + O(τ²), with
//! Δ the Melnikov function of the matching variant. E rather than H is the
//! right section coordinate: near the apex the trajectory conserves the
//! ω-frozen energy H + ωφ/(bc), so E is independent of exactly where on
//! the section the crossing lands, while H alone is not.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::melnikov::DelayKind;
use crate::model::{self, ModelParams, PhasePoint};
use crate::ode::{self, EventCrossing, EventSpec, Integration, OdeOptions};
use crate::roots;

/// Time variable used to integrate the five-dimensional systems.
///
/// `Slow` integrates in the wave coordinate ξ; `Fast` in the layer time
/// ξ/τ, which keeps the stiff delay chain well scaled when τ is tiny.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeFrame {
    Slow,
    Fast,
}

impl TimeFrame {
    /// Slow frame for moderate τ, fast frame below τ = 1e-4.
    pub fn auto(tau: f64) -> TimeFrame {
        if tau < 1e-4 {
            TimeFrame::Fast
        } else {
            TimeFrame::Slow
        }
    }
}

/// State of a three-dimensional normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlowPoint {
    pub phi: f64,
    pub psi: f64,
    pub omega: f64,
}

impl SlowPoint {
    pub fn to_array(self) -> [f64; 3] {
        [self.phi, self.psi, self.omega]
    }

    pub fn from_array(y: [f64; 3]) -> Self {
        SlowPoint {
            phi: y[0],
            psi: y[1],
            omega: y[2],
        }
    }
}

/// State of a five-dimensional system with explicit delay variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FullPoint {
    pub phi: f64,
    pub psi: f64,
    pub omega: f64,
    pub eta: f64,
    pub zeta: f64,
}

impl FullPoint {
    pub fn to_array(self) -> [f64; 5] {
        [self.phi, self.psi, self.omega, self.eta, self.zeta]
    }

    pub fn from_array(y: [f64; 5]) -> Self {
        FullPoint {
            phi: y[0],
            psi: y[1],
            omega: y[2],
            eta: y[3],
            zeta: y[4],
        }
    }
}

/// A reduced traveling-wave system and its state dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedSystem {
    /// Unperturbed planar system (φ, ψ).
    Planar,
    /// Slow-manifold normal form (φ, ψ, ω), ω the O(τ) defect of bcψ'.
    NormalForm3(DelayKind),
    /// Full system (φ, ψ, ω, η, ζ) with the delay chain explicit.
    Full5(DelayKind),
}

impl ReducedSystem {
    pub fn dim(&self) -> usize {
        match self {
            ReducedSystem::Planar => 2,
            ReducedSystem::NormalForm3(_) => 3,
            ReducedSystem::Full5(_) => 5,
        }
    }

    fn validate(&self, params: &ModelParams) -> Result<()> {
        let delay = match self {
            ReducedSystem::Planar => return Ok(()),
            ReducedSystem::NormalForm3(d) | ReducedSystem::Full5(d) => d,
        };
        if *delay == DelayKind::None {
            return Err(Error::InvalidParameters(
                "reduced delay systems need a local or nonlocal kernel".into(),
            ));
        }
        if matches!(self, ReducedSystem::Full5(_)) && !(params.tau > 0.0) {
            return Err(Error::InvalidParameters(
                "the five-dimensional systems need tau > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Right-hand side of a reduced system in the slow time ξ.
pub fn system_rhs(system: ReducedSystem, params: &ModelParams, y: &[f64], dy: &mut [f64]) {
    let (a, k, c, tau) = (params.a, params.k, params.c, params.tau);
    let bc = params.bc();
    match system {
        ReducedSystem::Planar => {
            dy[0] = y[1];
            dy[1] = ((c - k - 1.0) * y[0] + a * y[0] * y[0]) / bc;
        }
        ReducedSystem::NormalForm3(delay) => {
            let (phi, psi, omega) = (y[0], y[1], y[2]);
            let bracket = ((c - k - 1.0) * phi + a * phi * phi - omega) / bc;
            dy[0] = psi;
            dy[1] = bracket;
            dy[2] = match delay {
                DelayKind::Local => -2.0 * a * c * tau * psi * psi + tau * bracket,
                DelayKind::Nonlocal => {
                    -2.0 * a * c * tau * psi * psi - (2.0 * a * psi - 1.0) * tau * bracket
                }
                DelayKind::None => unreachable!("rejected by validate"),
            };
        }
        ReducedSystem::Full5(delay) => {
            let (phi, psi, omega, eta, zeta) = (y[0], y[1], y[2], y[3], y[4]);
            dy[0] = psi;
            dy[1] = omega;
            dy[2] = ((c - k - 1.0) * psi + 2.0 * a * eta * psi - tau * omega) / bc;
            match delay {
                DelayKind::Local => {
                    dy[3] = (2.0 * eta - zeta) / (c * tau);
                    dy[4] = (2.0 * zeta - 4.0 * phi) / (c * tau);
                }
                DelayKind::Nonlocal => {
                    let eps = tau.sqrt();
                    dy[3] = zeta / eps;
                    dy[4] = (eta - phi) / eps - c * zeta;
                }
                DelayKind::None => unreachable!("rejected by validate"),
            }
        }
    }
}

/// Velocity of a normal form at a slow point.
pub fn slow3_rhs(delay: DelayKind, p: SlowPoint, params: &ModelParams) -> Result<SlowPoint> {
    if delay == DelayKind::None {
        return Err(Error::InvalidParameters(
            "normal forms exist for the local and nonlocal kernels".into(),
        ));
    }
    let mut dy = [0.0; 3];
    system_rhs(
        ReducedSystem::NormalForm3(delay),
        params,
        &p.to_array(),
        &mut dy,
    );
    Ok(SlowPoint::from_array(dy))
}

/// Velocity of a five-dimensional system at a full point.
pub fn full5_rhs(delay: DelayKind, p: FullPoint, params: &ModelParams) -> Result<FullPoint> {
    let system = ReducedSystem::Full5(delay);
    system.validate(params)?;
    let mut dy = [0.0; 5];
    system_rhs(system, params, &p.to_array(), &mut dy);
    Ok(FullPoint::from_array(dy))
}

/// Integrates a reduced system over [xi0, xi1] (backward when xi1 < xi0).
///
/// In the fast frame the span is still given in ξ; states are identical,
/// only the independent variable is rescaled internally. Five-dimensional
/// systems with τ < 1e-4 are switched to the fast frame automatically:
/// the layer rates scale like 1/τ and make the slow frame unusable there.
pub fn integrate_system(
    system: ReducedSystem,
    params: &ModelParams,
    y0: &[f64],
    xi0: f64,
    xi1: f64,
    frame: TimeFrame,
    opts: &OdeOptions,
) -> Result<Integration> {
    params.validate()?;
    system.validate(params)?;
    if y0.len() != system.dim() {
        return Err(Error::InvalidParameters(format!(
            "state has {} components, system needs {}",
            y0.len(),
            system.dim()
        )));
    }
    let frame = match (system, frame) {
        (ReducedSystem::Full5(_), TimeFrame::Slow) if params.tau < 1e-4 => TimeFrame::Fast,
        _ => frame,
    };
    match frame {
        TimeFrame::Slow => ode::integrate(
            |_t, y, dy| system_rhs(system, params, y, dy),
            y0,
            xi0,
            xi1,
            opts,
        )
        .map_err(|e| match (&system, e) {
            (ReducedSystem::Full5(_), Error::StepUnderflow { t, detail }) => Error::StepUnderflow {
                t,
                detail: format!("{detail}; the fast time frame suits the stiff delay layer"),
            },
            (_, e) => e,
        }),
        TimeFrame::Fast => {
            let tau = params.tau;
            if !(tau > 0.0) {
                return Err(Error::InvalidParameters(
                    "the fast frame needs tau > 0".into(),
                ));
            }
            let mut run = ode::integrate(
                |_t, y, dy| {
                    system_rhs(system, params, y, dy);
                    for v in dy.iter_mut() {
                        *v *= tau;
                    }
                },
                y0,
                xi0 / tau,
                xi1 / tau,
                opts,
            )?;
            for t in run.t.iter_mut() {
                *t *= tau;
            }
            for seg in run.dense.iter_mut() {
                seg.t0 *= tau;
                seg.h *= tau;
            }
            Ok(run)
        }
    }
}

/// Leading slow-manifold correction coefficients of the delay variables.
///
/// η = (base) + g·τ + o(τ) and ζ = (base) + h·τ + o(τ) for the local
/// chain; for the nonlocal chain g multiplies ε² = τ and h multiplies
/// ε = √τ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ManifoldExpansion {
    pub g_first_order: f64,
    pub h_first_order: f64,
}

pub fn manifold_coefficients(
    delay: DelayKind,
    params: &ModelParams,
    psi: f64,
    omega: f64,
) -> Result<ManifoldExpansion> {
    let c = params.c;
    match delay {
        DelayKind::Local => Ok(ManifoldExpansion {
            g_first_order: c * psi,
            h_first_order: c * psi,
        }),
        DelayKind::Nonlocal => Ok(ManifoldExpansion {
            g_first_order: c * psi + omega,
            h_first_order: psi,
        }),
        DelayKind::None => Err(Error::InvalidParameters(
            "manifold expansion needs a local or nonlocal kernel".into(),
        )),
    }
}

/// First-order slow-manifold expansion of the delay variables.
///
/// Returns (η, ζ) for a slow state (φ, ψ, ω):
/// local kernel η = φ + cτψ, ζ = 2φ + cτψ;
/// nonlocal kernel η = φ + τ(cψ + ω), ζ = √τ ψ.
pub fn manifold_expansion(
    delay: DelayKind,
    params: &ModelParams,
    phi: f64,
    psi: f64,
    omega: f64,
) -> Result<[f64; 2]> {
    let tau = params.tau;
    let coeff = manifold_coefficients(delay, params, psi, omega)?;
    let [eta0, zeta0] = layer_base(delay, phi)?;
    Ok(match delay {
        DelayKind::Local => [
            eta0 + tau * coeff.g_first_order,
            zeta0 + tau * coeff.h_first_order,
        ],
        DelayKind::Nonlocal => [
            eta0 + tau * coeff.g_first_order,
            zeta0 + tau.sqrt() * coeff.h_first_order,
        ],
        DelayKind::None => unreachable!("rejected above"),
    })
}

/// Zeroth-order slow manifold of the five-dimensional layer.
pub fn layer_base(delay: DelayKind, phi: f64) -> Result<[f64; 2]> {
    match delay {
        DelayKind::Local => Ok([phi, 2.0 * phi]),
        DelayKind::Nonlocal => Ok([phi, 0.0]),
        DelayKind::None => Err(Error::InvalidParameters(
            "layer base needs a local or nonlocal kernel".into(),
        )),
    }
}

/// Linearization of a normal form at the origin saddle.
///
/// Both delay kinds share the Jacobian there; the eigenvalues are 0 and
/// μ± = (−τ/(bc) ± √(τ²/(bc)² + 4α))/2 with α = (c − k − 1)/(bc) > 0 in
/// the homoclinic regime. Eigenvectors are (1, μ±, τμ±) and the center
/// direction (1, 0, c − k − 1) is tangent to the curve of equilibria
/// {ψ = 0, ω = (c − k − 1)φ + aφ²}.
#[derive(Debug, Clone, Serialize)]
pub struct SaddleFrame {
    pub mu_unstable: f64,
    pub mu_stable: f64,
    /// Unit eigenvectors with positive φ-component.
    pub unstable: [f64; 3],
    pub stable: [f64; 3],
    pub center: [f64; 3],
}

pub fn saddle_frame(params: &ModelParams) -> Result<SaddleFrame> {
    params.validate()?;
    if !params.homoclinic_regime() {
        return Err(Error::OutsideRegime(format!(
            "saddle frame needs the homoclinic regime; got a = {}, b = {}, k = {}, c = {}",
            params.a, params.b, params.k, params.c
        )));
    }
    let bc = params.bc();
    let alpha = (params.c - params.k - 1.0) / bc;
    let theta = params.tau / bc;
    let disc = theta * theta + 4.0 * alpha;
    if !(disc > 0.0) {
        return Err(Error::EigenFailure(format!(
            "hyperbolicity lost: discriminant {disc:.3e}"
        )));
    }
    let s = disc.sqrt();
    let mu_u = (-theta + s) / 2.0;
    let mu_s = (-theta - s) / 2.0;
    if (mu_u - mu_s).abs() < 1e-10 {
        return Err(Error::EigenFailure(format!(
            "eigenvalue separation {:.3e} below 1e-10",
            (mu_u - mu_s).abs()
        )));
    }
    let unit = |v: [f64; 3]| -> [f64; 3] {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    Ok(SaddleFrame {
        mu_unstable: mu_u,
        mu_stable: mu_s,
        unstable: unit([1.0, mu_u, params.tau * mu_u]),
        stable: unit([1.0, mu_s, params.tau * mu_s]),
        center: unit([1.0, 0.0, params.c - params.k - 1.0]),
    })
}

/// Tilted section energy E = H + (φ*/(bc)) ω.
pub fn tilted_energy(params: &ModelParams, phi: f64, psi: f64, omega: f64) -> Result<f64> {
    let apex = model::phi_star(params)?;
    Ok(model::hamiltonian(PhasePoint { phi, psi }, params).0 + apex / params.bc() * omega)
}

/// One crossing of the section {ψ = 0, φ > φ₂}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SectionCrossing {
    pub xi: f64,
    pub phi: f64,
    pub omega: f64,
    pub hamiltonian: f64,
    pub energy: f64,
}

/// Measured splitting of the homoclinic loop at one (c, τ).
#[derive(Debug, Clone, Serialize)]
pub struct SplittingMeasurement {
    pub c: f64,
    pub tau: f64,
    /// E(stable crossing) − E(unstable crossing) = τΔ(c) + O(τ²).
    pub signed_gap: f64,
    /// Raw Hamiltonian difference across the section, for diagnostics;
    /// unlike `signed_gap` it carries a sign-constant O(τ) offset.
    pub hamiltonian_gap: f64,
    pub unstable: SectionCrossing,
    pub stable: SectionCrossing,
}

/// Controls for [`splitting_gap`].
#[derive(Debug, Clone, Copy)]
pub struct SplittingOptions {
    /// Launch offset along the eigendirections, relative to φ*.
    pub delta: f64,
    /// Integration span in units of 1/μ.
    pub span_efolds: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for SplittingOptions {
    fn default() -> Self {
        SplittingOptions {
            delta: 1e-6,
            span_efolds: 80.0,
            rtol: 1e-11,
            atol: 1e-14,
        }
    }
}

fn section_crossing(
    delay: DelayKind,
    params: &ModelParams,
    launch: [f64; 3],
    span: f64,
    opts: &SplittingOptions,
    side: &str,
) -> Result<SectionCrossing> {
    let phi2 = (params.k + 1.0 - params.c) / params.a;
    let apex = model::phi_star(params)?;
    let alpha = (params.c - params.k - 1.0) / params.bc();
    let psi_cap = 5.0 * phi2.abs() * (alpha / 3.0).sqrt();

    let system = ReducedSystem::NormalForm3(delay);
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| system_rhs(system, params, y, dy);
    let spec = EventSpec {
        value: &|_t, y: &[f64]| y[1],
        direction: 0,
        guard: Some(&move |_t, y: &[f64]| y[0] > phi2),
    };
    let escape =
        move |_t: f64, y: &[f64]| y[0] > 4.0 * apex || y[0] < -apex.abs() || y[1].abs() > psi_cap;
    let ode_opts = OdeOptions::with_tolerances(opts.rtol, opts.atol);
    let hit: Option<EventCrossing> =
        ode::integrate_to_event(rhs, &launch, 0.0, span, &spec, Some(&escape), &ode_opts)?;
    let hit = hit.ok_or_else(|| {
        Error::NoCrossing(format!(
            "{side} trajectory left the loop region without crossing psi = 0 past phi2 \
             (c = {}, tau = {})",
            params.c, params.tau
        ))
    })?;
    Ok(SectionCrossing {
        xi: hit.t,
        phi: hit.y[0],
        omega: hit.y[2],
        hamiltonian: model::hamiltonian(
            PhasePoint {
                phi: hit.y[0],
                psi: 0.0,
            },
            params,
        )
        .0,
        energy: tilted_energy(params, hit.y[0], 0.0, hit.y[2])?,
    })
}

/// Measures the manifold splitting for one normal form at (c, τ).
///
/// Launches δ out along each saddle eigendirection, follows the unstable
/// side forward and the stable side backward to the section {ψ = 0,
/// φ > φ₂}, and differences the tilted energies there.
pub fn splitting_gap(
    delay: DelayKind,
    params: &ModelParams,
    opts: &SplittingOptions,
) -> Result<SplittingMeasurement> {
    if delay == DelayKind::None {
        return Err(Error::InvalidParameters(
            "splitting is measured for the local or nonlocal normal form".into(),
        ));
    }
    if !(params.tau > 0.0 && params.tau <= 0.05) {
        return Err(Error::InvalidParameters(format!(
            "splitting is first-order in tau and needs 0 < tau <= 0.05, got {}",
            params.tau
        )));
    }
    let frame = saddle_frame(params)?;
    let apex = model::phi_star(params)?;
    let delta = opts.delta * apex;

    let launch = |v: [f64; 3]| [delta * v[0], delta * v[1], delta * v[2]];
    let span_u = opts.span_efolds / frame.mu_unstable;
    let span_s = opts.span_efolds / frame.mu_stable;

    let unstable = section_crossing(
        delay,
        params,
        launch(frame.unstable),
        span_u,
        opts,
        "unstable",
    )?;
    let stable = section_crossing(delay, params, launch(frame.stable), span_s, opts, "stable")?;

    Ok(SplittingMeasurement {
        c: params.c,
        tau: params.tau,
        signed_gap: stable.energy - unstable.energy,
        hamiltonian_gap: stable.hamiltonian - unstable.hamiltonian,
        unstable,
        stable,
    })
}

/// Numerically selected persistent speed at fixed τ.
#[derive(Debug, Clone, Serialize)]
pub struct PersistentSpeed {
    pub c_hat: f64,
    pub tau: f64,
    pub bracket: (f64, f64),
    /// Residual gap at c_hat, in units of τ.
    pub gap_residual: f64,
}

/// Solves signed_gap(c) = 0 at fixed τ by bracketing in c.
///
/// The root converges to the Melnikov speed c* as τ → 0.
pub fn persistent_speed_numeric(
    delay: DelayKind,
    family: &crate::model::FamilyParams,
    tau: f64,
    seed: Option<f64>,
    c_tol: f64,
    opts: &SplittingOptions,
) -> Result<PersistentSpeed> {
    if !(tau > 0.0 && tau <= 0.02) {
        return Err(Error::InvalidParameters(format!(
            "the persistent-speed experiment needs 0 < tau <= 0.02, got {tau}"
        )));
    }
    let floor = (family.k + 1.0).max(0.0);
    let seed = seed.unwrap_or(floor + 1.0);
    let gap = |c: f64| -> Result<f64> {
        let p = family.at(c, tau)?;
        Ok(splitting_gap(delay, &p, opts)?.signed_gap)
    };
    let bracket = roots::expand_bracket(gap, seed, 1.25, floor, floor.abs().max(1.0) * 1e3, 64)?;
    let r = roots::brent(gap, bracket.0, bracket.1, c_tol)?;
    Ok(PersistentSpeed {
        c_hat: r.root,
        tau,
        bracket,
        gap_residual: r.f_root / tau,
    })
}
