//! Distributed delay kernels and their normalization checks.
//!
//! Three kernels appear in the delayed KP-BBM convolution f*u:
//!
//! * strong temporal: f(t) = (4t/τ²) e^{−2t/τ}, mass 1, mean τ;
//! * weak temporal: f(t) = (1/τ) e^{−t/τ} (representable here, but its
//!   slow-system reduction is not implemented);
//! * spatio-temporal weak: f(x, t) = (4πt)^{−1/2} e^{−x²/(4t)} (1/τ) e^{−t/τ},
//!   equivalently v_t − v_xx = (u − v)/τ for v = f*u.
//!
//! All kernels concentrate at the origin as τ → 0⁺, so f*u → u and the
//! delayed equation recovers the undelayed one; `delta_limit_sup_error`
//! quantifies the rate on a sample grid.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::melnikov::DelayKind;
use crate::quad::{self, QuadratureResult};

/// Temporal truncation multiplier: tails beyond 50τ are below 1e-40.
const T_CUTOFF: f64 = 50.0;
/// Spatial truncation |x| ≤ 40√(t+τ) for the diffusive factor.
const X_CUTOFF: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    StrongTemporal,
    WeakTemporal,
    SpatioTemporalWeak,
}

/// A delay kernel with its mean delay τ > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayKernel {
    pub kind: KernelKind,
    pub tau: f64,
}

impl DelayKernel {
    pub fn new(kind: KernelKind, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "kernel needs tau > 0, got {tau}"
            )));
        }
        Ok(DelayKernel { kind, tau })
    }

    /// Which reduced traveling-wave system this kernel induces.
    pub fn reduction(&self) -> Result<DelayKind> {
        match self.kind {
            KernelKind::StrongTemporal => Ok(DelayKind::Local),
            KernelKind::SpatioTemporalWeak => Ok(DelayKind::Nonlocal),
            KernelKind::WeakTemporal => Err(Error::UnsupportedReduction(
                "the weak temporal kernel has no implemented slow-system reduction".into(),
            )),
        }
    }
}

/// Strong temporal kernel density (4t/τ²) e^{−2t/τ}.
pub fn eval_strong(tau: f64, t: f64) -> Result<f64> {
    check_tau_t(tau, t)?;
    Ok(strong_density(tau, t))
}

/// Weak temporal kernel density (1/τ) e^{−t/τ}.
pub fn eval_weak(tau: f64, t: f64) -> Result<f64> {
    check_tau_t(tau, t)?;
    Ok(weak_density(tau, t))
}

/// Spatio-temporal kernel density; requires t > 0.
pub fn eval_spatiotemporal(tau: f64, x: f64, t: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "tau must be positive, got {tau}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "spatio-temporal kernel needs t > 0, got {t}"
        )));
    }
    Ok(spatiotemporal_density(tau, x, t))
}

fn check_tau_t(tau: f64, t: f64) -> Result<()> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "tau must be positive, got {tau}"
        )));
    }
    if t < 0.0 {
        return Err(Error::Domain(format!(
            "temporal kernels vanish for t < 0, got {t}"
        )));
    }
    Ok(())
}

fn strong_density(tau: f64, t: f64) -> f64 {
    4.0 * t / (tau * tau) * (-2.0 * t / tau).exp()
}

fn weak_density(tau: f64, t: f64) -> f64 {
    (-t / tau).exp() / tau
}

fn spatiotemporal_density(tau: f64, x: f64, t: f64) -> f64 {
    let heat = (-x * x / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t).sqrt();
    heat * weak_density(tau, t)
}

/// ∫₀^∞ f(t) dt for a temporal kernel, by quadrature on [0, 50τ].
pub fn temporal_mass(kernel: &DelayKernel, tol: f64) -> Result<QuadratureResult> {
    let tau = kernel.tau;
    let density: fn(f64, f64) -> f64 = match kernel.kind {
        KernelKind::StrongTemporal => strong_density,
        KernelKind::WeakTemporal => weak_density,
        KernelKind::SpatioTemporalWeak => {
            return spatiotemporal_mass(tau, tol);
        }
    };
    quad::adaptive(
        |t| density(tau, t),
        0.0,
        T_CUTOFF * tau,
        tol,
        quad::DEFAULT_BUDGET,
    )
}

/// ∫₀^∞ t f(t) dt for a temporal kernel; equals τ for both temporal kinds,
/// which is why τ is called the mean delay.
pub fn temporal_mean(kernel: &DelayKernel, tol: f64) -> Result<QuadratureResult> {
    let tau = kernel.tau;
    let density: fn(f64, f64) -> f64 = match kernel.kind {
        KernelKind::StrongTemporal => strong_density,
        KernelKind::WeakTemporal => weak_density,
        KernelKind::SpatioTemporalWeak => {
            return Err(Error::UnsupportedParameters(
                "temporal mean is defined for temporal kernels only".into(),
            ));
        }
    };
    quad::adaptive(
        |t| t * density(tau, t),
        0.0,
        T_CUTOFF * tau,
        tol,
        quad::DEFAULT_BUDGET,
    )
}

/// ∫₀^∞ ∫_ℝ f(x, t) dx dt on the truncated domain t ∈ (0, 50τ],
/// |x| ≤ 40√(t+τ), by nested adaptive quadrature.
pub fn spatiotemporal_mass(tau: f64, tol: f64) -> Result<QuadratureResult> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let inner_evals = Cell::new(0usize);
    let inner_err = Cell::new(0.0f64);
    let outer = quad::adaptive(
        |t| {
            // The Gaussian factor lives on |x| ≲ 43√t; intersecting the
            // window with that support keeps the inner integrand resolved.
            let w = (X_CUTOFF * (t + tau).sqrt()).min(45.0 * t.sqrt());
            match quad::adaptive(
                |x| spatiotemporal_density(tau, x, t),
                -w,
                w,
                tol * 1e-3,
                quad::DEFAULT_BUDGET,
            ) {
                Ok(r) => {
                    inner_evals.set(inner_evals.get() + r.evaluations);
                    inner_err.set(inner_err.get().max(r.abs_error_estimate));
                    r.value
                }
                Err(_) => f64::NAN,
            }
        },
        0.0,
        T_CUTOFF * tau,
        tol,
        quad::DEFAULT_BUDGET,
    )?;
    if !outer.value.is_finite() {
        return Err(Error::ConvergenceFailure(
            "inner spatial quadrature failed".into(),
        ));
    }
    Ok(QuadratureResult {
        value: outer.value,
        abs_error_estimate: outer.abs_error_estimate + inner_err.get() * T_CUTOFF * tau,
        evaluations: outer.evaluations + inner_evals.get(),
    })
}

/// One-sided temporal convolution (f ⋆ u)(s) = ∫₀^∞ f(t) u(s − t) dt.
pub fn convolve_temporal(
    kernel: &DelayKernel,
    u: impl Fn(f64) -> f64,
    s: f64,
    tol: f64,
) -> Result<f64> {
    let tau = kernel.tau;
    let density: fn(f64, f64) -> f64 = match kernel.kind {
        KernelKind::StrongTemporal => strong_density,
        KernelKind::WeakTemporal => weak_density,
        KernelKind::SpatioTemporalWeak => {
            return Err(Error::UnsupportedParameters(
                "temporal convolution is defined for temporal kernels only".into(),
            ));
        }
    };
    Ok(quad::adaptive(
        |t| density(tau, t) * u(s - t),
        0.0,
        T_CUTOFF * tau,
        tol,
        quad::DEFAULT_BUDGET,
    )?
    .value)
}

/// sup over the grid of |(f ⋆ u)(s) − u(s)|: the δ-limit defect of the
/// kernel on a probe profile. Tends to 0 as τ → 0⁺ for smooth bounded u.
pub fn delta_limit_sup_error(
    kernel: &DelayKernel,
    u: impl Fn(f64) -> f64,
    grid: &[f64],
    tol: f64,
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidParameters(
            "delta-limit check needs a non-empty grid".into(),
        ));
    }
    let mut sup: f64 = 0.0;
    for &s in grid {
        let conv = convolve_temporal(kernel, &u, s, tol)?;
        sup = sup.max((conv - u(s)).abs());
    }
    Ok(sup)
}
