//! Melnikov integrals measuring homoclinic persistence at first order in τ.
//!
//! On the unperturbed loop Γ the perturbation (distributed delay plus the
//! viscous term τ u_xx) displaces the stable and unstable manifolds by
//! τ·Δ(c) + o(τ), where
//!
//! ```text
//! Δ(c) = (2/(bc)) ∫₀^{φ*} w(φ) √((2aφ³ − 3(k+1−c)φ²)/(3bc)) dφ
//! ```
//!
//! and the weight w depends on the delay kind and on whether the viscous
//! term is kept. The square root equals |ψ| on Γ. Integrals are evaluated
//! by adaptive Gauss–Kronrod panels after the substitution φ = φ* sin²θ,
//! which removes the square-root endpoint and leaves an analytic integrand.
//!
//! At the reference triple (a, b, k) = (−1, 1, −1) every variant reduces to
//! a polynomial in c (see [`reference_polynomial`]), which the quadrature
//! must reproduce to oracle accuracy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{phi_star, FamilyParams, ModelParams};
use crate::quad::{self, QuadratureResult};

/// Which delay kernel perturbs the wave equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DelayKind {
    /// No delay term at all.
    None,
    /// Strong temporal kernel (4t/τ²)e^{−2t/τ}.
    Local,
    /// Spatio-temporal weak kernel (heat propagator times (1/τ)e^{−t/τ}).
    Nonlocal,
}

/// A Melnikov variant: delay kind plus whether the viscous τu_xx term is kept.
///
/// (None, false) is the unperturbed problem and is rejected everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MelnikovVariant {
    pub delay: DelayKind,
    pub viscous: bool,
}

impl MelnikovVariant {
    pub const LOCAL_FULL: Self = MelnikovVariant {
        delay: DelayKind::Local,
        viscous: true,
    };
    pub const LOCAL_NO_VISCOUS: Self = MelnikovVariant {
        delay: DelayKind::Local,
        viscous: false,
    };
    pub const NONLOCAL_FULL: Self = MelnikovVariant {
        delay: DelayKind::Nonlocal,
        viscous: true,
    };
    pub const NONLOCAL_NO_VISCOUS: Self = MelnikovVariant {
        delay: DelayKind::Nonlocal,
        viscous: false,
    };
    /// Viscous term only; the shared "no-delay" reduction of both families.
    pub const NO_DELAY: Self = MelnikovVariant {
        delay: DelayKind::None,
        viscous: true,
    };

    pub fn validate(&self) -> Result<()> {
        if self.delay == DelayKind::None && !self.viscous {
            return Err(Error::UnsupportedReduction(
                "delay = none with the viscous term dropped leaves no perturbation".into(),
            ));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let delay = match self.delay {
            DelayKind::None => "none",
            DelayKind::Local => "local",
            DelayKind::Nonlocal => "nonlocal",
        };
        if self.viscous {
            delay.to_string()
        } else {
            format!("{delay}:noviscous")
        }
    }
}

impl std::str::FromStr for MelnikovVariant {
    type Err = Error;

    /// Accepts `local`, `nonlocal`, `none`, optionally suffixed `:noviscous`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, viscous) = match s.strip_suffix(":noviscous") {
            Some(head) => (head, false),
            None => (s, true),
        };
        let delay = match head {
            "none" => DelayKind::None,
            "local" => DelayKind::Local,
            "nonlocal" => DelayKind::Nonlocal,
            other => {
                return Err(Error::Config(format!(
                    "unknown variant '{other}'; expected local, nonlocal or none"
                )))
            }
        };
        let v = MelnikovVariant { delay, viscous };
        v.validate()?;
        Ok(v)
    }
}

impl std::fmt::Display for MelnikovVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// √((2aφ³ − 3(k+1−c)φ²)/(3bc)); equals |ψ| on the homoclinic loop.
///
/// Roundoff dips of the radicand down to −1e-14 are clamped to zero; deeper
/// negatives are a domain error.
pub fn sqrt_factor(phi: f64, params: &ModelParams) -> Result<f64> {
    let radicand = (2.0 * params.a * phi.powi(3) - 3.0 * (params.k + 1.0 - params.c) * phi * phi)
        / (3.0 * params.bc());
    if radicand < -1e-14 {
        return Err(Error::Domain(format!(
            "sqrt_factor radicand {radicand:.3e} < 0 at phi = {phi}"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Pointwise Melnikov integrand for a variant at 0 ≤ φ ≤ φ*.
pub fn melnikov_integrand(variant: MelnikovVariant, phi: f64, params: &ModelParams) -> Result<f64> {
    variant.validate()?;
    let s = sqrt_factor(phi, params)?;
    let pref = 2.0 / params.bc();
    let two_ac_phi = 2.0 * params.a * params.c * phi;
    Ok(match (variant.delay, variant.viscous) {
        (DelayKind::None, true) => pref * s,
        (DelayKind::Local, true) => pref * (two_ac_phi + 1.0) * s,
        (DelayKind::Local, false) => pref * two_ac_phi * s,
        (DelayKind::Nonlocal, true) => -pref * (-two_ac_phi + 2.0 * params.a * s - 1.0) * s,
        (DelayKind::Nonlocal, false) => -pref * (-two_ac_phi + 2.0 * params.a * s) * s,
        (DelayKind::None, false) => unreachable!("rejected by validate"),
    })
}

/// Δ(c) for the variant, by adaptive quadrature over the loop.
pub fn melnikov(
    variant: MelnikovVariant,
    params: &ModelParams,
    tol: f64,
) -> Result<QuadratureResult> {
    variant.validate()?;
    let apex = phi_star(params)?;
    // φ = φ* sin²θ maps [0, π/2] onto [0, φ*] and absorbs the √(φ*−φ)
    // endpoint behavior: the θ-integrand is analytic.
    let integrand = |theta: f64| {
        let s = theta.sin();
        let phi = (apex * s * s).min(apex);
        let jacobian = apex * (2.0 * theta).sin();
        match melnikov_integrand(variant, phi, params) {
            Ok(v) => v * jacobian,
            Err(_) => f64::NAN,
        }
    };
    let r = quad::adaptive(
        integrand,
        0.0,
        std::f64::consts::FRAC_PI_2,
        tol,
        quad::DEFAULT_BUDGET,
    )?;
    if !r.value.is_finite() {
        return Err(Error::Domain("Melnikov integrand left its domain".into()));
    }
    Ok(r)
}

/// True iff the closed-form reference polynomials apply.
pub fn has_reference(family: &FamilyParams) -> bool {
    family.a == -1.0 && family.b == 1.0 && family.k == -1.0
}

/// Closed form of Δ(c) at (a, b, k) = (−1, 1, −1).
pub fn reference_polynomial(
    variant: MelnikovVariant,
    c: f64,
    family: &FamilyParams,
) -> Result<f64> {
    variant.validate()?;
    if !has_reference(family) {
        return Err(Error::UnsupportedParameters(format!(
            "reference polynomial is defined at (a, b, k) = (-1, 1, -1); got ({}, {}, {})",
            family.a, family.b, family.k
        )));
    }
    let c2 = c * c;
    let c3 = c2 * c;
    Ok(match (variant.delay, variant.viscous) {
        (DelayKind::None, true) => 1.2 * c,
        (DelayKind::Local, true) => -72.0 / 35.0 * c3 + 1.2 * c,
        (DelayKind::Local, false) => -72.0 / 35.0 * c3,
        (DelayKind::Nonlocal, true) => -72.0 / 35.0 * c3 + 1.125 * c2 + 1.2 * c,
        (DelayKind::Nonlocal, false) => -72.0 / 35.0 * c3 + 1.125 * c2,
        (DelayKind::None, false) => unreachable!("rejected by validate"),
    })
}

/// Closed form of the delay-only nonlocal Melnikov value at the resonant
/// speed c = k + 2 with a = −1:
///
/// ```text
/// M(b, k) = −4/√(3b³(k+2)³) · [ (k+2)·18√3/35 − 27/(32√(3b(k+2))) ]
/// ```
///
/// Positive for small b: weak dispersion lets the delay push the manifolds
/// apart in the opposite direction.
pub fn nonlocal_no_viscous_closed_form(b: f64, k: f64) -> Result<f64> {
    if !(b > 0.0) || !(k + 2.0 > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "closed form needs b > 0 and k + 2 > 0, got b = {b}, k = {k}"
        )));
    }
    let s3 = 3.0f64.sqrt();
    let root = (3.0 * b * (k + 2.0)).sqrt();
    let prefactor = -4.0 / (3.0 * b.powi(3) * (k + 2.0).powi(3)).sqrt();
    Ok(prefactor * ((k + 2.0) * 18.0 * s3 / 35.0 - 27.0 / (32.0 * root)))
}

/// Signs of Δ over a speed grid: +1, −1, or 0.
pub fn sign_profile(
    variant: MelnikovVariant,
    family: &FamilyParams,
    speeds: &[f64],
    tol: f64,
) -> Result<Vec<i8>> {
    use rayon::prelude::*;
    speeds
        .par_iter()
        .map(|&c| {
            let params = family.at_speed(c)?;
            let v = melnikov(variant, &params, tol)?.value;
            Ok(if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            })
        })
        .collect()
}

/// Δ(c) over a speed grid, rows in grid order.
pub fn sweep(
    variant: MelnikovVariant,
    family: &FamilyParams,
    speeds: &[f64],
    tol: f64,
) -> Vec<(f64, Result<QuadratureResult>)> {
    use rayon::prelude::*;
    speeds
        .par_iter()
        .map(|&c| {
            let r = family.at_speed(c).and_then(|p| melnikov(variant, &p, tol));
            (c, r)
        })
        .collect()
}
