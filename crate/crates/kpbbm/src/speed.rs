//! Selection of the persistent wave speed c*: the root of the Melnikov
//! function Δ(c) inside the homoclinic regime c > k + 1.
//!
//! At the reference triple (a, b, k) = (−1, 1, −1) the local full variant
//! gives Δ(c) = −(72/35)c³ + (6/5)c with simple root c* = √(7/12); the delay
//! balances the viscous loss exactly at that speed and the solitary wave
//! survives the perturbation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::melnikov::{self, MelnikovVariant};
use crate::model::FamilyParams;
use crate::roots;

/// A persistent speed with its transversality certificate.
#[derive(Debug, Clone, Serialize)]
pub struct SpeedSolution {
    pub variant: MelnikovVariant,
    pub c_star: f64,
    /// Δ'(c*) by central difference; simple-root certificate.
    pub delta_prime: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Quadrature tolerance used inside the speed solve.
pub const SPEED_QUAD_TOL: f64 = 1e-12;
const TRANSVERSALITY_FLOOR: f64 = 1e-8;

fn delta_at(variant: MelnikovVariant, family: &FamilyParams, c: f64) -> Result<f64> {
    let params = family.at_speed(c)?;
    Ok(melnikov::melnikov(variant, &params, SPEED_QUAD_TOL)?.value)
}

/// Finds a sign change of Δ(c) near `seed`, staying inside (k+1, ∞).
pub fn bracket_root(
    variant: MelnikovVariant,
    family: &FamilyParams,
    seed: f64,
) -> Result<(f64, f64)> {
    variant.validate()?;
    let floor = (family.k + 1.0).max(0.0);
    let ceil = (floor.abs().max(1.0)) * 1e4;
    roots::expand_bracket(
        |c| delta_at(variant, family, c),
        seed,
        1.25,
        floor,
        ceil,
        128,
    )
}

/// Solves Δ(c*) = 0 and certifies transversality.
///
/// `seed` defaults to k + 2 (one unit into the regime). Fails with
/// `NoSignChange` when the variant has single-signed Δ (pure viscosity,
/// pure local delay), and with `TransversalityFailure` when the root is
/// degenerate.
pub fn find_wave_speed(
    variant: MelnikovVariant,
    family: &FamilyParams,
    seed: Option<f64>,
    root_tol: f64,
) -> Result<SpeedSolution> {
    variant.validate()?;
    let seed = seed.unwrap_or((family.k + 1.0).max(0.0) + 1.0);
    if !(seed > (family.k + 1.0).max(0.0)) {
        return Err(Error::InvalidParameters(format!(
            "seed speed {seed} not inside the homoclinic regime c > {}",
            (family.k + 1.0).max(0.0)
        )));
    }
    let bracket = bracket_root(variant, family, seed)?;
    let r = roots::brent(
        |c| delta_at(variant, family, c),
        bracket.0,
        bracket.1,
        root_tol,
    )?;

    let h = 1e-6 * r.root.abs().max(1.0);
    let dp = (delta_at(variant, family, r.root + h)? - delta_at(variant, family, r.root - h)?)
        / (2.0 * h);
    if dp.abs() < TRANSVERSALITY_FLOOR {
        return Err(Error::TransversalityFailure { value: dp });
    }
    Ok(SpeedSolution {
        variant,
        c_star: r.root,
        delta_prime: dp,
        bracket,
        iterations: r.iterations,
    })
}

/// Certifies that Δ has exactly one sign change on a grid over (k+1, c_max].
///
/// Returns the sign-change count; a count ≠ 1 means the selected speed is
/// not unique at the grid resolution.
pub fn uniqueness_scan(
    variant: MelnikovVariant,
    family: &FamilyParams,
    c_max: f64,
    steps: usize,
) -> Result<usize> {
    variant.validate()?;
    let floor = (family.k + 1.0).max(0.0);
    if !(c_max > floor) || steps < 2 {
        return Err(Error::InvalidParameters(format!(
            "scan range ({floor}, {c_max}] with {steps} steps is empty"
        )));
    }
    let eps = (c_max - floor) / steps as f64;
    let grid: Vec<f64> = (1..=steps).map(|i| floor + eps * i as f64).collect();
    let signs = melnikov::sign_profile(variant, family, &grid, 1e-10)?;
    let mut changes = 0;
    for w in signs.windows(2) {
        if w[0] != 0 && w[1] != 0 && w[0] != w[1] {
            changes += 1;
        }
    }
    Ok(changes)
}
