//! Unperturbed traveling-wave phase plane of the delayed KP-BBM equation.
//!
//! Solitary waves u = φ(x + y − ct) of
//!
//! ```text
//! (u_t + u_x − 2a(f*u)u_x − b u_xxt + τ u_xx)_x + k u_yy = 0
//! ```
//!
//! reduce at τ = 0 to the planar system
//!
//! ```text
//! φ' = ψ,   ψ' = [(c − k − 1)φ + aφ²] / (bc)
//! ```
//!
//! with first integral `H(φ, ψ) = (3ψ² + 3(k+1−c)φ²/(bc) − 2aφ³/(bc)) / 6`.
//! For 0 ≤ k+1 < c, a < 0, b > 0 the origin is a saddle whose homoclinic
//! loop Γ = {H = 0} encloses the center (φ₂, 0), φ₂ = (k+1−c)/a, and has the
//! closed form φ(ξ) = φ* sech²(qξ) with φ* = 3(k+1−c)/(2a) and
//! q = √((c−k−1)/(bc)) / 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Full parameter set (a, b, k, c, τ) of the traveling-wave problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Nonlinearity coefficient; waves of elevation need a < 0.
    pub a: f64,
    /// BBM-type dispersion coefficient, b > 0 in the homoclinic regime.
    pub b: f64,
    /// Transverse (KP) coefficient.
    pub k: f64,
    /// Wave speed, c > 0.
    pub c: f64,
    /// Mean delay of the distributed kernel, τ ≥ 0.
    pub tau: f64,
}

impl ModelParams {
    pub fn new(a: f64, b: f64, k: f64, c: f64, tau: f64) -> Result<Self> {
        let p = ModelParams { a, b, k, c, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a", self.a),
            ("b", self.b),
            ("k", self.k),
            ("c", self.c),
            ("tau", self.tau),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameters(format!(
                    "{name} = {v} is not finite"
                )));
            }
        }
        self.check_nondegenerate()?;
        if self.c <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "wave speed must satisfy c > 0, got {}",
                self.c
            )));
        }
        if self.tau < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "delay must satisfy tau >= 0, got {}",
                self.tau
            )));
        }
        Ok(())
    }

    /// bc, the denominator of the planar vector field.
    pub fn bc(&self) -> f64 {
        self.b * self.c
    }

    /// Same wave family at a different speed.
    pub fn with_c(&self, c: f64) -> Self {
        ModelParams { c, ..*self }
    }

    /// Same parameters with a different delay.
    pub fn with_tau(&self, tau: f64) -> Self {
        ModelParams { tau, ..*self }
    }

    pub fn family(&self) -> FamilyParams {
        FamilyParams {
            a: self.a,
            b: self.b,
            k: self.k,
        }
    }

    /// True iff 0 ≤ k+1 < c, a < 0, b > 0: the homoclinic loop exists.
    pub fn homoclinic_regime(&self) -> bool {
        self.k + 1.0 >= 0.0 && self.k + 1.0 < self.c && self.a < 0.0 && self.b > 0.0
    }

    fn check_nondegenerate(&self) -> Result<()> {
        if self.a == 0.0 {
            return Err(Error::DegenerateParameters(
                "a = 0 merges the two equilibria at infinity".into(),
            ));
        }
        if self.c - self.k - 1.0 == 0.0 {
            return Err(Error::DegenerateParameters(
                "degenerate: c=k+1 collapses the equilibrium pair".into(),
            ));
        }
        if self.b == 0.0 || self.c == 0.0 {
            return Err(Error::DegenerateParameters(
                "bc = 0: the planar system is singular".into(),
            ));
        }
        Ok(())
    }
}

/// Wave family (a, b, k) with the speed left free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

impl FamilyParams {
    pub fn new(a: f64, b: f64, k: f64) -> Self {
        FamilyParams { a, b, k }
    }

    pub fn at_speed(&self, c: f64) -> Result<ModelParams> {
        ModelParams::new(self.a, self.b, self.k, c, 0.0)
    }

    pub fn at(&self, c: f64, tau: f64) -> Result<ModelParams> {
        ModelParams::new(self.a, self.b, self.k, c, tau)
    }
}

/// A point of the (φ, ψ) phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub phi: f64,
    pub psi: f64,
}

impl PhasePoint {
    pub fn new(phi: f64, psi: f64) -> Self {
        PhasePoint { phi, psi }
    }
}

/// Value of the first integral H on a level set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianLevel(pub f64);

/// Level of the homoclinic loop; H(0, 0) = 0 identically.
pub const HOMOCLINIC_LEVEL: HamiltonianLevel = HamiltonianLevel(0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Saddle,
    Center,
}

/// An equilibrium of the planar system with its linearization data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub point: PhasePoint,
    pub kind: EquilibriumKind,
    pub jacobian_det: f64,
    pub jacobian_trace: f64,
}

/// First integral of the planar system.
pub fn hamiltonian(p: PhasePoint, params: &ModelParams) -> HamiltonianLevel {
    let bc = params.bc();
    let value = (3.0 * p.psi * p.psi + 3.0 * (params.k + 1.0 - params.c) * p.phi * p.phi / bc
        - 2.0 * params.a * p.phi.powi(3) / bc)
        / 6.0;
    HamiltonianLevel(value)
}

/// Planar vector field (φ', ψ').
pub fn planar_rhs(p: PhasePoint, params: &ModelParams) -> PhasePoint {
    let psi_dot = ((params.c - params.k - 1.0) * p.phi + params.a * p.phi * p.phi) / params.bc();
    PhasePoint {
        phi: p.psi,
        psi: psi_dot,
    }
}

/// Both equilibria (φ₁, 0) = (0, 0) and (φ₂, 0) = ((k+1−c)/a, 0), classified
/// by the determinant of A(φ) = [[0, 1], [(c−k−1+2aφ)/(bc), 0]].
pub fn equilibria(params: &ModelParams) -> Result<[Equilibrium; 2]> {
    params.validate()?;
    params.check_nondegenerate()?;
    let phi2 = (params.k + 1.0 - params.c) / params.a;
    Ok([classify(0.0, params), classify(phi2, params)])
}

fn classify(phi: f64, params: &ModelParams) -> Equilibrium {
    let det = -(params.c - params.k - 1.0 + 2.0 * params.a * phi) / params.bc();
    let kind = if det < 0.0 {
        EquilibriumKind::Saddle
    } else {
        EquilibriumKind::Center
    };
    Equilibrium {
        point: PhasePoint { phi, psi: 0.0 },
        kind,
        jacobian_det: det,
        jacobian_trace: 0.0,
    }
}

/// Apex of the homoclinic loop, φ* = 3(k+1−c)/(2a).
pub fn phi_star(params: &ModelParams) -> Result<f64> {
    if !params.homoclinic_regime() {
        return Err(Error::OutsideRegime(format!(
            "need 0 <= k+1 < c, a < 0, b > 0; got a={}, b={}, k={}, c={}",
            params.a, params.b, params.k, params.c
        )));
    }
    Ok(1.5 * (params.k + 1.0 - params.c) / params.a)
}

/// Closed-form homoclinic orbit φ(ξ) = φ* sech²(qξ), ψ = φ'.
///
/// Construction verifies the profile against the planar ODE at sample points
/// and refuses parameters outside the homoclinic regime.
#[derive(Debug, Clone, Copy)]
pub struct HomoclinicOrbit {
    params: ModelParams,
    phi_star: f64,
    q: f64,
}

impl HomoclinicOrbit {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let apex = phi_star(params)?;
        let q = 0.5 * ((params.c - params.k - 1.0) / params.bc()).sqrt();
        let orbit = HomoclinicOrbit {
            params: *params,
            phi_star: apex,
            q,
        };
        orbit.residual_gate()?;
        Ok(orbit)
    }

    /// Max ODE residual |bc φ'' − (c−k−1)φ − aφ²| over a fixed sample set,
    /// with φ'' taken from the sech² closed form.
    fn residual_gate(&self) -> Result<()> {
        let scale = self.phi_star.abs().max(1.0);
        for &xi in &[0.0, 0.37, -0.91, 1.5, -2.25, 4.0, -7.5, 12.0] {
            let r = self.ode_residual(xi).abs();
            if r > 1e-10 * scale {
                return Err(Error::ConvergenceFailure(format!(
                    "homoclinic profile residual {r:.3e} at xi = {xi}"
                )));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn phi_star(&self) -> f64 {
        self.phi_star
    }

    /// Decay/steepness rate q = √((c−k−1)/(bc)) / 2.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// (φ(ξ), ψ(ξ)) on the loop; the apex sits at ξ = 0.
    pub fn sample(&self, xi: f64) -> PhasePoint {
        let s = 1.0 / (self.q * xi).cosh();
        let sech2 = s * s;
        let tanh = (self.q * xi).tanh();
        PhasePoint {
            phi: self.phi_star * sech2,
            psi: -2.0 * self.q * self.phi_star * sech2 * tanh,
        }
    }

    /// Second derivative φ''(ξ) from the closed form.
    pub fn phi_dd(&self, xi: f64) -> f64 {
        let s = 1.0 / (self.q * xi).cosh();
        let sech2 = s * s;
        let q2 = self.q * self.q;
        self.phi_star * q2 * (4.0 * sech2 - 6.0 * sech2 * sech2)
    }

    /// bc φ'' − (c−k−1)φ − aφ², identically zero on the true orbit.
    pub fn ode_residual(&self, xi: f64) -> f64 {
        let p = self.sample(xi);
        self.params.bc() * self.phi_dd(xi)
            - (self.params.c - self.params.k - 1.0) * p.phi
            - self.params.a * p.phi * p.phi
    }
}

/// Convenience sampler for the closed-form orbit.
pub fn homoclinic_profile(params: &ModelParams, xi: f64) -> Result<PhasePoint> {
    Ok(HomoclinicOrbit::new(params)?.sample(xi))
}
