//! The analyses behind the `kpbbm` binary, each returning the full output
//! document as a string.
//!
//! CSV documents use `.` decimals, `,` separators, LF line endings and 17
//! significant digits. JSON documents are pretty-printed serde trees whose
//! shapes are fixed by the structs in this module.

use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::dynamics::{persistent_speed_numeric, SplittingOptions};
use crate::error::{Error, Result};
use crate::kernels::{self, DelayKernel, KernelKind};
use crate::melnikov::{self, DelayKind, MelnikovVariant};
use crate::model::{self, Equilibrium, HomoclinicOrbit, ModelParams, PhasePoint};
use crate::ode::{self, EventSpec, OdeOptions};
use crate::roots;
use crate::speed;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_doc<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Equilibria, classification, and the homoclinic-regime verdict.
///
/// JSON shape: `{ params, equilibria: [{point, kind, jacobian_det,
/// jacobian_trace}], homoclinic_regime }`. CSV columns:
/// `phi,psi,kind,jacobian_det,jacobian_trace,homoclinic_regime`.
pub fn cmd_equilibria(cfg: &RunConfig) -> Result<String> {
    #[derive(Serialize)]
    struct Report<'a> {
        params: &'a ModelParams,
        equilibria: Vec<Equilibrium>,
        homoclinic_regime: bool,
    }

    let eq = model::equilibria(&cfg.params)?;
    let report = Report {
        params: &cfg.params,
        equilibria: eq.to_vec(),
        homoclinic_regime: cfg.params.homoclinic_regime(),
    };
    match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json_doc(&report),
        OutputFormat::Csv => {
            let mut out =
                String::from("phi,psi,kind,jacobian_det,jacobian_trace,homoclinic_regime\n");
            for e in &report.equilibria {
                let kind = match e.kind {
                    model::EquilibriumKind::Saddle => "saddle",
                    model::EquilibriumKind::Center => "center",
                };
                out.push_str(&format!(
                    "{},{},{kind},{},{},{}\n",
                    num(e.point.phi),
                    num(e.point.psi),
                    num(e.jacobian_det),
                    num(e.jacobian_trace),
                    report.homoclinic_regime
                ));
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct PortraitBlock {
    label: String,
    level: f64,
    rows: Vec<[f64; 3]>,
}

/// H(φ, 0): the potential part of the Hamiltonian.
fn potential(params: &ModelParams, phi: f64) -> f64 {
    model::hamiltonian(PhasePoint { phi, psi: 0.0 }, params).0
}

fn planar(params: &ModelParams) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    move |_t, y, dy| {
        dy[0] = y[1];
        dy[1] = ((params.c - params.k - 1.0) * y[0] + params.a * y[0] * y[0]) / params.bc();
    }
}

/// Closed periodic orbit inside Γ on the level H = h, sampled over one
/// period from the left turning point.
fn periodic_block(params: &ModelParams, h: f64, samples: usize) -> Result<PortraitBlock> {
    let phi2 = (params.k + 1.0 - params.c) / params.a;
    let alpha = (params.c - params.k - 1.0) / params.bc();
    let left = roots::brent(|p| Ok(potential(params, p) - h), 0.0, phi2, 1e-13)?.root;

    let psi_value = |_t: f64, y: &[f64]| y[1];
    let right_guard = move |_t: f64, y: &[f64]| y[0] > phi2;
    let spec = EventSpec {
        value: &psi_value,
        direction: 0,
        guard: Some(&right_guard),
    };
    let opts = OdeOptions::with_tolerances(1e-11, 1e-14);
    let span = 60.0 * std::f64::consts::TAU / alpha.sqrt();
    let half =
        ode::integrate_to_event(planar(params), &[left, 0.0], 0.0, span, &spec, None, &opts)?
            .ok_or_else(|| Error::NoCrossing(format!("no return crossing on the level H = {h}")))?;
    let period = 2.0 * half.t;

    let run = ode::integrate(planar(params), &[left, 0.0], 0.0, period, &opts)?;
    let mut rows = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let xi = period * i as f64 / samples as f64;
        let y = run.sample(xi).expect("inside the integrated span");
        rows.push([xi, y[0], y[1]]);
    }
    Ok(PortraitBlock {
        label: format!("periodic h={h:.6e}"),
        level: h,
        rows,
    })
}

/// Open arc of the level H = h on the φ < 0 branch, clipped to the ψ range
/// of the homoclinic loop and mirrored across ψ = 0.
fn outer_arc_block(params: &ModelParams, h: f64, samples: usize) -> Result<PortraitBlock> {
    let phi2 = (params.k + 1.0 - params.c) / params.a;
    let alpha = (params.c - params.k - 1.0) / params.bc();
    let apex = model::phi_star(params)?;
    let psi_cap = phi2.abs() * (alpha / 3.0).sqrt();

    // V is increasing on φ < 0 with V(0) = 0 > h and V(−∞) = −∞.
    let mut lo = -0.5 * apex.abs();
    let mut tries = 0;
    while potential(params, lo) > h {
        lo *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::ConvergenceFailure(format!(
                "no turning point below zero for the level H = {h}"
            )));
        }
    }
    let out = roots::brent(|p| Ok(potential(params, p) - h), lo, 0.0, 1e-13)?.root;

    let stop = move |_t: f64, y: &[f64]| y[1].abs() >= psi_cap;
    let opts = OdeOptions::with_tolerances(1e-11, 1e-14);
    let run = ode::integrate_until(
        planar(params),
        &[out, 0.0],
        0.0,
        60.0 / alpha.sqrt(),
        &stop,
        &opts,
    )?;
    let t_end = run.final_time();

    let mut rows = Vec::with_capacity(2 * samples + 1);
    // ψ < 0 half by time-reversal symmetry of the planar field.
    for i in (1..=samples).rev() {
        let xi = t_end * i as f64 / samples as f64;
        let y = run.sample(xi).expect("inside the integrated span");
        rows.push([-xi, y[0], -y[1]]);
    }
    for i in 0..=samples {
        let xi = t_end * i as f64 / samples as f64;
        let y = run.sample(xi).expect("inside the integrated span");
        rows.push([xi, y[0], y[1]]);
    }
    Ok(PortraitBlock {
        label: format!("outer h={h:.6e}"),
        level: h,
        rows,
    })
}

/// Phase-portrait data: the homoclinic loop Γ, three periodic orbits
/// inside it, and three open arcs outside it on the φ < 0 side.
///
/// CSV: header `xi,phi,psi`, one block per orbit, blocks separated by a
/// blank line. Levels are H = f·h₂ for f ∈ {0.75, 0.5, 0.25} with h₂ the
/// center's Hamiltonian value. JSON shape: `{ blocks: [{label, level,
/// rows: [[xi, phi, psi]]}] }`.
pub fn cmd_portrait(cfg: &RunConfig) -> Result<String> {
    let params = &cfg.params;
    let orbit = HomoclinicOrbit::new(params)?;

    let mut xis = cfg.xi_grid.values();
    // The apex row φ(0) = φ* anchors the plot; keep it even if the grid
    // does not land on ξ = 0.
    if !xis.contains(&0.0) {
        xis.push(0.0);
        xis.sort_by(f64::total_cmp);
    }
    let hom_rows: Vec<[f64; 3]> = xis
        .iter()
        .map(|&xi| {
            let p = orbit.sample(xi);
            [xi, p.phi, p.psi]
        })
        .collect();

    let phi2 = (params.k + 1.0 - params.c) / params.a;
    let h2 = potential(params, phi2);
    let mut blocks = vec![PortraitBlock {
        label: "homoclinic".into(),
        level: 0.0,
        rows: hom_rows,
    }];
    for f in [0.75, 0.5, 0.25] {
        blocks.push(periodic_block(params, f * h2, 256)?);
    }
    for f in [0.75, 0.5, 0.25] {
        blocks.push(outer_arc_block(params, f * h2, 128)?);
    }

    match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc {
                blocks: Vec<PortraitBlock>,
            }
            json_doc(&Doc { blocks })
        }
        OutputFormat::Csv => {
            let mut out = String::from("xi,phi,psi\n");
            for (i, block) in blocks.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                for r in &block.rows {
                    out.push_str(&format!("{},{},{}\n", num(r[0]), num(r[1]), num(r[2])));
                }
            }
            Ok(out)
        }
    }
}

/// Δ(c) over the speed grid for the configured variant.
///
/// CSV columns `c,delta` plus a `reference` column at the triple
/// (a, b, k) = (−1, 1, −1) where the closed-form polynomials apply. Rows
/// whose quadrature fails carry NaN. JSON rows also expose the quadrature
/// error estimate and evaluation count.
pub fn cmd_melnikov(cfg: &RunConfig) -> Result<String> {
    let family = cfg.params.family();
    let grid = cfg.c_grid.values();
    if grid.iter().any(|c| *c <= family.k + 1.0) {
        return Err(Error::InvalidParameters(format!(
            "speed grid must lie inside the homoclinic regime c > {}",
            family.k + 1.0
        )));
    }
    let has_ref = melnikov::has_reference(&family);
    let swept = melnikov::sweep(cfg.variant, &family, &grid, cfg.tolerances.quad);

    #[derive(Serialize)]
    struct Row {
        c: f64,
        delta: f64,
        abs_error_estimate: Option<f64>,
        evaluations: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        reference: Option<f64>,
    }
    let rows: Vec<Row> = swept
        .into_iter()
        .map(|(c, r)| {
            let reference = has_ref
                .then(|| melnikov::reference_polynomial(cfg.variant, c, &family).ok())
                .flatten();
            match r {
                Ok(q) => Row {
                    c,
                    delta: q.value,
                    abs_error_estimate: Some(q.abs_error_estimate),
                    evaluations: Some(q.evaluations),
                    reference,
                },
                Err(_) => Row {
                    c,
                    delta: f64::NAN,
                    abs_error_estimate: None,
                    evaluations: None,
                    reference,
                },
            }
        })
        .collect();

    match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => json_doc(&rows),
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(if has_ref {
                "c,delta,reference\n"
            } else {
                "c,delta\n"
            });
            for r in rows {
                if let Some(reference) = r.reference {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        num(r.c),
                        num(r.delta),
                        num(reference)
                    ));
                } else {
                    out.push_str(&format!("{},{}\n", num(r.c), num(r.delta)));
                }
            }
            Ok(out)
        }
    }
}

/// The selected persistent speed c* with its transversality certificate.
///
/// JSON: the `SpeedSolution` record. CSV: a single row
/// `variant,c_star,delta_prime,bracket_lo,bracket_hi,iterations`.
pub fn cmd_speed(cfg: &RunConfig) -> Result<String> {
    let family = cfg.params.family();
    let sol = speed::find_wave_speed(cfg.variant, &family, None, cfg.tolerances.root)?;
    match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json_doc(&sol),
        OutputFormat::Csv => Ok(format!(
            "variant,c_star,delta_prime,bracket_lo,bracket_hi,iterations\n{},{},{},{},{},{}\n",
            sol.variant.label(),
            num(sol.c_star),
            num(sol.delta_prime),
            num(sol.bracket.0),
            num(sol.bracket.1),
            sol.iterations
        )),
    }
}

/// Numeric persistent speed over the τ ladder.
///
/// CSV columns exactly `tau,c_hat,error` with error = ĉ(τ) − c*, where c*
/// is the Melnikov root of the full variant with the configured kernel.
pub fn cmd_persist(cfg: &RunConfig) -> Result<String> {
    use rayon::prelude::*;

    let delay = cfg.variant.delay;
    if delay == DelayKind::None {
        return Err(Error::InvalidParameters(
            "the persistence experiment needs a local or nonlocal kernel".into(),
        ));
    }
    let family = cfg.params.family();
    let full = MelnikovVariant {
        delay,
        viscous: true,
    };
    let c_star = speed::find_wave_speed(full, &family, None, cfg.tolerances.root)?.c_star;

    let opts = SplittingOptions {
        rtol: cfg.tolerances.ode_rtol,
        atol: cfg.tolerances.ode_rtol * 1e-3,
        ..Default::default()
    };
    let c_tol = cfg.tolerances.root.max(1e-11);
    let rows: Vec<(f64, f64, f64)> = cfg
        .tau_ladder
        .par_iter()
        .map(|&tau| -> Result<(f64, f64, f64)> {
            let r = persistent_speed_numeric(delay, &family, tau, Some(c_star), c_tol, &opts)?;
            Ok((tau, r.c_hat, r.c_hat - c_star))
        })
        .collect::<Result<Vec<_>>>()?;

    match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                tau: f64,
                c_hat: f64,
                error: f64,
            }
            let rows: Vec<Row> = rows
                .into_iter()
                .map(|(tau, c_hat, error)| Row { tau, c_hat, error })
                .collect();
            json_doc(&rows)
        }
        OutputFormat::Csv => {
            let mut out = String::from("tau,c_hat,error\n");
            for (tau, c_hat, error) in rows {
                out.push_str(&format!("{},{},{}\n", num(tau), num(c_hat), num(error)));
            }
            Ok(out)
        }
    }
}

/// Kernel normalization and delta-limit diagnostics at the configured τ.
///
/// JSON shape: `{ tau, strong_mass_error, strong_mean_error,
/// weak_mass_error, spatiotemporal_mass_error, delta_limit: { taus,
/// sup_errors, strictly_decreasing } }`. The delta limit convolves the
/// strong kernel against a sech² profile on a fixed grid over τ, τ/2, τ/4.
pub fn cmd_kernel_check(cfg: &RunConfig) -> Result<String> {
    #[derive(Serialize)]
    struct DeltaLimit {
        taus: Vec<f64>,
        sup_errors: Vec<f64>,
        strictly_decreasing: bool,
    }
    #[derive(Serialize)]
    struct Report {
        tau: f64,
        strong_mass_error: f64,
        strong_mean_error: f64,
        weak_mass_error: f64,
        spatiotemporal_mass_error: f64,
        delta_limit: DeltaLimit,
    }

    let tau = cfg.params.tau;
    if !(tau > 0.0) {
        return Err(Error::InvalidParameters(
            "kernel checks need tau > 0".into(),
        ));
    }
    let quad_tol = cfg.tolerances.quad;
    let strong = DelayKernel::new(KernelKind::StrongTemporal, tau)?;
    let weak = DelayKernel::new(KernelKind::WeakTemporal, tau)?;

    let strong_mass_error = (kernels::temporal_mass(&strong, quad_tol)?.value - 1.0).abs();
    let strong_mean_error = (kernels::temporal_mean(&strong, quad_tol)?.value - tau).abs();
    let weak_mass_error = (kernels::temporal_mass(&weak, quad_tol)?.value - 1.0).abs();
    let spatiotemporal_mass_error =
        (kernels::spatiotemporal_mass(tau, quad_tol.max(1e-8))?.value - 1.0).abs();

    let profile = |x: f64| (0.5 * x).cosh().powi(-2);
    let grid: Vec<f64> = (-20..=20).map(|i| 0.5 * i as f64).collect();
    let taus = vec![tau, tau / 2.0, tau / 4.0];
    let mut sup_errors = Vec::with_capacity(taus.len());
    for &t in &taus {
        let k = DelayKernel::new(KernelKind::StrongTemporal, t)?;
        sup_errors.push(kernels::delta_limit_sup_error(
            &k, profile, &grid, quad_tol,
        )?);
    }
    let strictly_decreasing = sup_errors.windows(2).all(|w| w[1] < w[0]);

    let report = Report {
        tau,
        strong_mass_error,
        strong_mean_error,
        weak_mass_error,
        spatiotemporal_mass_error,
        delta_limit: DeltaLimit {
            taus,
            sup_errors,
            strictly_decreasing,
        },
    };
    match cfg.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json_doc(&report),
        OutputFormat::Csv => {
            let mut out = String::from("metric,value\n");
            out.push_str(&format!(
                "strong_mass_error,{}\n",
                num(report.strong_mass_error)
            ));
            out.push_str(&format!(
                "strong_mean_error,{}\n",
                num(report.strong_mean_error)
            ));
            out.push_str(&format!(
                "weak_mass_error,{}\n",
                num(report.weak_mass_error)
            ));
            out.push_str(&format!(
                "spatiotemporal_mass_error,{}\n",
                num(report.spatiotemporal_mass_error)
            ));
            for (t, e) in report
                .delta_limit
                .taus
                .iter()
                .zip(&report.delta_limit.sup_errors)
            {
                out.push_str(&format!("delta_limit_sup_error[tau={t:e}],{}\n", num(*e)));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigLayer;

    fn cfg() -> RunConfig {
        RunConfig::resolve(None, ConfigLayer::default()).unwrap()
    }

    fn cfg_with(layer: ConfigLayer) -> RunConfig {
        RunConfig::resolve(None, layer).unwrap()
    }

    fn parse_csv_row(line: &str) -> Vec<f64> {
        line.split(',').map(|v| v.parse().unwrap()).collect()
    }

    #[test]
    fn equilibria_json_round_trips() {
        let doc = cmd_equilibria(&cfg()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["homoclinic_regime"], serde_json::Value::Bool(true));
        assert_eq!(v["equilibria"][0]["kind"], "saddle");
        assert_eq!(v["equilibria"][1]["kind"], "center");
        assert_eq!(v["equilibria"][1]["point"]["phi"].as_f64().unwrap(), 1.0);
        // Round trip into the concrete types.
        let eqs: Vec<Equilibrium> = serde_json::from_value(v["equilibria"].clone()).unwrap();
        assert_eq!(eqs.len(), 2);
        let params: ModelParams = serde_json::from_value(v["params"].clone()).unwrap();
        assert_eq!(params, cfg().params);
    }

    #[test]
    fn equilibria_csv_carries_the_verdict() {
        let layer = ConfigLayer {
            format: Some("csv".into()),
            ..Default::default()
        };
        let doc = cmd_equilibria(&cfg_with(layer)).unwrap();
        let mut lines = doc.lines();
        assert_eq!(
            lines.next().unwrap(),
            "phi,psi,kind,jacobian_det,jacobian_trace,homoclinic_regime"
        );
        let saddle = lines.next().unwrap();
        assert!(saddle.contains(",saddle,") && saddle.ends_with("true"));
        assert!(lines.next().unwrap().contains(",center,"));
    }

    #[test]
    fn portrait_contract_holds() {
        let doc = cmd_portrait(&cfg()).unwrap();
        let mut lines = doc.lines();
        assert_eq!(lines.next().unwrap(), "xi,phi,psi");

        let params = cfg().params;
        let mut max_phi = f64::MIN;
        let mut blocks = 1;
        let mut in_first_block = true;
        for line in lines {
            if line.is_empty() {
                blocks += 1;
                in_first_block = false;
                continue;
            }
            let row = parse_csv_row(line);
            max_phi = max_phi.max(row[1]);
            if in_first_block {
                let h = model::hamiltonian(
                    PhasePoint {
                        phi: row[1],
                        psi: row[2],
                    },
                    &params,
                )
                .0;
                assert!(h.abs() < 1e-9, "homoclinic row off the level set: H = {h}");
            }
        }
        assert_eq!(blocks, 7);
        let apex = model::phi_star(&params).unwrap();
        assert!(
            (max_phi - apex).abs() < 1e-12,
            "max phi {max_phi} vs apex {apex}"
        );
    }

    #[test]
    fn portrait_periodic_blocks_conserve_their_levels() {
        let doc = cmd_portrait(&cfg()).unwrap();
        let params = cfg().params;
        let blocks: Vec<&str> = doc.split("\n\n").collect();
        assert_eq!(blocks.len(), 7);
        let h2 = potential(&params, 1.0);
        for (i, f) in [0.75, 0.5, 0.25].iter().enumerate() {
            let block = blocks[1 + i];
            for line in block
                .lines()
                .filter(|l| !l.is_empty() && !l.starts_with("xi"))
            {
                let row = parse_csv_row(line);
                let h = model::hamiltonian(
                    PhasePoint {
                        phi: row[1],
                        psi: row[2],
                    },
                    &params,
                )
                .0;
                assert!(
                    (h - f * h2).abs() < 1e-8,
                    "periodic level drift: {h} vs {}",
                    f * h2
                );
            }
        }
        // Outer arcs stay left of the origin.
        for block in &blocks[4..] {
            for line in block.lines().filter(|l| !l.is_empty()) {
                let row = parse_csv_row(line);
                assert!(row[1] < 0.0, "outer arc crossed into phi > 0");
            }
        }
    }

    #[test]
    fn melnikov_rows_match_the_reference_column() {
        let layer = ConfigLayer {
            c_min: Some(0.25),
            c_max: Some(3.0),
            c_step: Some(0.25),
            ..Default::default()
        };
        let doc = cmd_melnikov(&cfg_with(layer)).unwrap();
        let mut lines = doc.lines();
        assert_eq!(lines.next().unwrap(), "c,delta,reference");
        let mut checked = 0;
        for line in lines {
            let row = parse_csv_row(line);
            assert!(
                (row[1] - row[2]).abs() < 1e-8,
                "c = {}: {} vs {}",
                row[0],
                row[1],
                row[2]
            );
            if (row[0] - 1.0).abs() < 1e-12 {
                // Paper polynomial value at c = 1: −72/35 + 6/5 = −6/7.
                assert!((row[1] + 6.0 / 7.0).abs() < 1e-8);
            }
            checked += 1;
        }
        assert_eq!(checked, 12);
    }

    #[test]
    fn melnikov_off_reference_has_two_columns() {
        let layer = ConfigLayer {
            a: Some(-2.0),
            c_min: Some(0.5),
            c_max: Some(1.0),
            c_step: Some(0.5),
            ..Default::default()
        };
        let doc = cmd_melnikov(&cfg_with(layer)).unwrap();
        assert!(doc.starts_with("c,delta\n"));
        assert_eq!(doc.lines().count(), 3);
    }

    #[test]
    fn melnikov_grid_below_the_regime_is_rejected() {
        let layer = ConfigLayer {
            k: Some(0.0),
            c: Some(2.0),
            ..Default::default()
        };
        // Default grid starts at 0.05 < k+1 = 1.
        assert!(matches!(
            cmd_melnikov(&cfg_with(layer)),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn speed_json_has_the_reference_root() {
        let doc = cmd_speed(&cfg()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        let c_star = v["c_star"].as_f64().unwrap();
        assert!((c_star - (7.0f64 / 12.0).sqrt()).abs() < 1e-10);
        let dp = v["delta_prime"].as_f64().unwrap();
        assert!((dp + 2.4).abs() < 1e-6);
    }

    #[test]
    fn speed_without_root_is_a_no_sign_change() {
        let layer = ConfigLayer {
            variant: Some("none".into()),
            ..Default::default()
        };
        let err = cmd_speed(&cfg_with(layer)).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn persist_single_tau_is_one_row() {
        let layer = ConfigLayer {
            tau_ladder: Some(vec![2e-3]),
            ..Default::default()
        };
        let doc = cmd_persist(&cfg_with(layer)).unwrap();
        let mut lines = doc.lines();
        assert_eq!(lines.next().unwrap(), "tau,c_hat,error");
        let row = parse_csv_row(lines.next().unwrap());
        assert_eq!(row[0], 2e-3);
        assert!((row[1] - (7.0f64 / 12.0).sqrt()).abs() < 1e-4);
        assert!((row[1] - row[2] - (7.0f64 / 12.0).sqrt()).abs() < 1e-12);
        assert!(lines.next().is_none());
    }

    #[test]
    fn kernel_check_reports_tight_normalizations() {
        let doc = cmd_kernel_check(&cfg()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert!(v["strong_mass_error"].as_f64().unwrap() < 1e-10);
        assert!(v["strong_mean_error"].as_f64().unwrap() < 1e-8);
        assert!(v["weak_mass_error"].as_f64().unwrap() < 1e-10);
        assert!(v["spatiotemporal_mass_error"].as_f64().unwrap() < 1e-7);
        assert_eq!(v["delta_limit"]["strictly_decreasing"], true);
        assert_eq!(v["delta_limit"]["sup_errors"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn csv_numbers_use_full_precision() {
        let layer = ConfigLayer {
            c_min: Some(1.0),
            c_max: Some(1.0),
            c_step: Some(1.0),
            format: Some("csv".into()),
            ..Default::default()
        };
        let doc = cmd_melnikov(&cfg_with(layer)).unwrap();
        let line = doc.lines().nth(1).unwrap();
        for field in line.split(',') {
            // 17 significant digits in scientific notation.
            let mantissa = field.split('e').next().unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17, "field {field}");
            assert!(!field.contains(';') && !field.contains(' '));
        }
        assert!(!doc.contains('\r'));
    }

    fn potential(params: &ModelParams, phi: f64) -> f64 {
        super::potential(params, phi)
    }

    #[test]
    fn portrait_json_shape() {
        let layer = ConfigLayer {
            format: Some("json".into()),
            xi_min: Some(-5.0),
            xi_max: Some(5.0),
            xi_step: Some(0.5),
            ..Default::default()
        };
        let doc = cmd_portrait(&cfg_with(layer)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        let blocks = v["blocks"].as_array().unwrap();
        assert_eq!(blocks.len(), 7);
        assert_eq!(blocks[0]["label"], "homoclinic");
        assert!(blocks[0]["rows"].as_array().unwrap().len() >= 21);
    }
}
