//! Adaptive quadrature on finite intervals.
//!
//! A 7-point Gauss / 15-point Kronrod pair is applied per panel; the panel
//! with the largest error estimate is bisected until the summed estimate
//! meets the requested absolute tolerance or the evaluation budget runs out.
//! Error rescaling follows the classic QUADPACK recipe so that estimates
//! stay honest near machine precision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance for Melnikov and kernel integrals.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default evaluation budget per integral.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod abscissae for [-1, 1]; odd-indexed entries (plus the center) are
// the embedded Gauss-7 nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

/// One G7/K15 evaluation over [a, b].
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut result_gauss = fc * WG[3];
    let mut result_kronrod = fc * WGK[7];
    let mut resabs = result_kronrod.abs();
    let mut samples = [0.0f64; 15];
    samples[7] = fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        samples[j] = f1;
        samples[14 - j] = f2;
        let sum = f1 + f2;
        result_kronrod += WGK[j] * sum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * sum;
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((samples[j] - mean).abs() + (samples[14 - j] - mean).abs());
    }

    let value = result_kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let raw = ((result_kronrod - result_gauss) * half).abs();
    Panel {
        a,
        b,
        value,
        error: rescale_error(raw, resabs, resasc),
    }
}

/// QUADPACK error rescaling: sharpens the raw |K15 - G7| difference and
/// floors it at the roundoff level of the panel.
fn rescale_error(err: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut error = err;
    if result_asc != 0.0 && error != 0.0 {
        let scale = (200.0 * error / result_asc).powf(1.5);
        error = if scale < 1.0 {
            result_asc * scale
        } else {
            result_asc
        };
    }
    let min_err = 50.0 * f64::EPSILON * result_abs;
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(min_err);
    }
    error
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over [a, b] to absolute tolerance `tol`.
///
/// The effective tolerance is floored at the accumulated roundoff of the
/// current estimate, so analytic integrands converge instead of spinning on
/// an unreachable request. Exceeding `budget` evaluations without meeting
/// tolerance is a convergence failure.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("non-finite interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "quadrature tol must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }

    let mut heap = BinaryHeap::new();
    heap.push(kronrod_panel(&f, a, b));
    let mut evaluations = 15usize;

    loop {
        let total_value: f64 = heap.iter().map(|p| p.value).sum();
        let total_error: f64 = heap.iter().map(|p| p.error).sum();
        let floor = 100.0 * f64::EPSILON * total_value.abs();
        if total_error <= tol.max(floor) {
            return Ok(QuadratureResult {
                value: total_value,
                abs_error_estimate: total_error,
                evaluations,
            });
        }
        if evaluations + 30 > budget {
            return Err(Error::ConvergenceFailure(format!(
                "quadrature used {evaluations} evaluations, error estimate {total_error:.3e} > tol {tol:.3e}"
            )));
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            return Err(Error::ConvergenceFailure(format!(
                "panel [{:.17e}, {:.17e}] can no longer be bisected",
                worst.a, worst.b
            )));
        }
        heap.push(kronrod_panel(&f, worst.a, mid));
        heap.push(kronrod_panel(&f, mid, worst.b));
        evaluations += 30;
    }
}

/// Convenience wrapper with the crate defaults.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<QuadratureResult> {
    adaptive(f, a, b, DEFAULT_TOL, DEFAULT_BUDGET)
}
