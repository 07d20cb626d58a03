//! Explicit Dormand–Prince 5(4) integrator with dense output and event
//! location.
//!
//! The pair is FSAL (first-same-as-last): the seventh stage of an accepted
//! step seeds the next one, so a step costs six right-hand-side calls.
//! Dense output is the standard quartic interpolant of the pair; events are
//! located by bisecting it between accepted steps. Backward integration is
//! requested by `t_end < t_start`.

use crate::error::{Error, Result};

const STAGES: usize = 7;

const C: [f64; STAGES] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; STAGES] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Fifth-order weights (identical to the last A row: FSAL).
const B: [f64; STAGES] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Difference of the order-5 and order-4 weights.
const E: [f64; STAGES] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dense-output weights for the fifth interpolation coefficient.
const D: [f64; STAGES] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Step-size controller and budget settings.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// First step size magnitude; estimated automatically when absent.
    pub h_init: Option<f64>,
    /// Cap on the step size magnitude.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: None,
            h_max: None,
            max_steps: 1_000_000,
        }
    }
}

impl OdeOptions {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        OdeOptions {
            rtol,
            atol,
            ..Default::default()
        }
    }
}

/// Quartic interpolant over one accepted step [t0, t0 + h].
#[derive(Debug, Clone)]
pub struct DenseSegment {
    pub t0: f64,
    pub h: f64,
    cont: Vec<[f64; 5]>,
}

impl DenseSegment {
    /// Evaluates the interpolant; `t` is clamped to the segment.
    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let theta = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let om = 1.0 - theta;
        for (o, c) in out.iter_mut().zip(&self.cont) {
            *o = c[0] + theta * (c[1] + om * (c[2] + theta * (c[3] + om * c[4])));
        }
    }

    fn covers(&self, t: f64) -> bool {
        let (lo, hi) = if self.h >= 0.0 {
            (self.t0, self.t0 + self.h)
        } else {
            (self.t0 + self.h, self.t0)
        };
        (lo..=hi).contains(&t)
    }
}

/// Accepted trajectory with per-step interpolants.
#[derive(Debug, Clone)]
pub struct Integration {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub dense: Vec<DenseSegment>,
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

impl Integration {
    pub fn final_time(&self) -> f64 {
        *self
            .t
            .last()
            .expect("integration holds at least the initial point")
    }

    pub fn final_state(&self) -> &[f64] {
        self.y
            .last()
            .expect("integration holds at least the initial point")
    }

    /// Interpolated state at `t`, or None outside the integrated span.
    pub fn sample(&self, t: f64) -> Option<Vec<f64>> {
        let seg = if self.dense.len() > 16 {
            let forward = self.dense[0].h >= 0.0;
            let idx = self.dense.partition_point(|s| {
                if forward {
                    s.t0 + s.h < t
                } else {
                    s.t0 + s.h > t
                }
            });
            self.dense.get(idx).filter(|s| s.covers(t))
        } else {
            self.dense.iter().find(|s| s.covers(t))
        }?;
        let mut out = vec![0.0; self.y[0].len()];
        seg.eval(t, &mut out);
        Some(out)
    }
}

/// Section crossing located by an [`EventSpec`].
#[derive(Debug, Clone)]
pub struct EventCrossing {
    pub t: f64,
    pub y: Vec<f64>,
}

/// Boolean test on the state, used for guards and escape regions.
pub type StopFn = dyn Fn(f64, &[f64]) -> bool;

/// Zero-crossing detector g(t, y) = 0.
///
/// `direction` filters crossings: +1 keeps g rising, −1 keeps g falling,
/// 0 keeps both. `guard` must hold at the located crossing for it to count;
/// rejected crossings are skipped and integration continues.
pub struct EventSpec<'a> {
    pub value: &'a dyn Fn(f64, &[f64]) -> f64,
    pub direction: i8,
    pub guard: Option<&'a StopFn>,
}

const EVENT_T_TOL: f64 = 1e-12;

struct Stepper<'f, F: Fn(f64, &[f64], &mut [f64])> {
    f: &'f F,
    dim: usize,
    k: [Vec<f64>; STAGES],
    y_stage: Vec<f64>,
    opts: OdeOptions,
    rhs_evals: usize,
}

struct StepResult {
    y1: Vec<f64>,
    err: f64,
    cont: Vec<[f64; 5]>,
}

impl<'f, F: Fn(f64, &[f64], &mut [f64])> Stepper<'f, F> {
    fn new(f: &'f F, dim: usize, opts: OdeOptions) -> Self {
        Stepper {
            f,
            dim,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            y_stage: vec![0.0; dim],
            opts,
            rhs_evals: 0,
        }
    }

    fn eval(&mut self, t: f64, y: &[f64], stage: usize) {
        let (head, tail) = self.k.split_at_mut(stage);
        let _ = head;
        (self.f)(t, y, &mut tail[0]);
        self.rhs_evals += 1;
    }

    /// One trial step from (t, y) with k1 already filled.
    fn attempt(&mut self, t: f64, y: &[f64], h: f64) -> StepResult {
        for stage in 1..STAGES {
            for i in 0..self.dim {
                let mut acc = 0.0;
                for (j, kj) in self.k[..stage].iter().enumerate() {
                    acc += A[stage][j] * kj[i];
                }
                self.y_stage[i] = y[i] + h * acc;
            }
            let y_stage = std::mem::take(&mut self.y_stage);
            self.eval(t + C[stage] * h, &y_stage, stage);
            self.y_stage = y_stage;
        }

        let mut y1 = vec![0.0; self.dim];
        let mut err = 0.0;
        for i in 0..self.dim {
            let mut dy = 0.0;
            let mut e = 0.0;
            for s in 0..STAGES {
                dy += B[s] * self.k[s][i];
                e += E[s] * self.k[s][i];
            }
            y1[i] = y[i] + h * dy;
            let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(y1[i].abs());
            err += (h * e / sc) * (h * e / sc);
        }
        err = (err / self.dim as f64).sqrt();

        let mut cont = vec![[0.0; 5]; self.dim];
        for i in 0..self.dim {
            let dy = y1[i] - y[i];
            let c5: f64 = D.iter().zip(&self.k).map(|(d, k)| d * k[i]).sum();
            cont[i] = [
                y[i],
                dy,
                h * self.k[0][i] - dy,
                dy - h * self.k[STAGES - 1][i] - (h * self.k[0][i] - dy),
                h * c5,
            ];
        }

        StepResult { y1, err, cont }
    }

    /// Standard starting-step heuristic from the initial slope.
    fn initial_step(&mut self, t0: f64, y0: &[f64], span: f64, dir: f64) -> f64 {
        let sc: Vec<f64> = y0
            .iter()
            .map(|&yi| self.opts.atol + self.opts.rtol * yi.abs())
            .collect();
        let norm = |v: &[f64]| -> f64 {
            (v.iter()
                .zip(&sc)
                .map(|(x, s)| (x / s) * (x / s))
                .sum::<f64>()
                / self.dim as f64)
                .sqrt()
        };
        let d0 = norm(y0);
        let k0: Vec<f64> = self.k[0].clone();
        let d1 = norm(&k0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let h0 = h0.min(span.abs().max(f64::MIN_POSITIVE));

        let y_probe: Vec<f64> = y0
            .iter()
            .zip(&k0)
            .map(|(yi, ki)| yi + dir * h0 * ki)
            .collect();
        let mut f_probe = vec![0.0; self.dim];
        (self.f)(t0 + dir * h0, &y_probe, &mut f_probe);
        self.rhs_evals += 1;
        let diff: Vec<f64> = f_probe.iter().zip(&k0).map(|(a, b)| a - b).collect();
        let d2 = norm(&diff) / h0;

        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        h0.min(h1).min(span.abs()) * 100.0f64.min(h1 / h0.max(f64::MIN_POSITIVE)).max(1.0)
    }
}

fn underflow_limit(t: f64) -> f64 {
    16.0 * f64::EPSILON * t.abs().max(1.0)
}

enum Phase<'a, 'b> {
    Record,
    Event {
        spec: &'a EventSpec<'a>,
        escape: Option<&'b StopFn>,
        hit: Option<EventCrossing>,
    },
}

fn drive<F: Fn(f64, &[f64], &mut [f64])>(
    f: F,
    y0: &[f64],
    t0: f64,
    t_end: f64,
    opts: &OdeOptions,
    phase: &mut Phase,
) -> Result<Integration> {
    if y0.is_empty() || !y0.iter().all(|v| v.is_finite()) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidParameters(
            "integration needs finite initial data and span".into(),
        ));
    }
    let dim = y0.len();
    let span = t_end - t0;
    let dir = if span >= 0.0 { 1.0 } else { -1.0 };

    let mut stepper = Stepper::new(&f, dim, *opts);
    let mut t = t0;
    let mut y = y0.to_vec();
    stepper.eval(t, &y, 0);

    let h_cap = opts.h_max.unwrap_or(span.abs().max(f64::MIN_POSITIVE));
    let mut h = dir
        * opts
            .h_init
            .map(|h| h.abs())
            .unwrap_or_else(|| stepper.initial_step(t, &y, span, dir))
            .min(h_cap)
            .max(f64::MIN_POSITIVE);

    let mut out = Integration {
        t: vec![t0],
        y: vec![y.clone()],
        dense: Vec::new(),
        accepted: 0,
        rejected: 0,
        rhs_evals: 0,
    };
    let mut g_prev = match phase {
        Phase::Event { spec, .. } => Some((spec.value)(t, &y)),
        Phase::Record => None,
    };
    let mut just_rejected = false;

    while (t_end - t) * dir > 0.0 {
        if out.accepted + out.rejected >= opts.max_steps {
            out.rhs_evals = stepper.rhs_evals;
            return Err(Error::ConvergenceFailure(format!(
                "step budget {} exhausted at t = {t:.6e}",
                opts.max_steps
            )));
        }
        if h.abs() < underflow_limit(t) {
            return Err(Error::StepUnderflow {
                t,
                detail: format!("step size {:.3e} below the roundoff floor", h.abs()),
            });
        }
        // Land exactly on t_end.
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }

        let result = stepper.attempt(t, &y, h);
        let err_ok = result.err.is_finite() && result.err <= 1.0;
        let factor = if result.err.is_finite() {
            let f = 0.9 * result.err.powf(-0.2);
            f.clamp(0.2, if just_rejected { 1.0 } else { 5.0 })
        } else {
            0.2
        };

        if !err_ok {
            out.rejected += 1;
            just_rejected = true;
            h *= factor;
            continue;
        }

        let t_new = t + h;
        out.dense.push(DenseSegment {
            t0: t,
            h,
            cont: result.cont,
        });
        out.accepted += 1;

        // FSAL: stage 7 at (t_new, y_new) becomes the next k1.
        stepper.eval(t_new, &result.y1, 0);

        t = t_new;
        y = result.y1;
        out.t.push(t);
        out.y.push(y.clone());

        if let Phase::Event { spec, escape, hit } = phase {
            let g_now = (spec.value)(t, &y);
            let g_before = g_prev.expect("event phase seeds g_prev");
            let seg = out.dense.last().expect("segment just pushed");
            if let Some(cross) = locate_crossing(seg, spec, g_before, g_now) {
                *hit = Some(cross);
                out.rhs_evals = stepper.rhs_evals;
                return Ok(out);
            }
            g_prev = Some(g_now);
            if let Some(esc) = escape {
                if esc(t, &y) {
                    out.rhs_evals = stepper.rhs_evals;
                    return Ok(out);
                }
            }
        }

        just_rejected = false;
        h = (h * factor).abs().min(h_cap).copysign(dir);
    }

    out.rhs_evals = stepper.rhs_evals;
    Ok(out)
}

/// Bisects the dense interpolant for a guarded, direction-filtered zero.
fn locate_crossing(
    seg: &DenseSegment,
    spec: &EventSpec,
    g_lo: f64,
    g_hi: f64,
) -> Option<EventCrossing> {
    if g_lo == 0.0 {
        // The previous endpoint already sat on the section; skip it.
        return None;
    }
    let crossed = g_lo.signum() != g_hi.signum() || g_hi == 0.0;
    if !crossed {
        return None;
    }
    let rising = g_hi > g_lo;
    if (spec.direction > 0 && !rising) || (spec.direction < 0 && rising) {
        return None;
    }

    let mut lo = seg.t0;
    let mut hi = seg.t0 + seg.h;
    let mut g_a = g_lo;
    let mut buf = vec![0.0; seg.cont.len()];
    for _ in 0..200 {
        if (hi - lo).abs() <= EVENT_T_TOL * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        seg.eval(mid, &mut buf);
        let g_m = (spec.value)(mid, &buf);
        if g_m == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if g_m.signum() == g_a.signum() {
            lo = mid;
            g_a = g_m;
        } else {
            hi = mid;
        }
    }
    let t_star = 0.5 * (lo + hi);
    seg.eval(t_star, &mut buf);
    if let Some(guard) = spec.guard {
        if !guard(t_star, &buf) {
            return None;
        }
    }
    Some(EventCrossing { t: t_star, y: buf })
}

/// Integrates y' = f(t, y) from t0 to t_end (backward when t_end < t0).
pub fn integrate<F: Fn(f64, &[f64], &mut [f64])>(
    f: F,
    y0: &[f64],
    t0: f64,
    t_end: f64,
    opts: &OdeOptions,
) -> Result<Integration> {
    drive(f, y0, t0, t_end, opts, &mut Phase::Record)
}

/// Integrates until `stop` holds at an accepted step, or until t_end.
///
/// The returned trajectory includes the stopping step; the predicate is
/// checked on accepted states only, so the stop is resolved to step
/// accuracy, not bisected.
pub fn integrate_until<F: Fn(f64, &[f64], &mut [f64])>(
    f: F,
    y0: &[f64],
    t0: f64,
    t_end: f64,
    stop: &StopFn,
    opts: &OdeOptions,
) -> Result<Integration> {
    let never = |_t: f64, _y: &[f64]| 1.0;
    let spec = EventSpec {
        value: &never,
        direction: 0,
        guard: None,
    };
    let mut phase = Phase::Event {
        spec: &spec,
        escape: Some(stop),
        hit: None,
    };
    drive(f, y0, t0, t_end, opts, &mut phase)
}

/// Integrates until the event fires, an escape predicate trips, or t_max.
///
/// Returns the crossing, or None when the trajectory escaped or ran out the
/// span without a guarded crossing.
pub fn integrate_to_event<F: Fn(f64, &[f64], &mut [f64])>(
    f: F,
    y0: &[f64],
    t0: f64,
    t_max: f64,
    spec: &EventSpec,
    escape: Option<&StopFn>,
    opts: &OdeOptions,
) -> Result<Option<EventCrossing>> {
    let mut phase = Phase::Event {
        spec,
        escape,
        hit: None,
    };
    drive(f, y0, t0, t_max, opts, &mut phase)?;
    match phase {
        Phase::Event { hit, .. } => Ok(hit),
        Phase::Record => unreachable!(),
    }
}
