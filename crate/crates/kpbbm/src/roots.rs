//! Scalar root finding: Brent's method plus bracket discovery.

use crate::error::{Error, Result};

/// Result of a bracketing root solve.
#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub root: f64,
    pub f_root: f64,
    pub iterations: u32,
    pub bracket: (f64, f64),
}

const MAX_ITER: u32 = 200;

/// Brent's method on [lo, hi]; f(lo) and f(hi) must have opposite signs.
///
/// `xtol` is an absolute tolerance on the root location; machine-precision
/// relative accuracy is always enforced on top of it.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameters(format!(
            "invalid bracket [{lo}, {hi}]"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(RootResult {
            root: a,
            f_root: 0.0,
            iterations: 0,
            bracket: (lo, hi),
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            root: b,
            f_root: 0.0,
            iterations: 0,
            bracket: (lo, hi),
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(RootResult {
                root: b,
                f_root: fb,
                iterations: iter,
                bracket: (b.min(c), b.max(c)),
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, or secant if only two points.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::ConvergenceFailure(format!(
        "Brent did not converge in {MAX_ITER} iterations on [{lo}, {hi}]"
    )))
}

/// Expands geometrically from a seed until f changes sign.
///
/// Probes seed·g^n and seed/g^n (g = `growth`), clipped to (floor, ceil),
/// and returns the first adjacent probe pair with a sign change.
pub fn expand_bracket<F>(
    mut f: F,
    seed: f64,
    growth: f64,
    floor: f64,
    ceil: f64,
    max_steps: u32,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(seed > floor && seed < ceil && growth > 1.0) {
        return Err(Error::InvalidParameters(format!(
            "bracket seed {seed} outside ({floor}, {ceil}) or growth {growth} <= 1"
        )));
    }
    let f_seed = f(seed)?;
    if f_seed == 0.0 {
        return Ok((seed, seed));
    }
    let (mut up, mut f_up) = (seed, f_seed);
    let (mut dn, mut f_dn) = (seed, f_seed);
    let mut up_done = false;
    let mut dn_done = false;
    for _ in 0..max_steps {
        if !up_done {
            let next = (up * growth).min(ceil - f64::EPSILON * ceil.abs().max(1.0));
            if next <= up {
                up_done = true;
            } else {
                let f_next = f(next)?;
                if f_next.signum() != f_up.signum() {
                    return Ok((up, next));
                }
                up = next;
                f_up = f_next;
            }
        }
        if !dn_done {
            let next = (dn / growth).max(floor + f64::EPSILON * floor.abs().max(1.0));
            if next >= dn {
                dn_done = true;
            } else {
                let f_next = f(next)?;
                if f_next.signum() != f_dn.signum() {
                    return Ok((next, dn));
                }
                dn = next;
                f_dn = f_next;
            }
        }
        if up_done && dn_done {
            break;
        }
    }
    Err(Error::NoSignChange { lo: dn, hi: up })
}
