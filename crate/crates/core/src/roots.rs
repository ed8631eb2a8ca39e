//! Bracketed scalar root finding.
//!
//! Every solver here keeps a sign-changing bracket and never returns a point
//! outside it. Newton steps are taken when they stay inside the bracket and
//! shrink it fast enough; otherwise the step falls back to bisection.

use crate::error::{Error, Result};

/// Stopping rule shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute residual at which a point is accepted as a root.
    pub residual: f64,
    /// Upper bound on the number of iterations.
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            residual: 1e-12,
            max_iter: 200,
        }
    }
}

impl Tolerance {
    pub fn residual(residual: f64) -> Self {
        Tolerance {
            residual,
            ..Default::default()
        }
    }
}

/// Width below which a bracket cannot be split any further in `f64`.
fn exhausted(lo: f64, hi: f64) -> bool {
    let mid = 0.5 * (lo + hi);
    mid <= lo.min(hi) || mid >= lo.max(hi) || (hi - lo).abs() <= 4.0 * f64::EPSILON * mid.abs()
}

/// Safeguarded Newton iteration on `[lo, hi]`.
///
/// `g` returns the value and the derivative at a point. `seed`, when given and
/// inside the bracket, is the first iterate; otherwise the midpoint is used.
/// The returned root always lies in `[min(lo, hi), max(lo, hi)]`.
pub fn newton_bracketed<G>(mut g: G, lo: f64, hi: f64, seed: Option<f64>, tol: Tolerance) -> Result<f64>
where
    G: FnMut(f64) -> (f64, f64),
{
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (g_lo, _) = g(lo);
    if g_lo.abs() <= tol.residual {
        return Ok(lo);
    }
    let (g_hi, _) = g(hi);
    if g_hi.abs() <= tol.residual {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() || !g_lo.is_finite() || !g_hi.is_finite() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            f_lo: g_lo,
            f_hi: g_hi,
        });
    }
    // Orient so that g(neg) < 0 < g(pos).
    let (mut neg, mut pos) = if g_lo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = match seed {
        Some(s) if s > lo && s < hi => s,
        _ => 0.5 * (lo + hi),
    };
    let mut dx_old = hi - lo;
    let mut best = (x, f64::INFINITY);
    for _ in 0..tol.max_iter {
        let (gx, dgx) = g(x);
        if gx.abs() < best.1 {
            best = (x, gx.abs());
        }
        if gx.abs() <= tol.residual {
            return Ok(x);
        }
        if gx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let (a, b) = if neg < pos { (neg, pos) } else { (pos, neg) };
        if exhausted(a, b) {
            return Ok(best.0);
        }
        let newton = x - gx / dgx;
        let take_newton =
            dgx != 0.0 && newton.is_finite() && newton > a && newton < b && (2.0 * gx).abs() <= (dx_old * dgx).abs();
        let next = if take_newton { newton } else { 0.5 * (a + b) };
        dx_old = (next - x).abs();
        if next == x {
            return Ok(best.0);
        }
        x = next;
    }
    Ok(best.0)
}

/// Plain bisection on a sign change of `g` over `[lo, hi]`.
///
/// Returns the final bracket `(lo, hi)` after it is narrower than `width` or
/// can no longer be split.
pub fn bisect<G>(mut g: G, lo: f64, hi: f64, width: f64) -> Result<(f64, f64)>
where
    G: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok((lo, lo));
    }
    if g_hi == 0.0 {
        return Ok((hi, hi));
    }
    if g_lo.signum() == g_hi.signum() || !g_lo.is_finite() || !g_hi.is_finite() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            f_lo: g_lo,
            f_hi: g_hi,
        });
    }
    let lo_sign = g_lo.signum();
    while hi - lo > width && !exhausted(lo, hi) {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return Ok((mid, mid));
        }
        if gm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Secant polish seeded with a bracket; iterates are clamped to the bracket.
///
/// Returns the iterate with the smallest residual seen.
pub fn secant_polish<G>(mut g: G, lo: f64, hi: f64, tol: Tolerance) -> f64
where
    G: FnMut(f64) -> f64,
{
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (mut x0, mut x1) = (lo, hi);
    let (mut g0, mut g1) = (g(x0), g(x1));
    let mut best = if g0.abs() < g1.abs() {
        (x0, g0.abs())
    } else {
        (x1, g1.abs())
    };
    for _ in 0..tol.max_iter {
        if best.1 <= tol.residual || g1 == g0 {
            break;
        }
        let x2 = (x1 - g1 * (x1 - x0) / (g1 - g0)).clamp(lo, hi);
        if x2 == x1 {
            break;
        }
        let g2 = g(x2);
        if g2.abs() < best.1 {
            best = (x2, g2.abs());
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g2;
    }
    best.0
}
