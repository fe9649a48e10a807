use serde::{Deserialize, Serialize};

use super::{DynamicsError, DEFAULT_BURN_IN, DIVERGENCE_BOUND};
use crate::model::{self, ModelKind, Params, State};
use crate::stability::{eval_stability_poly, sign_at, Sign, StabilityPolynomials};

/// Root in `delta` of the governing stability polynomial at fixed `(c1, c2)`, isolated
/// by bisection on its exact sign to a bracket narrower than `1e-9`.
pub fn find_flip_delta(kind: ModelKind, c1: f64, c2: f64, bracket: (f64, f64)) -> Result<f64, DynamicsError> {
    Params::new(c1, c2, 1.0)?;
    let poly = StabilityPolynomials::get().governing(kind);
    let (mut lo, mut hi) = bracket;
    let no_root = DynamicsError::NoRootBracketed { lo, hi };
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(no_root);
    }
    let s_lo = sign_at(poly, c1, c2, lo);
    let s_hi = sign_at(poly, c1, c2, hi);
    if s_lo == Sign::Zero {
        return Ok(lo);
    }
    if s_hi == Sign::Zero {
        return Ok(hi);
    }
    if s_lo == s_hi {
        return Err(no_root);
    }
    while hi - lo >= 1e-9 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match sign_at(poly, c1, c2, mid) {
            Sign::Zero => return Ok(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Relative size of the governing polynomial at a point, for checking returned roots.
pub fn flip_residual(kind: ModelKind, c1: f64, c2: f64, delta: f64) -> Result<f64, DynamicsError> {
    let p = Params::new(c1, c2, delta)?;
    Ok(eval_stability_poly(kind, &p).governing.relative())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    pub steps: usize,
    /// Orbit points where the derivative vanished and `ln` of the machine floor was used.
    pub floored: usize,
}

/// Lyapunov exponent of the one-dimensional GR map after the default burn-in.
pub fn lyapunov_gr(p: &Params, x1_0: f64, n: usize) -> Result<LyapunovEstimate, DynamicsError> {
    lyapunov_gr_with(p, x1_0, DEFAULT_BURN_IN, n)
}

/// `(1/n) sum ln |DQ(x1_k)|` along `n` steps of `x1 -> x1 + delta G1(x1, R2(x1))`.
pub fn lyapunov_gr_with(p: &Params, x1_0: f64, burn_in: usize, n: usize) -> Result<LyapunovEstimate, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::InvalidSpec("at least one step is needed".into()));
    }
    let advance = |x: f64, k: usize| -> Result<f64, DynamicsError> {
        match model::gr_reduced_step(p, x) {
            Ok(y) if y.is_finite() && y.abs() <= DIVERGENCE_BOUND => Ok(y),
            _ => Err(DynamicsError::Diverged(k)),
        }
    };
    let mut x = x1_0;
    for k in 1..=burn_in {
        x = advance(x, k)?;
    }
    let (mut sum, mut floored) = (0.0, 0);
    for k in 1..=n {
        let st = State::new(x, model::best_response_r2(x, p.c2).map_err(|_| DynamicsError::Diverged(burn_in + k))?);
        let d = model::dq_gr(p, &st)?.abs();
        if d > 0.0 {
            sum += d.ln();
        } else {
            sum += f64::MIN_POSITIVE.ln();
            floored += 1;
        }
        x = advance(x, burn_in + k)?;
    }
    Ok(LyapunovEstimate {
        exponent: sum / n as f64,
        steps: n,
        floored,
    })
}
