//! Orbits, period detection, bifurcation scans, flip thresholds, Lyapunov exponents
//! and phase portraits.

mod flip;
mod portrait;
mod scan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, Model, ModelError, Params, State};

pub use flip::{find_flip_delta, flip_residual, lyapunov_gr, lyapunov_gr_with, LyapunovEstimate};
pub use portrait::{count_pieces, phase_portrait, PhasePortrait, DEFAULT_PIECE_GAP};
pub use scan::{scan_1d, scan_2d, CellAxis, Plane, Scan1dSpec, Scan2dSpec, ScanCell, ScanResult, ScanSpec};

pub const DEFAULT_BURN_IN: usize = 5000;
pub const DEFAULT_KEEP: usize = 2000;
pub const DEFAULT_P_MAX: usize = 24;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Orbits with a coordinate beyond this magnitude count as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("period detection needs at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("no root bracketed in [{lo}, {hi}]")]
    NoRootBracketed { lo: f64, hi: f64 },
    #[error("orbit diverged at step {0}")]
    Diverged(usize),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// 1-based index of the step that left the domain or blew up.
    Diverged(usize),
}

/// A finite trajectory: `samples` are the states recorded after `burn_in` discarded steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub model: Model,
    pub params: Params,
    pub initial: State,
    pub burn_in: usize,
    pub samples: Vec<State>,
    pub terminated: Termination,
}

impl Orbit {
    pub fn diverged(&self) -> bool {
        matches!(self.terminated, Termination::Diverged(_))
    }
}

fn advance(model: Model, p: &Params, st: &State) -> Option<State> {
    match model::step_model(model, p, st) {
        Ok(next) if next.is_finite() && next.max_norm() <= DIVERGENCE_BOUND => Some(next),
        _ => None,
    }
}

/// Runs `burn_in` discarded steps then `keep` recorded ones. Divergence is not an
/// error: the orbit is truncated and marked.
pub fn iterate(model: impl Into<Model>, p: &Params, x0: State, burn_in: usize, keep: usize) -> Orbit {
    let model = model.into();
    let mut samples = Vec::with_capacity(keep);
    let mut st = x0;
    let mut terminated = Termination::Completed;
    for n in 1..=burn_in + keep {
        match advance(model, p, &st) {
            Some(next) => st = next,
            None => {
                terminated = Termination::Diverged(n);
                break;
            }
        }
        if n > burn_in {
            samples.push(st);
        }
    }
    Orbit {
        model,
        params: *p,
        initial: x0,
        burn_in,
        samples,
        terminated,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodKind {
    Period(usize),
    Aperiodic,
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodVerdict {
    pub kind: PeriodKind,
    pub tol: f64,
}

impl PeriodVerdict {
    pub fn period(&self) -> Option<usize> {
        match self.kind {
            PeriodKind::Period(k) => Some(k),
            _ => None,
        }
    }

    /// `"k"`, `"aperiodic"` or `"diverged"`.
    pub fn token(&self) -> String {
        match self.kind {
            PeriodKind::Period(k) => k.to_string(),
            PeriodKind::Aperiodic => "aperiodic".into(),
            PeriodKind::Diverged => "diverged".into(),
        }
    }
}

/// Whether the trailing `window` is `k`-periodic: every sample lies within
/// `tol (1 + |s|)` of the sample in the same residue class among the last `k`.
///
/// Comparing against the end of the window, rather than only neighbours `k` apart,
/// rejects a slowly decaying oscillation whose per-step drift is below `tol`.
pub fn closes(samples: &[State], k: usize, window: usize, tol: f64) -> bool {
    let n = samples.len();
    if k == 0 || k >= window || window > n {
        return false;
    }
    (n - window..n - k).all(|i| {
        let rep = &samples[i + k * ((n - 1 - i) / k)];
        rep.dist_max(&samples[i]) < tol * (1.0 + rep.max_norm())
    })
}

/// Smallest `k <= p_max` whose closure test holds over the last `4 p_max` samples.
pub fn detect_period(o: &Orbit, p_max: usize, tol: f64) -> Result<PeriodVerdict, DynamicsError> {
    if o.diverged() {
        return Ok(PeriodVerdict {
            kind: PeriodKind::Diverged,
            tol,
        });
    }
    let window = 4 * p_max.max(1);
    if o.samples.len() < window {
        return Err(DynamicsError::InsufficientSamples {
            needed: window,
            got: o.samples.len(),
        });
    }
    let kind = (1..=p_max)
        .find(|&k| closes(&o.samples, k, window, tol))
        .map_or(PeriodKind::Aperiodic, PeriodKind::Period);
    Ok(PeriodVerdict { kind, tol })
}
