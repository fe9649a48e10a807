use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{detect_period, iterate, DynamicsError, PeriodKind, PeriodVerdict};
use super::{DEFAULT_BURN_IN, DEFAULT_KEEP, DEFAULT_P_MAX, DEFAULT_TOL};
use crate::model::{Model, Params, State};

/// `n` cells splitting `[lo, hi]`; cell `i` is represented by its center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl CellAxis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self, DynamicsError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(DynamicsError::InvalidSpec(format!("empty range [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(DynamicsError::InvalidSpec(format!("resolution {n} is below 2")));
        }
        Ok(CellAxis { lo, hi, n })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scan1dSpec {
    pub model: Model,
    pub c1: f64,
    pub c2: f64,
    pub delta: CellAxis,
    pub x0: State,
    pub burn_in: usize,
    pub keep: usize,
    /// Trailing states stored per cell for plotting.
    pub samples_per_cell: usize,
    pub p_max: usize,
    pub tol: f64,
}

impl Scan1dSpec {
    pub fn new(model: impl Into<Model>, c1: f64, c2: f64, delta: CellAxis) -> Self {
        Scan1dSpec {
            model: model.into(),
            c1,
            c2,
            delta,
            x0: State::new(0.5, 0.5),
            burn_in: DEFAULT_BURN_IN,
            keep: DEFAULT_KEEP,
            samples_per_cell: 100,
            p_max: DEFAULT_P_MAX,
            tol: DEFAULT_TOL,
        }
    }
}

/// The two-parameter slices of the paper's period maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    /// Horizontal axis `c1`, vertical axis `delta`, with `c2` tied to `c1`.
    C1DeltaTied,
    /// Horizontal axis `c1`, vertical axis `c2`, at fixed `delta`.
    C1C2 { delta: f64 },
}

impl Plane {
    pub fn params(&self, p1: f64, p2: f64) -> Result<Params, DynamicsError> {
        let p = match *self {
            Plane::C1DeltaTied => Params::new(p1, p1, p2),
            Plane::C1C2 { delta } => Params::new(p1, p2, delta),
        };
        Ok(p?)
    }

    pub fn axis_names(&self) -> (&'static str, &'static str) {
        match self {
            Plane::C1DeltaTied => ("c1", "delta"),
            Plane::C1C2 { .. } => ("c1", "c2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scan2dSpec {
    pub model: Model,
    pub plane: Plane,
    pub p1: CellAxis,
    pub p2: CellAxis,
    pub x0: State,
    pub burn_in: usize,
    pub keep: usize,
    pub p_max: usize,
    pub tol: f64,
}

impl Scan2dSpec {
    pub fn new(model: impl Into<Model>, plane: Plane, p1: CellAxis, p2: CellAxis, x0: State) -> Self {
        Scan2dSpec {
            model: model.into(),
            plane,
            p1,
            p2,
            x0,
            burn_in: DEFAULT_BURN_IN,
            keep: DEFAULT_KEEP,
            p_max: DEFAULT_P_MAX,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanSpec {
    OneD(Scan1dSpec),
    TwoD(Scan2dSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub p1: f64,
    /// Second coordinate for 2-D scans.
    pub p2: Option<f64>,
    pub verdict: PeriodVerdict,
    /// Trailing attractor states (1-D scans only).
    pub samples: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    /// 1-D: ordered by `delta`. 2-D: row-major with `p1` varying fastest.
    pub cells: Vec<ScanCell>,
}

fn run_cell(model: Model, p: &Params, x0: State, burn_in: usize, keep: usize, p_max: usize, tol: f64) -> (PeriodVerdict, Vec<State>) {
    let orbit = iterate(model, p, x0, burn_in, keep.max(4 * p_max));
    let verdict = detect_period(&orbit, p_max, tol).expect("keep covers the detection window");
    (verdict, orbit.samples)
}

/// Bifurcation scan over `delta`. Cells run in parallel and are merged in axis order.
pub fn scan_1d(spec: &Scan1dSpec) -> Result<ScanResult, DynamicsError> {
    Params::new(spec.c1, spec.c2, 1.0)?;
    if spec.delta.lo < 0.0 {
        return Err(DynamicsError::InvalidSpec("delta range must be positive".into()));
    }
    let cells = (0..spec.delta.n)
        .into_par_iter()
        .map(|i| {
            let d = spec.delta.center(i);
            let p = Params::new(spec.c1, spec.c2, d)?;
            let (verdict, samples) = run_cell(spec.model, &p, spec.x0, spec.burn_in, spec.keep, spec.p_max, spec.tol);
            let start = samples.len().saturating_sub(spec.samples_per_cell);
            Ok(ScanCell {
                p1: d,
                p2: None,
                verdict,
                samples: samples[start..].to_vec(),
            })
        })
        .collect::<Result<Vec<_>, DynamicsError>>()?;
    Ok(ScanResult {
        spec: ScanSpec::OneD(*spec),
        cells,
    })
}

/// Period map over a parameter plane, one orbit per cell center.
pub fn scan_2d(spec: &Scan2dSpec) -> Result<ScanResult, DynamicsError> {
    if spec.p1.lo < 0.0 || spec.p2.lo < 0.0 {
        return Err(DynamicsError::InvalidSpec("scan box must be positive".into()));
    }
    let (n1, n2) = (spec.p1.n, spec.p2.n);
    let cells = (0..n1 * n2)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (spec.p1.center(k % n1), spec.p2.center(k / n1));
            let p = spec.plane.params(a, b)?;
            let (verdict, _) = run_cell(spec.model, &p, spec.x0, spec.burn_in, spec.keep, spec.p_max, spec.tol);
            Ok(ScanCell {
                p1: a,
                p2: Some(b),
                verdict,
                samples: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>, DynamicsError>>()?;
    Ok(ScanResult {
        spec: ScanSpec::TwoD(*spec),
        cells,
    })
}

impl ScanResult {
    pub fn periods(&self) -> Vec<PeriodKind> {
        self.cells.iter().map(|c| c.verdict.kind).collect()
    }

    /// Estimated parameter of a `from -> to` period change along a 1-D scan: the midpoint
    /// between the first cell of period `to` and the last cell of period `from` before it.
    pub fn transition(&self, from: usize, to: usize) -> Option<f64> {
        let is = |c: &ScanCell, k: usize| c.verdict.kind == PeriodKind::Period(k);
        let first_from = self.cells.iter().position(|c| is(c, from))?;
        let j = first_from + self.cells[first_from..].iter().position(|c| is(c, to))?;
        let i = self.cells[..j].iter().rposition(|c| is(c, from))?;
        Some(0.5 * (self.cells[i].p1 + self.cells[j].p1))
    }

    /// Centers of the cells detected with period `k`.
    pub fn cells_with_period(&self, k: usize) -> Vec<f64> {
        self.cells
            .iter()
            .filter(|c| c.verdict.kind == PeriodKind::Period(k))
            .map(|c| c.p1)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelKind;

    #[test]
    fn cell_centers() {
        let a = CellAxis::new(1.0, 2.0, 4).unwrap();
        assert_eq!((a.center(0), a.center(3)), (1.125, 1.875));
        assert!(CellAxis::new(1.0, 2.0, 1).is_err());
        assert!(CellAxis::new(2.0, 1.0, 4).is_err());
    }

    #[test]
    fn degenerate_two_by_two() {
        let spec = Scan2dSpec::new(
            ModelKind::Gl,
            Plane::C1C2 { delta: 1.0 },
            CellAxis::new(1.4, 3.4, 2).unwrap(),
            CellAxis::new(4.0, 6.0, 2).unwrap(),
            State::new(0.2, 0.2),
        );
        let a = scan_2d(&spec).unwrap();
        assert_eq!(a.cells.len(), 4);
        assert_eq!(a, scan_2d(&spec).unwrap());
        assert_eq!((a.cells[1].p1, a.cells[1].p2), (2.9, Some(4.5)));
    }

    #[test]
    fn transition_locator() {
        let mut spec = Scan1dSpec::new(ModelKind::Gr, 0.5, 1.0, CellAxis::new(1.7, 2.1, 40).unwrap());
        spec.samples_per_cell = 4;
        let r = scan_1d(&spec).unwrap();
        assert_eq!(r.cells[0].verdict.kind, PeriodKind::Period(1));
        assert_eq!(r.cells[39].verdict.kind, PeriodKind::Period(2));
        let t = r.transition(1, 2).unwrap();
        assert!((t - 1.856).abs() < 0.02, "{t}");
        assert!(r.cells.iter().all(|c| c.samples.len() == 4));
    }
}
