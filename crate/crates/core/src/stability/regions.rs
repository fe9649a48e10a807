use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polys::{eval_exact, sign_at, Sign, StabilityPolynomials};
use super::tables::table_points;
use crate::model::ModelKind;

/// `n` equally spaced values `lo + (hi - lo) * i / n`, `i = 1..=n` (the open lower end
/// keeps every parameter positive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        self.lo + (self.hi - self.lo) * (i + 1) as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub c1: Axis,
    pub c2: Axis,
    pub delta: Axis,
}

impl Default for GridSpec {
    /// `(0, 20] x (0, 20] x (0, 5]` on a 50 x 50 x 40 grid.
    fn default() -> Self {
        GridSpec {
            c1: Axis { lo: 0.0, hi: 20.0, n: 50 },
            c2: Axis { lo: 0.0, hi: 20.0, n: 50 },
            delta: Axis { lo: 0.0, hi: 5.0, n: 40 },
        }
    }
}

impl GridSpec {
    pub fn len(&self) -> usize {
        self.c1.n * self.c2.n * self.delta.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point with linear index `k`, `delta` varying fastest.
    pub fn point(&self, k: usize) -> [f64; 3] {
        let kd = k % self.delta.n;
        let rest = k / self.delta.n;
        let k2 = rest % self.c2.n;
        let k1 = rest / self.c2.n;
        [self.c1.value(k1), self.c2.value(k2), self.delta.value(kd)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureWitness {
    pub point: [String; 3],
    pub qualifies: bool,
}

/// Result of testing "stable for `subset` implies stable for `superset`" on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub subset: ModelKind,
    pub superset: ModelKind,
    pub points: usize,
    pub counterexamples: Vec<[f64; 3]>,
    pub witness_count: usize,
    /// The first few grid witnesses, in grid order.
    pub witnesses: Vec<[f64; 3]>,
    /// Published sample points recorded as stable for `superset` only, re-checked exactly.
    pub fixture_witnesses: Vec<FixtureWitness>,
}

const KEPT_WITNESSES: usize = 20;

fn fixture_table(a: ModelKind, b: ModelKind) -> Option<&'static str> {
    match (a, b) {
        (ModelKind::Gr, ModelKind::Gb) => Some("gr-gb"),
        (ModelKind::Gl, ModelKind::Gb) => Some("gl-gb"),
        (ModelKind::Gr, ModelKind::Gl) => Some("gr-gl"),
        _ => None,
    }
}

/// Sign-samples the two governing polynomials over the grid. Points are evaluated in
/// parallel and merged in grid order.
pub fn region_inclusion(subset: ModelKind, superset: ModelKind, grid: &GridSpec) -> InclusionReport {
    let polys = StabilityPolynomials::get();
    let pa = polys.governing(subset);
    let pb = polys.governing(superset);
    let classes: Vec<(bool, bool)> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let [c1, c2, d] = grid.point(k);
            let sa = sign_at(pa, c1, c2, d) == Sign::Negative;
            let sb = sign_at(pb, c1, c2, d) == Sign::Negative;
            (sa, sb)
        })
        .collect();
    let mut counterexamples = Vec::new();
    let mut witnesses = Vec::new();
    let mut witness_count = 0;
    for (k, &(sa, sb)) in classes.iter().enumerate() {
        if sa && !sb {
            counterexamples.push(grid.point(k));
        }
        if sb && !sa {
            witness_count += 1;
            if witnesses.len() < KEPT_WITNESSES {
                witnesses.push(grid.point(k));
            }
        }
    }
    let fixture_witnesses = fixture_table(subset, superset)
        .map(|name| {
            table_points(name)
                .into_iter()
                .filter_map(|p| {
                    let va = eval_exact(pa, &p[0], &p[1], &p[2]);
                    let vb = eval_exact(pb, &p[0], &p[1], &p[2]);
                    let a_stable = Sign::of_rational(&va) == Sign::Negative;
                    let b_stable = Sign::of_rational(&vb) == Sign::Negative;
                    (b_stable && !a_stable).then(|| FixtureWitness {
                        point: [p[0].to_string(), p[1].to_string(), p[2].to_string()],
                        qualifies: true,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    InclusionReport {
        subset,
        superset,
        points: grid.len(),
        counterexamples,
        witness_count,
        witnesses,
        fixture_witnesses,
    }
}

/// Stability under linear costs `C_i = c_i x_i`: `(GR-type, GB-type)`.
///
/// GR-type: `delta (c1 + c2) < 4`. GB-type, with the bound multiplied through by its
/// denominator: `delta (4 c1 c2 - (c2 - c1)^2) < 4 (c1 + c2)` when `c1 <= c2/3` or
/// `c1 >= 3 c2`, and `delta (c2 - c1)^2 < 2 (c1 + c2)` otherwise.
pub fn linear_cost_conditions(c1: f64, c2: f64, delta: f64) -> (bool, bool) {
    let gr = delta * (c1 + c2) - 4.0 < 0.0;
    let diff2 = (c2 - c1) * (c2 - c1);
    let gb = if 3.0 * c1 <= c2 || c1 >= 3.0 * c2 {
        delta * (4.0 * c1 * c2 - diff2) < 4.0 * (c1 + c2)
    } else {
        delta * diff2 < 2.0 * (c1 + c2)
    };
    (gr, gb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let g = GridSpec::default();
        assert_eq!(g.len(), 100_000);
        assert_eq!(g.point(0), [0.4, 0.4, 0.125]);
        assert_eq!(g.point(g.len() - 1), [20.0, 20.0, 5.0]);
    }

    #[test]
    fn reflexive_inclusion_is_empty() {
        let g = GridSpec {
            c1: Axis { lo: 0.0, hi: 4.0, n: 8 },
            c2: Axis { lo: 0.0, hi: 4.0, n: 8 },
            delta: Axis { lo: 0.0, hi: 4.0, n: 8 },
        };
        let r = region_inclusion(ModelKind::Gl, ModelKind::Gl, &g);
        assert!(r.counterexamples.is_empty() && r.witness_count == 0);
    }

    #[test]
    fn linear_cost_examples() {
        assert_eq!(linear_cost_conditions(1.0, 1.0, 1.0), (true, true));
        assert_eq!(linear_cost_conditions(1.0, 1.0, 3.0), (false, true));
        // the two branch bounds agree on c1 = c2/3
        let (c1, c2): (f64, f64) = (1.0, 3.0);
        let b1 = 4.0 * (c1 + c2) / (4.0 * c1 * c2 - (c2 - c1) * (c2 - c1));
        let b2 = 2.0 * (c1 + c2) / ((c2 - c1) * (c2 - c1));
        assert!((b1 - b2).abs() < 1e-15);
    }
}
