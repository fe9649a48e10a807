use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{iterate, DynamicsError, Termination};
use crate::model::{Model, Params, State};

/// Default single-linkage gap as a fraction of the attractor's bounding-box diagonal.
pub const DEFAULT_PIECE_GAP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub points: Vec<State>,
    /// Connected pieces under single linkage at `gap * diagonal`.
    pub pieces: usize,
    /// Points that differ by more than `1e-6 (1 + |x|)`; equals the period on a cycle.
    pub distinct: usize,
    pub gap: f64,
    pub diagonal: f64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Number of single-linkage clusters with Euclidean gap `eps`.
///
/// Points are hashed into square buckets of side `eps / sqrt 2`, so a bucket is a
/// clique and only buckets at most two apart need pairwise checks.
pub fn count_pieces(points: &[State], eps: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    if eps.is_nan() || eps <= 0.0 {
        let mut v: Vec<(u64, u64)> = points.iter().map(|s| (s.x1.to_bits(), s.x2.to_bits())).collect();
        v.sort_unstable();
        v.dedup();
        return v.len();
    }
    let side = eps / std::f64::consts::SQRT_2;
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, s) in points.iter().enumerate() {
        let key = ((s.x1 / side).floor() as i64, (s.x2 / side).floor() as i64);
        buckets.entry(key).or_default().push(i);
    }
    let mut uf = UnionFind((0..points.len()).collect());
    for members in buckets.values() {
        for &j in &members[1..] {
            uf.union(members[0], j);
        }
    }
    let mut keys: Vec<(i64, i64)> = buckets.keys().copied().collect();
    keys.sort_unstable();
    let eps2 = eps * eps;
    for &(a, b) in &keys {
        for da in -2..=2 {
            for db in -2..=2 {
                let other = (a + da, b + db);
                if other <= (a, b) {
                    continue;
                }
                let (Some(p), Some(q)) = (buckets.get(&(a, b)), buckets.get(&other)) else {
                    continue;
                };
                if uf.find(p[0]) == uf.find(q[0]) {
                    continue;
                }
                'pairs: for &i in p {
                    for &j in q {
                        let (dx, dy) = (points[i].x1 - points[j].x1, points[i].x2 - points[j].x2);
                        if dx * dx + dy * dy <= eps2 {
                            uf.union(i, j);
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..points.len()).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

fn bounding_diagonal(points: &[State]) -> f64 {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for s in points {
        lo = [lo[0].min(s.x1), lo[1].min(s.x2)];
        hi = [hi[0].max(s.x1), hi[1].max(s.x2)];
    }
    (hi[0] - lo[0]).hypot(hi[1] - lo[1])
}

/// Trailing orbit points and their piece count.
pub fn phase_portrait(model: impl Into<Model>, p: &Params, x0: State, burn_in: usize, keep: usize, gap: f64) -> Result<PhasePortrait, DynamicsError> {
    if keep == 0 {
        return Err(DynamicsError::InvalidSpec("keep must be at least 1".into()));
    }
    let orbit = iterate(model, p, x0, burn_in, keep);
    if let Termination::Diverged(n) = orbit.terminated {
        return Err(DynamicsError::Diverged(n));
    }
    let points = orbit.samples;
    let diagonal = bounding_diagonal(&points);
    let scale = 1.0 + points.iter().map(State::max_norm).fold(0.0, f64::max);
    let pieces = if diagonal > 0.0 { count_pieces(&points, gap * diagonal) } else { 1 };
    let distinct = count_pieces(&points, 1e-6 * scale);
    Ok(PhasePortrait {
        points,
        pieces,
        distinct,
        gap,
        diagonal,
    })
}
