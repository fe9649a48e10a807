use duopoly_core::model::{ModelKind, Params};
use duopoly_core::stability::{
    classify, jury_test, linear_cost_conditions, numeric_stability, region_inclusion, sign_at, Axis, GridSpec, Sign,
    StabilityPolynomials, Verdict,
};
use nalgebra::Matrix2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Smallest sign change of the governing polynomial in delta, refined by bisection.
fn first_certificate_root(kind: ModelKind, c1: f64, c2: f64) -> f64 {
    let poly = StabilityPolynomials::get().governing(kind);
    let mut lo = 1e-3;
    let s0 = sign_at(poly, c1, c2, lo);
    while sign_at(poly, c1, c2, lo * 1.05) == s0 {
        lo *= 1.05;
        assert!(lo < 1e4, "no root for ({c1}, {c2})");
    }
    let mut hi = lo * 1.05;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if sign_at(poly, c1, c2, mid) == s0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The flip margin (`1 + DQ` or `CD2`) as a function of delta.
fn flip_margin(kind: ModelKind, c1: f64, c2: f64, d: f64) -> f64 {
    numeric_stability(kind, &Params::new(c1, c2, d).unwrap()).unwrap().0[1]
}

#[test]
fn stability_is_lost_only_through_a_flip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (c1, c2) = (log_uniform(&mut rng, 0.05, 20.0), log_uniform(&mut rng, 0.05, 20.0));
        for kind in ModelKind::ALL {
            let d = first_certificate_root(kind, c1, c2);
            let (m, _, _) = numeric_stability(kind, &Params::new(c1, c2, d).unwrap()).unwrap();
            let flip = m[1];
            let others: Vec<f64> = m.iter().enumerate().filter(|(i, _)| *i != 1).map(|(_, v)| *v).collect();
            assert!(flip.abs() < 1e-6, "{kind} ({c1}, {c2}, {d}): flip margin {flip}");
            assert!(others.iter().all(|&v| v > 1e-4), "{kind} ({c1}, {c2}, {d}): margins {m:?}");
        }
    }
}

#[test]
fn numeric_flip_points_zero_the_certificate() {
    // bisection on the numeric flip margin alone, then the certificate must vanish there
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let (c1, c2) = (log_uniform(&mut rng, 0.05, 20.0), log_uniform(&mut rng, 0.05, 20.0));
        for kind in ModelKind::ALL {
            let (mut lo, mut hi) = (1e-3, 1e-3);
            while flip_margin(kind, c1, c2, hi) > 0.0 {
                lo = hi;
                hi *= 1.05;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if flip_margin(kind, c1, c2, mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let d = 0.5 * (lo + hi);
            let root = first_certificate_root(kind, c1, c2);
            assert!((d - root).abs() <= 1e-7 * (1.0 + root), "{kind} ({c1}, {c2}): numeric {d} certificate {root}");
        }
    }
}

#[test]
fn certificate_agrees_with_numeric_tests() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2000 {
        let p = Params::new(log_uniform(&mut rng, 0.01, 20.0), log_uniform(&mut rng, 0.01, 20.0), rng.gen_range(0.01..5.0)).unwrap();
        for kind in ModelKind::ALL {
            let r = classify(kind, &p).unwrap();
            assert!(r.agreement, "{kind} {p:?}: {r:?}");
        }
    }
}

#[test]
fn linear_cost_gr_condition_implies_gb() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10_000 {
        let (c1, c2, d) = (log_uniform(&mut rng, 0.01, 50.0), log_uniform(&mut rng, 0.01, 50.0), log_uniform(&mut rng, 0.01, 50.0));
        let (gr, gb) = linear_cost_conditions(c1, c2, d);
        assert!(!gr || gb, "({c1}, {c2}, {d})");
    }
}

#[test]
fn inclusions_hold_on_a_coarse_grid() {
    let axis = |hi| Axis { lo: 0.0, hi, n: 12 };
    let grid = GridSpec { c1: axis(20.0), c2: axis(20.0), delta: axis(5.0) };
    for (a, b) in [(ModelKind::Gr, ModelKind::Gl), (ModelKind::Gl, ModelKind::Gb), (ModelKind::Gr, ModelKind::Gb)] {
        let r = region_inclusion(a, b, &grid);
        assert!(r.counterexamples.is_empty(), "{a} -> {b}: {:?}", r.counterexamples);
    }
}

#[test]
fn sign_fallback_agrees_with_exact_signs() {
    let s = StabilityPolynomials::get();
    // on c2 = 9 c1 the delta-free part of R_GR vanishes; small delta stays negative
    for c1 in [0.125, 0.5, 1.0, 3.0] {
        assert_eq!(sign_at(&s.r_gr, c1, 9.0 * c1, 0.0), Sign::Zero);
        assert_eq!(sign_at(&s.r_gr, c1, 9.0 * c1, 1e-3), Sign::Negative);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn jury_matches_spectral_radius(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0) {
        let r = jury_test(&[[a, b], [c, d]]);
        let radius = Matrix2::new(a, b, c, d).complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assume!(r.verdict != Verdict::Marginal && (radius - 1.0).abs() > 1e-9);
        prop_assert_eq!(r.verdict == Verdict::Stable, radius < 1.0);
    }
}
