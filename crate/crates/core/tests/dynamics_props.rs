use duopoly_core::dynamics::{
    closes, detect_period, find_flip_delta, iterate, lyapunov_gr, scan_1d, scan_2d, CellAxis, PeriodKind, Plane, Scan1dSpec,
    Scan2dSpec, DEFAULT_BURN_IN, DEFAULT_KEEP, DEFAULT_P_MAX, DEFAULT_TOL,
};
use duopoly_core::model::{ModelKind, Params, State};
use duopoly_core::stability::{eval_stability_poly, sign_at, Sign, StabilityPolynomials};
use proptest::prelude::*;

fn period_at(kind: ModelKind, c1: f64, c2: f64, d: f64, x0: State) -> PeriodKind {
    let o = iterate(kind, &Params::new(c1, c2, d).unwrap(), x0, DEFAULT_BURN_IN, DEFAULT_KEEP);
    detect_period(&o, DEFAULT_P_MAX, DEFAULT_TOL).unwrap().kind
}

#[test]
fn scans_are_independent_of_worker_count() {
    let mut spec = Scan1dSpec::new(ModelKind::Gr, 0.5, 1.0, CellAxis::new(2.2, 2.5, 24).unwrap());
    spec.samples_per_cell = 16;
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| scan_1d(&spec).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a, b);
    let bits = |r: &duopoly_core::dynamics::ScanResult| -> Vec<u64> {
        r.cells.iter().flat_map(|c| c.samples.iter().flat_map(|s| [s.x1.to_bits(), s.x2.to_bits()])).collect()
    };
    assert_eq!(bits(&a), bits(&b));
    let plane = Scan2dSpec::new(
        ModelKind::Gl,
        Plane::C1C2 { delta: 1.0 },
        CellAxis::new(1.4, 3.4, 5).unwrap(),
        CellAxis::new(4.0, 6.0, 5).unwrap(),
        State::new(0.2, 0.2),
    );
    let run2 = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| scan_2d(&plane).unwrap())
    };
    assert_eq!(run2(1), run2(3));
}

#[test]
fn flip_thresholds_are_ordered() {
    let d = |k| find_flip_delta(k, 0.5, 1.0, (1.0, 3.0)).unwrap();
    let (gr, gl, gb) = (d(ModelKind::Gr), d(ModelKind::Gl), d(ModelKind::Gb));
    assert!(gr < gl && gl < gb, "{gr} {gl} {gb}");
}

#[test]
fn symmetric_gr_flip_has_a_closed_form() {
    // c1 = c2 = c turns R_GR into 16 c^2 (4 u^2 - 6 u - 4) with u = c delta^2, so delta* = sqrt(2 / c)
    for c in [0.5, 2.0, 7.0] {
        let d = find_flip_delta(ModelKind::Gr, c, c, (0.01, 10.0)).unwrap();
        assert!((d - (2.0f64 / c).sqrt()).abs() < 1e-8, "c = {c}: {d}");
    }
}

#[test]
fn negative_certificate_cells_settle_on_the_equilibrium() {
    for kind in ModelKind::ALL {
        let mut spec = Scan1dSpec::new(kind, 0.5, 1.0, CellAxis::new(0.1, 2.5, 120).unwrap());
        spec.samples_per_cell = 1;
        let r = scan_1d(&spec).unwrap();
        let mut checked = 0;
        for c in &r.cells {
            let v = eval_stability_poly(kind, &Params::new(0.5, 1.0, c.p1).unwrap()).governing.relative();
            if v < -1e-4 {
                checked += 1;
                assert_eq!(c.verdict.kind, PeriodKind::Period(1), "{kind} at delta {}", c.p1);
            }
        }
        assert!(checked > 50);
    }
}

#[test]
fn gr_period_map_boundary_follows_the_certificate() {
    let spec = Scan2dSpec::new(
        ModelKind::Gr,
        Plane::C1DeltaTied,
        CellAxis::new(1.0, 2.0, 20).unwrap(),
        CellAxis::new(1.0, 3.0, 20).unwrap(),
        State::new(0.1, 0.1),
    );
    let r = scan_2d(&spec).unwrap();
    let poly = &StabilityPolynomials::get().r_gr;
    let stable: Vec<bool> = r.cells.iter().map(|c| sign_at(poly, c.p1, c.p1, c.p2.unwrap()) == Sign::Negative).collect();
    let n = 20;
    let mut boundary = 0;
    for (k, c) in r.cells.iter().enumerate() {
        let (i, j) = (k % n, k / n);
        let near = [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)].iter().any(|&(di, dj)| {
            let (a, b) = (i as i64 + di, j as i64 + dj);
            (0..n as i64).contains(&a) && (0..n as i64).contains(&b) && stable[(b * n as i64 + a) as usize] != stable[k]
        });
        if near {
            boundary += 1;
            continue;
        }
        let period_one = c.verdict.kind == PeriodKind::Period(1);
        assert_eq!(period_one, stable[k], "cell ({}, {})", c.p1, c.p2.unwrap());
    }
    assert!(boundary > 0 && boundary < r.cells.len() / 2);
}

#[test]
fn gl_plane_doubles_along_both_axes() {
    let spec = Scan2dSpec::new(
        ModelKind::Gl,
        Plane::C1C2 { delta: 1.0 },
        CellAxis::new(1.4, 3.4, 10).unwrap(),
        CellAxis::new(4.0, 6.0, 40).unwrap(),
        State::new(0.2, 0.2),
    );
    let r = scan_2d(&spec).unwrap();
    let leading = |cells: Vec<PeriodKind>| -> Vec<usize> {
        let mut seq: Vec<usize> = Vec::new();
        for k in cells {
            match k {
                PeriodKind::Period(p) => {
                    if seq.last() != Some(&p) {
                        seq.push(p);
                    }
                }
                _ => break,
            }
        }
        seq
    };
    // along c1 at the lowest c2 row
    let row: Vec<PeriodKind> = (0..10).map(|i| r.cells[i].verdict.kind).collect();
    assert_eq!(leading(row), vec![1, 2, 4]);
    // along c2 at c1 = 2.7
    let col: Vec<PeriodKind> = (0..40).map(|j| r.cells[j * 10 + 6].verdict.kind).collect();
    let seq = leading(col);
    assert!(seq.len() >= 2 && seq.windows(2).all(|w| w[1] == 2 * w[0]), "{seq:?}");
}

#[test]
fn lyapunov_sign_tracks_periodicity() {
    let x0 = State::new(0.5, 0.5);
    for i in 0..50 {
        let d = 1.5 + (i as f64 + 0.5) * 0.02;
        let k = period_at(ModelKind::Gr, 0.5, 1.0, d, x0);
        if period_at(ModelKind::Gr, 0.5, 1.0, d - 1e-3, x0) != k || period_at(ModelKind::Gr, 0.5, 1.0, d + 1e-3, x0) != k {
            continue;
        }
        let l = lyapunov_gr(&Params::new(0.5, 1.0, d).unwrap(), 0.5, 5000).unwrap().exponent;
        match k {
            PeriodKind::Period(_) => assert!(l < 0.0, "delta {d}: period {k:?}, exponent {l}"),
            PeriodKind::Aperiodic => assert!(l > 0.0, "delta {d}: aperiodic, exponent {l}"),
            PeriodKind::Diverged => panic!("diverged at {d}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn detected_periods_are_minimal(d in 1.5f64..2.6, gl in any::<bool>()) {
        let kind = if gl { ModelKind::Gl } else { ModelKind::Gr };
        let o = iterate(kind, &Params::new(0.5, 1.0, d).unwrap(), State::new(0.5, 0.5), DEFAULT_BURN_IN, DEFAULT_KEEP);
        let v = detect_period(&o, DEFAULT_P_MAX, DEFAULT_TOL).unwrap();
        if let PeriodKind::Period(k) = v.kind {
            prop_assert!(closes(&o.samples, k, 4 * DEFAULT_P_MAX, DEFAULT_TOL));
            for q in (1..k).filter(|q| k % q == 0) {
                prop_assert!(!closes(&o.samples, q, 4 * DEFAULT_P_MAX, DEFAULT_TOL), "period {} also closes at {}", k, q);
            }
        }
    }
}
