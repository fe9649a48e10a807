use duopoly_core::model::{self, symbolic, LmaReading, Model, ModelKind, Params, State};
use duopoly_core::sym::Var;
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn arb_params() -> impl Strategy<Value = Params> {
    (log_uniform(0.05, 20.0), log_uniform(0.05, 20.0), 0.05f64..5.0).prop_map(|(a, b, d)| Params::new(a, b, d).unwrap())
}

fn models() -> [Model; 4] {
    [
        ModelKind::Gr.into(),
        ModelKind::Gb.into(),
        ModelKind::Gl.into(),
        Model::with_reading(ModelKind::Gl, LmaReading::PrintedOrder),
    ]
}

/// `None` when a perturbed step leaves the positive orthant.
fn fd_jacobian(m: Model, p: &Params, st: &State) -> Option<[[f64; 2]; 2]> {
    let h = 1e-6 * (1.0 + st.max_norm());
    let f = |s: State| model::step_model(m, p, &s).ok();
    let cols = [
        (f(State::new(st.x1 + h, st.x2))?, f(State::new(st.x1 - h, st.x2))?),
        (f(State::new(st.x1, st.x2 + h))?, f(State::new(st.x1, st.x2 - h))?),
    ];
    let mut j = [[0.0; 2]; 2];
    for (c, (a, b)) in cols.iter().enumerate() {
        j[0][c] = (a.x1 - b.x1) / (2.0 * h);
        j[1][c] = (a.x2 - b.x2) / (2.0 * h);
    }
    Some(j)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn equilibrium_is_fixed_by_every_map(p in arb_params()) {
        let eq = model::equilibrium(p.c1, p.c2).unwrap();
        let st = eq.state();
        prop_assert!(eq.residuals.0 <= 1e-12 && eq.residuals.1 <= 1e-12 * (1.0 + p.c2));
        for m in [ModelKind::Gr, ModelKind::Gb, ModelKind::Gl] {
            let next = model::step(m, &p, &st).unwrap();
            prop_assert!(next.dist_max(&st) <= 1e-12 * (1.0 + st.max_norm()), "{} moved {:?} -> {:?}", m, st, next);
        }
    }

    #[test]
    fn reduced_gr_map_is_the_first_coordinate(p in arb_params(), x1 in log_uniform(0.05, 2.0)) {
        let st = State::new(x1, model::best_response_r2(x1, p.c2).unwrap());
        match model::step(ModelKind::Gr, &p, &st) {
            Ok(next) => {
                prop_assert_eq!(model::gr_reduced_step(&p, x1).unwrap(), next.x1);
                prop_assert_eq!(next.x2, model::best_response_r2(next.x1, p.c2).unwrap());
            }
            Err(_) => prop_assert!(model::gr_reduced_step(&p, x1).is_err()),
        }
    }

    #[test]
    fn dq_matches_finite_difference(p in arb_params(), x1 in log_uniform(0.05, 2.0)) {
        let h = 1e-6 * x1;
        let (a, b) = (model::gr_reduced_step(&p, x1 + h), model::gr_reduced_step(&p, x1 - h));
        prop_assume!(a.is_ok() && b.is_ok());
        let fd = (a.unwrap() - b.unwrap()) / (2.0 * h);
        let st = State::new(x1, model::best_response_r2(x1, p.c2).unwrap());
        let dq = model::dq_gr(&p, &st).unwrap();
        prop_assert!((fd - dq).abs() <= 1e-5 * (1.0 + dq.abs() + p.delta), "fd {} dq {}", fd, dq);
    }

    #[test]
    fn jacobians_match_finite_differences(p in arb_params(), x1 in 0.1f64..1.5, x2 in 0.1f64..1.5) {
        let st = State::new(x1, x2);
        for m in &models()[1..] {
            let Some(fd) = fd_jacobian(*m, &p, &st) else { continue };
            let j = model::jacobian(*m, &p, &st).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    let scale = 1.0 + j[r][c].abs() + p.delta * (1.0 + p.c1);
                    prop_assert!((j[r][c] - fd[r][c]).abs() <= 1e-5 * scale, "{:?} [{}][{}] {} vs {}", m, r, c, j[r][c], fd[r][c]);
                }
            }
        }
    }

    #[test]
    fn symbolic_and_numeric_jacobians_agree(p in arb_params(), x1 in 0.1f64..1.5, x2 in 0.1f64..1.5) {
        let st = State::new(x1, x2);
        let asg = [(Var::X1, x1), (Var::X2, x2), (Var::C1, p.c1), (Var::C2, p.c2), (Var::Delta, p.delta)];
        let gl = symbolic::jacobian(ModelKind::Gl).unwrap();
        let j = model::jacobian(ModelKind::Gl.into(), &p, &st).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let v = gl[r][c].eval_f64(&asg);
                prop_assert!((v - j[r][c]).abs() <= 1e-10 * (1.0 + v.abs()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn best_response_agrees_with_bisection(x1 in log_uniform(1e-3, 1e3), c2 in log_uniform(1e-3, 1e3)) {
        let closed = model::best_response_r2_closed(x1, c2);
        let polished = model::best_response_r2(x1, c2).unwrap();
        let bisect = model::best_response_r2_bisect(x1, c2).unwrap();
        prop_assert!((closed - bisect).abs() <= 1e-10 * (1.0 + bisect), "closed {} bisect {}", closed, bisect);
        prop_assert!((polished - bisect).abs() <= 1e-12 * (1.0 + bisect));
        prop_assert!(polished > 0.0);
        // residual of the cubic relative to its terms
        let s = x1 + polished;
        prop_assert!(model::f2(x1, polished, c2).abs() <= 1e-12 * (x1 + 2.0 * c2 * polished * s * s));
    }

    #[test]
    fn implicit_derivative_matches_finite_difference(x1 in log_uniform(1e-2, 1e2), c2 in log_uniform(1e-2, 1e2)) {
        let h = 1e-6 * x1;
        let fd = (model::best_response_r2(x1 + h, c2).unwrap() - model::best_response_r2(x1 - h, c2).unwrap()) / (2.0 * h);
        let d = model::dr2_dx1(x1, model::best_response_r2(x1, c2).unwrap(), c2).unwrap();
        prop_assert!((fd - d).abs() <= 1e-6 * (1.0 + d.abs()), "fd {} exact {}", fd, d);
    }
}
