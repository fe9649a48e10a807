use duopoly_core::sym::{exact_divide, int, rat, rational_to_f64, sylvester_resultant, MPoly, Var};
use nalgebra::DMatrix;
use num_rational::BigRational;
use proptest::prelude::*;

fn poly_from(terms: &[(i64, u16, u16, u16)]) -> MPoly {
    let t: Vec<(i64, Vec<(Var, u16)>)> = terms
        .iter()
        .map(|&(k, a, b, c)| (k, vec![(Var::X1, a), (Var::X2, b), (Var::C1, c)]))
        .collect();
    let refs: Vec<(i64, &[(Var, u16)])> = t.iter().map(|(k, e)| (*k, e.as_slice())).collect();
    MPoly::from_i64_terms(&refs)
}

fn arb_poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((-9i64..=9, 0u16..3, 0u16..3, 0u16..3), 0..6).prop_map(|t| poly_from(&t))
}

fn arb_nonzero() -> impl Strategy<Value = MPoly> {
    arb_poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// Univariate in x1 with nonzero leading coefficient, degree 1..=4.
fn arb_univariate() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=4).prop_flat_map(|d| {
        (prop::collection::vec(-6i64..=6, d), prop_oneof![-5i64..=-1, 1i64..=5]).prop_map(|(mut low, lead)| {
            low.push(lead);
            low
        })
    })
}

fn univariate(coeffs: &[i64]) -> MPoly {
    let t: Vec<(i64, u16, u16, u16)> = coeffs.iter().enumerate().map(|(i, &k)| (k, i as u16, 0, 0)).collect();
    poly_from(&t)
}

fn arb_point() -> impl Strategy<Value = [BigRational; 3]> {
    prop::array::uniform3((-20i64..=20, 1i64..=7).prop_map(|(n, d)| rat(n, d)))
}

fn assignment(pt: &[BigRational; 3]) -> [(Var, BigRational); 3] {
    [(Var::X1, pt[0].clone()), (Var::X2, pt[1].clone()), (Var::C1, pt[2].clone())]
}

/// Complex roots through the eigenvalues of the companion matrix.
fn roots(coeffs: &[i64]) -> Vec<nalgebra::Complex<f64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d] as f64;
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -(coeffs[i] as f64) / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn horner(coeffs: &[i64], z: nalgebra::Complex<f64>) -> nalgebra::Complex<f64> {
    coeffs.iter().rev().fold(nalgebra::Complex::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert!(a.sub_ref(&a).is_zero());
        prop_assert_eq!(a.mul_ref(&MPoly::one()), a.clone());
        prop_assert!(a.mul_ref(&MPoly::zero()).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), pt in arb_point()) {
        let asg = assignment(&pt);
        let (ea, eb) = (a.eval(&asg).unwrap(), b.eval(&asg).unwrap());
        prop_assert_eq!(a.add_ref(&b).eval(&asg).unwrap(), &ea + &eb);
        prop_assert_eq!(a.mul_ref(&b).eval(&asg).unwrap(), &ea * &eb);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in arb_poly(), b in arb_nonzero()) {
        prop_assert_eq!(exact_divide(&a.mul_ref(&b), &b).unwrap(), Some(a.clone()));
        if b.total_degree() > Some(0) {
            let off = a.mul_ref(&b).add_ref(&MPoly::one());
            prop_assert_eq!(exact_divide(&off, &b).unwrap(), None);
        }
    }

    #[test]
    fn derivative_rules(a in arb_poly(), b in arb_poly()) {
        for v in [Var::X1, Var::X2, Var::C1] {
            let lhs = a.mul_ref(&b).derivative(v);
            let rhs = a.derivative(v).mul_ref(&b).add_ref(&a.mul_ref(&b.derivative(v)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(a in arb_poly(), x in 0.2f64..2.0, y in 0.2f64..2.0, c in 0.2f64..2.0) {
        let h = 1e-5;
        let at = |x1: f64| a.eval_f64(&[(Var::X1, x1), (Var::X2, y), (Var::C1, c)]);
        let fd = (at(x + h).0 - at(x - h).0) / (2.0 * h);
        let (exact, scale) = a.derivative(Var::X1).eval_f64(&[(Var::X1, x), (Var::X2, y), (Var::C1, c)]);
        prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + scale + at(x).1), "fd {} exact {}", fd, exact);
    }

    #[test]
    fn display_round_trips(a in arb_poly()) {
        let back: MPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn resultant_is_multiplicative(f in arb_univariate(), g in arb_univariate(), h in arb_univariate()) {
        let (f, g, h) = (univariate(&f), univariate(&g), univariate(&h));
        let lhs = sylvester_resultant(&f.mul_ref(&g), &h, Var::X1).unwrap();
        let rhs = sylvester_resultant(&f, &h, Var::X1).unwrap().mul_ref(&sylvester_resultant(&g, &h, Var::X1).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_matches_root_product(f in arb_univariate(), g in arb_univariate()) {
        // res(f, g) = lc(f)^deg g * prod g(alpha) over the roots alpha of f
        let r = sylvester_resultant(&univariate(&f), &univariate(&g), Var::X1).unwrap();
        let exact = rational_to_f64(&r.as_constant().unwrap());
        let lead = *f.last().unwrap() as f64;
        let prod = roots(&f).into_iter().fold(nalgebra::Complex::new(lead.powi(g.len() as i32 - 1), 0.0), |acc, z| acc * horner(&g, z));
        prop_assert!((prod.re - exact).abs() <= 1e-8 * (1.0 + exact.abs()), "{} vs {}", prod.re, exact);
        prop_assert!(prod.im.abs() <= 1e-8 * (1.0 + exact.abs()));
    }

    #[test]
    fn shared_root_forces_zero_resultant(f in arb_univariate(), g in arb_univariate(), r in -4i64..=4) {
        let lin = univariate(&[-r, 1]);
        let (f, g) = (univariate(&f).mul_ref(&lin), univariate(&g).mul_ref(&lin));
        prop_assert!(sylvester_resultant(&f, &g, Var::X1).unwrap().is_zero());
    }

    #[test]
    fn resultant_commutes_with_specialisation(a in arb_nonzero(), b in arb_nonzero(), c in -6i64..=6) {
        prop_assume!(a.contains_var(Var::X1) && b.contains_var(Var::X1));
        let fix = [(Var::C1, int(c))];
        let (sa, sb) = (a.partial_eval(&fix), b.partial_eval(&fix));
        prop_assume!(sa.degree_in(Var::X1) == a.degree_in(Var::X1) && sb.degree_in(Var::X1) == b.degree_in(Var::X1));
        let full = sylvester_resultant(&a, &b, Var::X1).unwrap().partial_eval(&fix);
        prop_assert_eq!(full, sylvester_resultant(&sa, &sb, Var::X1).unwrap());
    }
}
