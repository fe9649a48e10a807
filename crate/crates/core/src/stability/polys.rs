use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::model::{ModelKind, Params};
use crate::sym::{MPoly, Var};

/// The four sign-determining polynomials in `(c1, c2, delta)`, transcribed term for term.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityPolynomials {
    pub r_gr: MPoly,
    pub r_gl1: MPoly,
    pub r_gl2: MPoly,
    pub r_gb: MPoly,
}

type Term = (i64, u16, u16, u16);

fn build(terms: &[Term]) -> MPoly {
    let t: Vec<(i64, Vec<(Var, u16)>)> = terms
        .iter()
        .map(|&(k, a, b, d)| (k, vec![(Var::C1, a), (Var::C2, b), (Var::Delta, d)]))
        .collect();
    let refs: Vec<(i64, &[(Var, u16)])> = t.iter().map(|(k, e)| (*k, e.as_slice())).collect();
    MPoly::from_i64_terms(&refs)
}

// (coefficient, c1 exponent, c2 exponent, delta exponent)
const R_GR: &[Term] = &[
    (64, 3, 1, 4),
    (-96, 2, 1, 2),
    (-81, 2, 0, 0),
    (18, 1, 1, 0),
    (-1, 0, 2, 0),
];

const R_GL1: &[Term] = &[
    (64, 7, 1, 4),
    (-672, 6, 2, 4),
    (1796, 5, 3, 4),
    (-168, 4, 4, 4),
    (4, 3, 5, 4),
    (384, 6, 1, 2),
    (-400, 5, 2, 2),
    (-2136, 4, 3, 2),
    (96, 3, 4, 2),
    (8, 2, 5, 2),
    (-256, 6, 0, 0),
    (544, 5, 1, 0),
    (-353, 4, 2, 0),
    (100, 3, 3, 0),
    (-38, 2, 4, 0),
    (4, 1, 5, 0),
    (-1, 0, 6, 0),
];

const R_GL2: &[Term] = &[
    (64, 7, 0, 4),
    (-416, 6, 1, 4),
    (708, 5, 2, 4),
    (-104, 4, 3, 4),
    (4, 3, 4, 4),
    (48, 5, 1, 2),
    (232, 4, 2, 2),
    (-736, 3, 3, 2),
    (-56, 2, 4, 2),
    (-81, 4, 1, 0),
    (180, 3, 2, 0),
    (-118, 2, 3, 0),
    (20, 1, 4, 0),
    (-1, 0, 5, 0),
];

const R_GB: &[Term] = &[
    (4, 7, 1, 4),
    (-272, 6, 2, 4),
    (4632, 5, 3, 4),
    (-272, 4, 4, 4),
    (4, 3, 5, 4),
    (264, 6, 1, 2),
    (-2464, 5, 2, 2),
    (-6096, 4, 3, 2),
    (96, 3, 4, 2),
    (8, 2, 5, 2),
    (-81, 6, 0, 0),
    (342, 5, 1, 0),
    (-559, 4, 2, 0),
    (436, 3, 3, 0),
    (-159, 2, 4, 0),
    (22, 1, 5, 0),
    (-1, 0, 6, 0),
];

impl StabilityPolynomials {
    pub fn get() -> &'static StabilityPolynomials {
        static CELL: OnceLock<StabilityPolynomials> = OnceLock::new();
        CELL.get_or_init(|| StabilityPolynomials {
            r_gr: build(R_GR),
            r_gl1: build(R_GL1),
            r_gl2: build(R_GL2),
            r_gb: build(R_GB),
        })
    }

    /// The polynomial whose negativity certifies stability of `kind`.
    pub fn governing(&self, kind: ModelKind) -> &MPoly {
        match kind {
            ModelKind::Gr => &self.r_gr,
            ModelKind::Gl => &self.r_gl1,
            ModelKind::Gb => &self.r_gb,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(r: &BigRational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

/// Exact rational value of a finite double.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite parameter")
}

/// Assignment of `(c1, c2, delta)` for exact evaluation.
pub fn assignment(c1: &BigRational, c2: &BigRational, delta: &BigRational) -> [(Var, BigRational); 3] {
    [
        (Var::C1, c1.clone()),
        (Var::C2, c2.clone()),
        (Var::Delta, delta.clone()),
    ]
}

/// Exact value of `poly` at `(c1, c2, delta)`.
pub fn eval_exact(poly: &MPoly, c1: &BigRational, c2: &BigRational, delta: &BigRational) -> BigRational {
    poly.eval(&assignment(c1, c2, delta))
        .expect("stability polynomials only involve c1, c2, delta")
}

/// Sign of `poly` at a double-precision point: the float sum when its magnitude
/// dominates the rounding bound, otherwise exact rational evaluation.
pub fn sign_at(poly: &MPoly, c1: f64, c2: f64, delta: f64) -> Sign {
    let (v, abs) = poly.eval_f64(&[(Var::C1, c1), (Var::C2, c2), (Var::Delta, delta)]);
    if v.is_finite() && v.abs() > 1e-12 * abs {
        return if v < 0.0 { Sign::Negative } else { Sign::Positive };
    }
    Sign::of_rational(&eval_exact(poly, &exact(c1), &exact(c2), &exact(delta)))
}

/// Value of a stability polynomial together with its natural scale, the sum of the
/// absolute values of its terms at the same point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScaledValue {
    pub value: f64,
    pub scale: f64,
}

impl ScaledValue {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.value / self.scale
        }
    }
}

/// The governing polynomial's value at `p`, evaluated exactly and rounded once; for
/// GL the second component carries `R_GL^2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StabilityValue {
    pub governing: ScaledValue,
    pub secondary: Option<ScaledValue>,
}

fn scaled(poly: &MPoly, p: &Params) -> ScaledValue {
    let (c1, c2, d) = (exact(p.c1), exact(p.c2), exact(p.delta));
    let value = crate::sym::rational_to_f64(&eval_exact(poly, &c1, &c2, &d));
    let (_, scale) = poly.eval_f64(&[(Var::C1, p.c1), (Var::C2, p.c2), (Var::Delta, p.delta)]);
    ScaledValue { value, scale }
}

pub fn eval_stability_poly(kind: ModelKind, p: &Params) -> StabilityValue {
    let polys = StabilityPolynomials::get();
    StabilityValue {
        governing: scaled(polys.governing(kind), p),
        secondary: (kind == ModelKind::Gl).then(|| scaled(&polys.r_gl2, p)),
    }
}
