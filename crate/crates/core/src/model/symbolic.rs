//! Exact counterparts of the numeric formulas, as rational functions in
//! `x1, x2, c1, c2, delta`.

use super::{LmaReading, ModelKind};
use crate::sym::{implicit_derivative, MPoly, RationalFunction, TriangularSet, Var};

fn var(v: Var) -> RationalFunction {
    RationalFunction::var(v)
}

fn konst(c: i64) -> RationalFunction {
    RationalFunction::from_poly(&MPoly::from_i64(c))
}

fn poly(s: &str) -> MPoly {
    s.parse().expect("well-formed built-in polynomial")
}

/// `G1 = x1 x2 / (x1 + x2)^2 - 2 c1 x1^2`.
pub fn g1() -> RationalFunction {
    let s = var(Var::X1).add(&var(Var::X2));
    let share = var(Var::X1)
        .mul(&var(Var::X2))
        .div(&s.pow(2))
        .expect("nonzero denominator");
    share.sub(&RationalFunction::from_poly(&poly("2*c1*x1^2")))
}

/// The best-response cubic `F2 = x1 - 2 c2 x2 (x2 + x1)^2`.
pub fn f2() -> MPoly {
    poly("x1 - 2*c2*x2*(x2 + x1)^2")
}

/// `dR2/dx1` by implicit differentiation of `F2 = 0`.
pub fn dr2_dx1() -> RationalFunction {
    implicit_derivative(&f2(), Var::X2, Var::X1).expect("dF2/dx2 is nonzero")
}

/// `DQ = 1 + delta dG1/dx1 + delta dG1/dx2 dR2/dx1`.
pub fn dq_gr() -> RationalFunction {
    let g = g1();
    let d = var(Var::Delta);
    let a = d.mul(&g.differentiate(Var::X1));
    let b = d.mul(&g.differentiate(Var::X2)).mul(&dr2_dx1());
    konst(1).add(&a).add(&b)
}

/// The LMA update as a rational function.
pub fn s2(reading: LmaReading) -> RationalFunction {
    let num = match reading {
        LmaReading::Derived => poly("2*x2 + x1"),
        LmaReading::PrintedOrder => poly("2*x1 + x2"),
    };
    RationalFunction::new(&num, &poly("2*(1 + c2*(x1 + x2)^2)")).expect("nonzero denominator")
}

/// Jacobian of GB or GL (derived LMA rule), row-major; `None` for GR.
pub fn jacobian(kind: ModelKind) -> Option<[[RationalFunction; 2]; 2]> {
    let g = g1();
    let d = var(Var::Delta);
    let j11 = konst(1).add(&d.mul(&g.differentiate(Var::X1)));
    let j12 = d.mul(&g.differentiate(Var::X2));
    let (j21, j22) = match kind {
        ModelKind::Gb => (dr2_dx1(), RationalFunction::zero()),
        ModelKind::Gl => {
            let s = s2(LmaReading::Derived);
            (s.differentiate(Var::X1), s.differentiate(Var::X2))
        }
        ModelKind::Gr => return None,
    };
    Some([[j11, j12], [j21, j22]])
}

/// The triangular set whose variety carries the positive equilibrium:
/// `t1 = (4c1^3 - 8c1^2c2 + 4c1c2^2) x1^4 + 8c1c2 x1^2 - c2`,
/// `t2 = (4c1c2 x1^2 - c2) x2 + (2c1^2 + 2c1c2) x1^3`.
pub fn equilibrium_set() -> TriangularSet {
    TriangularSet::new(
        poly("(4*c1^3 - 8*c1^2*c2 + 4*c1*c2^2)*x1^4 + 8*c1*c2*x1^2 - c2"),
        poly("(4*c1*c2*x1^2 - c2)*x2 + (2*c1^2 + 2*c1*c2)*x1^3"),
    )
    .expect("valid triangular set")
}

/// The degenerate component `[x2, x1]` (the origin, where the maps are undefined).
pub fn origin_set() -> TriangularSet {
    TriangularSet::new(poly("x1"), poly("x2")).expect("valid triangular set")
}
