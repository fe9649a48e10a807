use super::{Equilibrium, LmaReading, Model, ModelError, ModelKind, Params, State};

/// Inverse demand `p(S) = 1/S`.
pub fn price(s: f64) -> Result<f64, ModelError> {
    if s > 0.0 {
        Ok(1.0 / s)
    } else {
        Err(ModelError::UndefinedPrice(s))
    }
}

fn aggregate(st: &State) -> Result<f64, ModelError> {
    let s = st.x1 + st.x2;
    if s > 0.0 {
        Ok(s)
    } else {
        Err(ModelError::UndefinedPrice(s))
    }
}

/// `(x1 p - c1 x1^2, x2 p - c2 x2^2)`.
pub fn profits(st: &State, p: &Params) -> Result<(f64, f64), ModelError> {
    let pr = price(aggregate(st)?)?;
    Ok((
        st.x1 * pr - p.c1 * st.x1 * st.x1,
        st.x2 * pr - p.c2 * st.x2 * st.x2,
    ))
}

/// Firm 1's adjustment term `x1 x2 / S^2 - 2 c1 x1^2`, i.e. `x1` times its marginal profit.
pub fn g1(st: &State, p: &Params) -> Result<f64, ModelError> {
    let s = aggregate(st)?;
    Ok(st.x1 * st.x2 / (s * s) - 2.0 * p.c1 * st.x1 * st.x1)
}

pub fn dg1_dx1(st: &State, p: &Params) -> Result<f64, ModelError> {
    let s = aggregate(st)?;
    Ok(st.x2 * (st.x2 - st.x1) / (s * s * s) - 4.0 * p.c1 * st.x1)
}

pub fn dg1_dx2(st: &State, _p: &Params) -> Result<f64, ModelError> {
    let s = aggregate(st)?;
    Ok(st.x1 * (st.x1 - st.x2) / (s * s * s))
}

/// The best-response cubic `F2 = x1 - 2 c2 x2 (x2 + x1)^2`.
pub fn f2(x1: f64, x2: f64, c2: f64) -> f64 {
    let s = x1 + x2;
    x1 - 2.0 * c2 * x2 * s * s
}

/// Cardano form of the positive root of `F2`.
pub fn best_response_r2_closed(x1: f64, c2: f64) -> f64 {
    let cbrt2 = 2f64.cbrt();
    let radicand =
        c2 * c2 * x1 * (4.0 * c2 * x1 * x1 + 3.0 * 3f64.sqrt() * (8.0 * c2 * x1 * x1 + 27.0).sqrt() + 27.0);
    let m = radicand.cbrt();
    cbrt2 * m / (6.0 * c2) + cbrt2 * cbrt2 * c2 * x1 * x1 / (3.0 * m) - 2.0 * x1 / 3.0
}

/// Bracket `(0, x1 + 1/sqrt(2 c2))` containing the positive root: `F2(0) = x1 > 0` and
/// `F2(U) < 0` at the upper end.
fn r2_bracket(x1: f64, c2: f64) -> (f64, f64) {
    (0.0, x1 + 1.0 / (2.0 * c2).sqrt())
}

/// Plain bisection on `F2` over its root bracket, run until the interval stops shrinking.
pub fn best_response_r2_bisect(x1: f64, c2: f64) -> Result<f64, ModelError> {
    if x1.is_nan() || x1 <= 0.0 {
        return Err(ModelError::NonPositiveOutput(x1));
    }
    let (mut lo, mut hi) = r2_bracket(x1, c2);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(if f2(x1, lo, c2).abs() <= f2(x1, hi, c2).abs() { lo } else { hi });
        }
        if f2(x1, mid, c2) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// The rational firm's best response `R2(x1)`, the unique positive root of `F2`.
///
/// Starts from the closed form and polishes it with bracketed Newton steps, which
/// repairs the cancellation in the closed form when `c2 x1^2` is large. Falls back to
/// bisection if Newton leaves the bracket.
pub fn best_response_r2(x1: f64, c2: f64) -> Result<f64, ModelError> {
    if !x1.is_finite() || x1 <= 0.0 {
        return Err(ModelError::NonPositiveOutput(x1));
    }
    let (mut lo, mut hi) = r2_bracket(x1, c2);
    let mut x = best_response_r2_closed(x1, c2);
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..60 {
        let fx = f2(x1, x, c2);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let s = x1 + x;
        let dfx = -2.0 * c2 * s * (s + 2.0 * x);
        let next = x - fx / dfx;
        if !(next > lo && next < hi) {
            return best_response_r2_bisect(x1, c2);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Implicit derivative of the best response along `F2 = 0`, evaluated at `(x1, x2)`.
pub fn dr2_dx1(x1: f64, x2: f64, c2: f64) -> Result<f64, ModelError> {
    let den = 2.0 * c2 * (x1 * x1 + 4.0 * x1 * x2 + 3.0 * x2 * x2);
    if den == 0.0 || !den.is_finite() {
        return Err(ModelError::DegenerateDerivative);
    }
    Ok(-(4.0 * c2 * x1 * x2 + 4.0 * c2 * x2 * x2 - 1.0) / den)
}

/// The LMA firm's update in its derived form.
pub fn lma_response_s2(st: &State, c2: f64) -> f64 {
    lma_response_s2_with(st, c2, LmaReading::Derived)
}

pub fn lma_response_s2_with(st: &State, c2: f64, reading: LmaReading) -> f64 {
    let s = st.x1 + st.x2;
    let num = match reading {
        LmaReading::Derived => 2.0 * st.x2 + st.x1,
        LmaReading::PrintedOrder => 2.0 * st.x1 + st.x2,
    };
    num / (2.0 * (1.0 + c2 * s * s))
}

fn gradient_update(p: &Params, st: &State) -> Result<f64, ModelError> {
    let x1 = st.x1 + p.delta * g1(st, p)?;
    if x1 > 0.0 && x1.is_finite() {
        Ok(x1)
    } else {
        Err(ModelError::LeftDomain(State::new(x1, st.x2)))
    }
}

/// One step of the chosen model with the derived LMA rule.
pub fn step(kind: ModelKind, p: &Params, st: &State) -> Result<State, ModelError> {
    step_model(Model::new(kind), p, st)
}

pub fn step_model(model: Model, p: &Params, st: &State) -> Result<State, ModelError> {
    let x1 = gradient_update(p, st)?;
    let x2 = match model.kind {
        ModelKind::Gr => best_response_r2(x1, p.c2)?,
        ModelKind::Gb => {
            if st.x1.is_nan() || st.x1 <= 0.0 {
                return Err(ModelError::LeftDomain(*st));
            }
            best_response_r2(st.x1, p.c2)?
        }
        ModelKind::Gl => lma_response_s2_with(st, p.c2, model.lma),
    };
    Ok(State::new(x1, x2))
}

/// The one-dimensional GR map `x1 -> x1 + delta G1(x1, R2(x1))`.
pub fn gr_reduced_step(p: &Params, x1: f64) -> Result<f64, ModelError> {
    let x2 = best_response_r2(x1, p.c2)?;
    gradient_update(p, &State::new(x1, x2))
}

/// Closed-form positive equilibrium shared by all three models.
pub fn equilibrium(c1: f64, c2: f64) -> Result<Equilibrium, ModelError> {
    Params::new(c1, c2, 1.0)?;
    let (r1, r2) = (c1.sqrt(), c2.sqrt());
    let k = 1.0 / (2.0 * (c1 * c2).sqrt()).sqrt() / (r1 + r2);
    let st = State::new(r2 * k, r1 * k);
    let p = Params { c1, c2, delta: 1.0 };
    let residuals = (g1(&st, &p)?.abs(), f2(st.x1, st.x2, c2).abs());
    Ok(Equilibrium {
        x1_star: st.x1,
        x2_star: st.x2,
        residuals,
    })
}

/// `DQ = 1 + delta dG1/dx1 + delta dG1/dx2 dR2/dx1`, the derivative of the reduced GR map.
pub fn dq_gr(p: &Params, st: &State) -> Result<f64, ModelError> {
    let a = dg1_dx1(st, p)?;
    let b = dg1_dx2(st, p)?;
    let r = dr2_dx1(st.x1, st.x2, p.c2)?;
    Ok(1.0 + p.delta * a + p.delta * b * r)
}

/// Jacobian of the two-dimensional maps GB and GL at `st`, row-major.
pub fn jacobian(model: Model, p: &Params, st: &State) -> Result<[[f64; 2]; 2], ModelError> {
    let j11 = 1.0 + p.delta * dg1_dx1(st, p)?;
    let j12 = p.delta * dg1_dx2(st, p)?;
    let row2 = match model.kind {
        ModelKind::Gr => return Err(ModelError::NotTwoDimensional),
        ModelKind::Gb => {
            let r = best_response_r2(st.x1, p.c2)?;
            [dr2_dx1(st.x1, r, p.c2)?, 0.0]
        }
        ModelKind::Gl => {
            let s = aggregate(st)?;
            let q = 1.0 + p.c2 * s * s;
            let (a1, a2) = match model.lma {
                LmaReading::Derived => (1.0, 2.0),
                LmaReading::PrintedOrder => (2.0, 1.0),
            };
            let num = a1 * st.x1 + a2 * st.x2;
            let common = num * 2.0 * p.c2 * s;
            [
                (a1 * q - common) / (2.0 * q * q),
                (a2 * q - common) / (2.0 * q * q),
            ]
        }
    };
    Ok([[j11, j12], row2])
}
