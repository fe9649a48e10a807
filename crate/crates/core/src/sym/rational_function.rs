use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::{cofactors, gcd};
use super::monomial::Var;
use super::poly::{MPoly, ZPoly};
use super::SymError;

/// Quotient of two polynomials in lowest terms.
///
/// Canonical form: numerator and denominator have integer coefficients and no common
/// factor (integer content included), and the denominator's leading coefficient is
/// positive. Consequently `numer` of a nonzero value is a primitive integer polynomial
/// whenever the value has an integer denominator content, e.g. `(x1 + x2)/(2*c2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: ZPoly,
    den: ZPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(&MPoly::one())
    }

    pub fn from_poly(p: &MPoly) -> Self {
        let (k, z) = p.clear_denominators();
        Self::from_int_parts(z, ZPoly::constant(k))
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(&MPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(&MPoly::var(v))
    }

    pub fn new(num: &MPoly, den: &MPoly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let (kn, zn) = num.clear_denominators();
        let (kd, zd) = den.clear_denominators();
        // num/den = (zn/kn)/(zd/kd) = (zn*kd)/(zd*kn)
        Ok(Self::from_int_parts(zn.scale(&kd), zd.scale(&kn)))
    }

    fn from_int_parts(num: ZPoly, den: ZPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let (_, mut n, mut d) = cofactors(&num, &den);
        if d.leading_coeff().is_some_and(|c| c.sign() == num_bigint::Sign::Minus) {
            n = -n;
            d = -d;
        }
        RationalFunction { num: n, den: d }
    }

    pub fn numer(&self) -> MPoly {
        self.num.to_rational()
    }

    pub fn denom(&self) -> MPoly {
        self.den.to_rational()
    }

    pub fn numer_int(&self) -> &ZPoly {
        &self.num
    }

    pub fn denom_int(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is constant.
    pub fn as_poly(&self) -> Option<MPoly> {
        let d = self.den.as_constant()?;
        Some(
            self.num
                .to_rational()
                .scale(&BigRational::new(BigInt::one(), d)),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (_, bq, dq) = cofactors(&self.den, &other.den);
        let num = self.num.mul_ref(&dq).add_ref(&other.num.mul_ref(&bq));
        let den = self.den.mul_ref(&dq);
        Self::from_int_parts(num, den)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (_, a, d) = cofactors(&self.num, &other.den);
        let (_, c, b) = cofactors(&other.num, &self.den);
        Self::from_int_parts(a.mul_ref(&c), b.mul_ref(&d))
    }

    pub fn inv(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::from_int_parts(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SymError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        self.mul(&Self::constant(c.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Quotient rule, reduced to lowest terms.
    pub fn differentiate(&self, v: Var) -> Self {
        if !self.den.contains_var(v) {
            return Self::from_int_parts(self.num.derivative(v), self.den.clone());
        }
        // d(n/d) = (n' d - n d') / d^2, cancelling gcd(d, d') early
        let dd = self.den.derivative(v);
        let g = gcd(&self.den, &dd);
        let d_over_g = self.den.div_exact(&g).unwrap().expect("gcd divides");
        let dd_over_g = dd.div_exact(&g).unwrap().expect("gcd divides");
        let num = self
            .num
            .derivative(v)
            .mul_ref(&d_over_g)
            .sub_ref(&self.num.mul_ref(&dd_over_g));
        let den = self.den.mul_ref(&d_over_g);
        Self::from_int_parts(num, den)
    }

    /// Exact value at a rational point; errors if the denominator vanishes there.
    pub fn eval(&self, assignment: &[(Var, BigRational)]) -> Result<BigRational, SymError> {
        let d = self.denom().eval(assignment)?;
        if d.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(self.numer().eval(assignment)? / d)
    }

    pub fn eval_f64(&self, assignment: &[(Var, f64)]) -> f64 {
        let n = self.num.eval_f64(assignment).0;
        let d = self.den.eval_f64(assignment).0;
        n / d
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// `dy/dx` along `f(x, y) = 0`: `-(df/dx)/(df/dy)`.
pub fn implicit_derivative(f: &MPoly, dependent: Var, independent: Var) -> Result<RationalFunction, SymError> {
    let fx = f.derivative(independent);
    let fy = f.derivative(dependent);
    RationalFunction::new(&-fx, &fy)
}
