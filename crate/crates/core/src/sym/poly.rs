use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::Coeff;
use super::monomial::{Monomial, Var};
use super::SymError;

/// Sparse multivariate polynomial in canonical form.
///
/// Terms are kept sorted by strictly decreasing monomial and no stored coefficient is
/// zero, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C: Coeff> {
    terms: Vec<(Monomial, C)>,
}

/// Polynomial with exact rational coefficients.
pub type MPoly = Poly<BigRational>;
/// Polynomial with arbitrary-precision integer coefficients.
pub type ZPoly = Poly<BigInt>;

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v), C::one())
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = std::mem::replace(e, C::zero()) + c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Constant value if the polynomial has no variables (zero included).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    /// Degree in `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.exp(v)).max()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    /// Variables that occur with a positive exponent, in declaration order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|&v| self.contains_var(v))
            .collect()
    }

    pub fn coeff_of(&self, m: &Monomial) -> C {
        self.terms
            .binary_search_by(|(k, _)| m.cmp(k))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::zero())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.mul_ref(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a.mul_ref(c)))
                .collect(),
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        a[i].1.clone() - &b[j].1
                    } else {
                        a[i].1.clone() + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate_other { -t.1.clone() } else { t.1.clone() };
            out.push((t.0, c));
        }
        Poly { terms: out }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg_ref(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(small.len() * large.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let prod = ca.mul_ref(cb);
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e = std::mem::replace(e, C::zero()) + &prod)
                    .or_insert(prod);
            }
        }
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    ///
    /// Multivariate division by leading terms; for an exact divisor the remainder
    /// vanishes, and the first leading term that does not divide proves non-divisibility.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>, SymError> {
        if divisor.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(Self::zero()));
        }
        if divisor.len() == 1 {
            let (dm, dc) = &divisor.terms[0];
            let mut terms = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                let (Some(qm), Some(qc)) = (m.try_div(dm), c.exact_div(dc)) else {
                    return Ok(None);
                };
                terms.push((qm, qc));
            }
            return Ok(Some(Poly { terms }));
        }
        let (lm, lc) = divisor.terms[0].clone();
        let mut rem: BTreeMap<Monomial, C> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let (Some(qm), Some(qc)) = (m.try_div(&lm), c.exact_div(&lc)) else {
                return Ok(None);
            };
            for (dm, dc) in &divisor.terms[1..] {
                let key = dm.mul(&qm);
                let sub = qc.mul_ref(dc);
                match rem.get_mut(&key) {
                    Some(e) => {
                        let v = std::mem::replace(e, C::zero()) - sub;
                        if v.is_zero() {
                            rem.remove(&key);
                        } else {
                            *e = v;
                        }
                    }
                    None => {
                        rem.insert(key, -sub);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Ok(Some(Poly { terms: quotient }))
    }

    /// Coefficients with respect to `v`, index = power of `v`.
    ///
    /// Returns an empty list for the zero polynomial; otherwise the last entry is nonzero.
    pub fn collect(&self, v: Var) -> Vec<Self> {
        let Some(deg) = self.degree_in(v) else {
            return Vec::new();
        };
        let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); deg as usize + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                // removing a variable can break the descending order
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                Poly { terms: ts }
            })
            .collect()
    }

    /// Inverse of [`collect`](Self::collect).
    pub fn from_univariate(coeffs: &[Self], v: Var) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var_pow(v, k as u16);
            terms.extend(c.terms.iter().map(|(m, a)| (m.mul(&shift), a.clone())));
        }
        Self::from_terms(terms)
    }

    pub fn derivative(&self, v: Var) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| {
                let mut nm = *m;
                nm.set_exp(v, e - 1);
                let mut k = C::zero();
                for _ in 0..e {
                    k = k + C::one();
                }
                (nm, c.mul_ref(&k))
            })
        });
        Self::from_terms(terms)
    }

    /// Substitutes constants for some variables, leaving the rest symbolic.
    pub fn partial_eval(&self, assignment: &[(Var, C)]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut nm = *m;
            let mut nc = c.clone();
            for (v, val) in assignment {
                let e = m.exp(*v);
                if e > 0 {
                    nm.set_exp(*v, 0);
                    for _ in 0..e {
                        nc = nc.mul_ref(val);
                    }
                }
            }
            (nm, nc)
        });
        Self::from_terms(terms)
    }

    /// Exact evaluation; every variable of the polynomial must be assigned.
    ///
    /// Horner scheme in the highest variable, recursing into the coefficients.
    pub fn eval(&self, assignment: &[(Var, C)]) -> Result<C, SymError> {
        let vars = self.variables();
        for v in &vars {
            if !assignment.iter().any(|(a, _)| a == v) {
                return Err(SymError::MissingVariable(*v));
            }
        }
        Ok(self.horner(&vars, assignment))
    }

    fn horner(&self, vars: &[Var], assignment: &[(Var, C)]) -> C {
        let Some((&v, rest)) = vars.split_last() else {
            return self.as_constant().unwrap_or_else(C::zero);
        };
        if !self.contains_var(v) {
            return self.horner(rest, assignment);
        }
        let value = &assignment.iter().find(|(a, _)| *a == v).expect("checked").1;
        let coeffs = self.collect(v);
        let mut acc = C::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul_ref(value) + c.horner(rest, assignment);
        }
        acc
    }

    /// Floating-point evaluation together with the sum of absolute term values.
    ///
    /// The second component bounds the cancellation and is used to decide when a
    /// float sign can be trusted.
    pub fn eval_f64(&self, assignment: &[(Var, f64)]) -> (f64, f64) {
        let mut vals = [0.0f64; super::monomial::NVARS];
        for (v, x) in assignment {
            vals[v.index()] = *x;
        }
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (v, e) in m.support() {
                t *= vals[v.index()].powi(e as i32);
            }
            sum += t;
            abs += t.abs();
        }
        (sum, abs)
    }

    /// Monomial content: the gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::ONE;
        };
        it.fold(*first, |g, (m, _)| g.gcd(m))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

impl ZPoly {
    /// Gcd of the integer coefficients (non-negative; zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the integer content and makes the leading coefficient positive.
    pub fn primitive_integer_part(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.integer_content();
        if self.terms[0].1.is_neg() {
            g = -g;
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c / &g)).collect(),
        }
    }

    pub fn to_rational(&self) -> MPoly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }
}

impl MPoly {
    /// Returns `(k, p)` with `k > 0` an integer and `p = k * self` having integer coefficients.
    /// `k` is the lcm of the coefficient denominators.
    pub fn clear_denominators(&self) -> (BigInt, ZPoly) {
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&l / c.denom())))
            .collect();
        (l, Poly { terms })
    }

    pub fn from_integer_poly(p: &ZPoly) -> MPoly {
        p.to_rational()
    }

    pub fn from_i64_terms(terms: &[(i64, &[(Var, u16)])]) -> MPoly {
        Poly::from_terms(terms.iter().map(|(c, e)| {
            (
                Monomial::from_exponents(e),
                BigRational::from_integer(BigInt::from(*c)),
            )
        }))
    }

    pub fn from_i64(c: i64) -> MPoly {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// Sign of the leading coefficient: `1`, `-1`, or `0` for zero.
    pub fn leading_sign(&self) -> i32 {
        match self.leading_coeff() {
            None => 0,
            Some(c) if c.is_neg() => -1,
            Some(_) => 1,
        }
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    /// Canonical dump: `coeff*x1^a*x2^b*...` terms in decreasing order, joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<C: Coeff> $tr<&Poly<C>> for &Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                self.$imp(rhs)
            }
        }
        impl<C: Coeff> $tr<Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$imp(&rhs)
            }
        }
        impl<C: Coeff> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                (&self).$imp(rhs)
            }
        }
        impl<C: Coeff> $tr<Poly<C>> for &Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: Poly<C>) -> Poly<C> {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.neg_ref()
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::coeff::{int, rat};

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_and_difference_of_squares() {
        assert_eq!(p("x1 + 1") + p("x1 - 1"), p("2*x1"));
        assert_eq!(p("x1 + x2") * p("x1 - x2"), p("x1^2 - x2^2"));
        assert_eq!(p("c1 - c2").pow(2), p("c1^2 - 2*c1*c2 + c2^2"));
        assert!((p("x1") - p("x1")).is_zero());
        assert_eq!(p("3").pow(0), MPoly::one());
    }

    #[test]
    fn collect_examples() {
        let c = p("x2*c1 + x2^2").collect(Var::X2);
        assert_eq!(c, vec![MPoly::zero(), p("c1"), p("1")]);
        assert_eq!(p("7").collect(Var::X1), vec![p("7")]);
        assert!(MPoly::zero().collect(Var::X1).is_empty());
        let q = p("x1^2*c2 + 3*x1*x2 - c1");
        assert_eq!(MPoly::from_univariate(&q.collect(Var::X1), Var::X1), q);
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("x1^2 - 1").div_exact(&p("x1 - 1")).unwrap(), Some(p("x1 + 1")));
        assert_eq!(p("x1^2 + 1").div_exact(&p("x1 - 1")).unwrap(), None);
        assert!(matches!(p("x1").div_exact(&MPoly::zero()), Err(SymError::DivisionByZero)));
        let z: ZPoly = p("2*x1 + 2").clear_denominators().1;
        let three = ZPoly::constant(BigInt::from(3));
        assert_eq!(z.div_exact(&three).unwrap(), None);
    }

    #[test]
    fn evaluation() {
        let f = p("x1^2*c1 - 3/2*c2 + 1");
        let v = f
            .eval(&[(Var::X1, int(2)), (Var::C1, rat(1, 2)), (Var::C2, int(4))])
            .unwrap();
        assert_eq!(v, int(-3));
        assert!(matches!(
            f.eval(&[(Var::X1, int(2))]),
            Err(SymError::MissingVariable(Var::C1))
        ));
        assert_eq!(MPoly::zero().eval(&[]).unwrap(), int(0));
    }

    #[test]
    fn derivative_and_display() {
        assert_eq!(p("x1^3*c1 + x1*x2 + 5").derivative(Var::X1), p("3*x1^2*c1 + x2"));
        assert_eq!(p("x1^2 - 2*x1*c2 + 1/3").to_string(), "-2*x1*c2 + 1*x1^2 + 1/3");
        assert_eq!(MPoly::zero().to_string(), "0");
    }

    #[test]
    fn clear_denominators_is_exact() {
        let f = p("1/2*x1 + 2/3");
        let (k, z) = f.clear_denominators();
        assert_eq!(k, BigInt::from(6));
        assert_eq!(z.to_rational(), f.scale(&int(6)));
    }
}
