use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::monomial::Var;
use super::poly::{MPoly, Poly, ZPoly};
use super::SymError;

/// Sylvester matrix of `a` and `b` with respect to `v`: `deg_v b` shifted rows of
/// `a`'s coefficients (highest power first) above `deg_v a` shifted rows of `b`'s.
pub fn sylvester_matrix<C: super::Coeff>(
    a: &Poly<C>,
    b: &Poly<C>,
    v: Var,
) -> Result<Vec<Vec<Poly<C>>>, SymError> {
    if a.is_zero() || b.is_zero() {
        return Err(SymError::ZeroPolynomial);
    }
    let ca = a.collect(v);
    let cb = b.collect(v);
    let m = ca.len() - 1;
    let l = cb.len() - 1;
    if m == 0 && l == 0 {
        return Err(SymError::ConstantResultant);
    }
    let n = m + l;
    let mut mat = vec![vec![Poly::zero(); n]; n];
    for r in 0..l {
        for (i, c) in ca.iter().rev().enumerate() {
            mat[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in cb.iter().rev().enumerate() {
            mat[l + r][r + i] = c.clone();
        }
    }
    Ok(mat)
}

/// Determinant by fraction-free (Bareiss) elimination over the integer polynomial ring.
///
/// Every intermediate entry is a minor of the input, so each division by the previous
/// pivot is exact. Rows are swapped when a pivot vanishes, preferring the sparsest
/// nonzero candidate.
pub fn bareiss_det(mut m: Vec<Vec<ZPoly>>) -> ZPoly {
    let n = m.len();
    if n == 0 {
        return ZPoly::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut negate = false;
    let mut prev = ZPoly::one();
    for k in 0..n {
        let pivot_row = (k..n)
            .filter(|&r| !m[r][k].is_zero())
            .min_by_key(|&r| m[r][k].len());
        let Some(pr) = pivot_row else {
            return ZPoly::zero();
        };
        if pr != k {
            m.swap(pr, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        tail.par_iter_mut().for_each(|row| {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let a = &row[j];
                let b = &pivot_row[j];
                if a.is_zero() && (lead.is_zero() || b.is_zero()) {
                    continue;
                }
                let mut num = pivot.mul_ref(a);
                if !lead.is_zero() && !b.is_zero() {
                    num = num.sub_ref(&lead.mul_ref(b));
                }
                row[j] = if prev.is_one() {
                    num
                } else {
                    num.div_exact(&prev)
                        .expect("nonzero pivot")
                        .expect("Bareiss division is exact")
                };
            }
        });
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Resultant over the integers: determinant of the Sylvester matrix.
pub fn sylvester_resultant_int(a: &ZPoly, b: &ZPoly, v: Var) -> Result<ZPoly, SymError> {
    Ok(bareiss_det(sylvester_matrix(a, b, v)?))
}

/// `res(a, b, v)`: the Sylvester determinant, computed over the integers after clearing
/// denominators and rescaled back exactly.
pub fn sylvester_resultant(a: &MPoly, b: &MPoly, v: Var) -> Result<MPoly, SymError> {
    if a.is_zero() || b.is_zero() {
        return Err(SymError::ZeroPolynomial);
    }
    let m = a.degree_in(v).unwrap_or(0) as u32;
    let l = b.degree_in(v).unwrap_or(0) as u32;
    let (ka, za) = a.clear_denominators();
    let (kb, zb) = b.clear_denominators();
    let r = sylvester_resultant_int(&za, &zb, v)?.to_rational();
    let scale: BigInt = num_traits::pow(ka, l as usize) * num_traits::pow(kb, m as usize);
    if scale.is_one() {
        Ok(r)
    } else {
        Ok(r.scale(&BigRational::new(BigInt::one(), scale)))
    }
}

/// A triangular set `[t1(x1), t2(x1, x2)]`: `t1` is free of `x2`, `t2` is linear in `x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularSet {
    t1: MPoly,
    t2: MPoly,
}

impl TriangularSet {
    pub fn new(t1: MPoly, t2: MPoly) -> Result<Self, SymError> {
        if t1.is_zero() || t1.contains_var(Var::X2) {
            return Err(SymError::NotTriangular("t1 must be a nonzero polynomial free of x2"));
        }
        if t2.degree_in(Var::X2) != Some(1) {
            return Err(SymError::NotTriangular("t2 must have degree exactly 1 in x2"));
        }
        Ok(TriangularSet { t1, t2 })
    }

    pub fn t1(&self) -> &MPoly {
        &self.t1
    }

    pub fn t2(&self) -> &MPoly {
        &self.t2
    }
}

/// `res(H, T) = res(res(H, t2, x2), t1, x1)`.
///
/// Fails with [`SymError::VanishesOnVariety`] when the inner resultant is identically
/// zero, carrying the (zero) value that the definition would produce.
pub fn res_triangular(h: &MPoly, t: &TriangularSet) -> Result<MPoly, SymError> {
    if h.is_zero() {
        return Err(SymError::ZeroPolynomial);
    }
    let inner = sylvester_resultant(h, &t.t2, Var::X2)?;
    if inner.is_zero() {
        return Err(SymError::VanishesOnVariety);
    }
    if !inner.contains_var(Var::X1) && !t.t1.contains_var(Var::X1) {
        return Err(SymError::ConstantResultant);
    }
    sylvester_resultant(&inner, &t.t1, Var::X1)
}
