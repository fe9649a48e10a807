//! Multivariate gcd over the integers by recursive primitive remainder sequences.

use num_integer::Integer;
use num_traits::{One, Signed};

use super::monomial::{Monomial, Var};
use super::poly::{Poly, ZPoly};

fn normalize(p: ZPoly) -> ZPoly {
    match p.leading_coeff() {
        Some(c) if c.is_negative() => -p,
        _ => p,
    }
}

fn highest_var(a: &ZPoly, b: &ZPoly) -> Option<Var> {
    Var::ALL
        .iter()
        .rev()
        .copied()
        .find(|&v| a.contains_var(v) || b.contains_var(v))
}

/// Greatest common divisor with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return ZPoly::constant(a.integer_content().gcd(&b.integer_content()));
    }
    // strip monomial factors first; they are cheap and common
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    if !ma.is_one() || !mb.is_one() {
        let g = ma.gcd(&mb);
        let a1 = div_monomial(a, &ma);
        let b1 = div_monomial(b, &mb);
        let rest = gcd(&a1, &b1);
        return rest.mul_monomial(&g, &One::one());
    }
    let v = highest_var(a, b).expect("non-constant");
    if !a.contains_var(v) {
        return gcd(a, &content(b, v));
    }
    if !b.contains_var(v) {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.div_exact(&ca).unwrap().expect("content divides");
    let pb = b.div_exact(&cb).unwrap().expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_gcd(pa, pb, v);
    normalize(c.mul_ref(&g))
}

fn div_monomial(p: &ZPoly, m: &Monomial) -> ZPoly {
    if m.is_one() {
        return p.clone();
    }
    Poly::from_terms(p.terms().iter().map(|(t, c)| (t.try_div(m).expect("content"), c.clone())))
}

/// Content with respect to `v`: gcd of the coefficients of `p` as a polynomial in `v`.
pub fn content(p: &ZPoly, v: Var) -> ZPoly {
    let mut coeffs: Vec<ZPoly> = p.collect(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut it = coeffs.into_iter();
    let Some(mut g) = it.next() else {
        return ZPoly::zero();
    };
    g = normalize(g);
    for c in it {
        if g.is_constant() {
            return ZPoly::constant(p.integer_content());
        }
        g = gcd(&g, &c);
    }
    g
}

/// Primitive part with respect to `v`, sign-normalized.
pub fn primitive_part(p: &ZPoly, v: Var) -> ZPoly {
    if p.is_zero() {
        return ZPoly::zero();
    }
    let c = content(p, v);
    normalize(p.div_exact(&c).unwrap().expect("content divides"))
}

/// Sparse pseudo-remainder of `a` by `b` in `v`.
pub fn pseudo_remainder(a: &ZPoly, b: &ZPoly, v: Var) -> ZPoly {
    let db = b.degree_in(v).expect("nonzero divisor");
    let cb = b.collect(v);
    let lb = cb.last().expect("nonzero").clone();
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(v) {
        if dr < db {
            break;
        }
        let lr = r.collect(v).pop().expect("nonzero");
        let shift = Monomial::var_pow(v, dr - db);
        let t = lr.mul_monomial(&shift, &One::one());
        r = lb.mul_ref(&r).sub_ref(&t.mul_ref(b));
    }
    r
}

fn primitive_gcd(mut a: ZPoly, mut b: ZPoly, v: Var) -> ZPoly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v);
        }
        if !r.contains_var(v) {
            return ZPoly::one();
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

/// Exact quotient by the gcd; used to cancel common factors.
pub fn cofactors(a: &ZPoly, b: &ZPoly) -> (ZPoly, ZPoly, ZPoly) {
    let g = gcd(a, b);
    if g.is_zero() || g.is_one() {
        return (g, a.clone(), b.clone());
    }
    let qa = a.div_exact(&g).unwrap().expect("gcd divides");
    let qb = b.div_exact(&g).unwrap().expect("gcd divides");
    (g, qa, qb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::poly::MPoly;

    fn z(s: &str) -> ZPoly {
        s.parse::<MPoly>().unwrap().clear_denominators().1
    }

    #[test]
    fn gcd_of_products() {
        let f = z("(x1 + x2)^2 * (c1 - c2) * 6");
        let g = z("(x1 + x2) * (x1 + 3*x2) * 4 * c2");
        assert_eq!(gcd(&f, &g), z("2*(x1 + x2)"));
        assert_eq!(gcd(&z("x1^2*c2"), &z("x1*c2^3")), z("x1*c2"));
        assert_eq!(gcd(&z("x1 + 1"), &z("x1 - 1")), z("1"));
        assert_eq!(gcd(&ZPoly::zero(), &z("-3*x1")), z("3*x1"));
    }

    #[test]
    fn gcd_with_parametric_coefficients() {
        let common = z("c1*x1^2 - c2");
        let f = common.mul_ref(&z("x1*delta + c1"));
        let g = common.mul_ref(&z("x2 - c2*x1 + 1"));
        assert_eq!(gcd(&f, &g), common);
    }
}
