use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of variables in the fixed universe.
pub const NVARS: usize = 10;

/// The variable universe, listed in increasing order.
///
/// The monomial order is graded lexicographic with this declaration order:
/// `x1 < x2 < c1 < c2 < delta < lambda < a < b < c < d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X1,
    X2,
    C1,
    C2,
    Delta,
    Lambda,
    A,
    B,
    C,
    D,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X1,
        Var::X2,
        Var::C1,
        Var::C2,
        Var::Delta,
        Var::Lambda,
        Var::A,
        Var::B,
        Var::C,
        Var::D,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::C1 => "c1",
            Var::C2 => "c2",
            Var::Delta => "delta",
            Var::Lambda => "lambda",
            Var::A => "a",
            Var::B => "b",
            Var::C => "c",
            Var::D => "d",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A power product over the variable universe. Absent variables have exponent 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; NVARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; NVARS] };

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u16) -> Self {
        let mut m = Self::ONE;
        m.exps[v.index()] = e;
        m
    }

    pub fn from_exponents(pairs: &[(Var, u16)]) -> Self {
        let mut m = Self::ONE;
        for &(v, e) in pairs {
            m.exps[v.index()] += e;
        }
        m
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.exps[v.index()]
    }

    pub fn set_exp(&mut self, v: Var, e: u16) {
        self.exps[v.index()] = e;
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Variables with a nonzero exponent, in declaration order.
    pub fn support(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        Var::ALL
            .iter()
            .copied()
            .zip(self.exps.iter().copied())
            .filter(|&(_, e)| e > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_add(*o).expect("monomial exponent overflow");
        }
        Monomial { exps }
    }

    /// `self / other` when `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_sub(*o)?;
        }
        Some(Monomial { exps })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum (gcd of two monomials).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = (*e).min(*o);
        }
        Monomial { exps }
    }

    /// The monomial with the exponent of `v` removed.
    pub fn without(&self, v: Var) -> Monomial {
        let mut m = *self;
        m.exps[v.index()] = 0;
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.support() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}
