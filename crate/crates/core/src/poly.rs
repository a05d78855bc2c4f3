//! Polynomials in the formal central charge `c` and lowest weight `h`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::scalar::format_rational;

/// A polynomial `Σ a_{ij} c^i h^j` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly::default()
    }

    pub fn constant(q: BigRational) -> Self {
        let mut p = CPoly::zero();
        p.add_term((0, 0), q);
        p
    }

    pub fn one() -> Self {
        CPoly::constant(BigRational::one())
    }

    /// The formal central charge `c`.
    pub fn c() -> Self {
        let mut p = CPoly::zero();
        p.add_term((1, 0), BigRational::one());
        p
    }

    /// The formal lowest weight `h`.
    pub fn h() -> Self {
        let mut p = CPoly::zero();
        p.add_term((0, 1), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    /// The constant coefficient, if the polynomial has no `c` or `h` dependence.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, key: (u32, u32), q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return CPoly::zero();
        }
        CPoly { terms: self.terms.iter().map(|(k, v)| (*k, v * q)).collect() }
    }

    pub fn eval(&self, c: &BigRational, h: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(&(i, j), a)| a * Pow::pow(c, i) * Pow::pow(h, j))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }
}

impl Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v.clone());
        }
        out
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), a * b);
            }
        }
        out
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), a) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(a))?;
            match i {
                0 => {}
                1 => write!(f, "·c")?,
                _ => write!(f, "·c^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "·h")?,
                _ => write!(f, "·h^{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn arithmetic_and_evaluation() {
        let c = CPoly::c();
        let h = CPoly::h();
        let p = &(&c * &h) + &CPoly::constant(rat(1, 2));
        assert_eq!(p.eval(&int(3), &rat(1, 3)), rat(3, 2));
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!((&c + &c).scale(&rat(1, 2)), c);
        assert_eq!(CPoly::constant(int(5)).as_constant(), Some(int(5)));
        assert_eq!(c.as_constant(), None);
    }
}
