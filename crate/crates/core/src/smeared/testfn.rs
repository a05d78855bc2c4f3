use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::half::HalfInt;
use crate::scalar::{format_complex_rational, int, rat, RealScalar};
use crate::ComplexRational;

/// Finite Fourier series `Σ a_r e^{irθ}` with frequencies in ½ℤ, read on the
/// chart `θ ∈ (−π, π)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    coeffs: BTreeMap<HalfInt, ComplexRational>,
}

/// Which frequencies a trigonometric polynomial uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrequencyKind {
    Zero,
    Integer,
    HalfOdd,
    Mixed,
}

fn real(q: BigRational) -> ComplexRational {
    Complex::new(q, BigRational::zero())
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn from_coefficients(coeffs: impl IntoIterator<Item = (HalfInt, ComplexRational)>) -> Self {
        let mut p = TrigPoly::zero();
        for (r, a) in coeffs {
            p.add_term(r, a);
        }
        p
    }

    pub fn constant(q: BigRational) -> Self {
        TrigPoly::from_coefficients([(HalfInt::ZERO, real(q))])
    }

    pub fn one() -> Self {
        TrigPoly::constant(BigRational::one())
    }

    /// `e^{irθ}`.
    pub fn exp(r: HalfInt) -> Self {
        TrigPoly::from_coefficients([(r, real(BigRational::one()))])
    }

    /// `cos(rθ)`.
    pub fn cos(r: HalfInt) -> Self {
        let h = real(rat(1, 2));
        TrigPoly::from_coefficients([(r, h.clone()), (-r, h)])
    }

    /// `sin(rθ)`.
    pub fn sin(r: HalfInt) -> Self {
        let h = Complex::new(BigRational::zero(), rat(1, 2));
        TrigPoly::from_coefficients([(r, -h.clone()), (-r, h)])
    }

    fn add_term(&mut self, r: HalfInt, a: ComplexRational) {
        let entry = self.coeffs.entry(r).or_insert_with(ComplexRational::zero);
        *entry = &*entry + &a;
        if entry.is_zero() {
            self.coeffs.remove(&r);
        }
    }

    pub fn coefficient(&self, r: HalfInt) -> ComplexRational {
        self.coeffs.get(&r).cloned().unwrap_or_else(ComplexRational::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<HalfInt, ComplexRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|r|` with a nonzero coefficient.
    pub fn degree(&self) -> HalfInt {
        self.coeffs.keys().map(|r| r.abs()).max().unwrap_or(HalfInt::ZERO)
    }

    /// `a_{−r} = conj(a_r)` for all `r`.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|(r, a)| self.coefficient(-*r) == a.conj())
    }

    pub fn frequency_kind(&self) -> FrequencyKind {
        let ints = self.coeffs.keys().filter(|r| r.is_integer()).count();
        match (ints, self.coeffs.len() - ints) {
            (0, 0) => FrequencyKind::Zero,
            (_, 0) => FrequencyKind::Integer,
            (0, _) => FrequencyKind::HalfOdd,
            _ => FrequencyKind::Mixed,
        }
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        TrigPoly::from_coefficients(self.coeffs.iter().map(|(r, a)| (*r, a * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, a) in &other.coeffs {
            out.add_term(*r, a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&real(-BigRational::one())))
    }

    /// Pointwise product; convolution of the coefficient maps.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = TrigPoly::zero();
        for (r, a) in &self.coeffs {
            for (s, b) in &other.coeffs {
                out.add_term(*r + *s, a * b);
            }
        }
        out
    }

    /// `d/dθ`: multiplies the coefficient at `r` by `ir`.
    pub fn derivative(&self) -> Self {
        TrigPoly::from_coefficients(
            self.coeffs.iter().map(|(r, a)| (*r, a * Complex::new(BigRational::zero(), r.to_rational()))),
        )
    }

    /// `∫_{−π}^{π} p dθ / 2π`, defined when every frequency is an integer.
    pub fn mean(&self) -> Option<ComplexRational> {
        match self.frequency_kind() {
            FrequencyKind::Zero | FrequencyKind::Integer => Some(self.coefficient(HalfInt::ZERO)),
            _ => None,
        }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(r, a)| to_c64(a) * Complex64::new(0.0, r.to_f64() * theta).exp())
            .sum()
    }
}

pub(crate) fn to_c64(z: &ComplexRational) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> =
            self.coeffs.iter().map(|(r, a)| format!("({})e^{{i{}θ}}", format_complex_rational(a), r)).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Smooth compactly supported profiles on an arc `(θ₁, θ₂) ⊂ [−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BumpShape {
    /// `exp(−1/((θ₂−θ)(θ−θ₁)))` inside the arc.
    Standard,
    /// Identically 1 on `[a, b]`, with smooth transitions down to 0 at the arc ends.
    FlatTop { a: f64, b: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub shape: BumpShape,
    pub support: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BumpError {
    #[error("support ({0}, {1}) is not an arc inside [−π, π]")]
    BadSupport(f64, f64),
    #[error("flat region [{a}, {b}] must lie strictly inside the support")]
    BadFlatRegion { a: f64, b: f64 },
}

/// `e^{−1/x}` for `x > 0`, else 0; with first derivative.
fn psi(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        (0.0, 0.0)
    } else {
        let v = (-1.0 / x).exp();
        (v, v / (x * x))
    }
}

/// Smooth step from 0 at `x ≤ 0` to 1 at `x ≥ 1`, with derivative.
fn step(x: f64) -> (f64, f64) {
    let (p, dp) = psi(x);
    let (q, dq) = psi(1.0 - x);
    let s = p + q;
    if s == 0.0 {
        return (0.0, 0.0);
    }
    (p / s, (dp * q + p * dq) / (s * s))
}

impl Bump {
    pub fn standard(theta1: f64, theta2: f64) -> Result<Self, BumpError> {
        Self::check_support(theta1, theta2)?;
        Ok(Bump { shape: BumpShape::Standard, support: (theta1, theta2) })
    }

    pub fn flat_top(theta1: f64, a: f64, b: f64, theta2: f64) -> Result<Self, BumpError> {
        Self::check_support(theta1, theta2)?;
        if !(theta1 < a && a <= b && b < theta2) {
            return Err(BumpError::BadFlatRegion { a, b });
        }
        Ok(Bump { shape: BumpShape::FlatTop { a, b }, support: (theta1, theta2) })
    }

    fn check_support(theta1: f64, theta2: f64) -> Result<(), BumpError> {
        if theta1 >= -PI && theta2 <= PI && theta1 < theta2 {
            Ok(())
        } else {
            Err(BumpError::BadSupport(theta1, theta2))
        }
    }

    /// True when the closed support stays away from `θ = ±π`.
    pub fn avoids_minus_one(&self) -> bool {
        self.support.0 > -PI && self.support.1 < PI
    }

    /// Value and derivative at `θ ∈ (−π, π)`.
    pub fn eval_with_derivative(&self, theta: f64) -> (f64, f64) {
        let (t1, t2) = self.support;
        if theta <= t1 || theta >= t2 {
            return (0.0, 0.0);
        }
        match self.shape {
            BumpShape::Standard => {
                let q = (t2 - theta) * (theta - t1);
                let v = (-1.0 / q).exp();
                let dq = t1 + t2 - 2.0 * theta;
                (v, v * dq / (q * q))
            }
            BumpShape::FlatTop { a, b } => {
                if theta < a {
                    let (s, ds) = step((theta - t1) / (a - t1));
                    (s, ds / (a - t1))
                } else if theta <= b {
                    (1.0, 0.0)
                } else {
                    let (s, ds) = step((t2 - theta) / (t2 - b));
                    (s, -ds / (t2 - b))
                }
            }
        }
    }
}

/// A test function on the circle.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    TrigPoly(TrigPoly),
    Bump(Bump),
}

impl TestFunction {
    pub fn is_real(&self) -> bool {
        match self {
            TestFunction::TrigPoly(p) => p.is_real(),
            TestFunction::Bump(_) => true,
        }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        match self {
            TestFunction::TrigPoly(p) => p.eval(theta),
            TestFunction::Bump(b) => Complex64::new(b.eval_with_derivative(theta).0, 0.0),
        }
    }

    pub fn eval_derivative(&self, theta: f64) -> Complex64 {
        match self {
            TestFunction::TrigPoly(p) => p.derivative().eval(theta),
            TestFunction::Bump(b) => Complex64::new(b.eval_with_derivative(theta).1, 0.0),
        }
    }
}

impl From<TrigPoly> for TestFunction {
    fn from(p: TrigPoly) -> Self {
        TestFunction::TrigPoly(p)
    }
}

impl From<Bump> for TestFunction {
    fn from(b: Bump) -> Self {
        TestFunction::Bump(b)
    }
}

/// `(1 + cos θ)/2`.
pub fn raised_cosine() -> TrigPoly {
    TrigPoly::one().add(&TrigPoly::cos(HalfInt::ONE)).scale(&real(rat(1, 2)))
}

/// `k·cos(nθ)` with integer `n`, shorthand for building test sets.
pub fn scaled_cos(k: i64, n: i64) -> TrigPoly {
    TrigPoly::cos(HalfInt::int(n)).scale(&real(int(k)))
}

/// `k·sin(nθ)`.
pub fn scaled_sin(k: i64, n: i64) -> TrigPoly {
    TrigPoly::sin(HalfInt::int(n)).scale(&real(int(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_arithmetic() {
        let c = scaled_cos(2, 1);
        assert_eq!(c.coefficient(HalfInt::ONE), real(int(1)));
        assert_eq!(c.coefficient(-HalfInt::ONE), real(int(1)));
        assert!(c.is_real());
        let s = scaled_sin(2, 1);
        assert!(s.is_real());
        // (2cos)² + (2sin)² = 4
        assert_eq!(c.mul(&c).add(&s.mul(&s)), TrigPoly::constant(int(4)));
        // d/dθ 2cos = −2sin
        assert_eq!(c.derivative(), s.scale(&real(int(-1))));
        assert_eq!(TrigPoly::exp(HalfInt::HALF).frequency_kind(), FrequencyKind::HalfOdd);
        assert_eq!(TrigPoly::exp(HalfInt::HALF).mean(), None);
        assert!((c.eval(0.3).re - 2.0 * 0.3f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn bumps() {
        let b = Bump::standard(-1.0, 1.0).unwrap();
        assert!(b.avoids_minus_one());
        let (v, d) = b.eval_with_derivative(0.0);
        assert!((v - (-1.0f64).exp()).abs() < 1e-15 && d.abs() < 1e-15);
        let h = 1e-6;
        let (_, d) = b.eval_with_derivative(0.4);
        let fd = (b.eval_with_derivative(0.4 + h).0 - b.eval_with_derivative(0.4 - h).0) / (2.0 * h);
        assert!((d - fd).abs() < 1e-8);

        let f = Bump::flat_top(-2.5, -PI / 2.0, PI / 2.0, 2.5).unwrap();
        assert_eq!(f.eval_with_derivative(1.0), (1.0, 0.0));
        assert_eq!(f.eval_with_derivative(2.6), (0.0, 0.0));
        for x in [-2.0, -1.7, 1.9, 2.3] {
            let (_, d) = f.eval_with_derivative(x);
            let fd = (f.eval_with_derivative(x + h).0 - f.eval_with_derivative(x - h).0) / (2.0 * h);
            assert!((d - fd).abs() < 1e-6, "{x}: {d} vs {fd}");
        }
        assert!(Bump::standard(-PI, 0.0).is_ok_and(|b| !b.avoids_minus_one()));
        assert!(Bump::standard(1.0, -1.0).is_err());
    }
}
