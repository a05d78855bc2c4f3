//! Scalar abstraction shared by the exact and floating-point backends.
//!
//! Every matrix and operator in the crate is generic over [`Scalar`]. The exact
//! backend instantiates it with [`BigRational`] or `Complex<BigRational>`, the
//! float backend with `f64`/`f32` or their complex counterparts.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{NumOps, One, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + PartialEq + Zero + One + NumOps + Neg<Output = Self> + Send + Sync + 'static
{
    /// True when arithmetic is exact, so a zero test is a proof rather than an estimate.
    const EXACT: bool;

    /// Complex conjugate. Identity on real scalars.
    fn conj(&self) -> Self;

    /// Absolute value as `f64`, used for pivot selection and residual reports.
    fn magnitude(&self) -> f64;

    fn from_rational(q: &BigRational) -> Self;
}

/// Real scalars carry an order, needed for positivity verdicts.
pub trait RealScalar: Scalar + PartialOrd {
    fn to_f64(&self) -> f64;
}

/// Scalars that contain the imaginary unit.
pub trait ComplexScalar: Scalar {
    fn i() -> Self;
    fn from_complex_rational(z: &Complex<BigRational>) -> Self;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        self.clone()
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(self).map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl RealScalar for BigRational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn conj(&self) -> Self {
                *self
            }

            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }

            fn from_rational(q: &BigRational) -> Self {
                ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $t
            }
        }

        impl RealScalar for $t {
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }

        impl Scalar for Complex<$t> {
            const EXACT: bool = false;

            fn conj(&self) -> Self {
                Complex::conj(self)
            }

            fn magnitude(&self) -> f64 {
                self.norm() as f64
            }

            fn from_rational(q: &BigRational) -> Self {
                Complex::new(<$t as Scalar>::from_rational(q), 0.0)
            }
        }

        impl ComplexScalar for Complex<$t> {
            fn i() -> Self {
                Complex::new(0.0, 1.0)
            }

            fn from_complex_rational(z: &Complex<BigRational>) -> Self {
                Complex::new(
                    <$t as Scalar>::from_rational(&z.re),
                    <$t as Scalar>::from_rational(&z.im),
                )
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

impl Scalar for Complex<BigRational> {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn magnitude(&self) -> f64 {
        let re = Scalar::magnitude(&self.re);
        let im = Scalar::magnitude(&self.im);
        re.hypot(im)
    }

    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }
}

impl ComplexScalar for Complex<BigRational> {
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn from_complex_rational(z: &Complex<BigRational>) -> Self {
        z.clone()
    }
}

/// Shorthand for building a rational from a numerator and denominator.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parse `"p/q"`, `"p"` or a plain decimal like `"0.75"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: num_bigint::BigInt = p.trim().parse().ok()?;
        let q: num_bigint::BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: num_bigint::BigInt = digits.parse().ok()?;
        let d = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
        let q = BigRational::new(n, d);
        return Some(if neg { -q } else { q });
    }
    let n: num_bigint::BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Render a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Render an exact complex rational; purely real values print like rationals.
pub fn format_complex_rational(z: &Complex<BigRational>) -> String {
    if z.im.is_zero() {
        format_rational(&z.re)
    } else if z.re.is_zero() {
        format!("{}i", format_rational(&z.im))
    } else {
        let sign = if z.im < BigRational::zero() { "-" } else { "+" };
        format!("{}{}{}i", format_rational(&z.re), sign, format_rational(&num_traits::Signed::abs(&z.im)))
    }
}
