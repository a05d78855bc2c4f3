//! Test-function specifications on the command line.
//!
//! * `1`, `cos:n`, `sin:n`, `raised-cosine`, `raised-cosine-squared`, each
//!   optionally scaled as `k*…`
//! * `trig:r=a,r=a,…` with half-integer frequencies `r` and complex rational
//!   coefficients such as `1/2`, `-3i` or `1/2+1/4i`
//! * `bump:θ1,θ2` and `flat-top:θ1,a,b,θ2`

use std::fmt;

use num_traits::{One, Zero};
use svirlab::scalar::{format_complex_rational, parse_rational};
use svirlab::smeared::{raised_cosine, Bump, BumpShape, TestFunction, TrigPoly};
use svirlab::{ComplexRational, HalfInt, Rational};

use crate::UsageError;

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Trig(TrigPoly),
    Bump(Bump),
}

impl FunctionSpec {
    pub fn to_test_function(&self) -> TestFunction {
        match self {
            FunctionSpec::Trig(p) => TestFunction::TrigPoly(p.clone()),
            FunctionSpec::Bump(b) => TestFunction::Bump(*b),
        }
    }

    pub fn trig(&self) -> Option<&TrigPoly> {
        match self {
            FunctionSpec::Trig(p) => Some(p),
            FunctionSpec::Bump(_) => None,
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Trig(p) => {
                let terms: Vec<String> =
                    p.coefficients().iter().map(|(r, a)| format!("{r}={}", format_complex_rational(a))).collect();
                write!(f, "trig:{}", if terms.is_empty() { "0=0".to_string() } else { terms.join(",") })
            }
            FunctionSpec::Bump(b) => match b.shape {
                BumpShape::Standard => write!(f, "bump:{},{}", b.support.0, b.support.1),
                BumpShape::FlatTop { a, b: bb } => write!(f, "flat-top:{},{a},{bb},{}", b.support.0, b.support.1),
            },
        }
    }
}

fn real(q: Rational) -> ComplexRational {
    ComplexRational::new(q, Rational::zero())
}

fn signed_rational(s: &str) -> Option<Rational> {
    match s {
        "" | "+" => Some(Rational::one()),
        "-" => Some(-Rational::one()),
        _ => parse_rational(s.strip_prefix('+').unwrap_or(s)),
    }
}

/// `p/q`, `p/qi`, `i`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Option<ComplexRational> {
    let s = s.trim().replace(' ', "");
    let Some(body) = s.strip_suffix('i') else {
        return parse_rational(&s).map(real);
    };
    let split = body.char_indices().skip(1).filter(|(_, ch)| *ch == '+' || *ch == '-').map(|(i, _)| i).last();
    match split {
        Some(i) => Some(ComplexRational::new(parse_rational(&body[..i])?, signed_rational(&body[i..])?)),
        None => Some(ComplexRational::new(Rational::zero(), signed_rational(body)?)),
    }
}

fn floats(field: &str, s: &str, n: usize) -> Result<Vec<f64>, UsageError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| UsageError::new(field, format!("`{s}` is not a list of numbers")))?;
    if v.len() != n {
        return Err(UsageError::new(field, format!("expected {n} numbers, got `{s}`")));
    }
    Ok(v)
}

pub fn parse_function(field: &str, spec: &str) -> Result<FunctionSpec, UsageError> {
    let spec = spec.trim();
    let bad = |msg: String| UsageError::new(field, msg);
    if let Some(rest) = spec.strip_prefix("bump:") {
        let v = floats(field, rest, 2)?;
        return Bump::standard(v[0], v[1]).map(FunctionSpec::Bump).map_err(|e| bad(e.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("flat-top:") {
        let v = floats(field, rest, 4)?;
        return Bump::flat_top(v[0], v[1], v[2], v[3]).map(FunctionSpec::Bump).map_err(|e| bad(e.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("trig:") {
        let mut terms = Vec::new();
        for term in rest.split(',') {
            let (r, a) = term.split_once('=').ok_or_else(|| bad(format!("`{term}` is not freq=coefficient")))?;
            let r: HalfInt = r.trim().parse().map_err(|e| bad(format!("{e}")))?;
            let a = parse_complex(a).ok_or_else(|| bad(format!("`{a}` is not a complex rational")))?;
            terms.push((r, a));
        }
        return Ok(FunctionSpec::Trig(TrigPoly::from_coefficients(terms)));
    }
    let (scale, name) = match spec.split_once('*') {
        Some((k, name)) => (parse_complex(k).ok_or_else(|| bad(format!("`{k}` is not a scale factor")))?, name),
        None => (real(Rational::one()), spec),
    };
    let base = match name {
        "1" | "one" => TrigPoly::one(),
        "raised-cosine" => raised_cosine(),
        "raised-cosine-squared" => raised_cosine().mul(&raised_cosine()),
        _ => {
            let (kind, r) = name.split_once(':').ok_or_else(|| bad(format!("unknown test function `{spec}`")))?;
            let r: HalfInt = r.parse().map_err(|e| bad(format!("{e}")))?;
            match kind {
                "cos" => TrigPoly::cos(r),
                "sin" => TrigPoly::sin(r),
                "exp" => TrigPoly::exp(r),
                _ => return Err(bad(format!("unknown test function `{spec}`"))),
            }
        }
    };
    Ok(FunctionSpec::Trig(base.scale(&scale)))
}
