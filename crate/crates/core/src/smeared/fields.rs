use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Mode, ModeKind, Parity, Sector};
use crate::half::HalfInt;
use crate::repmat::{IrreducibleModule, SafeWindow, TruncatedOperator, WindowResidual};
use crate::scalar::{int, rat};
use crate::ComplexRational;

use super::quadrature::integrate;
use super::testfn::{to_c64, FrequencyKind, TestFunction, TrigPoly};
use super::SmearedError;

/// Absolute tolerance per quadrature coefficient.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-12;
/// Coefficients at or below this magnitude do not extend the default mode cutoff.
pub const MODE_THRESHOLD: f64 = 1e-14;
/// Frequencies scanned when neither a mode cutoff nor a module bounds the search.
pub const DEFAULT_SCAN_LIMIT: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    L,
    G,
}

impl FieldKind {
    fn mode(self, r: HalfInt) -> Mode {
        match self {
            FieldKind::L => Mode { kind: ModeKind::L, index: r },
            FieldKind::G => Mode::g(r),
        }
    }

    fn parity(self) -> Parity {
        match self {
            FieldKind::L => Parity::Even,
            FieldKind::G => Parity::Odd,
        }
    }

    fn half_odd(self, sector: Sector) -> bool {
        self == FieldKind::G && sector == Sector::NeveuSchwarz
    }
}

/// Fourier coefficients of a test function, keyed by frequency.
#[derive(Clone, Debug, PartialEq)]
pub enum ModeCoefficients {
    Exact(BTreeMap<HalfInt, ComplexRational>),
    Numeric(BTreeMap<HalfInt, Complex64>),
}

impl ModeCoefficients {
    pub fn to_float(&self) -> BTreeMap<HalfInt, Complex64> {
        match self {
            ModeCoefficients::Exact(m) => m.iter().map(|(r, a)| (*r, to_c64(a))).collect(),
            ModeCoefficients::Numeric(m) => m.clone(),
        }
    }

    /// Largest `|r|` whose coefficient exceeds [`MODE_THRESHOLD`].
    pub fn effective_cutoff(&self) -> HalfInt {
        self.to_float().iter().filter(|(_, a)| a.norm() > MODE_THRESHOLD).map(|(r, _)| r.abs()).max().unwrap_or(HalfInt::ZERO)
    }
}

fn ns_support_error(detail: &str) -> SmearedError {
    SmearedError::Support(format!(
        "Neveu-Schwarz G-smearing needs a test function whose support avoids the point −1 (θ = ±π); {detail}"
    ))
}

/// Checks that a trigonometric polynomial has the frequencies the field needs.
pub fn check_admissible(kind: FieldKind, sector: Sector, p: &TrigPoly) -> Result<(), SmearedError> {
    let fk = p.frequency_kind();
    if fk == FrequencyKind::Zero {
        return Ok(());
    }
    if kind.half_odd(sector) {
        return match fk {
            FrequencyKind::HalfOdd => Ok(()),
            _ => Err(ns_support_error("a function with integer frequencies is periodic and generically nonzero there")),
        };
    }
    match fk {
        FrequencyKind::Integer => Ok(()),
        _ => Err(SmearedError::FrequencyMismatch { kind, sector }),
    }
}

/// Frequencies `r` of the field's modes with `|r| ≤ cutoff`.
fn frequencies(kind: FieldKind, sector: Sector, cutoff: HalfInt) -> Vec<HalfInt> {
    let t = cutoff.twice();
    if kind.half_odd(sector) {
        (-t..=t).filter(|x| x.rem_euclid(2) == 1).map(HalfInt::from_twice).collect()
    } else {
        (-t..=t).filter(|x| x.rem_euclid(2) == 0).map(HalfInt::from_twice).collect()
    }
}

/// `f̂_r = ∫_{−π}^{π} f(θ) e^{−irθ} dθ/2π` by adaptive quadrature over `[a, b]`.
pub(crate) fn quadrature_coefficient(f: impl Fn(f64) -> Complex64, r: HalfInt, a: f64, b: f64) -> Complex64 {
    let rf = r.to_f64();
    let q = integrate(|t| f(t) * Complex64::new(0.0, -rf * t).exp(), a, b, 2.0 * PI * COEFFICIENT_TOLERANCE);
    q.value / (2.0 * PI)
}

/// Fourier coefficients of `f` for the given field: exact for trigonometric
/// polynomials, quadrature for bumps. Without an explicit cutoff, bump
/// coefficients are scanned up to [`DEFAULT_SCAN_LIMIT`] and trimmed to the
/// last one above [`MODE_THRESHOLD`].
pub fn fourier_modes(
    f: &TestFunction,
    sector: Sector,
    kind: FieldKind,
    mode_cutoff: Option<HalfInt>,
) -> Result<ModeCoefficients, SmearedError> {
    match f {
        TestFunction::TrigPoly(p) => {
            check_admissible(kind, sector, p)?;
            let coeffs = p
                .coefficients()
                .iter()
                .filter(|(r, _)| mode_cutoff.is_none_or(|m| r.abs() <= m))
                .map(|(r, a)| (*r, a.clone()))
                .collect();
            Ok(ModeCoefficients::Exact(coeffs))
        }
        TestFunction::Bump(b) => {
            if kind.half_odd(sector) && !b.avoids_minus_one() {
                return Err(ns_support_error(&format!("support ({}, {}) reaches it", b.support.0, b.support.1)));
            }
            let limit = mode_cutoff.unwrap_or(HalfInt::int(DEFAULT_SCAN_LIMIT));
            let (a, bb) = b.support;
            let mut coeffs: BTreeMap<HalfInt, Complex64> = frequencies(kind, sector, limit)
                .into_iter()
                .map(|r| (r, quadrature_coefficient(|t| f.eval(t), r, a, bb)))
                .collect();
            if mode_cutoff.is_none() {
                let eff = ModeCoefficients::Numeric(coeffs.clone()).effective_cutoff();
                coeffs.retain(|r, _| r.abs() <= eff);
            }
            Ok(ModeCoefficients::Numeric(coeffs))
        }
    }
}

fn depth_of(freqs: impl Iterator<Item = HalfInt>) -> HalfInt {
    freqs.map(|r| -r).fold(HalfInt::ZERO, HalfInt::max)
}

/// Raising depth of the smeared field of `p`: the largest `−r` with `a_r ≠ 0`.
pub fn raising_depth(p: &TrigPoly) -> HalfInt {
    depth_of(p.coefficients().keys().copied())
}

/// `Σ a_r X_r` with exact coefficients, on the orthogonal quotient basis.
pub fn smeared_exact(
    kind: FieldKind,
    p: &TrigPoly,
    module: &IrreducibleModule,
) -> Result<TruncatedOperator<ComplexRational>, SmearedError> {
    let sector = module.spec().sector;
    check_admissible(kind, sector, p)?;
    let label = format!("{kind:?}({p})");
    let mut out = TruncatedOperator::zero(module.layout().clone(), HalfInt::ZERO, Some(kind.parity()), label.clone());
    for (r, a) in p.coefficients() {
        let op = module.mode_operator(kind.mode(*r))?.to_complex().scale(a);
        out = out.add(&op);
    }
    Ok(out.with_raising_depth(raising_depth(p)).with_label(label))
}

/// Float smeared field on the orthonormal basis. For bumps the default mode
/// cutoff is the effective cutoff capped at the level cutoff, since higher
/// modes act as zero on the truncation.
pub fn smeared_float(
    kind: FieldKind,
    f: &TestFunction,
    module: &IrreducibleModule,
    mode_cutoff: Option<HalfInt>,
) -> Result<TruncatedOperator<Complex64>, SmearedError> {
    let sector = module.spec().sector;
    let cap = mode_cutoff.unwrap_or(module.spec().cutoff);
    let coeffs = fourier_modes(f, sector, kind, Some(cap))?;
    let mut coeffs = coeffs.to_float();
    if mode_cutoff.is_none() {
        let eff = ModeCoefficients::Numeric(coeffs.clone()).effective_cutoff();
        coeffs.retain(|r, _| r.abs() <= eff);
    }
    float_field(kind, &coeffs, module)
}

/// `Σ a_r X_r` from float coefficients.
pub fn float_field(
    kind: FieldKind,
    coeffs: &BTreeMap<HalfInt, Complex64>,
    module: &IrreducibleModule,
) -> Result<TruncatedOperator<Complex64>, SmearedError> {
    let layout = module.layout().clone();
    let label = format!("{kind:?}(f)");
    let mut out = TruncatedOperator::<Complex64>::zero(layout.clone(), HalfInt::ZERO, Some(kind.parity()), label.clone())
        .orthonormal(|z| *z)?;
    for (r, a) in coeffs {
        let op = module.mode_operator(kind.mode(*r))?.to_float()?.scale(a);
        out = out.add(&op);
    }
    let depth = depth_of(coeffs.iter().filter(|(_, a)| !a.is_zero()).map(|(r, _)| *r));
    Ok(out.with_raising_depth(depth).with_label(label))
}

/// Which line of the smeared commutation relations to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrPair {
    LL,
    LG,
    GG,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrResidual {
    pub pair: CrPair,
    pub window: SafeWindow,
    pub residual: WindowResidual,
    /// Scalar multiple of the identity on the right-hand side.
    pub central: ComplexRational,
}

fn i_times(q: BigRational) -> ComplexRational {
    Complex::new(BigRational::zero(), q)
}

fn mean(p: &TrigPoly) -> ComplexRational {
    p.mean().expect("integer-frequency product")
}

/// Residual of one smeared commutation relation, exact, on the safe window of
/// total depth `depth(f) + depth(g)`:
///
/// * `[L(f), L(g)] = −iL(f′g) + iL(fg′) + i c/12 · mean(f‴g + f′g)`
/// * `[L(f), G(g)] = iG(fg′) − (i/2)G(f′g)`
/// * `[G(f), G(g)] = 2L(fg) + c/3 · mean(f′g′ − fg/4)`
///
/// where `mean(p) = ∫_{−π}^{π} p dθ/2π`.
pub fn smeared_cr_residual(
    pair: CrPair,
    f: &TrigPoly,
    g: &TrigPoly,
    module: &IrreducibleModule,
) -> Result<CrResidual, SmearedError> {
    let (kf, kg) = match pair {
        CrPair::LL => (FieldKind::L, FieldKind::L),
        CrPair::LG => (FieldKind::L, FieldKind::G),
        CrPair::GG => (FieldKind::G, FieldKind::G),
    };
    let window = SafeWindow::for_depth(module.spec().cutoff, raising_depth(f) + raising_depth(g));
    let a = smeared_exact(kf, f, module)?;
    let b = smeared_exact(kg, g, module)?;
    let c = Complex::new(module.spec().c.clone(), BigRational::zero());
    let (fp, gp) = (f.derivative(), g.derivative());
    let one = Complex::new(BigRational::one(), BigRational::zero());
    let (rhs, central) = match pair {
        CrPair::LL => {
            let x = fp.mul(g).scale(&i_times(int(-1))).add(&f.mul(&gp).scale(&i_times(int(1))));
            let k = mean(&fp.derivative().derivative().mul(g).add(&fp.mul(g))) * i_times(rat(1, 12)) * &c;
            (smeared_exact(FieldKind::L, &x, module)?, k)
        }
        CrPair::LG => {
            let x = f.mul(&gp).scale(&i_times(int(1))).add(&fp.mul(g).scale(&i_times(rat(-1, 2))));
            (smeared_exact(FieldKind::G, &x, module)?, ComplexRational::zero())
        }
        CrPair::GG => {
            let x = f.mul(g).scale(&(one.clone() + one.clone()));
            let k = mean(&fp.mul(&gp).sub(&f.mul(g).scale(&Complex::new(rat(1, 4), BigRational::zero())))) * &c
                * Complex::new(rat(1, 3), BigRational::zero());
            (smeared_exact(FieldKind::L, &x, module)?, k)
        }
    };
    if window.is_empty() {
        return Ok(CrResidual { pair, window, residual: WindowResidual::WindowEmpty, central });
    }
    let id = TruncatedOperator::<BigRational>::identity(module.layout().clone()).to_complex();
    let rhs = rhs.add(&id.scale(&central));
    let lhs = a.graded_bracket_on(&b, window);
    Ok(CrResidual { pair, window, residual: lhs.residual_on(&rhs, window), central })
}

/// Outcome of the local supercharge identity
/// `G(φ)² = L(φ²) + c/(12π) ∫_{−π}^{π} (φ′² − φ²/4) dθ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSuperchargeCheck {
    pub window: SafeWindow,
    pub residual: WindowResidual,
    /// The scalar term `c/(12π) ∫ (φ′² − φ²/4)`.
    pub constant: f64,
    /// Mode cutoff of the band-limited `φ_R` (numeric backend).
    pub mode_cutoff: HalfInt,
    /// `max |φ − φ_R|` on a grid (numeric backend).
    pub band_limit_error: Option<f64>,
    pub exact: bool,
}

/// Exact check for a trigonometric polynomial `φ`.
pub fn local_supercharge_exact(phi: &TrigPoly, module: &IrreducibleModule) -> Result<LocalSuperchargeCheck, SmearedError> {
    let g = smeared_exact(FieldKind::G, phi, module)?;
    let sq = phi.mul(phi);
    let kappa = mean(&phi.derivative().mul(&phi.derivative()).sub(&sq.scale(&Complex::new(rat(1, 4), BigRational::zero()))))
        * Complex::new(&module.spec().c * rat(1, 6), BigRational::zero());
    let depth = raising_depth(phi);
    let window = SafeWindow::for_depth(module.spec().cutoff, depth + depth);
    let id = TruncatedOperator::<BigRational>::identity(module.layout().clone()).to_complex();
    let rhs = smeared_exact(FieldKind::L, &sq, module)?.add(&id.scale(&kappa));
    let residual = g.compose(&g.restrict_inputs(window)).residual_on(&rhs, window);
    Ok(LocalSuperchargeCheck {
        window,
        residual,
        constant: to_c64(&kappa).re,
        mode_cutoff: phi.degree(),
        band_limit_error: None,
        exact: true,
    })
}

/// Numeric check for a bump `φ`, band-limited to frequencies `|r| ≤ R`.
///
/// The `G` side uses quadrature coefficients of `φ`; the `L` side and the
/// constant are computed by separate quadratures of `φ_R²` and
/// `φ_R′² − φ_R²/4` over `(−π, π)`, so both sides are independent.
pub fn local_supercharge_numeric(
    phi: &TestFunction,
    module: &IrreducibleModule,
    mode_cutoff: HalfInt,
) -> Result<LocalSuperchargeCheck, SmearedError> {
    let sector = module.spec().sector;
    let coeffs = fourier_modes(phi, sector, FieldKind::G, Some(mode_cutoff))?.to_float();
    let g = float_field(FieldKind::G, &coeffs, module)?;
    let eval = |t: f64| -> (Complex64, Complex64) {
        coeffs.iter().fold((Complex64::zero(), Complex64::zero()), |(v, d), (r, a)| {
            let e = a * Complex64::new(0.0, r.to_f64() * t).exp();
            (v + e, d + e * Complex64::new(0.0, r.to_f64()))
        })
    };
    let sq_coeffs: BTreeMap<HalfInt, Complex64> = frequencies(FieldKind::L, sector, mode_cutoff + mode_cutoff)
        .into_iter()
        .map(|n| (n, quadrature_coefficient(|t| eval(t).0 * eval(t).0, n, -PI, PI)))
        .collect();
    let c = crate::scalar::RealScalar::to_f64(&module.spec().c);
    let integral = integrate(
        |t| {
            let (v, d) = eval(t);
            d * d - v * v * 0.25
        },
        -PI,
        PI,
        COEFFICIENT_TOLERANCE,
    )
    .value;
    let kappa = c / (12.0 * PI) * integral.re;
    let depth = depth_of(coeffs.keys().copied());
    let window = SafeWindow::for_depth(module.spec().cutoff, depth + depth);
    let id = TruncatedOperator::<BigRational>::identity(module.layout().clone()).to_float()?;
    let rhs = float_field(FieldKind::L, &sq_coeffs, module)?.add(&id.scale(&Complex64::new(kappa, 0.0)));
    let residual = g.compose(&g.restrict_inputs(window)).residual_on(&rhs, window);
    let band_limit_error = (0..2000)
        .map(|k| -PI + 2.0 * PI * (k as f64 + 0.5) / 2000.0)
        .map(|t| (phi.eval(t) - eval(t).0).norm())
        .fold(0.0, f64::max);
    Ok(LocalSuperchargeCheck {
        window,
        residual,
        constant: kappa,
        mode_cutoff,
        band_limit_error: Some(band_limit_error),
        exact: false,
    })
}

/// Dispatches on the test function: exact for trigonometric polynomials,
/// numeric for bumps. The default numeric cutoff is the largest admissible
/// frequency `R` with `2R ≤` the level cutoff, so the window is nonempty.
pub fn local_supercharge_check(
    phi: &TestFunction,
    module: &IrreducibleModule,
    mode_cutoff: Option<HalfInt>,
) -> Result<LocalSuperchargeCheck, SmearedError> {
    match phi {
        TestFunction::TrigPoly(p) => local_supercharge_exact(p, module),
        TestFunction::Bump(_) => {
            let sector = module.spec().sector;
            let r = mode_cutoff.unwrap_or_else(|| {
                let half = HalfInt::from_twice(module.spec().cutoff.twice() / 2);
                frequencies(FieldKind::G, sector, half).into_iter().max().unwrap_or(HalfInt::ZERO)
            });
            local_supercharge_numeric(phi, module, r)
        }
    }
}
