use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{hermitian_eigenvalues, svd_norm};
use crate::matrix::Matrix;
use crate::repmat::{IrreducibleModule, SafeWindow};
use crate::scalar::RealScalar;
use crate::FloatMatrix;

use super::fields::{smeared_float, FieldKind};
use super::testfn::TestFunction;
use super::SmearedError;

/// Points of the domination grid in the resolvent experiment.
pub const DOMINATION_GRID: usize = 10_000;
/// Points of the grid on which `f′²/f` is maximised.
pub const LHOSPITAL_GRID: usize = 100_000;
/// Values of `f` below this fraction of `max |f|` count as zeros of `f`.
pub const ZERO_FLOOR: f64 = 1e-10;
/// A sup above this is reported as unbounded at grid resolution.
pub const UNBOUNDED_THRESHOLD: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub struct ResolventReport {
    pub alpha: f64,
    /// Domination constant `C` with `f₁² ≤ C f₂`.
    pub c_dom: f64,
    pub window: SafeWindow,
    /// `‖G(f₁)(L(f₂)+iα)^{−1}‖²` on the window columns.
    pub norm_sq: f64,
    /// `max(0, −λ_min(C·L(f₂) − G(f₁)²))` on the truncation; with it the bound
    /// below holds for every vector of the truncation.
    pub c_tilde: f64,
    /// `max(0, κ − λ_min(C·L(f₂) − L(f₁²)))` with `κ = c/(12π)∫(f₁′² − f₁²/4)`,
    /// available for trigonometric `f₁`.
    pub c_tilde_split: Option<f64>,
    /// `C/(2|α|) + C̃/α²`.
    pub bound: f64,
    pub holds: bool,
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| -PI + 2.0 * PI * k as f64 / n as f64)
}

fn dense_hermitian(m: &FloatMatrix) -> FloatMatrix {
    let ma = m.adjoint();
    Matrix::from_fn(m.rows(), m.cols(), |r, c| (m[(r, c)] + ma[(r, c)]) * 0.5)
}

/// Float experiment for `G(f₁)(L(f₂)+iα)^{−1}` on the truncation.
pub fn resolvent_bound_experiment(
    f1: &TestFunction,
    f2: &TestFunction,
    alpha: f64,
    c_dom: f64,
    module: &IrreducibleModule,
) -> Result<ResolventReport, SmearedError> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(SmearedError::ZeroAlpha(alpha));
    }
    for theta in grid(DOMINATION_GRID) {
        let lhs = f1.eval(theta).re.powi(2);
        let rhs = c_dom * f2.eval(theta).re;
        if lhs > rhs + 1e-12 {
            return Err(SmearedError::Domination { theta, lhs, rhs });
        }
    }
    let g = smeared_float(FieldKind::G, f1, module, None)?;
    let t = smeared_float(FieldKind::L, f2, module, None)?;
    let depth = g.raising_depth() + t.raising_depth();
    let window = SafeWindow::for_depth(module.spec().cutoff, depth);
    let gd = g.to_dense();
    let td = dense_hermitian(&t.to_dense());
    let n = td.rows();
    let shifted = Matrix::from_fn(n, n, |r, c| td[(r, c)] + if r == c { Complex64::new(0.0, alpha) } else { Complex64::new(0.0, 0.0) });
    let inv = shifted.to_nalgebra().try_inverse().ok_or(SmearedError::Singular)?;
    let prod = Matrix::from_nalgebra(&(gd.to_nalgebra() * inv));
    let layout = module.layout();
    let cols: Vec<usize> = (0..layout.level_count())
        .filter(|&idx| window.contains(layout.level(idx)))
        .flat_map(|idx| layout.offset(idx)..layout.offset(idx) + layout.dim(idx))
        .collect();
    let rows: Vec<usize> = (0..n).collect();
    let norm = svd_norm(&prod.submatrix(&rows, &cols));
    let g2 = &gd * &gd;
    let diff = &td.scale(&Complex64::new(c_dom, 0.0)) - &g2;
    let lmin = hermitian_eigenvalues(&diff).first().copied().unwrap_or(0.0);
    let c_tilde = (-lmin).max(0.0);
    let c_tilde_split = match f1 {
        TestFunction::TrigPoly(p) => {
            let sq = p.mul(p);
            let l_sq = smeared_float(FieldKind::L, &TestFunction::TrigPoly(sq.clone()), module, None)?.to_dense();
            let quarter = Complex64::new(0.25, 0.0);
            let integrand = p.derivative().mul(&p.derivative());
            let mean = super::testfn::to_c64(&integrand.mean().unwrap_or_default()) - super::testfn::to_c64(&sq.mean().unwrap_or_default()) * quarter;
            let kappa = module.spec().c.to_f64() / 6.0 * mean.re;
            let diff = &td.scale(&Complex64::new(c_dom, 0.0)) - &dense_hermitian(&l_sq);
            let lmin = hermitian_eigenvalues(&diff).first().copied().unwrap_or(0.0);
            Some((kappa - lmin).max(0.0))
        }
        TestFunction::Bump(_) => None,
    };
    let bound = c_dom / (2.0 * alpha.abs()) + c_tilde / (alpha * alpha);
    let norm_sq = norm * norm;
    Ok(ResolventReport {
        alpha,
        c_dom,
        window,
        norm_sq,
        c_tilde,
        c_tilde_split,
        bound,
        holds: !window.is_empty() && norm_sq <= bound + 1e-12,
    })
}

/// `sup f′²/f` on the grid `θ_k = −π + 2πk/10⁵`.
#[derive(Clone, Debug, PartialEq)]
pub struct LHospital {
    /// `None` when the sup is unbounded at grid resolution.
    pub value: Option<f64>,
    pub argmax: f64,
    pub grid_points: usize,
}

/// Grid supremum of `h = f′²/f`, with `h = 0` where `f` vanishes. Values of
/// `f` below [`ZERO_FLOOR`]`·max|f|` are treated as zeros, since rounding in
/// the evaluation dominates there.
pub fn lhospital_constant(f: &TestFunction) -> Result<LHospital, SmearedError> {
    if !f.is_real() {
        return Err(SmearedError::NotReal);
    }
    let samples: Vec<(f64, f64, f64)> =
        grid(LHOSPITAL_GRID).map(|t| (t, f.eval(t).re, f.eval_derivative(t).re)).collect();
    let max = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(SmearedError::ZeroFunction);
    }
    let floor = ZERO_FLOOR * max;
    let mut best = (0.0f64, samples[0].0);
    for &(t, v, d) in &samples {
        if v < -floor {
            return Err(SmearedError::NegativeValue { theta: t, value: v });
        }
        let h = if v > floor { d * d / v } else { 0.0 };
        if h > best.0 || !h.is_finite() {
            best = (h, t);
        }
    }
    let value = (best.0.is_finite() && best.0 <= UNBOUNDED_THRESHOLD).then_some(best.0);
    Ok(LHospital { value, argmax: best.1, grid_points: LHOSPITAL_GRID })
}
