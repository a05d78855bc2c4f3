use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{Mode, ModeKind, Parity, Sector};
use crate::half::HalfInt;
use crate::linalg::{spectral_norm, NormEstimate};
use crate::scalar::{int, RealScalar};

use super::module::{IrreducibleModule, Layout};
use super::operator::{GradingOperator, SafeWindow, TruncatedOperator, WindowResidual};
use super::RepError;

/// Tolerance on float comparisons against the energy bounds.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// `H = L_0 − c/24` in the Ramond sector, `H = L_0` in the NS sector.
pub fn hamiltonian(module: &IrreducibleModule) -> TruncatedOperator<BigRational> {
    let layout = module.layout().clone();
    let shift = match layout.sector {
        Sector::Ramond => &layout.c / int(24),
        Sector::NeveuSchwarz => BigRational::zero(),
    };
    let l = layout.clone();
    TruncatedOperator::level_diagonal(layout, "H", move |idx| l.energy(idx) - &shift)
}

/// The supercharge `Q = G_0`.
pub fn supercharge(module: &IrreducibleModule) -> Result<TruncatedOperator<BigRational>, RepError> {
    if module.spec().sector != Sector::Ramond {
        return Err(RepError::NoGlobalSupercharge);
    }
    Ok(module.mode_operator(Mode::g_twice(0))?.with_label("Q"))
}

/// Exact structural checks on `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperchargeCheck {
    /// `Q² − (L_0 − c/24)` on the whole truncation.
    pub square_residual: WindowResidual,
    pub self_adjoint: bool,
    pub odd: bool,
    pub level_preserving: bool,
}

impl SuperchargeCheck {
    pub fn passed(&self) -> bool {
        self.square_residual.is_zero() && self.self_adjoint && self.odd && self.level_preserving
    }
}

pub fn check_supercharge(module: &IrreducibleModule) -> Result<SuperchargeCheck, RepError> {
    let q = supercharge(module)?;
    let full = SafeWindow::full(module.spec().cutoff);
    let square = q.compose(&q);
    let h = hamiltonian(module);
    let check = SuperchargeCheck {
        square_residual: square.residual_on(&h, full),
        self_adjoint: q.adjoint().residual_on(&q, full).is_zero(),
        odd: q.parity() == Some(Parity::Odd) && GradingOperator::new(module.layout().clone()).check(&q),
        level_preserving: q.blocks().all(|(&(o, i), _)| o == i),
    };
    Ok(check)
}

/// Partial sums of `Tr e^{−βH}` up to the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatTrace {
    pub beta: f64,
    pub multiplicities: Vec<(HalfInt, usize)>,
    /// `Σ dim_ℓ e^{−β(h+ℓ)}`.
    pub unshifted: f64,
    /// `Σ dim_ℓ e^{−β(h+ℓ−c/24)}`.
    pub shifted: f64,
    /// Geometric continuation past the cutoff using the largest multiplicity
    /// seen; an estimate, not a bound, since multiplicities keep growing.
    pub tail_estimate: f64,
    pub sector: Sector,
}

impl HeatTrace {
    /// The sum with the sector's Hamiltonian: shifted in Ramond, unshifted in NS.
    pub fn partial_sum(&self) -> f64 {
        match self.sector {
            Sector::Ramond => self.shifted,
            Sector::NeveuSchwarz => self.unshifted,
        }
    }
}

fn check_beta(beta: f64) -> Result<(), RepError> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(RepError::NonPositiveBeta(beta))
    }
}

pub fn heat_trace(layout: &Layout, beta: f64) -> Result<HeatTrace, RepError> {
    check_beta(beta)?;
    let shift = (&layout.c / int(24)).to_f64();
    let mut unshifted = 0.0;
    let mut shifted = 0.0;
    let mut multiplicities = Vec::new();
    for idx in 0..layout.level_count() {
        let d = layout.dim(idx);
        let e = layout.energy(idx).to_f64();
        unshifted += d as f64 * (-beta * e).exp();
        shifted += d as f64 * (-beta * (e - shift)).exp();
        multiplicities.push((layout.level(idx), d));
    }
    let step = layout.sector.level_step().to_f64();
    let max_mult = multiplicities.iter().map(|(_, d)| *d).max().unwrap_or(0) as f64;
    let next = layout.energy(layout.level_count() - 1).to_f64() + step;
    let e_next = match layout.sector {
        Sector::Ramond => next - shift,
        Sector::NeveuSchwarz => next,
    };
    let tail_estimate = max_mult * (-beta * e_next).exp() / (1.0 - (-beta * step).exp());
    Ok(HeatTrace { beta, multiplicities, unshifted, shifted, tail_estimate, sector: layout.sector })
}

/// `Tr(Γ e^{−βQ²})` at truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedIndex {
    pub beta: f64,
    /// `(level, even dimension, odd dimension)`.
    pub per_level: Vec<(HalfInt, usize, usize)>,
    pub value: f64,
    /// Set when every level of nonzero energy cancels, so the sum is the
    /// integer contributed by the zero-energy levels.
    pub exact: Option<i64>,
}

fn index_terms(layout: &Layout, sign: i64, beta: f64) -> (Vec<(HalfInt, usize, usize)>, f64, Option<i64>) {
    let shift = &layout.c / int(24);
    let mut per_level = Vec::new();
    let mut value = 0.0;
    let mut exact = Some(0i64);
    for idx in 0..layout.level_count() {
        let (even, odd) = layout.graded_dims(idx);
        let (even, odd) = if sign > 0 { (even, odd) } else { (odd, even) };
        let diff = even as i64 - odd as i64;
        let energy = layout.energy(idx) - &shift;
        value += diff as f64 * (-beta * energy.to_f64()).exp();
        if energy.is_zero() {
            exact = exact.map(|e| e + diff);
        } else if diff != 0 {
            exact = None;
        }
        per_level.push((layout.level(idx), even, odd));
    }
    (per_level, value, exact)
}

/// Graded index of a single irreducible Ramond module with `h = c/24`.
pub fn graded_index(module: &IrreducibleModule, beta: f64) -> Result<GradedIndex, RepError> {
    check_beta(beta)?;
    let layout = module.layout();
    if layout.sector != Sector::Ramond {
        return Err(RepError::IndexNeedsRamond);
    }
    if layout.h != &layout.c / int(24) {
        return Err(RepError::NotGraded);
    }
    let (per_level, value, exact) = index_terms(layout, 1, beta);
    Ok(GradedIndex { beta, per_level, value, exact })
}

/// A finite direct sum of Ramond modules, each with a parity offset for its
/// lowest-weight vector.
#[derive(Clone, Debug, Default)]
pub struct GradedSum {
    pub components: Vec<(Arc<Layout>, Parity)>,
}

impl GradedSum {
    pub fn push(&mut self, module: &IrreducibleModule, offset: Parity) {
        self.components.push((module.layout().clone(), offset));
    }

    /// Index of the sum; traces add and odd offsets flip the sign.
    pub fn graded_index(&self, beta: f64) -> Result<GradedIndex, RepError> {
        check_beta(beta)?;
        let mut value = 0.0;
        let mut exact = Some(0i64);
        let mut per_level: Vec<(HalfInt, usize, usize)> = Vec::new();
        for (layout, offset) in &self.components {
            if layout.sector != Sector::Ramond {
                return Err(RepError::IndexNeedsRamond);
            }
            let sign = offset.sign();
            let (levels, v, e) = index_terms(layout, sign, beta);
            value += v;
            exact = match (exact, e) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            for (l, even, odd) in levels {
                match per_level.iter_mut().find(|(x, _, _)| *x == l) {
                    Some(entry) => {
                        entry.1 += even;
                        entry.2 += odd;
                    }
                    None => per_level.push((l, even, odd)),
                }
            }
        }
        per_level.sort_by_key(|(l, _, _)| *l);
        Ok(GradedIndex { beta, per_level, value, exact })
    }

    pub fn heat_trace(&self, beta: f64) -> Result<f64, RepError> {
        self.components.iter().map(|(l, _)| heat_trace(l, beta).map(|h| h.partial_sum())).sum()
    }
}

/// Norm of a mode against powers of `1 + L_0` on its safe window.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyBound {
    pub mode: Mode,
    pub window: SafeWindow,
    /// `‖G_r (1+L_0)^{−1/2}‖` or `‖L_m (1+L_0)^{−1}‖` on the window.
    pub norm: NormEstimate,
    /// `√(2 + c r²/3)` for odd modes; no closed bound is known for `L_m`.
    pub bound: Option<f64>,
    /// Smallest `M` with `‖L_m v‖ ≤ M (1+|m|^{3/2}) ‖(1+L_0) v‖` on the window.
    pub minimal_m: Option<f64>,
    pub pass: bool,
}

pub fn energy_bound_report(module: &IrreducibleModule, modes: &[Mode]) -> Result<Vec<EnergyBound>, RepError> {
    let layout = module.layout().clone();
    let c = layout.c.to_f64();
    let mut out = Vec::new();
    for &m in modes {
        let window = SafeWindow::for_depth(layout.cutoff, m.raising_depth());
        let power = if m.kind == ModeKind::G { 0.5 } else { 1.0 };
        let op = module.mode_operator(m)?.restrict_inputs(window).to_float()?;
        let l = layout.clone();
        let weight = TruncatedOperator::level_diagonal(layout.clone(), "(1+L_0)^-p", move |idx| {
            Complex64::new((1.0 + l.energy(idx).to_f64()).powf(-power), 0.0)
        })
        .orthonormal(|z| *z)?;
        let norm = spectral_norm(&op.compose(&weight).to_dense());
        let (bound, minimal_m, pass) = match m.kind {
            ModeKind::G => {
                let r = m.index.to_f64();
                let b = (2.0 + c * r * r / 3.0).sqrt();
                (Some(b), None, norm.value <= b + BOUND_TOLERANCE)
            }
            _ => {
                let scale = 1.0 + m.index.to_rational().abs().to_f64().powf(1.5);
                let mm = norm.value / scale;
                (None, Some(mm), mm.is_finite())
            }
        };
        out.push(EnergyBound { mode: m, window, norm, bound, minimal_m, pass: pass && !window.is_empty() });
    }
    Ok(out)
}
