//! Test functions on the circle, their Fourier modes, and smeared fields
//! `L(f) = Σ f̂_n L_n`, `G(f) = Σ f̂_r G_r` on the truncated modules.

mod experiments;
mod fields;
pub mod quadrature;
mod testfn;

pub use experiments::{
    lhospital_constant, resolvent_bound_experiment, LHospital, ResolventReport, DOMINATION_GRID, LHOSPITAL_GRID,
    UNBOUNDED_THRESHOLD, ZERO_FLOOR,
};
pub use fields::{
    check_admissible, float_field, fourier_modes, local_supercharge_check, local_supercharge_exact,
    local_supercharge_numeric, raising_depth, smeared_cr_residual, smeared_exact, smeared_float, CrPair, CrResidual,
    FieldKind, LocalSuperchargeCheck, ModeCoefficients, COEFFICIENT_TOLERANCE, DEFAULT_SCAN_LIMIT, MODE_THRESHOLD,
};
pub use testfn::{raised_cosine, scaled_cos, scaled_sin, Bump, BumpError, BumpShape, FrequencyKind, TestFunction, TrigPoly};

use crate::algebra::Sector;
use crate::repmat::RepError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SmearedError {
    #[error("{0}")]
    Support(String),
    #[error("{kind:?}-field in the {} sector needs integer frequencies", sector.name())]
    FrequencyMismatch { kind: FieldKind, sector: Sector },
    #[error("α must be a nonzero real number, got {0}")]
    ZeroAlpha(f64),
    #[error("f1² ≤ C·f2 fails at θ = {theta}: {lhs} > {rhs}")]
    Domination { theta: f64, lhs: f64, rhs: f64 },
    #[error("test function is negative at θ = {theta}: {value}")]
    NegativeValue { theta: f64, value: f64 },
    #[error("test function vanishes identically")]
    ZeroFunction,
    #[error("test function must be real")]
    NotReal,
    #[error("L(f) + iα is singular on the truncation")]
    Singular,
    #[error(transparent)]
    Bump(#[from] BumpError),
    #[error(transparent)]
    Rep(#[from] RepError),
}
