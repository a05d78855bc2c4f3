//! Modes, the supercharge and trace functionals as matrices on the truncated
//! irreducible quotient.

mod module;
mod operator;
mod relations;
mod spectral;

pub use module::{IrreducibleModule, Layout, UnitarityPolicy};
pub use operator::{GradingOperator, SafeWindow, TruncatedOperator, WindowResidual};
pub use relations::{bracket_operator, build_operator, relation_residual, RelationResidual};
pub use spectral::{
    check_supercharge, energy_bound_report, graded_index, hamiltonian, heat_trace, supercharge, EnergyBound,
    GradedIndex, GradedSum, HeatTrace, SuperchargeCheck, BOUND_TOLERANCE,
};

use crate::algebra::AlgebraError;
use crate::half::HalfInt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("not unitary at (c, h) = ({c}, {h}): negative norm {norm} at level {level}")]
    NotUnitary { c: String, h: String, level: HalfInt, norm: String },
    #[error("the form is indefinite from level {level} on, so there is no orthonormal basis")]
    NoHilbertSpace { level: HalfInt },
    #[error("no global supercharge in the Neveu-Schwarz sector")]
    NoGlobalSupercharge,
    #[error("representation not graded: the graded index needs h = c/24")]
    NotGraded,
    #[error("the graded index is defined for the Ramond sector only")]
    IndexNeedsRamond,
    #[error("inverse temperature must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Verma(#[from] crate::verma::VermaError),
}
