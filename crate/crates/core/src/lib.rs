//! Exact level-truncated lowest-weight modules of the Neveu-Schwarz and Ramond
//! super-Virasoro algebras, and the operator identities that live on them.
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: structure constants and normal ordering of generator words.
//! * [`verma`]: PBW bases, Gram (Shapovalov) matrices and unitarity scans.
//! * [`repmat`]: mode matrices on the irreducible quotient, the supercharge,
//!   heat traces and the graded index.
//! * [`smeared`]: test functions, smeared fields and their commutation relations.
//! * [`superderiv`]: the superderivation `δ`, its identities and smoothing.
//!
//! Arithmetic is generic over [`Scalar`]; exact verdicts use [`Rational`], norm
//! estimates use `f64`.

pub mod algebra;
pub mod half;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod repmat;
pub mod scalar;
pub mod smeared;
pub mod superderiv;
pub mod verma;

pub use algebra::{bracket, normal_order, FormalCombination, Mode, ModeKind, Parity, Sector};
pub use half::HalfInt;
pub use matrix::Matrix;
pub use poly::CPoly;
pub use scalar::{ComplexScalar, RealScalar, Scalar};

pub type Rational = num_rational::BigRational;
pub type ComplexRational = num_complex::Complex<Rational>;
pub type RationalMatrix = Matrix<Rational>;
pub type ComplexRationalMatrix = Matrix<ComplexRational>;
pub type FloatMatrix = Matrix<num_complex::Complex64>;
