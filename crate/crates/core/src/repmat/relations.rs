use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{bracket_terms, Mode};
use crate::half::HalfInt;

use super::module::IrreducibleModule;
use super::operator::{SafeWindow, TruncatedOperator, WindowResidual};
use super::RepError;

/// Exact matrix of a mode on the quotient; alias of [`IrreducibleModule::mode_operator`].
pub fn build_operator(m: Mode, module: &IrreducibleModule) -> Result<TruncatedOperator<BigRational>, RepError> {
    module.mode_operator(m)
}

/// The right-hand side of `[a, b]` as an operator.
pub fn bracket_operator(a: Mode, b: Mode, module: &IrreducibleModule) -> Result<TruncatedOperator<BigRational>, RepError> {
    a.validate(module.spec().sector)?;
    b.validate(module.spec().sector)?;
    let bt = bracket_terms(a, b);
    let layout = module.layout().clone();
    let depth = a.raising_depth() + b.raising_depth();
    let mut out = TruncatedOperator::zero(layout.clone(), depth, Some(a.parity().combine(b.parity())), format!("rhs[{a}, {b}]"));
    for (q, z) in &bt.terms {
        out = out.add(&module.mode_operator(*z)?.scale(q));
    }
    if !bt.central.is_zero() {
        let k = &bt.central * &module.spec().c;
        out = out.add(&TruncatedOperator::identity(layout).scale(&k));
    }
    Ok(out.with_raising_depth(depth).with_label(format!("rhs[{a}, {b}]")))
}

/// Residual of the bracket relation for `(a, b)`, on input levels up to
/// `cutoff − (raise(a) + raise(b))`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationResidual {
    pub a: Mode,
    pub b: Mode,
    pub window: SafeWindow,
    pub residual: WindowResidual,
}

pub fn relation_residual(a: Mode, b: Mode, module: &IrreducibleModule) -> Result<RelationResidual, RepError> {
    let depth: HalfInt = a.raising_depth() + b.raising_depth();
    let window = SafeWindow::for_depth(module.spec().cutoff, depth);
    if window.is_empty() {
        return Ok(RelationResidual { a, b, window, residual: WindowResidual::WindowEmpty });
    }
    let lhs = module.mode_operator(a)?.graded_bracket_on(&module.mode_operator(b)?, window);
    let rhs = bracket_operator(a, b, module)?;
    Ok(RelationResidual { a, b, window, residual: lhs.residual_on(&rhs, window) })
}
