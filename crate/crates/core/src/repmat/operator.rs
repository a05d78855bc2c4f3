use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::Parity;
use crate::half::HalfInt;
use crate::matrix::Matrix;
use crate::scalar::{RealScalar, Scalar};

use super::module::Layout;
use super::RepError;

/// Levels on which an identity is unaffected by the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SafeWindow {
    /// `None` when no level survives.
    pub max_input_level: Option<HalfInt>,
}

impl SafeWindow {
    /// Window for an identity of total raising depth `depth` at `cutoff`.
    pub fn for_depth(cutoff: HalfInt, depth: HalfInt) -> Self {
        let top = cutoff - depth;
        SafeWindow { max_input_level: (!top.is_negative()).then_some(top) }
    }

    pub fn full(cutoff: HalfInt) -> Self {
        SafeWindow { max_input_level: Some(cutoff) }
    }

    pub fn is_empty(&self) -> bool {
        self.max_input_level.is_none()
    }

    pub fn contains(&self, level: HalfInt) -> bool {
        self.max_input_level.is_some_and(|top| level <= top)
    }
}

/// Outcome of comparing two operators on a safe window.
#[derive(Clone, Debug, PartialEq)]
pub enum WindowResidual {
    WindowEmpty,
    /// Largest entry of the difference; `exact_zero` is a proof only for exact scalars.
    Value { max_abs: f64, exact_zero: bool, window: HalfInt },
}

impl WindowResidual {
    pub fn is_zero(&self) -> bool {
        matches!(self, WindowResidual::Value { exact_zero: true, .. })
    }

    pub fn within(&self, tol: f64) -> bool {
        matches!(self, WindowResidual::Value { max_abs, .. } if *max_abs <= tol)
    }
}

/// Block-sparse matrix of an operator on the truncated quotient.
///
/// Blocks are keyed by `(output level index, input level index)`. Exact
/// operators live on the orthogonal basis whose squared norms are stored in
/// the layout; float operators produced by [`TruncatedOperator::orthonormal`]
/// live on the orthonormal basis.
#[derive(Clone, Debug)]
pub struct TruncatedOperator<S> {
    layout: Arc<Layout>,
    blocks: BTreeMap<(usize, usize), Matrix<S>>,
    raising_depth: HalfInt,
    parity: Option<Parity>,
    label: String,
    orthonormal: bool,
}

impl<S: Scalar> TruncatedOperator<S> {
    pub fn zero(layout: Arc<Layout>, raising_depth: HalfInt, parity: Option<Parity>, label: impl Into<String>) -> Self {
        TruncatedOperator { layout, blocks: BTreeMap::new(), raising_depth, parity, label: label.into(), orthonormal: false }
    }

    pub fn identity(layout: Arc<Layout>) -> Self {
        let mut op = TruncatedOperator::zero(layout.clone(), HalfInt::ZERO, Some(Parity::Even), "1");
        for idx in 0..layout.level_count() {
            op.insert_block(idx, idx, Matrix::identity(layout.dim(idx)));
        }
        op
    }

    /// Diagonal operator with value `f(level index)` on each level.
    pub fn level_diagonal(layout: Arc<Layout>, label: &str, f: impl Fn(usize) -> S) -> Self {
        let mut op = TruncatedOperator::zero(layout.clone(), HalfInt::ZERO, Some(Parity::Even), label);
        for idx in 0..layout.level_count() {
            op.insert_block(idx, idx, Matrix::diagonal(&vec![f(idx); layout.dim(idx)]));
        }
        op
    }

    pub fn insert_block(&mut self, out: usize, inp: usize, block: Matrix<S>) {
        assert_eq!(block.rows(), self.layout.dim(out), "block rows must match the output level");
        assert_eq!(block.cols(), self.layout.dim(inp), "block columns must match the input level");
        if block.rows() == 0 || block.cols() == 0 {
            return;
        }
        match self.blocks.get_mut(&(out, inp)) {
            Some(b) => *b = &*b + &block,
            None => {
                self.blocks.insert((out, inp), block);
            }
        }
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn block(&self, out: usize, inp: usize) -> Option<&Matrix<S>> {
        self.blocks.get(&(out, inp))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &Matrix<S>)> {
        self.blocks.iter()
    }

    pub fn raising_depth(&self) -> HalfInt {
        self.raising_depth
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_raising_depth(mut self, depth: HalfInt) -> Self {
        self.raising_depth = depth;
        self
    }

    fn same_space(&self, other: &Self) {
        assert!(Arc::ptr_eq(&self.layout, &other.layout) || *self.layout == *other.layout, "operators live on different modules");
        assert_eq!(self.orthonormal, other.orthonormal, "mixing orthogonal and orthonormal bases");
    }

    fn join_parity(a: Option<Parity>, b: Option<Parity>) -> Option<Parity> {
        match (a, b) {
            (Some(x), Some(y)) if x == y => Some(x),
            _ => None,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedOperator<T> {
        TruncatedOperator {
            layout: self.layout.clone(),
            blocks: self.blocks.iter().map(|(k, b)| (*k, b.map(&f))).collect(),
            raising_depth: self.raising_depth,
            parity: self.parity,
            label: self.label.clone(),
            orthonormal: self.orthonormal,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_space(other);
        let mut out = self.clone();
        for ((o, i), b) in &other.blocks {
            out.insert_block(*o, *i, b.clone());
        }
        out.raising_depth = self.raising_depth.max(other.raising_depth);
        out.parity = Self::join_parity(self.parity, other.parity);
        out.label = format!("{} + {}", self.label, other.label);
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.map(|x| x.clone() * s.clone());
        out.label = self.label.clone();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.add(&other.scale(&-S::one()));
        out.label = format!("{} - {}", self.label, other.label);
        out
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        self.same_space(other);
        let mut out = TruncatedOperator {
            layout: self.layout.clone(),
            blocks: BTreeMap::new(),
            raising_depth: self.raising_depth + other.raising_depth,
            parity: match (self.parity, other.parity) {
                (Some(a), Some(b)) => Some(a.combine(b)),
                _ => None,
            },
            label: format!("{}·{}", self.label, other.label),
            orthonormal: self.orthonormal,
        };
        for (&(mid, inp), b) in &other.blocks {
            for (&(o, _), a) in self.blocks.iter().filter(|((_, m2), _)| *m2 == mid) {
                out.insert_block(o, inp, a * b);
            }
        }
        out
    }

    /// Graded bracket: anticommutator when both operators are odd, commutator otherwise.
    pub fn graded_bracket(&self, other: &Self) -> Self {
        let ab = self.compose(other);
        let ba = other.compose(self);
        let anti = self.parity == Some(Parity::Odd) && other.parity == Some(Parity::Odd);
        let mut out = if anti { ab.add(&ba) } else { ab.sub(&ba) };
        out.raising_depth = ab.raising_depth;
        out.parity = ab.parity;
        out.label = format!("[{}, {}]", self.label, other.label);
        out
    }

    /// Graded bracket with only input levels inside the window computed.
    pub fn graded_bracket_on(&self, other: &Self, window: SafeWindow) -> Self {
        let ab = self.compose(&other.restrict_inputs(window));
        let ba = other.compose(&self.restrict_inputs(window));
        let anti = self.parity == Some(Parity::Odd) && other.parity == Some(Parity::Odd);
        let mut out = if anti { ab.add(&ba) } else { ab.sub(&ba) };
        out.raising_depth = ab.raising_depth;
        out.parity = ab.parity;
        out.label = format!("[{}, {}]", self.label, other.label);
        out
    }

    /// Comparison restricted to input levels inside the window.
    pub fn residual_on(&self, other: &Self, window: SafeWindow) -> WindowResidual {
        self.same_space(other);
        let Some(top) = window.max_input_level else {
            return WindowResidual::WindowEmpty;
        };
        let diff = self.sub(other);
        let mut max_abs = 0.0f64;
        let mut exact_zero = true;
        for ((_, inp), b) in &diff.blocks {
            if self.layout.level(*inp) > top {
                continue;
            }
            if !b.is_zero() {
                exact_zero = false;
            }
            max_abs = max_abs.max(b.max_abs());
        }
        WindowResidual::Value { max_abs, exact_zero, window: top }
    }

    /// Same operator with only the input levels inside the window kept.
    pub fn restrict_inputs(&self, window: SafeWindow) -> Self {
        let mut out = self.clone();
        out.blocks.retain(|(_, inp), _| window.contains(self.layout.level(*inp)));
        out
    }

    /// Flat matrix over the whole truncation.
    pub fn to_dense(&self) -> Matrix<S> {
        let n = self.layout.total_dim();
        let mut m = Matrix::zeros(n, n);
        for (&(o, i), b) in &self.blocks {
            m.set_block(self.layout.offset(o), self.layout.offset(i), b);
        }
        m
    }

    /// Rebuild from a flat matrix, keeping nonzero blocks.
    pub fn from_dense(layout: Arc<Layout>, m: &Matrix<S>, parity: Option<Parity>, label: &str, orthonormal: bool) -> Self {
        let mut op = TruncatedOperator::zero(layout.clone(), HalfInt::ZERO, parity, label);
        op.orthonormal = orthonormal;
        let mut depth = HalfInt::ZERO;
        for o in 0..layout.level_count() {
            for i in 0..layout.level_count() {
                let b = m.block(layout.offset(o), layout.offset(i), layout.dim(o), layout.dim(i));
                if !b.is_zero() {
                    depth = depth.max(layout.level(o) - layout.level(i));
                    op.insert_block(o, i, b);
                }
            }
        }
        op.raising_depth = depth;
        op
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// Checks that nonzero blocks never raise the level by more than the declared depth.
    pub fn respects_depth(&self) -> bool {
        self.blocks.iter().all(|(&(o, i), b)| b.is_zero() || self.layout.level(o) - self.layout.level(i) <= self.raising_depth)
    }

    /// `Γ A Γ = ±A` according to the declared parity.
    pub fn is_graded(&self) -> bool {
        let Some(p) = self.parity else {
            return true;
        };
        self.blocks.iter().all(|(&(o, i), b)| {
            let po = self.layout.parities(o);
            let pi = self.layout.parities(i);
            (0..b.rows()).all(|r| (0..b.cols()).all(|c| b[(r, c)].is_zero() || po[r].combine(pi[c]) == p))
        })
    }

    /// Metric adjoint. On the orthogonal basis `A*` has blocks
    /// `D_in⁻¹ A^H D_out`; on an orthonormal basis it is the conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = TruncatedOperator {
            layout: self.layout.clone(),
            blocks: BTreeMap::new(),
            raising_depth: HalfInt::ZERO,
            parity: self.parity,
            label: format!("{}*", self.label),
            orthonormal: self.orthonormal,
        };
        let mut depth = HalfInt::ZERO;
        for (&(o, i), b) in &self.blocks {
            let mut t = b.adjoint();
            if !self.orthonormal {
                let d_out = self.layout.norms(o);
                let d_in = self.layout.norms(i);
                t = Matrix::from_fn(t.rows(), t.cols(), |r, c| {
                    t[(r, c)].clone() * S::from_rational(&(&d_out[c] / &d_in[r]))
                });
            }
            depth = depth.max(self.layout.level(i) - self.layout.level(o));
            out.insert_block(i, o, t);
        }
        out.raising_depth = depth;
        out
    }
}

impl<S: Scalar> TruncatedOperator<S> {
    /// Float matrix on the orthonormal basis: entry `(r, c)` of a block is
    /// scaled by `√d_r / √d_c`. Requires all squared norms positive.
    pub fn orthonormal(&self, to_complex: impl Fn(&S) -> Complex64) -> Result<TruncatedOperator<Complex64>, RepError> {
        if self.orthonormal {
            return Ok(self.map(|x| to_complex(x)).into_orthonormal());
        }
        if let Some(level) = self.layout.first_negative_level() {
            return Err(RepError::NoHilbertSpace { level });
        }
        let sqrt_norms: Vec<Vec<f64>> = (0..self.layout.level_count())
            .map(|idx| self.layout.norms(idx).iter().map(|d| d.to_f64().sqrt()).collect())
            .collect();
        let mut out = TruncatedOperator {
            layout: self.layout.clone(),
            blocks: BTreeMap::new(),
            raising_depth: self.raising_depth,
            parity: self.parity,
            label: self.label.clone(),
            orthonormal: true,
        };
        for (&(o, i), b) in &self.blocks {
            let m = Matrix::from_fn(b.rows(), b.cols(), |r, c| to_complex(&b[(r, c)]) * (sqrt_norms[o][r] / sqrt_norms[i][c]));
            out.insert_block(o, i, m);
        }
        Ok(out)
    }

    fn into_orthonormal(mut self) -> Self {
        self.orthonormal = true;
        self
    }
}

impl TruncatedOperator<BigRational> {
    pub fn to_complex(&self) -> TruncatedOperator<crate::ComplexRational> {
        self.map(|x| num_complex::Complex::new(x.clone(), BigRational::zero()))
    }

    pub fn to_float(&self) -> Result<TruncatedOperator<Complex64>, RepError> {
        self.orthonormal(|x| Complex64::new(x.to_f64(), 0.0))
    }
}

impl TruncatedOperator<crate::ComplexRational> {
    pub fn to_float(&self) -> Result<TruncatedOperator<Complex64>, RepError> {
        self.orthonormal(|z| Complex64::new(z.re.to_f64(), z.im.to_f64()))
    }
}

/// The grading `Γ`, diagonal `±1` on the quotient basis.
#[derive(Clone, Debug)]
pub struct GradingOperator {
    layout: Arc<Layout>,
}

impl GradingOperator {
    pub fn new(layout: Arc<Layout>) -> Self {
        GradingOperator { layout }
    }

    pub fn signs(&self) -> Vec<i64> {
        (0..self.layout.level_count()).flat_map(|idx| self.layout.parities(idx).iter().map(|p| p.sign())).collect()
    }

    pub fn operator<S: Scalar>(&self) -> TruncatedOperator<S> {
        let mut op = TruncatedOperator::zero(self.layout.clone(), HalfInt::ZERO, Some(Parity::Even), "Γ");
        for idx in 0..self.layout.level_count() {
            let d: Vec<S> = self.layout.parities(idx).iter().map(|p| S::from_rational(&BigRational::from_integer(p.sign().into()))).collect();
            op.insert_block(idx, idx, Matrix::diagonal(&d));
        }
        op
    }

    /// `Γ A Γ = ±A` as an exact matrix identity.
    pub fn check<S: Scalar>(&self, a: &TruncatedOperator<S>) -> bool {
        let g: TruncatedOperator<S> = self.operator();
        let g = if a.is_orthonormal() { g.into_orthonormal() } else { g };
        let conj = g.compose(a).compose(&g);
        match a.parity() {
            Some(Parity::Even) => conj.residual_on(a, SafeWindow::full(self.layout.cutoff)).is_zero(),
            Some(Parity::Odd) => conj.add(a).is_zero(),
            None => true,
        }
    }
}
