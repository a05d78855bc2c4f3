//! The superderivation `δ(a) = Qa − γ(a)Q` on matrices over a truncated
//! module, its algebraic identities, and the smoothing map
//! `a ↦ a_f = ∫ e^{itH} a e^{−itH} f(t) dt`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Parity, Sector};
use crate::half::HalfInt;
use crate::linalg::svd_norm;
use crate::matrix::Matrix;
use crate::repmat::{
    hamiltonian, heat_trace, supercharge, GradingOperator, IrreducibleModule, RepError, SafeWindow, TruncatedOperator,
};
use crate::scalar::{int, RealScalar, Scalar};
use crate::smeared::{local_supercharge_exact, smeared_exact, FieldKind, SmearedError, TrigPoly};
use crate::ComplexRational;

/// Float tolerance for the identity and smoothing checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
/// Float tolerance for submultiplicativity of `‖·‖₁`.
pub const SUBMULTIPLICATIVE_TOLERANCE: f64 = 1e-9;
/// Random rational entries are `k/RATIONAL_GRID` with `|k| ≤ RATIONAL_GRID`.
pub const RATIONAL_GRID: i64 = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SuperError {
    #[error("the supercharge must be odd for the grading")]
    NotOdd,
    #[error("operation needs an orthonormal basis")]
    NotOrthonormal,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Smeared(#[from] SmearedError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeclaredParity {
    Even,
    Odd,
    Mixed,
}

impl DeclaredParity {
    pub fn flip(self) -> Self {
        match self {
            DeclaredParity::Even => DeclaredParity::Odd,
            DeclaredParity::Odd => DeclaredParity::Even,
            DeclaredParity::Mixed => DeclaredParity::Mixed,
        }
    }
}

impl From<Parity> for DeclaredParity {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => DeclaredParity::Even,
            Parity::Odd => DeclaredParity::Odd,
        }
    }
}

/// A matrix over the quotient basis with a declared parity.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMatrix<S> {
    pub matrix: Matrix<S>,
    pub parity: DeclaredParity,
}

impl<S: Scalar> GradedMatrix<S> {
    pub fn new(matrix: Matrix<S>, parity: DeclaredParity) -> Self {
        GradedMatrix { matrix, parity }
    }

    pub fn mixed(matrix: Matrix<S>) -> Self {
        GradedMatrix { matrix, parity: DeclaredParity::Mixed }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let parity = match (self.parity, other.parity) {
            (DeclaredParity::Mixed, _) | (_, DeclaredParity::Mixed) => DeclaredParity::Mixed,
            (a, b) if a == b => DeclaredParity::Even,
            _ => DeclaredParity::Odd,
        };
        GradedMatrix { matrix: &self.matrix * &other.matrix, parity }
    }

    pub fn add(&self, other: &Self) -> Self {
        let parity = if self.parity == other.parity { self.parity } else { DeclaredParity::Mixed };
        GradedMatrix { matrix: &self.matrix + &other.matrix, parity }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let parity = if self.parity == other.parity { self.parity } else { DeclaredParity::Mixed };
        GradedMatrix { matrix: &self.matrix - &other.matrix, parity }
    }
}

/// The supercharge, grading and metric of one truncated module.
#[derive(Clone, Debug)]
pub struct SuperContext<S> {
    q: Matrix<S>,
    signs: Vec<i64>,
    /// Squared norms of the basis; `None` on an orthonormal basis.
    norms: Option<Vec<BigRational>>,
}

impl<S: Scalar> SuperContext<S> {
    /// Requires `Q` odd for the module's grading.
    pub fn from_operator(q: &TruncatedOperator<S>) -> Result<Self, SuperError> {
        let layout = q.layout().clone();
        let grading = GradingOperator::new(layout.clone());
        if q.parity() != Some(Parity::Odd) || !grading.check(q) {
            return Err(SuperError::NotOdd);
        }
        let norms = (!q.is_orthonormal())
            .then(|| (0..layout.level_count()).flat_map(|idx| layout.norms(idx).iter().cloned()).collect());
        Ok(SuperContext { q: q.to_dense(), signs: grading.signs(), norms })
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn q(&self) -> GradedMatrix<S> {
        GradedMatrix::new(self.q.clone(), DeclaredParity::Odd)
    }

    pub fn gamma_matrix(&self) -> GradedMatrix<S> {
        let d: Vec<S> = self.signs.iter().map(|s| S::from_rational(&int(*s))).collect();
        GradedMatrix::new(Matrix::diagonal(&d), DeclaredParity::Even)
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }

    /// `γ(a) = ΓaΓ`.
    pub fn gamma(&self, a: &GradedMatrix<S>) -> GradedMatrix<S> {
        let m = &a.matrix;
        let matrix = Matrix::from_fn(m.rows(), m.cols(), |r, c| {
            if self.signs[r] * self.signs[c] > 0 {
                m[(r, c)].clone()
            } else {
                -m[(r, c)].clone()
            }
        });
        GradedMatrix::new(matrix, a.parity)
    }

    /// `δ(a) = Qa − γ(a)Q`.
    pub fn delta(&self, a: &GradedMatrix<S>) -> GradedMatrix<S> {
        let qa = &self.q * &a.matrix;
        let gq = &self.gamma(a).matrix * &self.q;
        GradedMatrix::new(&qa - &gq, a.parity.flip())
    }

    /// Adjoint for the module's inner product.
    pub fn adjoint(&self, a: &GradedMatrix<S>) -> GradedMatrix<S> {
        let t = a.matrix.adjoint();
        let matrix = match &self.norms {
            None => t,
            Some(d) => Matrix::from_fn(t.rows(), t.cols(), |r, c| t[(r, c)].clone() * S::from_rational(&(&d[c] / &d[r]))),
        };
        GradedMatrix::new(matrix, a.parity)
    }

    /// `(a ± γ(a))/2`.
    pub fn project(&self, a: &Matrix<S>, parity: Parity) -> GradedMatrix<S> {
        let g = self.gamma(&GradedMatrix::mixed(a.clone())).matrix;
        let half = S::from_rational(&BigRational::new(1.into(), 2.into()));
        let m = match parity {
            Parity::Even => a + &g,
            Parity::Odd => a - &g,
        };
        GradedMatrix::new(m.scale(&half), parity.into())
    }

    /// Exact check of the declared parity.
    pub fn is_graded(&self, a: &GradedMatrix<S>) -> bool {
        let g = self.gamma(a).matrix;
        match a.parity {
            DeclaredParity::Even => g == a.matrix,
            DeclaredParity::Odd => (&g + &a.matrix).is_zero(),
            DeclaredParity::Mixed => true,
        }
    }
}

/// One identity checked over a batch of samples.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    /// Exact backend: every residual matrix was identically zero.
    pub exact: bool,
    pub pass: bool,
}

fn record<S: Scalar>(name: &str, residuals: &[Matrix<S>], tol: f64) -> IdentityCheck {
    let max_residual = residuals.iter().map(Matrix::max_abs).fold(0.0, f64::max);
    let all_zero = residuals.iter().all(Matrix::is_zero);
    let pass = if S::EXACT { all_zero } else { max_residual <= tol };
    IdentityCheck { name: name.to_string(), samples: residuals.len(), max_residual, exact: S::EXACT && all_zero, pass }
}

/// Draws random scalars for the identity suites.
pub trait Sampler<S> {
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> S;
}

/// Uniform rationals `k/16` in `[−1, 1]`.
pub struct RationalSampler;

impl Sampler<BigRational> for RationalSampler {
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> BigRational {
        BigRational::new(rng.gen_range(-RATIONAL_GRID..=RATIONAL_GRID).into(), RATIONAL_GRID.into())
    }
}

impl Sampler<ComplexRational> for RationalSampler {
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> ComplexRational {
        let re: BigRational = self.sample(rng);
        let im: BigRational = self.sample(rng);
        ComplexRational::new(re, im)
    }
}

/// Uniform complex floats with real and imaginary parts in `[−1, 1]`.
pub struct FloatSampler;

impl Sampler<Complex64> for FloatSampler {
    fn sample(&mut self, rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    }
}

/// A random homogeneous matrix: uniform entries projected to the given parity.
pub fn random_graded<S: Scalar>(
    ctx: &SuperContext<S>,
    parity: Parity,
    sampler: &mut impl Sampler<S>,
    rng: &mut ChaCha8Rng,
) -> GradedMatrix<S> {
    let n = ctx.dim();
    let m = Matrix::from_fn(n, n, |_, _| sampler.sample(rng));
    ctx.project(&m, parity)
}

fn random_parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Checks on `samples` seeded random homogeneous pairs `(a, b)`:
///
/// * Leibniz: `δ(ab) = δ(a)b + γ(a)δ(b)`
/// * star: `δ(a*) = γ(δ(a)*)`
/// * grading: `δ(γ(a)) = −γ(δ(a))`
/// * square: `δ²(a) = [Q², a]`
pub fn identity_suite<S: Scalar>(
    ctx: &SuperContext<S>,
    samples: usize,
    seed: u64,
    sampler: &mut impl Sampler<S>,
) -> Vec<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q2 = &ctx.q * &ctx.q;
    let (mut leibniz, mut star, mut grading, mut square) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for _ in 0..samples {
        let pa = random_parity(&mut rng);
        let pb = random_parity(&mut rng);
        let a = random_graded(ctx, pa, sampler, &mut rng);
        let b = random_graded(ctx, pb, sampler, &mut rng);
        let lhs = ctx.delta(&a.mul(&b));
        let rhs = ctx.delta(&a).mul(&b).add(&ctx.gamma(&a).mul(&ctx.delta(&b)));
        leibniz.push(&lhs.matrix - &rhs.matrix);

        let lhs = ctx.delta(&ctx.adjoint(&a));
        let rhs = ctx.gamma(&ctx.adjoint(&ctx.delta(&a)));
        star.push(&lhs.matrix - &rhs.matrix);

        let lhs = ctx.delta(&ctx.gamma(&a));
        let rhs = ctx.gamma(&ctx.delta(&a));
        grading.push(&lhs.matrix + &rhs.matrix);

        let dd = ctx.delta(&ctx.delta(&a)).matrix;
        let comm = &(&q2 * &a.matrix) - &(&a.matrix * &q2);
        square.push(&dd - &comm);
    }
    vec![
        record("leibniz", &leibniz, IDENTITY_TOLERANCE),
        record("star", &star, IDENTITY_TOLERANCE),
        record("grading", &grading, IDENTITY_TOLERANCE),
        record("delta-squared", &square, IDENTITY_TOLERANCE),
    ]
}

/// `δ(1) = 0`, `δ(Γ) = −2ΓQ` and `δ(Q) = 2Q²`.
pub fn basic_checks<S: Scalar>(ctx: &SuperContext<S>) -> Vec<IdentityCheck> {
    let n = ctx.dim();
    let one = GradedMatrix::new(Matrix::identity(n), DeclaredParity::Even);
    let g = ctx.gamma_matrix();
    let q = ctx.q();
    let two = S::from_rational(&int(2));
    let d_gamma = &ctx.delta(&g).matrix + &(&g.matrix * &q.matrix).scale(&two);
    let d_q = &ctx.delta(&q).matrix - &(&q.matrix * &q.matrix).scale(&two);
    vec![
        record("delta-of-unit", &[ctx.delta(&one).matrix], IDENTITY_TOLERANCE),
        record("delta-of-grading", &[d_gamma], IDENTITY_TOLERANCE),
        record("delta-of-supercharge", &[d_q], IDENTITY_TOLERANCE),
    ]
}

/// `‖ab‖₁ ≤ ‖a‖₁‖b‖₁` with `‖a‖₁ = ‖a‖ + ‖δ(a)‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmultiplicativityReport {
    pub pairs: usize,
    /// Largest `‖ab‖₁ − ‖a‖₁‖b‖₁`.
    pub worst_excess: f64,
    /// Largest `‖ab‖₁ / (‖a‖₁‖b‖₁)`.
    pub worst_ratio: f64,
    pub pass: bool,
}

pub fn submultiplicativity(
    ctx: &SuperContext<Complex64>,
    pairs: usize,
    seed: u64,
) -> Result<SubmultiplicativityReport, SuperError> {
    if ctx.norms.is_some() {
        return Err(SuperError::NotOrthonormal);
    }
    let norm1 = |a: &GradedMatrix<Complex64>| svd_norm(&a.matrix) + svd_norm(&ctx.delta(a).matrix);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_ratio = 0.0f64;
    for _ in 0..pairs {
        let pa = random_parity(&mut rng);
        let pb = random_parity(&mut rng);
        let a = random_graded(ctx, pa, &mut FloatSampler, &mut rng);
        let b = random_graded(ctx, pb, &mut FloatSampler, &mut rng);
        let lhs = norm1(&a.mul(&b));
        let rhs = norm1(&a) * norm1(&b);
        worst_excess = worst_excess.max(lhs - rhs);
        worst_ratio = worst_ratio.max(lhs / rhs);
    }
    Ok(SubmultiplicativityReport {
        pairs,
        worst_excess,
        worst_ratio,
        pass: worst_excess <= SUBMULTIPLICATIVE_TOLERANCE,
    })
}

/// Time profile `f` of the smoothing map, through its transform
/// `F(ω) = ∫ f(t) e^{iωt} dt`.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothingKernel {
    /// `F ≡ 1`: the point mass at `t = 0`.
    Delta,
    /// `f(t) = e^{−t²/2σ²}/(σ√2π)`, `F(ω) = e^{−σ²ω²/2}`.
    Gaussian { sigma: f64 },
    /// The profile `f′`, with `F_{f′}(ω) = −iω F_f(ω)`.
    Derivative(Box<SmoothingKernel>),
}

impl SmoothingKernel {
    pub fn derivative(&self) -> SmoothingKernel {
        SmoothingKernel::Derivative(Box::new(self.clone()))
    }

    pub fn transform(&self, omega: f64) -> Complex64 {
        match self {
            SmoothingKernel::Delta => Complex64::new(1.0, 0.0),
            SmoothingKernel::Gaussian { sigma } => Complex64::new((-0.5 * sigma * sigma * omega * omega).exp(), 0.0),
            SmoothingKernel::Derivative(k) => Complex64::new(0.0, -omega) * k.transform(omega),
        }
    }

    /// Closed-form time profile, where one is implemented.
    pub fn profile(&self, t: f64) -> Option<f64> {
        match self {
            SmoothingKernel::Delta => None,
            SmoothingKernel::Gaussian { sigma } => {
                Some((-t * t / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt()))
            }
            SmoothingKernel::Derivative(k) => match k.as_ref() {
                SmoothingKernel::Gaussian { sigma } => k.profile(t).map(|v| -t / (sigma * sigma) * v),
                _ => None,
            },
        }
    }
}

/// `(a_f)_{jk} = a_{jk} F(E_j − E_k)` for `H = diag(E)`.
pub fn smooth(a: &GradedMatrix<Complex64>, kernel: &SmoothingKernel, energies: &[f64]) -> GradedMatrix<Complex64> {
    let m = &a.matrix;
    let matrix = Matrix::from_fn(m.rows(), m.cols(), |j, k| m[(j, k)] * kernel.transform(energies[j] - energies[k]));
    GradedMatrix::new(matrix, a.parity)
}

/// Diagonal of `H` on the orthonormal basis, level by level.
pub fn energies(module: &IrreducibleModule) -> Vec<f64> {
    let h = hamiltonian(module);
    let layout = h.layout().clone();
    (0..layout.level_count())
        .flat_map(|idx| {
            let e = h.block(idx, idx).map(|b| b[(0, 0)].to_f64()).unwrap_or(0.0);
            std::iter::repeat_n(e, layout.dim(idx))
        })
        .collect()
}

/// `δ(a_f) = δ(a)_f` and `δ²(a_f) = i a_{f′}` on seeded random samples.
/// Both need `[Q, H] = 0` with `H` diagonal, true for the Ramond supercharge.
pub fn smoothing_suite(
    ctx: &SuperContext<Complex64>,
    energies: &[f64],
    kernel: &SmoothingKernel,
    samples: usize,
    seed: u64,
) -> Vec<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deriv = kernel.derivative();
    let i = Complex64::new(0.0, 1.0);
    let (mut commute, mut second) = (Vec::new(), Vec::new());
    for _ in 0..samples {
        let p = random_parity(&mut rng);
        let a = random_graded(ctx, p, &mut FloatSampler, &mut rng);
        let af = smooth(&a, kernel, energies);
        commute.push(&ctx.delta(&af).matrix - &smooth(&ctx.delta(&a), kernel, energies).matrix);
        let dd = ctx.delta(&ctx.delta(&af)).matrix;
        second.push(&dd - &smooth(&a, &deriv, energies).matrix.scale(&i));
    }
    vec![
        record("smoothing-commutes-with-delta", &commute, IDENTITY_TOLERANCE),
        record("delta-squared-of-smoothing", &second, IDENTITY_TOLERANCE),
    ]
}

/// Heat-trace partial sum with its geometric tail estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatEntry {
    pub beta: f64,
    pub partial_sum: f64,
    pub tail_estimate: f64,
    pub upper_estimate: f64,
}

/// Data of the Neveu-Schwarz check with a local supercharge `G(φ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalData {
    pub phi: String,
    pub window: SafeWindow,
    /// `c/(12π)∫(φ′² − φ²/4)`.
    pub constant: f64,
    /// Largest entry of `[L(1−φ²), a]` on window columns: the term dropped
    /// when `L(φ²)` stands in for `L_0`.
    pub dropped_term: f64,
    /// Largest entry of `δ_φ(a) − δ_φ̃(a)` on window columns, if a second
    /// function was supplied; reported without a threshold.
    pub phi_dependence: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumAlgebraReport {
    pub sector: Sector,
    pub heat: Vec<HeatEntry>,
    pub checks: Vec<IdentityCheck>,
    pub local: Option<LocalData>,
}

impl QuantumAlgebraReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn heat_entries(module: &IrreducibleModule, betas: &[f64]) -> Result<Vec<HeatEntry>, RepError> {
    betas
        .iter()
        .map(|&beta| {
            let h = heat_trace(module.layout(), beta)?;
            let partial_sum = h.partial_sum();
            Ok(HeatEntry { beta, partial_sum, tail_estimate: h.tail_estimate, upper_estimate: partial_sum + h.tail_estimate })
        })
        .collect()
}

fn window_columns(module: &IrreducibleModule, window: SafeWindow) -> Vec<usize> {
    let layout = module.layout();
    (0..layout.level_count())
        .filter(|&idx| window.contains(layout.level(idx)))
        .flat_map(|idx| layout.offset(idx)..layout.offset(idx) + layout.dim(idx))
        .collect()
}

fn on_columns<S: Scalar>(m: &Matrix<S>, cols: &[usize]) -> Matrix<S> {
    let rows: Vec<usize> = (0..m.rows()).collect();
    m.submatrix(&rows, cols)
}

/// Ramond: `Q = G_0`, exact checks of `δ²(a) = [H, a]` on the full
/// truncation plus the identity suite. Neveu-Schwarz: `Q = G(φ)` for a
/// trigonometric `φ`, with `δ_φ²(a) = [L(φ²), a]` checked exactly on window
/// columns for `a` supported on the window.
pub fn quantum_algebra_report(
    module: &IrreducibleModule,
    betas: &[f64],
    phi: Option<&TrigPoly>,
    phi_alt: Option<&TrigPoly>,
    samples: usize,
    seed: u64,
) -> Result<QuantumAlgebraReport, SuperError> {
    let sector = module.spec().sector;
    let heat = heat_entries(module, betas)?;
    match sector {
        Sector::Ramond => {
            let q = supercharge(module)?;
            let ctx = SuperContext::from_operator(&q)?;
            let h = hamiltonian(module).to_dense();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut residuals = Vec::new();
            for _ in 0..samples {
                let p = random_parity(&mut rng);
                let a = random_graded(&ctx, p, &mut RationalSampler, &mut rng);
                let dd = ctx.delta(&ctx.delta(&a)).matrix;
                let comm = &(&h * &a.matrix) - &(&a.matrix * &h);
                residuals.push(&dd - &comm);
            }
            let mut checks = vec![record("delta-squared-is-hamiltonian-commutator", &residuals, IDENTITY_TOLERANCE)];
            checks.extend(basic_checks(&ctx));
            checks.extend(identity_suite(&ctx, samples, seed, &mut RationalSampler));
            Ok(QuantumAlgebraReport { sector, heat, checks, local: None })
        }
        Sector::NeveuSchwarz => {
            let phi = phi.cloned().unwrap_or_else(|| TrigPoly::cos(HalfInt::HALF).scale(&ComplexRational::new(int(2), BigRational::zero())));
            let g = smeared_exact(FieldKind::G, &phi, module)?;
            let ctx = SuperContext::from_operator(&g)?;
            let supercharge = local_supercharge_exact(&phi, module)?;
            let window = supercharge.window;
            let cols = window_columns(module, window);
            let n = ctx.dim();
            let sq = phi.mul(&phi);
            let l_sq = smeared_exact(FieldKind::L, &sq, module)?.to_dense();
            let one = TrigPoly::one();
            let l_rest = smeared_exact(FieldKind::L, &one.sub(&sq), module)?.to_dense();
            let alt_ctx = match phi_alt {
                Some(p) => Some(SuperContext::from_operator(&smeared_exact(FieldKind::G, p, module)?)?),
                None => None,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut residuals = Vec::new();
            let mut dropped = 0.0f64;
            let mut dependence = 0.0f64;
            let inside: Vec<bool> = (0..n).map(|i| cols.contains(&i)).collect();
            for _ in 0..samples {
                let p = random_parity(&mut rng);
                let raw = random_graded(&ctx, p, &mut RationalSampler, &mut rng);
                let m = Matrix::from_fn(n, n, |r, c| {
                    if inside[r] && inside[c] {
                        raw.matrix[(r, c)].clone()
                    } else {
                        ComplexRational::zero()
                    }
                });
                let a = GradedMatrix::new(m, raw.parity);
                let dd = ctx.delta(&ctx.delta(&a)).matrix;
                let comm = &(&l_sq * &a.matrix) - &(&a.matrix * &l_sq);
                residuals.push(on_columns(&(&dd - &comm), &cols));
                let rest = &(&l_rest * &a.matrix) - &(&a.matrix * &l_rest);
                dropped = dropped.max(on_columns(&rest, &cols).max_abs());
                if let Some(alt) = &alt_ctx {
                    let diff = &ctx.delta(&a).matrix - &alt.delta(&a).matrix;
                    dependence = dependence.max(on_columns(&diff, &cols).max_abs());
                }
            }
            let mut square = record("local-delta-squared", &residuals, IDENTITY_TOLERANCE);
            if window.is_empty() {
                square.pass = false;
            }
            let mut checks = vec![square];
            checks.extend(basic_checks(&ctx));
            checks.extend(identity_suite(&ctx, samples, seed, &mut RationalSampler));
            let local = LocalData {
                phi: phi.to_string(),
                window,
                constant: supercharge.constant,
                dropped_term: dropped,
                phi_dependence: alt_ctx.map(|_| dependence),
            };
            Ok(QuantumAlgebraReport { sector, heat, checks, local: Some(local) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmat::UnitarityPolicy;
    use crate::scalar::rat;
    use crate::verma::ModuleSpec;

    fn ramond() -> IrreducibleModule {
        let spec = ModuleSpec::new(Sector::Ramond, int(1), rat(1, 24), HalfInt::int(3)).unwrap();
        IrreducibleModule::build(&spec, UnitarityPolicy::RequireUnitary).unwrap()
    }

    #[test]
    fn basic_identities_exact() {
        let m = ramond();
        let ctx = SuperContext::from_operator(&supercharge(&m).unwrap()).unwrap();
        assert!(basic_checks(&ctx).iter().all(|c| c.pass && c.exact));
        assert!(ctx.is_graded(&ctx.q()));
        assert!(ctx.is_graded(&ctx.gamma_matrix()));
    }

    #[test]
    fn even_operator_is_rejected_as_supercharge() {
        let m = ramond();
        assert_eq!(SuperContext::from_operator(&hamiltonian(&m)).unwrap_err(), SuperError::NotOdd);
    }

    #[test]
    fn gaussian_transform_matches_profile() {
        let k = SmoothingKernel::Gaussian { sigma: 0.7 };
        for omega in [0.0, 0.5, 2.0] {
            for kernel in [k.clone(), k.derivative()] {
                let q = crate::smeared::quadrature::integrate(
                    |t| Complex64::new(0.0, omega * t).exp() * kernel.profile(t).unwrap(),
                    -20.0,
                    20.0,
                    1e-13,
                );
                assert!((q.value - kernel.transform(omega)).norm() < 1e-11);
            }
        }
    }
}
