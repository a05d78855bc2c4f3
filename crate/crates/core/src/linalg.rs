//! Exact elimination routines and the handful of float estimates built on top.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::scalar::{RealScalar, Scalar};

pub const POWER_TOLERANCE: f64 = 1e-10;
pub const POWER_MAX_ITERATIONS: usize = 10_000;
pub const POWER_SEED: u64 = 42;

/// Outcome of a positive-semidefiniteness test.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdVerdict<S> {
    pub psd: bool,
    pub rank: usize,
    /// A vector `x` with `xᵀ G x < 0`, in the coordinates of the input matrix.
    pub witness: Option<Vec<S>>,
    /// The value `xᵀ G x` of the witness.
    pub witness_norm: Option<S>,
}

/// Decide whether a symmetric matrix is positive semidefinite by pivoted
/// symmetric elimination.
///
/// For exact scalars the verdict is a proof. When every remaining diagonal
/// entry is zero but an off-diagonal one is not, the 2×2 minor is indefinite
/// and supplies the witness.
pub fn psd_verdict<S: RealScalar>(g: &Matrix<S>) -> PsdVerdict<S> {
    assert!(g.is_square(), "Gram matrix must be square");
    let n = g.rows();
    let mut a = g.clone();
    let mut basis: Matrix<S> = Matrix::identity(n);
    let zero = S::zero();

    for t in 0..n {
        if let Some(i) = (t..n).find(|&i| a[(i, i)] < zero) {
            return PsdVerdict {
                psd: false,
                rank: t,
                witness: Some(basis.col(i)),
                witness_norm: Some(a[(i, i)].clone()),
            };
        }
        let pivot = (t..n)
            .filter(|&i| !a[(i, i)].is_zero())
            .max_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
        let Some(p) = pivot else {
            for i in t..n {
                for j in (i + 1)..n {
                    if !a[(i, j)].is_zero() {
                        let s = if a[(i, j)] > zero { -S::one() } else { S::one() };
                        let xi = basis.col(i);
                        let xj = basis.col(j);
                        let w: Vec<S> =
                            xi.iter().zip(&xj).map(|(u, v)| u.clone() + s.clone() * v.clone()).collect();
                        let two = S::one() + S::one();
                        let norm = two * s * a[(i, j)].clone();
                        return PsdVerdict { psd: false, rank: t, witness: Some(w), witness_norm: Some(norm) };
                    }
                }
            }
            return PsdVerdict { psd: true, rank: t, witness: None, witness_norm: None };
        };
        symmetric_swap(&mut a, t, p);
        basis.swap_cols(t, p);
        eliminate_below(&mut a, &mut basis, t);
    }
    PsdVerdict { psd: true, rank: n, witness: None, witness_norm: None }
}

fn symmetric_swap<S: Scalar>(a: &mut Matrix<S>, i: usize, j: usize) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
}

/// Congruence step clearing row and column `t` below the diagonal pivot.
fn eliminate_below<S: Scalar>(a: &mut Matrix<S>, basis: &mut Matrix<S>, t: usize) {
    let n = a.rows();
    let piv = a[(t, t)].clone();
    for k in (t + 1)..n {
        if a[(k, t)].is_zero() {
            continue;
        }
        let f = a[(k, t)].clone() / piv.clone();
        for j in t..n {
            let v = a[(k, j)].clone() - f.clone() * a[(t, j)].clone();
            a[(k, j)] = v;
        }
        for i in t..n {
            let v = a[(i, k)].clone() - f.clone() * a[(i, t)].clone();
            a[(i, k)] = v;
        }
        for i in 0..n {
            let v = basis[(i, k)].clone() - f.clone() * basis[(i, t)].clone();
            basis[(i, k)] = v;
        }
    }
}

/// Congruence diagonalization `Mᵀ G M = D` of a nonsingular symmetric matrix.
///
/// Pivots are taken in index order; a block with vanishing diagonal is
/// handled by replacing `e_i` with `e_i + e_j`. Returns `None` for singular input.
pub fn congruence_diagonalize<S: Scalar>(g: &Matrix<S>) -> Option<(Matrix<S>, Vec<S>)> {
    assert!(g.is_square(), "congruence needs a square matrix");
    let n = g.rows();
    let mut a = g.clone();
    let mut basis: Matrix<S> = Matrix::identity(n);
    for t in 0..n {
        let p = match (t..n).find(|&i| !a[(i, i)].is_zero()) {
            Some(p) => p,
            None => {
                let (i, j) = (t..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[(i, j)].is_zero())?;
                // e_i <- e_i + e_j, so the new diagonal entry is 2 a_ij
                for k in 0..n {
                    let v = a[(i, k)].clone() + a[(j, k)].clone();
                    a[(i, k)] = v;
                }
                for k in 0..n {
                    let v = a[(k, i)].clone() + a[(k, j)].clone();
                    a[(k, i)] = v;
                }
                for k in 0..n {
                    let v = basis[(k, i)].clone() + basis[(k, j)].clone();
                    basis[(k, i)] = v;
                }
                i
            }
        };
        symmetric_swap(&mut a, t, p);
        basis.swap_cols(t, p);
        eliminate_below(&mut a, &mut basis, t);
    }
    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    Some((basis, d))
}

/// Indices of a maximal set of linearly independent columns, chosen greedily
/// from the left.
pub fn pivot_columns<S: Scalar>(a: &Matrix<S>) -> Vec<usize> {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let piv = m[(row, col)].clone();
        for i in (row + 1)..m.rows() {
            if m[(i, col)].is_zero() {
                continue;
            }
            let f = m[(i, col)].clone() / piv.clone();
            for j in col..m.cols() {
                let v = m[(i, j)].clone() - f.clone() * m[(row, j)].clone();
                m[(i, j)] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(a: &Matrix<S>) -> usize {
    pivot_columns(a).len()
}

/// Gauss-Jordan inverse with magnitude pivoting; `None` when singular.
pub fn inverse<S: Scalar>(a: &Matrix<S>) -> Option<Matrix<S>> {
    assert!(a.is_square(), "inverse of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut inv: Matrix<S> = Matrix::identity(n);
    for col in 0..n {
        let p = (col..n)
            .filter(|&i| !m[(i, col)].is_zero())
            .max_by(|&i, &j| m[(i, col)].magnitude().total_cmp(&m[(j, col)].magnitude()))?;
        m.swap_rows(col, p);
        inv.swap_rows(col, p);
        let piv_inv = S::one() / m[(col, col)].clone();
        for j in 0..n {
            m[(col, j)] = m[(col, j)].clone() * piv_inv.clone();
            inv[(col, j)] = inv[(col, j)].clone() * piv_inv.clone();
        }
        for i in 0..n {
            if i == col || m[(i, col)].is_zero() {
                continue;
            }
            let f = m[(i, col)].clone();
            for j in 0..n {
                let v = m[(i, j)].clone() - f.clone() * m[(col, j)].clone();
                m[(i, j)] = v;
                let w = inv[(i, j)].clone() - f.clone() * inv[(col, j)].clone();
                inv[(i, j)] = w;
            }
        }
    }
    Some(inv)
}

pub fn determinant<S: Scalar>(a: &Matrix<S>) -> S {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut det = S::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[(i, col)].is_zero()) else {
            return S::zero();
        };
        if p != col {
            m.swap_rows(col, p);
            det = -det;
        }
        let piv = m[(col, col)].clone();
        det = det * piv.clone();
        for i in (col + 1)..n {
            if m[(i, col)].is_zero() {
                continue;
            }
            let f = m[(i, col)].clone() / piv.clone();
            for j in col..n {
                let v = m[(i, j)].clone() - f.clone() * m[(col, j)].clone();
                m[(i, j)] = v;
            }
        }
    }
    det
}

/// Result of a power-iteration norm estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Spectral norm of `a` by power iteration on `a* a`, from a seeded random start.
pub fn spectral_norm(a: &Matrix<Complex64>) -> NormEstimate {
    if a.rows() == 0 || a.cols() == 0 {
        return NormEstimate { value: 0.0, iterations: 0, converged: true };
    }
    let m = a.to_nalgebra();
    let mh = m.adjoint();
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v = nalgebra::DVector::<Complex64>::from_fn(a.cols(), |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    v /= Complex64::new(v.norm(), 0.0);
    let mut estimate = 0.0;
    for it in 1..=POWER_MAX_ITERATIONS {
        let w = &mh * (&m * &v);
        let norm = w.norm();
        if norm == 0.0 {
            return NormEstimate { value: 0.0, iterations: it, converged: true };
        }
        let next = norm.sqrt();
        v = w / Complex64::new(norm, 0.0);
        if (next - estimate).abs() <= POWER_TOLERANCE * next.max(1.0) {
            return NormEstimate { value: next, iterations: it, converged: true };
        }
        estimate = next;
    }
    NormEstimate { value: estimate, iterations: POWER_MAX_ITERATIONS, converged: false }
}

/// Largest singular value via a full SVD; used to cross-check [`spectral_norm`].
pub fn svd_norm(a: &Matrix<Complex64>) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let m: DMatrix<Complex64> = a.to_nalgebra();
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(a: &Matrix<Complex64>) -> Vec<f64> {
    if a.rows() == 0 {
        return Vec::new();
    }
    let m = a.to_nalgebra();
    let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Dot product `xᵀ G y` for real scalars.
pub fn bilinear<S: Scalar>(g: &Matrix<S>, x: &[S], y: &[S]) -> S {
    let gy = g.mul_vec(y);
    x.iter().zip(&gy).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// `true` iff `x` is the zero vector.
pub fn is_zero_vec<S: Scalar>(x: &[S]) -> bool {
    x.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<BigRational> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect())
    }

    #[test]
    fn psd_positive_and_singular() {
        let v = psd_verdict(&m(vec![vec![2, 1], vec![1, 2]]));
        assert!(v.psd);
        assert_eq!(v.rank, 2);
        let v = psd_verdict(&m(vec![vec![1, 1], vec![1, 1]]));
        assert!(v.psd);
        assert_eq!(v.rank, 1);
    }

    #[test]
    fn psd_negative_witnesses_are_genuine() {
        for g in [
            m(vec![vec![1, 2], vec![2, 1]]),
            m(vec![vec![0, 1], vec![1, 0]]),
            m(vec![vec![1, 0, 0], vec![0, 0, 3], vec![0, 3, 0]]),
            m(vec![vec![-2]]),
        ] {
            let v = psd_verdict(&g);
            assert!(!v.psd);
            let w = v.witness.unwrap();
            let norm = bilinear(&g, &w, &w);
            assert_eq!(norm, v.witness_norm.unwrap());
            assert!(norm < BigRational::zero());
        }
    }

    #[test]
    fn congruence_handles_zero_diagonal() {
        let g = m(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 5]]);
        let (b, d) = congruence_diagonalize(&g).unwrap();
        let gd = &(&b.transpose() * &g) * &b;
        assert_eq!(gd, Matrix::diagonal(&d));
        assert!(congruence_diagonalize(&m(vec![vec![1, 1], vec![1, 1]])).is_none());
    }

    #[test]
    fn inverse_rank_determinant() {
        let a = m(vec![vec![2, 1], vec![4, 3]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
        assert_eq!(determinant(&a), int(2));
        assert_eq!(rank(&m(vec![vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(pivot_columns(&m(vec![vec![1, 2, 0], vec![2, 4, 1]])), vec![0, 2]);
        assert_eq!(inverse(&m(vec![vec![1, 2], vec![2, 4]])), None);
        assert_eq!(determinant(&Matrix::diagonal(&[rat(1, 2), int(4)])), int(2));
    }

    #[test]
    fn power_iteration_matches_svd() {
        let a = Matrix::from_fn(5, 4, |i, j| Complex64::new((i as f64 - j as f64).sin(), 0.1 * j as f64));
        let p = spectral_norm(&a);
        assert!(p.converged);
        assert!((p.value - svd_norm(&a)).abs() < 1e-8);
    }

    #[test]
    fn hermitian_spectrum() {
        let a = Matrix::from_rows(vec![
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        ]);
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }
}
