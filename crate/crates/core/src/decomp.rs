//! Decompositions on `M_n`: complex Jacobi eigensolver, one-sided Jacobi SVD,
//! polar decomposition, and the contraction factor of a positive 2x2 block.
//!
//! Both solvers are cyclic Jacobi. The SVD orthogonalizes columns directly
//! (implicitly diagonalizing `x*x`), which keeps tiny singular values accurate
//! at desk scale.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Maximum number of Jacobi sweeps before reporting non-convergence.
pub const MAX_SWEEPS: usize = 60;

/// Relative Hermiticity tolerance for preconditions.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Singular values below this fraction of the largest are treated as exact
/// zeros (rank decision; realizes the determinant infimum convention).
pub const RANK_FLOOR: f64 = 1e-14;

/// Eigenvalues more negative than this fraction of the spectral radius fail
/// positivity checks; smaller negatives are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Sorted nonincreasing.
    pub eigenvalues: Vec<f64>,
    /// Columns are the corresponding eigenvectors.
    pub unitary: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct SingularSpectrum {
    /// Sorted nonincreasing, all nonnegative.
    pub values: Vec<f64>,
    pub left_factor: ComplexMatrix,
    pub right_factor: ComplexMatrix,
}

impl SingularSpectrum {
    /// `U diag(values) V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let scaled = ComplexMatrix::from_fn(n, |i, j| self.left_factor.get(i, j) * self.values[j]);
        &scaled * &self.right_factor.adjoint()
    }

    /// `V diag(values) V*`, the absolute value `|x| = (x*x)^{1/2}`.
    pub fn abs_matrix(&self) -> ComplexMatrix {
        let n = self.values.len();
        let scaled = ComplexMatrix::from_fn(n, |i, j| self.right_factor.get(i, j) * self.values[j]);
        &scaled * &self.right_factor.adjoint()
    }
}

/// The 2x2 unitary `G = [[c, s], [-s e^{-ip}, c e^{-ip}]]` that diagonalizes
/// the Hermitian block `[[alpha, gamma], [conj(gamma), beta]]`, where
/// `gamma = g e^{ip}`.
fn jacobi_rotation(alpha: f64, beta: f64, gamma: Complex64) -> (f64, f64, Complex64) {
    let g = gamma.norm();
    let phase = gamma / g; // e^{ip}
    let tau = (beta - alpha) / (2.0 * g);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    (c, s, phase)
}

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi.
pub fn hermitian_eigen(x: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = x.dim();
    let residual = x.hermitian_residual();
    let scale = x.frobenius_norm();
    if residual > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian {
            residual,
            tolerance: HERMITIAN_TOL * scale,
        });
    }
    // Symmetrize to remove the sub-tolerance residual.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (x.get(i, j) + x.get(j, i).conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    if n > 1 {
        let fro = a.frobenius_norm().max(f64::MIN_POSITIVE);
        let stop = f64::EPSILON * fro;
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            let mut off = 0.0f64;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let gamma = a.get(p, q);
                    let g = gamma.norm();
                    off = off.max(g);
                    if g <= stop * 1e-2 {
                        continue;
                    }
                    let alpha = a.get(p, p).re;
                    let beta = a.get(q, q).re;
                    let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                    let pc = phase.conj();
                    // a <- G* a G: rows then columns.
                    for j in 0..n {
                        let ap = a.get(p, j);
                        let aq = a.get(q, j);
                        a.set(p, j, ap * c - aq * phase * s);
                        a.set(q, j, ap * s + aq * phase * c);
                    }
                    for i in 0..n {
                        let ap = a.get(i, p);
                        let aq = a.get(i, q);
                        a.set(i, p, ap * c - aq * pc * s);
                        a.set(i, q, ap * s + aq * pc * c);
                    }
                    // Keep the diagonal exactly real.
                    let dp = a.get(p, p).re;
                    let dq = a.get(q, q).re;
                    a.set(p, p, Complex64::new(dp, 0.0));
                    a.set(q, q, Complex64::new(dq, 0.0));
                    for i in 0..n {
                        let vp = v.get(i, p);
                        let vq = v.get(i, q);
                        v.set(i, p, vp * c - vq * pc * s);
                        v.set(i, q, vp * s + vq * pc * c);
                    }
                }
            }
            if off <= stop {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.partial_cmp(&a.get(i, i).re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let unitary = ComplexMatrix::from_fn(n, |i, j| v.get(i, order[j]));
    Ok(HermitianEigen {
        eigenvalues,
        unitary,
    })
}

/// Singular value decomposition by one-sided cyclic Jacobi.
///
/// Values below `RANK_FLOOR` times the largest are reported as exact zeros
/// and the corresponding left columns are completed by Gram-Schmidt on
/// standard basis vectors, deterministically.
pub fn svd(x: &ComplexMatrix) -> Result<SingularSpectrum> {
    svd_with_floor(x, RANK_FLOOR)
}

/// [`svd`] without the relative zero-clamp. Needed where genuinely tiny
/// singular values carry information, e.g. log-domain comparisons of
/// diagonally scaled unitaries whose dynamic range exceeds `1/RANK_FLOOR`.
pub fn svd_unclamped(x: &ComplexMatrix) -> Result<SingularSpectrum> {
    svd_with_floor(x, 0.0)
}

fn svd_with_floor(x: &ComplexMatrix, rank_floor: f64) -> Result<SingularSpectrum> {
    let n = x.dim();
    let mut a = x.clone();
    let mut v = ComplexMatrix::identity(n);

    if n > 1 {
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            let mut off = 0.0f64;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        let ap = a.get(i, p);
                        let aq = a.get(i, q);
                        alpha += ap.norm_sqr();
                        beta += aq.norm_sqr();
                        gamma += ap.conj() * aq;
                    }
                    let denom = (alpha * beta).sqrt();
                    if denom <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let rel = gamma.norm() / denom;
                    off = off.max(rel);
                    if rel <= f64::EPSILON {
                        continue;
                    }
                    let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                    let pc = phase.conj();
                    for i in 0..n {
                        let ap = a.get(i, p);
                        let aq = a.get(i, q);
                        a.set(i, p, ap * c - aq * pc * s);
                        a.set(i, q, ap * s + aq * pc * c);
                        let vp = v.get(i, p);
                        let vq = v.get(i, q);
                        v.set(i, p, vp * c - vq * pc * s);
                        v.set(i, q, vp * s + vq * pc * c);
                    }
                }
            }
            if off <= 4.0 * f64::EPSILON {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(MAX_SWEEPS));
        }
    }

    let mut norms: Vec<f64> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| a.get(i, j).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));
    norms = order.iter().map(|&j| norms[j]).collect();

    let sigma_max = norms[0];
    let floor = rank_floor * sigma_max;
    let values: Vec<f64> = norms
        .iter()
        .map(|&s| if s <= floor { 0.0 } else { s })
        .collect();

    let right_factor = ComplexMatrix::from_fn(n, |i, j| v.get(i, order[j]));
    let mut left = ComplexMatrix::zeros(n);
    let mut filled: Vec<usize> = Vec::new();
    for j in 0..n {
        if values[j] > 0.0 {
            let col = order[j];
            for i in 0..n {
                left.set(i, j, a.get(i, col) / values[j]);
            }
            filled.push(j);
        }
    }
    // Orthonormal completion on the kernel columns.
    let mut basis_idx = 0usize;
    for j in 0..n {
        if values[j] > 0.0 {
            continue;
        }
        loop {
            assert!(basis_idx < n, "Gram-Schmidt completion exhausted the basis");
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            col[basis_idx] = Complex64::new(1.0, 0.0);
            basis_idx += 1;
            // Two rounds of orthogonalization against the accepted columns.
            for _ in 0..2 {
                for &k in &filled {
                    let proj: Complex64 = (0..n).map(|i| left.get(i, k).conj() * col[i]).sum();
                    for (i, c) in col.iter_mut().enumerate() {
                        *c -= proj * left.get(i, k);
                    }
                }
            }
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-4 {
                for (i, c) in col.iter().enumerate() {
                    left.set(i, j, c / norm);
                }
                filled.push(j);
                break;
            }
        }
    }

    Ok(SingularSpectrum {
        values,
        left_factor: left,
        right_factor,
    })
}

/// Largest singular value.
pub fn operator_norm(x: &ComplexMatrix) -> f64 {
    svd(x).map(|s| s.values[0]).unwrap_or(f64::NAN)
}

/// Polar decomposition `x = u |x|` with `|x| = (x*x)^{1/2}`.
///
/// On rank-deficient inputs `u` is completed to a full unitary by the
/// deterministic completion inside [`svd`].
pub fn polar(x: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let s = svd(x)?;
    let u = &s.left_factor * &s.right_factor.adjoint();
    Ok((u, s.abs_matrix()))
}

/// Pseudo-inverse square root of a positive semidefinite matrix, restricted
/// to its support.
fn pinv_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a)?;
    let lmax = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let cutoff = 1e-12 * lmax.max(f64::MIN_POSITIVE);
    let inv: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 })
        .collect();
    let n = a.dim();
    let scaled = ComplexMatrix::from_fn(n, |i, j| eig.unitary.get(i, j) * inv[j]);
    Ok(&scaled * &eig.unitary.adjoint())
}

/// Given positive `a`, `b` and `x` with `[[a, x], [x*, b]] >= 0`, recover the
/// contraction `w` with `x = a^{1/2} w b^{1/2}`.
pub fn contraction_factor(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let block = ComplexMatrix::block2(a, x, b)?;
    let eig = hermitian_eigen(&block)?;
    let lmax = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let lmin = *eig.eigenvalues.last().unwrap();
    if lmin < -1e-9 * lmax.max(1.0) {
        return Err(Error::NotPsdBlock {
            min_eigenvalue: lmin,
        });
    }
    let ia = pinv_sqrt(a)?;
    let ib = pinv_sqrt(b)?;
    Ok(&(&ia * x) * &ib)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(n: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
        ComplexMatrix::new(
            n,
            entries.iter().map(|&(r, i)| Complex64::new(r, i)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn svd_of_diagonal_sorts() {
        let s = svd(&ComplexMatrix::diag(&[0.2, 0.8])).unwrap();
        assert!((s.values[0] - 0.8).abs() < 1e-15);
        assert!((s.values[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn svd_of_zero_matrix() {
        let s = svd(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(s.values, vec![0.0, 0.0, 0.0]);
        // Completed factors are still unitary.
        let res = (&(&s.left_factor.adjoint() * &s.left_factor)
            - &ComplexMatrix::identity(3))
            .frobenius_norm();
        assert!(res < 1e-12);
    }

    #[test]
    fn svd_of_nilpotent() {
        // [[0,1],[0,0]] has singular values (1, 0).
        let x = mat(2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let s = svd(&x).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-14);
        assert_eq!(s.values[1], 0.0);
        let res = (&s.reconstruct() - &x).frobenius_norm();
        assert!(res < 1e-13);
    }

    #[test]
    fn eigen_of_identity() {
        let e = hermitian_eigen(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn eigen_of_pauli_x() {
        let x = mat(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let e = hermitian_eigen(&x).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_sorts_diagonal() {
        let e = hermitian_eigen(&ComplexMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let x = mat(2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            hermitian_eigen(&x),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn polar_of_positive_diagonal() {
        let x = ComplexMatrix::diag(&[2.0, 3.0]);
        let (u, absx) = polar(&x).unwrap();
        assert!((&absx - &x).frobenius_norm() < 1e-13);
        assert!((&u - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn polar_of_nilpotent() {
        let x = mat(2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let (u, absx) = polar(&x).unwrap();
        assert!((&absx - &ComplexMatrix::diag(&[0.0, 1.0])).frobenius_norm() < 1e-13);
        assert!((&(&u * &absx) - &x).frobenius_norm() < 1e-13);
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::identity(2)) - 1.0).abs() < 1e-15);
        assert!((operator_norm(&ComplexMatrix::diag(&[0.3, -0.7])) - 0.7).abs() < 1e-15);
        let x = mat(2, &[(0.0, 0.0), (2.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!((operator_norm(&x) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn contraction_factor_identity_blocks() {
        let id = ComplexMatrix::identity(2);
        let x = ComplexMatrix::diag(&[0.5, -0.25]);
        let w = contraction_factor(&id, &id, &x).unwrap();
        assert!((&w - &x).frobenius_norm() < 1e-10);
    }

    #[test]
    fn contraction_factor_rank_deficient() {
        // a = diag(1, 0), b = I, x = [[c, 0], [0, 0]]: top-left of w is c.
        let a = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = ComplexMatrix::identity(2);
        let x = ComplexMatrix::diag(&[0.6, 0.0]);
        let w = contraction_factor(&a, &b, &x).unwrap();
        assert!((w.get(0, 0).re - 0.6).abs() < 1e-9);
        assert!(operator_norm(&w) <= 1.0 + 1e-8);
    }

    #[test]
    fn contraction_factor_rejects_non_psd_block() {
        let a = ComplexMatrix::diag(&[0.01, 0.01]);
        let b = ComplexMatrix::diag(&[0.01, 0.01]);
        let x = ComplexMatrix::identity(2);
        assert!(matches!(
            contraction_factor(&a, &b, &x),
            Err(Error::NotPsdBlock { .. })
        ));
    }
}
