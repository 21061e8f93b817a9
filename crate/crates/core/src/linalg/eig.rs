//! Cyclic Jacobi for Hermitian matrices and one-sided Jacobi for singular values.
//!
//! Both sweep pivots in the fixed order (0,1), (0,2), …, (n-2,n-1), so results
//! are bit-reproducible on a given platform.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::HERMITICITY;

use super::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching unitary eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(λ)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * weights[k] * v[(j, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| Complex64::new(l, 0.0))
    }
}

/// Hermitian eigendecomposition using the default Hermiticity tolerance.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(h, HERMITICITY)
}

pub fn hermitian_eig_with(h: &ComplexMatrix, hermiticity_tol: f64) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            got: h.cols(),
        });
    }
    let defect = h.hermiticity_defect();
    if defect.is_nan() || defect > hermiticity_tol {
        return Err(Error::NotHermitian { defect });
    }
    let n = h.rows();
    let half = Complex64::new(0.5, 0.0);
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let mut converged = n < 2 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&a),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_pivot(&mut a, &mut v, p, q, sweeps > 3);
            }
        }
        sweeps += 1;
        let off = off_diagonal_norm(&a);
        converged = off == 0.0 || off <= 1e-3 * f64::EPSILON * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Unitary 2×2 rotation `W` on indices (p, q) that diagonalizes
/// `[[app, apq], [conj(apq), aqq]]` via `W† A W`.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    c: f64,
    s: f64,
    /// conj(apq)/|apq|
    phase: Complex64,
}

impl Rotation {
    fn new(app: f64, aqq: f64, apq: Complex64) -> Self {
        let r = apq.norm();
        let theta = (aqq - app) / (2.0 * r);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        Self {
            c,
            s: t * c,
            phase: apq.conj() / r,
        }
    }

    /// `(x, y) <- (x, y) W` for a pair of column entries.
    #[inline]
    fn apply_right(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let yp = y * self.phase;
        (x * self.c - yp * self.s, x * self.s + yp * self.c)
    }

    /// `(x, y) <- W† (x, y)` for a pair of row entries.
    #[inline]
    fn apply_left(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let yp = y * self.phase.conj();
        (x * self.c - yp * self.s, x * self.s + yp * self.c)
    }
}

fn jacobi_pivot(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, late: bool) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let g = 100.0 * r;
    if late && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let rot = Rotation::new(app, aqq, apq);
    let n = a.rows();
    for k in 0..n {
        let (x, y) = rot.apply_right(a[(k, p)], a[(k, q)]);
        a[(k, p)] = x;
        a[(k, q)] = y;
    }
    for k in 0..n {
        let (x, y) = rot.apply_left(a[(p, k)], a[(q, k)]);
        a[(p, k)] = x;
        a[(q, k)] = y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    for k in 0..n {
        let (x, y) = rot.apply_right(v[(k, p)], v[(k, q)]);
        v[(k, p)] = x;
        v[(k, q)] = y;
    }
}

/// Singular values (descending) by one-sided Hestenes–Jacobi.
///
/// Works on the columns directly, so small singular values carry absolute
/// error of order `eps * ‖m‖` rather than `sqrt(eps) * ‖m‖`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.cols();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let rot = Rotation::new(alpha, beta, gamma);
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (nx, ny) = rot.apply_right(*x, *y);
                    *x = nx;
                    *y = ny;
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: f64::NAN,
            });
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}
