//! Taylor-series matrix exponential with scaling and squaring.
//!
//! Independent of the eigensolver; it is the brute-force reference the
//! spectral propagator is checked against.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::ComplexMatrix;

const MAX_TERMS: usize = 10_000;

/// `exp(scale * m)`; the series stops once a term's max-entry falls below `tol`.
pub fn matrix_exp_series(m: &ComplexMatrix, scale: Complex64, tol: f64) -> Result<ComplexMatrix> {
    check_args(m, scale, tol)?;
    let a = m.scale(scale);
    let norm = a.inf_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

    let n = m.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    let mut k = 1;
    loop {
        term = term.matmul(&a)?.scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term)?;
        if term.max_abs() < tol {
            break;
        }
        k += 1;
        if k > MAX_TERMS {
            return Err(Error::SeriesDivergence { terms: MAX_TERMS });
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

/// `exp(scale * m) v` without forming the exponential: the interval is split
/// into substeps with `‖scale·m‖/steps <= 1/2` and the series is summed on the vector.
pub fn expm_multiply_series(
    m: &ComplexMatrix,
    scale: Complex64,
    v: &[Complex64],
    tol: f64,
) -> Result<Vec<Complex64>> {
    check_args(m, scale, tol)?;
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            got: v.len(),
        });
    }
    let norm = m.inf_norm() * scale.norm();
    let steps = ((norm / 0.5).ceil() as usize).max(1);
    let h = scale / steps as f64;
    let sparse = SparseRows::from_dense(m);
    let mut out = v.to_vec();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut k = 1;
        loop {
            let next = sparse.mul_vec(&term);
            let factor = h / k as f64;
            term = next.into_iter().map(|z| z * factor).collect();
            for (o, t) in out.iter_mut().zip(&term) {
                *o += t;
            }
            if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < tol {
                break;
            }
            k += 1;
            if k > MAX_TERMS {
                return Err(Error::SeriesDivergence { terms: MAX_TERMS });
            }
        }
    }
    Ok(out)
}

/// Row-compressed copy of a matrix, keeping only nonzero entries.
struct SparseRows {
    starts: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseRows {
    fn from_dense(m: &ComplexMatrix) -> Self {
        let mut starts = Vec::with_capacity(m.rows() + 1);
        let (mut cols, mut values) = (Vec::new(), Vec::new());
        starts.push(0);
        for i in 0..m.rows() {
            for (j, z) in m.row(i).iter().enumerate() {
                if *z != Complex64::new(0.0, 0.0) {
                    cols.push(j);
                    values.push(*z);
                }
            }
            starts.push(cols.len());
        }
        Self {
            starts,
            cols,
            values,
        }
    }

    fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.starts
            .windows(2)
            .map(|w| (w[0]..w[1]).map(|k| self.values[k] * v[self.cols[k]]).sum())
            .collect()
    }
}

fn check_args(m: &ComplexMatrix, scale: Complex64, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "series tolerance {tol} not in (0, 1e-6]"
        )));
    }
    if !scale.re.is_finite()
        || !scale.im.is_finite()
        || m.as_slice()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite);
    }
    Ok(())
}
