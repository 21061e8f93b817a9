use crate::error::{Error, Result};
use crate::tolerances::MAX_MATRIX_ENTRIES;

use super::ComplexMatrix;

/// Kronecker product `a ⊗ b` with the row-major block convention
/// `out[(i*p + k, j*q + l)] = a[(i, j)] * b[(k, l)]` for `b` of shape `p × q`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_product_capped(a, b, MAX_MATRIX_ENTRIES)
}

pub fn tensor_product_capped(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    max_entries: usize,
) -> Result<ComplexMatrix> {
    let (m, n) = (a.rows(), a.cols());
    let (p, q) = (b.rows(), b.cols());
    let entries = (m * p) as u128 * (n * q) as u128;
    if entries > max_entries as u128 {
        return Err(Error::SizeCap {
            entries,
            cap: max_entries,
        });
    }
    let mut out = ComplexMatrix::zeros(m * p, n * q);
    for i in 0..m {
        for j in 0..n {
            let aij = a[(i, j)];
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// `op` acting on `site` of an `n`-qubit register (site 0 is the leftmost factor).
pub fn site_operator(op: &ComplexMatrix, site: usize, n: usize) -> Result<ComplexMatrix> {
    if site >= n {
        return Err(Error::IndexOutOfRange {
            index: site,
            len: n,
        });
    }
    let mut acc = ComplexMatrix::identity(1);
    for s in 0..n {
        let factor = if s == site {
            op.clone()
        } else {
            ComplexMatrix::identity(op.rows())
        };
        acc = tensor_product(&acc, &factor)?;
    }
    Ok(acc)
}
