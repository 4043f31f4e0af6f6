//! Self-contained dense linear algebra for desk-scale problems.
//!
//! The entanglement measures need eigenvalues of Hermitian matrices no larger
//! than 16×16 (four spins), and the phase-additivity fit needs a tiny linear
//! solve. A cyclic Jacobi sweep covers both accuracy and simplicity at this
//! scale; complex Hermitian matrices go through the standard real symmetric
//! embedding [[A, −B], [B, A]], which carries each eigenvalue twice.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues of a real symmetric matrix (row-major, n×n), ascending.
/// Values only; accurate to ~1e-13 relative for well-scaled inputs.
pub fn symmetric_eigenvalues(mat: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = mat.len();
    if n == 0 {
        return Ok(vec![]);
    }
    for (i, row) in mat.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput(format!("row {i} has length {} != {n}", row.len())));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite entry at ({i}, {j})")));
            }
            if (v - mat[j][i]).abs() > 1e-12 * (1.0 + v.abs()) {
                return Err(Error::InvalidInput(format!(
                    "matrix is not symmetric at ({i}, {j}): {v} vs {}",
                    mat[j][i]
                )));
            }
        }
    }

    let mut a: Vec<Vec<f64>> = mat.to_vec();
    let frob: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let threshold = 1e-15 * frob.max(f64::MIN_POSITIVE);

    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= threshold / (n as f64) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eig)
}

/// Eigenvalues of a complex Hermitian matrix, ascending, via the real
/// symmetric embedding (each eigenvalue is doubled there; adjacent pairs are
/// averaged back).
pub fn hermitian_eigenvalues(mat: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let n = mat.len();
    for (i, row) in mat.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput(format!("row {i} has length {} != {n}", row.len())));
        }
    }
    // M = [[A, -B], [B, A]] with H = A + iB
    let mut m = vec![vec![0.0f64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let re = mat[i][j].re;
            let im = mat[i][j].im;
            m[i][j] = re;
            m[n + i][n + j] = re;
            m[i][n + j] = -im;
            m[n + i][j] = im;
        }
    }
    let doubled = symmetric_eigenvalues(&m)?;
    Ok(doubled
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("linear system dimensions mismatch".into()));
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::Numerical("singular linear system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}
