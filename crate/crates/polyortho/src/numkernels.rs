//! Dense numerical kernels with explicit tolerance contracts: blockwise SPD
//! factorization, orthonormal null-space bases, and pivoted linear solves.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{MassMatrix, SparseRow};
use crate::error::{Error, Result};
use crate::par;

/// Per-triangle factors R_T (upper triangular) with M_T = R_T^T R_T.
#[derive(Debug, Clone)]
pub struct BlockFactor {
    pub dim: usize,
    pub factors: Vec<DMatrix<f64>>,
}

/// Blockwise Cholesky of a mass matrix. The paper's L D L^T with sqrt(D)
/// folded in is algebraically this R.
pub fn factor_blocks(m: &MassMatrix) -> Result<BlockFactor> {
    let dim = m.dim_per_block();
    let factors = par::try_map_indexed(m.blocks.len(), |t| {
        m.blocks[t]
            .clone()
            .cholesky()
            .map(|ch| ch.l().transpose())
            .ok_or_else(|| {
                Error::NumericalFailure(format!("mass block {t} is not positive definite"))
            })
    })?;
    Ok(BlockFactor { dim, factors })
}

impl BlockFactor {
    pub fn nblocks(&self) -> usize {
        self.factors.len()
    }

    pub fn ncols(&self) -> usize {
        self.nblocks() * self.dim
    }

    /// y = R c.
    pub fn apply_r(&self, c: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; c.len()];
        for (t, r) in self.factors.iter().enumerate() {
            let x = DVector::from_column_slice(&c[t * d..(t + 1) * d]);
            let y = r * x;
            out[t * d..(t + 1) * d].copy_from_slice(y.as_slice());
        }
        out
    }

    /// Solve R c = y blockwise (back substitution).
    pub fn solve_r(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; y.len()];
        for (t, r) in self.factors.iter().enumerate() {
            let rhs = DVector::from_column_slice(&y[t * d..(t + 1) * d]);
            let x = r
                .clone()
                .solve_upper_triangular(&rhs)
                .expect("R is invertible by construction");
            out[t * d..(t + 1) * d].copy_from_slice(x.as_slice());
        }
        out
    }

    /// Row transform h -> h R^{-1} for a sparse constraint row; block
    /// diagonality keeps the result supported on the row's blocks.
    pub fn row_times_r_inv(&self, row: &SparseRow) -> SparseRow {
        use std::collections::BTreeMap;
        let d = self.dim;
        let mut by_block: BTreeMap<usize, DVector<f64>> = BTreeMap::new();
        for &(col, v) in row {
            let b = col / d;
            by_block
                .entry(b)
                .or_insert_with(|| DVector::zeros(d))[col % d] += v;
        }
        let mut out = Vec::new();
        for (b, h) in by_block {
            // x^T = h^T R^{-1}  <=>  R^T x = h (forward substitution)
            let x = self.factors[b]
                .transpose()
                .solve_lower_triangular(&h)
                .expect("R is invertible by construction");
            for (i, &v) in x.iter().enumerate() {
                if v != 0.0 {
                    out.push((b * d + i, v));
                }
            }
        }
        out
    }

    /// M reconstructed from the factors (testing aid).
    pub fn reconstruct(&self) -> Vec<DMatrix<f64>> {
        self.factors.iter().map(|r| r.transpose() * r).collect()
    }
}

/// Orthonormal basis of the numerical null space of `a`.
///
/// Columns K satisfy ||A k|| <= tol * ||A|| and K^T K = I; the default
/// tolerance is max(rows, cols) * eps * sigma_max. The span, not the
/// individual columns, is the contract.
pub fn orthonormal_nullspace(a: &DMatrix<f64>, tol: Option<f64>) -> DMatrix<f64> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    // pad with zero rows to square so the thin SVD carries the full V
    let work = if rows < cols {
        let mut m = DMatrix::zeros(cols, cols);
        m.view_mut((0, 0), (rows, cols)).copy_from(a);
        m
    } else {
        a.clone()
    };
    let svd = nalgebra::SVD::new(work, false, true);
    let v_t = svd.v_t.expect("SVD with V requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = tol.unwrap_or_else(|| rows.max(cols) as f64 * f64::EPSILON * smax);
    let mut null_cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= thresh)
        .collect();
    // singular values beyond min(rows,cols) of the padded matrix do not
    // exist; every remaining V column belongs to the null space
    for i in svd.singular_values.len()..cols {
        null_cols.push(i);
    }
    let mut k = DMatrix::zeros(cols, null_cols.len());
    for (out_c, &i) in null_cols.iter().enumerate() {
        for r in 0..cols {
            k[(r, out_c)] = v_t[(i, r)];
        }
    }
    k
}

/// Outcome of a pivoted linear solve with a condition estimate.
#[derive(Debug, Clone)]
pub struct LinearSolve {
    pub x: DVector<f64>,
    /// Reciprocal condition number estimate (sigma_min / sigma_max).
    pub rcond: f64,
}

/// Pivoted solve of a square system with an explicit unisolvence check:
/// rcond below 1e-13 signals a (numerically) non-unisolvent system.
pub fn solve_linear(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LinearSolve> {
    if !a.is_square() {
        return Err(Error::InvalidInput("solve_linear: matrix not square".into()));
    }
    if a.nrows() != b.len() {
        return Err(Error::InvalidInput("solve_linear: shape mismatch".into()));
    }
    let svd = nalgebra::SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let rcond = if smax > 0.0 { smin / smax } else { 0.0 };
    if rcond < 1e-13 {
        return Err(Error::NonUnisolvent(format!(
            "system is numerically singular (rcond = {rcond:.3e})"
        )));
    }
    let x = a
        .clone()
        .full_piv_lu()
        .solve(b)
        .ok_or_else(|| Error::NonUnisolvent("pivoted solve failed".into()))?;
    Ok(LinearSolve { x, rcond })
}

/// Minimal-norm least-squares solution via SVD with a relative rank cutoff.
pub fn lstsq_min_norm(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> DVector<f64> {
    let svd = nalgebra::SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = rel_tol * smax;
    svd.solve(b, eps).expect("SVD solve with U, V computed")
}
