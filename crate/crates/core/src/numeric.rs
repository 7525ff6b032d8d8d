//! Dense complex linear algebra on top of `nalgebra`.
//!
//! All rank decisions go through [`rank_info`], which thresholds singular
//! values relative to the largest one.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical thresholds shared by every computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rel: f64,
    /// Bound on relator residuals `‖ρ(r) − I‖`.
    pub newton_tol: f64,
    /// Base step for finite differences.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-10,
            newton_tol: 1e-12,
            fd_step: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.rank_rel) && ok(self.newton_tol) && ok(self.fd_step)) || self.rank_rel >= 1.0 {
            return Err(Error::InvalidInput(format!("invalid tolerances {self:?}")));
        }
        Ok(())
    }
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Builds a matrix from rows, rejecting ragged input and non-finite entries.
pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Shape("matrix rows must be nonempty and of equal length".into()));
    }
    let m = CMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    ensure_finite(&m)?;
    Ok(m)
}

pub fn to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Singular value decomposition with a full right factor.
pub struct Svd {
    /// Left singular vectors, `rows × min(rows, cols)` (or padded).
    pub u: CMatrix,
    /// Singular values in decreasing order.
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, `cols × cols`; columns past the
    /// number of singular values span a subspace of the kernel.
    pub v: CMatrix,
}

const SVD_MAX_ITER: usize = 10_000;

pub fn svd(m: &CMatrix) -> Result<Svd> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Ok(Svd {
            u: CMatrix::zeros(rows, 0),
            singular_values: vec![],
            v: CMatrix::zeros(0, 0),
        });
    }
    if rows == 0 {
        return Ok(Svd {
            u: CMatrix::zeros(0, 0),
            singular_values: vec![],
            v: CMatrix::identity(cols, cols),
        });
    }
    // Pad wide matrices with zero rows so that nalgebra returns a square V.
    let work = if rows < cols {
        let mut padded = CMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let dec = work
        .try_svd(true, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or(Error::ConvergenceFailure)?;
    let u = dec.u.ok_or(Error::ConvergenceFailure)?;
    let v_t = dec.v_t.ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..dec.singular_values.len()).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| dec.singular_values[i]).collect();
    let u = CMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    let v = CMatrix::from_fn(cols, order.len(), |i, j| v_t[(order[j], i)].conj());
    let u = if rows < cols { u.rows(0, rows).into_owned() } else { u };
    Ok(Svd { u, singular_values, v })
}

/// Outcome of a thresholded rank decision.
#[derive(Clone, Debug)]
pub struct RankInfo {
    pub rank: usize,
    pub cutoff: f64,
    pub singular_values: Vec<f64>,
}

impl RankInfo {
    /// Ratio of the smallest kept to the largest dropped singular value.
    ///
    /// Dropped values are floored at `ε·σ_max`, so exact zeros give a large
    /// but finite gap. `None` when nothing is kept.
    pub fn gap(&self) -> Option<f64> {
        if self.rank == 0 {
            return None;
        }
        let smax = self.singular_values[0];
        let floor = f64::EPSILON * smax;
        let kept = self.singular_values[self.rank - 1];
        let dropped = self.singular_values.get(self.rank).copied().unwrap_or(0.0).max(floor);
        Some(kept / dropped)
    }

    /// A singular value within a factor 10 of the cutoff, if any.
    pub fn unstable_value(&self) -> Option<f64> {
        if self.cutoff == 0.0 {
            return None;
        }
        self.singular_values
            .iter()
            .copied()
            .find(|&s| s > self.cutoff / 10.0 && s < self.cutoff * 10.0)
    }
}

pub fn rank_from_svd(dec: &Svd, tol: &Tolerances) -> RankInfo {
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_rel * smax;
    let rank = dec.singular_values.iter().filter(|&&s| s > cutoff).count();
    RankInfo {
        rank,
        cutoff,
        singular_values: dec.singular_values.clone(),
    }
}

pub fn rank_info(m: &CMatrix, tol: &Tolerances) -> Result<RankInfo> {
    Ok(rank_from_svd(&svd(m)?, tol))
}

pub fn svd_rank(m: &CMatrix, tol: &Tolerances) -> Result<usize> {
    Ok(rank_info(m, tol)?.rank)
}

/// Orthonormal basis of the kernel.
pub fn nullspace_basis(m: &CMatrix, tol: &Tolerances) -> Result<Vec<CVector>> {
    let dec = svd(m)?;
    let rank = rank_from_svd(&dec, tol).rank;
    Ok((rank..m.ncols()).map(|j| dec.v.column(j).into_owned()).collect())
}

/// Orthonormal basis of the column space.
pub fn column_space_basis(m: &CMatrix, tol: &Tolerances) -> Result<Vec<CVector>> {
    let dec = svd(m)?;
    let rank = rank_from_svd(&dec, tol).rank;
    Ok((0..rank).map(|j| dec.u.column(j).into_owned()).collect())
}

/// Stacks vectors as the columns of a matrix with `rows` rows.
pub fn columns(vectors: &[CVector], rows: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Minimum-norm least-squares solution of `A X = B`.
pub fn solve_lsq(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    if a.nrows() != b.nrows() {
        return Err(Error::Shape(format!("lsq: A is {:?}, B is {:?}", a.shape(), b.shape())));
    }
    let dec = svd(a)?;
    let info = rank_from_svd(&dec, tol);
    let mut x = CMatrix::zeros(a.ncols(), b.ncols());
    for j in 0..info.rank {
        let ucol = dec.u.column(j);
        let coeff = ucol.adjoint() * b / Complex64::from(info.singular_values[j]);
        x += dec.v.column(j) * coeff;
    }
    Ok(x)
}

/// Matrix exponential (scaling and squaring with a Padé approximant).
pub fn matrix_exp(m: &CMatrix) -> CMatrix {
    m.exp()
}

pub fn condition_number(m: &CMatrix) -> Result<f64> {
    let s = svd(m)?.singular_values;
    let (max, min) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
    Ok(if min == 0.0 { f64::INFINITY } else { max / min })
}

/// Inverse of a square matrix; fails when the condition number exceeds `1/rank_rel`.
pub fn matrix_inverse(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!("inverse of non-square {:?}", m.shape())));
    }
    let condition = condition_number(m)?;
    if condition.is_nan() || condition >= 1.0 / tol.rank_rel {
        return Err(Error::SingularMatrix { condition });
    }
    m.clone().try_inverse().ok_or(Error::SingularMatrix { condition })
}

/// Frobenius norm.
pub fn norm(m: &CMatrix) -> f64 {
    m.norm()
}
