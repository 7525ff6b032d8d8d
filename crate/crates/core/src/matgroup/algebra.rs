use num_complex::Complex64;

use super::{GroupKind, GroupSpec};
use crate::numeric::{CMatrix, CVector};

/// Fixed basis of `gl(n)` or `sl(n)` together with its structure constants.
#[derive(Clone, Debug)]
pub struct LieAlgebraBasis {
    group: GroupSpec,
    basis: Vec<CMatrix>,
    /// `ad(B_i)` in basis coordinates.
    ad_basis: Vec<CMatrix>,
}

impl LieAlgebraBasis {
    pub fn new(group: GroupSpec) -> Self {
        let n = group.n;
        let unit = |i: usize, j: usize| {
            let mut m = CMatrix::zeros(n, n);
            m[(i, j)] = Complex64::new(1.0, 0.0);
            m
        };
        let basis: Vec<CMatrix> = match group.kind {
            GroupKind::GL => (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| unit(i, j))
                .collect(),
            GroupKind::SL => {
                let mut b: Vec<CMatrix> = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|(i, j)| i != j)
                    .map(|(i, j)| unit(i, j))
                    .collect();
                b.extend((0..n - 1).map(|i| unit(i, i) - unit(i + 1, i + 1)));
                b
            }
        };
        let mut algebra = LieAlgebraBasis {
            group,
            basis,
            ad_basis: Vec::new(),
        };
        let ad_basis = (0..algebra.dim())
            .map(|i| {
                let mut ad = CMatrix::zeros(algebra.dim(), algebra.dim());
                for j in 0..algebra.dim() {
                    let bracket = &algebra.basis[i] * &algebra.basis[j] - &algebra.basis[j] * &algebra.basis[i];
                    ad.set_column(j, &algebra.coordinates(&bracket));
                }
                ad
            })
            .collect();
        algebra.ad_basis = ad_basis;
        algebra
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn n(&self) -> usize {
        self.group.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// `Σ x_i B_i`.
    pub fn to_matrix(&self, x: &CVector) -> CMatrix {
        let mut m = CMatrix::zeros(self.n(), self.n());
        for (xi, b) in x.iter().zip(&self.basis) {
            if *xi != Complex64::new(0.0, 0.0) {
                m += b * *xi;
            }
        }
        m
    }

    /// Coordinates of the projection of `m` onto the algebra (for `sl(n)`
    /// the trace part is discarded).
    pub fn coordinates(&self, m: &CMatrix) -> CVector {
        let n = self.n();
        let mut x = CVector::zeros(self.dim());
        match self.group.kind {
            GroupKind::GL => {
                for i in 0..n {
                    for j in 0..n {
                        x[i * n + j] = m[(i, j)];
                    }
                }
            }
            GroupKind::SL => {
                let mut k = 0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            x[k] = m[(i, j)];
                            k += 1;
                        }
                    }
                }
                // X = Σ c_i (E_ii − E_{i+1,i+1}) has X_ll = c_l − c_{l−1}.
                let mean = m.trace() / Complex64::from(n as f64);
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n - 1 {
                    acc += m[(i, i)] - mean;
                    x[k + i] = acc;
                }
            }
        }
        x
    }

    /// Frobenius distance from `m` to the algebra.
    pub fn projection_residual(&self, m: &CMatrix) -> f64 {
        (m - self.to_matrix(&self.coordinates(m))).norm()
    }

    /// `ad_X` in basis coordinates, from the structure constants.
    pub fn ad(&self, x: &CVector) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (xi, ad) in x.iter().zip(&self.ad_basis) {
            m += ad * *xi;
        }
        m
    }

    pub fn bracket(&self, x: &CVector, y: &CVector) -> CVector {
        self.ad(x) * y
    }

    /// Matrix of `X ↦ g X g⁻¹` in basis coordinates.
    pub fn adjoint_of(&self, g: &CMatrix, g_inv: &CMatrix) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (j, b) in self.basis.iter().enumerate() {
            m.set_column(j, &self.coordinates(&(g * b * g_inv)));
        }
        m
    }
}
