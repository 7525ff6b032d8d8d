use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::matgroup::Representation;
use crate::numeric::{CMatrix, CVector};
use crate::words::Word;

/// A 1-cochain on the free group, given by its Lie algebra values on the
/// generators and stacked as one vector of length `p · dim 𝔤`.
///
/// It is a cocycle at `ρ` when the Fox Jacobian annihilates it; it then
/// extends to all of `Γ` by `σ(uv) = σ(u) + Ad ρ(u) σ(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    dim: usize,
    values: CVector,
}

impl TangentVector {
    pub fn from_values(values: &[CVector]) -> Self {
        let dim = values.first().map_or(0, |v| v.len());
        let mut stacked = CVector::zeros(dim * values.len());
        for (k, v) in values.iter().enumerate() {
            assert_eq!(v.len(), dim, "generator values must share a dimension");
            stacked.rows_mut(k * dim, dim).copy_from(v);
        }
        TangentVector { dim, values: stacked }
    }

    pub fn from_stacked(values: CVector, dim: usize) -> Self {
        assert!(
            dim > 0 && values.len().is_multiple_of(dim),
            "stacked length must be a multiple of dim"
        );
        TangentVector { dim, values }
    }

    pub fn zero(generators: usize, dim: usize) -> Self {
        TangentVector {
            dim,
            values: CVector::zeros(generators * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.values.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn stacked(&self) -> &CVector {
        &self.values
    }

    /// Value on generator `k`.
    pub fn value(&self, k: usize) -> CVector {
        self.values.rows(k * self.dim, self.dim).into_owned()
    }

    pub fn values(&self) -> Vec<CVector> {
        (0..self.generator_count()).map(|k| self.value(k)).collect()
    }

    pub fn norm(&self) -> f64 {
        self.values.norm()
    }

    /// `(σ(w), Ad ρ(w))` via the cocycle rule, with
    /// `σ(x_k⁻¹) = −Ad ρ(x_k)⁻¹ σ(x_k)`.
    pub fn evaluate_with_adjoint(&self, rep: &Representation, w: &Word) -> (CVector, CMatrix) {
        let d = self.dim;
        let mut ad = CMatrix::identity(d, d);
        let mut acc = CVector::zeros(d);
        for &l in w.letters() {
            let v = self.values.rows(l.generator * d, d);
            let letter_ad = rep.letter_adjoint(l);
            if l.inverse {
                acc -= &ad * (letter_ad * v);
            } else {
                acc += &ad * v;
            }
            ad *= letter_ad;
        }
        (acc, ad)
    }

    pub fn evaluate(&self, rep: &Representation, w: &Word) -> CVector {
        self.evaluate_with_adjoint(rep, w).0
    }

    /// `‖J σ‖` for the Fox Jacobian `J` at `rep`.
    pub fn cocycle_residual(&self, rep: &Representation) -> f64 {
        rep.presentation()
            .relators()
            .iter()
            .map(|r| self.evaluate(rep, r).norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies a linear map to every generator value.
    pub fn map_values(&self, m: &CMatrix) -> TangentVector {
        let values: Vec<CVector> = self.values().iter().map(|v| m * v).collect();
        TangentVector::from_values(&values)
    }

    /// `Σ c_i v_i`.
    pub fn combination(vectors: &[TangentVector], coeffs: &[Complex64]) -> TangentVector {
        assert_eq!(vectors.len(), coeffs.len());
        let first = vectors.first().expect("at least one vector");
        let mut out = CVector::zeros(first.values.len());
        for (v, c) in vectors.iter().zip(coeffs) {
            out += &v.values * *c;
        }
        TangentVector {
            dim: first.dim,
            values: out,
        }
    }
}

impl Add for &TangentVector {
    type Output = TangentVector;
    fn add(self, rhs: &TangentVector) -> TangentVector {
        TangentVector {
            dim: self.dim,
            values: &self.values + &rhs.values,
        }
    }
}

impl Sub for &TangentVector {
    type Output = TangentVector;
    fn sub(self, rhs: &TangentVector) -> TangentVector {
        TangentVector {
            dim: self.dim,
            values: &self.values - &rhs.values,
        }
    }
}

impl Neg for &TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        TangentVector {
            dim: self.dim,
            values: -&self.values,
        }
    }
}

impl Mul<Complex64> for &TangentVector {
    type Output = TangentVector;
    fn mul(self, rhs: Complex64) -> TangentVector {
        TangentVector {
            dim: self.dim,
            values: &self.values * rhs,
        }
    }
}
