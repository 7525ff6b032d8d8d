//! Multivariate complex polynomials and polynomial matrices.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{c, CMatrix};

/// `Σ c_α s^α`, keyed by exponent vectors. Zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Monomial>", into = "Vec<Monomial>")]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, Complex64>,
}

/// Wire format of one term: `{"coeff": [re, im], "powers": [i1, i2, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: Complex64,
    pub powers: Vec<u32>,
}

impl From<Vec<Monomial>> for Polynomial {
    fn from(terms: Vec<Monomial>) -> Self {
        let mut p = Polynomial::zero();
        for t in terms {
            p.add_term(t.powers, t.coeff);
        }
        p
    }
}

impl From<Polynomial> for Vec<Monomial> {
    fn from(p: Polynomial) -> Self {
        p.terms
            .into_iter()
            .map(|(powers, coeff)| Monomial { coeff, powers })
            .collect()
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(vars: usize, value: Complex64) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(vec![0; vars], value);
        p
    }

    /// The coordinate function `s_k` on `ℂ^vars`.
    pub fn variable(vars: usize, k: usize) -> Self {
        let mut powers = vec![0; vars];
        powers[k] = 1;
        let mut p = Polynomial::zero();
        p.add_term(powers, c(1.0, 0.0));
        p
    }

    pub fn add_term(&mut self, powers: Vec<u32>, coeff: Complex64) {
        let zero = c(0.0, 0.0);
        match self.terms.entry(powers) {
            Entry::Vacant(e) => {
                if coeff != zero {
                    e.insert(coeff);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == zero {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.iter().sum()).max().unwrap_or(0)
    }

    /// Checks that every exponent vector has length `vars`.
    pub fn check_vars(&self, vars: usize) -> Result<()> {
        match self.terms.keys().find(|k| k.len() != vars) {
            Some(k) => Err(Error::InvalidFamily(format!(
                "monomial powers {k:?} for {vars} parameters"
            ))),
            None => Ok(()),
        }
    }

    pub fn eval(&self, s: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(powers, coeff)| powers.iter().zip(s).fold(*coeff, |acc, (&p, &x)| acc * x.powu(p)))
            .sum()
    }

    /// `∂/∂s_k`, exact.
    pub fn derivative(&self, k: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (powers, coeff) in &self.terms {
            if powers[k] > 0 {
                let mut p = powers.clone();
                p[k] -= 1;
                out.add_term(p, coeff * powers[k] as f64);
            }
        }
        out
    }

    /// `p(q_1(u), ..., q_m(u))` as a polynomial in `u ∈ ℂ^vars`.
    pub fn compose(&self, subs: &[Polynomial], vars: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (powers, coeff) in &self.terms {
            let mut term = Polynomial::constant(vars, *coeff);
            for (q, &e) in subs.iter().zip(powers) {
                for _ in 0..e {
                    term = &term * q;
                }
            }
            out = &out + &term;
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * factor);
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(c(-1.0, 0.0))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                // Multiplying monomials adds their exponents.
                #[allow(clippy::suspicious_arithmetic_impl)]
                let powers = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(powers, va * vb);
            }
        }
        out
    }
}

/// Square matrix with polynomial entries, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyMatrix {
    rows: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidFamily(
                "polynomial matrices must be square and nonempty".into(),
            ));
        }
        Ok(PolyMatrix { rows })
    }

    pub fn constant(vars: usize, m: &CMatrix) -> Self {
        let n = m.nrows();
        PolyMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| Polynomial::constant(vars, m[(i, j)])).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.rows.iter().flatten()
    }

    pub fn eval(&self, s: &[Complex64]) -> CMatrix {
        let n = self.n();
        CMatrix::from_fn(n, n, |i, j| self.rows[i][j].eval(s))
    }

    pub fn derivative(&self, k: usize) -> PolyMatrix {
        self.map(|p| p.derivative(k))
    }

    pub fn compose(&self, subs: &[Polynomial], vars: usize) -> PolyMatrix {
        self.map(|p| p.compose(subs, vars))
    }

    pub fn scale(&self, p: &Polynomial) -> PolyMatrix {
        self.map(|q| q * p)
    }

    fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

impl Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        PolyMatrix { rows }
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Polynomial::zero(), |acc, k| {
                            &acc + &(&self.rows[i][k] * &rhs.rows[k][j])
                        })
                    })
                    .collect()
            })
            .collect();
        PolyMatrix { rows }
    }
}
