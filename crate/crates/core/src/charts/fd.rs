//! Finite-difference exterior derivatives of coefficient functions.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::c;

/// Coefficients `ω_S` keyed by strictly increasing index tuples `S`.
pub type Coefficients = BTreeMap<Vec<usize>, Complex64>;

/// Difference scheme for first derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// `(f(x+h) − f(x−h)) / 2h`, second order.
    Central,
    /// Average of the real-direction and imaginary-direction central
    /// differences. For holomorphic `f` the `h²` terms cancel, so the
    /// scheme is fourth order; the two halves differ by the Cauchy–Riemann
    /// discrepancy.
    Holomorphic,
}

impl Stencil {
    pub fn order(self) -> i32 {
        match self {
            Stencil::Central => 2,
            Stencil::Holomorphic => 4,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DwComponent {
    pub indices: Vec<usize>,
    pub value: Complex64,
}

/// `{"max_dw": ..., "max_dw_step": ..., "max_dw_half_step": ..., "scale": ...}`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ExteriorDerivativeReport {
    pub dimension: usize,
    pub degree: usize,
    pub base: Vec<Complex64>,
    pub step: f64,
    pub stencil: Stencil,
    /// `max |dω|` with step `h`.
    pub max_dw_step: f64,
    /// `max |dω|` with step `h/2`.
    pub max_dw_half_step: f64,
    /// `max |dω|` after Richardson extrapolation of the two.
    pub max_dw: f64,
    /// Largest difference between real- and imaginary-direction derivatives
    /// at step `h/2` (holomorphic stencil only).
    pub cauchy_riemann: Option<f64>,
    /// Largest `|ω_S|` at the base point.
    pub scale: f64,
    /// Extrapolated components of `dω`.
    pub components: Vec<DwComponent>,
}

fn offset(base: &[Complex64], k: usize, delta: Complex64) -> Vec<Complex64> {
    let mut p = base.to_vec();
    p[k] += delta;
    p
}

fn difference(plus: &Coefficients, minus: &Coefficients, denom: Complex64) -> Coefficients {
    plus.iter()
        .map(|(key, v)| (key.clone(), (v - minus[key]) / denom))
        .collect()
}

struct Derivatives {
    value: Coefficients,
    cauchy_riemann: f64,
}

fn derivative<F>(f: &mut F, base: &[Complex64], k: usize, h: f64, stencil: Stencil) -> Result<Derivatives>
where
    F: FnMut(&[Complex64]) -> Result<Coefficients>,
{
    let step = c(h, 0.0);
    let real = difference(&f(&offset(base, k, step))?, &f(&offset(base, k, -step))?, step * 2.0);
    match stencil {
        Stencil::Central => Ok(Derivatives {
            value: real,
            cauchy_riemann: 0.0,
        }),
        Stencil::Holomorphic => {
            let istep = c(0.0, h);
            let imag = difference(&f(&offset(base, k, istep))?, &f(&offset(base, k, -istep))?, istep * 2.0);
            let mut cr = 0.0f64;
            let value = real
                .iter()
                .map(|(key, r)| {
                    let i = imag[key];
                    cr = cr.max((r - i).norm());
                    (key.clone(), (r + i) * 0.5)
                })
                .collect();
            Ok(Derivatives {
                value,
                cauchy_riemann: cr,
            })
        }
    }
}

fn assemble(subset: &[usize], derivs: &[Coefficients]) -> Complex64 {
    let mut total = c(0.0, 0.0);
    for (pos, &k) in subset.iter().enumerate() {
        let rest: Vec<usize> = subset.iter().copied().filter(|&i| i != k).collect();
        let term = derivs[k][&rest];
        total += if pos % 2 == 0 { term } else { -term };
    }
    total
}

/// `dω` at `base` for an `n`-form on an open subset of `ℂ^m`, given by its
/// coefficient function. `coeffs` must return every increasing `n`-tuple.
///
/// `dω_{i_0..i_n} = Σ_j (−1)^j ∂_{i_j} ω_{i_0..î_j..i_n}`, each derivative
/// computed with steps `h` and `h/2` and Richardson-extrapolated.
pub fn exterior_derivative<F>(
    dimension: usize,
    degree: usize,
    base: &[Complex64],
    h: f64,
    stencil: Stencil,
    mut coeffs: F,
) -> Result<ExteriorDerivativeReport>
where
    F: FnMut(&[Complex64]) -> Result<Coefficients>,
{
    if base.len() != dimension {
        return Err(Error::Shape(format!(
            "base point of length {} in dimension {dimension}",
            base.len()
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let at_base = coeffs(base)?;
    for key in (0..dimension).combinations(degree) {
        if !at_base.contains_key(&key) {
            return Err(Error::Shape(format!("missing coefficient {key:?}")));
        }
    }
    let scale = at_base.values().map(|v| v.norm()).fold(0.0, f64::max);
    let subsets: Vec<Vec<usize>> = (0..dimension).combinations(degree + 1).collect();
    let mut report = ExteriorDerivativeReport {
        dimension,
        degree,
        base: base.to_vec(),
        step: h,
        stencil,
        max_dw_step: 0.0,
        max_dw_half_step: 0.0,
        max_dw: 0.0,
        cauchy_riemann: (stencil == Stencil::Holomorphic).then_some(0.0),
        scale,
        components: Vec::new(),
    };
    if subsets.is_empty() {
        return Ok(report);
    }
    let mut coarse = Vec::with_capacity(dimension);
    let mut fine = Vec::with_capacity(dimension);
    let mut cr = 0.0f64;
    for k in 0..dimension {
        coarse.push(derivative(&mut coeffs, base, k, h, stencil)?.value);
        let half = derivative(&mut coeffs, base, k, h / 2.0, stencil)?;
        cr = cr.max(half.cauchy_riemann);
        fine.push(half.value);
    }
    let weight = 2f64.powi(stencil.order());
    for subset in subsets {
        let dh = assemble(&subset, &coarse);
        let dh2 = assemble(&subset, &fine);
        let extrapolated = (dh2 * weight - dh) / (weight - 1.0);
        report.max_dw_step = report.max_dw_step.max(dh.norm());
        report.max_dw_half_step = report.max_dw_half_step.max(dh2.norm());
        report.max_dw = report.max_dw.max(extrapolated.norm());
        report.components.push(DwComponent {
            indices: subset,
            value: extrapolated,
        });
    }
    if let Some(slot) = report.cauchy_riemann.as_mut() {
        *slot = cr;
    }
    Ok(report)
}

/// Sign of a permutation of distinct integers.
pub(crate) fn permutation_sign(perm: &[usize]) -> f64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(1/n!) Σ_π sign(π) f(π(S))` and the largest `|f(π(S)) − sign(π) f(S)|`.
pub fn alternate(subset: &[usize], mut f: impl FnMut(&[usize]) -> Result<Complex64>) -> Result<(Complex64, f64)> {
    let n = subset.len();
    let identity = f(subset)?;
    let mut total = identity;
    let mut count = 1.0;
    let mut deviation = 0.0f64;
    for perm in subset.iter().copied().permutations(n).skip(1) {
        let sign = permutation_sign(&perm);
        let value = f(&perm)?;
        deviation = deviation.max((value - identity * sign).norm());
        total += value * sign;
        count += 1.0;
    }
    Ok((total / count, deviation))
}
