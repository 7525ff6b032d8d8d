//! Local charts on `Hom(Γ, G)`, finite-difference exterior derivatives of
//! forms built from `η_Φ`, and pullbacks along polynomial families.
//!
//! A chart at a point `ρ` with cocycle directions `σ_1..σ_d` sends
//! `t ∈ ℂ^d` to the unique point `exp(c)·exp(Σ t_i σ_i)·ρ` of the relator
//! variety with `c` in the orthogonal complement of `Z¹(ρ)`. Because `c` is
//! determined by a complex-linear slice condition, the chart is holomorphic
//! in `t`.

mod demo;
mod family;
mod fd;
mod polynomial;

pub use demo::{free_group_demo, FreeGroupDemoReport};
pub use family::{
    base_change_check, family_pullback, family_tangent, BaseChangeReport, FamilyPullback, FamilySample, FamilySpec,
    FamilySpecJson, PullbackClosedness, BASE_CHANGE_TOL, CLOSEDNESS_TOL, FAMILY_RESIDUAL_TOL, FAMILY_SAMPLES,
    TANGENT_TOL,
};
pub use fd::{alternate, exterior_derivative, Coefficients, DwComponent, ExteriorDerivativeReport, Stencil};
pub use polynomial::{Monomial, PolyMatrix, Polynomial};

use itertools::Itertools;
use num_complex::Complex64;

use crate::cohomology::{fox_jacobian, TangentVector};
use crate::error::{Error, Result};
use crate::forms::EtaContext;
use crate::matgroup::{Linearization, Representation};
use crate::numeric::{self, c, CMatrix, CVector, Tolerances};

/// Iteration cap of the retraction solve.
pub const MAX_ITERATIONS: usize = 50;
const POLISH_STEPS: usize = 3;
const MAX_HALVINGS: usize = 30;
/// Default outer finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-2;

/// A holomorphic chart of `Hom(Γ, G)` around a point.
pub struct Chart {
    center: Representation,
    directions: Vec<TangentVector>,
    slice: CMatrix,
    lin: Linearization,
    tol: Tolerances,
}

/// Result of [`Chart::retract`].
#[derive(Clone, Debug)]
pub struct Retraction {
    pub rep: Representation,
    /// `‖c‖` for the slice correction `c`.
    pub correction: f64,
    pub iterations: usize,
}

/// Failure of the retraction solve; a correction already exceeding `‖t‖`
/// means the parameter is outside the chart.
fn stalled(coeffs: &CVector, t_norm: f64, iterations: usize, residual: f64) -> Error {
    let correction = coeffs.norm();
    if correction > t_norm {
        Error::LeftChart {
            correction,
            step: t_norm,
        }
    } else {
        Error::NoConvergence { iterations, residual }
    }
}

/// A retracted point together with the re-extracted chart tangents.
#[derive(Clone, Debug)]
pub struct ChartPoint {
    pub t: Vec<Complex64>,
    pub rep: Representation,
    pub tangents: Vec<TangentVector>,
}

impl Chart {
    /// Chart with the given cocycle directions. Directions that are not
    /// cocycles at `center` are rejected.
    pub fn new(center: Representation, directions: Vec<TangentVector>, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        if directions.is_empty() {
            return Err(Error::InvalidInput("a chart needs at least one direction".into()));
        }
        let (p, d) = (center.generator_count(), center.algebra().dim());
        for s in &directions {
            if s.generator_count() != p || s.dim() != d {
                return Err(Error::Shape("chart direction does not match the representation".into()));
            }
            let residual = s.cocycle_residual(&center);
            if residual > TANGENT_TOL * s.norm().max(1.0) {
                return Err(Error::NotTangent { residual });
            }
        }
        let jac = fox_jacobian(&center);
        let svd = numeric::svd(&jac)?;
        let rank = numeric::rank_from_svd(&svd, tol).rank;
        let slice = svd.v.columns(0, rank).into_owned();
        let lin = Linearization::new(center.presentation());
        Ok(Chart {
            center,
            directions,
            slice,
            lin,
            tol: *tol,
        })
    }

    pub fn center(&self) -> &Representation {
        &self.center
    }

    pub fn directions(&self) -> &[TangentVector] {
        &self.directions
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    fn exp_images(&self, start: &[CMatrix], x: &CVector) -> Vec<CMatrix> {
        let d = self.center.algebra().dim();
        start
            .iter()
            .enumerate()
            .map(|(k, m)| numeric::matrix_exp(&self.center.algebra().to_matrix(&x.rows(k * d, d).into_owned())) * m)
            .collect()
    }

    /// The point of the chart at parameter `t`.
    pub fn retract(&self, t: &[Complex64]) -> Result<Retraction> {
        if t.len() != self.dimension() {
            return Err(Error::Shape(format!(
                "chart parameter of length {} for dimension {}",
                t.len(),
                self.dimension()
            )));
        }
        if t.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let t_norm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if t_norm == 0.0 {
            return Ok(Retraction {
                rep: self.center.clone(),
                correction: 0.0,
                iterations: 0,
            });
        }
        let first_order = TangentVector::combination(&self.directions, t);
        let start = self.exp_images(self.center.images(), first_order.stacked());
        let mut coeffs = CVector::zeros(self.slice.ncols());
        let mut rep = self.center.candidate_like(start.clone(), &self.tol)?;
        let mut residual = rep.relator_residual();
        let mut iterations = 0;
        let mut polish = 0;
        loop {
            if residual <= self.tol.newton_tol {
                if polish >= POLISH_STEPS || residual == 0.0 {
                    break;
                }
                polish += 1;
            } else if iterations >= MAX_ITERATIONS {
                return Err(stalled(&coeffs, t_norm, iterations, residual));
            }
            let (res_vec, jac) = self.lin.system(&rep);
            let a = &jac * &self.slice;
            let rhs = CMatrix::from_column_slice(res_vec.len(), 1, (-&res_vec).as_slice());
            let step: CVector = numeric::solve_lsq(&a, &rhs, &self.tol)?.column(0).into_owned();
            let mut accepted = None;
            let mut scale = 1.0;
            for _ in 0..MAX_HALVINGS {
                let trial_coeffs = &coeffs + &step * c(scale, 0.0);
                let images = self.exp_images(&start, &(&self.slice * &trial_coeffs));
                if let Ok(trial) = self.center.candidate_like(images, &self.tol) {
                    let r = trial.relator_residual();
                    if r < residual || (residual <= self.tol.newton_tol && r <= self.tol.newton_tol) {
                        accepted = Some((trial, r, trial_coeffs));
                        break;
                    }
                }
                scale *= 0.5;
            }
            match accepted {
                Some((trial, r, next)) => {
                    rep = trial;
                    residual = r;
                    coeffs = next;
                    iterations += 1;
                }
                None if residual <= self.tol.newton_tol => break,
                None => return Err(stalled(&coeffs, t_norm, iterations, residual)),
            }
        }
        let correction = coeffs.norm();
        if correction > t_norm {
            return Err(Error::LeftChart {
                correction,
                step: t_norm,
            });
        }
        Ok(Retraction {
            rep,
            correction,
            iterations,
        })
    }

    /// Tangents of the chart coordinate curves at `t`, as cocycles at
    /// `retract(t)`: the derivative of `ε ↦ retract(t + ε e_i)` times
    /// `retract(t)⁻¹`, by a five-point difference with step `tol.fd_step`.
    pub fn tangents(&self, t: &[Complex64], at: &Representation) -> Result<Vec<TangentVector>> {
        let eta = self.tol.fd_step;
        let algebra = self.center.algebra();
        let inverses = at
            .images()
            .iter()
            .map(|m| numeric::matrix_inverse(m, &self.tol))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::with_capacity(self.dimension());
        for i in 0..self.dimension() {
            let sample = |delta: f64| -> Result<Vec<CMatrix>> {
                let mut s = t.to_vec();
                s[i] += c(delta, 0.0);
                Ok(self.retract(&s)?.rep.images().to_vec())
            };
            let (m2, m1, p1, p2) = (sample(-2.0 * eta)?, sample(-eta)?, sample(eta)?, sample(2.0 * eta)?);
            let values: Vec<CVector> = (0..at.generator_count())
                .map(|k| {
                    let deriv = (&m2[k] - &m1[k] * c(8.0, 0.0) + &p1[k] * c(8.0, 0.0) - &p2[k]) / c(12.0 * eta, 0.0);
                    algebra.coordinates(&(deriv * &inverses[k]))
                })
                .collect();
            out.push(TangentVector::from_values(&values));
        }
        Ok(out)
    }

    pub fn point(&self, t: &[Complex64]) -> Result<ChartPoint> {
        let rep = self.retract(t)?.rep;
        let tangents = self.tangents(t, &rep)?;
        Ok(ChartPoint {
            t: t.to_vec(),
            rep,
            tangents,
        })
    }
}

/// A differential form on a chart, given by its coefficient in the chart
/// coordinates at a retracted point.
pub trait ChartForm {
    fn degree(&self) -> usize;
    /// `ω(∂_{i_1}, ..., ∂_{i_n})` at `point`; `indices` need not be sorted.
    fn coefficient(&self, point: &ChartPoint, indices: &[usize]) -> Result<Complex64>;
}

/// `η_Φ` evaluated on the re-extracted chart tangents at each point.
pub struct EtaForm {
    pub ctx: EtaContext,
}

impl ChartForm for EtaForm {
    fn degree(&self) -> usize {
        self.ctx.degree()
    }

    fn coefficient(&self, point: &ChartPoint, indices: &[usize]) -> Result<Complex64> {
        let slots: Vec<TangentVector> = indices.iter().map(|&i| point.tangents[i].clone()).collect();
        self.ctx.at(point.rep.clone()).eta(&slots)
    }
}

/// `η_Φ` at the chart center on the chart directions, independent of `t`.
pub struct FrozenForm {
    pub ctx: EtaContext,
    pub directions: Vec<TangentVector>,
}

impl ChartForm for FrozenForm {
    fn degree(&self) -> usize {
        self.ctx.degree()
    }

    fn coefficient(&self, _point: &ChartPoint, indices: &[usize]) -> Result<Complex64> {
        let slots: Vec<TangentVector> = indices.iter().map(|&i| self.directions[i].clone()).collect();
        self.ctx.eta(&slots)
    }
}

/// `ω + amplitude · t_variable · dt_{indices}`: a non-closed perturbation
/// used as a negative control.
pub struct PerturbedForm<F> {
    pub inner: F,
    pub amplitude: f64,
    pub variable: usize,
    /// Increasing index tuple receiving the perturbation.
    pub indices: Vec<usize>,
}

impl<F: ChartForm> ChartForm for PerturbedForm<F> {
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn coefficient(&self, point: &ChartPoint, indices: &[usize]) -> Result<Complex64> {
        let base = self.inner.coefficient(point, indices)?;
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if sorted != self.indices {
            return Ok(base);
        }
        let sign = fd::permutation_sign(indices);
        Ok(base + point.t[self.variable] * (self.amplitude * sign))
    }
}

/// Closedness report for a chart form: the finite-difference exterior
/// derivative at the chart center plus the alternation defect of the raw
/// coefficients.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ChartClosedness {
    pub exterior_derivative: ExteriorDerivativeReport,
    /// Largest `|ω(π(S)) − sign(π) ω(S)|` seen while antisymmetrizing.
    pub antisymmetry: f64,
    pub tangent_step: f64,
}

/// `dω` at the chart center by finite differences of the antisymmetrized
/// coefficients; see [`exterior_derivative`].
pub fn fd_exterior_derivative<F: ChartForm>(
    chart: &Chart,
    form: &F,
    h: f64,
    stencil: Stencil,
) -> Result<ChartClosedness> {
    let dim = chart.dimension();
    let degree = form.degree();
    if dim < degree {
        return Err(Error::InvalidInput(format!(
            "{degree}-form on a {dim}-dimensional chart"
        )));
    }
    let mut antisymmetry = 0.0f64;
    let report = exterior_derivative(dim, degree, &vec![c(0.0, 0.0); dim], h, stencil, |t| {
        let point = chart.point(t)?;
        let mut out = Coefficients::new();
        for subset in (0..dim).combinations(degree) {
            let (value, dev) = alternate(&subset, |idx| form.coefficient(&point, idx))?;
            antisymmetry = antisymmetry.max(dev);
            out.insert(subset, value);
        }
        Ok(out)
    })?;
    Ok(ChartClosedness {
        exterior_derivative: report,
        antisymmetry,
        tangent_step: chart.tol.fd_step,
    })
}

#[cfg(test)]
mod tests;
