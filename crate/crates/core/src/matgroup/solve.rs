use std::sync::Arc;

use num_complex::Complex64;

use super::{GroupSpec, Representation};
use crate::error::{Error, Result};
use crate::numeric::{self, CMatrix, CVector, Tolerances};
use crate::words::{fox_derivative, GroupRingElement, Presentation};

/// Iteration cap for [`find_representation`].
pub const MAX_ITERATIONS: usize = 50;
const POLISH_STEPS: usize = 2;
const MAX_HALVINGS: usize = 40;

/// Relator equations with cached Fox derivatives.
pub(crate) struct Linearization {
    fox: Vec<Vec<GroupRingElement>>,
}

impl Linearization {
    pub(crate) fn new(presentation: &Presentation) -> Self {
        let p = presentation.generator_count();
        let fox = presentation
            .relators()
            .iter()
            .map(|r| {
                (0..p)
                    .map(|k| fox_derivative(r, k, p).expect("relator over generators"))
                    .collect()
            })
            .collect();
        Linearization { fox }
    }

    /// Stacked `vec(ρ(r) − I)` and the Jacobian of `ε ↦ vec(ρ_ε(r))` at
    /// `ε = 0`, where `ρ_ε(x_k) = exp(ε_k) ρ(x_k)`.
    pub(crate) fn system(&self, rep: &Representation) -> (CVector, CMatrix) {
        let n = rep.group().n;
        let d = rep.algebra().dim();
        let p = rep.generator_count();
        let rels = rep.presentation().relators();
        let block = n * n;
        let mut residual = CVector::zeros(rels.len() * block);
        let mut jac = CMatrix::zeros(rels.len() * block, p * d);
        for (ri, r) in rels.iter().enumerate() {
            let value = rep.evaluate_word(r);
            let diff = &value - CMatrix::identity(n, n);
            for (idx, z) in diff.iter().enumerate() {
                residual[ri * block + idx] = *z;
            }
            for k in 0..p {
                let fk = rep.evaluate_groupring(&self.fox[ri][k]);
                for b in 0..d {
                    let m = rep.algebra().to_matrix(&fk.column(b).into_owned()) * &value;
                    for (idx, z) in m.iter().enumerate() {
                        jac[(ri * block + idx, k * d + b)] = *z;
                    }
                }
            }
        }
        (residual, jac)
    }
}

fn apply_step(base: &Representation, images: &[CMatrix], step: &CVector, scale: f64) -> Vec<CMatrix> {
    let d = base.algebra().dim();
    images
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let x = step.rows(k * d, d).into_owned() * Complex64::new(scale, 0.0);
            numeric::matrix_exp(&base.algebra().to_matrix(&x)) * m
        })
        .collect()
}

/// Damped Gauss–Newton on the relator equations starting from `start`.
///
/// Steps are minimum-norm tangent perturbations `ρ(x_k) ↦ exp(ε_k) ρ(x_k)`.
/// A step is halved until the residual decreases.
fn gauss_newton(base: &Representation, tol: &Tolerances, max_iter: usize) -> Result<Vec<CMatrix>> {
    let lin = Linearization::new(base.presentation());
    let start = base.images().to_vec();
    let mut rep = base.candidate_like(start, tol)?;
    let (mut res_vec, mut jac) = lin.system(&rep);
    let mut residual = rep.relator_residual();
    let mut iterations = 0;
    let mut polish = 0;
    loop {
        if residual <= tol.newton_tol {
            if polish >= POLISH_STEPS || residual == 0.0 {
                break;
            }
            polish += 1;
        } else if iterations >= max_iter {
            return Err(Error::NoConvergence { iterations, residual });
        }
        let rhs = CMatrix::from_column_slice(res_vec.len(), 1, (-&res_vec).as_slice());
        let step: CVector = numeric::solve_lsq(&jac, &rhs, tol)?.column(0).into_owned();
        let mut accepted = None;
        let mut scale = 1.0;
        for _ in 0..MAX_HALVINGS {
            let trial_images = apply_step(base, rep.images(), &step, scale);
            if let Ok(trial) = base.candidate_like(trial_images, tol) {
                let r = trial.relator_residual();
                if r < residual {
                    accepted = Some((trial, r));
                    break;
                }
            }
            scale *= 0.5;
        }
        match accepted {
            Some((trial, r)) => {
                rep = trial;
                residual = r;
                (res_vec, jac) = lin.system(&rep);
                iterations += 1;
            }
            None if residual <= tol.newton_tol => break,
            None => return Err(Error::NoConvergence { iterations, residual }),
        }
    }
    Ok(rep.images().to_vec())
}

/// Projects a seed onto `Hom(Γ, G)` by damped Gauss–Newton.
///
/// Without relators the seed is returned unchanged. The `SL` constraint is
/// preserved because every step is the exponential of a traceless matrix.
pub fn find_representation(
    presentation: impl Into<Arc<Presentation>>,
    group: GroupSpec,
    seed: Vec<CMatrix>,
    tol: &Tolerances,
) -> Result<Representation> {
    let presentation = presentation.into();
    let candidate = Representation::candidate(presentation.clone(), group, seed, tol)?;
    if presentation.relators().is_empty() {
        return Ok(candidate);
    }
    let images = gauss_newton(&candidate, tol, MAX_ITERATIONS)?;
    Representation::new(presentation, group, images, tol)
}

/// Whether the images act irreducibly on `ℂⁿ`.
///
/// By Burnside's theorem this holds iff the images generate all of `M_n(ℂ)`
/// as an algebra; the span is grown by right multiplication until it
/// stabilizes.
pub fn is_irreducible(rep: &Representation, tol: &Tolerances) -> bool {
    let n = rep.group().n;
    let threshold = tol.rank_rel.sqrt();
    let mut basis: Vec<CVector> = Vec::new();
    let mut frontier: Vec<CMatrix> = vec![CMatrix::identity(n, n)];
    let try_add = |basis: &mut Vec<CVector>, m: &CMatrix| -> bool {
        let norm = m.norm();
        if norm == 0.0 {
            return false;
        }
        let mut v = CVector::from_column_slice(m.as_slice()) / Complex64::new(norm, 0.0);
        for _ in 0..2 {
            for q in basis.iter() {
                let ip = q.dotc(&v);
                v -= q * ip;
            }
        }
        let r = v.norm();
        if r > threshold {
            basis.push(v / Complex64::new(r, 0.0));
            true
        } else {
            false
        }
    };
    try_add(&mut basis, &frontier[0]);
    while !frontier.is_empty() && basis.len() < n * n {
        let mut next = Vec::new();
        for m in &frontier {
            for g in rep.images() {
                let prod = m * g;
                if try_add(&mut basis, &prod) {
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    basis.len() == n * n
}
