//! Chain-level forms on `Hom(F_p, G) = G^p` are not closed.

use serde::Serialize;

use super::fd::Stencil;
use super::{fd_exterior_derivative, Chart, EtaForm};
use crate::cohomology::{relator_normal_form, BarChain};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::forms::EtaContext;
use crate::invariants::InvariantPolynomial;
use crate::matgroup::{GroupSpec, Representation};
use crate::numeric::Tolerances;
use crate::words::{Presentation, Word};

/// `|dω| > NONCLOSED_THRESHOLD · scale` counts as demonstrated non-closedness.
pub const NONCLOSED_THRESHOLD: f64 = 1e-3;
/// The cup cocycle on a boundary must pair to at most this times the scale.
pub const BOUNDARY_TOL: f64 = 1e-9;

const NOTE: &str = "H^2 of a free group vanishes, so the cohomology-valued form is zero and trivially closed; \
the chain-level form obtained by pairing with the non-cycle [a|b] is not closed";

#[derive(Clone, Debug, Serialize)]
pub struct FreeGroupDemoReport {
    pub generators: usize,
    pub group: GroupSpec,
    pub phi: InvariantPolynomial,
    pub chain: String,
    pub chart_dimension: usize,
    pub step: f64,
    /// Extrapolated `max |dω|` of the chain-level form.
    pub chain_level_dw: f64,
    /// Largest `|ω|` coefficient at the chart center.
    pub scale: f64,
    pub nonclosed_threshold: f64,
    pub nonclosed: bool,
    /// Largest `|⟨σ ∪ τ, ∂[a|b|a]⟩|` over random cocycle pairs.
    pub boundary_pairing: f64,
    /// Largest `|⟨σ ∪ τ, [a|b]⟩|` over the same pairs.
    pub boundary_scale: f64,
    pub boundary_tol: f64,
    pub boundary_pass: bool,
    pub note: String,
}

/// Chain-level 2-form `(σ, τ) ↦ ⟨σ ∪_Φ τ, [a|b]⟩` on `Hom(F_p, G)`,
/// finite-differenced on a 3-dimensional chart at a random point, and the
/// pairing with the genuine cycle `∂[a|b|a]` as a control.
pub fn free_group_demo(
    p: usize,
    group: GroupSpec,
    phi: &InvariantPolynomial,
    trials: usize,
    seed: u64,
    h: f64,
    tol: &Tolerances,
) -> Result<FreeGroupDemoReport> {
    if p < 2 {
        return Err(Error::InvalidInput(
            "the free-group demo needs at least two generators".into(),
        ));
    }
    group.validate()?;
    let degree = phi.validate()?;
    if degree != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: degree,
        });
    }
    let presentation = Presentation::free(p);
    let mut rng = fixtures::rng(seed);
    let images = (0..p)
        .map(|_| fixtures::random_group_element(&mut rng, group, 0.9))
        .collect();
    let rep = Representation::new(presentation.clone(), group, images, tol)?;

    let (a, b) = (Word::generator(0), Word::generator(1));
    let chain = BarChain::new(2).with_term(vec![a.clone(), b.clone()], 1);
    let ctx = EtaContext::with_cycle(rep.clone(), phi.clone(), chain)?;

    let d = rep.algebra().dim();
    let directions = (0..3)
        .map(|_| {
            let v: Vec<_> = (0..p).map(|_| fixtures::random_vector(&mut rng, d)).collect();
            crate::cohomology::TangentVector::from_values(&v)
        })
        .collect();
    let chart = Chart::new(rep.clone(), directions, tol)?;
    let closed = fd_exterior_derivative(&chart, &EtaForm { ctx: ctx.clone() }, h, Stencil::Holomorphic)?;
    let dw = closed.exterior_derivative.max_dw;
    let scale = closed.exterior_derivative.scale;

    let boundary = BarChain::new(3)
        .with_term(vec![a.clone(), b, a], 1)
        .boundary(relator_normal_form(&presentation));
    let ctx_boundary = EtaContext::with_cycle(rep.clone(), phi.clone(), boundary)?;
    let all: Vec<_> = (0..p * d)
        .map(|i| {
            let mut v = crate::numeric::CVector::zeros(p * d);
            v[i] = 1.0.into();
            crate::cohomology::TangentVector::from_stacked(v, d)
        })
        .collect();
    let (mut pairing, mut boundary_scale) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let s = fixtures::random_combination(&mut rng, &all);
        let t = fixtures::random_combination(&mut rng, &all);
        pairing = pairing.max(ctx_boundary.eta2(&s, &t)?.norm());
        boundary_scale = boundary_scale.max(ctx.eta2(&s, &t)?.norm());
    }
    Ok(FreeGroupDemoReport {
        generators: p,
        group,
        phi: phi.clone(),
        chain: "[a|b]".into(),
        chart_dimension: 3,
        step: h,
        chain_level_dw: dw,
        scale,
        nonclosed_threshold: NONCLOSED_THRESHOLD,
        nonclosed: dw > NONCLOSED_THRESHOLD * scale,
        boundary_pairing: pairing,
        boundary_scale,
        boundary_tol: BOUNDARY_TOL,
        boundary_pass: pairing <= BOUNDARY_TOL * boundary_scale,
        note: NOTE.into(),
    })
}
