//! Twisted cohomology `H^•(Γ, Ad ρ)` in low degrees and bar-complex chains.
//!
//! `Z¹` is computed as the kernel of the Fox Jacobian, which identifies it
//! with the Zariski tangent space of `Hom(Γ, G)` at `ρ`.

mod bar;
mod tangent;

pub use bar::{pair, relator_normal_form, verify_cycle, BarChain, BarChainJson, BarTermJson};
pub use tangent::TangentVector;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matgroup::Representation;
use crate::numeric::{self, CMatrix, CVector, RankInfo, Tolerances};
use crate::words::{fox_derivative, Presentation, Word};

/// The Fox Jacobian at `ρ`: block `(r, k)` is `Ad ρ(∂r/∂x_k)`, giving a
/// `(#relators · dim 𝔤) × (p · dim 𝔤)` matrix.
pub fn fox_jacobian(rep: &Representation) -> CMatrix {
    let d = rep.algebra().dim();
    let p = rep.generator_count();
    let rels = rep.presentation().relators();
    let mut jac = CMatrix::zeros(rels.len() * d, p * d);
    for (ri, r) in rels.iter().enumerate() {
        for k in 0..p {
            let fox = fox_derivative(r, k, p).expect("relators are over the generators");
            jac.view_mut((ri * d, k * d), (d, d))
                .copy_from(&rep.evaluate_groupring(&fox));
        }
    }
    jac
}

/// Matrix of `v ↦ coboundary(ρ, v)`, of size `(p · dim 𝔤) × dim 𝔤`.
pub fn coboundary_matrix(rep: &Representation) -> CMatrix {
    let d = rep.algebra().dim();
    let p = rep.generator_count();
    let mut m = CMatrix::zeros(p * d, d);
    for b in 0..d {
        let mut e = CVector::zeros(d);
        e[b] = 1.0.into();
        m.set_column(b, rep.coboundary(&e).stacked());
    }
    m
}

/// Bases of `Z¹`, `B¹` and a complement representing `H¹` at a point.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub rep: Representation,
    pub basis_z1: Vec<TangentVector>,
    pub basis_b1: Vec<TangentVector>,
    /// Orthonormal complement of `B¹` inside `Z¹`.
    pub basis_h1: Vec<TangentVector>,
    /// `dim H⁰`: joint fixed space of the adjoint action.
    pub h0: usize,
    /// `dim H²` as the cokernel of the Fox Jacobian; only for one-relator
    /// presentations.
    pub h2: Option<usize>,
    /// Smallest kept over largest dropped singular value, over all rank decisions.
    pub rank_gap: f64,
    /// Largest singular value of the Fox Jacobian.
    pub jacobian_norm: f64,
}

impl CocycleSpace {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.basis_z1.len(), self.basis_b1.len(), self.basis_h1.len())
    }

    pub fn report(&self) -> CocycleReport {
        let (z, b, h) = self.dims();
        CocycleReport {
            dims: [z, b, h],
            rank_gap: self.rank_gap,
            h0: self.h0,
            h2: self.h2,
        }
    }
}

/// `{"dims": [z, b, h], "rank_gap": ratio, ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct CocycleReport {
    pub dims: [usize; 3],
    pub rank_gap: f64,
    pub h0: usize,
    pub h2: Option<usize>,
}

fn check_stable(info: &RankInfo) -> Result<()> {
    match info.unstable_value() {
        Some(value) => Err(Error::RankInstability {
            value,
            cutoff: info.cutoff,
        }),
        None => Ok(()),
    }
}

fn vectors_from_columns(m: &CMatrix, cols: std::ops::Range<usize>, d: usize) -> Vec<TangentVector> {
    cols.map(|j| TangentVector::from_stacked(m.column(j).into_owned(), d))
        .collect()
}

pub fn cocycle_space(rep: &Representation, tol: &Tolerances) -> Result<CocycleSpace> {
    let d = rep.algebra().dim();
    let total = rep.generator_count() * d;

    let jac = fox_jacobian(rep);
    let jac_svd = numeric::svd(&jac)?;
    let jac_rank = numeric::rank_from_svd(&jac_svd, tol);
    check_stable(&jac_rank)?;
    let basis_z1 = vectors_from_columns(&jac_svd.v, jac_rank.rank..total, d);

    let cob = coboundary_matrix(rep);
    let cob_svd = numeric::svd(&cob)?;
    let cob_rank = numeric::rank_from_svd(&cob_svd, tol);
    check_stable(&cob_rank)?;
    let basis_b1 = vectors_from_columns(&cob_svd.u, 0..cob_rank.rank, d);

    let z = numeric::columns(&basis_z1.iter().map(|v| v.stacked().clone()).collect::<Vec<_>>(), total);
    let b = numeric::columns(&basis_b1.iter().map(|v| v.stacked().clone()).collect::<Vec<_>>(), total);
    let h_count = basis_z1.len().saturating_sub(basis_b1.len());
    let basis_h1 = if h_count == 0 {
        Vec::new()
    } else {
        let projected = &z - &b * (b.adjoint() * &z);
        let proj_svd = numeric::svd(&projected)?;
        vectors_from_columns(&proj_svd.u, 0..h_count, d)
    };

    let h2 = (rep.presentation().relators().len() == 1).then(|| d - jac_rank.rank);
    let rank_gap = [jac_rank.gap(), cob_rank.gap()]
        .into_iter()
        .flatten()
        .fold(1.0 / f64::EPSILON, f64::min);
    Ok(CocycleSpace {
        rep: rep.clone(),
        basis_z1,
        basis_b1,
        basis_h1,
        h0: d - cob_rank.rank,
        h2,
        rank_gap,
        jacobian_norm: jac_svd.singular_values.first().copied().unwrap_or(0.0),
    })
}

/// Explicit 2-cycle representing the fundamental class of a closed
/// orientable surface group.
#[derive(Clone, Debug)]
pub struct FundamentalCycle {
    pub chain: BarChain,
    pub presentation: Arc<Presentation>,
    pub genus: usize,
    /// `+1` for the relator letter order `Π a_i b_i a_i⁻¹ b_i⁻¹`.
    pub orientation_sign: i32,
}

/// For the relator `y_1 ... y_{4g}` with prefixes `w_j = y_1 ... y_j`,
/// `z = Σ_{j=1}^{4g−1} [w_j | y_{j+1}] − Σ_i ([a_i|a_i⁻¹] + [b_i|b_i⁻¹]) − (2g−1)[e|e]`.
pub fn fundamental_two_cycle(presentation: impl Into<Arc<Presentation>>) -> Result<FundamentalCycle> {
    let presentation = presentation.into();
    let genus = presentation.surface_genus().ok_or_else(|| {
        Error::NotSurfacePresentation(
            "expected generators a1,b1,...,ag,bg and the single relator [a1,b1]...[ag,bg]".into(),
        )
    })?;
    let relator = &presentation.relators()[0];
    let letters = relator.letters();
    let mut chain = BarChain::new(2);
    for (j, &letter) in letters.iter().enumerate().skip(1) {
        let next = Word::from_letters([letter]);
        chain.add_term(vec![relator.prefix(j), next], 1);
    }
    for k in 0..presentation.generator_count() {
        chain.add_term(vec![Word::generator(k), Word::generator_inverse(k)], -1);
    }
    chain.add_term(vec![Word::identity(), Word::identity()], -(2 * genus as i64 - 1));
    debug_assert!(verify_cycle(&chain, &presentation));
    Ok(FundamentalCycle {
        chain,
        presentation,
        genus,
        orientation_sign: 1,
    })
}

impl FundamentalCycle {
    pub fn verify(&self) -> bool {
        verify_cycle(&self.chain, &self.presentation)
    }
}

#[cfg(test)]
mod tests;
