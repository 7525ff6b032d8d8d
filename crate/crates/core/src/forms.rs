//! The characteristic forms `η_Φ`: cup products of 1-cocycles weighted by
//! a polarized invariant polynomial, paired against a bar-complex cycle,
//! together with the structural checks they satisfy.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::cohomology::{self, fundamental_two_cycle, pair, verify_cycle, BarChain, TangentVector};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::invariants::{polarize, HomogeneousPolynomial, InvariantPolynomial};
use crate::matgroup::Representation;
use crate::numeric::{self, c, CMatrix, CVector, RankInfo, Tolerances};
use crate::words::Word;

/// Relative threshold for the basicness and invariance suites.
pub const SUITE_TOL: f64 = 1e-9;
/// Bound on `‖ρ(φ(r)) − I‖` for an endomorphism `φ`.
pub const ENDOMORPHISM_TOL: f64 = 1e-8;

/// Everything needed to evaluate `η_Φ` at one representation.
#[derive(Clone, Debug)]
pub struct EtaContext {
    rep: Representation,
    phi: InvariantPolynomial,
    cycle: BarChain,
    orientation_sign: i32,
    cycle_verified: bool,
}

impl EtaContext {
    /// Degree-2 context on a surface group, paired against the fundamental cycle.
    pub fn new(rep: Representation, phi: InvariantPolynomial) -> Result<Self> {
        let degree = phi.validate()?;
        if degree != 2 {
            return Err(Error::InvalidInput(format!(
                "no built-in {degree}-cycle; supply one with EtaContext::with_cycle"
            )));
        }
        let cycle = fundamental_two_cycle(rep.presentation_arc().clone())?;
        let verified = cycle.verify();
        Ok(EtaContext {
            rep,
            phi,
            cycle: cycle.chain,
            orientation_sign: cycle.orientation_sign,
            cycle_verified: verified,
        })
    }

    /// Context paired against an arbitrary chain. Non-cycles are accepted
    /// (they are useful as negative controls) and flagged.
    pub fn with_cycle(rep: Representation, phi: InvariantPolynomial, cycle: BarChain) -> Result<Self> {
        let degree = phi.validate()?;
        if cycle.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: cycle.degree(),
            });
        }
        let verified = verify_cycle(&cycle, rep.presentation());
        Ok(EtaContext {
            rep,
            phi,
            cycle,
            orientation_sign: 1,
            cycle_verified: verified,
        })
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn phi(&self) -> &InvariantPolynomial {
        &self.phi
    }

    pub fn cycle(&self) -> &BarChain {
        &self.cycle
    }

    pub fn degree(&self) -> usize {
        self.phi.degree()
    }

    pub fn orientation_sign(&self) -> i32 {
        self.orientation_sign
    }

    pub fn cycle_verified(&self) -> bool {
        self.cycle_verified
    }

    /// Same polynomial and cycle at another representation of the same group.
    pub fn at(&self, rep: Representation) -> EtaContext {
        let cycle_verified = verify_cycle(&self.cycle, rep.presentation());
        EtaContext {
            rep,
            cycle_verified,
            ..self.clone()
        }
    }

    fn check_arity(&self, sigmas: &[TangentVector]) -> Result<()> {
        if sigmas.len() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: sigmas.len(),
            });
        }
        let (p, d) = (self.rep.generator_count(), self.rep.algebra().dim());
        for s in sigmas {
            if s.generator_count() != p || s.dim() != d {
                return Err(Error::Shape(format!(
                    "tangent vector for {} generators in dimension {}, expected {p} in {d}",
                    s.generator_count(),
                    s.dim()
                )));
            }
        }
        Ok(())
    }

    /// The cup-product cochain
    /// `(γ_1..γ_n) ↦ Φ̃(σ_1(γ_1), Ad(γ_1)σ_2(γ_2), ..., Ad(γ_1⋯γ_{n−1})σ_n(γ_n))`.
    pub fn cup_cocycle<'a>(&'a self, sigmas: &'a [TangentVector]) -> Result<impl Fn(&[Word]) -> Complex64 + 'a> {
        self.check_arity(sigmas)?;
        let polar = polarize(&self.phi, self.rep.algebra());
        let d = self.rep.algebra().dim();
        Ok(move |words: &[Word]| {
            let mut ad = CMatrix::identity(d, d);
            let mut args = Vec::with_capacity(words.len());
            for (w, s) in words.iter().zip(sigmas) {
                let (value, ad_w) = s.evaluate_with_adjoint(&self.rep, w);
                args.push(&ad * value);
                ad *= ad_w;
            }
            polar.eval(&args).expect("arity checked")
        })
    }

    /// `η_Φ(σ_1, ..., σ_n) = ⟨σ_1 ∪ ... ∪ σ_n, z⟩`, with the orientation sign applied.
    pub fn eta(&self, sigmas: &[TangentVector]) -> Result<Complex64> {
        let cochain = self.cup_cocycle(sigmas)?;
        Ok(pair(cochain, &self.cycle) * self.orientation_sign as f64)
    }

    /// Convenience for degree 2.
    pub fn eta2(&self, s: &TangentVector, t: &TangentVector) -> Result<Complex64> {
        self.eta(&[s.clone(), t.clone()])
    }
}

/// `{"check": name, "max_dev": x, "scale": s, "tolerance": τ, "pass": bool, "trials": n}`;
/// the check passes iff `max_dev ≤ tolerance · scale`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteReport {
    pub check: String,
    pub max_dev: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub trials: usize,
    pub cycle_verified: bool,
}

impl SuiteReport {
    fn new(check: &str, max_dev: f64, scale: f64, trials: usize, cycle_verified: bool) -> Self {
        SuiteReport {
            check: check.into(),
            max_dev,
            scale,
            tolerance: SUITE_TOL,
            pass: max_dev <= SUITE_TOL * scale,
            trials,
            cycle_verified,
        }
    }
}

fn random_cocycle<R: Rng>(rng: &mut R, z1: &[TangentVector], rep: &Representation) -> TangentVector {
    if z1.is_empty() {
        TangentVector::zero(rep.generator_count(), rep.algebra().dim())
    } else {
        fixtures::random_combination(rng, z1)
    }
}

fn random_slots<R: Rng>(rng: &mut R, n: usize, z1: &[TangentVector], rep: &Representation) -> Vec<TangentVector> {
    (0..n).map(|_| random_cocycle(rng, z1, rep)).collect()
}

/// Basicness: `η(δv, σ_2, ..., σ_n)` against `η(σ_1, ..., σ_n)` with
/// random vectors `v` and random cocycles `σ_i`, the coboundary placed in
/// every slot in turn.
pub fn contraction_suite(ctx: &EtaContext, trials: usize, seed: u64, tol: &Tolerances) -> Result<SuiteReport> {
    let rep = ctx.rep();
    let space = cohomology::cocycle_space(rep, tol)?;
    let mut rng = fixtures::rng(seed);
    let (mut max_dev, mut scale) = (0.0f64, 0.0f64);
    let n = ctx.degree();
    for trial in 0..trials {
        let slots = random_slots(&mut rng, n, &space.basis_z1, rep);
        scale = scale.max(ctx.eta(&slots)?.norm());
        let mut v = fixtures::random_vector(&mut rng, rep.algebra().dim());
        v /= c(v.norm(), 0.0);
        let mut contracted = slots;
        contracted[trial % n] = rep.coboundary(&v);
        max_dev = max_dev.max(ctx.eta(&contracted)?.norm());
    }
    Ok(SuiteReport::new("basic", max_dev, scale, trials, ctx.cycle_verified()))
}

/// Gram matrix `G_ij = η(σ_i, σ_j)` of a degree-2 context.
#[derive(Clone, Debug)]
pub struct Gram {
    pub matrix: CMatrix,
    pub rank: RankInfo,
    /// `‖G + Gᵀ‖ / ‖G‖` (0 for the zero matrix).
    pub skewness: f64,
}

/// `{"rank": r, "skewness": s, "singular_values": [...], ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub size: usize,
    pub rank: usize,
    pub rank_cutoff: f64,
    pub tol_rank: f64,
    pub rank_gap: Option<f64>,
    pub skewness: f64,
    pub singular_values: Vec<f64>,
    pub matrix: Vec<Vec<Complex64>>,
}

impl Gram {
    pub fn report(&self, tol: &Tolerances) -> GramReport {
        GramReport {
            size: self.matrix.nrows(),
            rank: self.rank.rank,
            rank_cutoff: self.rank.cutoff,
            tol_rank: tol.rank_rel,
            rank_gap: self.rank.gap(),
            skewness: self.skewness,
            singular_values: self.rank.singular_values.clone(),
            matrix: numeric::to_rows(&self.matrix),
        }
    }
}

pub fn gram_matrix(ctx: &EtaContext, basis: &[TangentVector], tol: &Tolerances) -> Result<Gram> {
    if ctx.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: ctx.degree(),
        });
    }
    let k = basis.len();
    let mut matrix = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            matrix[(i, j)] = ctx.eta2(&basis[i], &basis[j])?;
        }
    }
    let rank = numeric::rank_info(&matrix, tol)?;
    let norm = matrix.norm();
    let skewness = if norm > 0.0 {
        (&matrix + matrix.transpose()).norm() / norm
    } else {
        0.0
    };
    Ok(Gram { matrix, rank, skewness })
}

/// `η` at `ρ` on `(σ, τ)` against `η` at `gρg⁻¹` on `(Ad_g σ, Ad_g τ)`,
/// over random cocycle pairs. `scale` is the largest `|η|` seen.
pub fn conjugation_invariance(
    ctx: &EtaContext,
    g: &CMatrix,
    pairs: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SuiteReport> {
    let rep = ctx.rep();
    let conjugated = ctx.at(rep.conjugate(g, tol)?);
    let g_inv = numeric::matrix_inverse(g, tol)?;
    let ad_g = rep.algebra().adjoint_of(g, &g_inv);
    let space = cohomology::cocycle_space(rep, tol)?;
    let mut rng = fixtures::rng(seed);
    let (mut max_dev, mut scale) = (0.0f64, 0.0f64);
    let n = ctx.degree();
    for _ in 0..pairs {
        let slots = random_slots(&mut rng, n, &space.basis_z1, rep);
        let moved: Vec<TangentVector> = slots.iter().map(|s| s.map_values(&ad_g)).collect();
        let before = ctx.eta(&slots)?;
        let after = conjugated.eta(&moved)?;
        scale = scale.max(before.norm());
        max_dev = max_dev.max((before - after).norm());
    }
    Ok(SuiteReport::new(
        "conjugation",
        max_dev,
        scale,
        pairs,
        ctx.cycle_verified(),
    ))
}

/// `(φ*σ)(x_k) = σ(φ(x_k))`, a cocycle at `ρ∘φ` when `σ` is one at `ρ`.
pub fn pullback_cocycle(rep: &Representation, images: &[Word], sigma: &TangentVector) -> TangentVector {
    let values: Vec<CVector> = images.iter().map(|w| sigma.evaluate(rep, w)).collect();
    TangentVector::from_values(&values)
}

/// Comparison of `η_{ρ∘φ}(φ*σ, φ*τ)` with `η_ρ(σ, τ)`: the least-squares
/// ratio over the trial pairs and the worst deviation from it.
#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub ratio: Complex64,
    /// `max |η_new − ratio · η_old| / scale`.
    pub spread: f64,
    pub scale: f64,
    pub trials: usize,
    pub endomorphism_residual: f64,
    pub endomorphism_tol: f64,
}

/// Pulls `ctx` back along the endomorphism `x_k ↦ images[k]`.
pub fn endomorphism_pullback(
    ctx: &EtaContext,
    images: &[Word],
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<(EtaContext, PullbackReport)> {
    let rep = ctx.rep();
    let pres = rep.presentation();
    if images.len() != pres.generator_count() {
        return Err(Error::InvalidInput(format!(
            "{} generator images for {} generators",
            images.len(),
            pres.generator_count()
        )));
    }
    if let Some(bad) = images
        .iter()
        .find(|w| w.max_generator().is_some_and(|m| m >= pres.generator_count()))
    {
        return Err(Error::InvalidInput(format!(
            "image word {bad} uses an unknown generator"
        )));
    }
    let n = rep.group().n;
    let residual = pres
        .relators()
        .iter()
        .map(|r| (rep.evaluate_word(&r.substitute(images)) - CMatrix::identity(n, n)).norm())
        .fold(0.0, f64::max);
    if residual > ENDOMORPHISM_TOL {
        return Err(Error::NotEndomorphism { residual });
    }
    let pulled = ctx.at(rep.precompose(images, ENDOMORPHISM_TOL, tol)?);
    let space = cohomology::cocycle_space(rep, tol)?;
    let mut rng = fixtures::rng(seed);
    let mut olds = Vec::with_capacity(trials);
    let mut news = Vec::with_capacity(trials);
    for _ in 0..trials {
        let slots = random_slots(&mut rng, ctx.degree(), &space.basis_z1, rep);
        let moved: Vec<TangentVector> = slots.iter().map(|s| pullback_cocycle(rep, images, s)).collect();
        olds.push(ctx.eta(&slots)?);
        news.push(pulled.eta(&moved)?);
    }
    let denom: f64 = olds.iter().map(|o| o.norm_sqr()).sum();
    let ratio = if denom > 0.0 {
        olds.iter().zip(&news).map(|(o, nw)| nw * o.conj()).sum::<Complex64>() / denom
    } else {
        c(0.0, 0.0)
    };
    let scale = olds.iter().chain(&news).map(|z| z.norm()).fold(0.0, f64::max);
    let worst = olds
        .iter()
        .zip(&news)
        .map(|(o, nw)| (nw - ratio * o).norm())
        .fold(0.0, f64::max);
    let spread = if scale > 0.0 { worst / scale } else { 0.0 };
    let report = PullbackReport {
        ratio,
        spread,
        scale,
        trials,
        endomorphism_residual: residual,
        endomorphism_tol: ENDOMORPHISM_TOL,
    };
    Ok((pulled, report))
}
