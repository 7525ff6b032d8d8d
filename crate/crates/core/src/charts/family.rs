//! Polynomial families `S → Hom(Γ, G)` and the pullback of `η_Φ` to the
//! parameter space.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use itertools::Itertools;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fd::{alternate, exterior_derivative, Coefficients, ExteriorDerivativeReport, Stencil};
use super::polynomial::{PolyMatrix, Polynomial};
use crate::cohomology::{BarChain, TangentVector};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::forms::EtaContext;
use crate::invariants::InvariantPolynomial;
use crate::matgroup::{GroupSpec, Representation};
use crate::numeric::{self, c, CMatrix, CVector, Tolerances};
use crate::words::Presentation;

/// Bound on relator residuals at sample points of a family.
pub const FAMILY_RESIDUAL_TOL: f64 = 1e-9;
/// Number of random sample points checked when a family is built.
pub const FAMILY_SAMPLES: usize = 20;
/// Relative bound on the cocycle residual of a tangent vector.
pub const TANGENT_TOL: f64 = 1e-8;
/// Relative bound on `|dω|` for the closedness check of a pullback.
pub const CLOSEDNESS_TOL: f64 = 1e-5;
/// Relative bound for the base-change identity.
pub const BASE_CHANGE_TOL: f64 = 1e-8;
const VALIDATION_SEED: u64 = 0x5eed;

/// A polynomial map `s ↦ ρ_s` from a polydisc in `ℂ^m` to `Hom(Γ, G)`.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    params: Vec<String>,
    domain_radius: Vec<f64>,
    images: Vec<PolyMatrix>,
    presentation: Arc<Presentation>,
    group: GroupSpec,
}

/// Wire format:
/// `{"params": ["s1", ...], "domain_radius": [0.2, ...], "images": {"a": [[poly, ...], ...]},
///   "group": {"kind": "GL", "n": 2}, "presentation": {...}}`
/// with `poly = [{"coeff": [re, im], "powers": [i1, ...]}, ...]`. The group
/// defaults to `GL(n)`; the presentation may be supplied separately.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilySpecJson {
    pub params: Vec<String>,
    pub domain_radius: Vec<f64>,
    pub images: BTreeMap<String, PolyMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Presentation>,
}

impl FamilySpec {
    /// Validated family: shapes, parameter counts, and relator residuals at
    /// most [`FAMILY_RESIDUAL_TOL`] at [`FAMILY_SAMPLES`] random points of
    /// the polydisc.
    pub fn new(
        params: Vec<String>,
        domain_radius: Vec<f64>,
        presentation: impl Into<Arc<Presentation>>,
        group: GroupSpec,
        images: Vec<PolyMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        group.validate()?;
        let presentation = presentation.into();
        let m = params.len();
        if m == 0 {
            return Err(Error::InvalidFamily("a family needs at least one parameter".into()));
        }
        if domain_radius.len() != m || domain_radius.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidFamily(format!("need {m} positive domain radii")));
        }
        if images.len() != presentation.generator_count() {
            return Err(Error::InvalidFamily(format!(
                "{} generator images for {} generators",
                images.len(),
                presentation.generator_count()
            )));
        }
        for img in &images {
            if img.n() != group.n {
                return Err(Error::InvalidFamily(format!(
                    "{}x{} image in {}x{} group",
                    img.n(),
                    img.n(),
                    group.n,
                    group.n
                )));
            }
            for p in img.entries() {
                p.check_vars(m)?;
            }
        }
        let family = FamilySpec {
            params,
            domain_radius,
            images,
            presentation,
            group,
        };
        let mut rng = fixtures::rng(VALIDATION_SEED);
        for _ in 0..FAMILY_SAMPLES {
            let s = family.random_point(&mut rng);
            family
                .at(&s, tol)
                .map_err(|e| Error::InvalidFamily(format!("at s = {s:?}: {e}")))?;
        }
        Ok(family)
    }

    pub fn from_json(json: FamilySpecJson, presentation: Option<Presentation>, tol: &Tolerances) -> Result<Self> {
        let presentation = presentation
            .or(json.presentation)
            .ok_or_else(|| Error::InvalidFamily("family has no presentation".into()))?;
        let n = json
            .images
            .values()
            .next()
            .map(|m| m.n())
            .ok_or_else(|| Error::InvalidFamily("family has no images".into()))?;
        let group = json.group.unwrap_or(GroupSpec::gl(n));
        if let Some(extra) = json.images.keys().find(|k| presentation.generator_index(k).is_none()) {
            return Err(Error::InvalidFamily(format!("image for unknown generator `{extra}`")));
        }
        let images = presentation
            .generator_names()
            .iter()
            .map(|g| {
                json.images
                    .get(g)
                    .cloned()
                    .ok_or_else(|| Error::InvalidFamily(format!("no image for `{g}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        FamilySpec::new(json.params, json.domain_radius, presentation, group, images, tol)
    }

    pub fn to_json(&self) -> FamilySpecJson {
        FamilySpecJson {
            params: self.params.clone(),
            domain_radius: self.domain_radius.clone(),
            images: self
                .presentation
                .generator_names()
                .iter()
                .cloned()
                .zip(self.images.iter().cloned())
                .collect(),
            group: Some(self.group),
            presentation: Some((*self.presentation).clone()),
        }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    pub fn domain_radius(&self) -> &[f64] {
        &self.domain_radius
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn images(&self) -> &[PolyMatrix] {
        &self.images
    }

    fn check_point(&self, s: &[Complex64]) -> Result<()> {
        if s.len() != self.parameter_count() {
            return Err(Error::Shape(format!(
                "{} parameters for a family in {}",
                s.len(),
                self.parameter_count()
            )));
        }
        Ok(())
    }

    /// Uniform point of the polydisc.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Vec<Complex64> {
        self.domain_radius
            .iter()
            .map(|r| Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect()
    }

    pub fn images_at(&self, s: &[Complex64]) -> Result<Vec<CMatrix>> {
        self.check_point(s)?;
        Ok(self.images.iter().map(|m| m.eval(s)).collect())
    }

    /// `ρ_s`, with relator residual at most [`FAMILY_RESIDUAL_TOL`].
    pub fn at(&self, s: &[Complex64], tol: &Tolerances) -> Result<Representation> {
        let images = self.images_at(s)?;
        Representation::with_residual_bound(self.presentation.clone(), self.group, images, FAMILY_RESIDUAL_TOL, tol)
    }

    /// The family `u ↦ ρ_{φ(u)}` for a polynomial map `φ: ℂ^{m'} → ℂ^m`.
    pub fn reparametrize(
        &self,
        params: Vec<String>,
        domain_radius: Vec<f64>,
        subs: &[Polynomial],
        tol: &Tolerances,
    ) -> Result<FamilySpec> {
        if subs.len() != self.parameter_count() {
            return Err(Error::InvalidFamily(format!(
                "{} substitutions for {} parameters",
                subs.len(),
                self.parameter_count()
            )));
        }
        let vars = params.len();
        for q in subs {
            q.check_vars(vars)?;
        }
        let images = self.images.iter().map(|m| m.compose(subs, vars)).collect();
        FamilySpec::new(
            params,
            domain_radius,
            self.presentation.clone(),
            self.group,
            images,
            tol,
        )
    }
}

/// `σ_k(x_j) = (∂ρ_s(x_j)/∂s_k) ρ_s(x_j)⁻¹` in Lie algebra coordinates,
/// with exact polynomial derivatives.
pub fn family_tangent(family: &FamilySpec, s: &[Complex64], k: usize, tol: &Tolerances) -> Result<TangentVector> {
    let rep = family.at(s, tol)?;
    family_tangent_at(family, &rep, s, k, tol)
}

fn family_tangent_at(
    family: &FamilySpec,
    rep: &Representation,
    s: &[Complex64],
    k: usize,
    tol: &Tolerances,
) -> Result<TangentVector> {
    if k >= family.parameter_count() {
        return Err(Error::IndexOutOfRange {
            index: k,
            count: family.parameter_count(),
        });
    }
    let algebra = rep.algebra();
    let mut values: Vec<CVector> = Vec::with_capacity(rep.generator_count());
    let mut leak = 0.0f64;
    for (img, m) in family.images.iter().zip(rep.images()) {
        let x = img.derivative(k).eval(s) * numeric::matrix_inverse(m, tol)?;
        leak = leak.max(algebra.projection_residual(&x) / x.norm().max(1.0));
        values.push(algebra.coordinates(&x));
    }
    let sigma = TangentVector::from_values(&values);
    let residual = sigma.cocycle_residual(rep).max(leak);
    if residual > TANGENT_TOL * sigma.norm().max(1.0) {
        return Err(Error::NotTangent { residual });
    }
    Ok(sigma)
}

fn context_for(
    family: &FamilySpec,
    phi: &InvariantPolynomial,
    cycle: Option<&BarChain>,
    tol: &Tolerances,
) -> Result<EtaContext> {
    let base = family.at(&vec![c(0.0, 0.0); family.parameter_count()], tol)?;
    match cycle {
        Some(z) => EtaContext::with_cycle(base, phi.clone(), z.clone()),
        None => EtaContext::new(base, phi.clone()),
    }
}

/// Raw pulled-back coefficient `η(σ_{i_1}, ..., σ_{i_n})` at every index
/// tuple (not only increasing ones), keyed by the tuple.
fn raw_coefficients(
    family: &FamilySpec,
    ctx: &EtaContext,
    s: &[Complex64],
    tol: &Tolerances,
) -> Result<BTreeMap<Vec<usize>, Complex64>> {
    let rep = family.at(s, tol)?;
    let m = family.parameter_count();
    let tangents = (0..m)
        .map(|k| family_tangent_at(family, &rep, s, k, tol))
        .collect::<Result<Vec<_>>>()?;
    let local = ctx.at(rep);
    let mut out = BTreeMap::new();
    for idx in (0..ctx.degree()).map(|_| 0..m).multi_cartesian_product() {
        let slots: Vec<TangentVector> = idx.iter().map(|&i| tangents[i].clone()).collect();
        out.insert(idx, local.eta(&slots)?);
    }
    Ok(out)
}

/// Alternating coefficients on increasing tuples, and the alternation defect.
fn alternating(raw: &BTreeMap<Vec<usize>, Complex64>, m: usize, n: usize) -> Result<(Coefficients, f64)> {
    let mut out = Coefficients::new();
    let mut defect = 0.0f64;
    for subset in (0..m).combinations(n) {
        let (value, dev) = alternate(&subset, |idx| Ok(raw[idx]))?;
        defect = defect.max(dev);
        out.insert(subset, value);
    }
    Ok((out, defect))
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySample {
    pub s: Vec<Complex64>,
    pub coefficients: Vec<(Vec<usize>, Complex64)>,
}

/// `{"max_dw": x, "scale": s, "tolerance": τ, "pass": bool, ...}`; passes iff
/// `max_dw ≤ tolerance · scale`.
#[derive(Clone, Debug, Serialize)]
pub struct PullbackClosedness {
    pub max_dw: f64,
    pub max_dw_step: f64,
    pub max_dw_half_step: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub max_cauchy_riemann: f64,
    pub step: f64,
    pub stencil: Stencil,
}

/// Coefficients of `ρ*η_Φ` on a grid of base points and the closedness
/// check at each.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyPullback {
    pub params: Vec<String>,
    pub degree: usize,
    pub samples: Vec<FamilySample>,
    /// Largest `|ω_{π(S)} − sign(π) ω_S|` over the grid.
    pub antisymmetry: f64,
    pub closedness: PullbackClosedness,
    pub points: Vec<ExteriorDerivativeReport>,
}

impl FamilyPullback {
    /// One row per grid point: parameter real/imaginary parts, then the
    /// increasing-index coefficients.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = self
            .params
            .iter()
            .flat_map(|p| [format!("{p}_re"), format!("{p}_im")])
            .collect();
        if let Some(first) = self.samples.first() {
            for (idx, _) in &first.coefficients {
                let name = idx.iter().map(|i| self.params[*i].as_str()).join("_");
                header.push(format!("w_{name}_re"));
                header.push(format!("w_{name}_im"));
            }
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for sample in &self.samples {
            let fields: Vec<String> = sample
                .s
                .iter()
                .chain(sample.coefficients.iter().map(|(_, v)| v))
                .flat_map(|z| [format!("{:e}", z.re), format!("{:e}", z.im)])
                .collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }
}

/// Real grid of `grid` points per parameter on `[−r_k/2, r_k/2]` (the
/// origin when `grid = 1`).
fn grid_points(family: &FamilySpec, grid: usize) -> Vec<Vec<Complex64>> {
    let axes: Vec<Vec<Complex64>> = family
        .domain_radius
        .iter()
        .map(|r| {
            if grid <= 1 {
                vec![c(0.0, 0.0)]
            } else {
                (0..grid)
                    .map(|i| c(-r / 2.0 + r * i as f64 / (grid - 1) as f64, 0.0))
                    .collect()
            }
        })
        .collect();
    axes.into_iter().multi_cartesian_product().collect()
}

/// Pulls `η_Φ` back along the family, samples the coefficients on a grid,
/// and checks `dω = 0` at each grid point by finite differences with step
/// `h` (the tangents themselves are exact).
pub fn family_pullback(
    family: &FamilySpec,
    phi: &InvariantPolynomial,
    cycle: Option<&BarChain>,
    grid: usize,
    h: f64,
    stencil: Stencil,
    tol: &Tolerances,
) -> Result<FamilyPullback> {
    let ctx = context_for(family, phi, cycle, tol)?;
    let (m, n) = (family.parameter_count(), ctx.degree());
    if n > m {
        return Err(Error::InvalidInput(format!("{n}-form on a {m}-parameter family")));
    }
    if grid == 0 {
        return Err(Error::InvalidInput(
            "grid must have at least one point per parameter".into(),
        ));
    }
    let min_radius = family.domain_radius.iter().copied().fold(f64::INFINITY, f64::min);
    if !(h > 0.0 && h <= min_radius / 4.0) {
        return Err(Error::InvalidInput(format!(
            "step {h} must lie in (0, {}]",
            min_radius / 4.0
        )));
    }
    let mut antisymmetry = 0.0f64;
    let mut samples = Vec::new();
    let mut points = Vec::new();
    for base in grid_points(family, grid) {
        let (at_base, defect) = alternating(&raw_coefficients(family, &ctx, &base, tol)?, m, n)?;
        antisymmetry = antisymmetry.max(defect);
        samples.push(FamilySample {
            s: base.clone(),
            coefficients: at_base.into_iter().collect(),
        });
        let report = exterior_derivative(m, n, &base, h, stencil, |s| {
            let (coeffs, defect) = alternating(&raw_coefficients(family, &ctx, s, tol)?, m, n)?;
            antisymmetry = antisymmetry.max(defect);
            Ok(coeffs)
        })?;
        points.push(report);
    }
    let fold = |f: fn(&ExteriorDerivativeReport) -> f64| points.iter().map(f).fold(0.0, f64::max);
    let (max_dw, scale) = (fold(|r| r.max_dw), fold(|r| r.scale));
    let closedness = PullbackClosedness {
        max_dw,
        max_dw_step: fold(|r| r.max_dw_step),
        max_dw_half_step: fold(|r| r.max_dw_half_step),
        scale,
        tolerance: CLOSEDNESS_TOL,
        pass: max_dw <= CLOSEDNESS_TOL * scale,
        max_cauchy_riemann: fold(|r| r.cauchy_riemann.unwrap_or(0.0)),
        step: h,
        stencil,
    };
    Ok(FamilyPullback {
        params: family.params.clone(),
        degree: n,
        samples,
        antisymmetry,
        closedness,
        points,
    })
}

/// Chain-rule comparison for a reparametrization `s = φ(u)`:
/// `(φ*ω)_{a_1..a_n}(u) = Σ_I ω_I(φ(u)) Π_j ∂φ_{i_j}/∂u_{a_j}`.
#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeReport {
    pub max_dev: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn base_change_check(
    family: &FamilySpec,
    phi: &InvariantPolynomial,
    cycle: Option<&BarChain>,
    subs: &[Polynomial],
    new_radius: Vec<f64>,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<BaseChangeReport> {
    let vars = new_radius.len();
    let names = (1..=vars).map(|i| format!("u{i}")).collect();
    let pulled = family.reparametrize(names, new_radius, subs, tol)?;
    let ctx = context_for(family, phi, cycle, tol)?;
    let jacobian: Vec<Vec<Polynomial>> = subs
        .iter()
        .map(|q| (0..vars).map(|a| q.derivative(a)).collect())
        .collect();
    let mut rng = fixtures::rng(seed);
    let (mut max_dev, mut scale) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let u = pulled.random_point(&mut rng);
        let s: Vec<Complex64> = subs.iter().map(|q| q.eval(&u)).collect();
        let dphi: Vec<Vec<Complex64>> = jacobian
            .iter()
            .map(|row| row.iter().map(|p| p.eval(&u)).collect())
            .collect();
        let original = raw_coefficients(family, &ctx, &s, tol)?;
        let direct = raw_coefficients(&pulled, &ctx, &u, tol)?;
        for (a, value) in &direct {
            let chain: Complex64 = original
                .iter()
                .map(|(i, w)| a.iter().zip(i).fold(*w, |acc, (&aj, &ij)| acc * dphi[ij][aj]))
                .sum();
            scale = scale.max(value.norm());
            max_dev = max_dev.max((value - chain).norm());
        }
    }
    Ok(BaseChangeReport {
        max_dev,
        scale,
        tolerance: BASE_CHANGE_TOL,
        pass: max_dev <= BASE_CHANGE_TOL * scale,
        samples,
    })
}
