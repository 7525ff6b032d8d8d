use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{GroupKind, GroupSpec, LieAlgebraBasis};
use crate::cohomology::TangentVector;
use crate::error::{Error, Result};
use crate::numeric::{self, CMatrix, CVector, Tolerances};
use crate::words::{GroupRingElement, Letter, Presentation, Word};

/// A point `ρ ∈ Hom(Γ, G)`: one invertible matrix per generator.
///
/// Inverses and adjoint matrices of the generator images are cached at
/// construction.
#[derive(Clone, Debug)]
pub struct Representation {
    presentation: Arc<Presentation>,
    algebra: Arc<LieAlgebraBasis>,
    images: Vec<CMatrix>,
    inverses: Vec<CMatrix>,
    ad: Vec<CMatrix>,
    ad_inv: Vec<CMatrix>,
}

const DET_TOL: f64 = 1e-10;

impl Representation {
    /// Validated point: invertible images, `det = 1` for `SL`, and relator
    /// residuals at most `tol.newton_tol`.
    pub fn new(
        presentation: impl Into<Arc<Presentation>>,
        group: GroupSpec,
        images: Vec<CMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        Self::with_residual_bound(presentation, group, images, tol.newton_tol, tol)
    }

    /// As [`Representation::new`] with an explicit relator residual bound.
    pub fn with_residual_bound(
        presentation: impl Into<Arc<Presentation>>,
        group: GroupSpec,
        images: Vec<CMatrix>,
        bound: f64,
        tol: &Tolerances,
    ) -> Result<Self> {
        let rep = Self::candidate(presentation, group, images, tol)?;
        rep.check_residual(bound)?;
        Ok(rep)
    }

    /// A point of `G^p` that need not satisfy the relators (e.g. a seed).
    pub fn candidate(
        presentation: impl Into<Arc<Presentation>>,
        group: GroupSpec,
        images: Vec<CMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        group.validate()?;
        let presentation = presentation.into();
        if images.len() != presentation.generator_count() {
            return Err(Error::InvalidRepresentation(format!(
                "{} images for {} generators",
                images.len(),
                presentation.generator_count()
            )));
        }
        for m in &images {
            if m.shape() != (group.n, group.n) {
                return Err(Error::Shape(format!(
                    "image of shape {:?}, expected {}x{}",
                    m.shape(),
                    group.n,
                    group.n
                )));
            }
            numeric::ensure_finite(m)?;
        }
        if group.kind == GroupKind::SL {
            for (k, m) in images.iter().enumerate() {
                let det = m.determinant();
                if (det - Complex64::new(1.0, 0.0)).norm() > DET_TOL {
                    return Err(Error::InvalidRepresentation(format!(
                        "image of `{}` has determinant {det}",
                        presentation.generator_names()[k]
                    )));
                }
            }
        }
        let inverses = images
            .iter()
            .map(|m| numeric::matrix_inverse(m, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(
            presentation,
            Arc::new(LieAlgebraBasis::new(group)),
            images,
            inverses,
        ))
    }

    fn assemble(
        presentation: Arc<Presentation>,
        algebra: Arc<LieAlgebraBasis>,
        images: Vec<CMatrix>,
        inverses: Vec<CMatrix>,
    ) -> Self {
        let ad: Vec<CMatrix> = images
            .iter()
            .zip(&inverses)
            .map(|(g, gi)| algebra.adjoint_of(g, gi))
            .collect();
        let ad_inv = images
            .iter()
            .zip(&inverses)
            .map(|(g, gi)| algebra.adjoint_of(gi, g))
            .collect();
        Representation {
            presentation,
            algebra,
            images,
            inverses,
            ad,
            ad_inv,
        }
    }

    /// Same presentation and group, new images (validated like [`Representation::new`]).
    pub fn with_images(&self, images: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        Representation::new(self.presentation.clone(), self.group(), images, tol)
    }

    pub(crate) fn candidate_like(&self, images: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let inverses = images
            .iter()
            .map(|m| numeric::matrix_inverse(m, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(
            self.presentation.clone(),
            self.algebra.clone(),
            images,
            inverses,
        ))
    }

    /// The trivial representation.
    pub fn trivial(presentation: impl Into<Arc<Presentation>>, group: GroupSpec) -> Self {
        let presentation = presentation.into();
        let id = CMatrix::identity(group.n, group.n);
        let p = presentation.generator_count();
        Self::assemble(
            presentation,
            Arc::new(LieAlgebraBasis::new(group)),
            vec![id.clone(); p],
            vec![id; p],
        )
    }

    pub fn check_residual(&self, bound: f64) -> Result<()> {
        let residual = self.relator_residual();
        if residual > bound {
            return Err(Error::InvalidRepresentation(format!(
                "relator residual {residual:e} exceeds {bound:e}"
            )));
        }
        Ok(())
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn presentation_arc(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn group(&self) -> GroupSpec {
        self.algebra.group()
    }

    pub fn algebra(&self) -> &LieAlgebraBasis {
        &self.algebra
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    /// Product of images and inverses in letter order; `e ↦ I`.
    pub fn evaluate_word(&self, w: &Word) -> CMatrix {
        let n = self.group().n;
        let mut m = CMatrix::identity(n, n);
        for l in w.letters() {
            m = if l.inverse {
                m * &self.inverses[l.generator]
            } else {
                m * &self.images[l.generator]
            };
        }
        m
    }

    pub(crate) fn letter_adjoint(&self, l: Letter) -> &CMatrix {
        if l.inverse {
            &self.ad_inv[l.generator]
        } else {
            &self.ad[l.generator]
        }
    }

    /// Matrix of `X ↦ ρ(w) X ρ(w)⁻¹` on the Lie algebra.
    pub fn adjoint_operator(&self, w: &Word) -> CMatrix {
        let d = self.algebra.dim();
        let mut m = CMatrix::identity(d, d);
        for &l in w.letters() {
            m *= self.letter_adjoint(l);
        }
        m
    }

    /// `Σ c_w Ad ρ(w)`.
    pub fn evaluate_groupring(&self, xi: &GroupRingElement) -> CMatrix {
        let d = self.algebra.dim();
        let mut m = CMatrix::zeros(d, d);
        for (w, coeff) in xi.terms() {
            let c = coeff.to_f64().unwrap_or_else(|| big_to_f64(coeff));
            m += self.adjoint_operator(w) * Complex64::new(c, 0.0);
        }
        m
    }

    /// The coboundary `γ ↦ v − Ad ρ(γ) v`, stored by its values on generators.
    pub fn coboundary(&self, v: &CVector) -> TangentVector {
        let values: Vec<CVector> = self.ad.iter().map(|ad| v - ad * v).collect();
        TangentVector::from_values(&values)
    }

    /// `x_k ↦ g ρ(x_k) g⁻¹`.
    pub fn conjugate(&self, g: &CMatrix, tol: &Tolerances) -> Result<Representation> {
        if g.shape() != (self.group().n, self.group().n) {
            return Err(Error::Shape(format!("conjugating matrix has shape {:?}", g.shape())));
        }
        let g_inv = numeric::matrix_inverse(g, tol)?;
        if self.group().kind == GroupKind::SL && (g.determinant() - Complex64::new(1.0, 0.0)).norm() > DET_TOL {
            return Err(Error::InvalidInput(
                "conjugating matrix for SL must have determinant 1".into(),
            ));
        }
        let images = self.images.iter().map(|m| g * m * &g_inv).collect();
        let inverses = self.inverses.iter().map(|m| g * m * &g_inv).collect();
        Ok(Self::assemble(
            self.presentation.clone(),
            self.algebra.clone(),
            images,
            inverses,
        ))
    }

    /// Largest `‖ρ(r) − I‖_F` over relators (0 without relators).
    pub fn relator_residual(&self) -> f64 {
        self.relator_residuals().into_iter().fold(0.0, f64::max)
    }

    pub fn relator_residuals(&self) -> Vec<f64> {
        let n = self.group().n;
        self.presentation
            .relators()
            .iter()
            .map(|r| (self.evaluate_word(r) - CMatrix::identity(n, n)).norm())
            .collect()
    }

    /// `ρ ∘ φ` for the endomorphism sending `x_k` to `images[k]`.
    pub fn precompose(&self, images: &[Word], bound: f64, tol: &Tolerances) -> Result<Representation> {
        let mats = images.iter().map(|w| self.evaluate_word(w)).collect();
        Representation::with_residual_bound(self.presentation.clone(), self.group(), mats, bound, tol)
    }

    pub fn to_json(&self) -> RepresentationJson {
        let images = self
            .presentation
            .generator_names()
            .iter()
            .zip(&self.images)
            .map(|(name, m)| (name.clone(), numeric::to_rows(m)))
            .collect();
        RepresentationJson {
            group: self.group(),
            images,
            presentation: Some((*self.presentation).clone()),
        }
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_string().parse().unwrap_or(f64::NAN)
}

/// Wire format: `{"group": {"kind": "SL", "n": 2}, "images": {"a": [[[re, im], ...], ...]}}`,
/// optionally with an embedded `"presentation"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub group: GroupSpec,
    pub images: BTreeMap<String, Vec<Vec<Complex64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Presentation>,
}

impl RepresentationJson {
    /// Matrices in generator order of `presentation`.
    pub fn matrices(&self, presentation: &Presentation) -> Result<Vec<CMatrix>> {
        for name in self.images.keys() {
            if presentation.generator_index(name).is_none() {
                return Err(Error::UnknownGenerator(name.clone()));
            }
        }
        presentation
            .generator_names()
            .iter()
            .map(|name| {
                let rows = self
                    .images
                    .get(name)
                    .ok_or_else(|| Error::InvalidRepresentation(format!("no image for generator `{name}`")))?;
                numeric::from_rows(rows)
            })
            .collect()
    }

    /// Validated representation; `presentation` overrides the embedded one.
    pub fn into_representation(self, presentation: Option<Presentation>, tol: &Tolerances) -> Result<Representation> {
        let presentation = presentation
            .or_else(|| self.presentation.clone())
            .ok_or_else(|| Error::InvalidInput("representation needs a presentation".into()))?;
        let mats = self.matrices(&presentation)?;
        Representation::new(presentation, self.group, mats, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matgroup::find_representation;
    use crate::numeric::c;
    use crate::words::fox_derivative;
    use rand::Rng;

    #[test]
    fn evaluate_words() {
        let rep = fixtures::torus_diagonal();
        let a = rep.images()[0].clone();
        assert_eq!(rep.evaluate_word(&Word::from_signed(&[1, 1])), &a * &a);
        assert_eq!(rep.evaluate_word(&Word::identity()), CMatrix::identity(2, 2));
        assert!(rep.relator_residual() <= 1e-15);
    }

    #[test]
    fn adjoint_of_diagonal() {
        // basis order (E, F, H): Ad diag(λ, 1/λ) = diag(λ², λ⁻², 1)
        let rep = fixtures::torus_diagonal();
        let ad = rep.adjoint_operator(&Word::generator(0));
        let expected = CMatrix::from_diagonal(&CVector::from_vec(vec![c(4.0, 0.0), c(0.25, 0.0), c(1.0, 0.0)]));
        assert!((ad - expected).norm() < 1e-14);
        assert_eq!(rep.adjoint_operator(&Word::identity()), CMatrix::identity(3, 3));
    }

    #[test]
    fn adjoint_is_homomorphism() {
        let rep = fixtures::genus2_irreducible(1);
        let mut rng = fixtures::rng(4);
        let mut random_word = |len: usize| {
            Word::from_signed(
                &(0..len)
                    .map(|_| rng.gen_range(1..=4i64) * if rng.gen_bool(0.5) { 1 } else { -1 })
                    .collect::<Vec<_>>(),
            )
        };
        for _ in 0..20 {
            let (u, v) = (random_word(6), random_word(7));
            let lhs = rep.adjoint_operator(&u.multiply(&v));
            let rhs = rep.adjoint_operator(&u) * rep.adjoint_operator(&v);
            assert!((&lhs - &rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
            // direct conjugation of the word image
            let g = rep.evaluate_word(&u);
            let gi = g.clone().try_inverse().unwrap();
            assert!((rep.algebra().adjoint_of(&g, &gi) - rep.adjoint_operator(&u)).norm() < 1e-9);
        }
    }

    #[test]
    fn groupring_evaluation() {
        let tol = Tolerances::default();
        let triv = Representation::trivial(Presentation::torus(), GroupSpec::sl(2));
        let mut xi = GroupRingElement::one();
        xi.add_term(Word::from_signed(&[1, 2]), BigInt::from(-1));
        assert_eq!(triv.evaluate_groupring(&xi), CMatrix::zeros(3, 3));
        let rep = fixtures::genus2_irreducible(2);
        assert_eq!(
            rep.evaluate_groupring(&GroupRingElement::one()),
            CMatrix::identity(3, 3)
        );
        let r = &rep.presentation().relators()[0];
        for k in 0..4 {
            let fox = fox_derivative(r, k, 4).unwrap();
            let mut explicit = CMatrix::zeros(3, 3);
            for (w, coeff) in fox.terms() {
                let g = rep.evaluate_word(w);
                let gi = numeric::matrix_inverse(&g, &tol).unwrap();
                explicit += rep.algebra().adjoint_of(&g, &gi) * c(coeff.to_f64().unwrap(), 0.0);
            }
            assert!((rep.evaluate_groupring(&fox) - explicit).norm() < 1e-10);
        }
    }

    #[test]
    fn coboundary_of_central_vector_vanishes() {
        let tol = Tolerances::default();
        let base = fixtures::genus2_point(GroupSpec::gl(2), 3).unwrap();
        assert!(base.relator_residual() <= tol.newton_tol);
        // identity matrix in gl(2) coordinates
        let v = base.algebra().coordinates(&CMatrix::identity(2, 2));
        assert!(base.coboundary(&v).norm() < 1e-14);
    }

    #[test]
    fn conjugation_preserves_traces_and_residuals() {
        let tol = Tolerances::default();
        let rep = fixtures::genus2_irreducible(6);
        assert_eq!(
            rep.conjugate(&CMatrix::identity(2, 2), &tol).unwrap().images(),
            rep.images()
        );
        let mut rng = fixtures::rng(1);
        for _ in 0..5 {
            let g = fixtures::random_group_element(&mut rng, GroupSpec::sl(2), 1.0);
            let conj = rep.conjugate(&g, &tol).unwrap();
            assert!(conj.relator_residual() <= 1e-12);
            for code in [&[1, 2][..], &[3, -1, 4, 4], &[-2, -3, 1]] {
                let w = Word::from_signed(code);
                assert!((conj.evaluate_word(&w).trace() - rep.evaluate_word(&w).trace()).norm() < 1e-10);
            }
        }
        let gl = fixtures::genus2_point(GroupSpec::gl(2), 3).unwrap();
        let scalar = CMatrix::identity(2, 2) * c(2.0, 1.0);
        let conj = gl.conjugate(&scalar, &tol).unwrap();
        for (x, y) in conj.images().iter().zip(gl.images()) {
            assert!((x - y).norm() < 1e-14);
        }
        let singular = CMatrix::zeros(2, 2);
        assert!(matches!(
            rep.conjugate(&singular, &tol),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn genus2_from_perturbed_seed() {
        let tol = Tolerances::default();
        let exact = fixtures::genus2_irreducible(9);
        let mut rng = fixtures::rng(10);
        let seed: Vec<CMatrix> = exact
            .images()
            .iter()
            .map(|m| fixtures::random_group_element(&mut rng, GroupSpec::sl(2), 1e-2) * m)
            .collect();
        assert!(Representation::new(Presentation::surface(2), GroupSpec::sl(2), seed.clone(), &tol).is_err());
        let rep = find_representation(Presentation::surface(2), GroupSpec::sl(2), seed, &tol).unwrap();
        assert!(rep.relator_residual() <= 1e-12);
        for m in rep.images() {
            assert!((m.determinant() - c(1.0, 0.0)).norm() <= 1e-10);
        }
    }

    #[test]
    fn validation_errors() {
        let tol = Tolerances::default();
        let p = Presentation::torus();
        let bad_det = vec![CMatrix::identity(2, 2) * c(2.0, 0.0), CMatrix::identity(2, 2)];
        assert!(matches!(
            Representation::candidate(p.clone(), GroupSpec::sl(2), bad_det, &tol),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(Representation::candidate(p.clone(), GroupSpec::sl(2), vec![CMatrix::identity(2, 2)], &tol).is_err());
        assert!(GroupSpec::new(GroupKind::SL, 1).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let tol = Tolerances::default();
        let rep = fixtures::torus_diagonal();
        let text = serde_json::to_string(&rep.to_json()).unwrap();
        assert!(text.contains(r#""group":{"kind":"SL","n":2}"#));
        let back: RepresentationJson = serde_json::from_str(&text).unwrap();
        let back = back.into_representation(None, &tol).unwrap();
        assert_eq!(back.images(), rep.images());
    }
}
