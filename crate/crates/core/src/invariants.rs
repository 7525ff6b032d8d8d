//! Invariant polynomials on a matrix Lie algebra and their polarizations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::matgroup::LieAlgebraBasis;
use crate::numeric::{self, c, CMatrix, CVector};

/// A homogeneous polynomial on the Lie algebra, in basis coordinates.
///
/// Invariance under the adjoint action is not assumed; [`check_invariance`]
/// measures it.
pub trait HomogeneousPolynomial {
    fn degree(&self) -> usize;
    fn evaluate(&self, algebra: &LieAlgebraBasis, x: &CVector) -> Complex64;
}

/// Built-in adjoint-invariant polynomials.
///
/// JSON: `{"kind": "power_trace", "n": 2}`, `{"kind": "trace_form"}`,
/// `{"kind": "killing"}` or
/// `{"kind": "combo", "terms": [{"coeff": [re, im], "kind": ...}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantPolynomial {
    /// `tr(X²)`.
    TraceForm,
    /// `tr(Xⁿ)`.
    PowerTrace { n: usize },
    /// `tr(ad_X ∘ ad_X)`, from the structure constants of the basis.
    Killing,
    #[serde(rename = "combo")]
    Combination { terms: Vec<ComboTerm> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComboTerm {
    pub coeff: Complex64,
    #[serde(flatten)]
    pub poly: InvariantPolynomial,
}

impl InvariantPolynomial {
    pub fn from_json(text: &str) -> Result<Self> {
        let p: InvariantPolynomial = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    /// Checks that the polynomial is homogeneous of positive degree.
    pub fn validate(&self) -> Result<usize> {
        match self {
            InvariantPolynomial::TraceForm | InvariantPolynomial::Killing => Ok(2),
            InvariantPolynomial::PowerTrace { n } if *n >= 1 => Ok(*n),
            InvariantPolynomial::PowerTrace { .. } => Err(Error::InvalidInput("power_trace needs n >= 1".into())),
            InvariantPolynomial::Combination { terms } => {
                let first = terms
                    .first()
                    .ok_or_else(|| Error::InvalidInput("empty combination".into()))?
                    .poly
                    .validate()?;
                for t in &terms[1..] {
                    let found = t.poly.validate()?;
                    if found != first {
                        return Err(Error::DegreeMismatch { expected: first, found });
                    }
                }
                Ok(first)
            }
        }
    }
}

impl HomogeneousPolynomial for InvariantPolynomial {
    fn degree(&self) -> usize {
        match self {
            InvariantPolynomial::TraceForm | InvariantPolynomial::Killing => 2,
            InvariantPolynomial::PowerTrace { n } => *n,
            InvariantPolynomial::Combination { terms } => terms.first().map_or(0, |t| t.poly.degree()),
        }
    }

    fn evaluate(&self, algebra: &LieAlgebraBasis, x: &CVector) -> Complex64 {
        match self {
            InvariantPolynomial::TraceForm => {
                let m = algebra.to_matrix(x);
                (&m * &m).trace()
            }
            InvariantPolynomial::PowerTrace { n } => {
                let m = algebra.to_matrix(x);
                let mut p = m.clone();
                for _ in 1..*n {
                    p = &p * &m;
                }
                p.trace()
            }
            InvariantPolynomial::Killing => {
                let ad = algebra.ad(x);
                (&ad * &ad).trace()
            }
            InvariantPolynomial::Combination { terms } => {
                terms.iter().map(|t| t.coeff * t.poly.evaluate(algebra, x)).sum()
            }
        }
    }
}

/// The symmetric multilinear form `Φ̃` with `Φ̃(X, ..., X) = Φ(X)`, by the
/// inclusion–exclusion formula
/// `Φ̃(X_1..X_n) = (1/n!) Σ_{∅≠S⊆[n]} (−1)^{n−|S|} Φ(Σ_{i∈S} X_i)`.
pub struct Polarization<'a, P: ?Sized> {
    poly: &'a P,
    algebra: &'a LieAlgebraBasis,
    inv_factorial: f64,
}

pub fn polarize<'a, P: HomogeneousPolynomial + ?Sized>(
    poly: &'a P,
    algebra: &'a LieAlgebraBasis,
) -> Polarization<'a, P> {
    let n = poly.degree();
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    Polarization {
        poly,
        algebra,
        inv_factorial: 1.0 / factorial,
    }
}

impl<P: HomogeneousPolynomial + ?Sized> Polarization<'_, P> {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn eval(&self, args: &[CVector]) -> Result<Complex64> {
        let n = self.poly.degree();
        if args.len() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: args.len(),
            });
        }
        if n == 1 {
            return Ok(self.poly.evaluate(self.algebra, &args[0]));
        }
        let d = self.algebra.dim();
        let mut total = c(0.0, 0.0);
        for mask in 1u32..(1 << n) {
            let mut sum = CVector::zeros(d);
            for (i, a) in args.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum += a;
                }
            }
            let sign = if (n as u32 - mask.count_ones()).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            total += self.poly.evaluate(self.algebra, &sum) * sign;
        }
        Ok(total * self.inv_factorial)
    }
}

/// Largest `|Φ(Ad_g X) − Φ(X)|` over random unit `X` and `g = exp(Y)` with
/// `‖Y‖ ≤ 1`.
pub fn check_invariance<P: HomogeneousPolynomial + ?Sized>(
    poly: &P,
    algebra: &LieAlgebraBasis,
    samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = fixtures::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut x = fixtures::random_vector(&mut rng, algebra.dim());
        x /= c(x.norm(), 0.0);
        let scale = rand::Rng::gen_range(&mut rng, 0.1..1.0);
        let y = fixtures::random_algebra_element(&mut rng, algebra, scale);
        let g = numeric::matrix_exp(&y);
        let gi = numeric::matrix_exp(&(-&y));
        let conj = algebra.coordinates(&(&g * algebra.to_matrix(&x) * &gi));
        worst = worst.max((poly.evaluate(algebra, &conj) - poly.evaluate(algebra, &x)).norm());
    }
    worst
}

/// `Ad_g` applied to coordinates.
pub fn adjoint_coordinates(algebra: &LieAlgebraBasis, g: &CMatrix, g_inv: &CMatrix, x: &CVector) -> CVector {
    algebra.coordinates(&(g * algebra.to_matrix(x) * g_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::GroupSpec;
    use rand::seq::SliceRandom;

    fn sl2() -> LieAlgebraBasis {
        LieAlgebraBasis::new(GroupSpec::sl(2))
    }

    // (E, F, H) coordinates
    fn efh(e: f64, f: f64, h: f64) -> CVector {
        CVector::from_vec(vec![c(e, 0.0), c(f, 0.0), c(h, 0.0)])
    }

    /// Not invariant: `X ↦ (X_11)²`.
    struct EntrySquared;

    impl HomogeneousPolynomial for EntrySquared {
        fn degree(&self) -> usize {
            2
        }
        fn evaluate(&self, algebra: &LieAlgebraBasis, x: &CVector) -> Complex64 {
            let m = algebra.to_matrix(x);
            m[(0, 0)] * m[(0, 0)]
        }
    }

    #[test]
    fn trace_form_values() {
        let a = sl2();
        let tf = InvariantPolynomial::TraceForm;
        assert!((tf.evaluate(&a, &efh(0.0, 0.0, 1.0)) - c(2.0, 0.0)).norm() < 1e-15);
        let pol = polarize(&tf, &a);
        assert!((pol.eval(&[efh(0.0, 0.0, 1.0), efh(0.0, 0.0, 1.0)]).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((pol.eval(&[efh(1.0, 0.0, 0.0), efh(0.0, 1.0, 0.0)]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            pol.eval(&[efh(1.0, 0.0, 0.0)]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn killing_is_four_times_trace_on_sl2() {
        let a = sl2();
        let mut rng = fixtures::rng(1);
        for _ in 0..20 {
            let x = fixtures::random_vector(&mut rng, 3);
            let k = InvariantPolynomial::Killing.evaluate(&a, &x);
            let t = InvariantPolynomial::TraceForm.evaluate(&a, &x);
            assert!((k - t * 4.0).norm() < 1e-13 * t.norm().max(1.0));
        }
    }

    #[test]
    fn cubic_power_trace_vanishes_on_sl2() {
        let a = sl2();
        let mut rng = fixtures::rng(2);
        for _ in 0..20 {
            let x = fixtures::random_vector(&mut rng, 3);
            assert!(InvariantPolynomial::PowerTrace { n: 3 }.evaluate(&a, &x).norm() < 1e-14);
        }
    }

    #[test]
    fn polarization_identities() {
        let mut rng = fixtures::rng(3);
        let a3 = LieAlgebraBasis::new(GroupSpec::sl(3));
        for poly in [
            InvariantPolynomial::PowerTrace { n: 3 },
            InvariantPolynomial::PowerTrace { n: 4 },
            InvariantPolynomial::Killing,
        ] {
            let pol = polarize(&poly, &a3);
            let n = poly.degree();
            let x = fixtures::random_vector(&mut rng, 8);
            let diag: Vec<CVector> = vec![x.clone(); n];
            let value = poly.evaluate(&a3, &x);
            assert!((pol.eval(&diag).unwrap() - value).norm() <= 1e-10 * value.norm().max(1.0));

            let args: Vec<CVector> = (0..n).map(|_| fixtures::random_vector(&mut rng, 8)).collect();
            let base = pol.eval(&args).unwrap();
            let mut perm = args.clone();
            perm.shuffle(&mut rng);
            assert!((pol.eval(&perm).unwrap() - base).norm() <= 1e-10 * base.norm().max(1.0));

            // linear in the first slot
            let y = fixtures::random_vector(&mut rng, 8);
            let alpha = fixtures::random_complex(&mut rng);
            let mut mixed = args.clone();
            mixed[0] = &args[0] * alpha + &y;
            let mut with_y = args.clone();
            with_y[0] = y;
            let expected = base * alpha + pol.eval(&with_y).unwrap();
            assert!((pol.eval(&mixed).unwrap() - expected).norm() <= 1e-10 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn invariance_checks() {
        let a2 = sl2();
        assert!(check_invariance(&InvariantPolynomial::TraceForm, &a2, 100, 1) <= 1e-10);
        assert!(check_invariance(&EntrySquared, &a2, 100, 1) > 1e-2);
        let a3 = LieAlgebraBasis::new(GroupSpec::sl(3));
        assert!(check_invariance(&InvariantPolynomial::Killing, &a3, 100, 2) <= 1e-9);
        let gl = LieAlgebraBasis::new(GroupSpec::gl(3));
        assert!(check_invariance(&InvariantPolynomial::PowerTrace { n: 3 }, &gl, 50, 4) <= 1e-9);
    }

    #[test]
    fn polarized_trace_form_is_invariant() {
        let a = sl2();
        let pol = polarize(&InvariantPolynomial::TraceForm, &a);
        let mut rng = fixtures::rng(6);
        for _ in 0..20 {
            let g = fixtures::random_group_element(&mut rng, GroupSpec::sl(2), 1.0);
            let gi = g.clone().try_inverse().unwrap();
            let (x, y) = (
                fixtures::random_vector(&mut rng, 3),
                fixtures::random_vector(&mut rng, 3),
            );
            let before = pol.eval(&[x.clone(), y.clone()]).unwrap();
            let after = pol
                .eval(&[
                    adjoint_coordinates(&a, &g, &gi, &x),
                    adjoint_coordinates(&a, &g, &gi, &y),
                ])
                .unwrap();
            assert!((before - after).norm() <= 1e-9 * before.norm().max(1.0));
        }
    }

    #[test]
    fn json_forms() {
        let p = InvariantPolynomial::from_json(r#"{"kind":"power_trace","n":2}"#).unwrap();
        assert_eq!(p, InvariantPolynomial::PowerTrace { n: 2 });
        let combo = InvariantPolynomial::from_json(
            r#"{"kind":"combo","terms":[{"coeff":[2.0,0.0],"kind":"trace_form"},{"coeff":[0.0,1.0],"kind":"killing"}]}"#,
        )
        .unwrap();
        let a = sl2();
        let x = efh(0.3, -0.2, 1.1);
        let expected = InvariantPolynomial::TraceForm.evaluate(&a, &x) * 2.0
            + InvariantPolynomial::Killing.evaluate(&a, &x) * c(0.0, 1.0);
        assert!((combo.evaluate(&a, &x) - expected).norm() < 1e-14);
        let text = serde_json::to_string(&combo).unwrap();
        assert_eq!(serde_json::from_str::<InvariantPolynomial>(&text).unwrap(), combo);
        assert!(matches!(
            InvariantPolynomial::from_json(
                r#"{"kind":"combo","terms":[{"coeff":[1,0],"kind":"trace_form"},{"coeff":[1,0],"kind":"power_trace","n":3}]}"#
            ),
            Err(Error::DegreeMismatch { expected: 2, found: 3 })
        ));
    }
}
