//! Reproducible sample points of representation varieties.
//!
//! These are used by tests, examples and the CLI demo inputs. All
//! randomness comes from a seeded ChaCha stream.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::matgroup::{find_representation, GroupSpec, LieAlgebraBasis, Representation};
use crate::numeric::{self, c, CMatrix, CVector, Tolerances};
use crate::words::Presentation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vector<R: Rng>(rng: &mut R, len: usize) -> CVector {
    CVector::from_fn(len, |_, _| random_complex(rng))
}

/// Random Lie algebra element with Frobenius norm `scale`.
pub fn random_algebra_element<R: Rng>(rng: &mut R, algebra: &LieAlgebraBasis, scale: f64) -> CMatrix {
    let x = random_vector(rng, algebra.dim());
    let m = algebra.to_matrix(&x);
    let norm = m.norm();
    m * c(scale / norm, 0.0)
}

/// `exp` of a random Lie algebra element of norm `scale`.
pub fn random_group_element<R: Rng>(rng: &mut R, group: GroupSpec, scale: f64) -> CMatrix {
    let algebra = LieAlgebraBasis::new(group);
    numeric::matrix_exp(&random_algebra_element(rng, &algebra, scale))
}

pub fn diag2(a: Complex64, b: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, c(0.0, 0.0), c(0.0, 0.0), b])
}

/// Torus group at `(diag(2, 1/2), diag(3, 1/3))` in `SL(2)`.
pub fn torus_diagonal() -> Representation {
    let images = vec![diag2(c(2.0, 0.0), c(0.5, 0.0)), diag2(c(3.0, 0.0), c(1.0 / 3.0, 0.0))];
    Representation::new(Presentation::torus(), GroupSpec::sl(2), images, &Tolerances::default())
        .expect("commuting diagonals")
}

/// Free group of rank `p` at random `SL(2)` images (irreducible for generic seeds).
pub fn free_random(p: usize, seed: u64) -> Representation {
    let mut rng = rng(seed);
    let g = GroupSpec::sl(2);
    let images = (0..p).map(|_| random_group_element(&mut rng, g, 0.9)).collect();
    Representation::new(Presentation::free(p), g, images, &Tolerances::default()).expect("free group")
}

/// Closed-form genus-2 point in `G`: random `a1, b1`, then
/// `a2 = g b1 g⁻¹`, `b2 = g a1 g⁻¹` with `g` commuting with `C = [a1, b1]`,
/// so that `[a2, b2] = C⁻¹`. The result is polished by Gauss–Newton.
pub fn genus2_point(group: GroupSpec, seed: u64) -> Result<Representation> {
    let tol = Tolerances::default();
    let mut rng = rng(seed);
    let n = group.n;
    let a1 = random_group_element(&mut rng, group, 0.8);
    let b1 = random_group_element(&mut rng, group, 0.8);
    let (a1i, b1i) = (numeric::matrix_inverse(&a1, &tol)?, numeric::matrix_inverse(&b1, &tol)?);
    let comm = &a1 * &b1 * &a1i * &b1i;
    let beta = random_complex(&mut rng) * 0.5;
    let mut g = CMatrix::identity(n, n) + &comm * beta;
    if group.kind == crate::matgroup::GroupKind::SL {
        let root = g.determinant().powf(1.0 / n as f64);
        g /= root;
    }
    let gi = numeric::matrix_inverse(&g, &tol)?;
    let a2 = &g * &b1 * &gi;
    let b2 = &g * &a1 * &gi;
    find_representation(Presentation::surface(2), group, vec![a1, b1, a2, b2], &tol)
}

/// Irreducible genus-2 point in `SL(2)`.
pub fn genus2_irreducible(seed: u64) -> Representation {
    genus2_point(GroupSpec::sl(2), seed).expect("genus-2 construction")
}

/// Point of the genus-`g` surface group in `SL(2)`: closed form for
/// `g ≤ 2`, Gauss–Newton from a random seed otherwise.
pub fn surface_point(genus: usize, seed: u64) -> Result<Representation> {
    match genus {
        1 => Ok(torus_diagonal()),
        2 => genus2_point(GroupSpec::sl(2), seed),
        _ => {
            let mut rng = rng(seed);
            let g = GroupSpec::sl(2);
            let images = (0..2 * genus).map(|_| random_group_element(&mut rng, g, 0.6)).collect();
            find_representation(
                Arc::new(Presentation::surface(genus)),
                g,
                images,
                &Tolerances::default(),
            )
        }
    }
}

/// Random unit-norm combination of the given tangent vectors.
pub fn random_combination<R: Rng>(
    rng: &mut R,
    basis: &[crate::cohomology::TangentVector],
) -> crate::cohomology::TangentVector {
    let coeffs: Vec<Complex64> = (0..basis.len()).map(|_| random_complex(rng)).collect();
    let v = crate::cohomology::TangentVector::combination(basis, &coeffs);
    let norm = v.norm();
    if norm > 0.0 {
        &v * c(1.0 / norm, 0.0)
    } else {
        v
    }
}

/// Exact three-parameter polynomial family of genus-2 representations in
/// `GL(2)` through [`genus2_point`], built from alternating twists of the
/// first handle: `b' = b1 (I + s1 a1)`, `a' = a1 (I + s2 b')`,
/// `b'' = b' (I + s3 a')`, with `a2, b2` fixed.
///
/// Right-multiplying `b` by a polynomial in `a` (or `a` by one in `b`)
/// preserves `[a, b]`, so every point is an exact solution.
pub fn genus2_family(seed: u64) -> Result<crate::charts::FamilySpec> {
    use crate::charts::{FamilySpec, PolyMatrix, Polynomial};
    let tol = Tolerances::default();
    let group = GroupSpec::gl(2);
    let rep = genus2_point(group, seed)?;
    let m = 3;
    let [a1, b1, a2, b2] = [0, 1, 2, 3].map(|k| PolyMatrix::constant(m, &rep.images()[k]));
    let id = PolyMatrix::constant(m, &CMatrix::identity(2, 2));
    let var = |k| Polynomial::variable(m, k);
    let b1 = &b1 * &(&id + &a1.scale(&var(0)));
    let a1 = &a1 * &(&id + &b1.scale(&var(1)));
    let b1 = &b1 * &(&id + &a1.scale(&var(2)));
    FamilySpec::new(
        vec!["s1".into(), "s2".into(), "s3".into()],
        vec![0.2; 3],
        Presentation::surface(2),
        group,
        vec![a1, b1, a2, b2],
        &tol,
    )
}
