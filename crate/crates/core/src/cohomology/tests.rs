use super::*;
use crate::fixtures;
use crate::matgroup::GroupSpec;
use crate::numeric::c;
use num_complex::Complex64;
use rand::Rng;

#[test]
fn free_group_dimensions() {
    let tol = Tolerances::default();
    let rep = fixtures::free_random(2, 1);
    let space = cocycle_space(&rep, &tol).unwrap();
    assert_eq!(space.dims(), (6, 3, 3));
    assert_eq!(space.h0, 0);
    assert!(space.rank_gap >= 1e3);
    assert_eq!(fox_jacobian(&rep).shape(), (0, 6));
}

#[test]
fn genus2_dimensions() {
    let tol = Tolerances::default();
    let rep = fixtures::genus2_irreducible(7);
    assert!(crate::matgroup::is_irreducible(&rep, &tol));
    let space = cocycle_space(&rep, &tol).unwrap();
    assert_eq!(space.dims(), (9, 3, 6));
    assert_eq!(space.h2, Some(0));
    assert_eq!(numeric::svd_rank(&fox_jacobian(&rep), &tol).unwrap(), 3);
    assert!(space.rank_gap >= 1e3, "gap {}", space.rank_gap);
}

#[test]
fn torus_dimensions() {
    let tol = Tolerances::default();
    let space = cocycle_space(&fixtures::torus_diagonal(), &tol).unwrap();
    let (z, b, h) = space.dims();
    assert_eq!(h, 2);
    assert_eq!((z, b), (4, 2));
    assert_eq!(space.h0, 1);
    assert_eq!(space.h2, Some(1));
}

#[test]
fn euler_characteristic_at_trivial_and_irreducible() {
    let tol = Tolerances::default();
    let g = GroupSpec::sl(2);
    for rep in [
        fixtures::genus2_irreducible(3),
        crate::matgroup::Representation::trivial(crate::words::Presentation::surface(2), g),
    ] {
        let space = cocycle_space(&rep, &tol).unwrap();
        let (z, b, _) = space.dims();
        let chi = space.h0 as i64 - (z as i64 - b as i64) + space.h2.unwrap() as i64;
        assert_eq!(chi, (2 - 2 * 2) * 3);
    }
}

#[test]
fn subspace_relations() {
    let tol = Tolerances::default();
    let rep = fixtures::genus2_irreducible(5);
    let space = cocycle_space(&rep, &tol).unwrap();
    let jac = fox_jacobian(&rep);
    let smax = space.jacobian_norm;
    for v in space.basis_b1.iter().chain(&space.basis_z1) {
        assert!((&jac * v.stacked()).norm() <= 10.0 * tol.rank_rel * smax);
    }
    // H¹ representatives orthogonal to B¹, and Z¹ = B¹ ⊕ H¹
    for h in &space.basis_h1 {
        for b in &space.basis_b1 {
            assert!(h.stacked().dotc(b.stacked()).norm() < 1e-12);
        }
    }
    let all: Vec<CVector> = space
        .basis_b1
        .iter()
        .chain(&space.basis_h1)
        .map(|v| v.stacked().clone())
        .collect();
    assert_eq!(
        numeric::svd_rank(&numeric::columns(&all, all[0].len()), &tol).unwrap(),
        9
    );
}

#[test]
fn jacobian_matches_explicit_sum() {
    // torus at commuting diagonals: ∂r/∂a = 1 − a b a⁻¹, ∂r/∂b = a − a b a⁻¹ b⁻¹
    let rep = fixtures::torus_diagonal();
    let jac = fox_jacobian(&rep);
    let d = 3;
    let w = |code: &[i64]| Word::from_signed(code);
    let id = CMatrix::identity(d, d);
    let block_a = &id - rep.adjoint_operator(&w(&[1, 2, -1]));
    let block_b = rep.adjoint_operator(&w(&[1])) - rep.adjoint_operator(&w(&[1, 2, -1, -2]));
    assert!((jac.view((0, 0), (d, d)) - block_a).norm() < 1e-14);
    assert!((jac.view((0, d), (d, d)) - block_b).norm() < 1e-14);
}

#[test]
fn coboundaries_are_cocycles() {
    let tol = Tolerances::default();
    let mut rng = fixtures::rng(2);
    let rep = fixtures::genus2_irreducible(2);
    let smax = cocycle_space(&rep, &tol).unwrap().jacobian_norm;
    for _ in 0..20 {
        let v = fixtures::random_vector(&mut rng, 3);
        let cob = rep.coboundary(&v);
        assert!(cob.norm() > 1e-3);
        assert!(cob.cocycle_residual(&rep) <= 10.0 * tol.rank_rel * smax * cob.norm().max(1.0));
    }
    // trivial representation: zero coboundary
    let triv = crate::matgroup::Representation::trivial(crate::words::Presentation::surface(2), GroupSpec::sl(2));
    assert_eq!(triv.coboundary(&fixtures::random_vector(&mut rng, 3)).norm(), 0.0);
}

fn prefix_count(chain: &BarChain) -> usize {
    chain.terms().filter(|(t, c)| *c == 1 && !t[1].is_identity()).count()
}

#[test]
fn fundamental_cycles() {
    for g in 1..=3 {
        let fc = fundamental_two_cycle(crate::words::Presentation::surface(g)).unwrap();
        assert!(fc.verify());
        assert_eq!(prefix_count(&fc.chain), 4 * g - 1);
        assert_eq!(
            fc.chain.coefficient(&[Word::identity(), Word::identity()]),
            -(2 * g as i64 - 1)
        );
        for i in 0..fc.chain.len() {
            assert!(
                !verify_cycle(&fc.chain.without_term(i), &fc.presentation),
                "g={g} term {i}"
            );
        }
        let doubled = fc.chain.add(&fc.chain);
        assert!(verify_cycle(&doubled, &fc.presentation));
    }
    let single = BarChain::new(2).with_term(vec![Word::generator(0), Word::generator(1)], 1);
    assert!(!verify_cycle(&single, &crate::words::Presentation::torus()));
    assert!(matches!(
        fundamental_two_cycle(crate::words::Presentation::free(2)),
        Err(Error::NotSurfacePresentation(_))
    ));
}

#[test]
fn torus_cycle_by_hand() {
    // z = [a|b] + [ab|A] + [abA|B] − [a|A] − [b|B] − [e|e]
    let fc = fundamental_two_cycle(crate::words::Presentation::torus()).unwrap();
    let p = &fc.presentation;
    let w = |s: &str| p.parse_word(s).unwrap();
    let mut expected = BarChain::new(2);
    for (a, b, c) in [
        ("a", "b", 1),
        ("a b", "A", 1),
        ("a b A", "B", 1),
        ("a", "A", -1),
        ("b", "B", -1),
        ("1", "1", -1),
    ] {
        expected.add_term(vec![w(a), w(b)], c);
    }
    assert_eq!(fc.chain, expected);
}

#[test]
fn boundary_of_three_chain_is_cycle() {
    let p = crate::words::Presentation::free(2);
    let w = |s: &str| p.parse_word(s).unwrap();
    let three = BarChain::new(3).with_term(vec![w("a"), w("b"), w("a")], 1);
    let z = three.boundary(|x| x.clone());
    assert_eq!(z.len(), 4);
    assert!(verify_cycle(&z, &p));
}

#[test]
fn pairing_properties() {
    let rep = fixtures::genus2_irreducible(4);
    let fc = fundamental_two_cycle(rep.presentation().clone()).unwrap();
    let mut rng = fixtures::rng(8);
    // A normalized 1-cochain that is a genuine function on Γ.
    let m = fixtures::random_vector(&mut rng, 4);
    let m = CMatrix::from_column_slice(2, 2, m.as_slice());
    let cochain = |w: &Word| (&m * rep.evaluate_word(w)).trace() - m.trace();
    let delta = |t: &[Word]| cochain(&t[1]) - cochain(&t[0].multiply(&t[1])) + cochain(&t[0]);
    assert!(pair(delta, &fc.chain).norm() < 1e-10);

    // normalized evaluator vanishes on [e|e]
    let degenerate = BarChain::new(2).with_term(vec![Word::identity(), Word::identity()], 5);
    let f = |t: &[Word]| {
        if t.iter().any(Word::is_identity) {
            c(0.0, 0.0)
        } else {
            c(1.0, 0.0)
        }
    };
    assert_eq!(pair(f, &degenerate), c(0.0, 0.0));

    // linear in both arguments
    let e1 = |t: &[Word]| c(t[0].len() as f64, 1.0);
    let e2 = |t: &[Word]| c(0.5, t[1].len() as f64);
    let alpha: Complex64 = fixtures::random_complex(&mut rng);
    let sum = pair(|t| e1(t) * alpha + e2(t), &fc.chain);
    assert!((sum - (pair(e1, &fc.chain) * alpha + pair(e2, &fc.chain))).norm() < 1e-12);
    let k = rng.gen_range(2..5);
    assert!((pair(e1, &fc.chain.scale(k)) - pair(e1, &fc.chain) * k as f64).norm() < 1e-12);
}
