use std::sync::Arc;

use super::*;
use crate::cohomology::cocycle_space;
use crate::fixtures;
use crate::invariants::InvariantPolynomial;
use crate::matgroup::GroupSpec;
use crate::words::Presentation;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn genus2_chart(seed: u64) -> Chart {
    let rep = fixtures::genus2_irreducible(seed);
    let space = cocycle_space(&rep, &tol()).unwrap();
    Chart::new(rep, space.basis_h1[..3].to_vec(), &tol()).unwrap()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

#[test]
fn zero_parameter_is_the_center() {
    let chart = genus2_chart(5);
    let r = chart.retract(&[c(0.0, 0.0); 3]).unwrap();
    assert_eq!(r.rep.images(), chart.center().images());
    assert_eq!(r.correction, 0.0);
}

#[test]
fn free_group_chart_is_the_exponential_curve() {
    let rep = fixtures::free_random(2, 3);
    let mut rng = fixtures::rng(4);
    let dirs: Vec<TangentVector> = (0..2)
        .map(|_| {
            TangentVector::from_values(&[
                fixtures::random_vector(&mut rng, 3),
                fixtures::random_vector(&mut rng, 3),
            ])
        })
        .collect();
    let chart = Chart::new(rep.clone(), dirs.clone(), &tol()).unwrap();
    let t = [c(0.3, -0.1), c(0.2, 0.2)];
    let r = chart.retract(&t).unwrap();
    assert_eq!(r.correction, 0.0);
    let combo = TangentVector::combination(&dirs, &t);
    for k in 0..2 {
        let expected = numeric::matrix_exp(&rep.algebra().to_matrix(&combo.value(k))) * &rep.images()[k];
        assert!((&r.rep.images()[k] - expected).norm() < 1e-14);
    }
}

#[test]
fn retraction_is_second_order_close_to_the_exponential() {
    let chart = genus2_chart(5);
    let dir = [c(0.6, 0.0), c(-0.3, 0.2), c(0.5, 0.4)];
    let scales = [1e-2, 1e-3, 1e-4];
    let mut corrections = Vec::new();
    let mut first_order = Vec::new();
    for s in scales {
        let t: Vec<Complex64> = dir.iter().map(|z| z * s).collect();
        let r = chart.retract(&t).unwrap();
        assert!(r.rep.relator_residual() <= tol().newton_tol);
        corrections.push(r.correction);
        // ‖log(ρ_t ρ⁻¹) − Σ t_i σ_i‖
        let combo = TangentVector::combination(chart.directions(), &t);
        let mut err = 0.0f64;
        for k in 0..4 {
            let ratio = &r.rep.images()[k] * numeric::matrix_inverse(&chart.center().images()[k], &tol()).unwrap();
            let log_approx = &ratio - CMatrix::identity(2, 2);
            let coords = chart.center().algebra().coordinates(&log_approx);
            err = err.max((coords - combo.value(k)).norm());
        }
        first_order.push(err);
    }
    let slope = loglog_slope(&scales, &corrections);
    assert!((slope - 2.0).abs() < 0.1, "correction slope {slope}: {corrections:?}");
    let order = loglog_slope(&scales, &first_order);
    assert!(order >= 1.9, "first-order defect slope {order}");
}

#[test]
fn large_parameters_leave_the_chart() {
    let chart = genus2_chart(5);
    let err = chart.retract(&[c(2.0, 0.0), c(0.0, 2.0), c(2.0, 0.0)]).unwrap_err();
    assert!(
        matches!(err, Error::LeftChart { .. } | Error::NoConvergence { .. }),
        "{err:?}"
    );
}

#[test]
fn non_cocycle_directions_are_rejected() {
    let rep = fixtures::genus2_irreducible(5);
    let mut rng = fixtures::rng(1);
    let bogus = TangentVector::from_values(&(0..4).map(|_| fixtures::random_vector(&mut rng, 3)).collect::<Vec<_>>());
    assert!(matches!(
        Chart::new(rep, vec![bogus], &tol()),
        Err(Error::NotTangent { .. })
    ));
}

#[test]
fn re_extracted_tangents_match_directions_at_center() {
    let chart = genus2_chart(5);
    let tangents = chart.tangents(&[c(0.0, 0.0); 3], chart.center()).unwrap();
    for (t, d) in tangents.iter().zip(chart.directions()) {
        assert!((t - d).norm() < 1e-9, "{}", (t - d).norm());
    }
    let t = [c(0.01, 0.0), c(0.0, -0.02), c(0.005, 0.005)];
    let point = chart.point(&t).unwrap();
    for s in &point.tangents {
        assert!(s.cocycle_residual(&point.rep) < 1e-9);
    }
}

#[test]
fn goldman_form_is_closed_and_controls_behave() {
    let chart = genus2_chart(5);
    let ctx = EtaContext::new(chart.center().clone(), InvariantPolynomial::TraceForm).unwrap();
    let form = EtaForm { ctx: ctx.clone() };
    let closed = fd_exterior_derivative(&chart, &form, DEFAULT_STEP, Stencil::Holomorphic).unwrap();
    let report = &closed.exterior_derivative;
    assert!(report.scale > 1e-2);
    assert!(report.max_dw <= 1e-5 * report.scale, "{report:?}");
    assert!(closed.antisymmetry <= 1e-9 * report.scale);
    assert!(report.cauchy_riemann.unwrap() < 1e-3 * report.scale);

    let frozen = FrozenForm {
        ctx: ctx.clone(),
        directions: chart.directions().to_vec(),
    };
    let r = fd_exterior_derivative(&chart, &frozen, DEFAULT_STEP, Stencil::Holomorphic).unwrap();
    assert!(r.exterior_derivative.max_dw <= 1e-9);

    let perturbed = PerturbedForm {
        inner: form,
        amplitude: 1e-3,
        variable: 0,
        indices: vec![1, 2],
    };
    let r = fd_exterior_derivative(&chart, &perturbed, DEFAULT_STEP, Stencil::Holomorphic).unwrap();
    assert!(r.exterior_derivative.max_dw >= 1e-4, "{:?}", r.exterior_derivative);
}

#[test]
fn family_tangents() {
    let torus = Arc::new(Presentation::torus());
    let one = c(1.0, 0.0);
    // a ↦ diag(exp s, exp(−s)) truncated at degree 6, b constant diagonal
    let mut plus = Polynomial::zero();
    let mut minus = Polynomial::zero();
    let mut factorial = 1.0;
    for k in 0..=6u32 {
        if k > 0 {
            factorial *= k as f64;
        }
        plus.add_term(vec![k], c(1.0 / factorial, 0.0));
        minus.add_term(vec![k], c((-1f64).powi(k as i32) / factorial, 0.0));
    }
    let a = PolyMatrix::from_rows(vec![vec![plus, Polynomial::zero()], vec![Polynomial::zero(), minus]]).unwrap();
    let b = PolyMatrix::constant(1, &fixtures::diag2(c(2.0, 0.0), c(0.5, 0.0)));
    let family = FamilySpec::new(
        vec!["s".into()],
        vec![0.1],
        torus.clone(),
        GroupSpec::gl(2),
        vec![a, b.clone()],
        &tol(),
    )
    .unwrap();
    let sigma = family_tangent(&family, &[c(0.0, 0.0)], 0, &tol()).unwrap();
    let h_gl = CVector::from_vec(vec![one, c(0.0, 0.0), c(0.0, 0.0), -one]);
    assert!((sigma.value(0) - h_gl).norm() < 1e-8);
    assert!(sigma.value(1).norm() < 1e-15);

    // constant family
    let constant = FamilySpec::new(
        vec!["s".into()],
        vec![0.1],
        torus.clone(),
        GroupSpec::gl(2),
        vec![b.clone(), b.clone()],
        &tol(),
    )
    .unwrap();
    assert_eq!(
        family_tangent(&constant, &[c(0.05, 0.0)], 0, &tol()).unwrap().norm(),
        0.0
    );
    assert!(matches!(
        family_tangent(&constant, &[c(0.0, 0.0)], 1, &tol()),
        Err(Error::IndexOutOfRange { .. })
    ));
}

#[test]
fn conjugated_family_has_coboundary_tangents() {
    let rep = fixtures::genus2_irreducible(5);
    let m = 1;
    let mut rng = fixtures::rng(9);
    // g(s) = I + s N with N² = 0, so det g = 1 and g⁻¹ = I − s N
    let p = fixtures::random_group_element(&mut rng, GroupSpec::sl(2), 1.0);
    let mut e = CMatrix::zeros(2, 2);
    e[(0, 1)] = c(1.0, 0.0);
    let nil = &p * e * numeric::matrix_inverse(&p, &tol()).unwrap();
    let id = PolyMatrix::constant(m, &CMatrix::identity(2, 2));
    let s_poly = Polynomial::variable(m, 0);
    let g = &id + &PolyMatrix::constant(m, &nil).scale(&s_poly);
    let g_inv = &id + &PolyMatrix::constant(m, &(-&nil)).scale(&s_poly);
    let images = rep
        .images()
        .iter()
        .map(|r| &(&g * &PolyMatrix::constant(m, r)) * &g_inv)
        .collect();
    let family = FamilySpec::new(
        vec!["s".into()],
        vec![0.2],
        rep.presentation_arc().clone(),
        GroupSpec::sl(2),
        images,
        &tol(),
    )
    .unwrap();
    let s = [c(0.07, -0.03)];
    let point = family.at(&s, &tol()).unwrap();
    let sigma = family_tangent(&family, &s, 0, &tol()).unwrap();
    let space = cocycle_space(&point, &tol()).unwrap();
    // σ lies in B¹
    let b = numeric::columns(
        &space.basis_b1.iter().map(|v| v.stacked().clone()).collect::<Vec<_>>(),
        sigma.stacked().len(),
    );
    let residual = sigma.stacked() - &b * (b.adjoint() * sigma.stacked());
    assert!(residual.norm() < 1e-10 * sigma.norm());
    let ctx = EtaContext::new(point, InvariantPolynomial::TraceForm).unwrap();
    let tau = fixtures::random_combination(&mut rng, &space.basis_z1);
    assert!(ctx.eta2(&sigma, &tau).unwrap().norm() < 1e-10);
}

#[test]
fn genus2_family_pullback_is_closed_and_commutes_with_base_change() {
    let family = fixtures::genus2_family(3).unwrap();
    let pull = family_pullback(
        &family,
        &InvariantPolynomial::TraceForm,
        None,
        2,
        DEFAULT_STEP,
        Stencil::Holomorphic,
        &tol(),
    )
    .unwrap();
    assert_eq!(pull.samples.len(), 8);
    assert!(pull.closedness.scale > 1e-3, "{:?}", pull.closedness);
    assert!(pull.closedness.pass, "{:?}", pull.closedness);
    assert!(pull.antisymmetry <= 1e-10 * pull.closedness.scale.max(1.0));
    let csv = pull.to_csv();
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.starts_with("s1_re,s1_im,s2_re,s2_im,s3_re,s3_im,w_s1_s2_re"));

    let mut rng = fixtures::rng(17);
    for _ in 0..2 {
        let subs: Vec<Polynomial> = (0..3)
            .map(|_| {
                let mut q = Polynomial::zero();
                for powers in [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]] {
                    q.add_term(powers.to_vec(), fixtures::random_complex(&mut rng) * 0.1);
                }
                q
            })
            .collect();
        let report = base_change_check(
            &family,
            &InvariantPolynomial::TraceForm,
            None,
            &subs,
            vec![0.5, 0.5],
            4,
            1,
            &tol(),
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
    }
}

#[test]
fn top_degree_pullback_is_trivially_closed() {
    let family = fixtures::genus2_family(3).unwrap();
    let mut subs = vec![
        Polynomial::variable(2, 0),
        Polynomial::variable(2, 1),
        Polynomial::zero(),
    ];
    subs[2].add_term(vec![1, 1], c(0.5, 0.0));
    let two = family
        .reparametrize(vec!["u".into(), "v".into()], vec![0.2, 0.2], &subs, &tol())
        .unwrap();
    let pull = family_pullback(
        &two,
        &InvariantPolynomial::TraceForm,
        None,
        1,
        DEFAULT_STEP,
        Stencil::Holomorphic,
        &tol(),
    )
    .unwrap();
    assert!(pull.closedness.max_dw <= 1e-12);
}

#[test]
fn family_validation_errors() {
    let torus = Arc::new(Presentation::torus());
    let b = PolyMatrix::constant(1, &fixtures::diag2(c(2.0, 0.0), c(0.5, 0.0)));
    let mut off = Polynomial::zero();
    off.add_term(vec![1], c(1.0, 0.0));
    let one = Polynomial::constant(1, c(1.0, 0.0));
    // a = [[1, s], [0, 1]] does not commute with diagonal b
    let a = PolyMatrix::from_rows(vec![vec![one.clone(), off], vec![Polynomial::zero(), one]]).unwrap();
    let err = FamilySpec::new(
        vec!["s".into()],
        vec![0.2],
        torus.clone(),
        GroupSpec::gl(2),
        vec![a, b.clone()],
        &tol(),
    );
    assert!(matches!(err, Err(Error::InvalidFamily(_))));
    let err = FamilySpec::new(
        vec!["s".into()],
        vec![0.2, 0.1],
        torus.clone(),
        GroupSpec::gl(2),
        vec![b.clone(), b.clone()],
        &tol(),
    );
    assert!(matches!(err, Err(Error::InvalidFamily(_))));
    let json: FamilySpecJson = serde_json::from_str(
        r#"{"params":["s"],"domain_radius":[0.1],"images":{"a":[[[{"coeff":[1,0],"powers":[0]}],[]],[[],[{"coeff":[1,0],"powers":[0]}]]],
            "c":[[[{"coeff":[1,0],"powers":[0]}],[]],[[],[{"coeff":[1,0],"powers":[0]}]]]}}"#,
    )
    .unwrap();
    assert!(matches!(
        FamilySpec::from_json(json, Some(Presentation::torus()), &tol()),
        Err(Error::InvalidFamily(_))
    ));
}

#[test]
fn family_json_round_trip() {
    let family = fixtures::genus2_family(3).unwrap();
    let text = serde_json::to_string(&family.to_json()).unwrap();
    let back = FamilySpec::from_json(serde_json::from_str(&text).unwrap(), None, &tol()).unwrap();
    let s = [c(0.05, 0.01), c(-0.02, 0.0), c(0.1, -0.03)];
    let (x, y) = (family.images_at(&s).unwrap(), back.images_at(&s).unwrap());
    for (p, q) in x.iter().zip(&y) {
        assert!((p - q).norm() < 1e-15);
    }
}

#[test]
fn free_group_demo_shows_non_closedness() {
    let report = free_group_demo(
        2,
        GroupSpec::sl(2),
        &InvariantPolynomial::Killing,
        10,
        1,
        DEFAULT_STEP,
        &tol(),
    )
    .unwrap();
    assert!(report.nonclosed, "{report:?}");
    assert!(report.chain_level_dw > 1e-3 * report.scale);
    assert!(report.boundary_pass, "{report:?}");
    let zero = InvariantPolynomial::Combination {
        terms: vec![crate::invariants::ComboTerm {
            coeff: c(0.0, 0.0),
            poly: InvariantPolynomial::Killing,
        }],
    };
    let report = free_group_demo(2, GroupSpec::sl(2), &zero, 3, 1, DEFAULT_STEP, &tol()).unwrap();
    assert_eq!(report.chain_level_dw, 0.0);
    assert!(matches!(
        free_group_demo(
            1,
            GroupSpec::sl(2),
            &InvariantPolynomial::Killing,
            3,
            1,
            DEFAULT_STEP,
            &tol()
        ),
        Err(Error::InvalidInput(_))
    ));
}
