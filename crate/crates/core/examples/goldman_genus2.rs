//! The Goldman form at a genus-2 point: Gram matrix on `H¹`, its rank and
//! skewness, the structural suite, and conjugation invariance.
//!
//! `cargo run --example goldman_genus2`

use charvar::cohomology::cocycle_space;
use charvar::fixtures;
use charvar::forms::{conjugation_invariance, contraction_suite, gram_matrix, EtaContext};
use charvar::invariants::InvariantPolynomial;
use charvar::matgroup::GroupSpec;
use charvar::numeric::Tolerances;

fn main() -> charvar::Result<()> {
    let tol = Tolerances::default();
    let rep = fixtures::genus2_irreducible(5);
    let ctx = EtaContext::new(rep.clone(), InvariantPolynomial::TraceForm)?;
    println!(
        "fundamental cycle has {} terms, verified {}",
        ctx.cycle().len(),
        ctx.cycle_verified()
    );

    let space = cocycle_space(&rep, &tol)?;
    let gram = gram_matrix(&ctx, &space.basis_h1, &tol)?;
    println!(
        "Gram matrix on H¹ ({}×{}): rank {}, skewness {:.1e}",
        gram.matrix.nrows(),
        gram.matrix.ncols(),
        gram.rank.rank,
        gram.skewness
    );
    println!("  singular values {:.4?}", gram.rank.singular_values);

    let suite = contraction_suite(&ctx, 50, 1, &tol)?;
    println!(
        "coboundary contraction: max {:.1e} against scale {:.3} -> {}",
        suite.max_dev, suite.scale, suite.pass
    );

    let mut rng = fixtures::rng(2);
    let g = fixtures::random_group_element(&mut rng, GroupSpec::sl(2), 1.0);
    let conj = conjugation_invariance(&ctx, &g, 10, 3, &tol)?;
    println!(
        "conjugation invariance: max {:.1e} against scale {:.3} -> {}",
        conj.max_dev, conj.scale, conj.pass
    );
    Ok(())
}
