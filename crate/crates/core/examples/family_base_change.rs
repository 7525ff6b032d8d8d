//! Pulls the Goldman form back along an explicit three-parameter polynomial
//! family of genus-2 representations, checks `dω = 0` on a grid, and checks
//! compatibility with polynomial reparametrizations.
//!
//! `cargo run --release --example family_base_change`

use charvar::charts::{base_change_check, family_pullback, Stencil, DEFAULT_STEP};
use charvar::cli::random_substitution;
use charvar::fixtures;
use charvar::invariants::InvariantPolynomial;
use charvar::numeric::Tolerances;

fn main() -> charvar::Result<()> {
    let tol = Tolerances::default();
    let family = fixtures::genus2_family(3)?;
    let phi = InvariantPolynomial::TraceForm;
    println!(
        "family with parameters {:?}, radius {:?}",
        family.params(),
        family.domain_radius()
    );

    let pull = family_pullback(&family, &phi, None, 2, DEFAULT_STEP, Stencil::Holomorphic, &tol)?;
    println!("{}", pull.to_csv().lines().next().unwrap_or_default());
    for sample in &pull.samples {
        let s: Vec<String> = sample.s.iter().map(|z| format!("{:+.3}", z.re)).collect();
        let w: Vec<String> = sample
            .coefficients
            .iter()
            .map(|(_, v)| format!("{:+.5}{:+.5}i", v.re, v.im))
            .collect();
        println!("  s = ({}): ω = [{}]", s.join(", "), w.join(", "));
    }
    let cl = &pull.closedness;
    println!(
        "max |dω| {:.1e} against scale {:.3} -> {}",
        cl.max_dw, cl.scale, cl.pass
    );

    let mut rng = fixtures::rng(4);
    for i in 0..3 {
        let subs = random_substitution(&mut rng, family.parameter_count(), 2, 0.05);
        let r = base_change_check(&family, &phi, None, &subs, vec![0.5, 0.5], 4, i, &tol)?;
        println!(
            "base change {i}: max deviation {:.1e} against scale {:.3} -> {}",
            r.max_dev, r.scale, r.pass
        );
    }
    Ok(())
}
