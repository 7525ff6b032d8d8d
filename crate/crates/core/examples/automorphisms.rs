//! Pulling `η` back along surface-group automorphisms multiplies it by the
//! degree: `+1` for orientation-preserving maps and `−1` for reversing ones.
//!
//! `cargo run --example automorphisms`

use charvar::fixtures;
use charvar::forms::{endomorphism_pullback, EtaContext};
use charvar::invariants::InvariantPolynomial;
use charvar::numeric::Tolerances;

fn main() -> charvar::Result<()> {
    let tol = Tolerances::default();
    let cases = [
        (fixtures::torus_diagonal(), vec!["b", "a"]),
        (fixtures::torus_diagonal(), vec!["a b", "b"]),
        (fixtures::genus2_irreducible(5), vec!["a2", "b2", "a1", "b1"]),
        (fixtures::genus2_irreducible(5), vec!["b1", "a1", "b2", "a2"]),
    ];
    for (rep, words) in cases {
        let pres = rep.presentation();
        let images = words
            .iter()
            .map(|w| pres.parse_word(w))
            .collect::<charvar::Result<Vec<_>>>()?;
        let rule: Vec<String> = pres
            .generator_names()
            .iter()
            .zip(&words)
            .map(|(g, w)| format!("{g}↦{w}"))
            .collect();
        let ctx = EtaContext::new(rep.clone(), InvariantPolynomial::TraceForm)?;
        let (_, report) = endomorphism_pullback(&ctx, &images, 10, 0, &tol)?;
        println!(
            "{:<28} ratio {:+.12} (spread {:.1e})",
            rule.join(" "),
            report.ratio.re,
            report.spread
        );
    }
    Ok(())
}
