//! Dimensions of `Z¹`, `B¹` and `H¹` with `Ad ρ` coefficients at several
//! representations, together with the rank gap that certifies them.
//!
//! `cargo run --example cohomology_dims`

use charvar::cohomology::cocycle_space;
use charvar::fixtures;
use charvar::matgroup::{is_irreducible, Representation};
use charvar::numeric::Tolerances;

fn main() -> charvar::Result<()> {
    let tol = Tolerances::default();
    let cases: Vec<(&str, Representation)> = vec![
        ("free group F2, random SL(2)", fixtures::free_random(2, 0)),
        ("free group F3, random SL(2)", fixtures::free_random(3, 1)),
        ("torus, diagonal SL(2)", fixtures::torus_diagonal()),
        ("genus 2, irreducible SL(2)", fixtures::genus2_irreducible(5)),
        ("genus 3, irreducible SL(2)", fixtures::surface_point(3, 2)?),
    ];
    println!(
        "{:<30} {:>4} {:>4} {:>4} {:>4} {:>5} {:>10} irreducible",
        "point", "Z1", "B1", "H1", "H0", "H2", "rank gap"
    );
    for (name, rep) in cases {
        let space = cocycle_space(&rep, &tol)?;
        let (z, b, h) = space.dims();
        let h2 = space.h2.map_or("-".to_string(), |v| v.to_string());
        println!(
            "{name:<30} {z:>4} {b:>4} {h:>4} {:>4} {h2:>5} {:>10.2e} {}",
            space.h0,
            space.rank_gap,
            is_irreducible(&rep, &tol)
        );
    }
    Ok(())
}
