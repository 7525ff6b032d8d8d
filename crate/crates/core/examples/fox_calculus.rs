//! Fox derivatives of a surface relator, and the Fox Jacobian evaluated at a
//! representation.
//!
//! `cargo run --example fox_calculus`

use charvar::cohomology::fox_jacobian;
use charvar::fixtures;
use charvar::words::{fox_derivative, Presentation};

fn main() -> charvar::Result<()> {
    let pres = Presentation::surface(2);
    let relator = &pres.relators()[0];
    println!("relator {}", pres.render(relator));
    for k in 0..pres.generator_count() {
        let d = fox_derivative(relator, k, pres.generator_count())?;
        let terms: Vec<String> = d.terms().map(|(w, c)| format!("{c:+}·{}", pres.render(w))).collect();
        println!("  ∂r/∂{} = {}", pres.generator_names()[k], terms.join(" "));
    }

    let rep = fixtures::genus2_irreducible(5);
    let jac = fox_jacobian(&rep);
    println!("Fox Jacobian at an SL(2) point: {}×{}", jac.nrows(), jac.ncols());
    let sv = charvar::numeric::svd(&jac)?.singular_values;
    let sv: Vec<String> = sv.iter().map(|s| format!("{s:.3e}")).collect();
    println!("  singular values [{}]", sv.join(", "));
    Ok(())
}
