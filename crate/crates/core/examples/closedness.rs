//! Finite-difference `dω` of the Goldman form on a three-dimensional chart
//! of the representation variety, next to a frozen-coefficient form and a
//! deliberately non-closed perturbation.
//!
//! `cargo run --release --example closedness`

use charvar::charts::{fd_exterior_derivative, Chart, EtaForm, FrozenForm, PerturbedForm, Stencil, DEFAULT_STEP};
use charvar::cohomology::cocycle_space;
use charvar::fixtures;
use charvar::forms::EtaContext;
use charvar::invariants::InvariantPolynomial;
use charvar::numeric::Tolerances;

fn main() -> charvar::Result<()> {
    let tol = Tolerances::default();
    let rep = fixtures::genus2_irreducible(5);
    let ctx = EtaContext::new(rep.clone(), InvariantPolynomial::TraceForm)?;
    let space = cocycle_space(&rep, &tol)?;
    let chart = Chart::new(rep, space.basis_h1[..3].to_vec(), &tol)?;

    let t = [
        charvar::numeric::c(0.05, 0.0),
        charvar::numeric::c(0.0, 0.03),
        charvar::numeric::c(-0.02, 0.0),
    ];
    let r = chart.retract(&t)?;
    println!(
        "retraction at t = (0.05, 0.03i, -0.02): {} iterations, residual {:.1e}",
        r.iterations,
        r.rep.relator_residual()
    );

    let form = EtaForm { ctx: ctx.clone() };
    let frozen = FrozenForm {
        ctx,
        directions: chart.directions().to_vec(),
    };
    for stencil in [Stencil::Central, Stencil::Holomorphic] {
        let main = fd_exterior_derivative(&chart, &form, DEFAULT_STEP, stencil)?.exterior_derivative;
        println!(
            "{stencil:?}: |dω| at h {:.1e}, at h/2 {:.1e}, extrapolated {:.1e}; scale {:.3}",
            main.max_dw_step, main.max_dw_half_step, main.max_dw, main.scale
        );
    }
    let frozen = fd_exterior_derivative(&chart, &frozen, DEFAULT_STEP, Stencil::Holomorphic)?.exterior_derivative;
    println!("frozen tangents: |dω| {:.1e}", frozen.max_dw);
    let perturbed = PerturbedForm {
        inner: form,
        amplitude: 1e-3,
        variable: 0,
        indices: vec![1, 2],
    };
    let perturbed = fd_exterior_derivative(&chart, &perturbed, DEFAULT_STEP, Stencil::Holomorphic)?.exterior_derivative;
    println!("ω + 1e-3·t₁ dt₂∧dt₃: |dω| {:.3e}", perturbed.max_dw);
    Ok(())
}
