//! Negative control: on a free group there is no fundamental class, and the
//! form obtained from the chain `[a|b]` is not closed.
//!
//! `cargo run --example free_group_demo`

use charvar::charts::{free_group_demo, DEFAULT_STEP};
use charvar::invariants::InvariantPolynomial;
use charvar::matgroup::GroupSpec;
use charvar::numeric::Tolerances;

fn main() -> charvar::Result<()> {
    let r = free_group_demo(
        2,
        GroupSpec::sl(2),
        &InvariantPolynomial::TraceForm,
        4,
        11,
        DEFAULT_STEP,
        &Tolerances::default(),
    )?;
    println!("chain {} on a {}-dimensional chart", r.chain, r.chart_dimension);
    println!(
        "|dω| = {:.3e} against scale {:.3}: non-closed {}",
        r.chain_level_dw, r.scale, r.nonclosed
    );
    println!(
        "pairing with the boundary ∂[a|b|a]: {:.1e} (vanishes: {})",
        r.boundary_pairing, r.boundary_pass
    );
    println!("{}", r.note);
    Ok(())
}
