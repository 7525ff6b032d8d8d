//! Twisted group cohomology of finitely presented groups at matrix
//! representations, and the characteristic forms `η_Φ` on representation
//! varieties built from invariant polynomials (for surface groups and
//! quadratic `Φ`, the Goldman symplectic form).
//!
//! The crate is organized bottom-up:
//!
//! * [`words`]: free-group words, presentations, Fox calculus
//! * [`numeric`]: dense complex linear algebra
//! * [`matgroup`]: `GL(n)` / `SL(n)`, Lie algebra bases, points of `Hom(Γ, G)`
//! * [`cohomology`]: `Z¹`, `B¹`, `H¹`, bar chains and fundamental cycles
//! * [`invariants`]: invariant polynomials and their polarizations
//! * [`forms`]: evaluation of `η_Φ` and structural checks
//! * [`charts`]: charts on `Hom(Γ, G)`, finite-difference closedness and
//!   polynomial families
//! * [`cli`]: batch driver behind the `charvar` binary

pub mod charts;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod invariants;
pub mod matgroup;
pub mod numeric;
pub mod words;

pub use error::{Error, Result};
