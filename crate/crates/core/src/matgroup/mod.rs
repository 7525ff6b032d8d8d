//! Matrix groups `GL(n, ℂ)` / `SL(n, ℂ)`, their Lie algebras, and points of
//! the representation variety `Hom(Γ, G)`.
//!
//! Lie algebra coordinates always refer to the fixed bases of
//! [`LieAlgebraBasis`]: for `sl(n)` the elementary matrices `E_ij` (`i ≠ j`,
//! row-major) followed by `E_ii − E_{i+1,i+1}`; for `gl(n)` all `E_ij`
//! row-major.

mod algebra;
mod representation;
mod solve;

pub use algebra::LieAlgebraBasis;
pub use representation::{Representation, RepresentationJson};
pub(crate) use solve::Linearization;
pub use solve::{find_representation, is_irreducible};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    SL,
}

/// `GL(n, ℂ)` or `SL(n, ℂ)`.
///
/// `PSL`/`PGL` are not separate kinds: the adjoint action factors through
/// the center, so every form computed here agrees with the projective quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(kind: GroupKind, n: usize) -> Result<Self> {
        let g = GroupSpec { kind, n };
        g.validate()?;
        Ok(g)
    }

    pub fn sl(n: usize) -> Self {
        GroupSpec::new(GroupKind::SL, n).expect("n >= 2")
    }

    pub fn gl(n: usize) -> Self {
        GroupSpec::new(GroupKind::GL, n).expect("n >= 2")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput(format!(
                "matrix size must be at least 2, got {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn algebra_dim(&self) -> usize {
        match self.kind {
            GroupKind::GL => self.n * self.n,
            GroupKind::SL => self.n * self.n - 1,
        }
    }
}
