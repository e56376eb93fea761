//! Symplectic Kloosterman sums attached to the three relevant Weyl cells and the outer
//! divisibility-constrained sums of the geometric side.

pub mod enumerate;
pub mod geometric;
pub mod sums;

pub use enumerate::{canonical_rep, enumerate_cell, perturb, CosetInvariants, CosetRep, EnumOptions};
pub use geometric::{geometric_sum_terms, KloosTerm, KloosTerms};
pub use sums::{kloos, kloos_121, kloos_212, kloos_j, summand, summand_phase, KloosValue};

use crate::arith_sums::DirichletChar;
use crate::exact_group::{CellTag, CharacterIndex, GroupError};

/// Congruence condition on the (2,2) entry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Congruence {
    /// a₂₂ ≡ 1 mod N.
    #[default]
    Gamma1,
    /// a₂₂ any unit mod N; the ω̄(a₂₂) twist is then visible.
    CentralUnits,
}

#[derive(Clone, Debug)]
pub struct KloostermanSpec {
    pub cell: CellTag,
    pub level: u64,
    pub s: i64,
    pub d: i64,
    pub m: i64,
    pub m1: CharacterIndex,
    pub m2: CharacterIndex,
    pub omega: DirichletChar,
    pub congruence: Congruence,
}

impl KloostermanSpec {
    pub fn new(cell: CellTag, level: u64, s: i64, d: i64, m: i64, m1: CharacterIndex, m2: CharacterIndex) -> Self {
        KloostermanSpec {
            cell,
            level,
            s,
            d,
            m,
            m1,
            m2,
            omega: DirichletChar::trivial(level),
            congruence: Congruence::Gamma1,
        }
    }

    pub fn with_omega(mut self, omega: DirichletChar) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_congruence(mut self, c: Congruence) -> Self {
        self.congruence = c;
        self
    }

    pub fn validate(&self) -> Result<(), KloosError> {
        if self.level == 0 {
            return Err(KloosError::InvalidSpec("level must be positive"));
        }
        if self.s == 0 || self.d == 0 || self.m == 0 {
            return Err(KloosError::InvalidSpec("s, d, m must be nonzero"));
        }
        if self.omega.modulus() != self.level {
            return Err(KloosError::InvalidSpec("character modulus must equal N"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KloosError {
    #[error("invalid Kloosterman specification: {0}")]
    InvalidSpec(&'static str),
    #[error("|s·d| = {scale} exceeds the enumeration budget {budget}")]
    UnsupportedScale { scale: u64, budget: u64 },
    #[error("element not in the cell: {0}")]
    NotInCell(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
}
