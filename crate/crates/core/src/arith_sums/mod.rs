//! Elementary exponential sums and the identity-orbit contribution.

pub mod dirichlet;
pub mod elementary;
pub mod identity;

pub use dirichlet::DirichletChar;
pub use elementary::{
    capped_valuation, factorize, is_prime, nonvanishing_criterion, round_to_integer, s_bruteforce, s_bruteforce_int,
    s_closed, s_primepower, ElementarySumSpec,
};
pub use identity::{
    identity_contribution, identity_contribution_lattice_oracle, identity_contribution_oracle,
    identity_contribution_signed, identity_setup, IdentityContribution, IdentityData, OracleValue,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SumError {
    #[error("invalid sum specification: {0}")]
    InvalidSpec(&'static str),
    #[error("invalid Dirichlet character: {0}")]
    InvalidCharacter(&'static str),
    #[error("value {re}+{im}i is not an integer within tolerance")]
    NotInteger { re: f64, im: f64 },
    #[error("conditions for a nonzero identity contribution are not met")]
    ConditionsNotMet,
    #[error("expected an integer: {0}")]
    NonIntegral(&'static str),
}
