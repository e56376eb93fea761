use gsp4_core::arch::ArchError;
use gsp4_core::arith_sums::SumError;
use gsp4_core::exact_group::GroupError;
use gsp4_core::kloosterman::KloosError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Sum(#[from] SumError),
    #[error("{0}")]
    Group(#[from] GroupError),
    #[error("{0}")]
    Kloos(#[from] KloosError),
    #[error("{0}")]
    Arch(#[from] ArchError),
    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Invalid input is a usage error (2), an exhausted budget or failed convergence is a
    /// partial result (3), everything else is reported as an invariant failure (4).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Sum(SumError::InvalidSpec(_) | SumError::InvalidCharacter(_)) => 2,
            CliError::Kloos(KloosError::InvalidSpec(_)) => 2,
            CliError::Kloos(KloosError::UnsupportedScale { .. }) => 3,
            CliError::Arch(ArchError::DomainError(_) | ArchError::NotSymplectic(_) | ArchError::GammaPole(_)) => 2,
            CliError::Arch(ArchError::QuadratureFailure(_) | ArchError::NoConvergence(_)) => 3,
            CliError::Group(_) => 2,
            CliError::Io(_) => 2,
            _ => 4,
        }
    }
}
