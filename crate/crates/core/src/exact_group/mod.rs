//! Exact rational model of GSp₄: matrices, multiplier, Weyl elements, unipotent
//! coordinates, Bruhat cells and relevant orbits.

pub mod bruhat;
pub mod gsp;
pub mod matrix;
pub mod orbits;
pub mod unipotent;
pub mod weyl;

pub use bruhat::{bruhat_121_cell, bruhat_212_cell, bruhat_long_cell, classify_cell, minors, CellDecomp, CellTag};
pub use gsp::{multiplier, t_m, torus, CharacterIndex, GSpElement, TorusRep};
pub use matrix::{q, qi, ExactMatrix4};
pub use orbits::{relevant_check_by_conjugation, relevant_orbit, u_sigma_member};
pub use unipotent::{left_canonical, psi_exponent, right_canonical, u_coords, u_matrix, Root, UCoords};
pub use weyl::{WeylElem, WeylTag};

pub type Q = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("matrix is not in GSp4: tgJg is not a nonzero multiple of J")]
    NotSymplectic,
    #[error("matrix is not in the unipotent radical U")]
    NotInU,
    #[error("not in Bruhat cell: {0}")]
    NotInCell(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}
