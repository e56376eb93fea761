//! Geometric-side computations for GSp(4): exact group arithmetic,
//! exponential sums, symplectic Kloosterman sums and the Archimedean transforms.

pub mod arith_sums;
pub mod arch;
pub mod exact_group;
pub mod kloosterman;
pub mod parallel;

pub use parallel::Parallelism;
