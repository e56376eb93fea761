//! Run configuration of the geometric side, read from TOML and overridden by flags.

use gsp4_core::arch::{APoint, SpectralTestFn};
use gsp4_core::arith_sums::DirichletChar;
use gsp4_core::exact_group::CharacterIndex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaSpec {
    Trivial,
    /// χ(g^j) = e(kj/(N−1)) for prime N and its least primitive root g.
    PrimeGenerator { k: i64 },
    /// Values χ(0), …, χ(N−1) as [re, im] pairs.
    Table { values: Vec<[f64; 2]> },
}

impl OmegaSpec {
    pub fn build(&self, level: u64) -> Result<DirichletChar, CliError> {
        Ok(match self {
            OmegaSpec::Trivial => DirichletChar::trivial(level),
            OmegaSpec::PrimeGenerator { k } => {
                if level == 1 {
                    DirichletChar::trivial(1)
                } else {
                    DirichletChar::prime_power_of_generator(level, *k)?
                }
            }
            OmegaSpec::Table { values } => {
                DirichletChar::from_table(level, values.iter().map(|v| Complex64::new(v[0], v[1])).collect())?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: u64,
    #[serde(rename = "N")]
    pub level: u64,
    pub m1: [i64; 2],
    pub m2: [i64; 2],
    #[serde(default = "default_omega")]
    pub omega: OmegaSpec,
    #[serde(default)]
    pub h: SpectralTestFn,
    #[serde(default = "one_point")]
    pub t1: APoint,
    #[serde(default = "one_point")]
    pub t2: APoint,
    /// Largest |s·d| in the outer sums.
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Whittaker quadrature tolerance.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Gauss–Legendre points per spectral direction.
    #[serde(default = "default_spectral_points")]
    pub spectral_points: usize,
    /// Radius of the smoothed U_σ\U-integral of the experimental transforms.
    #[serde(default = "default_isigma_radius")]
    pub isigma_radius: f64,
    /// When set, an R-doubling diagnostic above it leaves the transform pending.
    #[serde(default)]
    pub isigma_fail_above: Option<f64>,
    #[serde(default)]
    pub skip_experimental: bool,
    #[serde(default = "default_volume")]
    pub volume_normalization: f64,
}

fn default_omega() -> OmegaSpec {
    OmegaSpec::Trivial
}
fn one_point() -> APoint {
    APoint::one()
}
fn default_budget() -> u64 {
    8
}
fn default_tol() -> f64 {
    1e-9
}
fn default_spectral_points() -> usize {
    24
}
fn default_isigma_radius() -> f64 {
    2.0
}
fn default_volume() -> f64 {
    1.0
}

impl RunConfig {
    pub fn minimal(n: u64, level: u64) -> Self {
        RunConfig {
            n,
            level,
            m1: [1, 1],
            m2: [1, 1],
            omega: default_omega(),
            h: SpectralTestFn::default(),
            t1: one_point(),
            t2: one_point(),
            budget: default_budget(),
            tol: default_tol(),
            spectral_points: default_spectral_points(),
            isigma_radius: default_isigma_radius(),
            isigma_fail_above: None,
            skip_experimental: false,
            volume_normalization: default_volume(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 || self.level == 0 {
            return Err(CliError::Usage("n and N must be positive".into()));
        }
        if gcd(self.n, self.level) != 1 {
            return Err(CliError::Usage(format!("n = {} and N = {} must be coprime", self.n, self.level)));
        }
        self.character_indices()?;
        APoint::new(self.t1.a1, self.t1.a2)?;
        APoint::new(self.t2.a1, self.t2.a2)?;
        // Also rejects NaN.
        let positive = |x: f64| x > 0.0;
        if !positive(self.tol) || !positive(self.volume_normalization) || self.spectral_points < 2 || !positive(self.isigma_radius) {
            return Err(CliError::Usage("tolerances, radii, point counts and the volume normalization must be positive".into()));
        }
        Ok(())
    }

    pub fn character_indices(&self) -> Result<(CharacterIndex, CharacterIndex), CliError> {
        Ok((CharacterIndex::new(self.m1[0], self.m1[1])?, CharacterIndex::new(self.m2[0], self.m2[1])?))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::from_toml("n = 1\nN = 1\nm1 = [1, 1]\nm2 = [1, 1]\n").unwrap();
        assert_eq!(c, RunConfig::minimal(1, 1));
        c.validate().unwrap();
    }

    #[test]
    fn nested_keys() {
        let text = r#"
n = 4
N = 3
m1 = [1, 2]
m2 = [1, -1]
budget = 12
[omega]
kind = "prime_generator"
k = 1
[h]
name = "gaussian"
temperature = 3.0
[t1]
a1 = 0.5
a2 = 2.0
"#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.omega, OmegaSpec::PrimeGenerator { k: 1 });
        assert_eq!(c.h, SpectralTestFn::Gaussian { temperature: 3.0 });
        assert_eq!(c.t1.a2, 2.0);
        c.validate().unwrap();
        assert_eq!(c.omega.build(3).unwrap().modulus(), 3);
    }

    #[test]
    fn rejects_non_coprime_and_unknown_keys() {
        assert!(RunConfig::minimal(4, 2).validate().is_err());
        assert!(RunConfig::from_toml("n = 1\nN = 1\nm1 = [1, 1]\nm2 = [1, 1]\nbogus = 3\n").is_err());
        let mut c = RunConfig::minimal(1, 1);
        c.m1 = [0, 1];
        assert!(c.validate().is_err());
    }
}
