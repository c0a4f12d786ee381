//! Many-body environments that generate correlated dephasing noise.

mod ising;
mod markov;
mod mps;

pub use ising::ClassicalIsingEnv;
pub use markov::MarkovEnv;
pub use mps::{enumerate_ring_weights, wolf_env, DiagonalParams, Rank1MpsEnv};

use crate::error::{Error, Result};
use crate::numerics::{DensityMatrix, ProbabilityDistribution, StateVector};

/// Environment given directly as a state over qubit sites.
#[derive(Debug, Clone)]
pub enum ExplicitEnv {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl ExplicitEnv {
    pub fn sites(&self) -> usize {
        let dim = match self {
            ExplicitEnv::Pure(psi) => psi.dim(),
            ExplicitEnv::Mixed(rho) => rho.dim(),
        };
        dim.trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        match self {
            ExplicitEnv::Pure(psi) => psi.dim(),
            ExplicitEnv::Mixed(rho) => rho.dim(),
        }
    }

    fn validate(self) -> Result<Self> {
        if !self.dim().is_power_of_two() || self.dim() < 2 {
            return Err(Error::DimMismatch(format!(
                "explicit environment dimension {} is not a power of two",
                self.dim()
            )));
        }
        Ok(self)
    }

    pub fn pure(psi: StateVector) -> Result<Self> {
        ExplicitEnv::Pure(psi).validate()
    }

    pub fn mixed(rho: DensityMatrix) -> Result<Self> {
        ExplicitEnv::Mixed(rho).validate()
    }

    /// Computational-basis diagonal, renormalized.
    pub fn dephased_diagonal(&self) -> Result<ProbabilityDistribution> {
        let weights: Vec<f64> = match self {
            ExplicitEnv::Pure(psi) => psi.amplitudes().iter().map(|z| z.norm_sqr()).collect(),
            ExplicitEnv::Mixed(rho) => rho.diagonal_populations(),
        };
        ProbabilityDistribution::from_weights(2, self.sites(), weights)
    }
}

/// Any of the supported noise-generating environments.
#[derive(Debug, Clone)]
pub enum Environment {
    Markov(MarkovEnv),
    Ising(ClassicalIsingEnv),
    Mps(Rank1MpsEnv),
    Wolf { g: f64 },
    Explicit(ExplicitEnv),
}

impl Environment {
    /// The rank-1 MPS backing this environment, when there is one.
    pub fn as_mps(&self) -> Option<Rank1MpsEnv> {
        match self {
            Environment::Mps(env) => Some(env.clone()),
            Environment::Wolf { g } => Some(wolf_env(*g)),
            _ => None,
        }
    }

    /// Dephased diagonal on `sites` sites. For explicit environments the
    /// requested site count must match the stored state.
    pub fn dephased_diagonal(&self, sites: usize) -> Result<ProbabilityDistribution> {
        match self {
            Environment::Markov(env) => env.diagonal(sites),
            Environment::Ising(env) => env.boltzmann_diagonal(sites),
            Environment::Mps(env) => env.dephased_diagonal(sites),
            Environment::Wolf { g } => wolf_env(*g).dephased_diagonal(sites),
            Environment::Explicit(env) => {
                if env.sites() != sites {
                    return Err(Error::DimMismatch(format!(
                        "explicit environment has {} sites, requested {}",
                        env.sites(),
                        sites
                    )));
                }
                env.dephased_diagonal()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;

    #[test]
    fn explicit_pure_diagonal_is_point_mass() {
        let env = ExplicitEnv::pure(StateVector::basis_state(4, 0).unwrap()).unwrap();
        let p = env.dephased_diagonal().unwrap();
        assert_eq!(p.prob(0), 1.0);
        assert_eq!(p.length(), 2);
    }

    #[test]
    fn explicit_superposition_diagonal() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::from_slice(&[c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)])
            .unwrap();
        let env = ExplicitEnv::pure(psi).unwrap();
        let p = env.dephased_diagonal().unwrap();
        assert!((p.prob(0) - 0.5).abs() < 1e-14);
        assert!((p.prob(3) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn explicit_rejects_non_power_of_two() {
        let psi = StateVector::from_slice(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!(ExplicitEnv::pure(psi).is_err());
    }

    #[test]
    fn wolf_dispatch_matches_direct_construction() {
        let env = Environment::Wolf { g: 0.5 };
        let via_enum = env.dephased_diagonal(6).unwrap();
        let direct = wolf_env(0.5).dephased_diagonal(6).unwrap();
        assert_eq!(via_enum.probs(), direct.probs());
    }
}
