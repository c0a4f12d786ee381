//! JSON run configuration: environment specs plus per-command parameters.

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::env::{ClassicalIsingEnv, Environment, ExplicitEnv, MarkovEnv, Rank1MpsEnv};
use crate::error::{Error, Result};
use crate::numerics::{c64, StateVector};

/// Complex number as a `[re, im]` pair.
pub type ComplexSpec = [f64; 2];

/// 2x2 complex matrix as row-major entry lists.
pub type MatrixSpec = [[ComplexSpec; 2]; 2];

/// Environment description as it appears in config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EnvSpec {
    Markov {
        transition: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stationary: Option<Vec<f64>>,
    },
    Ising {
        coupling: f64,
        field: f64,
        beta: f64,
    },
    Mps {
        q0: MatrixSpec,
        q1: MatrixSpec,
    },
    Wolf {
        g: f64,
    },
    Explicit {
        amplitudes: Vec<ComplexSpec>,
    },
}

impl EnvSpec {
    pub fn build(&self) -> Result<Environment> {
        match self {
            EnvSpec::Markov { transition, stationary } => {
                let m = transition.len();
                if m == 0 || transition.iter().any(|row| row.len() != m) {
                    return Err(Error::Config("markov transition matrix must be square".into()));
                }
                let flat: Vec<f64> = transition.iter().flatten().copied().collect();
                let p = DMatrix::from_row_slice(m, m, &flat);
                let env = match stationary {
                    Some(pi) => {
                        MarkovEnv::with_stationary(p, DVector::from_column_slice(pi))?
                    }
                    None => MarkovEnv::new(p)?,
                };
                Ok(Environment::Markov(env))
            }
            EnvSpec::Ising { coupling, field, beta } => {
                Ok(Environment::Ising(ClassicalIsingEnv::new(*coupling, *field, *beta)?))
            }
            EnvSpec::Mps { q0, q1 } => {
                Ok(Environment::Mps(Rank1MpsEnv::new(matrix_from_spec(q0), matrix_from_spec(q1))?))
            }
            EnvSpec::Wolf { g } => Ok(Environment::Wolf { g: *g }),
            EnvSpec::Explicit { amplitudes } => {
                let amps: Vec<_> = amplitudes.iter().map(|&[re, im]| c64(re, im)).collect();
                let psi = StateVector::from_slice(&amps)?;
                Ok(Environment::Explicit(ExplicitEnv::pure(psi)?))
            }
        }
    }
}

fn matrix_from_spec(spec: &MatrixSpec) -> Matrix2<num_complex::Complex64> {
    Matrix2::new(
        c64(spec[0][0][0], spec[0][0][1]),
        c64(spec[0][1][0], spec[0][1][1]),
        c64(spec[1][0][0], spec[1][0][1]),
        c64(spec[1][1][0], spec[1][1][1]),
    )
}

/// Rate routes selectable in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RouteName {
    #[serde(rename = "closed-transfer")]
    ClosedTransfer,
    #[serde(rename = "thermo")]
    Thermo,
    #[serde(rename = "brute")]
    Brute,
}

impl RouteName {
    pub fn column(&self) -> &'static str {
        match self {
            RouteName::ClosedTransfer => "closed-transfer",
            RouteName::Thermo => "thermo",
            RouteName::Brute => "brute",
        }
    }
}

/// Parameterized model families a sweep can scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SweepModel {
    /// Rank-1 MPS ground-state family; axis `g`.
    Wolf,
    /// Raw diagonal weights; axis one of `a`, `b`, `c`.
    Params {
        #[serde(default = "default_one")]
        a: f64,
        #[serde(default = "default_one")]
        b: f64,
        #[serde(default = "default_one")]
        c: f64,
    },
    /// Classical Ising chain; axis one of `coupling`, `field`, `beta`.
    Ising {
        #[serde(default)]
        coupling: f64,
        #[serde(default)]
        field: f64,
        #[serde(default = "default_one")]
        beta: f64,
    },
    /// Two-state chains; axis `q`.
    Markov {
        #[serde(default)]
        chain: MarkovKind,
    },
}

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkovKind {
    /// Rows all equal `(1-q, q)`.
    #[default]
    Iid,
    /// Symmetric flip chain with flip probability `q`.
    Flip,
}

/// Sweep axis: `steps` evenly spaced values over `[min, max]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: SweepModel,
    pub axis: Axis,
    pub routes: Vec<RouteName>,
    /// Ring sizes for the brute route (strictly increasing, length >= 3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brute_sites: Option<Vec<usize>>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axis.steps < 2 {
            return Err(Error::Config("axis needs at least 2 steps".into()));
        }
        if !(self.axis.min < self.axis.max) {
            return Err(Error::Config("axis min must be below max".into()));
        }
        if self.routes.is_empty() {
            return Err(Error::Config("route set must be nonempty".into()));
        }
        let axis_ok = match &self.model {
            SweepModel::Wolf => self.axis.name == "g",
            SweepModel::Params { .. } => matches!(self.axis.name.as_str(), "a" | "b" | "c"),
            SweepModel::Ising { .. } => {
                matches!(self.axis.name.as_str(), "coupling" | "field" | "beta")
            }
            SweepModel::Markov { .. } => self.axis.name == "q",
        };
        if !axis_ok {
            return Err(Error::Config(format!(
                "axis '{}' is not a parameter of this model",
                self.axis.name
            )));
        }
        if matches!(self.model, SweepModel::Markov { .. })
            && self.routes.contains(&RouteName::Thermo)
        {
            return Err(Error::Config("the thermo route is not defined for markov models".into()));
        }
        if self.routes.contains(&RouteName::Brute) {
            let sites = self
                .brute_sites
                .as_ref()
                .ok_or_else(|| Error::Config("brute route requires brute_sites".into()))?;
            if sites.len() < 3 || sites.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config(
                    "brute_sites must be strictly increasing with at least 3 entries".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Parameters for `channel` runs (flag `--n` overrides).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uses: Option<usize>,
}

/// Parameters for `forgetful` runs (flags override).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForgetfulParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub live: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sections: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacers: Option<Vec<usize>>,
}

/// One JSON document per run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<EnvSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forgetful: Option<ForgetfulParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Canonical one-line echo for report headers.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| "{}".into())
    }
}
