//! Probability distributions over fixed-length strings from a d-ary alphabet.

use crate::error::{check_dim_pow, Error, Result};

const PROB_SUM_TOL: f64 = 1e-10;
const PROB_NEG_TOL: f64 = 1e-12;

/// Distribution over all `alphabet^length` strings, indexed with the first
/// symbol most significant (tensor-product order).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    alphabet: usize,
    length: usize,
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Validates and renormalizes. Entries in `[-1e-12, 0)` are clipped to 0;
    /// anything more negative is rejected.
    pub fn new(alphabet: usize, length: usize, mut probs: Vec<f64>) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::InvalidDistribution("alphabet must have at least 2 symbols".into()));
        }
        if length == 0 {
            return Err(Error::InvalidDistribution("string length must be positive".into()));
        }
        let expected = check_dim_pow(alphabet, length)?;
        if probs.len() != expected {
            return Err(Error::InvalidDistribution(format!(
                "expected {} entries for alphabet {} length {}, got {}",
                expected,
                alphabet,
                length,
                probs.len()
            )));
        }
        let mut sum = 0.0;
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution("non-finite probability".into()));
            }
            if *p < -PROB_NEG_TOL {
                return Err(Error::InvalidDistribution(format!("negative probability {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
            sum += *p;
        }
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {sum}")));
        }
        for p in probs.iter_mut() {
            *p /= sum;
        }
        Ok(Self { alphabet, length, probs })
    }

    /// Builds from unnormalized nonnegative weights.
    pub fn from_weights(alphabet: usize, length: usize, weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() || sum <= 0.0 {
            return Err(Error::InvalidDistribution(format!("weight sum {sum}")));
        }
        let probs = weights.into_iter().map(|w| w / sum).collect();
        Self::new(alphabet, length, probs)
    }

    pub fn point_mass(alphabet: usize, length: usize, symbols: &[usize]) -> Result<Self> {
        let dim = check_dim_pow(alphabet, length)?;
        if symbols.len() != length {
            return Err(Error::InvalidDistribution("symbol string has wrong length".into()));
        }
        let mut probs = vec![0.0; dim];
        let idx = index_of(alphabet, symbols)?;
        probs[idx] = 1.0;
        Self::new(alphabet, length, probs)
    }

    pub fn uniform(alphabet: usize, length: usize) -> Result<Self> {
        let dim = check_dim_pow(alphabet, length)?;
        Self::new(alphabet, length, vec![1.0 / dim as f64; dim])
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn index_of(&self, symbols: &[usize]) -> Result<usize> {
        if symbols.len() != self.length {
            return Err(Error::InvalidDistribution("symbol string has wrong length".into()));
        }
        index_of(self.alphabet, symbols)
    }

    /// Digits of `index`, first symbol most significant.
    pub fn symbols_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.length];
        for slot in out.iter_mut().rev() {
            *slot = index % self.alphabet;
            index /= self.alphabet;
        }
        out
    }

    /// Shannon entropy in bits, with `0 log 0 := 0`.
    pub fn shannon_entropy(&self) -> f64 {
        // + 0.0 normalizes the signed zero a point mass produces
        self.probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum::<f64>() + 0.0
    }

    /// Marginal distribution of a single site.
    pub fn site_marginal(&self, site: usize) -> Result<Vec<f64>> {
        if site >= self.length {
            return Err(Error::DimMismatch(format!("site {site} out of range")));
        }
        let mut out = vec![0.0; self.alphabet];
        let stride = self.alphabet.pow((self.length - 1 - site) as u32);
        for (idx, &p) in self.probs.iter().enumerate() {
            out[(idx / stride) % self.alphabet] += p;
        }
        Ok(out)
    }
}

fn index_of(alphabet: usize, symbols: &[usize]) -> Result<usize> {
    let mut idx = 0usize;
    for &s in symbols {
        if s >= alphabet {
            return Err(Error::InvalidDistribution(format!("symbol {s} out of alphabet range")));
        }
        idx = idx * alphabet + s;
    }
    Ok(idx)
}
