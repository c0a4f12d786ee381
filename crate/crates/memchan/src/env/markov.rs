//! Classical Markov-chain environments.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim_pow, Error, Result};
use crate::numerics::ProbabilityDistribution;

const ROW_SUM_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-10;

/// Stationary Markov chain: row-stochastic transition matrix plus a
/// stationary distribution.
#[derive(Debug, Clone)]
pub struct MarkovEnv {
    transition: DMatrix<f64>,
    stationary: DVector<f64>,
}

impl MarkovEnv {
    /// Builds from a transition matrix, computing a stationary distribution
    /// by damped power iteration.
    pub fn new(transition: DMatrix<f64>) -> Result<Self> {
        validate_transition(&transition)?;
        let m = transition.nrows();
        let mut pi = DVector::from_element(m, 1.0 / m as f64);
        // The (P + I)/2 damping keeps periodic chains convergent and has the
        // same stationary set.
        for _ in 0..200_000 {
            let next = (transition.tr_mul(&pi) + &pi) * 0.5;
            let next = &next / next.sum();
            let delta = (&next - &pi).abs().sum();
            pi = next;
            if delta < 1e-15 {
                break;
            }
        }
        Self::with_stationary(transition, pi)
    }

    /// Builds from a transition matrix and an explicitly supplied stationary
    /// distribution (needed for reducible chains, where the stationary
    /// distribution is not unique).
    pub fn with_stationary(transition: DMatrix<f64>, stationary: DVector<f64>) -> Result<Self> {
        validate_transition(&transition)?;
        if stationary.len() != transition.nrows() {
            return Err(Error::DimMismatch("stationary length vs transition size".into()));
        }
        if stationary.iter().any(|&p| !p.is_finite() || p < -1e-12) {
            return Err(Error::InvalidDistribution("stationary entries must be nonnegative".into()));
        }
        let sum = stationary.sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!("stationary sums to {sum}")));
        }
        let stationary = stationary / sum;
        let residual = (transition.tr_mul(&stationary) - &stationary).abs().max();
        if residual > STATIONARY_TOL {
            return Err(Error::InvalidDistribution(format!(
                "pi P = pi violated by {residual:.3e}"
            )));
        }
        Ok(Self { transition, stationary })
    }

    /// Chain whose rows are all equal: i.i.d. symbols.
    pub fn iid(row: &[f64]) -> Result<Self> {
        let m = row.len();
        let transition = DMatrix::from_fn(m, m, |_, j| row[j]);
        let stationary = DVector::from_column_slice(row);
        Self::with_stationary(transition, stationary)
    }

    /// Two-state symmetric flip chain with flip probability `q`.
    pub fn symmetric_flip(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("flip probability {q}")));
        }
        let transition = DMatrix::from_row_slice(2, 2, &[1.0 - q, q, q, 1.0 - q]);
        let stationary = DVector::from_column_slice(&[0.5, 0.5]);
        Self::with_stationary(transition, stationary)
    }

    pub fn state_count(&self) -> usize {
        self.transition.nrows()
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn stationary(&self) -> &DVector<f64> {
        &self.stationary
    }

    /// Path distribution `p(s1..sn) = π(s1) Π P(s_k, s_{k+1})`.
    pub fn diagonal(&self, sites: usize) -> Result<ProbabilityDistribution> {
        if sites == 0 {
            return Err(Error::InvalidParameter("need at least one site".into()));
        }
        let m = self.state_count();
        let dim = check_dim_pow(m, sites)?;
        let mut probs = vec![0.0; dim];
        for (idx, slot) in probs.iter_mut().enumerate() {
            let mut digits = vec![0usize; sites];
            let mut rem = idx;
            for d in digits.iter_mut().rev() {
                *d = rem % m;
                rem /= m;
            }
            let mut p = self.stationary[digits[0]];
            for w in digits.windows(2) {
                p *= self.transition[(w[0], w[1])];
            }
            *slot = p;
        }
        ProbabilityDistribution::new(m, sites, probs)
    }
}

fn validate_transition(p: &DMatrix<f64>) -> Result<()> {
    if p.nrows() != p.ncols() || p.nrows() == 0 {
        return Err(Error::DimMismatch("transition matrix must be square and nonempty".into()));
    }
    for i in 0..p.nrows() {
        let mut sum = 0.0;
        for j in 0..p.ncols() {
            let v = p[(i, j)];
            if !v.is_finite() || v < -1e-14 {
                return Err(Error::InvalidDistribution(format!("transition entry ({i},{j}) = {v}")));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("row {i} sums to {sum}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn iid_rows_factorize() {
        let env = MarkovEnv::iid(&[0.9, 0.1]).unwrap();
        let p = env.diagonal(3).unwrap();
        for idx in 0..8 {
            let digits = p.symbols_of(idx);
            let expected: f64 = digits.iter().map(|&d| if d == 0 { 0.9 } else { 0.1 }).product();
            assert!((p.prob(idx) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn frozen_chain_masses_on_constant_strings() {
        let identity = DMatrix::identity(2, 2);
        let env = MarkovEnv::with_stationary(identity, DVector::from_column_slice(&[0.3, 0.7])).unwrap();
        let p = env.diagonal(4).unwrap();
        assert!((p.prob(0) - 0.3).abs() < 1e-14);
        assert!((p.prob(15) - 0.7).abs() < 1e-14);
        assert!((1..15).all(|i| p.prob(i) == 0.0));
    }

    #[test]
    fn random_chain_normalizes_and_is_stationary() {
        let mut rng = StdRng::seed_from_u64(51);
        for _ in 0..10 {
            let raw: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..1.0)).collect();
            let transition = DMatrix::from_row_slice(
                2,
                2,
                &[
                    raw[0] / (raw[0] + raw[1]),
                    raw[1] / (raw[0] + raw[1]),
                    raw[2] / (raw[2] + raw[3]),
                    raw[3] / (raw[2] + raw[3]),
                ],
            );
            let env = MarkovEnv::new(transition).unwrap();
            let p = env.diagonal(6).unwrap();
            let total: f64 = p.probs().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            // marginal at every site equals the stationary distribution
            for site in 0..6 {
                let marg = p.site_marginal(site).unwrap();
                assert!((marg[0] - env.stationary()[0]).abs() < 1e-10);
                assert!((marg[1] - env.stationary()[1]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn periodic_chain_stationary_found() {
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let env = MarkovEnv::new(swap).unwrap();
        assert!((env.stationary()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.5, 0.4, 0.5, 0.5]);
        assert!(MarkovEnv::new(bad).is_err());
    }
}
