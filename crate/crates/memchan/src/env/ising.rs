//! Classical Ising-chain environments at inverse temperature β.

use crate::error::{check_dim_pow, Error, Result};
use crate::numerics::{c64, ComplexMatrix, ProbabilityDistribution};

/// Nearest-neighbour Ising ring `E = Σ_i [-J s_i s_{i+1} - h (s_i+s_{i+1})/2]`
/// with spins `s ∈ {+1, -1}` (symbol 0 is spin up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalIsingEnv {
    coupling: f64,
    field: f64,
    beta: f64,
}

impl ClassicalIsingEnv {
    pub fn new(coupling: f64, field: f64, beta: f64) -> Result<Self> {
        if !(coupling.is_finite() && field.is_finite() && beta.is_finite()) {
            return Err(Error::NonFinite("Ising parameters".into()));
        }
        if beta <= 0.0 {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { coupling, field, beta })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.coupling, self.field, beta)
    }

    fn spin(symbol: usize) -> f64 {
        if symbol == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Bond energy with the field split evenly over the two bonds of a site.
    pub fn bond_energy(&self, s: f64, s_next: f64) -> f64 {
        -self.coupling * s * s_next - self.field * (s + s_next) / 2.0
    }

    /// Transfer matrix `T(s,s') = exp(-β E_bond(s,s'))`; the ring partition
    /// function is `Z_n = tr(T^n)`.
    pub fn transfer_matrix(&self) -> ComplexMatrix {
        let t = |s: f64, sp: f64| (-self.beta * self.bond_energy(s, sp)).exp();
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                c64(t(1.0, 1.0), 0.0),
                c64(t(1.0, -1.0), 0.0),
                c64(t(-1.0, 1.0), 0.0),
                c64(t(-1.0, -1.0), 0.0),
            ],
        )
    }

    /// Largest transfer-matrix eigenvalue, in closed form.
    pub fn dominant_eigenvalue(&self) -> f64 {
        let bj = self.beta * self.coupling;
        let bh = self.beta * self.field;
        bj.exp() * bh.cosh() + ((2.0 * bj).exp() * bh.sinh().powi(2) + (-2.0 * bj).exp()).sqrt()
    }

    /// Ring energy of a spin configuration given as 0/1 symbols.
    pub fn ring_energy(&self, config: &[usize]) -> f64 {
        let n = config.len();
        (0..n)
            .map(|i| self.bond_energy(Self::spin(config[i]), Self::spin(config[(i + 1) % n])))
            .sum()
    }

    /// Boltzmann distribution over ring configurations of `n` spins.
    pub fn boltzmann_diagonal(&self, sites: usize) -> Result<ProbabilityDistribution> {
        if sites == 0 {
            return Err(Error::InvalidParameter("need at least one site".into()));
        }
        let dim = check_dim_pow(2, sites)?;
        // Shift energies so the minimum maps to weight 1 (avoids overflow).
        let mut energies = Vec::with_capacity(dim);
        for idx in 0..dim {
            let config: Vec<usize> = (0..sites).map(|s| (idx >> (sites - 1 - s)) & 1).collect();
            energies.push(self.ring_energy(&config));
        }
        let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = energies.iter().map(|&e| (-self.beta * (e - min)).exp()).collect();
        ProbabilityDistribution::from_weights(2, sites, weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn free_spins_transfer_matrix() {
        let env = ClassicalIsingEnv::new(0.0, 0.0, 1.3).unwrap();
        let t = env.transfer_matrix();
        let ones = ComplexMatrix::from_element(2, 2, c64(1.0, 0.0));
        assert!(max_abs_diff(&t, &ones) < 1e-15);
        // Z_n = 2^n
        let z4: f64 = env.boltzmann_diagonal(4).unwrap().probs().iter().map(|_| 1.0).sum::<f64>();
        assert_eq!(z4, 16.0);
    }

    #[test]
    fn zero_field_eigenvalue_closed_form() {
        for (j, beta) in [(0.7, 1.1), (1.3, 0.4), (-0.5, 2.0)] {
            let env = ClassicalIsingEnv::new(j, 0.0, beta).unwrap();
            let expected = (beta * j).exp() + (-beta * j).exp();
            assert!((env.dominant_eigenvalue() - expected).abs() < 1e-12);
        }
    }

    // Oracle: Z_4 from tr(T^4) equals the exhaustive Boltzmann sum.
    #[test]
    fn partition_function_matches_exhaustive_sum() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..10 {
            let env = ClassicalIsingEnv::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.2..2.0),
            )
            .unwrap();
            let t = env.transfer_matrix();
            let t4 = (&t * &t) * (&t * &t);
            let z_trace = t4.trace().re;
            let z_sum: f64 = (0..16)
                .map(|idx| {
                    let config: Vec<usize> = (0..4).map(|s| (idx >> (3 - s)) & 1).collect();
                    (-env.beta() * env.ring_energy(&config)).exp()
                })
                .sum();
            assert!(((z_trace - z_sum) / z_sum).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_beta() {
        assert!(ClassicalIsingEnv::new(1.0, 0.0, 0.0).is_err());
        assert!(ClassicalIsingEnv::new(1.0, 0.0, -1.0).is_err());
    }
}
