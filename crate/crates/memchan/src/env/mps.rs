//! Rank-1 matrix product environments on a ring.
//!
//! A translation-invariant MPS over qubits is fixed by two 2x2 matrices Q0,
//! Q1; the amplitude of a configuration is the trace of the corresponding
//! matrix product around the ring. When both matrices are rank 1, the
//! dephased diagonal of the state is a classical Ising-chain measure whose
//! only parameters are three nonnegative scalars `(a, b, c)`.

use nalgebra::{DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{check_dim_pow, Error, Result};
use crate::numerics::{c64, ComplexMatrix, ProbabilityDistribution, StateVector};

const RANK_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;

/// Rank-1 MPS environment with periodic boundary.
#[derive(Debug, Clone)]
pub struct Rank1MpsEnv {
    q0: Matrix2<Complex64>,
    q1: Matrix2<Complex64>,
}

impl Rank1MpsEnv {
    /// Both matrices must be rank 1: second singular value below
    /// `1e-10` times the first.
    pub fn new(q0: Matrix2<Complex64>, q1: Matrix2<Complex64>) -> Result<Self> {
        for (name, m) in [("Q0", &q0), ("Q1", &q1)] {
            if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(format!("{name} entries")));
            }
            let (s1, s2) = singular_values_2x2(m);
            if s1 <= 0.0 {
                return Err(Error::NotRankOne(0.0));
            }
            if s2 > RANK_TOL * s1 {
                return Err(Error::NotRankOne(s2 / s1));
            }
        }
        Ok(Self { q0, q1 })
    }

    pub fn q0(&self) -> &Matrix2<Complex64> {
        &self.q0
    }

    pub fn q1(&self) -> &Matrix2<Complex64> {
        &self.q1
    }

    /// Ring state `|ψ⟩ ∝ Σ tr{Q_{i1}…Q_{iN}} |i1…iN⟩`.
    pub fn state_vector(&self, sites: usize) -> Result<StateVector> {
        if sites < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 sites, got {sites}")));
        }
        let dim = check_dim_pow(2, sites)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        // Depth-first accumulation of prefix products; index grows binary
        // with the first site most significant.
        let mut stack: Vec<(usize, usize, Matrix2<Complex64>)> =
            vec![(1, 0, self.q0), (1, 1, self.q1)];
        while let Some((depth, idx, prod)) = stack.pop() {
            if depth == sites {
                amps[idx] = prod.trace();
            } else {
                stack.push((depth + 1, idx << 1, prod * self.q0));
                stack.push((depth + 1, (idx << 1) | 1, prod * self.q1));
            }
        }
        StateVector::from_slice(&amps)
    }

    /// Computational-basis diagonal of the ring state, renormalized.
    pub fn dephased_diagonal(&self, sites: usize) -> Result<ProbabilityDistribution> {
        if sites == 1 {
            // one-site ring: amplitudes are the bare matrix traces
            let weights = vec![self.q0.trace().norm_sqr(), self.q1.trace().norm_sqr()];
            return ProbabilityDistribution::from_weights(2, 1, weights);
        }
        let psi = self.state_vector(sites)?;
        let weights: Vec<f64> = psi.amplitudes().iter().map(|z| z.norm_sqr()).collect();
        ProbabilityDistribution::from_weights(2, sites, weights)
    }

    /// The scalars `(a, b, c)` that determine the dephased diagonal:
    /// `a = |tr Q0|²`, `b = |tr Q1|²`, `c = |tr(Q0 Q1)|² / (ab)` — the
    /// nonzero eigenvalues of `A0 = Q0⊗Q0*`, `A1 = Q1⊗Q1*` and of the
    /// idempotent product `Ã0 Ã1`.
    pub fn abc_params(&self) -> Result<DiagonalParams> {
        let scale0 = self.q0.norm();
        let scale1 = self.q1.norm();
        let t0 = self.q0.trace();
        let t1 = self.q1.trace();
        if t0.norm() < TRACE_TOL * scale0 {
            return Err(Error::DegenerateEnvironment("tr Q0 vanishes, a undefined".into()));
        }
        if t1.norm() < TRACE_TOL * scale1 {
            return Err(Error::DegenerateEnvironment("tr Q1 vanishes, b undefined".into()));
        }
        let a = t0.norm_sqr();
        let b = t1.norm_sqr();
        let c = (self.q0 * self.q1).trace().norm_sqr() / (a * b);
        DiagonalParams::new(a, b, c)
    }
}

fn singular_values_2x2(m: &Matrix2<Complex64>) -> (f64, f64) {
    // The largest singular value comes from M†M; the smallest from
    // σ1 σ2 = |det M|, which avoids the cancellation that squaring
    // introduces near rank deficiency.
    let g = m.adjoint() * m;
    let tr = g.trace().re;
    let det_g = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re.max(0.0);
    let disc = (tr * tr / 4.0 - det_g).max(0.0).sqrt();
    let s1 = (tr / 2.0 + disc).max(0.0).sqrt();
    let det_m = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm();
    let s2 = if s1 > 0.0 { det_m / s1 } else { 0.0 };
    (s1, s2)
}

/// Unnormalized weights of the dephased diagonal, reduced to three scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl DiagonalParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite("diagonal params".into()));
        }
        if a <= 0.0 || b <= 0.0 {
            return Err(Error::InvalidParameter(format!("a and b must be positive, got a={a} b={b}")));
        }
        if c < 0.0 {
            return Err(Error::InvalidParameter(format!("c must be nonnegative, got {c}")));
        }
        Ok(Self { a, b, c })
    }

    /// Unnormalized weight of a ring configuration with `zeros` zero-sites
    /// out of `sites` and `walls` block boundaries: `a^l b^(N-l) c^(K/2)`.
    /// Each adjacent (0-block, 1-block) pair contributes one factor of `c`,
    /// so the exponent is half the (even) wall count.
    pub fn weight(&self, zeros: usize, sites: usize, walls: usize) -> Result<f64> {
        if zeros > sites {
            return Err(Error::InvalidParameter(format!("{zeros} zeros on {sites} sites")));
        }
        if walls % 2 != 0 {
            return Err(Error::OddWallCount(walls));
        }
        let uniform = zeros == 0 || zeros == sites;
        if walls == 0 && !uniform {
            return Err(Error::InvalidParameter(
                "a mixed ring configuration must have at least two walls".into(),
            ));
        }
        if walls > 0 && uniform {
            return Err(Error::InvalidParameter(
                "a uniform ring configuration has no walls".into(),
            ));
        }
        Ok(self.a.powi(zeros as i32)
            * self.b.powi((sites - zeros) as i32)
            * self.c.powi((walls / 2) as i32))
    }

    /// Weight of an explicit ring configuration (0/1 symbols).
    pub fn config_weight(&self, config: &[usize]) -> Result<f64> {
        let sites = config.len();
        let zeros = config.iter().filter(|&&s| s == 0).count();
        let walls = (0..sites).filter(|&i| config[i] != config[(i + 1) % sites]).count();
        self.weight(zeros, sites, walls)
    }

    /// The 2x2 transfer matrix `T = [[a, √(cab)], [√(cab), b]]` whose ring
    /// trace `tr(T^N)` is the normalization `C(N)`.
    pub fn transfer_matrix(&self) -> ComplexMatrix {
        let w = (self.c * self.a * self.b).sqrt();
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[c64(self.a, 0.0), c64(w, 0.0), c64(w, 0.0), c64(self.b, 0.0)],
        )
    }

    /// Transfer-matrix eigenvalues `(λ+, λ-)`.
    pub fn transfer_eigenvalues(&self) -> (f64, f64) {
        let w2 = self.c * self.a * self.b;
        let mean = (self.a + self.b) / 2.0;
        let disc = ((self.a - self.b) / 2.0).powi(2) + w2;
        let root = disc.sqrt();
        (mean + root, mean - root)
    }

    /// Ring normalization `C(N) = tr(T^N) = λ+^N + λ-^N`.
    pub fn ring_normalization(&self, sites: usize) -> f64 {
        let (lp, lm) = self.transfer_eigenvalues();
        lp.powi(sites as i32) + lm.powi(sites as i32)
    }
}

/// The rank-1 MPS whose ring state is a ground state of the spin chain
/// `Σ_i 2(g²-1) σz σz - (1+g)² σx + (g-1)² σz σx σz` (three consecutive
/// sites for the last term). The matrices give `(a, b, c) = (1, 1, g²)`.
pub fn wolf_env(g: f64) -> Rank1MpsEnv {
    let q0 = Matrix2::new(c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0));
    let q1 = Matrix2::new(c64(1.0, 0.0), c64(g, 0.0), c64(0.0, 0.0), c64(0.0, 0.0));
    let env = Rank1MpsEnv::new(q0, q1).expect("wolf matrices are rank-1 for every g");
    debug_assert!(env.abc_params().map(|p| p.c >= 0.0).unwrap_or(false));
    env
}

/// Dense vector of all ring-configuration weights (index = binary config),
/// useful for exhaustive cross-checks.
pub fn enumerate_ring_weights(params: &DiagonalParams, sites: usize) -> Result<DVector<f64>> {
    let dim = check_dim_pow(2, sites)?;
    let mut out = DVector::zeros(dim);
    for idx in 0..dim {
        let config: Vec<usize> = (0..sites).map(|s| (idx >> (sites - 1 - s)) & 1).collect();
        out[idx] = params.config_weight(&config)?;
    }
    Ok(out)
}
