//! Correlated dephasing channels at finite use counts, their Choi states,
//! and the capacity bookkeeping built on them.
//!
//! A channel here is a probabilistic mixture of unitaries. The dephasing
//! family applies a string of diagonal phase unitaries `Z(k)` with the
//! (correlated) string probabilities taken from an environment diagonal;
//! the Pauli-mixture family covers general shift-and-phase strings, which
//! is what the teleportation argument needs.

mod teleport;

pub use teleport::{
    all_outcomes, sample_outcome, teleport_through_choi, TeleportOutcome, TeleportationRecord,
};

use num_complex::Complex64;

use crate::error::{check_dim, check_dim_pow, Error, Result};
use crate::numerics::{
    c64, hermitian_eigen, kron, partial_trace, von_neumann_entropy, ComplexMatrix, DensityMatrix,
    ProbabilityDistribution, StateVector,
};
use crate::rates::EntropyRateResult;

/// Diagonal phase unitary `Z(k) = Σ_r exp(2πi k r / d) |r⟩⟨r|` with
/// `1 ≤ k ≤ d`; `Z(d)` is the identity.
pub fn z_unitary(d: usize, k: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    if k < 1 || k > d {
        return Err(Error::InvalidParameter(format!("phase index {k} outside 1..={d}")));
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let angle = 2.0 * std::f64::consts::PI * (k as f64) * (r as f64) / d as f64;
        m[(r, r)] = Complex64::from_polar(1.0, angle);
    }
    Ok(m)
}

/// Cyclic shift `X |r⟩ = |r+1 mod d⟩` raised to `power`.
pub fn weyl_shift(d: usize, power: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        m[((r + power) % d, r)] = c64(1.0, 0.0);
    }
    m
}

/// Phase operator `Z |r⟩ = ω^r |r⟩` raised to `power` (`ω = e^{2πi/d}`).
pub fn weyl_phase(d: usize, power: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let angle = 2.0 * std::f64::consts::PI * (power as f64) * (r as f64) / d as f64;
        m[(r, r)] = Complex64::from_polar(1.0, angle);
    }
    m
}

/// A random-unitary channel: a probability-weighted family of unitaries on
/// `n` uses of a `d`-level system.
pub trait UnitaryMixture {
    fn level_count(&self) -> usize;
    fn uses(&self) -> usize;
    /// The weighted unitary terms. Zero-probability terms may be omitted.
    fn terms(&self) -> Result<Vec<(f64, ComplexMatrix)>>;

    fn system_dim(&self) -> usize {
        self.level_count().pow(self.uses() as u32)
    }
}

/// Dephasing memory channel: weights over d-ary strings `k`, Kraus set
/// `{√p_k Z(k1)⊗…⊗Z(kn)}`. Weight symbol `s` maps to phase index `k = s+1`,
/// so the all-`(d-1)` string is the identity element.
#[derive(Debug, Clone)]
pub struct CorrelatedDephasingChannel {
    weights: ProbabilityDistribution,
}

impl CorrelatedDephasingChannel {
    pub fn new(weights: ProbabilityDistribution) -> Result<Self> {
        check_dim_pow(weights.alphabet(), weights.length())?;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &ProbabilityDistribution {
        &self.weights
    }

    /// Phase-string unitary for one weight index.
    fn string_unitary(&self, index: usize) -> Result<ComplexMatrix> {
        let d = self.weights.alphabet();
        let mut out = ComplexMatrix::identity(1, 1);
        for s in self.weights.symbols_of(index) {
            out = kron(&out, &z_unitary(d, s + 1)?)?;
        }
        Ok(out)
    }
}

/// Builds a dephasing channel after checking the weights describe `d`-ary
/// strings.
pub fn build_channel(
    weights: ProbabilityDistribution,
    d: usize,
) -> Result<CorrelatedDephasingChannel> {
    if weights.alphabet() != d {
        return Err(Error::DimMismatch(format!(
            "weights are over {}-ary strings, channel wants d = {}",
            weights.alphabet(),
            d
        )));
    }
    CorrelatedDephasingChannel::new(weights)
}

impl UnitaryMixture for CorrelatedDephasingChannel {
    fn level_count(&self) -> usize {
        self.weights.alphabet()
    }

    fn uses(&self) -> usize {
        self.weights.length()
    }

    fn terms(&self) -> Result<Vec<(f64, ComplexMatrix)>> {
        let mut out = Vec::new();
        for idx in 0..self.weights.len() {
            let p = self.weights.prob(idx);
            if p > 0.0 {
                out.push((p, self.string_unitary(idx)?));
            }
        }
        Ok(out)
    }
}

/// One weighted generalized-Pauli string `X^{a_i} Z^{b_i}` per site.
#[derive(Debug, Clone)]
pub struct PauliTerm {
    pub probability: f64,
    pub shifts: Vec<usize>,
    pub phases: Vec<usize>,
}

/// Mixture of generalized-Pauli strings on `n` uses of a `d`-level system.
#[derive(Debug, Clone)]
pub struct PauliMixtureChannel {
    d: usize,
    n: usize,
    terms: Vec<PauliTerm>,
}

impl PauliMixtureChannel {
    pub fn new(d: usize, n: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if d < 2 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "need d >= 2 and n >= 1, got d={d} n={n}"
            )));
        }
        check_dim_pow(d, n)?;
        let mut sum = 0.0;
        for t in &terms {
            if t.shifts.len() != n || t.phases.len() != n {
                return Err(Error::InvalidParameter("Pauli label length mismatch".into()));
            }
            if t.shifts.iter().chain(t.phases.iter()).any(|&x| x >= d) {
                return Err(Error::InvalidParameter("Pauli label out of range".into()));
            }
            if !(t.probability.is_finite() && t.probability >= 0.0) {
                return Err(Error::InvalidParameter(format!("bad probability {}", t.probability)));
            }
            sum += t.probability;
        }
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!("Pauli weights sum to {sum}")));
        }
        let terms = terms
            .into_iter()
            .map(|mut t| {
                t.probability /= sum;
                t
            })
            .collect();
        Ok(Self { d, n, terms })
    }

    /// Weights as a distribution over per-site labels `a·d + b` (alphabet
    /// `d²`), for entropy bookkeeping.
    pub fn weight_distribution(&self) -> Result<ProbabilityDistribution> {
        let alphabet = self.d * self.d;
        let dim = check_dim_pow(alphabet, self.n)?;
        let mut probs = vec![0.0; dim];
        for t in &self.terms {
            let mut idx = 0usize;
            for (&a, &b) in t.shifts.iter().zip(t.phases.iter()) {
                idx = idx * alphabet + (a * self.d + b);
            }
            probs[idx] += t.probability;
        }
        ProbabilityDistribution::new(alphabet, self.n, probs)
    }
}

impl UnitaryMixture for PauliMixtureChannel {
    fn level_count(&self) -> usize {
        self.d
    }

    fn uses(&self) -> usize {
        self.n
    }

    fn terms(&self) -> Result<Vec<(f64, ComplexMatrix)>> {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.probability == 0.0 {
                continue;
            }
            let mut u = ComplexMatrix::identity(1, 1);
            for (&a, &b) in t.shifts.iter().zip(t.phases.iter()) {
                let site = weyl_shift(self.d, a) * weyl_phase(self.d, b);
                u = kron(&u, &site)?;
            }
            out.push((t.probability, u));
        }
        Ok(out)
    }
}

/// Applies the channel to a density matrix: `Σ_k p_k U_k ρ U_k†`.
pub fn apply_channel<C: UnitaryMixture>(ch: &C, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.system_dim() {
        return Err(Error::DimMismatch(format!(
            "input dim {} vs channel dim {}",
            rho.dim(),
            ch.system_dim()
        )));
    }
    DensityMatrix::new(apply_to_matrix(ch, rho.matrix())?)
}

/// Linear action of the channel on an arbitrary matrix block.
pub fn apply_to_matrix<C: UnitaryMixture>(ch: &C, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = ch.system_dim();
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimMismatch(format!(
            "block is {}x{}, channel dim {dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (p, u) in ch.terms()? {
        out += (&u * m * u.adjoint()) * c64(p, 0.0);
    }
    Ok(out)
}

/// Choi–Jamiolkowski state `(I ⊗ E)(|+⟩⟨+|)`, ordered reference ⊗ output.
#[derive(Debug, Clone)]
pub struct ChoiState {
    d: usize,
    n: usize,
    state: DensityMatrix,
}

impl ChoiState {
    const MARGINAL_TOL: f64 = 1e-10;

    /// Validates the dimension bookkeeping and that the reference marginal
    /// is maximally mixed.
    pub fn new(d: usize, n: usize, state: DensityMatrix) -> Result<Self> {
        let sys = check_dim_pow(d, n)?;
        if state.dim() != sys * sys {
            return Err(Error::DimMismatch(format!(
                "Choi state dim {} vs (d^n)^2 = {}",
                state.dim(),
                sys * sys
            )));
        }
        let reference = partial_trace(&state, &[sys, sys], &[0])?;
        let mixed = DensityMatrix::maximally_mixed(sys)?;
        let defect = crate::numerics::max_abs_diff(reference.matrix(), mixed.matrix());
        if defect > Self::MARGINAL_TOL {
            return Err(Error::InvalidParameter(format!(
                "reference marginal deviates from maximally mixed by {defect:.3e}"
            )));
        }
        Ok(Self { d, n, state })
    }

    pub fn level_count(&self) -> usize {
        self.d
    }

    pub fn uses(&self) -> usize {
        self.n
    }

    pub fn system_dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    /// Reconstructs the channel action from the Choi state:
    /// `E(ρ) = D Σ_{ij} ρ(i,j) J_block(i,j)`.
    pub fn channel_action(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let dim = self.system_dim();
        if rho.dim() != dim {
            return Err(Error::DimMismatch(format!(
                "input dim {} vs channel dim {dim}",
                rho.dim()
            )));
        }
        let j = self.state.matrix();
        let r = rho.matrix();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for b in 0..dim {
            for bp in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..dim {
                    for jdx in 0..dim {
                        acc += r[(i, jdx)] * j[(i * dim + b, jdx * dim + bp)];
                    }
                }
                out[(b, bp)] = acc * c64(dim as f64, 0.0);
            }
        }
        DensityMatrix::new(out)
    }

    /// Largest entry modulus outside the maximally correlated `(ii, jj)`
    /// pattern. Dephasing-channel Choi states keep this at roundoff scale.
    pub fn max_off_pattern_entry(&self) -> f64 {
        let dim = self.system_dim();
        let j = self.state.matrix();
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for b in 0..dim {
                for k in 0..dim {
                    for bp in 0..dim {
                        if i == b && k == bp {
                            continue;
                        }
                        worst = worst.max(j[(i * dim + b, k * dim + bp)].norm());
                    }
                }
            }
        }
        worst
    }
}

/// Builds the Choi state of a channel.
pub fn choi_state<C: UnitaryMixture>(ch: &C) -> Result<ChoiState> {
    let dim = ch.system_dim();
    check_dim(dim * dim)?;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut acc = ComplexMatrix::zeros(dim * dim, dim * dim);
    for (p, u) in ch.terms()? {
        // (I ⊗ U)|+⟩ has amplitude U(j, i)/√D at |i⟩|j⟩
        let mut v = nalgebra::DVector::from_element(dim * dim, Complex64::new(0.0, 0.0));
        for i in 0..dim {
            for j in 0..dim {
                v[i * dim + j] = u[(j, i)] * c64(scale, 0.0);
            }
        }
        for r in 0..dim * dim {
            for s in 0..dim * dim {
                acc[(r, s)] += v[r] * v[s].conj() * c64(p, 0.0);
            }
        }
    }
    ChoiState::new(ch.level_count(), ch.uses(), DensityMatrix::new(acc)?)
}

/// Hashing bound `D1 = S(tr_B J) - S(J)` in ebits. May be negative for very
/// noisy channels; callers floor at zero where an operational capacity is
/// reported.
pub fn hashing_bound(j: &ChoiState) -> Result<f64> {
    let sys = j.system_dim();
    let reference = partial_trace(j.state(), &[sys, sys], &[0])?;
    Ok(von_neumann_entropy(&reference) - von_neumann_entropy(j.state()))
}

/// Coherent information `S(E(ρ)) - S((I⊗E)(|ψ⟩⟨ψ|))` using the spectral
/// purification of `ρ`. At the maximally mixed input this equals the hashing
/// bound of the Choi state.
pub fn coherent_information<C: UnitaryMixture>(ch: &C, rho: &DensityMatrix) -> Result<f64> {
    let dim = ch.system_dim();
    if rho.dim() != dim {
        return Err(Error::DimMismatch(format!(
            "input dim {} vs channel dim {dim}",
            rho.dim()
        )));
    }
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let mut amps = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (i, &l) in vals.iter().enumerate() {
        let weight = l.max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        for j in 0..dim {
            amps[i * dim + j] = vecs[(j, i)] * c64(weight, 0.0);
        }
    }
    let purified = StateVector::from_slice(&amps)?;
    coherent_information_from_purification(ch, &purified)
}

/// Coherent information evaluated on an explicit purification living on
/// reference ⊗ system.
pub fn coherent_information_from_purification<C: UnitaryMixture>(
    ch: &C,
    purified: &StateVector,
) -> Result<f64> {
    let dim = ch.system_dim();
    if purified.dim() % dim != 0 {
        return Err(Error::DimMismatch(format!(
            "purification dim {} is not a multiple of system dim {dim}",
            purified.dim()
        )));
    }
    let ref_dim = purified.dim() / dim;
    let rho_sys = crate::numerics::reduced_from_state(purified, &[ref_dim, dim], &[1])?;
    let s_out = von_neumann_entropy(&apply_channel(ch, &rho_sys)?);

    let total = purified.dim();
    check_dim(total)?;
    let amps = purified.amplitudes();
    let mut joint = ComplexMatrix::zeros(total, total);
    for (p, u) in ch.terms()? {
        // (I ⊗ U)|ψ⟩ blockwise over the reference index
        let mut w = nalgebra::DVector::from_element(total, Complex64::new(0.0, 0.0));
        for r in 0..ref_dim {
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for jp in 0..dim {
                    acc += u[(j, jp)] * amps[r * dim + jp];
                }
                w[r * dim + j] = acc;
            }
        }
        for x in 0..total {
            for y in 0..total {
                joint[(x, y)] += w[x] * w[y].conj() * c64(p, 0.0);
            }
        }
    }
    let s_joint = von_neumann_entropy(&DensityMatrix::new(joint)?);
    Ok(s_out - s_joint)
}

/// Capacity value with a flag recording whether the raw quantity was
/// negative and floored to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    pub value: f64,
    pub floored: bool,
}

/// `Q = log2(d) - rate`, floored at zero.
pub fn capacity_from_rate(rate: &EntropyRateResult, d: usize) -> Capacity {
    let raw = (d as f64).log2() - rate.rate;
    if raw < 0.0 {
        Capacity { value: 0.0, floored: true }
    } else {
        Capacity { value: raw, floored: false }
    }
}

/// Random-unitary lower bound `log2(d) - S(weights)/n`. Reported raw: a
/// negative value means the bound is vacuous.
pub fn random_unitary_lower_bound(weights: &ProbabilityDistribution, d: usize) -> f64 {
    (d as f64).log2() - weights.shannon_entropy() / weights.length() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::wolf_env;
    use crate::numerics::{identity, max_abs_diff, trace_norm_distance};
    use crate::rates::{RateDiagnostics, Route};
    use nalgebra::DVector;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_density(rng: &mut StdRng, dim: usize) -> DensityMatrix {
        let a = ComplexMatrix::from_fn(dim, dim, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let m = &a * a.adjoint();
        let tr = m.trace().re;
        DensityMatrix::new(m / c64(tr, 0.0)).unwrap()
    }

    fn random_weights(rng: &mut StdRng, d: usize, n: usize) -> ProbabilityDistribution {
        let dim = d.pow(n as u32);
        let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.01..1.0)).collect();
        ProbabilityDistribution::from_weights(d, n, w).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&StateVector::from_slice(&[c64(s, 0.0), c64(s, 0.0)]).unwrap())
    }

    fn dephasing_qubit() -> CorrelatedDephasingChannel {
        build_channel(ProbabilityDistribution::uniform(2, 1).unwrap(), 2).unwrap()
    }

    fn identity_qubit() -> CorrelatedDephasingChannel {
        build_channel(ProbabilityDistribution::point_mass(2, 1, &[1]).unwrap(), 2).unwrap()
    }

    #[test]
    fn z_unitary_qubit_cases() {
        let z1 = z_unitary(2, 1).unwrap();
        assert!((z1[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((z1[(1, 1)] - c64(-1.0, 0.0)).norm() < 1e-15);
        let z2 = z_unitary(2, 2).unwrap();
        assert!(max_abs_diff(&z2, &identity(2)) < 1e-15);
        assert!(z_unitary(2, 0).is_err());
        assert!(z_unitary(2, 3).is_err());
    }

    #[test]
    fn z_unitary_qutrit_roots_of_unity() {
        let z = z_unitary(3, 1).unwrap();
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((z[(1, 1)] - omega).norm() < 1e-15);
        assert!((z[(2, 2)] - omega * omega).norm() < 1e-15);
        let u = &z * z.adjoint();
        assert!(max_abs_diff(&u, &identity(3)) < 1e-14);
    }

    #[test]
    fn kraus_completeness() {
        let mut rng = StdRng::seed_from_u64(71);
        for (d, n) in [(2, 1), (2, 2), (3, 1), (2, 3)] {
            let ch = build_channel(random_weights(&mut rng, d, n), d).unwrap();
            let dim = ch.system_dim();
            let mut sum = ComplexMatrix::zeros(dim, dim);
            for (p, u) in ch.terms().unwrap() {
                sum += u.adjoint() * &u * c64(p, 0.0);
            }
            assert!(max_abs_diff(&sum, &identity(dim)) < 1e-10);
        }
    }

    #[test]
    fn identity_channel_fixes_states() {
        let mut rng = StdRng::seed_from_u64(72);
        let ch = identity_qubit();
        let rho = random_density(&mut rng, 2);
        let out = apply_channel(&ch, &rho).unwrap();
        assert!(trace_norm_distance(&out, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn complete_dephasing_kills_coherences() {
        let ch = dephasing_qubit();
        let out = apply_channel(&ch, &plus_state()).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(trace_norm_distance(&out, &mixed).unwrap() < 1e-12);
    }

    #[test]
    fn wolf_weight_channel_is_even_in_g() {
        let w_plus = wolf_env(0.6).dephased_diagonal(2).unwrap();
        let w_minus = wolf_env(-0.6).dephased_diagonal(2).unwrap();
        for i in 0..w_plus.len() {
            assert!((w_plus.prob(i) - w_minus.prob(i)).abs() < 1e-14);
        }
    }

    // Oracle: full controlled-PHASE dilation. The environment enters as an
    // explicit diagonal state; the traced-out dilation must equal the Kraus
    // action driven by the same weights.
    fn dilation_output(
        env_diag_weights: &ProbabilityDistribution,
        rho: &DensityMatrix,
    ) -> DensityMatrix {
        let d = env_diag_weights.alphabet();
        let env_dim = env_diag_weights.len();
        let sys_dim = d.pow(env_diag_weights.length() as u32);
        // U = Σ_K |K⟩⟨K| ⊗ Z(K) over environment strings K
        let mut u = ComplexMatrix::zeros(env_dim * sys_dim, env_dim * sys_dim);
        for kidx in 0..env_dim {
            let mut z = ComplexMatrix::identity(1, 1);
            for s in env_diag_weights.symbols_of(kidx) {
                z = kron(&z, &z_unitary(d, s + 1).unwrap()).unwrap();
            }
            for r in 0..sys_dim {
                for c in 0..sys_dim {
                    u[(kidx * sys_dim + r, kidx * sys_dim + c)] = z[(r, c)];
                }
            }
        }
        let env_mat = ComplexMatrix::from_diagonal(&DVector::from_iterator(
            env_dim,
            (0..env_dim).map(|i| c64(env_diag_weights.prob(i), 0.0)),
        ));
        let joint = kron(&env_mat, rho.matrix()).unwrap();
        let evolved = &u * joint * u.adjoint();
        let rho_joint = DensityMatrix::new(evolved).unwrap();
        partial_trace(&rho_joint, &[env_dim, sys_dim], &[1]).unwrap()
    }

    #[test]
    fn kraus_action_matches_dilation() {
        let mut rng = StdRng::seed_from_u64(73);
        for (d, n) in [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2)] {
            let weights = random_weights(&mut rng, d, n);
            let ch = build_channel(weights.clone(), d).unwrap();
            for _ in 0..10 {
                let rho = random_density(&mut rng, ch.system_dim());
                let kraus = apply_channel(&ch, &rho).unwrap();
                let dilated = dilation_output(&weights, &rho);
                assert!(
                    trace_norm_distance(&kraus, &dilated).unwrap() < 1e-12,
                    "dilation mismatch at d={d} n={n}"
                );
            }
        }
    }

    #[test]
    fn dilation_with_pure_wolf_environment() {
        // The dilation depends only on the environment diagonal, so using the
        // undephased MPS ring state must give the same channel.
        let mut rng = StdRng::seed_from_u64(74);
        let n = 2;
        let env = wolf_env(0.7);
        let psi = env.state_vector(n).unwrap();
        let weights = env.dephased_diagonal(n).unwrap();
        let ch = build_channel(weights, 2).unwrap();
        let rho = random_density(&mut rng, 4);

        let env_dim = 4;
        let sys_dim = 4;
        let mut u = ComplexMatrix::zeros(16, 16);
        for kidx in 0..env_dim {
            let bits = [kidx >> 1, kidx & 1];
            let mut z = ComplexMatrix::identity(1, 1);
            for s in bits {
                z = kron(&z, &z_unitary(2, s + 1).unwrap()).unwrap();
            }
            for r in 0..sys_dim {
                for c in 0..sys_dim {
                    u[(kidx * sys_dim + r, kidx * sys_dim + c)] = z[(r, c)];
                }
            }
        }
        let joint = kron(DensityMatrix::from_pure(&psi).matrix(), rho.matrix()).unwrap();
        let evolved = &u * joint * u.adjoint();
        let traced =
            partial_trace(&DensityMatrix::new(evolved).unwrap(), &[env_dim, sys_dim], &[1])
                .unwrap();
        let kraus = apply_channel(&ch, &rho).unwrap();
        assert!(trace_norm_distance(&kraus, &traced).unwrap() < 1e-12);
    }

    #[test]
    fn choi_of_identity_is_bell_projector() {
        let j = choi_state(&identity_qubit()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::from_pure(
            &StateVector::from_slice(&[c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)])
                .unwrap(),
        );
        assert!(trace_norm_distance(j.state(), &bell).unwrap() < 1e-12);
        assert!((hashing_bound(&j).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn choi_of_complete_dephasing() {
        let j = choi_state(&dephasing_qubit()).unwrap();
        let m = j.state().matrix();
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((m[(3, 3)].re - 0.5).abs() < 1e-12);
        assert!(m[(0, 3)].norm() < 1e-12);
        assert!(hashing_bound(&j).unwrap().abs() < 1e-10);
    }

    #[test]
    fn choi_is_maximally_correlated_for_dephasing() {
        let weights = wolf_env(0.5).dephased_diagonal(2).unwrap();
        let ch = build_channel(weights, 2).unwrap();
        let j = choi_state(&ch).unwrap();
        assert!(j.max_off_pattern_entry() < 1e-12);
    }

    #[test]
    fn hashing_for_two_string_environment() {
        // environment uniform on {00, 11}
        let mut w = vec![0.0; 4];
        w[0] = 0.5;
        w[3] = 0.5;
        let ch = build_channel(ProbabilityDistribution::new(2, 2, w).unwrap(), 2).unwrap();
        let j = choi_state(&ch).unwrap();
        assert!((hashing_bound(&j).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn finite_use_identity_hashing_equals_n_minus_entropy() {
        let mut rng = StdRng::seed_from_u64(75);
        for n in 1..=3 {
            let weights = random_weights(&mut rng, 2, n);
            let entropy = weights.shannon_entropy();
            let ch = build_channel(weights, 2).unwrap();
            let j = choi_state(&ch).unwrap();
            let hb = hashing_bound(&j).unwrap();
            assert!(
                (hb - (n as f64 - entropy)).abs() < 1e-9,
                "n={n}: hashing {hb} vs {}",
                n as f64 - entropy
            );
        }
    }

    #[test]
    fn coherent_information_identity_and_dephasing() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((coherent_information(&identity_qubit(), &mixed).unwrap() - 1.0).abs() < 1e-10);
        assert!(coherent_information(&dephasing_qubit(), &mixed).unwrap().abs() < 1e-10);
    }

    #[test]
    fn coherent_information_matches_hashing_at_mixed_input() {
        let mut rng = StdRng::seed_from_u64(76);
        let ch = build_channel(random_weights(&mut rng, 2, 2), 2).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        let ci = coherent_information(&ch, &mixed).unwrap();
        let hb = hashing_bound(&choi_state(&ch).unwrap()).unwrap();
        assert!((ci - hb).abs() < 1e-9);
    }

    #[test]
    fn maximally_mixed_input_attains_supremum_on_samples() {
        let mut rng = StdRng::seed_from_u64(77);
        let ch = build_channel(random_weights(&mut rng, 2, 2), 2).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        let at_mixed = coherent_information(&ch, &mixed).unwrap();
        for _ in 0..200 {
            let rho = random_density(&mut rng, 4);
            let ci = coherent_information(&ch, &rho).unwrap();
            assert!(ci <= at_mixed + 1e-9, "random input beats mixed: {ci} > {at_mixed}");
        }
    }

    #[test]
    fn purification_choice_is_irrelevant() {
        let mut rng = StdRng::seed_from_u64(78);
        let ch = build_channel(random_weights(&mut rng, 2, 1), 2).unwrap();
        let rho = random_density(&mut rng, 2);
        let base = coherent_information(&ch, &rho).unwrap();

        // rotate the reference of the spectral purification by a random unitary
        let (vals, vecs) = hermitian_eigen(rho.matrix());
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        for (i, &l) in vals.iter().enumerate() {
            for j in 0..2 {
                amps[i * 2 + j] = vecs[(j, i)] * c64(l.max(0.0).sqrt(), 0.0);
            }
        }
        let a = ComplexMatrix::from_fn(2, 2, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = (&a + a.adjoint()) * c64(0.5, 0.0);
        let (_, w) = hermitian_eigen(&h); // unitary columns
        let mut rotated = vec![Complex64::new(0.0, 0.0); 4];
        for r in 0..2 {
            for j in 0..2 {
                for rp in 0..2 {
                    rotated[r * 2 + j] += w[(r, rp)] * amps[rp * 2 + j];
                }
            }
        }
        let alt = StateVector::from_slice(&rotated).unwrap();
        let rotated_ci = coherent_information_from_purification(&ch, &alt).unwrap();
        assert!((base - rotated_ci).abs() < 1e-10);
    }

    #[test]
    fn capacity_from_rate_cases() {
        let mk = |rate: f64| EntropyRateResult {
            rate,
            route: Route::Transfer,
            diagnostics: RateDiagnostics::Frozen,
        };
        assert_eq!(capacity_from_rate(&mk(0.0), 2), Capacity { value: 1.0, floored: false });
        assert_eq!(capacity_from_rate(&mk(1.0), 2), Capacity { value: 0.0, floored: false });
        let q = capacity_from_rate(&mk(1.5), 2);
        assert!(q.floored && q.value == 0.0);
        let wolf = capacity_from_rate(&mk(0.9182958340544896), 2);
        assert!((wolf.value - 0.0817041659455104).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_equals_capacity_for_dephasing() {
        let weights = wolf_env(0.5).dephased_diagonal(3).unwrap();
        let bound = random_unitary_lower_bound(&weights, 2);
        let rate = weights.shannon_entropy() / 3.0;
        assert!((bound - (1.0 - rate)).abs() < 1e-14);
    }

    #[test]
    fn uniform_pauli_bound_is_vacuous() {
        let weights = ProbabilityDistribution::uniform(4, 1).unwrap();
        let bound = random_unitary_lower_bound(&weights, 2);
        assert!((bound - (-1.0)).abs() < 1e-14);
    }

    #[test]
    fn pauli_mixture_bound_below_coherent_information() {
        let mut rng = StdRng::seed_from_u64(79);
        for _ in 0..10 {
            let d = 2;
            let n = 2;
            let labels = 16;
            let raw: Vec<f64> = (0..labels).map(|_| rng.gen_range(0.0..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let terms: Vec<PauliTerm> = (0..labels)
                .map(|idx| PauliTerm {
                    probability: raw[idx] / sum,
                    shifts: vec![(idx >> 3) & 1, (idx >> 1) & 1],
                    phases: vec![(idx >> 2) & 1, idx & 1],
                })
                .collect();
            let ch = PauliMixtureChannel::new(d, n, terms).unwrap();
            let bound = random_unitary_lower_bound(&ch.weight_distribution().unwrap(), d);
            let mixed = DensityMatrix::maximally_mixed(4).unwrap();
            let ci = coherent_information(&ch, &mixed).unwrap() / n as f64;
            assert!(bound <= ci + 1e-9, "bound {bound} vs per-use coherent info {ci}");
        }
    }
}
