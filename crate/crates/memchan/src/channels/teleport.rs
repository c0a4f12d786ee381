//! Teleportation of an input state through a Choi state.
//!
//! The Bell basis on (input, reference) is `{(X^a Z^b ⊗ I)|+⟩}` with the
//! shift/phase operators taken per site, and the correction applied to the
//! output half is the same `X^a Z^b`. For channels that are mixtures of
//! Pauli-frame unitaries the corrected output equals the channel output for
//! every outcome, not just on average; the implementation checks this
//! against the channel action reconstructed from the Choi state and
//! rejects resources for which the identity fails.

use num_complex::Complex64;
use rand::Rng;

use super::{weyl_phase, weyl_shift, ChoiState};
use crate::error::{Error, Result};
use crate::numerics::{c64, kron, trace_distance, ComplexMatrix, DensityMatrix};

/// Per-outcome residual above which the Choi state is rejected as not being
/// a Pauli-frame mixture.
const PAULI_FRAME_TOL: f64 = 1e-8;

/// Bell-measurement outcome: one shift and one phase exponent per site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeleportOutcome {
    pub shifts: Vec<usize>,
    pub phases: Vec<usize>,
}

impl TeleportOutcome {
    /// Flat index in lexicographic (shift, phase) per-site order.
    pub fn index(&self, d: usize) -> usize {
        let mut idx = 0;
        for (&a, &b) in self.shifts.iter().zip(self.phases.iter()) {
            idx = idx * d * d + a * d + b;
        }
        idx
    }

    /// Correction label, e.g. `X^[1,0] Z^[0,1]`.
    pub fn correction_label(&self) -> String {
        format!("X^{:?} Z^{:?}", self.shifts, self.phases)
    }

    fn unitary(&self, d: usize) -> Result<ComplexMatrix> {
        let mut u = ComplexMatrix::identity(1, 1);
        for (&a, &b) in self.shifts.iter().zip(self.phases.iter()) {
            u = kron(&u, &(weyl_shift(d, a) * weyl_phase(d, b)))?;
        }
        Ok(u)
    }
}

/// All `d^(2n)` Bell outcomes for `n` sites.
pub fn all_outcomes(d: usize, n: usize) -> Vec<TeleportOutcome> {
    let per_site = d * d;
    let total = per_site.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut shifts = vec![0usize; n];
            let mut phases = vec![0usize; n];
            for site in (0..n).rev() {
                let label = idx % per_site;
                shifts[site] = label / d;
                phases[site] = label % d;
                idx /= per_site;
            }
            TeleportOutcome { shifts, phases }
        })
        .collect()
}

/// Uniformly sampled outcome (outcomes are equiprobable for these channels).
pub fn sample_outcome<R: Rng>(d: usize, n: usize, rng: &mut R) -> TeleportOutcome {
    TeleportOutcome {
        shifts: (0..n).map(|_| rng.gen_range(0..d)).collect(),
        phases: (0..n).map(|_| rng.gen_range(0..d)).collect(),
    }
}

/// Result of one teleportation: the measured outcome, the correction that
/// was applied, and the corrected output state.
#[derive(Debug, Clone)]
pub struct TeleportationRecord {
    pub outcome: TeleportOutcome,
    pub correction: String,
    pub output: DensityMatrix,
    pub probability: f64,
}

/// Teleports `rho` through the Choi state and applies the outcome-indexed
/// correction. Errors if the corrected output disagrees with the channel
/// action reconstructed from the Choi state (non-Pauli-mixture resource).
pub fn teleport_through_choi(
    j: &ChoiState,
    rho: &DensityMatrix,
    outcome: &TeleportOutcome,
) -> Result<TeleportationRecord> {
    let d = j.level_count();
    let n = j.uses();
    let dim = j.system_dim();
    if rho.dim() != dim {
        return Err(Error::DimMismatch(format!(
            "input dim {} vs channel dim {dim}",
            rho.dim()
        )));
    }
    if outcome.shifts.len() != n || outcome.phases.len() != n {
        return Err(Error::InvalidParameter("outcome label length mismatch".into()));
    }
    if outcome.shifts.iter().chain(outcome.phases.iter()).any(|&x| x >= d) {
        return Err(Error::InvalidParameter("outcome label out of range".into()));
    }

    let u = outcome.unitary(d)?;
    // |Φ_out⟩ = (U ⊗ I)|+⟩ as the matrix B(c, a) = U(c, a)/√D on
    // (input, reference); project the input ⊗ Choi state onto it.
    let scale = c64(1.0 / (dim as f64).sqrt(), 0.0);
    let bell = &u * scale;
    let w = bell.adjoint() * rho.matrix() * &bell;
    let jm = j.state().matrix();
    let mut post = ComplexMatrix::zeros(dim, dim);
    for b in 0..dim {
        for bp in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..dim {
                for ap in 0..dim {
                    acc += w[(a, ap)] * jm[(a * dim + b, ap * dim + bp)];
                }
            }
            post[(b, bp)] = acc;
        }
    }
    let probability = post.trace().re;
    if probability <= 1e-14 {
        return Err(Error::InvalidParameter("outcome has vanishing probability".into()));
    }
    post /= c64(probability, 0.0);
    let corrected = DensityMatrix::new(&u * post * u.adjoint())?;

    let expected = j.channel_action(rho)?;
    let residual = trace_distance(&corrected, &expected)?;
    if residual > PAULI_FRAME_TOL {
        return Err(Error::NonPauliMixture(residual));
    }

    Ok(TeleportationRecord {
        outcome: outcome.clone(),
        correction: outcome.correction_label(),
        output: corrected,
        probability,
    })
}
