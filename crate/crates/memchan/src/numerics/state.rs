//! State vectors, density matrices, partial traces and entropies.

use nalgebra::DVector;
use num_complex::Complex64;

use super::matrix::{all_finite, hermitian_eigenvalues, hermiticity_defect, ComplexMatrix};
use crate::error::{check_dim, Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const EIGENVALUE_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const NULL_STATE_TOL: f64 = 1e-14;

/// Normalized pure state.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Builds a normalized state. Errors when the norm is below the
    /// null-state threshold or any amplitude is non-finite.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("state vector amplitudes".into()));
        }
        let norm = amplitudes.norm();
        if norm < NULL_STATE_TOL {
            return Err(Error::NullState);
        }
        Ok(Self { amplitudes: amplitudes / Complex64::new(norm, 0.0) })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimMismatch(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut amps = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn outer(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity (within roundoff) and unit trace.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimMismatch(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_dim(matrix.nrows())?;
        if !all_finite(&matrix) {
            return Err(Error::NonFinite("density matrix entries".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let min_eig = hermitian_eigenvalues(&matrix)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EIGENVALUE_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state; exact by construction, so the
    /// eigenvalue validation is skipped.
    pub fn from_pure(psi: &StateVector) -> Self {
        Self { matrix: psi.outer() }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let scale = Complex64::new(1.0 / dim as f64, 0.0);
        Ok(Self { matrix: ComplexMatrix::identity(dim, dim) * scale })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Real parts of the diagonal (computational-basis populations).
    pub fn diagonal_populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }
}

fn digit_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

fn validate_factors(total: usize, dims: &[usize], keep: &[usize]) -> Result<()> {
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimMismatch(format!(
            "factor dims product {prod} does not match dimension {total}"
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DimMismatch("keep set must be strictly increasing".into()));
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimMismatch("keep index out of range".into()));
    }
    Ok(())
}

/// Enumerates full indices as `(kept-part, traced-part)` contributions.
struct FactorSplit {
    keep_strides: Vec<usize>,
    trace_strides: Vec<usize>,
    keep_dims: Vec<usize>,
    trace_dims: Vec<usize>,
}

impl FactorSplit {
    fn new(dims: &[usize], keep: &[usize]) -> Self {
        let strides = digit_strides(dims);
        let mut keep_strides = Vec::new();
        let mut trace_strides = Vec::new();
        let mut keep_dims = Vec::new();
        let mut trace_dims = Vec::new();
        for (i, (&d, &s)) in dims.iter().zip(strides.iter()).enumerate() {
            if keep.contains(&i) {
                keep_strides.push(s);
                keep_dims.push(d);
            } else {
                trace_strides.push(s);
                trace_dims.push(d);
            }
        }
        Self { keep_strides, trace_strides, keep_dims, trace_dims }
    }

    fn keep_dim(&self) -> usize {
        self.keep_dims.iter().product()
    }

    fn trace_dim(&self) -> usize {
        self.trace_dims.iter().product()
    }

    /// Offset into the full index space for a flat kept index.
    fn keep_offset(&self, mut k: usize) -> usize {
        let mut offset = 0;
        for (d, s) in self.keep_dims.iter().zip(self.keep_strides.iter()).rev() {
            offset += (k % d) * s;
            k /= d;
        }
        offset
    }

    fn trace_offset(&self, mut t: usize) -> usize {
        let mut offset = 0;
        for (d, s) in self.trace_dims.iter().zip(self.trace_strides.iter()).rev() {
            offset += (t % d) * s;
            t /= d;
        }
        offset
    }
}

/// Partial trace over the factors not in `keep`. Factor 0 is the most
/// significant tensor slot; `keep` must be strictly increasing.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    validate_factors(rho.dim(), dims, keep)?;
    let split = FactorSplit::new(dims, keep);
    let dk = split.keep_dim();
    let dt = split.trace_dim();
    let keep_offsets: Vec<usize> = (0..dk).map(|k| split.keep_offset(k)).collect();
    let trace_offsets: Vec<usize> = (0..dt).map(|t| split.trace_offset(t)).collect();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (j, &oj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &ot in &trace_offsets {
                acc += m[(oi + ot, oj + ot)];
            }
            out[(i, j)] = acc;
        }
    }
    DensityMatrix::new(out)
}

/// Reduced density matrix of a pure state, without materializing the full
/// projector. Same factor conventions as [`partial_trace`].
pub fn reduced_from_state(psi: &StateVector, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    validate_factors(psi.dim(), dims, keep)?;
    let split = FactorSplit::new(dims, keep);
    let dk = split.keep_dim();
    let dt = split.trace_dim();
    check_dim(dk)?;
    let keep_offsets: Vec<usize> = (0..dk).map(|k| split.keep_offset(k)).collect();
    let trace_offsets: Vec<usize> = (0..dt).map(|t| split.trace_offset(t)).collect();
    let amps = psi.amplitudes();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (j, &oj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &ot in &trace_offsets {
                acc += amps[oi + ot] * amps[oj + ot].conj();
            }
            out[(i, j)] = acc;
        }
    }
    DensityMatrix::new(out)
}

/// Von Neumann entropy in bits; eigenvalues in `[-1e-10, 0)` are clipped to 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .map(|l| l.max(0.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        + 0.0
}

/// Trace norm `||A - B||_1` (sum of singular values of the difference).
pub fn trace_norm_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(format!(
            "trace norm of {}x{} vs {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let diff = a.matrix() - b.matrix();
    Ok(hermitian_eigenvalues(&diff).into_iter().map(f64::abs).sum())
}

/// Trace distance `||A - B||_1 / 2`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    Ok(trace_norm_distance(a, b)? / 2.0)
}
