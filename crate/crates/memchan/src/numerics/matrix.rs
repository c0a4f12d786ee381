//! Dense complex matrices and the Hermitian eigensolver wrappers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

/// Dense complex matrix used as raw storage throughout the crate.
pub type ComplexMatrix = DMatrix<Complex64>;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Identity matrix of the given dimension.
pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// Kronecker product. Errors when the product dimension exceeds the cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a
        .nrows()
        .checked_mul(b.nrows())
        .ok_or(Error::CapExceeded { needed: usize::MAX, cap: crate::error::dim_cap() })?;
    let cols = a
        .ncols()
        .checked_mul(b.ncols())
        .ok_or(Error::CapExceeded { needed: usize::MAX, cap: crate::error::dim_cap() })?;
    check_dim(rows.max(cols))?;
    Ok(a.kronecker(b))
}

/// Largest elementwise deviation from Hermiticity, `max |M - M†|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Largest elementwise modulus of the difference of two matrices.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Eigendecomposition of a Hermitian matrix: `(eigenvalues, eigenvectors)`
/// sorted ascending; eigenvectors are the columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let dim = m.nrows();
    let mut vecs = ComplexMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn kron_identity_case() {
        let i2 = identity(2);
        let i4 = kron(&i2, &i2).unwrap();
        assert_eq!(max_abs_diff(&i4, &identity(4)), 0.0);
    }

    #[test]
    fn kron_diagonal_product() {
        let z = ComplexMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
        let zz = kron(&z, &z).unwrap();
        let expected = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c64(1.0, 0.0),
            c64(-1.0, 0.0),
            c64(-1.0, 0.0),
            c64(1.0, 0.0),
        ]));
        assert!(max_abs_diff(&zz, &expected) < 1e-15);
    }

    // Oracle: entry (i*p+k, j*q+l) of A⊗B equals A(i,j)B(k,l).
    #[test]
    fn kron_index_formula() {
        let mut rng = StdRng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 2);
        let b = random_matrix(&mut rng, 3);
        let k = kron(&a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..3 {
                    for s in 0..3 {
                        let expect = a[(i, j)] * b[(r, s)];
                        assert!((k[(3 * i + r, 3 * j + s)] - expect).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_associativity() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2);
            let b = random_matrix(&mut rng, 2);
            let c = random_matrix(&mut rng, 3);
            let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
            let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
            assert!(max_abs_diff(&left, &right) < 1e-12);
        }
    }

    #[test]
    fn kron_rejects_cap_overflow() {
        let big = identity(1 << 9);
        let err = kron(&big, &big).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let mut rng = StdRng::seed_from_u64(13);
        let a = random_matrix(&mut rng, 5);
        let h = (&a + a.adjoint()) * c64(0.5, 0.0);
        let (vals, vecs) = hermitian_eigen(&h);
        let lambda = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            5,
            vals.iter().map(|&v| c64(v, 0.0)),
        ));
        let rebuilt = &vecs * lambda * vecs.adjoint();
        assert!(max_abs_diff(&rebuilt, &h) < 1e-10);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }
}
