//! Small dense complex linear algebra used by the qubit and two-qubit code.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Pauli matrices `[I, σx, σy, σz]` as 2×2 complex matrices.
pub fn paulis() -> [CMatrix; 4] {
    [
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are returned in ascending order; column `k` of the matrix is the
/// eigenvector for eigenvalue `k`. The input is symmetrized first so that tiny
/// anti-Hermitian rounding does not leak into the solver.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(herm);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entry-wise deviation from Hermiticity.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Trace out the second qubit of a 4×4 operator.
pub fn trace_out_second(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(2, 2, |a, b| m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)])
}

/// Trace out the first qubit of a 4×4 operator.
pub fn trace_out_first(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(2, 2, |a, b| m[(a, b)] + m[(2 + a, 2 + b)])
}

/// `Tr(A B)` for square matrices of equal size.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let n = values.len();
    let mut out = CMatrix::zeros(n, n);
    for (k, &v) in values.iter().enumerate() {
        let col = vectors.column(k);
        out += (col * col.adjoint()).scale(f(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        // xorshift keeps the test free of RNG plumbing
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = CMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        &a + a.adjoint()
    }

    #[test]
    fn eigen_residual_is_tiny() {
        for seed in 1..50 {
            let m = random_hermitian(4, seed);
            let (vals, vecs) = hermitian_eigen(&m);
            for (k, &lambda) in vals.iter().enumerate() {
                let v = vecs.column(k).into_owned();
                let resid = (&m * &v - v.scale(lambda)).norm();
                assert!(resid <= 1e-12, "residual {resid}");
            }
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn partial_traces_of_product() {
        let p = paulis();
        let a = (&p[0] + p[1].scale(0.3)).scale(0.5);
        let b = (&p[0] + p[3].scale(-0.2)).scale(0.5);
        let ab = kron(&a, &b);
        assert!((trace_out_second(&ab) - &a).norm() < 1e-15);
        assert!((trace_out_first(&ab) - &b).norm() < 1e-15);
    }

    #[test]
    fn spectral_function_reconstructs() {
        let m = random_hermitian(4, 7);
        let back = hermitian_function(&m, |x| x);
        assert!((back - m).norm() < 1e-12);
    }
}
