//! Qubit states, affine qubit channels, entropies and complete positivity.
//!
//! States are handled in the Bloch representation `rho(x,y,z) = (I + x sx + y sy + z sz)/2`.
//! Entropies are in bits. Two-qubit quantities go through [`DensityMatrix`].

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ONE};
use crate::sphere::{self, Vec3};

/// Slack allowed on `|r| <= 1` when building a state.
pub const STATE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues in `[-EIGEN_CLAMP, 0]` are treated as exact zeros.
pub const EIGEN_CLAMP: f64 = 1e-10;
/// Minimum Choi eigenvalue still accepted as completely positive.
pub const CP_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of a reference state below this are treated as outside its support.
const SUPPORT_EPS: f64 = 1e-14;
/// Weight a state may put outside the reference support before the relative
/// entropy is declared infinite.
const SUPPORT_LEAK: f64 = 1e-12;

/// Point of the closed unit ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::InvalidState(format!(
                "non-finite Bloch vector {r:?}"
            )));
        }
        if r.norm() > 1.0 + STATE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "Bloch vector ({x}, {y}, {z}) has norm {} > 1",
                r.norm()
            )));
        }
        Ok(r)
    }

    /// Construct without the unit-ball check.
    pub const fn new_unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: Vec3) -> Self {
        Self::new_unchecked(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> Vec3 {
        [self.x, self.y, self.z]
    }

    /// Pure state from state-vector angles; see [`sphere::from_angles`].
    pub fn from_angles(phi: f64, theta: f64) -> Self {
        Self::from_array(sphere::from_angles(phi, theta))
    }

    /// `(phi, theta)` of the direction of this vector.
    pub fn angles(self) -> (f64, f64) {
        sphere::to_angles(self.to_array())
    }

    pub fn norm(self) -> f64 {
        sphere::norm(self.to_array())
    }

    pub fn is_pure(self) -> bool {
        (self.norm() - 1.0).abs() <= STATE_TOLERANCE
    }

    pub fn normalized(self) -> Self {
        Self::from_array(sphere::normalize(self.to_array()))
    }

    pub fn reflect_y(self) -> Self {
        Self::new_unchecked(self.x, -self.y, self.z)
    }

    pub fn distance(self, other: Self) -> f64 {
        sphere::norm(sphere::sub(self.to_array(), other.to_array()))
    }

    pub fn angular_distance(self, other: Self) -> f64 {
        sphere::angular_distance(self.to_array(), other.to_array())
    }
}

/// Affine qubit channel `(x,y,z) -> (l1 x + t1, l2 y + t2, l3 z + t3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitChannel {
    pub lambda: [f64; 3],
    pub t: [f64; 3],
}

/// Outcome of a complete-positivity check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpCheck {
    pub completely_positive: bool,
    /// Smallest eigenvalue of the trace-normalized Choi matrix.
    pub margin: f64,
}

impl QubitChannel {
    pub const fn new(lambda: [f64; 3], t: [f64; 3]) -> Self {
        Self { lambda, t }
    }

    pub const fn identity() -> Self {
        Self::new([1.0, 1.0, 1.0], [0.0; 3])
    }

    /// Unital channel shrinking the ball uniformly by `p`.
    pub const fn depolarizing(p: f64) -> Self {
        Self::new([p, p, p], [0.0; 3])
    }

    pub fn apply(&self, r: BlochVector) -> BlochVector {
        BlochVector::from_array(self.apply_array(r.to_array()))
    }

    #[inline]
    pub(crate) fn apply_array(&self, r: Vec3) -> Vec3 {
        [
            self.lambda[0] * r[0] + self.t[0],
            self.lambda[1] * r[1] + self.t[1],
            self.lambda[2] * r[2] + self.t[2],
        ]
    }

    /// `Lambda^T v` (the linear part is diagonal).
    #[inline]
    pub(crate) fn linear_transpose(&self, v: Vec3) -> Vec3 {
        [
            self.lambda[0] * v[0],
            self.lambda[1] * v[1],
            self.lambda[2] * v[2],
        ]
    }

    /// Linear extension of the channel to arbitrary 2×2 complex matrices.
    pub fn apply_operator(&self, m: &CMatrix) -> CMatrix {
        let m0 = m[(0, 0)] + m[(1, 1)];
        let mx = m[(0, 1)] + m[(1, 0)];
        let my = linalg::I * (m[(0, 1)] - m[(1, 0)]);
        let mz = m[(0, 0)] - m[(1, 1)];
        let ox = mx * self.lambda[0] + m0 * self.t[0];
        let oy = my * self.lambda[1] + m0 * self.t[1];
        let oz = mz * self.lambda[2] + m0 * self.t[2];
        let half = C64::new(0.5, 0.0);
        CMatrix::from_row_slice(
            2,
            2,
            &[
                half * (m0 + oz),
                half * (ox - linalg::I * oy),
                half * (ox + linalg::I * oy),
                half * (m0 - oz),
            ],
        )
    }

    /// Trace-normalized Choi matrix `(1/2) sum_ij |i><j| (x) Gamma(|i><j|)`.
    pub fn choi_matrix(&self) -> CMatrix {
        self.choi_unnormalized().scale(0.5)
    }

    pub(crate) fn choi_unnormalized(&self) -> CMatrix {
        let mut j = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for k in 0..2 {
                let mut e = CMatrix::zeros(2, 2);
                e[(i, k)] = ONE;
                let out = self.apply_operator(&e);
                for a in 0..2 {
                    for b in 0..2 {
                        j[(2 * i + a, 2 * k + b)] = out[(a, b)];
                    }
                }
            }
        }
        j
    }

    pub fn is_cp(&self) -> CpCheck {
        let margin = linalg::hermitian_eigenvalues(&self.choi_matrix())[0];
        CpCheck {
            completely_positive: margin >= -CP_TOLERANCE,
            margin,
        }
    }

    pub fn ensure_cp(&self) -> Result<()> {
        let check = self.is_cp();
        if check.completely_positive {
            Ok(())
        } else {
            Err(Error::NotCompletelyPositive {
                min_eigenvalue: check.margin,
            })
        }
    }

    /// No axis collapsed: output entropy is then strictly concave in the input.
    pub fn is_one_to_one(&self) -> bool {
        self.lambda.iter().all(|&l| l != 0.0)
    }

    /// The image is symmetric under `y -> -y`.
    pub fn has_y_reflection(&self) -> bool {
        self.t[1] == 0.0
    }
}

/// `(I + r.sigma)/2`.
pub fn bloch_to_density(r: BlochVector) -> Result<DensityMatrix> {
    let r = BlochVector::new(r.x, r.y, r.z)?;
    Ok(DensityMatrix {
        m: bloch_matrix(r.to_array()),
    })
}

pub(crate) fn bloch_matrix(r: Vec3) -> CMatrix {
    let h = 0.5;
    CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(h * (1.0 + r[2]), 0.0),
            C64::new(h * r[0], -h * r[1]),
            C64::new(h * r[0], h * r[1]),
            C64::new(h * (1.0 - r[2]), 0.0),
        ],
    )
}

#[inline]
fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `h2(q)` in bits.
pub fn binary_entropy(q: f64) -> f64 {
    neg_xlog2x(q) + neg_xlog2x(1.0 - q)
}

/// Entropy of a qubit state whose Bloch vector has length `s`.
#[inline]
pub fn entropy_of_length(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    neg_xlog2x(0.5 * (1.0 + s)) + neg_xlog2x(0.5 * (1.0 - s))
}

/// Von Neumann entropy (bits) of `rho(r)`.
pub fn entropy(r: BlochVector) -> f64 {
    entropy_of_length(r.norm())
}

#[inline]
pub(crate) fn entropy_array(v: Vec3) -> f64 {
    entropy_of_length(sphere::norm(v))
}

/// `artanh(s) / s`, finite at `s = 0` and capped just below `s = 1`.
#[inline]
fn atanh_ratio(s: f64) -> f64 {
    if s < 1e-6 {
        1.0 + s * s / 3.0
    } else {
        let s_cap = s.min(1.0 - 1e-16);
        s_cap.atanh() / s
    }
}

/// Euclidean gradient of the Bloch-vector entropy.
#[inline]
pub(crate) fn entropy_gradient(v: Vec3) -> Vec3 {
    sphere::scale(v, -atanh_ratio(sphere::norm(v)) / LN_2)
}

/// `log2` of a full-rank qubit state written as `a0 I + a.sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitLog {
    pub identity: f64,
    pub pauli: [f64; 3],
}

impl QubitLog {
    /// `None` when the state is pure (its logarithm is unbounded).
    pub fn of(r: BlochVector) -> Option<Self> {
        Self::of_array(r.to_array())
    }

    pub(crate) fn of_array(r: Vec3) -> Option<Self> {
        let s = sphere::norm(r);
        if s >= 1.0 - SUPPORT_EPS {
            return None;
        }
        Some(Self {
            identity: 0.5 * (-s * s).ln_1p() / LN_2 - 1.0,
            pauli: sphere::scale(r, atanh_ratio(s) / LN_2),
        })
    }

    /// `Tr(rho(w) log2 sigma)`.
    #[inline]
    pub fn expectation(&self, w: Vec3) -> f64 {
        self.identity + sphere::dot(self.pauli, w)
    }

    /// `H(rho(w), sigma) = -S(w) - Tr(rho(w) log2 sigma)`.
    #[inline]
    pub fn relative_entropy_from(&self, w: Vec3) -> f64 {
        -entropy_array(w) - self.expectation(w)
    }

    pub fn matrix(&self) -> CMatrix {
        let p = linalg::paulis();
        let mut m = p[0].scale(self.identity);
        for k in 0..3 {
            m += p[k + 1].scale(self.pauli[k]);
        }
        m
    }
}

/// Relative entropy `H(rho(w), rho(r))` in bits; `+inf` when `rho(w)` leaks out
/// of the support of a pure `rho(r)`.
pub fn relative_entropy_bloch(w: BlochVector, r: BlochVector) -> f64 {
    relative_entropy_arrays(w.to_array(), r.to_array())
}

pub(crate) fn relative_entropy_arrays(w: Vec3, r: Vec3) -> f64 {
    match QubitLog::of_array(r) {
        Some(log) => log.relative_entropy_from(w),
        None => {
            let dir = sphere::normalize(r);
            let leak = 0.5 * (1.0 - sphere::dot(w, dir));
            if leak > SUPPORT_LEAK {
                f64::INFINITY
            } else {
                -entropy_array(w)
            }
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let d = m.nrows();
        if m.ncols() != d || !(d == 2 || d == 4) {
            return Err(Error::InvalidState(format!(
                "density matrix must be 2x2 or 4x4, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let defect = linalg::hermitian_defect(&m);
        if defect > 1e-12 {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = linalg::trace(&m);
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = linalg::hermitian_eigenvalues(&m)[0];
        if min < -EIGEN_CLAMP {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { m })
    }

    /// Symmetrize and wrap a matrix that is a density matrix up to rounding.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self {
            m: (&m + m.adjoint()).scale(0.5),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// Bloch vector of a 2×2 state.
    pub fn bloch(&self) -> Option<BlochVector> {
        (self.dim() == 2).then(|| {
            BlochVector::new_unchecked(
                2.0 * self.m[(0, 1)].re,
                -2.0 * self.m[(0, 1)].im,
                (self.m[(0, 0)] - self.m[(1, 1)]).re,
            )
        })
    }

    /// Ascending eigenvalues; closed form for qubits.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.bloch() {
            Some(r) => {
                let s = r.norm();
                vec![0.5 * (1.0 - s), 0.5 * (1.0 + s)]
            }
            None => linalg::hermitian_eigenvalues(&self.m),
        }
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            m: linalg::kron(&self.m, &other.m),
        }
    }

    /// Reduced state of the first qubit of a two-qubit state.
    pub fn reduce_to_first(&self) -> Option<DensityMatrix> {
        (self.dim() == 4).then(|| DensityMatrix {
            m: linalg::trace_out_second(&self.m),
        })
    }

    /// Reduced state of the second qubit of a two-qubit state.
    pub fn reduce_to_second(&self) -> Option<DensityMatrix> {
        (self.dim() == 4).then(|| DensityMatrix {
            m: linalg::trace_out_first(&self.m),
        })
    }
}

/// Von Neumann entropy in bits, `0 log 0 = 0`.
pub fn entropy_matrix(m: &DensityMatrix) -> f64 {
    if let Some(r) = m.bloch() {
        return entropy(r);
    }
    spectrum_entropy(&m.eigenvalues())
}

pub(crate) fn spectrum_entropy(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&v| if v <= EIGEN_CLAMP { 0.0 } else { neg_xlog2x(v) })
        .sum()
}

/// `H(w, s) = Tr w (log2 w - log2 s)`; `+inf` on support mismatch.
pub fn relative_entropy(w: &DensityMatrix, s: &DensityMatrix) -> Result<f64> {
    if w.dim() != s.dim() {
        return Err(Error::InvalidParameter(format!(
            "dimension mismatch {} vs {}",
            w.dim(),
            s.dim()
        )));
    }
    if let (Some(a), Some(b)) = (w.bloch(), s.bloch()) {
        return Ok(relative_entropy_bloch(a, b));
    }
    let (values, vectors) = linalg::hermitian_eigen(&s.m);
    let mut cross = 0.0;
    for (k, &lambda) in values.iter().enumerate() {
        let v = vectors.column(k);
        let weight = (v.adjoint() * &w.m * v)[(0, 0)].re;
        if lambda <= SUPPORT_EPS {
            if weight > SUPPORT_LEAK {
                return Ok(f64::INFINITY);
            }
        } else {
            cross += weight * lambda.log2();
        }
    }
    Ok(-entropy_matrix(w) - cross)
}
