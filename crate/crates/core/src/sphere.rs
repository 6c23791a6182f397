//! Three-vector helpers, sphere charts, meshes and random rotations.

use std::f64::consts::PI;

use rand::Rng;

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn normalize(a: Vec3) -> Vec3 {
    scale(a, 1.0 / norm(a))
}

/// Angle between two unit vectors, stable for nearly (anti)parallel inputs.
pub fn angular_distance(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Unit vector from the state-vector angles used throughout the crate:
/// `phi` is half the polar angle (`|u> = cos(phi)|0> + e^{i theta} sin(phi)|1>`),
/// `theta` is the azimuth.
pub fn from_angles(phi: f64, theta: f64) -> Vec3 {
    let (s2, c2) = (2.0 * phi).sin_cos();
    [s2 * theta.cos(), s2 * theta.sin(), c2]
}

/// Inverse of [`from_angles`]: `phi` in `[0, pi/2]`, `theta` in `(-pi, pi]`.
pub fn to_angles(r: Vec3) -> (f64, f64) {
    let rho = (r[0] * r[0] + r[1] * r[1]).sqrt();
    let polar = rho.atan2(r[2]);
    let theta = if rho == 0.0 { 0.0 } else { r[1].atan2(r[0]) };
    (0.5 * polar, theta)
}

/// Orthonormal tangent basis at a unit vector.
pub fn tangent_basis(c: Vec3) -> [Vec3; 2] {
    let ax = c[0].abs();
    let ay = c[1].abs();
    let az = c[2].abs();
    let helper = if ax <= ay && ax <= az {
        [1.0, 0.0, 0.0]
    } else if ay <= az {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let e1 = normalize(cross(helper, c));
    let e2 = cross(c, e1);
    [e1, e2]
}

/// Local chart `u -> normalize(center + sum_k u_k e_k)` around a point of the
/// unit sphere. It is regular everywhere, including at the poles.
#[derive(Clone, Debug)]
pub struct Chart {
    pub center: Vec3,
    pub basis: Vec<Vec3>,
}

impl Chart {
    /// Full two-dimensional chart.
    pub fn full(center: Vec3) -> Self {
        let [e1, e2] = tangent_basis(center);
        Self {
            center,
            basis: vec![e1, e2],
        }
    }

    /// One-dimensional chart along the great circle through `center` that lies
    /// in the plane with the given normal.
    pub fn in_plane(center: Vec3, plane_normal: Vec3) -> Self {
        let e = normalize(cross(plane_normal, center));
        Self {
            center,
            basis: vec![e],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn raw(&self, u: &[f64]) -> Vec3 {
        let mut v = self.center;
        for (e, &uk) in self.basis.iter().zip(u) {
            v = add(v, scale(*e, uk));
        }
        v
    }

    pub fn point(&self, u: &[f64]) -> Vec3 {
        normalize(self.raw(u))
    }

    /// Pull a Euclidean gradient at `point(u)` back to chart coordinates.
    pub fn pullback(&self, u: &[f64], euclid_grad: Vec3) -> Vec<f64> {
        let v = self.raw(u);
        let len = norm(v);
        let r = scale(v, 1.0 / len);
        self.basis
            .iter()
            .map(|&e| {
                let dr = scale(sub(e, scale(r, dot(r, e))), 1.0 / len);
                dot(euclid_grad, dr)
            })
            .collect()
    }
}

/// Norm of the projection of a Euclidean gradient onto the tangent plane at `r`.
pub fn tangent_norm(r: Vec3, g: Vec3) -> f64 {
    norm(sub(g, scale(r, dot(r, g))))
}

/// Square latitude/longitude mesh of the unit sphere with the two poles merged:
/// `theta_j = j pi / k`, `mu_l = 2 l pi / k`, giving `k^2 - k + 2` points.
pub fn lat_long_mesh(k: usize) -> Vec<Vec3> {
    let mut points = Vec::with_capacity(k * k - k + 2);
    points.push([0.0, 0.0, 1.0]);
    for j in 1..k {
        let theta = j as f64 * PI / k as f64;
        let (st, ct) = theta.sin_cos();
        for l in 0..k {
            let mu = 2.0 * l as f64 * PI / k as f64;
            let (sm, cm) = mu.sin_cos();
            points.push([st * cm, st * sm, ct]);
        }
    }
    points.push([0.0, 0.0, -1.0]);
    points
}

/// 3×3 rotation matrix (row-major).
pub type Rotation = [[f64; 3]; 3];

pub const IDENTITY_ROTATION: Rotation = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn rotate(rot: &Rotation, v: Vec3) -> Vec3 {
    [dot(rot[0], v), dot(rot[1], v), dot(rot[2], v)]
}

/// Haar-random rotation from a uniformly random unit quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random::<f64>() * 2.0 * PI;
    let u3: f64 = rng.random::<f64>() * 2.0 * PI;
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let (w, x, y, z) = (a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos());
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}
