//! Relative-entropy view of capacity.
//!
//! For a fixed average input the function `g(w) = H[Gamma(w), Gamma(rho_avg)]`
//! over pure inputs `w` bounds `chi` from above: `C <= max_w g(w)` with
//! equality at the optimal average. This module scans `g`, finds its maxima
//! and classifies all of its critical points.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{self, Seek, SphereFunction};
use crate::qubit::{self, BlochVector, QubitChannel, QubitLog};
use crate::solver::Ensemble;
use crate::sphere::{self, Vec3};

/// `H[Gamma(rho_i), Gamma(avg)]` for every entry.
pub fn equidistance(ch: &QubitChannel, e: &Ensemble) -> Vec<f64> {
    let avg = ch.apply_array(e.average().to_array());
    e.inputs()
        .iter()
        .map(|r| qubit::relative_entropy_arrays(ch.apply_array(r.to_array()), avg))
        .collect()
}

/// `g(w) = H[Gamma(w), sigma]` on the unit sphere.
pub(crate) struct Relent<'a> {
    channel: &'a QubitChannel,
    log: QubitLog,
}

impl<'a> Relent<'a> {
    pub(crate) fn new(channel: &'a QubitChannel, rho_avg: BlochVector) -> Result<Self> {
        let sigma = channel.apply(rho_avg);
        let log = QubitLog::of(sigma).ok_or_else(|| {
            Error::SupportMismatch(format!(
                "average output ({}, {}, {}) is pure; its logarithm is unbounded",
                sigma.x, sigma.y, sigma.z
            ))
        })?;
        Ok(Self { channel, log })
    }
}

impl SphereFunction for Relent<'_> {
    fn value(&self, r: Vec3) -> f64 {
        self.log.relative_entropy_from(self.channel.apply_array(r))
    }

    fn gradient(&self, r: Vec3) -> Vec3 {
        let g = self.channel.apply_array(r);
        let d = sphere::sub(
            sphere::scale(qubit::entropy_gradient(g), -1.0),
            self.log.pauli,
        );
        self.channel.linear_transpose(d)
    }
}

/// Values of `g` on a `(phi, theta)` grid: `phi` in `[0, pi/2]` (endpoints
/// included, so the first and last rows are the poles) and `theta` in
/// `[0, 2 pi)`; the input is `(sin 2phi cos theta, sin 2phi sin theta, cos 2phi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LandscapeGrid {
    pub phi_steps: usize,
    pub theta_steps: usize,
    /// `values[i][j]` at `(phi(i), theta(j))`.
    pub values: Vec<Vec<f64>>,
}

impl LandscapeGrid {
    pub fn phi(&self, i: usize) -> f64 {
        grid_phi(i, self.phi_steps)
    }

    pub fn theta(&self, j: usize) -> f64 {
        grid_theta(j, self.theta_steps)
    }

    pub fn point(&self, i: usize, j: usize) -> BlochVector {
        BlochVector::from_angles(self.phi(i), self.theta(j))
    }

    /// Rows `[phi, theta, x, y, z, H]` in grid order.
    pub fn rows(&self) -> impl Iterator<Item = [f64; 6]> + '_ {
        (0..self.phi_steps).flat_map(move |i| {
            (0..self.theta_steps).map(move |j| {
                let p = self.point(i, j);
                [self.phi(i), self.theta(j), p.x, p.y, p.z, self.values[i][j]]
            })
        })
    }

    /// Largest value and its grid index.
    pub fn max(&self) -> (f64, (usize, usize)) {
        let mut best = (f64::NEG_INFINITY, (0, 0));
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v > best.0 {
                    best = (*v, (i, j));
                }
            }
        }
        best
    }
}

fn grid_phi(i: usize, steps: usize) -> f64 {
    std::f64::consts::FRAC_PI_2 * i as f64 / (steps - 1) as f64
}

fn grid_theta(j: usize, steps: usize) -> f64 {
    2.0 * std::f64::consts::PI * j as f64 / steps as f64
}

fn check_dims(phi_steps: usize, theta_steps: usize) -> Result<()> {
    if phi_steps < 3 || theta_steps < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid {phi_steps}x{theta_steps} too small; need at least 3x3"
        )));
    }
    Ok(())
}

fn evaluate_grid(
    phi_steps: usize,
    theta_steps: usize,
    f: impl Fn(Vec3) -> f64 + Sync,
) -> Vec<Vec<f64>> {
    (0..phi_steps)
        .into_par_iter()
        .map(|i| {
            let phi = grid_phi(i, phi_steps);
            (0..theta_steps)
                .map(|j| f(sphere::from_angles(phi, grid_theta(j, theta_steps))))
                .collect()
        })
        .collect()
}

/// Evaluate `H[Gamma(w), Gamma(rho_avg)]` on a `phi_steps x theta_steps` grid.
pub fn landscape(
    ch: &QubitChannel,
    rho_avg: BlochVector,
    phi_steps: usize,
    theta_steps: usize,
) -> Result<LandscapeGrid> {
    check_dims(phi_steps, theta_steps)?;
    let f = Relent::new(ch, rho_avg)?;
    Ok(LandscapeGrid {
        phi_steps,
        theta_steps,
        values: evaluate_grid(phi_steps, theta_steps, |r| f.value(r)),
    })
}

/// Grid points that are at least as good as every neighbour and strictly
/// better than one, under `better(a, b)` meaning `a` beats `b`. The pole rows
/// are single points, adjacent to every point of the next row.
fn grid_extrema(values: &[Vec<f64>], better: impl Fn(f64, f64) -> bool) -> Vec<(usize, usize)> {
    let n = values.len();
    let m = values[0].len();
    let mut out = Vec::new();
    let pole = |i: usize, ring: usize| {
        let v = values[i][0];
        let ring = &values[ring];
        if ring.iter().all(|&w| !better(w, v)) && ring.iter().any(|&w| better(v, w)) {
            Some((i, 0))
        } else {
            None
        }
    };
    out.extend(pole(0, 1));
    for i in 1..n - 1 {
        for j in 0..m {
            let v = values[i][j];
            let mut strict = false;
            let mut ok = true;
            for di in [-1i64, 0, 1] {
                let ii = (i as i64 + di) as usize;
                for dj in [m - 1, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let w = if ii == 0 || ii == n - 1 {
                        values[ii][0]
                    } else {
                        values[ii][(j + dj) % m]
                    };
                    if better(w, v) {
                        ok = false;
                    } else if better(v, w) {
                        strict = true;
                    }
                }
            }
            if ok && strict {
                out.push((i, j));
            }
        }
    }
    out.extend(pole(n - 1, n - 2));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Maximum,
    Saddle,
    Minimum,
    /// A Hessian eigenvalue too close to zero to classify.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalPoint {
    pub location: BlochVector,
    pub value: f64,
    pub kind: CriticalKind,
    pub gradient_norm: f64,
    /// Eigenvalues of the Hessian on the sphere, ascending.
    pub hessian_eigenvalues: [f64; 2],
}

/// Hessian eigenvalues closer to zero than this leave a point unclassified.
pub const HESSIAN_TOLERANCE: f64 = 1e-7;

fn classify(h: [f64; 2], tol: f64) -> CriticalKind {
    let [lo, hi] = h;
    if hi < -tol {
        CriticalKind::Maximum
    } else if lo > tol {
        CriticalKind::Minimum
    } else if lo < -tol && hi > tol {
        CriticalKind::Saddle
    } else {
        CriticalKind::Degenerate
    }
}

fn critical_point(c: optim::SphereCritical, tol: f64) -> CriticalPoint {
    CriticalPoint {
        location: BlochVector::from_array(c.point),
        value: c.value,
        kind: classify(c.hessian, tol),
        gradient_norm: c.gradient_norm,
        hessian_eigenvalues: c.hessian,
    }
}

/// Keep the first point of every cluster within angular `radius`.
fn dedupe(points: Vec<CriticalPoint>, radius: f64) -> Vec<CriticalPoint> {
    let mut out: Vec<CriticalPoint> = Vec::new();
    for p in points {
        if out
            .iter()
            .all(|q| q.location.angular_distance(p.location) > radius)
        {
            out.push(p);
        }
    }
    out
}

/// Clustering radius for critical points found from different seeds.
pub const DEDUPE_RADIUS: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SupRelent {
    pub value: f64,
    /// Local maxima within `1e-4` of `value`, best first.
    pub maxima: Vec<CriticalPoint>,
}

/// `max_w H[Gamma(w), Gamma(rho_avg)]` over pure `w`: a grid scan with
/// `grid_k + 1` polar and `2 grid_k` azimuthal steps, then Newton ascent from
/// every grid maximum.
pub fn sup_relent(
    ch: &QubitChannel,
    rho_avg: BlochVector,
    grid_k: usize,
    refine_tol: f64,
) -> Result<SupRelent> {
    let f = Relent::new(ch, rho_avg)?;
    let (phi_steps, theta_steps) = (grid_k + 1, 2 * grid_k);
    check_dims(phi_steps, theta_steps)?;
    let values = evaluate_grid(phi_steps, theta_steps, |r| f.value(r));
    let grid = LandscapeGrid {
        phi_steps,
        theta_steps,
        values,
    };
    let (grid_max, arg) = grid.max();
    let mut seeds = grid_extrema(&grid.values, |a, b| a > b);
    if seeds.is_empty() {
        seeds.push(arg);
    }
    let found: Vec<CriticalPoint> = seeds
        .par_iter()
        .map(|&(i, j)| {
            let c = optim::sphere_newton(
                &f,
                grid.point(i, j).to_array(),
                Seek::Maximum,
                refine_tol,
                100,
            );
            if !c.converged {
                log::debug!(
                    "ascent from grid ({i}, {j}) stopped at gradient norm {:.3e}",
                    c.gradient_norm
                );
            }
            critical_point(c, HESSIAN_TOLERANCE)
        })
        .collect();
    let mut found = found;
    found.sort_by(|a, b| b.value.total_cmp(&a.value));
    let found = dedupe(found, DEDUPE_RADIUS);
    let value = found.iter().map(|c| c.value).fold(grid_max, f64::max);
    let maxima = found
        .into_iter()
        .filter(|c| c.value > value - 1e-4)
        .collect();
    Ok(SupRelent { value, maxima })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct CensusOptions {
    pub phi_steps: usize,
    pub theta_steps: usize,
    /// Largest gradient norm accepted at a critical point.
    pub gradient_tolerance: f64,
    pub hessian_tolerance: f64,
    pub dedupe_radius: f64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            phi_steps: 400,
            theta_steps: 800,
            gradient_tolerance: 1e-8,
            hessian_tolerance: HESSIAN_TOLERANCE,
            dedupe_radius: DEDUPE_RADIUS,
        }
    }
}

/// All critical points of `w -> H[Gamma(w), Gamma(rho_avg)]` on the sphere.
///
/// Seeds are the grid's local minima of the gradient norm; each is driven to
/// a nearby critical point by Newton's method. A function that is constant on
/// the grid has a whole sphere of critical points and is reported as a single
/// degenerate point at the north pole.
pub fn critical_census(
    ch: &QubitChannel,
    rho_avg: BlochVector,
    opts: &CensusOptions,
) -> Result<Vec<CriticalPoint>> {
    check_dims(opts.phi_steps, opts.theta_steps)?;
    let f = Relent::new(ch, rho_avg)?;
    let values = evaluate_grid(opts.phi_steps, opts.theta_steps, |r| f.value(r));
    let (lo, hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
    if hi - lo <= 1e-12 {
        let c = optim::SphereCritical {
            point: [0.0, 0.0, 1.0],
            value: f.value([0.0, 0.0, 1.0]),
            gradient_norm: sphere::tangent_norm([0.0, 0.0, 1.0], f.gradient([0.0, 0.0, 1.0])),
            hessian: optim::sphere_hessian(&f, [0.0, 0.0, 1.0]),
            converged: true,
        };
        let mut p = critical_point(c, opts.hessian_tolerance);
        p.kind = CriticalKind::Degenerate;
        return Ok(vec![p]);
    }
    let gnorm = evaluate_grid(opts.phi_steps, opts.theta_steps, |r| {
        sphere::tangent_norm(r, f.gradient(r))
    });
    let seeds = grid_extrema(&gnorm, |a, b| a < b);
    let found: Vec<Option<CriticalPoint>> = seeds
        .par_iter()
        .map(|&(i, j)| {
            let start =
                sphere::from_angles(grid_phi(i, opts.phi_steps), grid_theta(j, opts.theta_steps));
            let c = optim::sphere_newton(&f, start, Seek::AnyCritical, 1e-12, 100);
            (c.gradient_norm <= opts.gradient_tolerance)
                .then(|| critical_point(c, opts.hessian_tolerance))
        })
        .collect();
    let mut found: Vec<CriticalPoint> = found.into_iter().flatten().collect();
    found.sort_by(|a, b| b.value.total_cmp(&a.value));
    Ok(dedupe(found, opts.dedupe_radius))
}
