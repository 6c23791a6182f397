//! Supporting-hyperplane certificate.
//!
//! A plane `w = xi . g + xi0` over output Bloch vectors `g` that passes through
//! the points `(Gamma(rho_i), S(Gamma(rho_i)))` and stays below the entropy
//! surface of all channel outputs certifies that the ensemble is optimal.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{self, Seek, SphereFunction};
use crate::qubit::{self, QubitChannel, QubitLog};
use crate::sphere::{self, Vec3};

use super::{holevo_chi, mesh_points, Ensemble, MeshSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Hyperplane {
    pub xi: [f64; 3],
    pub xi0: f64,
    /// Largest `|xi . g_i + xi0 - S(g_i)|` over the ensemble outputs.
    pub residual: f64,
}

impl Hyperplane {
    pub fn height(&self, g: Vec3) -> f64 {
        sphere::dot(self.xi, g) + self.xi0
    }
}

/// Rank of the affine hull of `points` (number of independent differences)
/// and the indices that do not enlarge it when added in order.
fn affine_rank(points: &[Vec3]) -> (usize, Vec<usize>) {
    let mut basis: Vec<Vec3> = Vec::new();
    let mut dependent = Vec::new();
    let scale = points
        .iter()
        .map(|p| sphere::norm(sphere::sub(*p, points[0])))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    for (i, p) in points.iter().enumerate().skip(1) {
        // Gram-Schmidt against the current basis
        let mut v = sphere::sub(*p, points[0]);
        for b in &basis {
            v = sphere::sub(v, sphere::scale(*b, sphere::dot(v, *b)));
        }
        if sphere::norm(v) > 1e-9 * scale {
            basis.push(sphere::normalize(v));
        } else {
            dependent.push(i);
        }
    }
    (basis.len(), dependent)
}

/// Hyperplane through the ensemble's output entropy points.
///
/// With four entries the plane is the unique interpolant. With two or three it
/// is the tangent plane of the relative-entropy bound at the average output
/// (`xi = -log-coefficients`, exact at an optimum) plus the smallest correction
/// that makes it interpolate the entries, so it is unique up to directions the
/// outputs do not span.
pub fn supporting_hyperplane(ch: &QubitChannel, e: &Ensemble) -> Result<Hyperplane> {
    let n = e.len();
    let outputs: Vec<Vec3> = e
        .inputs()
        .iter()
        .map(|r| ch.apply_array(r.to_array()))
        .collect();
    let (rank, dependent) = affine_rank(&outputs);
    if n < 2 {
        return Err(Error::RankDeficient {
            rank: 0,
            needed: 1,
            dependent: vec![0],
        });
    }
    if rank < n - 1 {
        return Err(Error::RankDeficient {
            rank,
            needed: n - 1,
            dependent,
        });
    }
    let entropies: Vec<f64> = outputs.iter().map(|g| qubit::entropy_array(*g)).collect();
    let a = DMatrix::from_fn(n, 4, |i, c| if c == 3 { 1.0 } else { outputs[i][c] });

    let (xi, xi0) = if n == 4 {
        let sol = a
            .clone()
            .lu()
            .solve(&DVector::from_column_slice(&entropies))
            .ok_or_else(|| Error::RankDeficient {
                rank,
                needed: 3,
                dependent: vec![],
            })?;
        ([sol[0], sol[1], sol[2]], sol[3])
    } else {
        let avg = ch.apply_array(e.average().to_array());
        let (base, base0) = match QubitLog::of_array(avg) {
            Some(log) => (
                sphere::scale(log.pauli, -1.0),
                -log.identity - holevo_chi(ch, e),
            ),
            None => ([0.0; 3], 0.0),
        };
        let resid: Vec<f64> = (0..n)
            .map(|i| entropies[i] - sphere::dot(base, outputs[i]) - base0)
            .collect();
        // minimum-norm solution of a * delta = resid
        let aat = &a * a.transpose();
        let y = aat
            .cholesky()
            .ok_or_else(|| Error::RankDeficient {
                rank,
                needed: n - 1,
                dependent: vec![],
            })?
            .solve(&DVector::from_column_slice(&resid));
        let delta = a.transpose() * y;
        (
            [base[0] + delta[0], base[1] + delta[1], base[2] + delta[2]],
            base0 + delta[3],
        )
    };
    let residual = (0..n)
        .map(|i| (sphere::dot(xi, outputs[i]) + xi0 - entropies[i]).abs())
        .fold(0.0, f64::max);
    Ok(Hyperplane { xi, xi0, residual })
}

/// `xi . Gamma(r) + xi0 - S(Gamma(r))` over pure inputs `r`.
struct Violation<'a> {
    channel: &'a QubitChannel,
    xi: Vec3,
    xi0: f64,
}

impl SphereFunction for Violation<'_> {
    fn value(&self, r: Vec3) -> f64 {
        let g = self.channel.apply_array(r);
        sphere::dot(self.xi, g) + self.xi0 - qubit::entropy_array(g)
    }

    fn gradient(&self, r: Vec3) -> Vec3 {
        let g = self.channel.apply_array(r);
        self.channel
            .linear_transpose(sphere::sub(self.xi, qubit::entropy_gradient(g)))
    }
}

/// Number of grid maxima polished by a local ascent.
const POLISHED: usize = 16;

/// Largest height of the plane above the output entropy surface: the maximum
/// over the `grid_k` mesh, polished by local ascent from the best grid points.
/// A certified optimum gives a value `<= 1e-8`.
pub fn verify_hyperplane(ch: &QubitChannel, xi: [f64; 3], xi0: f64, grid_k: usize) -> Result<f64> {
    if grid_k < 40 {
        return Err(Error::InvalidParameter(format!(
            "verification grid k = {grid_k} is below the minimum of 40"
        )));
    }
    let f = Violation {
        channel: ch,
        xi,
        xi0,
    };
    let points = mesh_points(MeshSpec::new(grid_k)?)?;
    let values: Vec<f64> = points.par_iter().map(|p| f.value(p.to_array())).collect();
    let grid_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let spacing = 3.0 * std::f64::consts::PI / grid_k as f64;
    let mut seeds: Vec<Vec3> = Vec::new();
    for i in order {
        let p = points[i].to_array();
        if seeds
            .iter()
            .all(|s| sphere::angular_distance(*s, p) > spacing)
        {
            seeds.push(p);
            if seeds.len() == POLISHED {
                break;
            }
        }
    }
    let polished = seeds
        .par_iter()
        .map(|s| optim::sphere_newton(&f, *s, Seek::Maximum, 1e-12, 100).value)
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(grid_max.max(polished))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::BlochVector;
    use crate::reference;
    use crate::solver::EnsembleEntry;

    fn ensemble(p: &[f64], r: &[BlochVector]) -> Ensemble {
        Ensemble::from_weights(
            p.iter()
                .zip(r)
                .map(|(p, r)| EnsembleEntry::new(*p, *r))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn table1_plane() {
        let ch = reference::four_state_channel();
        let e = reference::table1_ensemble();
        let h = supporting_hyperplane(&ch, &e).unwrap();
        for k in 0..3 {
            assert!(
                (h.xi[k] - reference::TABLE1_XI[k]).abs() < 1e-6,
                "{:?}",
                h.xi
            );
        }
        assert!((h.xi0 - reference::TABLE1_XI0).abs() < 1e-6, "{}", h.xi0);
        assert!(h.residual <= 1e-10);
        let v = verify_hyperplane(&ch, h.xi, h.xi0, 100).unwrap();
        assert!(v <= 1e-8, "{v}");
        assert!(v > -1e-8);
    }

    #[test]
    fn single_input_is_rank_deficient() {
        let e = ensemble(&[1.0], &[BlochVector::new_unchecked(0.0, 0.0, 1.0)]);
        assert!(matches!(
            supporting_hyperplane(&QubitChannel::identity(), &e),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn dependent_outputs_are_named() {
        let z = BlochVector::new_unchecked(0.0, 0.0, 1.0);
        let x = BlochVector::new_unchecked(1.0, 0.0, 0.0);
        let mid = BlochVector::new_unchecked(0.5f64.sqrt(), 0.0, 0.5f64.sqrt());
        // a constant-in-x channel maps x and mid onto the same line as z
        let ch = QubitChannel::new([0.0, 0.5, 0.5], [0.0; 3]);
        let e = ensemble(&[0.3, 0.3, 0.4], &[z, x, mid]);
        match supporting_hyperplane(&ch, &e) {
            Err(Error::RankDeficient { dependent, .. }) => assert_eq!(dependent, vec![2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_control_plane() {
        let v = verify_hyperplane(&QubitChannel::identity(), [0.0; 3], 1.0, 40).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(verify_hyperplane(&QubitChannel::identity(), [0.0; 3], 1.0, 10).is_err());
    }

    #[test]
    fn planar_three_state_plane_is_violated() {
        let ch = reference::four_state_channel();
        let e = reference::table3_planar_ensemble();
        let h = supporting_hyperplane(&ch, &e).unwrap();
        assert!(h.residual <= 1e-10);
        let v = verify_hyperplane(&ch, h.xi, h.xi0, 60).unwrap();
        assert!(v > 1e-5, "{v}");
    }
}
