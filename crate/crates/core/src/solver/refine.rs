//! Newton refinement of an ensemble to a critical point of `chi`.
//!
//! Each pure input moves in a local chart of the sphere centred at its current
//! position (re-centred every iteration, so the poles need no special care).
//! Probabilities use the first `n - 1` weights with the last one eliminated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim;
use crate::qubit::{self, BlochVector, QubitChannel};
use crate::sphere::{self, Chart, Vec3};

use super::{Ensemble, EnsembleEntry};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    /// Keep every input in the plane with this normal.
    pub plane_normal: Option<[f64; 3]>,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            gradient_tolerance: 1e-10,
            max_iterations: 200,
            plane_normal: None,
        }
    }
}

impl RefineOptions {
    /// Inputs restricted to the x-z plane.
    pub fn xz_plane() -> Self {
        Self {
            plane_normal: Some([0.0, 1.0, 0.0]),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refined {
    pub ensemble: Ensemble,
    pub chi: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    /// Entries removed because their weight vanished or they merged with another.
    pub dropped: usize,
}

/// `chi` as a function of chart coordinates and free probabilities: the
/// tangent coordinates of every input, then all probabilities but the last.
pub struct ChiObjective<'a> {
    pub(crate) channel: &'a QubitChannel,
    pub(crate) charts: Vec<Chart>,
}

impl<'a> ChiObjective<'a> {
    /// Coordinates centred on the inputs of `e`, with the point representing `e`.
    pub fn around(channel: &'a QubitChannel, e: &Ensemble) -> (Self, Vec<f64>) {
        let pts: Vec<Vec3> = e.inputs().iter().map(|r| r.to_array()).collect();
        let obj = Self {
            channel,
            charts: charts_for(&pts, None),
        };
        let mut x = vec![0.0; obj.dim() + 1 - e.len()];
        let probs = e.probabilities();
        x.extend_from_slice(&probs[..e.len() - 1]);
        (obj, x)
    }

    fn n(&self) -> usize {
        self.charts.len()
    }

    pub fn dim(&self) -> usize {
        self.charts.iter().map(Chart::dim).sum::<usize>() + self.n() - 1
    }

    fn unpack(&self, x: &[f64]) -> (Vec<Vec3>, Vec<f64>) {
        let mut off = 0;
        let mut pts = Vec::with_capacity(self.n());
        for c in &self.charts {
            pts.push(c.point(&x[off..off + c.dim()]));
            off += c.dim();
        }
        let mut probs: Vec<f64> = x[off..].to_vec();
        probs.push(1.0 - probs.iter().sum::<f64>());
        (pts, probs)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let (pts, probs) = self.unpack(x);
        let mut avg = [0.0; 3];
        let mut mean_s = 0.0;
        for (r, p) in pts.iter().zip(&probs) {
            let g = self.channel.apply_array(*r);
            avg = sphere::add(avg, sphere::scale(g, *p));
            mean_s += p * qubit::entropy_array(g);
        }
        qubit::entropy_array(avg) - mean_s
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let (pts, probs) = self.unpack(x);
        let outs: Vec<Vec3> = pts.iter().map(|r| self.channel.apply_array(*r)).collect();
        let mut avg = [0.0; 3];
        for (g, p) in outs.iter().zip(&probs) {
            avg = sphere::add(avg, sphere::scale(*g, *p));
        }
        let gbar = qubit::entropy_gradient(avg);
        let mut grad = Vec::with_capacity(x.len());
        let mut off = 0;
        for (i, c) in self.charts.iter().enumerate() {
            let gi = qubit::entropy_gradient(outs[i]);
            let d_out = sphere::scale(sphere::sub(gbar, gi), probs[i]);
            let d_in = self.channel.linear_transpose(d_out);
            grad.extend(c.pullback(&x[off..off + c.dim()], d_in));
            off += c.dim();
        }
        let drive: Vec<f64> = outs
            .iter()
            .map(|g| sphere::dot(gbar, *g) - qubit::entropy_array(*g))
            .collect();
        let last = drive[self.n() - 1];
        grad.extend(drive[..self.n() - 1].iter().map(|d| d - last));
        grad
    }
}

fn charts_for(points: &[Vec3], plane: Option<Vec3>) -> Vec<Chart> {
    points
        .iter()
        .map(|&c| match plane {
            Some(n) => Chart::in_plane(c, n),
            None => Chart::full(c),
        })
        .collect()
}

fn project_to_plane(r: Vec3, normal: Vec3) -> Vec3 {
    let n = sphere::normalize(normal);
    let v = sphere::sub(r, sphere::scale(n, sphere::dot(r, n)));
    if sphere::norm(v) < 1e-12 {
        sphere::tangent_basis(n)[0]
    } else {
        sphere::normalize(v)
    }
}

/// Refine `e0` to a critical point of `chi` with respect to all input angles
/// and the probabilities.
pub fn newton_refine(ch: &QubitChannel, e0: &Ensemble, opts: &RefineOptions) -> Result<Refined> {
    let plane = opts.plane_normal;
    let mut points: Vec<Vec3> = e0
        .inputs()
        .iter()
        .map(|r| {
            let v = r.to_array();
            match plane {
                Some(n) => project_to_plane(v, n),
                None => sphere::normalize(v),
            }
        })
        .collect();
    let mut probs = e0.probabilities();
    let mut dropped = 0;
    let mut iterations = 0;
    let mut gnorm = f64::INFINITY;
    let mut chi = f64::NEG_INFINITY;

    while iterations < opts.max_iterations {
        merge_coincident(&mut points, &mut probs, &mut dropped);
        if points.len() == 1 {
            chi = 0.0;
            gnorm = 0.0;
            break;
        }
        let obj = ChiObjective {
            channel: ch,
            charts: charts_for(&points, plane),
        };
        let angle_dim = obj.dim() - (points.len() - 1);
        let mut x = vec![0.0; obj.dim()];
        x[angle_dim..].copy_from_slice(&probs[..points.len() - 1]);
        chi = obj.value(&x);
        let g = obj.gradient(&x);
        gnorm = optim::norm(&g);
        if gnorm <= opts.gradient_tolerance {
            break;
        }
        iterations += 1;
        let hess = optim::fd_hessian(|y| obj.gradient(y), &x, 1e-5);
        let mut d = optim::modified_newton_ascent(&hess, &g);
        if d.iter().any(|v| !v.is_finite()) {
            d = g.clone();
        }
        // angular moves capped; probabilities may only travel halfway to zero
        let ang = optim::norm(&d[..angle_dim]);
        let mut t_max: f64 = if ang > 0.3 { 0.3 / ang } else { 1.0 };
        let dp_last: f64 = -d[angle_dim..].iter().sum::<f64>();
        for (i, p) in probs.iter().enumerate() {
            let dpi = if i + 1 < points.len() {
                d[angle_dim + i]
            } else {
                dp_last
            };
            if dpi < 0.0 {
                t_max = t_max.min(0.5 * p / -dpi);
            }
        }
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let mut t = t_max.min(1.0);
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            let v = obj.value(&cand);
            if v >= chi + 1e-4 * t * slope - 1e-15 * (1.0 + chi.abs()) {
                accepted = Some(cand);
                break;
            }
            t *= 0.5;
        }
        let Some(xn) = accepted else {
            break;
        };
        let (pts, pr) = obj.unpack(&xn);
        points = pts;
        probs = pr;
        // weights driven to the boundary leave the support
        let before = points.len();
        let keep: Vec<bool> = probs.iter().map(|&p| p > 1e-9).collect();
        if keep.iter().any(|k| !k) && before > 1 {
            let mut i = 0;
            points.retain(|_| {
                i += 1;
                keep[i - 1]
            });
            probs.retain(|&p| p > 1e-9);
            let total: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= total);
            dropped += before - points.len();
        }
    }

    if gnorm > opts.gradient_tolerance.sqrt() {
        return Err(Error::NoConvergence {
            stage: "Newton refinement",
            iterations,
            best_value: chi,
            residual: gnorm,
            best_iterate: points
                .iter()
                .zip(&probs)
                .flat_map(|(r, p)| [*p, r[0], r[1], r[2]])
                .collect(),
        });
    }
    let entries = points
        .iter()
        .zip(&probs)
        .map(|(r, p)| EnsembleEntry::new(*p, BlochVector::from_array(*r)))
        .collect();
    Ok(Refined {
        ensemble: Ensemble::from_weights(entries)?,
        chi,
        gradient_norm: gnorm,
        iterations,
        dropped,
    })
}

fn merge_coincident(points: &mut Vec<Vec3>, probs: &mut Vec<f64>, dropped: &mut usize) {
    let mut i = 0;
    while i < points.len() {
        let mut j = i + 1;
        while j < points.len() {
            if sphere::angular_distance(points[i], points[j]) < 1e-6 {
                probs[i] += probs[j];
                points.remove(j);
                probs.remove(j);
                *dropped += 1;
            } else {
                j += 1;
            }
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::solver::holevo_chi;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table1() -> Ensemble {
        reference::table1_ensemble()
    }

    #[test]
    fn analytic_gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ch = reference::four_state_channel();
        for _ in 0..100 {
            let n = rng.random_range(2..=4);
            let pts: Vec<Vec3> = (0..n)
                .map(|_| {
                    sphere::normalize([
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    ])
                })
                .collect();
            let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= total);
            let obj = ChiObjective {
                channel: &ch,
                charts: charts_for(&pts, None),
            };
            let mut x: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-0.05..0.05)).collect();
            x.extend_from_slice(&w[..n - 1]);
            let g = obj.gradient(&x);
            let fd = optim::fd_gradient(|y| obj.value(y), &x, 1e-6);
            for (a, b) in g.iter().zip(&fd) {
                let rel = (a - b).abs() / a.abs().max(1e-3);
                assert!(rel <= 1e-5, "analytic {a} vs fd {b}");
            }
        }
    }

    #[test]
    fn refines_published_four_state_ensemble() {
        let ch = reference::four_state_channel();
        let r = newton_refine(&ch, &table1(), &RefineOptions::default()).unwrap();
        assert!(r.gradient_norm <= 1e-10);
        assert!(
            (r.chi - reference::FOUR_STATE_CAPACITY).abs() < 1e-9,
            "{}",
            r.chi
        );
        assert_eq!(r.ensemble.len(), 4);
        for (e, want) in r.ensemble.entries().iter().zip(reference::TABLE1_INPUTS) {
            assert!(e.input.angular_distance(want) < 1e-6);
        }
    }

    #[test]
    fn planar_three_state_optimum() {
        let ch = reference::four_state_channel();
        let start = reference::table3_planar_ensemble();
        let r = newton_refine(&ch, &start, &RefineOptions::xz_plane()).unwrap();
        assert_eq!(r.ensemble.len(), 3);
        assert!(
            (r.chi - reference::TABLE3_PLANAR_CAPACITY).abs() < 1e-9,
            "{}",
            r.chi
        );
        assert!((holevo_chi(&ch, &r.ensemble) - r.chi).abs() < 1e-14);
    }

    #[test]
    fn identity_antipodal_pair() {
        let e = Ensemble::from_weights(vec![
            EnsembleEntry::new(
                0.3,
                BlochVector::new_unchecked(0.1, 0.0, 0.995).normalized(),
            ),
            EnsembleEntry::new(
                0.7,
                BlochVector::new_unchecked(0.0, 0.05, -1.0).normalized(),
            ),
        ])
        .unwrap();
        let r = newton_refine(&QubitChannel::identity(), &e, &RefineOptions::default()).unwrap();
        assert!((r.chi - 1.0).abs() < 1e-12);
        for p in r.ensemble.probabilities() {
            assert!((p - 0.5).abs() < 1e-8);
        }
    }
}
