//! Concave maximization of the Holevo quantity over weights on a fixed point set.
//!
//! Pairwise conditional-gradient ascent with exact line search. The stopping
//! rule is the relative-entropy gap `max_j H[Gamma(x_j), Gamma(avg)] - chi`,
//! which bounds the distance to the optimum over the point set.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qubit::{self, BlochVector, QubitChannel, QubitLog};
use crate::sphere::{self, Vec3};

use super::{Ensemble, EnsembleEntry};

pub const DEFAULT_MAX_ITERATIONS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexSolution {
    pub probabilities: Vec<f64>,
    pub chi: f64,
    pub dual_gap: f64,
    pub iterations: usize,
}

/// Maximize `chi` over probability vectors on `points`.
pub fn maximize_over_probs(
    ch: &QubitChannel,
    points: &[BlochVector],
    tol: f64,
) -> Result<SimplexSolution> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("no points to weight".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let outputs: Vec<Vec3> = points
        .iter()
        .map(|p| ch.apply_array(p.to_array()))
        .collect();
    maximize_outputs(&outputs, tol, DEFAULT_MAX_ITERATIONS, None)
}

pub(crate) fn maximize_outputs(
    outputs: &[Vec3],
    tol: f64,
    max_iterations: usize,
    start: Option<&[f64]>,
) -> Result<SimplexSolution> {
    let n = outputs.len();
    let entropies: Vec<f64> = outputs.iter().map(|&g| qubit::entropy_array(g)).collect();
    if n == 1 {
        return Ok(SimplexSolution {
            probabilities: vec![1.0],
            chi: 0.0,
            dual_gap: 0.0,
            iterations: 0,
        });
    }
    let mut p = match start {
        Some(s) => {
            let total: f64 = s.iter().sum();
            s.iter().map(|v| v / total).collect()
        }
        None => vec![1.0 / n as f64; n],
    };
    let average = |p: &[f64]| {
        let mut a = [0.0; 3];
        for (w, g) in p.iter().zip(outputs) {
            a = sphere::add(a, sphere::scale(*g, *w));
        }
        a
    };
    let mut avg = average(&p);
    let mut rel = vec![0.0; n];
    let mut best_gap = f64::INFINITY;
    for it in 0..max_iterations {
        if it % 4096 == 4095 {
            avg = average(&p);
        }
        let log = match QubitLog::of_array(avg) {
            Some(l) => l,
            None => {
                // all weight on one pure output: move a little mass to the farthest point
                let far = (0..n)
                    .max_by(|&a, &b| {
                        sphere::norm(sphere::sub(outputs[a], avg))
                            .total_cmp(&sphere::norm(sphere::sub(outputs[b], avg)))
                    })
                    .unwrap_or(0);
                p.iter_mut().for_each(|v| *v *= 0.5);
                p[far] += 0.5;
                avg = average(&p);
                continue;
            }
        };
        let mut chi = 0.0;
        let mut jmax = 0;
        let mut jmin = usize::MAX;
        for j in 0..n {
            let h = -entropies[j] - log.expectation(outputs[j]);
            rel[j] = h;
            chi += p[j] * h;
            if h > rel[jmax] {
                jmax = j;
            }
            if p[j] > 0.0 && (jmin == usize::MAX || h < rel[jmin]) {
                jmin = j;
            }
        }
        let gap = rel[jmax] - chi;
        best_gap = best_gap.min(gap);
        if gap <= tol || jmin == jmax {
            let chi = qubit::entropy_array(avg)
                - p.iter().zip(&entropies).map(|(a, b)| a * b).sum::<f64>();
            return Ok(SimplexSolution {
                probabilities: p,
                chi,
                dual_gap: gap.max(0.0),
                iterations: it,
            });
        }
        let delta = sphere::sub(outputs[jmax], outputs[jmin]);
        let ds = entropies[jmin] - entropies[jmax];
        let slope = |t: f64| {
            let v = sphere::add(avg, sphere::scale(delta, t));
            sphere::dot(qubit::entropy_gradient(v), delta) + ds
        };
        let t_max = p[jmin];
        let t = if slope(t_max) >= 0.0 {
            t_max
        } else {
            let (mut lo, mut hi) = (0.0, t_max);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if slope(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        if t >= t_max {
            p[jmax] += p[jmin];
            p[jmin] = 0.0;
        } else {
            p[jmax] += t;
            p[jmin] -= t;
        }
        avg = sphere::add(avg, sphere::scale(delta, t));
    }
    let chi = qubit::entropy_array(avg) - p.iter().zip(&entropies).map(|(a, b)| a * b).sum::<f64>();
    Err(Error::NoConvergence {
        stage: "simplex maximization",
        iterations: max_iterations,
        best_value: chi,
        residual: best_gap,
        best_iterate: p,
    })
}

/// Keep points whose weight exceeds `threshold` (at most `max_entries` of the
/// heaviest), renormalized.
pub fn extract_support(
    probs: &[f64],
    points: &[BlochVector],
    threshold: f64,
    max_entries: usize,
) -> Result<Ensemble> {
    let mut kept: Vec<(f64, BlochVector)> = probs
        .iter()
        .zip(points)
        .filter(|(p, _)| **p > threshold)
        .map(|(p, x)| (*p, *x))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptySupport { threshold });
    }
    kept.sort_by(|a, b| b.0.total_cmp(&a.0));
    kept.truncate(max_entries.max(1));
    Ensemble::from_weights(
        kept.into_iter()
            .map(|(p, x)| EnsembleEntry::new(p, x))
            .collect(),
    )
}

/// Merge entries whose inputs lie within `radius` (angular) of a heavier
/// entry; merged inputs are the weighted mean projected back to the sphere.
pub fn cluster_support(e: &Ensemble, radius: f64) -> Ensemble {
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&a, &b| {
        e.entries()[b]
            .probability
            .total_cmp(&e.entries()[a].probability)
    });
    let mut clusters: Vec<(BlochVector, f64, Vec3)> = Vec::new();
    for i in order {
        let entry = e.entries()[i];
        let target = clusters
            .iter_mut()
            .find(|(seed, _, _)| seed.angular_distance(entry.input) <= radius);
        match target {
            Some((_, w, acc)) => {
                *w += entry.probability;
                *acc = sphere::add(
                    *acc,
                    sphere::scale(entry.input.to_array(), entry.probability),
                );
            }
            None => clusters.push((
                entry.input,
                entry.probability,
                sphere::scale(entry.input.to_array(), entry.probability),
            )),
        }
    }
    let entries = clusters
        .into_iter()
        .map(|(seed, w, acc)| {
            let dir = if sphere::norm(acc) > 1e-12 {
                sphere::normalize(acc)
            } else {
                seed.to_array()
            };
            EnsembleEntry::new(w, BlochVector::from_array(dir))
        })
        .collect();
    Ensemble::from_weights(entries).expect("clusters carry positive weight")
}

/// Shrink the support while the outputs are affinely dependent (always the
/// case beyond four entries), moving weight along affine null directions so the
/// average output is unchanged and `chi` does not decrease.
pub fn reduce_support(ch: &QubitChannel, e: &Ensemble) -> Ensemble {
    let mut entries: Vec<EnsembleEntry> = e.entries().to_vec();
    loop {
        let n = entries.len();
        if n <= 1 {
            break;
        }
        let outputs: Vec<Vec3> = entries
            .iter()
            .map(|en| ch.apply_array(en.input.to_array()))
            .collect();
        let a = DMatrix::from_fn(4, n, |r, c| if r == 3 { 1.0 } else { outputs[c][r] });
        let gram = a.transpose() * &a;
        let eig = nalgebra::SymmetricEigen::new(gram);
        let (kmin, lmin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, v)| (k, *v))
            .unwrap();
        let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(*v));
        let dependent = n > 4 || lmin <= 1e-14 * scale.max(1.0);
        if !dependent {
            break;
        }
        let mut v: Vec<f64> = eig.eigenvectors.column(kmin).iter().copied().collect();
        let ds: f64 = v
            .iter()
            .zip(&outputs)
            .map(|(vi, g)| vi * qubit::entropy_array(*g))
            .sum();
        if ds > 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let mut step = f64::INFINITY;
        let mut hit = 0;
        for (i, (vi, en)) in v.iter().zip(&entries).enumerate() {
            if *vi < 0.0 {
                let s = en.probability / -vi;
                if s < step {
                    step = s;
                    hit = i;
                }
            }
        }
        if !step.is_finite() {
            break;
        }
        for (vi, en) in v.iter().zip(entries.iter_mut()) {
            en.probability += step * vi;
        }
        entries.remove(hit);
        entries.retain(|en| en.probability > 1e-14);
    }
    Ensemble::from_weights(entries).expect("support reduction keeps positive weight")
}
