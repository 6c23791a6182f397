//! Newton-type local solvers shared by the refinement, landscape and scan code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::sphere::{self, Chart, Vec3};

/// Central finite-difference Jacobian of a gradient, symmetrized.
pub(crate) fn fd_hessian(grad: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut hess = DMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    for k in 0..n {
        xp[k] = x[k] + h;
        let gp = grad(&xp);
        xp[k] = x[k] - h;
        let gm = grad(&xp);
        xp[k] = x[k];
        for r in 0..n {
            hess[(r, k)] = (gp[r] - gm[r]) / (2.0 * h);
        }
    }
    (&hess + hess.transpose()) * 0.5
}

/// Central finite-difference gradient.
pub(crate) fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|k| {
            xp[k] = x[k] + h;
            let fp = f(&xp);
            xp[k] = x[k] - h;
            let fm = f(&xp);
            xp[k] = x[k];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Ascent direction `sum_k (v_k . g) / max(|l_k|, floor) v_k` from the
/// eigen-decomposition of the Hessian. Equals the Newton step at a
/// nondegenerate maximum and stays an ascent direction elsewhere.
pub(crate) fn modified_newton_ascent(hess: &DMatrix<f64>, grad: &[f64]) -> Vec<f64> {
    let eig = SymmetricEigen::new(hess.clone());
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-10 * scale;
    let g = DVector::from_column_slice(grad);
    let mut d = DVector::zeros(grad.len());
    for k in 0..grad.len() {
        let v = eig.eigenvectors.column(k);
        let coeff = v.dot(&g) / eig.eigenvalues[k].abs().max(floor);
        d += v * coeff;
    }
    d.iter().copied().collect()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Smooth function on the unit sphere with its Euclidean gradient.
pub(crate) trait SphereFunction {
    fn value(&self, r: Vec3) -> f64;
    fn gradient(&self, r: Vec3) -> Vec3;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Seek {
    Maximum,
    AnyCritical,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct SphereCritical {
    pub point: Vec3,
    pub value: f64,
    pub gradient_norm: f64,
    /// Eigenvalues of the Riemannian Hessian, ascending.
    pub hessian: [f64; 2],
    pub converged: bool,
}

fn chart_gradient<F: SphereFunction>(f: &F, chart: &Chart, u: &[f64]) -> Vec<f64> {
    chart.pullback(u, f.gradient(chart.point(u)))
}

fn sym2_eigen(h: &DMatrix<f64>) -> ([f64; 2], [[f64; 2]; 2]) {
    let eig = SymmetricEigen::new(h.clone());
    let (a, b) = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    (
        [eig.eigenvalues[a], eig.eigenvalues[b]],
        [
            [eig.eigenvectors[(0, a)], eig.eigenvectors[(1, a)]],
            [eig.eigenvectors[(0, b)], eig.eigenvectors[(1, b)]],
        ],
    )
}

/// Riemannian Hessian eigenvalues at `r` (exact at critical points).
pub(crate) fn sphere_hessian<F: SphereFunction>(f: &F, r: Vec3) -> [f64; 2] {
    let chart = Chart::full(r);
    let h = fd_hessian(|u| chart_gradient(f, &chart, u), &[0.0, 0.0], 1e-5);
    sym2_eigen(&h).0
}

/// Newton iteration on the sphere in a chart re-centred at every step.
pub(crate) fn sphere_newton<F: SphereFunction>(
    f: &F,
    start: Vec3,
    seek: Seek,
    tol: f64,
    max_iter: usize,
) -> SphereCritical {
    const MAX_STEP: f64 = 0.1;
    let mut r = sphere::normalize(start);
    let mut value = f.value(r);
    let mut converged = false;
    let mut gnorm = f64::INFINITY;
    for _ in 0..max_iter {
        let chart = Chart::full(r);
        let g = chart_gradient(f, &chart, &[0.0, 0.0]);
        gnorm = norm(&g);
        if gnorm <= tol {
            converged = true;
            break;
        }
        let h = fd_hessian(|u| chart_gradient(f, &chart, u), &[0.0, 0.0], 1e-5);
        let mut d = match seek {
            Seek::Maximum => modified_newton_ascent(&h, &g),
            Seek::AnyCritical => {
                let (vals, vecs) = sym2_eigen(&h);
                let floor = 1e-12 * vals[0].abs().max(vals[1].abs()).max(1.0);
                let mut d = vec![0.0; 2];
                for k in 0..2 {
                    let c = (vecs[k][0] * g[0] + vecs[k][1] * g[1]) / safe_div(vals[k], floor);
                    d[0] -= c * vecs[k][0];
                    d[1] -= c * vecs[k][1];
                }
                d
            }
        };
        let len = norm(&d);
        if len > MAX_STEP {
            d.iter_mut().for_each(|x| *x *= MAX_STEP / len);
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let u = [t * d[0], t * d[1]];
            let cand = chart.point(&u);
            let ok = match seek {
                Seek::Maximum => {
                    let v = f.value(cand);
                    let slope = g[0] * u[0] + g[1] * u[1];
                    v >= value + 1e-4 * slope - 1e-15 * (1.0 + value.abs())
                }
                Seek::AnyCritical => {
                    let gc = norm(&chart_gradient(f, &Chart::full(cand), &[0.0, 0.0]));
                    gc < gnorm
                }
            };
            if ok {
                r = cand;
                value = f.value(r);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            if seek == Seek::AnyCritical {
                // take a short damped step to leave a stalled basin
                r = chart.point(&[d[0] / 16.0, d[1] / 16.0]);
                value = f.value(r);
            } else {
                break;
            }
        }
    }
    if !converged {
        let chart = Chart::full(r);
        gnorm = norm(&chart_gradient(f, &chart, &[0.0, 0.0]));
        converged = gnorm <= tol;
    }
    SphereCritical {
        point: r,
        value,
        gradient_norm: gnorm,
        hessian: sphere_hessian(f, r),
        converged,
    }
}

fn safe_div(lambda: f64, floor: f64) -> f64 {
    if lambda.abs() >= floor {
        lambda
    } else if lambda >= 0.0 {
        floor
    } else {
        -floor
    }
}

/// Unconstrained local maximization in `R^n` with finite-difference
/// derivatives and modified Newton steps.
pub(crate) fn maximize_fd(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    grad_tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    for _ in 0..max_iter {
        let g = fd_gradient(&f, &x, 1e-6);
        if norm(&g) <= grad_tol {
            break;
        }
        let h = fd_hessian(|y| fd_gradient(&f, y, 1e-5), &x, 1e-4);
        let mut d = modified_newton_ascent(&h, &g);
        let len = norm(&d);
        if len > 0.5 {
            d.iter_mut().for_each(|v| *v *= 0.5 / len);
        }
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let cand: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            let fc = f(&cand);
            if fc >= fx + 1e-4 * t * slope - 1e-15 * (1.0 + fx.abs()) {
                moved = fc > fx || t == 1.0;
                x = cand;
                fx = fc;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (x, fx)
}
