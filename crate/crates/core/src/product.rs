//! Tensor square `Gamma (x) Gamma` of a qubit channel on two-qubit pure states.
//!
//! For a reference average input `rho_avg` the additivity bound is
//! `C(Gamma (x) Gamma) <= sup_w G(w)` with
//! `G(w) = H[(Gamma (x) Gamma)(w), Gamma(rho_avg) (x) Gamma(rho_avg)]`, and it
//! suffices to scan pure states in Schmidt form. The module also contains the
//! `mu`-channel example showing that the output entropy along a Schmidt family
//! need not be concave in `p`.

use std::f64::consts::PI;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ZERO};
use crate::optim::{self, Seek, SphereFunction};
use crate::qubit::{self, BlochVector, DensityMatrix, QubitChannel, QubitLog};
use crate::reference;
use crate::sphere::{self, Vec3};

/// Choi eigenvalues at or below this give no Kraus operator.
pub const KRAUS_THRESHOLD: f64 = 1e-12;

/// Operator-sum form `Gamma(rho) = sum_k A_k rho A_k^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    ops: Vec<CMatrix>,
}

/// Kraus operators from the eigenvectors of the Choi matrix.
pub fn kraus_from_choi(ch: &QubitChannel) -> Result<KrausSet> {
    ch.ensure_cp()?;
    let (values, vectors) = linalg::hermitian_eigen(&ch.choi_unnormalized());
    let mut ops = Vec::new();
    // largest first
    for k in (0..4).rev() {
        let mu = values[k];
        if mu <= KRAUS_THRESHOLD {
            continue;
        }
        let s = mu.sqrt();
        // Choi index 2 i + a holds input i, output a
        let a = CMatrix::from_fn(2, 2, |out, inp| vectors[(2 * inp + out, k)] * s);
        ops.push(a);
    }
    Ok(KrausSet { ops })
}

impl KrausSet {
    pub fn operators(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `sum_k A_k rho A_k^dagger`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.ops
            .iter()
            .fold(CMatrix::zeros(rho.nrows(), rho.ncols()), |acc, a| {
                acc + a * rho * a.adjoint()
            })
    }

    /// `|| sum_k A_k^dagger A_k - I ||` (max entry).
    pub fn completeness_defect(&self) -> f64 {
        let s = self
            .ops
            .iter()
            .fold(CMatrix::zeros(2, 2), |acc, a| acc + a.adjoint() * a);
        (s - CMatrix::identity(2, 2))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// All products `A_i (x) A_j`.
    pub fn tensor_square(&self) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(self.ops.len() * self.ops.len());
        for a in &self.ops {
            for b in &self.ops {
                out.push(linalg::kron(a, b));
            }
        }
        out
    }
}

/// Two-qubit pure state
/// `sqrt(p) |u>|v> + e^{i nu} sqrt(1-p) |u_perp>|v_perp>` with
/// `|u> = (cos theta_u, e^{i phi_u} sin theta_u)` and
/// `|u_perp> = (e^{-i phi_u} sin theta_u, -cos theta_u)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SchmidtState {
    pub p: f64,
    pub theta_u: f64,
    pub phi_u: f64,
    pub theta_v: f64,
    pub phi_v: f64,
    pub nu: f64,
}

impl SchmidtState {
    /// Product state `|u>|v>` of two pure inputs.
    pub fn product(u: BlochVector, v: BlochVector) -> Self {
        let (tu, pu) = qubit_angles(u);
        let (tv, pv) = qubit_angles(v);
        Self {
            p: 1.0,
            theta_u: tu,
            phi_u: pu,
            theta_v: tv,
            phi_v: pv,
            nu: 0.0,
        }
    }

    /// Bloch vector of `|u>`.
    pub fn u(&self) -> BlochVector {
        BlochVector::from_array(state_bloch(self.theta_u, self.phi_u))
    }

    /// Bloch vector of `|v>`.
    pub fn v(&self) -> BlochVector {
        BlochVector::from_array(state_bloch(self.theta_v, self.phi_v))
    }
}

/// `(theta, phi)` with `(cos theta, e^{i phi} sin theta)` representing `r`.
fn qubit_angles(r: BlochVector) -> (f64, f64) {
    // from_angles uses the same half-angle convention
    let (half_polar, azimuth) = r.angles();
    (half_polar, azimuth)
}

fn state_bloch(theta: f64, phi: f64) -> Vec3 {
    let s = (2.0 * theta).sin();
    [s * phi.cos(), s * phi.sin(), (2.0 * theta).cos()]
}

fn ket(theta: f64, phi: f64) -> [C64; 2] {
    [
        C64::new(theta.cos(), 0.0),
        C64::from_polar(theta.sin(), phi),
    ]
}

fn ket_perp(theta: f64, phi: f64) -> [C64; 2] {
    [
        C64::from_polar(theta.sin(), -phi),
        C64::new(-theta.cos(), 0.0),
    ]
}

fn kron2(a: [C64; 2], b: [C64; 2]) -> [C64; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// State vector of a pure qubit with the given Bloch vector.
pub fn bloch_ket(r: BlochVector) -> [C64; 2] {
    let (theta, phi) = qubit_angles(r);
    ket(theta, phi)
}

/// Amplitudes in the basis `|00>, |01>, |10>, |11>`.
pub fn schmidt_vector(s: &SchmidtState) -> [C64; 4] {
    let uv = kron2(ket(s.theta_u, s.phi_u), ket(s.theta_v, s.phi_v));
    let perp = kron2(ket_perp(s.theta_u, s.phi_u), ket_perp(s.theta_v, s.phi_v));
    let a = s.p.clamp(0.0, 1.0).sqrt();
    let b = C64::from_polar((1.0 - s.p).clamp(0.0, 1.0).sqrt(), s.nu);
    let mut out = [ZERO; 4];
    for k in 0..4 {
        out[k] = uv[k] * a + perp[k] * b;
    }
    out
}

/// `Gamma (x) Gamma` prepared for repeated evaluation, together with the
/// logarithm of a product reference state.
#[derive(Clone, Debug)]
pub struct ProductChannel {
    channel: QubitChannel,
    kraus: KrausSet,
    pairs: Vec<CMatrix>,
}

impl ProductChannel {
    pub fn new(ch: &QubitChannel) -> Result<Self> {
        let kraus = kraus_from_choi(ch)?;
        let pairs = kraus.tensor_square();
        Ok(Self {
            channel: *ch,
            kraus,
            pairs,
        })
    }

    pub fn channel(&self) -> &QubitChannel {
        &self.channel
    }

    pub fn kraus(&self) -> &KrausSet {
        &self.kraus
    }

    /// `(Gamma (x) Gamma)(omega)` for a 4×4 operator.
    pub fn apply(&self, omega: &CMatrix) -> CMatrix {
        self.pairs
            .iter()
            .fold(CMatrix::zeros(4, 4), |acc, k| acc + k * omega * k.adjoint())
    }

    /// Output for the pure state `psi` (need not be normalized).
    pub fn apply_pure(&self, psi: &[C64; 4]) -> DensityMatrix {
        let v = DVector::from_column_slice(psi);
        let mut out = CMatrix::zeros(4, 4);
        for k in &self.pairs {
            let w = k * &v;
            out += &w * w.adjoint();
        }
        DensityMatrix::from_matrix_unchecked(out)
    }

    pub fn output(&self, s: &SchmidtState) -> DensityMatrix {
        self.apply_pure(&schmidt_vector(s))
    }
}

/// `(Gamma (x) Gamma)(|Psi><Psi|)` for a Schmidt state.
pub fn product_output(ch: &QubitChannel, s: &SchmidtState) -> Result<DensityMatrix> {
    Ok(ProductChannel::new(ch)?.output(s))
}

/// The two parts of `G = -S(out) - Tr[out log2(sigma (x) sigma)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GTerms {
    pub entropy: f64,
    /// `Tr[out log2(sigma (x) sigma)]`; affine in `p` along a Schmidt family.
    pub trace_term: f64,
    pub value: f64,
}

/// Evaluates `G` against a fixed product reference `sigma (x) sigma`,
/// `sigma = Gamma(rho_avg)`.
#[derive(Clone, Debug)]
pub struct GFunction {
    product: ProductChannel,
    /// `log2(sigma (x) sigma)`, or `None` for a pure `sigma`.
    log_pair: Option<CMatrix>,
    sigma: BlochVector,
}

impl GFunction {
    pub fn new(ch: &QubitChannel, rho_avg: BlochVector) -> Result<Self> {
        let sigma = ch.apply(rho_avg);
        let log_pair = QubitLog::of(sigma).map(|l| {
            let m = l.matrix();
            let id = CMatrix::identity(2, 2);
            linalg::kron(&m, &id) + linalg::kron(&id, &m)
        });
        Ok(Self {
            product: ProductChannel::new(ch)?,
            log_pair,
            sigma,
        })
    }

    pub fn product(&self) -> &ProductChannel {
        &self.product
    }

    fn terms_of(&self, out: &DensityMatrix) -> GTerms {
        let entropy = qubit::entropy_matrix(out);
        match &self.log_pair {
            Some(log) => {
                let trace_term = linalg::trace_product(out.matrix(), log).re;
                GTerms {
                    entropy,
                    trace_term,
                    value: -entropy - trace_term,
                }
            }
            None => {
                let m = qubit::bloch_matrix(self.sigma.to_array());
                let s = DensityMatrix::from_matrix_unchecked(linalg::kron(&m, &m));
                let value = qubit::relative_entropy(out, &s).unwrap_or(f64::INFINITY);
                GTerms {
                    entropy,
                    trace_term: f64::NEG_INFINITY,
                    value,
                }
            }
        }
    }

    pub fn terms(&self, s: &SchmidtState) -> GTerms {
        self.terms_of(&self.product.output(s))
    }

    pub fn value(&self, s: &SchmidtState) -> f64 {
        self.terms(s).value
    }

    /// `G` of an arbitrary (normalized on the fly) pure state; `None` for a
    /// zero vector.
    pub fn value_pure(&self, psi: &[C64; 4]) -> Option<f64> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-12 {
            return None;
        }
        let unit = psi.map(|z| z / n);
        Some(self.terms_of(&self.product.apply_pure(&unit)).value)
    }
}

/// `G(omega) = H[(Gamma (x) Gamma)(omega), Gamma(rho_avg) (x) Gamma(rho_avg)]`
/// for a Schmidt state; `+inf` when the output leaves the reference support.
pub fn relent_vs_product_avg(
    ch: &QubitChannel,
    s: &SchmidtState,
    rho_avg: BlochVector,
) -> Result<f64> {
    Ok(GFunction::new(ch, rho_avg)?.value(s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ScanConfig {
    pub samples: usize,
    pub ascents: usize,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            ascents: 50,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanResult {
    pub max_g: f64,
    pub argmax: SchmidtState,
    /// `2 C - max_g`.
    pub margin: f64,
    pub two_capacity: f64,
    /// Best sample before the ascents.
    pub best_sample: f64,
    pub samples: usize,
    pub ascents: usize,
    pub seed: u64,
    /// `margin >= -1e-8`.
    pub supports_additivity: bool,
    /// `margin < -1e-6`.
    pub superadditivity_candidate: bool,
}

const SOBOL_BLOCK_BITS: u32 = 16;

/// Point `i` of the scan in the unit 6-cube. sobol_burley takes a 32-bit seed
/// and at most 2^16 indices per seed, so longer scans continue with freshly
/// scrambled blocks.
fn scan_point(i: u32, seed: u64) -> [f64; 6] {
    let seed = (seed ^ (seed >> 32)) as u32;
    let block_seed = seed.wrapping_add((i >> SOBOL_BLOCK_BITS).wrapping_mul(0x9e37_79b9));
    let index = i & ((1 << SOBOL_BLOCK_BITS) - 1);
    std::array::from_fn(|d| f64::from(sobol_burley::sample(index, d as u32, block_seed)))
}

/// Margins separating rounding from a genuine excess over `2C`.
pub const ADDITIVITY_TOLERANCE: f64 = 1e-8;
pub const SUPERADDITIVITY_THRESHOLD: f64 = 1e-6;

fn schmidt_from_unit(u: [f64; 6]) -> SchmidtState {
    SchmidtState {
        p: u[0],
        theta_u: 2.0 * PI * u[1],
        phi_u: 2.0 * PI * u[2],
        theta_v: 2.0 * PI * u[3],
        phi_v: 2.0 * PI * u[4],
        nu: 2.0 * PI * u[5],
    }
}

/// Ascent coordinates: `p = sin^2 s` keeps `p` in `[0, 1]` without bounds.
fn to_coords(s: &SchmidtState) -> Vec<f64> {
    vec![
        s.p.clamp(0.0, 1.0).sqrt().asin(),
        s.theta_u,
        s.phi_u,
        s.theta_v,
        s.phi_v,
        s.nu,
    ]
}

fn from_coords(x: &[f64]) -> SchmidtState {
    SchmidtState {
        p: x[0].sin().powi(2),
        theta_u: x[1],
        phi_u: x[2],
        theta_v: x[3],
        phi_v: x[4],
        nu: x[5],
    }
}

/// Quasi-random scan of `G` over all six Schmidt parameters followed by local
/// ascents from the best samples. `capacity` is the single-channel capacity
/// the result is compared against.
pub fn additivity_scan(
    ch: &QubitChannel,
    rho_avg: BlochVector,
    capacity: f64,
    cfg: &ScanConfig,
) -> Result<ScanResult> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter(
            "at least one sample is needed".into(),
        ));
    }
    let samples = u32::try_from(cfg.samples).map_err(|_| {
        Error::InvalidParameter(format!(
            "{} samples exceed the sequence length",
            cfg.samples
        ))
    })?;
    let g = GFunction::new(ch, rho_avg)?;
    let values: Vec<(f64, SchmidtState)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = schmidt_from_unit(scan_point(i, cfg.seed));
            (g.value(&s), s)
        })
        .collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].0.total_cmp(&values[a].0).then(a.cmp(&b)));
    let (best_sample, best_state) = values[order[0]];
    let ascended: Vec<(f64, SchmidtState)> = order
        .iter()
        .take(cfg.ascents)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| {
            let (x, v) = optim::maximize_fd(
                |x| g.value(&from_coords(x)),
                &to_coords(&values[i].1),
                1e-10,
                100,
            );
            (v, from_coords(&x))
        })
        .collect();
    let (max_g, argmax) = ascended
        .into_iter()
        .fold((best_sample, best_state), |best, c| {
            if c.0 > best.0 {
                c
            } else {
                best
            }
        });
    let two_capacity = 2.0 * capacity;
    let margin = two_capacity - max_g;
    Ok(ScanResult {
        max_g,
        argmax,
        margin,
        two_capacity,
        best_sample,
        samples: cfg.samples,
        ascents: cfg.ascents,
        seed: cfg.seed,
        supports_additivity: margin >= -ADDITIVITY_TOLERANCE,
        superadditivity_candidate: margin < -SUPERADDITIVITY_THRESHOLD,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GSlicePoint {
    pub nu: f64,
    pub p: f64,
    pub entropy: f64,
    pub trace_term: f64,
    pub g: f64,
}

/// `G(p)` at fixed angles `(theta_u, phi_u, theta_v, phi_v)` for every `nu`.
pub fn gslice(
    ch: &QubitChannel,
    rho_avg: BlochVector,
    angles: [f64; 4],
    nus: &[f64],
    p_grid: &[f64],
) -> Result<Vec<GSlicePoint>> {
    if let Some(p) = p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let g = GFunction::new(ch, rho_avg)?;
    let mut out = Vec::with_capacity(nus.len() * p_grid.len());
    for &nu in nus {
        for &p in p_grid {
            let s = SchmidtState {
                p,
                theta_u: angles[0],
                phi_u: angles[1],
                theta_v: angles[2],
                phi_v: angles[3],
                nu,
            };
            let t = g.terms(&s);
            out.push(GSlicePoint {
                nu,
                p,
                entropy: t.entropy,
                trace_term: t.trace_term,
                g: t.value,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairScanResult {
    pub max_g: f64,
    /// `(i, j, k, l)` of the best state `|u_i>|u_j> + e^{i nu}|u_k>|u_l>`.
    pub indices: [usize; 4],
    pub nu: f64,
    pub evaluated: usize,
    /// Combinations that vanish (e.g. `i = k`, `j = l`, `nu = pi`).
    pub skipped: usize,
}

/// `G` on every normalized `|u_i>|u_j> + e^{i nu}|u_k>|u_l>` built from the
/// given pure inputs, for `nu` on a uniform grid of `nu_steps` points in `[0, 2 pi)`.
pub fn nonschmidt_pair_scan(
    ch: &QubitChannel,
    rho_avg: BlochVector,
    inputs: &[BlochVector],
    nu_steps: usize,
) -> Result<PairScanResult> {
    if inputs.is_empty() || nu_steps == 0 {
        return Err(Error::InvalidParameter(
            "need inputs and at least one nu".into(),
        ));
    }
    let g = GFunction::new(ch, rho_avg)?;
    let kets: Vec<[C64; 2]> = inputs.iter().map(|r| bloch_ket(*r)).collect();
    let n = kets.len();
    let mut combos = Vec::with_capacity(n.pow(4) * nu_steps);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for step in 0..nu_steps {
                        combos.push(([i, j, k, l], 2.0 * PI * step as f64 / nu_steps as f64));
                    }
                }
            }
        }
    }
    let values: Vec<Option<f64>> = combos
        .par_iter()
        .map(|&([i, j, k, l], nu)| {
            let a = kron2(kets[i], kets[j]);
            let b = kron2(kets[k], kets[l]);
            let phase = C64::from_polar(1.0, nu);
            let psi = [
                a[0] + phase * b[0],
                a[1] + phase * b[1],
                a[2] + phase * b[2],
                a[3] + phase * b[3],
            ];
            g.value_pure(&psi)
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, [0; 4], 0.0);
    let mut skipped = 0;
    for (v, (idx, nu)) in values.iter().zip(&combos) {
        match v {
            Some(v) if *v > best.0 => best = (*v, *idx, *nu),
            Some(_) => {}
            None => {
                skipped += 1;
                log::debug!("pair scan: {idx:?} at nu = {nu} has zero norm, skipped");
            }
        }
    }
    Ok(PairScanResult {
        max_g: best.0,
        indices: best.1,
        nu: best.2,
        evaluated: combos.len() - skipped,
        skipped,
    })
}

/// `mu`-channel output eigenvalues for `sqrt(p)|00> + sqrt(1-p)|11>`.
pub fn mu_channel_eigenvalues(mu: f64, p: f64) -> [f64; 4] {
    let root = (1.0 + (16.0 * mu.powi(4) - 4.0) * p * (1.0 - p)).sqrt();
    [
        3.0 / 16.0,
        3.0 / 16.0,
        (5.0 + 4.0 * root) / 16.0,
        (5.0 - 4.0 * root) / 16.0,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curvature {
    Concave,
    Convex,
    Flat,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePoint {
    pub p: f64,
    pub f_numeric: f64,
    pub f_closed_form: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConcavityCurve {
    pub mu: f64,
    pub points: Vec<CurvePoint>,
    /// Largest `|f_numeric - f_closed_form|`.
    pub max_deviation: f64,
    /// `f(p - h) - 2 f(p) + f(p + h)` at interior points of the numeric curve.
    pub second_differences: Vec<f64>,
    pub curvature: Curvature,
}

/// Second differences within this of zero count as neither sign.
pub const CURVATURE_THRESHOLD: f64 = 1e-9;

/// `f(p) = S[(Gamma (x) Gamma)(|psi><psi|)]` for the `mu`-channel
/// `(mu x, mu y, z/2)` and `|psi> = sqrt(p)|00> + sqrt(1-p)|11>`, computed
/// through the Kraus form and compared with the closed-form spectrum.
pub fn concavity_curve(mu: f64, p_grid: &[f64]) -> Result<ConcavityCurve> {
    if !(0.0..=0.75).contains(&mu) {
        return Err(Error::InvalidParameter(format!(
            "mu = {mu} outside [0, 0.75]"
        )));
    }
    if let Some(p) = p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let product = ProductChannel::new(&reference::mu_channel(mu))?;
    let points: Vec<CurvePoint> = p_grid
        .iter()
        .map(|&p| {
            let psi = [
                C64::new(p.sqrt(), 0.0),
                ZERO,
                ZERO,
                C64::new((1.0 - p).sqrt(), 0.0),
            ];
            CurvePoint {
                p,
                f_numeric: qubit::entropy_matrix(&product.apply_pure(&psi)),
                f_closed_form: qubit::spectrum_entropy(&mu_channel_eigenvalues(mu, p)),
            }
        })
        .collect();
    let max_deviation = points
        .iter()
        .map(|c| (c.f_numeric - c.f_closed_form).abs())
        .fold(0.0, f64::max);
    let second_differences: Vec<f64> = points
        .windows(3)
        .map(|w| w[0].f_numeric - 2.0 * w[1].f_numeric + w[2].f_numeric)
        .collect();
    let pos = second_differences.iter().any(|d| *d > CURVATURE_THRESHOLD);
    let neg = second_differences.iter().any(|d| *d < -CURVATURE_THRESHOLD);
    let curvature = match (pos, neg) {
        (false, false) => Curvature::Flat,
        (true, false) => Curvature::Convex,
        (false, true) => Curvature::Concave,
        (true, true) => Curvature::Mixed,
    };
    Ok(ConcavityCurve {
        mu,
        points,
        max_deviation,
        second_differences,
        curvature,
    })
}

/// Uniform grid `0, h, ..., 1` with `h = 1 / steps`.
pub fn uniform_p_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

/// `|Gamma(r)|` on the sphere; its maximum gives the minimal output entropy.
struct OutputLength<'a>(&'a QubitChannel);

impl SphereFunction for OutputLength<'_> {
    fn value(&self, r: Vec3) -> f64 {
        sphere::norm(self.0.apply_array(r))
    }

    fn gradient(&self, r: Vec3) -> Vec3 {
        let g = self.0.apply_array(r);
        let n = sphere::norm(g);
        if n == 0.0 {
            return [0.0; 3];
        }
        self.0.linear_transpose(sphere::scale(g, 1.0 / n))
    }
}

/// Largest Bloch length of an output; above one the map is not positive.
pub fn max_output_length(ch: &QubitChannel) -> f64 {
    let f = OutputLength(ch);
    sphere::lat_long_mesh(40)
        .into_iter()
        .map(|p| optim::sphere_newton(&f, p, Seek::Maximum, 1e-13, 100).value)
        .fold(0.0, f64::max)
}

/// `min_r S(Gamma(r))` over pure inputs: the output of largest Bloch length.
pub fn min_output_entropy(ch: &QubitChannel) -> f64 {
    qubit::entropy_of_length(max_output_length(ch).min(1.0))
}

/// `2 min S(Gamma(rho))` for the `mu`-channel: the output entropy of the best
/// product input of `Gamma (x) Gamma`.
pub fn min_output_entropy_product_floor(mu: f64) -> Result<f64> {
    if !(0.0..=0.75).contains(&mu) {
        return Err(Error::InvalidParameter(format!(
            "mu = {mu} outside [0, 0.75]"
        )));
    }
    Ok(2.0 * min_output_entropy(&reference::mu_channel(mu)))
}
