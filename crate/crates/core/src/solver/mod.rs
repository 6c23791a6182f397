//! Holevo capacity by mesh approximation, simplex maximization and Newton
//! refinement, with a supporting-hyperplane certificate.
//!
//! Pipeline for one start: rotate a latitude/longitude mesh, maximize `chi`
//! over weights on the mesh, prune and cluster the support, reduce it to at
//! most four points, refine with Newton's method, then certify with the
//! relative-entropy dual gap and the hyperplane. Several meshes and rotations
//! are tried because `chi` has local maxima.

mod certificate;
mod mesh;
mod refine;
mod simplex;

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{self, BlochVector, QubitChannel, QubitLog};
use crate::relent;
use crate::sphere::{self, Rotation};

pub use certificate::{supporting_hyperplane, verify_hyperplane, Hyperplane};
pub use mesh::{mesh_points, MeshSpec};
pub use refine::{newton_refine, ChiObjective, RefineOptions, Refined};
pub use simplex::{
    cluster_support, extract_support, maximize_over_probs, reduce_support, SimplexSolution,
};

/// Allowed deviation of the probability sum from one.
const SUM_TOLERANCE: f64 = 1e-12;
/// Slack for ensembles read back from rounded text.
const READ_TOLERANCE: f64 = 1e-10;
/// Most inputs an optimal qubit ensemble needs.
pub const MAX_SUPPORT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    pub probability: f64,
    pub input: BlochVector,
}

impl EnsembleEntry {
    pub fn new(probability: f64, input: BlochVector) -> Self {
        Self { probability, input }
    }
}

/// Probabilities with input states. Probabilities are positive and sum to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<EnsembleEntry>", into = "Vec<EnsembleEntry>")]
pub struct Ensemble {
    entries: Vec<EnsembleEntry>,
}

impl Ensemble {
    /// Entries must already be normalized.
    pub fn new(entries: Vec<EnsembleEntry>) -> Result<Self> {
        let total: f64 = entries.iter().map(|e| e.probability).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Self::from_weights(entries)
    }

    /// Normalize positive weights into an ensemble.
    pub fn from_weights(mut entries: Vec<EnsembleEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("ensemble has no entries".into()));
        }
        for e in &entries {
            if !(e.probability.is_finite() && e.probability > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "ensemble weight {} is not positive",
                    e.probability
                )));
            }
            BlochVector::new(e.input.x, e.input.y, e.input.z)?;
        }
        let total: f64 = entries.iter().map(|e| e.probability).sum();
        entries.iter_mut().for_each(|e| e.probability /= total);
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }

    pub fn inputs(&self) -> Vec<BlochVector> {
        self.entries.iter().map(|e| e.input).collect()
    }

    /// The average input state.
    pub fn average(&self) -> BlochVector {
        let v = self.entries.iter().fold([0.0; 3], |acc, e| {
            sphere::add(acc, sphere::scale(e.input.to_array(), e.probability))
        });
        BlochVector::from_array(v)
    }

    /// Every input reflected `y -> -y`.
    pub fn reflect_y(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|e| EnsembleEntry::new(e.probability, e.input.reflect_y()))
                .collect(),
        }
    }
}

impl TryFrom<Vec<EnsembleEntry>> for Ensemble {
    type Error = Error;

    /// Deserialization accepts values printed to 12 significant digits: sums
    /// and input norms may be off by `READ_TOLERANCE`; both are renormalized.
    fn try_from(mut entries: Vec<EnsembleEntry>) -> Result<Self> {
        let total: f64 = entries.iter().map(|e| e.probability).sum();
        if (total - 1.0).abs() > READ_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        for e in &mut entries {
            let n = e.input.norm();
            if n > 1.0 && n <= 1.0 + READ_TOLERANCE {
                e.input = e.input.normalized();
            }
        }
        Self::from_weights(entries)
    }
}

impl From<Ensemble> for Vec<EnsembleEntry> {
    fn from(e: Ensemble) -> Self {
        e.entries
    }
}

/// `chi = S(Gamma(avg)) - sum_i p_i S(Gamma(rho_i))`.
pub fn holevo_chi(ch: &QubitChannel, e: &Ensemble) -> f64 {
    let mut avg = [0.0; 3];
    let mut mean = 0.0;
    for en in e.entries() {
        let g = ch.apply_array(en.input.to_array());
        avg = sphere::add(avg, sphere::scale(g, en.probability));
        mean += en.probability * qubit::entropy_array(g);
    }
    (qubit::entropy_array(avg) - mean).max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct CapacityConfig {
    /// Mesh resolutions tried, each under every rotation.
    pub mesh_sizes: Vec<usize>,
    /// Mesh orientations per resolution; the first is the identity.
    pub rotations: usize,
    pub seed: u64,
    /// Target dual gap.
    pub tolerance: f64,
    /// Dual-gap tolerance for the mesh problems.
    pub simplex_tolerance: f64,
    /// Mesh weights below this fraction of the largest are pruned.
    pub prune_fraction: f64,
    /// Largest support reported.
    pub max_support: usize,
    /// Mesh size of the final certificate checks.
    pub verify_k: usize,
    pub refine: RefineOptions,
    /// Iteration budget of each mesh problem; a start that runs out continues
    /// from its best weights.
    pub simplex_max_iterations: usize,
    /// Rounds of adding the worst-violating inputs when the gap stays open.
    pub augment_rounds: usize,
    /// Run on a channel that fails the complete-positivity check (with a warning).
    pub allow_non_cp: bool,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        Self {
            mesh_sizes: vec![20, 30, 40],
            rotations: 5,
            seed: 0,
            tolerance: 1e-8,
            simplex_tolerance: 1e-9,
            prune_fraction: 1e-4,
            max_support: MAX_SUPPORT,
            verify_k: 200,
            refine: RefineOptions::default(),
            simplex_max_iterations: 200_000,
            augment_rounds: 8,
            allow_non_cp: false,
        }
    }
}

impl CapacityConfig {
    /// Resolutions `{k/2, 3k/4, k}`.
    pub fn with_mesh(mut self, k: usize) -> Self {
        let mut sizes = vec![(k / 2).max(2), (3 * k / 4).max(2), k.max(2)];
        sizes.dedup();
        self.mesh_sizes = sizes;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.mesh_sizes.is_empty() || self.mesh_sizes.iter().any(|&k| k < 2) {
            return Err(Error::InvalidParameter(format!(
                "mesh sizes {:?} must be >= 2",
                self.mesh_sizes
            )));
        }
        if self.rotations == 0 {
            return Err(Error::InvalidParameter(
                "at least one mesh rotation is needed".into(),
            ));
        }
        for (name, v) in [
            ("tolerance", self.tolerance),
            ("simplex tolerance", self.simplex_tolerance),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} {v} must be positive"
                )));
            }
        }
        if !(0.0..1.0).contains(&self.prune_fraction) {
            return Err(Error::InvalidParameter(format!(
                "prune fraction {} not in [0,1)",
                self.prune_fraction
            )));
        }
        if self.simplex_max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "simplex iteration budget must be positive".into(),
            ));
        }
        if self.max_support == 0 {
            return Err(Error::InvalidParameter(
                "max support must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Which mesh start produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StartInfo {
    pub mesh_k: usize,
    /// Index into the rotations; 0 is the unrotated mesh.
    pub rotation: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CapacityResult {
    pub channel: QubitChannel,
    pub capacity: f64,
    pub ensemble: Ensemble,
    pub xi: [f64; 3],
    pub xi0: f64,
    /// `max_w H[Gamma(w), Gamma(avg)] - capacity`, an upper bound on the
    /// distance to the true capacity.
    pub dual_gap: f64,
    pub iterations: usize,
    /// Height of the hyperplane above the entropy surface (`<= 0` when it supports).
    pub max_violation: f64,
    pub gradient_norm: f64,
    pub certified: bool,
    /// Some `lambda_k` vanishes, so the optimal ensemble need not be unique.
    pub non_unique: bool,
    pub seed: u64,
    pub start: Option<StartInfo>,
    pub warnings: Vec<String>,
}

impl CapacityResult {
    /// Log coefficients of the average output, `log2 Gamma(avg) = a0 I + a.sigma`.
    pub fn average_output_log(&self) -> Option<QubitLog> {
        QubitLog::of(self.channel.apply(self.ensemble.average()))
    }
}

/// Output Bloch lengths up to `1 + POSITIVITY_TOLERANCE` are accepted for maps
/// run without complete positivity.
const POSITIVITY_TOLERANCE: f64 = 1e-9;

/// Largest violation accepted for a certified optimum.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-8;

/// Best input ensemble found for one start before certification.
#[derive(Clone, Debug)]
struct Candidate {
    refined: Refined,
    iterations: usize,
    start: StartInfo,
}

fn rotations(count: usize, seed: u64) -> Vec<Rotation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![sphere::IDENTITY_ROTATION];
    while out.len() < count {
        out.push(sphere::random_rotation(&mut rng));
    }
    out
}

fn run_start(
    ch: &QubitChannel,
    cfg: &CapacityConfig,
    k: usize,
    rot: &Rotation,
    start: StartInfo,
) -> Result<Candidate> {
    let points: Vec<BlochVector> = mesh_points(MeshSpec::new(k)?)?
        .into_iter()
        .map(|p| BlochVector::from_array(sphere::rotate(rot, p.to_array())))
        .collect();
    let (probs, mesh_iterations) = weights(ch, &points, cfg, start)?;
    let pmax = probs.iter().copied().fold(0.0, f64::max);
    let pruned = extract_support(&probs, &points, cfg.prune_fraction * pmax, usize::MAX)?;
    // re-solve on the pruned support
    let (probs, resolve_iterations) = weights(ch, &pruned.inputs(), cfg, start)?;
    let support = extract_support(&probs, &pruned.inputs(), 0.0, usize::MAX)?;
    let clustered = cluster_support(&support, 3.0 * PI / k as f64);
    let reduced = reduce_support(ch, &clustered);
    let refined = refine_to_support(ch, &reduced, cfg)?;
    Ok(Candidate {
        iterations: mesh_iterations + resolve_iterations + refined.iterations,
        refined,
        start,
    })
}

/// Optimal weights on `points`, or the best weights found within the budget.
fn weights(
    ch: &QubitChannel,
    points: &[BlochVector],
    cfg: &CapacityConfig,
    start: StartInfo,
) -> Result<(Vec<f64>, usize)> {
    let outputs: Vec<_> = points
        .iter()
        .map(|p| ch.apply_array(p.to_array()))
        .collect();
    match simplex::maximize_outputs(
        &outputs,
        cfg.simplex_tolerance,
        cfg.simplex_max_iterations,
        None,
    ) {
        Ok(s) => Ok((s.probabilities, s.iterations)),
        Err(Error::NoConvergence {
            best_iterate,
            iterations,
            residual,
            ..
        }) => {
            log::debug!(
                "mesh k={} rotation={}: simplex gap {residual:.3e} after {iterations} iterations",
                start.mesh_k,
                start.rotation
            );
            Ok((best_iterate, iterations))
        }
        Err(e) => Err(e),
    }
}

/// Newton refinement, then enforcement of the support cap by trying every
/// way of dropping entries.
fn refine_to_support(ch: &QubitChannel, e: &Ensemble, cfg: &CapacityConfig) -> Result<Refined> {
    let refined = newton_refine(ch, e, &cfg.refine)?;
    if refined.ensemble.len() <= cfg.max_support {
        return Ok(refined);
    }
    let entries = refined.ensemble.entries();
    let mut best: Option<Refined> = None;
    for drop in 0..entries.len() {
        let rest: Vec<EnsembleEntry> = entries
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, e)| *e)
            .collect();
        let Ok(sub) = Ensemble::from_weights(rest) else {
            continue;
        };
        if let Ok(r) = refine_to_support(ch, &sub, cfg) {
            if best.as_ref().is_none_or(|b| r.chi > b.chi) {
                best = Some(r);
            }
        }
    }
    best.ok_or(Error::NoConvergence {
        stage: "support restriction",
        iterations: 0,
        best_value: refined.chi,
        residual: refined.gradient_norm,
        best_iterate: refined.ensemble.probabilities(),
    })
}

/// Dual gap, hyperplane and violation for a refined ensemble.
struct Certificate {
    dual_gap: f64,
    plane: Hyperplane,
    max_violation: f64,
    /// Inputs where the relative-entropy bound exceeds `chi`.
    violators: Vec<BlochVector>,
}

fn certify(
    ch: &QubitChannel,
    e: &Ensemble,
    chi: f64,
    verify_k: usize,
    warnings: &mut Vec<String>,
) -> Result<Certificate> {
    let avg_out = ch.apply(e.average());
    let (dual_gap, violators) = match relent::sup_relent(ch, e.average(), verify_k, 1e-12) {
        Ok(sup) => (
            (sup.value - chi).max(0.0),
            sup.maxima
                .iter()
                .filter(|m| m.value > chi)
                .map(|m| m.location)
                .collect(),
        ),
        // a pure average output: every output equals it, so nothing beats chi = 0
        Err(Error::SupportMismatch(_)) if chi == 0.0 => (0.0, vec![]),
        Err(err) => return Err(err),
    };
    let plane = match supporting_hyperplane(ch, e) {
        Ok(h) => h,
        Err(err) => {
            warnings.push(format!("hyperplane from the relative-entropy bound: {err}"));
            match QubitLog::of(avg_out) {
                Some(log) => Hyperplane {
                    xi: sphere::scale(log.pauli, -1.0),
                    xi0: -log.identity - chi,
                    residual: 0.0,
                },
                None => Hyperplane {
                    xi: [0.0; 3],
                    xi0: 0.0,
                    residual: 0.0,
                },
            }
        }
    };
    let max_violation = verify_hyperplane(ch, plane.xi, plane.xi0, verify_k)?;
    Ok(Certificate {
        dual_gap,
        plane,
        max_violation,
        violators,
    })
}

fn assemble(
    ch: &QubitChannel,
    cfg: &CapacityConfig,
    refined: Refined,
    cert: Certificate,
    iterations: usize,
    start: Option<StartInfo>,
    mut warnings: Vec<String>,
) -> CapacityResult {
    let non_unique = !ch.is_one_to_one();
    if non_unique {
        warnings.push("a channel axis is collapsed; the optimal ensemble may not be unique".into());
    }
    let certified = cert.dual_gap <= cfg.tolerance && cert.max_violation <= CERTIFICATE_TOLERANCE;
    CapacityResult {
        channel: *ch,
        capacity: refined.chi,
        ensemble: refined.ensemble,
        xi: cert.plane.xi,
        xi0: cert.plane.xi0,
        dual_gap: cert.dual_gap,
        iterations,
        max_violation: cert.max_violation,
        gradient_norm: refined.gradient_norm,
        certified,
        non_unique,
        seed: cfg.seed,
        start,
        warnings,
    }
}

/// Refine a starting ensemble with Newton's method and certify the result
/// against the `verify_k` mesh.
pub fn refine(
    ch: &QubitChannel,
    e0: &Ensemble,
    opts: &RefineOptions,
    verify_k: usize,
) -> Result<CapacityResult> {
    let refined = newton_refine(ch, e0, opts)?;
    let mut warnings = Vec::new();
    let cert = certify(ch, &refined.ensemble, refined.chi, verify_k, &mut warnings)?;
    let cfg = CapacityConfig {
        refine: opts.clone(),
        verify_k,
        ..CapacityConfig::default()
    };
    let iterations = refined.iterations;
    Ok(assemble(
        ch, &cfg, refined, cert, iterations, None, warnings,
    ))
}

/// Capacity of a completely positive qubit channel.
pub fn capacity(ch: &QubitChannel, cfg: &CapacityConfig) -> Result<CapacityResult> {
    cfg.validate()?;
    let mut warnings = Vec::new();
    if let Err(e) = ch.ensure_cp() {
        if !cfg.allow_non_cp {
            return Err(e);
        }
        warnings.push(format!("proceeding without complete positivity: {e}"));
        let len = crate::product::max_output_length(ch);
        if len > 1.0 + POSITIVITY_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "map is not positive: a pure input is sent to Bloch length {len:.6}"
            )));
        }
    }
    let rots = rotations(cfg.rotations, cfg.seed);
    let starts: Vec<(usize, usize)> = cfg
        .mesh_sizes
        .iter()
        .flat_map(|&k| (0..rots.len()).map(move |r| (k, r)))
        .collect();
    let outcomes: Vec<Result<Candidate>> = starts
        .par_iter()
        .map(|&(k, r)| {
            run_start(
                ch,
                cfg,
                k,
                &rots[r],
                StartInfo {
                    mesh_k: k,
                    rotation: r,
                },
            )
        })
        .collect();

    let mut candidates = Vec::new();
    let mut last_err = None;
    for (o, (k, r)) in outcomes.into_iter().zip(&starts) {
        match o {
            Ok(c) => candidates.push(c),
            Err(e) => {
                warnings.push(format!("start k={k} rotation={r} failed: {e}"));
                last_err = Some(e);
            }
        }
    }
    if candidates.is_empty() {
        return Err(last_err.expect("at least one start ran"));
    }
    // stable: equal values keep start order
    candidates.sort_by(|a, b| b.refined.chi.total_cmp(&a.refined.chi));
    let top = candidates[0].refined.chi;
    let mut best: Option<(Candidate, Certificate, Vec<String>)> = None;
    for c in candidates
        .into_iter()
        .take_while(|c| c.refined.chi >= top - 1e-11)
    {
        if let Some((b, _, _)) = &best {
            if same_support(&b.refined.ensemble, &c.refined.ensemble) {
                continue;
            }
        }
        let mut w = Vec::new();
        let cert = certify(ch, &c.refined.ensemble, c.refined.chi, cfg.verify_k, &mut w)?;
        let better = match &best {
            None => true,
            Some((b, bc, _)) => {
                let (va, vb) = (cert.max_violation, bc.max_violation);
                if (va - vb).abs() > 1e-11 {
                    va < vb
                } else {
                    c.refined.ensemble.len() < b.refined.ensemble.len()
                }
            }
        };
        if better {
            best = Some((c, cert, w));
        }
    }
    let (mut cand, mut cert, w) = best.expect("top candidate exists");
    warnings.extend(w);

    let mut rounds = 0;
    while cert.dual_gap > cfg.tolerance && rounds < cfg.augment_rounds && !cert.violators.is_empty()
    {
        rounds += 1;
        let Some(next) = augment(ch, cfg, &cand.refined.ensemble, &cert.violators) else {
            break;
        };
        if next.chi <= cand.refined.chi {
            break;
        }
        let mut w = Vec::new();
        let next_cert = certify(ch, &next.ensemble, next.chi, cfg.verify_k, &mut w)?;
        cand.iterations += next.iterations;
        cand.refined = next;
        cert = next_cert;
        warnings.extend(w);
    }
    if cert.dual_gap > cfg.tolerance {
        warnings.push(format!(
            "dual gap {:.3e} above tolerance {:.1e}",
            cert.dual_gap, cfg.tolerance
        ));
    }
    let iterations = cand.iterations;
    Ok(assemble(
        ch,
        cfg,
        cand.refined,
        cert,
        iterations,
        Some(cand.start),
        warnings,
    ))
}

fn same_support(a: &Ensemble, b: &Ensemble) -> bool {
    a.len() == b.len()
        && a.inputs()
            .iter()
            .all(|x| b.inputs().iter().any(|y| x.angular_distance(*y) < 1e-6))
}

/// Add inputs where the dual bound is violated, re-weight, and refine again.
fn augment(
    ch: &QubitChannel,
    cfg: &CapacityConfig,
    e: &Ensemble,
    extra: &[BlochVector],
) -> Option<Refined> {
    let mut points = e.inputs();
    points.extend_from_slice(extra);
    let sol = maximize_over_probs(ch, &points, 1e-12).ok()?;
    let support = extract_support(&sol.probabilities, &points, 1e-9, usize::MAX).ok()?;
    let reduced = reduce_support(ch, &support);
    let mut r = refine_to_support(ch, &reduced, cfg).ok()?;
    r.iterations += sol.iterations;
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn chi_examples() {
        let ch = reference::four_state_channel();
        let e = reference::table1_ensemble();
        assert!((holevo_chi(&ch, &e) - reference::FOUR_STATE_CAPACITY).abs() < 1e-9);
        let single = Ensemble::new(vec![EnsembleEntry::new(
            1.0,
            reference::TABLE1_INPUTS[0].normalized(),
        )])
        .unwrap();
        assert_eq!(holevo_chi(&ch, &single), 0.0);
        let pair = Ensemble::new(vec![
            EnsembleEntry::new(0.5, BlochVector::new_unchecked(0.0, 0.0, 1.0)),
            EnsembleEntry::new(0.5, BlochVector::new_unchecked(0.0, 0.0, -1.0)),
        ])
        .unwrap();
        assert!((holevo_chi(&QubitChannel::identity(), &pair) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        assert!(Ensemble::from_weights(vec![]).is_err());
        let z = BlochVector::new_unchecked(0.0, 0.0, 1.0);
        assert!(Ensemble::from_weights(vec![EnsembleEntry::new(0.0, z)]).is_err());
        assert!(Ensemble::new(vec![EnsembleEntry::new(0.9, z)]).is_err());
        let far = BlochVector::new_unchecked(0.0, 0.0, 1.1);
        assert!(Ensemble::from_weights(vec![EnsembleEntry::new(1.0, far)]).is_err());
        let e =
            Ensemble::from_weights(vec![EnsembleEntry::new(2.0, z), EnsembleEntry::new(6.0, z)])
                .unwrap();
        assert_eq!(e.probabilities(), vec![0.25, 0.75]);
    }

    #[test]
    fn ensemble_reads_rounded_json() {
        let json = r#"[{"probability":0.333333333333,"input":{"x":0.0,"y":0.0,"z":1.0}},
            {"probability":0.666666666667,"input":{"x":0.600000000001,"y":0.0,"z":0.800000000001}}]"#;
        let e: Ensemble = serde_json::from_str(json).unwrap();
        let total: f64 = e.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(e.inputs()[1].norm() <= 1.0 + 1e-15);
        let bad = r#"[{"probability":0.5,"input":{"x":0.0,"y":0.0,"z":1.0}}]"#;
        assert!(serde_json::from_str::<Ensemble>(bad).is_err());
    }

    #[test]
    fn capacity_of_identity_is_one_bit() {
        let cfg = CapacityConfig {
            mesh_sizes: vec![8],
            rotations: 2,
            verify_k: 40,
            ..CapacityConfig::default()
        };
        let r = capacity(&QubitChannel::identity(), &cfg).unwrap();
        assert!((r.capacity - 1.0).abs() < 1e-10);
        assert!(r.certified, "{r:?}");
        // any pure ensemble centred at the origin is optimal
        assert!(r.ensemble.len() <= 4);
        assert!(r.ensemble.average().norm() < 1e-6);
    }

    #[test]
    fn capacity_rejects_non_cp() {
        let err =
            capacity(&reference::shifted_family(0.06), &CapacityConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NotCompletelyPositive { .. }));
        let cfg = CapacityConfig {
            allow_non_cp: true,
            ..CapacityConfig::default()
        };
        let err = capacity(&reference::second_four_state_channel(), &cfg).unwrap_err();
        assert!(err.to_string().contains("not positive"), "{err}");
    }

    #[test]
    fn collapsed_axis_is_flagged() {
        let cfg = CapacityConfig {
            mesh_sizes: vec![8],
            rotations: 1,
            verify_k: 40,
            ..CapacityConfig::default()
        };
        let ch = QubitChannel::new([0.0, 0.0, 1.0], [0.0; 3]);
        let r = capacity(&ch, &cfg).unwrap();
        assert!(r.non_unique);
        assert!((r.capacity - 1.0).abs() < 1e-9);
    }
}
