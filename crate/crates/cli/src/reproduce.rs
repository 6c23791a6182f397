//! Recompute the published tables and figures, write them to a directory and
//! check each number against its tolerance.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use holocap::product::{
    additivity_scan, concavity_curve, gslice, min_output_entropy_product_floor, uniform_p_grid,
    Curvature, ScanConfig, SchmidtState,
};
use holocap::reference::*;
use holocap::relent::CensusOptions;
use holocap::solver::{maximize_over_probs, mesh_points, RefineOptions};
use holocap::{
    capacity, critical_census, entropy, equidistance, refine, relent_vs_product_avg, sup_relent,
    BlochVector, CapacityConfig, CapacityResult, CriticalKind, Ensemble, MeshSpec, QubitChannel,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::commands::SLICE_NUS;
use crate::output::{to_json, write_csv};
use crate::ReproduceArgs;

pub const ITEMS: [&str; 10] = [
    "table1",
    "table2",
    "table3",
    "table4",
    "fig2",
    "fig4",
    "fig5",
    "cp",
    "census",
    "additivity",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CheckKind {
    /// `|value - target| <= tolerance`.
    Close,
    /// `value <= target`.
    AtMost,
    /// `value >= target`.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub item: String,
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(
        item: &str,
        name: &str,
        kind: CheckKind,
        value: f64,
        target: f64,
        tolerance: f64,
    ) -> Self {
        let passed = match kind {
            CheckKind::Close => (value - target).abs() <= tolerance,
            CheckKind::AtMost => value <= target,
            CheckKind::AtLeast => value >= target,
        };
        Self {
            item: item.into(),
            name: name.into(),
            kind,
            value,
            target,
            tolerance,
            passed: passed && value.is_finite(),
        }
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let rel = match self.kind {
            CheckKind::Close => format!(
                "{:.10} vs {:.10} ± {:.0e}",
                self.value, self.target, self.tolerance
            ),
            CheckKind::AtMost => format!("{:.4e} <= {:.4e}", self.value, self.target),
            CheckKind::AtLeast => format!("{:.4e} >= {:.4e}", self.value, self.target),
        };
        format!("{verdict} {}: {} ({rel})", self.item, self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub seed: u64,
    pub items: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Shared intermediate results, computed on first use.
struct Context_ {
    item: &'static str,
    seed: u64,
    samples: usize,
    ascents: usize,
    four_state: Option<CapacityResult>,
    planar: Option<CapacityResult>,
    checks: Vec<Check>,
}

impl Context_ {
    fn check(&mut self, name: &str, kind: CheckKind, value: f64, target: f64, tolerance: f64) {
        let c = Check::new(self.item, name, kind, value, target, tolerance);
        println!("{}", c.line());
        self.checks.push(c);
    }

    fn close(&mut self, name: &str, value: f64, target: f64, tolerance: f64) {
        self.check(name, CheckKind::Close, value, target, tolerance);
    }

    fn holds(&mut self, name: &str, ok: bool) {
        self.check(name, CheckKind::AtLeast, ok as u8 as f64, 1.0, 0.0);
    }

    fn config(&self) -> CapacityConfig {
        CapacityConfig {
            seed: self.seed,
            ..CapacityConfig::default()
        }
    }

    fn four_state(&mut self) -> Result<CapacityResult> {
        if self.four_state.is_none() {
            self.four_state = Some(capacity(&four_state_channel(), &self.config())?);
        }
        Ok(self.four_state.clone().unwrap())
    }

    fn planar(&mut self) -> Result<CapacityResult> {
        if self.planar.is_none() {
            let r = refine(
                &four_state_channel(),
                &table3_planar_ensemble(),
                &RefineOptions::xz_plane(),
                self.config().verify_k,
            )?;
            self.planar = Some(r);
        }
        Ok(self.planar.clone().unwrap())
    }
}

/// Largest probability and angular mismatch under the best pairing of
/// entries, also trying the `y -> -y` mirror image of `found`.
pub fn ensemble_mismatch(
    found: &Ensemble,
    probabilities: &[f64],
    inputs: &[BlochVector],
) -> (f64, f64) {
    if found.len() != inputs.len() {
        return (f64::INFINITY, f64::INFINITY);
    }
    let mut best = (f64::INFINITY, f64::INFINITY);
    for e in [found.clone(), found.reflect_y()] {
        for perm in permutations(e.len()) {
            let (mut dp, mut da) = (0.0f64, 0.0f64);
            for (i, &j) in perm.iter().enumerate() {
                let en = e.entries()[j];
                dp = dp.max((en.probability - probabilities[i]).abs());
                da = da.max(en.input.angular_distance(inputs[i].normalized()));
            }
            if da.max(dp) < best.1.max(best.0) {
                best = (dp, da);
            }
        }
    }
    best
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn write(dir: &Path, name: &str, value: &serde_json::Value) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, to_json(value)? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn rows(ch: &QubitChannel, e: &Ensemble) -> serde_json::Value {
    let rows: Vec<_> = e
        .entries()
        .iter()
        .map(|en| {
            let (phi, theta) = en.input.angles();
            let g = ch.apply(en.input);
            json!({
                "probability": en.probability,
                "input": en.input,
                "phi": phi,
                "theta": theta,
                "output": g,
                "outputEntropy": entropy(g),
            })
        })
        .collect();
    json!(rows)
}

fn table1(cx: &mut Context_, dir: &Path) -> Result<()> {
    let ch = four_state_channel();
    let r = cx.four_state()?;
    cx.close("capacity", r.capacity, FOUR_STATE_CAPACITY, 1e-7);
    cx.close("support size", r.ensemble.len() as f64, 4.0, 0.0);
    let (dp, da) = ensemble_mismatch(&r.ensemble, &TABLE1_PROBABILITIES, &TABLE1_INPUTS);
    cx.check("probability mismatch", CheckKind::AtMost, dp, 1e-5, 0.0);
    cx.check("input angular mismatch", CheckKind::AtMost, da, 1e-4, 0.0);
    for (i, name) in ["xi_x", "xi_y", "xi_z"].iter().enumerate() {
        cx.close(name, r.xi[i], TABLE1_XI[i], 1e-6);
    }
    cx.close("xi0", r.xi0, TABLE1_XI0, 1e-6);
    cx.check(
        "max violation (k = 200)",
        CheckKind::AtMost,
        r.max_violation,
        1e-8,
        0.0,
    );
    let log = r.average_output_log().context("average output is pure")?;
    cx.close(
        "log identity coefficient",
        -log.identity,
        LOG_AVERAGE_OUTPUT[0],
        1e-5,
    );
    cx.close(
        "log sigma_x coefficient",
        log.pauli[0],
        LOG_AVERAGE_OUTPUT[1],
        1e-5,
    );
    cx.close(
        "log sigma_z coefficient",
        log.pauli[2],
        LOG_AVERAGE_OUTPUT[2],
        1e-5,
    );
    let eq = equidistance(&ch, &r.ensemble);
    let (lo, hi) = eq
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    cx.check("equidistance spread", CheckKind::AtMost, hi - lo, 1e-8, 0.0);
    cx.close("equidistance value", hi, FOUR_STATE_CAPACITY, 1e-7);
    let avg = r.ensemble.average();
    let g = ch.apply(avg);
    write(
        dir,
        "table1.json",
        &json!({
            "seed": cx.seed,
            "channel": ch,
            "capacity": r.capacity,
            "rows": rows(&ch, &r.ensemble),
            "averageInput": avg,
            "averageOutput": g,
            "averageOutputEntropy": entropy(g),
            "xi": r.xi,
            "xi0": r.xi0,
            "maxViolation": r.max_violation,
            "dualGap": r.dual_gap,
            "logAverageOutput": [log.identity, log.pauli[0], log.pauli[1], log.pauli[2]],
            "equidistance": eq,
        }),
    )
}

fn table2(cx: &mut Context_, dir: &Path) -> Result<()> {
    let mut out = Vec::new();
    for (i, (ch, published)) in TABLE2.iter().enumerate() {
        let cp = ch.is_cp();
        let cfg = CapacityConfig {
            allow_non_cp: !cp.completely_positive,
            ..cx.config()
        };
        let r = capacity(ch, &cfg)?;
        cx.close(
            &format!("channel {} capacity", i + 1),
            r.capacity,
            *published,
            1e-5,
        );
        out.push(json!({
            "channel": ch,
            "completelyPositive": cp.completely_positive,
            "choiMargin": cp.margin,
            "capacity": r.capacity,
            "published": published,
            "dualGap": r.dual_gap,
            "rows": rows(ch, &r.ensemble),
            "warnings": r.warnings,
        }));
    }
    write(
        dir,
        "table2.json",
        &json!({ "seed": cx.seed, "channels": out }),
    )
}

fn table3(cx: &mut Context_, dir: &Path) -> Result<()> {
    let ch = four_state_channel();
    let p = cx.planar()?;
    let full = cx.four_state()?;
    cx.close("planar capacity", p.capacity, TABLE3_PLANAR_CAPACITY, 1e-6);
    cx.close("support size", p.ensemble.len() as f64, 3.0, 0.0);
    cx.check(
        "four-state minus planar",
        CheckKind::AtLeast,
        full.capacity - p.capacity,
        0.0,
        0.0,
    );
    cx.close(
        "gap to four-state capacity",
        full.capacity - p.capacity,
        FOUR_STATE_CAPACITY - TABLE3_PLANAR_CAPACITY,
        1.1e-6,
    );
    let (dp, da) = ensemble_mismatch(
        &p.ensemble,
        &TABLE3_PLANAR_PROBABILITIES,
        &TABLE3_PLANAR_INPUTS,
    );
    cx.check("probability mismatch", CheckKind::AtMost, dp, 1e-5, 0.0);
    cx.check("input angular mismatch", CheckKind::AtMost, da, 1e-4, 0.0);
    let eq = equidistance(&ch, &p.ensemble);
    write(
        dir,
        "table3.json",
        &json!({
            "seed": cx.seed,
            "channel": ch,
            "capacity": p.capacity,
            "fourStateCapacity": full.capacity,
            "rows": rows(&ch, &p.ensemble),
            "averageInput": p.ensemble.average(),
            "equidistance": eq,
            "supRelent": p.capacity + p.dual_gap,
        }),
    )
}

fn table4(cx: &mut Context_, dir: &Path) -> Result<()> {
    let ch = four_state_channel();
    let p = cx.planar()?;
    let s = sup_relent(&ch, p.ensemble.average(), 200, 1e-12)?;
    cx.close("maximum", s.value, TABLE4_MAXIMUM, 1e-6);
    for (i, loc) in TABLE4_LOCATIONS.iter().enumerate() {
        let d = s
            .maxima
            .iter()
            .map(|m| m.location.distance(*loc))
            .fold(f64::INFINITY, f64::min);
        cx.check(
            &format!("location {} distance", i + 1),
            CheckKind::AtMost,
            d,
            1e-3,
            0.0,
        );
    }
    write(
        dir,
        "table4.json",
        &json!({ "seed": cx.seed, "channel": ch, "averageInput": p.ensemble.average(), "supRelent": s }),
    )
}

pub const MESH_SIZES: [usize; 4] = [10, 20, 40, 80];

/// Least-squares slope and intercept of `ln deficit` against `ln k`.
pub fn power_fit(ks: &[usize], deficits: &[f64]) -> (f64, f64) {
    let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
    let ys: Vec<f64> = deficits.iter().map(|d| d.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (-slope, (my - slope * mx).exp())
}

fn fig2(cx: &mut Context_, dir: &Path) -> Result<()> {
    let ch = four_state_channel();
    let c = cx.four_state()?.capacity;
    let mut deficits = Vec::new();
    let mut rows = Vec::new();
    for k in MESH_SIZES {
        let pts = mesh_points(MeshSpec::new(k)?)?;
        let s = maximize_over_probs(&ch, &pts, 1e-11)?;
        let d = c - s.chi;
        deficits.push(d);
        rows.push(vec![k as f64, s.chi, d, mesh_reference_deficit(k)]);
    }
    let (alpha, coef) = power_fit(&MESH_SIZES, &deficits);
    cx.check("exponent alpha lower", CheckKind::AtLeast, alpha, 1.6, 0.0);
    cx.check("exponent alpha upper", CheckKind::AtMost, alpha, 2.4, 0.0);
    cx.check("deficit(40)", CheckKind::AtMost, deficits[2], 1e-4, 0.0);
    log::info!("mesh fit: deficit ~ {coef:.3e} / k^{alpha:.3}");
    write_csv(
        Some(&dir.join("fig2_convergence.csv")),
        &["k", "chi_mesh", "deficit", "reference"],
        rows,
    )
}

fn fig4(cx: &mut Context_, dir: &Path) -> Result<()> {
    let ch = four_state_channel();
    let r = cx.four_state()?;
    let angles = crate::commands::optimal_angles(&r)?;
    let avg = r.ensemble.average();
    let grid = uniform_p_grid(100);
    let pts = gslice(&ch, avg, angles, &SLICE_NUS, &grid)?;
    let two_c = 2.0 * r.capacity;
    for (i, chunk) in pts.chunks(grid.len()).enumerate() {
        let ends = chunk[0].g.min(chunk[chunk.len() - 1].g);
        let interior = chunk[1..chunk.len() - 1]
            .iter()
            .map(|p| p.g)
            .fold(f64::INFINITY, f64::min);
        let max = chunk.iter().map(|p| p.g).fold(f64::NEG_INFINITY, f64::max);
        let label = ["0", "pi/2", "pi", "3pi/2"][i];
        cx.check(
            &format!("nu = {label}: interior min below endpoints"),
            CheckKind::AtMost,
            interior - ends,
            0.0,
            0.0,
        );
        cx.check(
            &format!("nu = {label}: max below 2C"),
            CheckKind::AtMost,
            max - two_c,
            1e-8,
            0.0,
        );
    }
    let s = SchmidtState::product(r.ensemble.inputs()[0], r.ensemble.inputs()[1]);
    cx.close(
        "product endpoint",
        relent_vs_product_avg(&ch, &s, avg)?,
        two_c,
        1e-8,
    );
    write_csv(
        Some(&dir.join("fig4_gslice.csv")),
        &["nu", "p", "entropy", "trace_term", "g"],
        pts.iter()
            .map(|p| vec![p.nu, p.p, p.entropy, p.trace_term, p.g]),
    )
}

fn fig5(cx: &mut Context_, dir: &Path) -> Result<()> {
    let grid = uniform_p_grid(100);
    let mut rows = Vec::new();
    for (mu, want) in [
        (0.5, Curvature::Concave),
        (std::f64::consts::FRAC_1_SQRT_2, Curvature::Flat),
        (0.75, Curvature::Convex),
    ] {
        let c = concavity_curve(mu, &grid)?;
        cx.check(
            &format!("mu = {mu:.4}: closed-form deviation"),
            CheckKind::AtMost,
            c.max_deviation,
            1e-10,
            0.0,
        );
        cx.holds(&format!("mu = {mu:.4}: {want:?}"), c.curvature == want);
        if want == Curvature::Flat {
            let (lo, hi) = c
                .points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                    (a.min(p.f_numeric), b.max(p.f_numeric))
                });
            cx.check(
                "mu = 0.7071: max - min",
                CheckKind::AtMost,
                hi - lo,
                1e-9,
                0.0,
            );
        }
        rows.extend(
            c.points
                .iter()
                .map(|p| vec![mu, p.p, p.f_numeric, p.f_closed_form]),
        );
    }
    for (mu, floor) in MIN_OUTPUT_ENTROPY_FLOORS {
        cx.close(
            &format!("mu = {mu:.4}: product floor"),
            min_output_entropy_product_floor(mu)?,
            floor,
            1e-6,
        );
    }
    write_csv(
        Some(&dir.join("fig5_concavity.csv")),
        &["mu", "p", "f_numeric", "f_closed_form"],
        rows,
    )
}

fn cp(cx: &mut Context_, dir: &Path) -> Result<()> {
    let inside = shifted_family(0.0527).is_cp();
    let outside = shifted_family(0.0528).is_cp();
    cx.holds("t1 = 0.0527 is CP", inside.completely_positive);
    cx.holds("t1 = 0.0528 is not CP", !outside.completely_positive);
    write(
        dir,
        "cp_boundary.json",
        &json!({ "seed": cx.seed, "inside": [0.0527, inside.margin], "outside": [0.0528, outside.margin] }),
    )
}

fn census(cx: &mut Context_, dir: &Path) -> Result<()> {
    let ch = four_state_channel();
    let r = cx.four_state()?;
    let pts = critical_census(&ch, r.ensemble.average(), &CensusOptions::default())?;
    let count = |k| pts.iter().filter(|p| p.kind == k).count() as f64;
    cx.close("critical points", pts.len() as f64, 10.0, 0.0);
    cx.close("maxima", count(CriticalKind::Maximum), 4.0, 0.0);
    cx.close("saddles", count(CriticalKind::Saddle), 4.0, 0.0);
    cx.close("minima", count(CriticalKind::Minimum), 2.0, 0.0);
    let worst = pts
        .iter()
        .filter(|p| p.kind == CriticalKind::Maximum)
        .map(|p| (p.value - FOUR_STATE_CAPACITY).abs())
        .fold(0.0, f64::max);
    cx.check(
        "maxima deviation from capacity",
        CheckKind::AtMost,
        worst,
        1e-7,
        0.0,
    );
    write(
        dir,
        "census.json",
        &json!({ "seed": cx.seed, "channel": ch, "points": pts }),
    )
}

fn additivity(cx: &mut Context_, dir: &Path) -> Result<()> {
    let ch = four_state_channel();
    let r = cx.four_state()?;
    let avg = r.ensemble.average();
    let cfg = ScanConfig {
        samples: cx.samples,
        ascents: cx.ascents,
        seed: cx.seed,
    };
    let scan = additivity_scan(&ch, avg, r.capacity, &cfg)?;
    cx.check(
        "max G - 2C",
        CheckKind::AtMost,
        scan.max_g - 2.0 * FOUR_STATE_CAPACITY,
        1e-8,
        0.0,
    );
    let inputs = r.ensemble.inputs();
    let mut product_max = f64::NEG_INFINITY;
    for u in &inputs {
        for v in &inputs {
            product_max = product_max.max(relent_vs_product_avg(
                &ch,
                &SchmidtState::product(*u, *v),
                avg,
            )?);
        }
    }
    cx.close(
        "product-state maximum",
        product_max,
        2.0 * FOUR_STATE_CAPACITY,
        1e-8,
    );
    write(
        dir,
        "additivity.json",
        &json!({ "seed": cx.seed, "channel": ch, "capacity": r.capacity, "scan": scan, "productMaximum": product_max }),
    )
}

/// Run the selected items; returns whether every check passed.
pub fn run(a: &ReproduceArgs) -> Result<bool> {
    let items: Vec<&'static str> = if a.only.is_empty() {
        ITEMS.to_vec()
    } else {
        let mut v = Vec::new();
        for name in &a.only {
            match ITEMS.iter().find(|i| **i == name.trim()) {
                Some(i) => v.push(*i),
                None => bail!(
                    "unknown item {name:?}; expected one of {}",
                    ITEMS.join(", ")
                ),
            }
        }
        v
    };
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let mut cx = Context_ {
        item: "",
        seed: a.seed,
        samples: a.samples,
        ascents: a.ascents,
        four_state: None,
        planar: None,
        checks: Vec::new(),
    };
    for item in &items {
        cx.item = item;
        let f = match *item {
            "table1" => table1,
            "table2" => table2,
            "table3" => table3,
            "table4" => table4,
            "fig2" => fig2,
            "fig4" => fig4,
            "fig5" => fig5,
            "cp" => cp,
            "census" => census,
            _ => additivity,
        };
        if let Err(e) = f(&mut cx, &a.out_dir) {
            cx.check(
                &format!("error: {e:#}"),
                CheckKind::AtMost,
                f64::NAN,
                0.0,
                0.0,
            );
        }
    }
    let passed = cx.checks.iter().all(|c| c.passed);
    let summary = Summary {
        seed: a.seed,
        items: items.iter().map(|s| s.to_string()).collect(),
        checks: cx.checks,
        passed,
    };
    fs::write(a.out_dir.join("summary.json"), to_json(&summary)? + "\n")?;
    let failed = summary.checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", summary.checks.len());
    Ok(passed)
}
