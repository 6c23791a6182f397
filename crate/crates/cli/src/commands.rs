use std::f64::consts::PI;
use std::io::Write;

use anyhow::{bail, Context, Result};
use holocap::product::{uniform_p_grid, ScanConfig, ScanResult, SchmidtState};
use holocap::relent::CensusOptions;
use holocap::{
    additivity_scan, concavity_curve, critical_census, entropy, landscape, BlochVector,
    CapacityResult, CriticalPoint, QubitChannel,
};
use serde::Serialize;

use crate::output::{round_sig, sink, write_csv, write_json};
use crate::{
    parse_channel_file, parse_list, AdditivityArgs, AvgSource, CapacityArgs, CensusArgs,
    ChannelArgs, ConcavityArgs, GsliceArgs, RelentMapArgs, SolverArgs,
};

fn load(c: &ChannelArgs) -> Result<QubitChannel> {
    parse_channel_file(&c.channel, c.allow_noncp)
}

fn solve(ch: &QubitChannel, s: &SolverArgs, allow_noncp: bool) -> Result<CapacityResult> {
    let r = holocap::capacity(ch, &s.config(allow_noncp))?;
    for w in &r.warnings {
        log::warn!("{w}");
    }
    Ok(r)
}

fn average(
    ch: &QubitChannel,
    avg: AvgSource,
    s: &SolverArgs,
    allow_noncp: bool,
) -> Result<BlochVector> {
    match avg {
        AvgSource::FromCapacity => Ok(solve(ch, s, allow_noncp)?.ensemble.average()),
        AvgSource::Explicit([x, y, z]) => Ok(BlochVector::new(x, y, z)?),
    }
}

pub fn capacity(a: CapacityArgs) -> Result<()> {
    let ch = load(&a.channel)?;
    let r = solve(&ch, &a.solver, a.channel.allow_noncp)?;
    if a.json {
        return write_json(a.out.as_deref(), &r);
    }
    let mut w = sink(a.out.as_deref())?;
    print_table(&mut w, &r)?;
    w.flush()?;
    Ok(())
}

fn print_table(w: &mut dyn Write, r: &CapacityResult) -> Result<()> {
    let ch = &r.channel;
    writeln!(w, "capacity     {:.10}", r.capacity)?;
    writeln!(w, "dual gap     {:.3e}", r.dual_gap)?;
    writeln!(w, "violation    {:.3e}", r.max_violation)?;
    writeln!(w, "certified    {}", r.certified)?;
    writeln!(w, "seed         {}", r.seed)?;
    writeln!(w)?;
    writeln!(
        w,
        "{:>12}  {:>9} {:>9}  {:>13} {:>13} {:>13}  {:>13} {:>13} {:>13}  {:>12}",
        "probability", "phi", "theta", "x", "y", "z", "out x", "out y", "out z", "S(out)"
    )?;
    for e in r.ensemble.entries() {
        let (phi, theta) = e.input.angles();
        let g = ch.apply(e.input);
        writeln!(
            w,
            "{:>12.10}  {:>9.6} {:>9.6}  {:>13.10} {:>13.10} {:>13.10}  {:>13.10} {:>13.10} {:>13.10}  {:>12.10}",
            e.probability, phi, theta, e.input.x, e.input.y, e.input.z, g.x, g.y, g.z, entropy(g)
        )?;
    }
    let avg = r.ensemble.average();
    let g = ch.apply(avg);
    writeln!(
        w,
        "{:>12}  {:>9} {:>9}  {:>13.10} {:>13.10} {:>13.10}  {:>13.10} {:>13.10} {:>13.10}  {:>12.10}",
        "average", "", "", avg.x, avg.y, avg.z, g.x, g.y, g.z, entropy(g)
    )?;
    writeln!(w)?;
    writeln!(
        w,
        "hyperplane   xi = ({:.10}, {:.10}, {:.10}), xi0 = {:.10}",
        r.xi[0], r.xi[1], r.xi[2], r.xi0
    )?;
    for warning in &r.warnings {
        writeln!(w, "warning      {warning}")?;
    }
    Ok(())
}

pub fn relent_map(a: RelentMapArgs) -> Result<()> {
    let ch = load(&a.channel)?;
    let avg = average(&ch, a.avg, &a.solver, a.channel.allow_noncp)?;
    let grid = landscape(&ch, avg, a.phi_steps, a.theta_steps)?;
    write_csv(
        a.out.as_deref(),
        &["phi", "theta", "x", "y", "z", "H"],
        grid.rows().map(|r| r.to_vec()),
    )
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CensusReport {
    channel: QubitChannel,
    average_input: BlochVector,
    maxima: usize,
    saddles: usize,
    minima: usize,
    degenerate: usize,
    points: Vec<CriticalPoint>,
    seed: u64,
}

pub fn census(a: CensusArgs) -> Result<()> {
    let ch = load(&a.channel)?;
    let avg = average(&ch, a.avg, &a.solver, a.channel.allow_noncp)?;
    let opts = CensusOptions {
        phi_steps: a.phi_steps,
        theta_steps: a.theta_steps,
        ..Default::default()
    };
    let points = critical_census(&ch, avg, &opts)?;
    let count = |k| points.iter().filter(|p| p.kind == k).count();
    use holocap::CriticalKind::*;
    let report = CensusReport {
        channel: ch,
        average_input: avg,
        maxima: count(Maximum),
        saddles: count(Saddle),
        minima: count(Minimum),
        degenerate: count(Degenerate),
        points,
        seed: a.solver.seed,
    };
    write_json(a.out.as_deref(), &report)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdditivityReport {
    pub channel: QubitChannel,
    pub capacity: f64,
    pub average_input: BlochVector,
    pub scan: ScanResult,
    pub seed: u64,
}

pub fn additivity(a: AdditivityArgs) -> Result<()> {
    let ch = load(&a.channel)?;
    let r = solve(&ch, &a.solver, a.channel.allow_noncp)?;
    let avg = r.ensemble.average();
    let cfg = ScanConfig {
        samples: a.samples,
        ascents: a.ascents,
        seed: a.solver.seed,
    };
    let scan = additivity_scan(&ch, avg, r.capacity, &cfg)?;
    write_json(
        a.out.as_deref(),
        &AdditivityReport {
            channel: ch,
            capacity: r.capacity,
            average_input: avg,
            scan,
            seed: a.solver.seed,
        },
    )
}

pub fn gslice(a: GsliceArgs) -> Result<()> {
    let ch = load(&a.channel)?;
    let (avg, angles) = match (&a.angles, a.avg) {
        (Some(s), avg) => {
            let v = parse_list(s)?;
            let angles: [f64; 4] = v.try_into().map_err(|v: Vec<f64>| {
                anyhow::anyhow!("--angles needs 4 values, got {}", v.len())
            })?;
            (average(&ch, avg, &a.solver, a.channel.allow_noncp)?, angles)
        }
        (None, avg) => {
            let r = solve(&ch, &a.solver, a.channel.allow_noncp)?;
            let avg = match avg {
                AvgSource::FromCapacity => r.ensemble.average(),
                AvgSource::Explicit([x, y, z]) => BlochVector::new(x, y, z)?,
            };
            (avg, optimal_angles(&r)?)
        }
    };
    let nus = parse_list(&a.nus).context("--nus")?;
    let rows = holocap::gslice(&ch, avg, angles, &nus, &uniform_p_grid(a.p_steps))?;
    write_csv(
        a.out.as_deref(),
        &["nu", "p", "entropy", "trace_term", "g"],
        rows.iter()
            .map(|r| vec![r.nu, r.p, r.entropy, r.trace_term, r.g]),
    )
}

/// Schmidt angles of the product of the first two optimal inputs.
pub fn optimal_angles(r: &CapacityResult) -> Result<[f64; 4]> {
    let inputs = r.ensemble.inputs();
    if inputs.len() < 2 {
        bail!("optimal ensemble has a single input; pass --angles");
    }
    let s = SchmidtState::product(inputs[0], inputs[1]);
    Ok([s.theta_u, s.phi_u, s.theta_v, s.phi_v])
}

pub fn concavity(a: ConcavityArgs) -> Result<()> {
    let mus = parse_list(&a.mu).context("--mu")?;
    let grid = uniform_p_grid(a.p_steps);
    let mut rows = Vec::new();
    for mu in mus {
        let c = concavity_curve(mu, &grid)?;
        log::info!("mu = {}: {:?}", round_sig(mu), c.curvature);
        rows.extend(
            c.points
                .iter()
                .map(|p| vec![mu, p.p, p.f_numeric, p.f_closed_form]),
        );
    }
    write_csv(
        a.out.as_deref(),
        &["mu", "p", "f_numeric", "f_closed_form"],
        rows,
    )
}

/// `nu` values of the published slices.
pub const SLICE_NUS: [f64; 4] = [0.0, 0.5 * PI, PI, 1.5 * PI];
