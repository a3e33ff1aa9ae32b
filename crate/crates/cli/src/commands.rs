use std::process::ExitCode;

use qlc_core::classify::{classify_canonical, classify_complex, singularity_layout, CenterClass, SingularityLayout};
use qlc_core::hopf::{distribution, mu_coefficients, DistributionOutcome};
use qlc_core::melnikov::{find_zero, scan as scan_levels, sign_changes, MelnikovSample};
use qlc_core::odesim::{integrate, locate_cycle, Center};
use qlc_core::{
    critical_levels, CanonicalQuadratic, ComplexFormParams, Perturbation, Region, ReversibleParams,
};
use serde::Serialize;

use crate::args::{usage_error, ClassifyArgs, CycleArgs, HopfArgs, ScanArgs, SimulateArgs, System, SystemArgs};
use crate::{sink, write_json, CliError, CliResult};

const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_CYCLE_EPS: f64 = 1e-3;

fn build(s: &System) -> CliResult<(ReversibleParams, Perturbation)> {
    Ok((ReversibleParams::new(s.a1, s.a4)?, Perturbation::new(s.eps, s.a10, s.b01, s.b11)?))
}

#[derive(Serialize)]
struct ClassifyReport {
    form: &'static str,
    label: String,
    labels: Vec<String>,
    residuals: std::collections::BTreeMap<String, f64>,
    note: Option<String>,
    v1: Option<f64>,
    layout: Option<SingularityLayout>,
}

impl ClassifyReport {
    fn new(form: &'static str, c: CenterClass, layout: Option<SingularityLayout>) -> Self {
        ClassifyReport {
            form,
            label: c.label.map_or_else(|| "None".to_string(), |l| l.to_string()),
            labels: c.labels.iter().map(|l| l.to_string()).collect(),
            residuals: c.residuals,
            note: c.note,
            v1: c.v1,
            layout,
        }
    }
}

pub fn classify(a: &ClassifyArgs) -> CliResult<ExitCode> {
    let report = if let Some(lambda) = a.lambda {
        let z = ComplexFormParams::new(
            lambda,
            a.a.unwrap_or((0.0, 0.0)),
            a.b.unwrap_or((0.0, 0.0)),
            a.c.unwrap_or((0.0, 0.0)),
        )?;
        ClassifyReport::new("complex", classify_complex(&z), None)
    } else {
        let need = |v: Option<f64>, n: &str| v.unwrap_or_else(|| usage_error(format!("--{n} is required")));
        let (a1, a2, a3, a4) = (need(a.a1, "a1"), need(a.a2, "a2"), need(a.a3, "a3"), need(a.a4, "a4"));
        let c = CanonicalQuadratic::new(a1, a2, a3, a4)?;
        // The layout is defined for the reversible family a2 = a3 = 0.
        let layout = (a2 == 0.0 && a3 == 0.0)
            .then(|| ReversibleParams::new(a1, a4).ok().map(|p| singularity_layout(&p)))
            .flatten();
        ClassifyReport::new("canonical", classify_canonical(&c), layout)
    };
    write_json(a.out.as_deref(), &report)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LevelsReport {
    h00: f64,
    h10: Option<f64>,
    right_center: bool,
    singular_x: f64,
}

pub fn levels(a: &SystemArgs) -> CliResult<ExitCode> {
    let (p, _) = build(&a.resolve(0.0))?;
    let lv = critical_levels(&p);
    let report = LevelsReport {
        h00: lv.h00,
        h10: lv.right_center.then_some(lv.h10),
        right_center: lv.right_center,
        singular_x: p.singular_x(),
    };
    write_json(a.out.as_deref(), &report)?;
    Ok(ExitCode::SUCCESS)
}

pub fn mu(a: &SystemArgs) -> CliResult<ExitCode> {
    let (p, q) = build(&a.resolve(0.0))?;
    write_json(a.out.as_deref(), &mu_coefficients(&p, &q))?;
    Ok(ExitCode::SUCCESS)
}

pub fn hopf_solve(a: &HopfArgs) -> CliResult<ExitCode> {
    let a4 = match (a.a4, a.distribution) {
        (Some(v), _) => v,
        (None, (3, 0)) => qlc_core::hopf::solve_a4_zero_mu02(a.a1),
        (None, (0, 3)) => qlc_core::hopf::solve_a4_zero_mu12(a.a1),
        (None, _) => usage_error("--a4 is required for this distribution"),
    };
    let p = ReversibleParams::new(a.a1, a4)?;
    match distribution(&p, a.distribution, a.a10)? {
        DistributionOutcome::Impossible { reason, .. } => {
            Err(CliError { kind: "Impossible".into(), message: reason })
        }
        ok => {
            write_json(a.out.as_deref(), &ok)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Scan window from the flags, or from the case's zero in `region`.
fn window(a: &ScanArgs, region: Region) -> (f64, f64) {
    let from_case = a.system.spec().and_then(|c| c.zeros.iter().find(|z| z.region == region).map(|z| z.scan));
    match (a.h_lo, a.h_hi, from_case) {
        (Some(lo), Some(hi), _) => (lo, hi),
        (lo, hi, Some((clo, chi))) => (lo.unwrap_or(clo), hi.unwrap_or(chi)),
        _ => usage_error("--h-lo and --h-hi are required without a case window for this region"),
    }
}

fn sampled(a: &ScanArgs) -> CliResult<(ReversibleParams, Perturbation, Region, Vec<MelnikovSample>)> {
    let (p, q) = build(&a.system.resolve(0.0))?;
    let region = Region::from(a.region);
    let (lo, hi) = window(a, region);
    log::info!("scanning {region:?} over [{lo}, {hi}] with n = {}", a.n);
    let samples = scan_levels(region, lo, hi, a.n, &p, &q)?;
    if let Some(first) = samples.iter().find_map(|s| s.error.clone()) {
        if samples.iter().all(|s| s.m.is_none()) {
            return Err(CliError { kind: "ScanFailed".into(), message: format!("every sample failed; first: {first}") });
        }
        log::warn!("{} samples failed", samples.iter().filter(|s| s.m.is_none()).count());
    }
    Ok((p, q, region, samples))
}

pub fn scan(a: &ScanArgs) -> CliResult<ExitCode> {
    let (_, _, _, samples) = sampled(a)?;
    let mut w = csv::Writer::from_writer(sink(a.system.out.as_deref())?);
    w.write_record(["h", "M", "ok"])?;
    for s in &samples {
        let m = s.m.map_or_else(|| "NaN".to_string(), |m| m.to_string());
        w.write_record([s.h.to_string(), m, s.m.is_some().to_string()])?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct ZeroRow {
    lo: f64,
    hi: f64,
    h_star: f64,
    m_lo: f64,
    m_hi: f64,
}

pub fn zeros(a: &ScanArgs) -> CliResult<ExitCode> {
    let (p, q, region, samples) = sampled(a)?;
    let mut rows = Vec::new();
    for b in sign_changes(&samples) {
        let z = find_zero(&b, &p, &q, region)?;
        rows.push(ZeroRow { lo: z.lo, hi: z.hi, h_star: z.h, m_lo: z.m_lo, m_hi: z.m_hi });
    }
    write_json(a.system.out.as_deref(), &rows)?;
    Ok(ExitCode::SUCCESS)
}

pub fn simulate(a: &SimulateArgs, tol: Option<f64>) -> CliResult<ExitCode> {
    let (p, q) = build(&a.system.resolve(0.0))?;
    let tr = integrate(&p, &q, a.x0, a.y0, a.t_max, tol.unwrap_or(DEFAULT_TOL))?;
    log::info!("{:?} after {} steps ({} rejected)", tr.termination, tr.stats.steps, tr.stats.rejected);
    let mut w = csv::Writer::from_writer(sink(a.system.out.as_deref())?);
    w.write_record(["t", "x", "y"])?;
    for &(t, x, y) in &tr.samples {
        w.write_record([t.to_string(), x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn cycles(a: &CycleArgs) -> CliResult<ExitCode> {
    let (p, q) = build(&a.system.resolve(DEFAULT_CYCLE_EPS))?;
    let spec = a.system.spec();
    let case_zero = spec.as_ref().and_then(|c| {
        let wanted = a.center.map(|c| Center::from(c).region()).or(a.region.map(Region::from));
        match wanted {
            Some(r) => c.zeros.iter().find(|z| z.region == r).copied(),
            None => c.cycle.and_then(|n| c.zero(n)).copied(),
        }
    });
    let center = a
        .center
        .map(Center::from)
        .or(a.region.map(|r| Center::from(Region::from(r))))
        .or(case_zero.map(|z| Center::from(z.region)))
        .unwrap_or_else(|| usage_error("--center or --region is required"));
    let h_hint = a
        .h_hint
        .or(case_zero.map(|z| z.midpoint()))
        .unwrap_or_else(|| usage_error("--h-hint is required without a case zero"));
    let report = locate_cycle(&p, &q, center, h_hint)?;
    write_json(a.system.out.as_deref(), &report)?;
    Ok(ExitCode::SUCCESS)
}
