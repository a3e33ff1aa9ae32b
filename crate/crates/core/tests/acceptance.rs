//! One line per acceptance criterion; the test fails if any line fails.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use qlc_core::classify::{classify_canonical, verify_integrating_factor, CenterLabel, FactorSystem};
use qlc_core::hopf::{distribution, mu_coefficients, DistributionOutcome, MuCoefficients};
use qlc_core::integrable::{critical_levels, first_integral, turning_points};
use qlc_core::melnikov::{
    abelian_integrals, abelian_integrals_midpoint, find_zero, melnikov_at, scan, sign_changes,
};
use qlc_core::odesim::{integrate, locate_cycle, return_map, section_abscissa, Center};
use qlc_core::{all_cases, case, CanonicalQuadratic, LevelSet, Perturbation, Region, ReversibleParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, ok: bool, detail: String, t: Instant) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id:>2} {name}: {detail} ({:.2?})", t.elapsed());
        if !ok {
            self.failures.push(format!("{id} {name}"));
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn critical_levels_match(r: &mut Report) {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for c in all_cases() {
        let lv = critical_levels(&c.params().unwrap());
        worst = worst.max(rel(lv.h00, c.h00)).max(rel(lv.h10, c.h10));
    }
    r.line(1, "critical levels", worst <= 1e-12, format!("max rel err {worst:.1e} <= 1e-12"), t);
}

fn mu_spot_values(r: &mut Report) {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut info = Vec::new();
    for c in all_cases() {
        let m = mu_coefficients(&c.params().unwrap(), &c.perturbation(0.0, 1.0).unwrap());
        for e in &c.mu {
            let v = if e.row == 0 { m.mu0[e.index] } else { m.mu1.unwrap()[e.index] };
            worst = worst.max(rel(v, e.value));
            if let Some(pubd) = e.published {
                info.push(format!("case {} {} = {v:.10} (published {pubd:.10}, not asserted)", c.label, e.name));
            }
        }
    }
    r.line(2, "mu spot values", worst <= 1e-12, format!("max rel err {worst:.1e} <= 1e-12"), t);
    for i in info {
        println!("       INFO {i}");
    }
}

fn hopf_chain(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut solved = 0;
    for _ in 0..50 {
        let a1 = rng.gen_range(-10.0..-1.01);
        let a10 = rng.gen_range(0.2..2.0);
        let p = ReversibleParams::new(a1, -1.5).unwrap();
        for (target, row) in [((3u8, 0u8), 0usize), ((0, 3), 1)] {
            if let Ok(DistributionOutcome::Achievable(d)) = distribution(&p, target, a10) {
                let vals = if row == 0 { d.mu.mu0 } else { d.mu.mu1.unwrap() };
                for v in &vals[..3] {
                    worst = worst.max(v.abs() / a10);
                }
                solved += 1;
            }
        }
    }
    let p = ReversibleParams::new(-3.0, -2.0).unwrap();
    let impossible = [(2u8, 1u8), (1, 2)]
        .iter()
        .all(|&tg| matches!(distribution(&p, tg, 1.0), Ok(DistributionOutcome::Impossible { .. })));
    let ok = worst <= 1e-12 && impossible && solved == 100;
    r.line(3, "hopf chain exactness", ok, format!("{solved}/100 chains, max |mu|/|a10| {worst:.1e} <= 1e-12, (2,1)/(1,2) impossible: {impossible}"), t);
}

fn melnikov_spot_values(r: &mut Report) {
    let t = Instant::now();
    let c = case('E').unwrap();
    let p = c.params().unwrap();
    let q = c.perturbation(0.0, 1.0).unwrap();
    let ml = melnikov_at(0.1, Region::Left, &p, &q).unwrap();
    let mr = melnikov_at(-(2f64.powf(-21.0 / 5.0)) - 0.8, Region::Right, &p, &q).unwrap();
    let (el, er) = ((ml - 0.0510077880).abs(), (mr - 7.4630743072).abs());
    let ok = el <= 1e-8 && er <= 1e-7;
    r.line(4, "melnikov spot values", ok, format!("|dM_left| {el:.1e} <= 1e-8, |dM_right| {er:.1e} <= 1e-7"), t);
}

fn zero_reproduction(r: &mut Report) {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for c in all_cases() {
        let p = c.params().unwrap();
        let q = c.perturbation(0.0, 1.0).unwrap();
        for z in &c.zeros {
            let s = scan(z.region, z.scan.0, z.scan.1, 200, &p, &q).unwrap();
            let br = sign_changes(&s);
            let found = br.len() == 1;
            let h = if found { find_zero(&br[0], &p, &q, z.region).unwrap().h } else { f64::NAN };
            let this_ok = if c.label == 'E' {
                h > z.lo && h < z.hi
            } else {
                (h - z.midpoint()).abs() <= 1e-6
            };
            let inside = h > z.lo && h < z.hi;
            ok &= found && this_ok;
            parts.push(format!("{}={h:.11}{}", z.name, if inside { "" } else { "(outside printed bracket)" }));
        }
    }
    r.line(5, "zero reproduction", ok, parts.join(" "), t);
}

fn expansion_consistency(r: &mut Report) {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    // Least-squares fit of M(h) = sum_j mu0j (h - h00)^(j+1) near the origin level.
    for label in ['B', 'D'] {
        let c = case(label).unwrap();
        let p = c.params().unwrap();
        let q = c.perturbation(0.0, 1.0).unwrap();
        let mu = mu_coefficients(&p, &q);
        let ds: Vec<f64> = (0..40).map(|i| 1e-3 * 10f64.powf(i as f64 / 39.0)).collect();
        let a = DMatrix::from_fn(ds.len(), 5, |i, j| ds[i].powi(j as i32 + 1));
        let b = DVector::from_iterator(
            ds.len(),
            ds.iter().map(|d| melnikov_at(c.h00 + d, Region::Left, &p, &q).unwrap()),
        );
        let fit = a.svd(true, true).solve(&b, 1e-300).unwrap();
        let e = rel(fit[0], mu.mu0[0]);
        ok &= e <= 1e-3;
        parts.push(format!("case {label} mu00 fit rel err {e:.1e}"));
    }
    let mut sign_ok = 0;
    let mut total = 0;
    for c in all_cases() {
        let p = c.params().unwrap();
        let q = c.perturbation(0.0, 1.0).unwrap();
        let mu = mu_coefficients(&p, &q);
        let rows = [(Region::Left, mu.mu0, c.h00 + 1e-3), (Region::Right, mu.mu1.unwrap(), c.h10 - 1e-3)];
        for (region, row, h) in rows {
            total += 1;
            let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let Some(j) = MuCoefficients::first_nonzero(&row, 1e-9 * scale) else { continue };
            let m = melnikov_at(h, region, &p, &q).unwrap();
            if m.signum() == row[j].signum() {
                sign_ok += 1;
            }
        }
    }
    ok &= sign_ok == total;
    parts.push(format!("endpoint signs {sign_ok}/{total}"));
    r.line(6, "expansion/quadrature consistency", ok, parts.join(", "), t);
}

/// Random closed orbits: start abscissas on the section for levels whose
/// turning points exist.
fn section_starts(p: &ReversibleParams, center: Center, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let lv = critical_levels(p);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < n && tries < 10_000 {
        tries += 1;
        let d = 10f64.powf(rng.gen_range(-3.0..0.0));
        let h = match center {
            Center::Origin => lv.h00 + d * lv.h00.abs().max(0.1),
            Center::OneZero => lv.h10 - d * lv.h10.abs().max(0.1),
        };
        let Ok(ls) = LevelSet::new(h, center.region(), &lv) else { continue };
        if turning_points(&ls, p).is_err() {
            continue;
        }
        if let Ok(x) = section_abscissa(p, center, h) {
            out.push(x);
        }
    }
    out
}

fn conservation(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (a1, a4) in [(-3.0, -8.0 / 3.0), (-5.0, -4.0)] {
        let p = ReversibleParams::new(a1, a4).unwrap();
        let q = Perturbation::new(0.0, 1.0, 0.0, 0.0).unwrap();
        for center in [Center::Origin, Center::OneZero] {
            for x in section_starts(&p, center, 10, &mut rng) {
                let h0 = first_integral(x, 0.0, &p).unwrap();
                let tr = integrate(&p, &q, x, 0.0, 100.0, 1e-13).unwrap();
                for &(_, x, y) in &tr.samples {
                    worst = worst.max((first_integral(x, y, &p).unwrap() - h0).abs());
                }
                runs += 1;
            }
        }
    }
    let ok = worst <= 1e-9 && runs == 40;
    r.line(7, "conservation", ok, format!("{runs} runs, max |H - H0| {worst:.1e} <= 1e-9 over t in [0, 100]"), t);
}

fn return_identity(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = ReversibleParams::new(-3.0, -8.0 / 3.0).unwrap();
    let q = Perturbation::new(0.0, 1.0, -1.0, 2.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for center in [Center::Origin, Center::OneZero] {
        for x in section_starts(&p, center, 10, &mut rng) {
            worst = worst.max((return_map(&p, &q, x, center).unwrap() - x).abs());
            n += 1;
        }
    }
    r.line(8, "return-map identity", worst <= 1e-9 && n == 20, format!("{n} points, max |P(x) - x| {worst:.1e} <= 1e-9"), t);
}

fn large_cycles(r: &mut Report) {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, name) in [('A', "h1*"), ('D', "h5*")] {
        let c = case(label).unwrap();
        let p = c.params().unwrap();
        let z = c.zero(name).unwrap();
        let h_star = z.midpoint();
        let center = Center::from(z.region);
        let dist = |eps: f64| {
            let q = c.perturbation(eps, 1.0).unwrap();
            locate_cycle(&p, &q, center, h_star).map(|rep| (rep.h_assoc - h_star).abs())
        };
        match (dist(1e-3), dist(5e-4)) {
            (Ok(d1), Ok(d2)) => {
                let this = d1 <= 0.05 && d2 <= 0.5 * d1;
                ok &= this;
                parts.push(format!("case {label}: |h-h*| {d1:.2e} -> {d2:.2e}"));
            }
            (a, b) => {
                ok = false;
                parts.push(format!("case {label}: {:?} {:?}", a.err(), b.err()));
            }
        }
    }
    r.line(9, "large-cycle verification", ok, parts.join(", "), t);
}

fn oracle_equivalence(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 10 {
        let Ok(p) = ReversibleParams::new(rng.gen_range(-6.0..-1.2), rng.gen_range(-5.0..-0.2)) else { continue };
        let lv = critical_levels(&p);
        let region = if rng.gen_bool(0.5) { Region::Left } else { Region::Right };
        let d = 10f64.powf(rng.gen_range(-2.0..0.0));
        let h = match region {
            Region::Left => lv.h00 + d * lv.h00.abs().max(0.1),
            Region::Right => lv.h10 - d * lv.h10.abs().max(0.1),
        };
        let Ok(ls) = LevelSet::new(h, region, &lv) else { continue };
        let Ok(a) = abelian_integrals(&ls, &p) else { continue };
        let b = abelian_integrals_midpoint(&ls, &p, 1_000_000).unwrap();
        worst = worst.max(rel(a.i0, b.i0)).max(rel(a.i1, b.i1)).max(rel(a.i2, b.i2));
        n += 1;
    }
    r.line(10, "oracle equivalence", worst <= 1e-8, format!("{n} draws, max rel diff {worst:.1e} <= 1e-8"), t);
}

fn classification(r: &mut Report) {
    let t = Instant::now();
    let instances = [
        (CenterLabel::Q3R, CanonicalQuadratic::new(-3.0, 0.0, 0.0, -8.0 / 3.0).unwrap()),
        (CenterLabel::Q3H, CanonicalQuadratic::new(-2.0, 0.7, 0.0, 1.0).unwrap()),
        (CenterLabel::Q3LV, CanonicalQuadratic::new(-2.0, 0.0, 0.4, -1.0).unwrap()),
        (CenterLabel::Q4, CanonicalQuadratic::new(-7.0, 1.0, 5.0, -4.0).unwrap()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, c) in instances {
        let got = classify_canonical(&c).label;
        let div = verify_integrating_factor(label, &FactorSystem::Canonical(c));
        ok &= got == Some(label) && div <= 1e-5;
        parts.push(format!("{label}: div {div:.1e}"));
    }
    r.line(11, "classification", ok, parts.join(", "), t);
}

fn main() {
    let mut r = Report { failures: Vec::new() };
    critical_levels_match(&mut r);
    mu_spot_values(&mut r);
    hopf_chain(&mut r);
    melnikov_spot_values(&mut r);
    zero_reproduction(&mut r);
    expansion_consistency(&mut r);
    conservation(&mut r);
    return_identity(&mut r);
    large_cycles(&mut r);
    oracle_equivalence(&mut r);
    classification(&mut r);
    if !r.failures.is_empty() {
        eprintln!("failed criteria: {:?}", r.failures);
        std::process::exit(1);
    }
    println!("acceptance: all 11 criteria passed");
}
