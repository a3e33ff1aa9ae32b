//! Direct integration of the perturbed reversible system, Poincaré return
//! maps on the x-axis and location of the large limit cycles.

use serde::{Deserialize, Serialize};

use crate::error::{QlcError, Result};
use crate::integrable::{critical_levels, first_integral, turning_points};
use crate::model::{LevelSet, Perturbation, Region, ReversibleParams};
use crate::roots::refine_bracket;

/// Runs stop once `|1 + a1 x| / |a1|` drops below this.
pub const SINGULAR_STOP: f64 = 1e-6;
/// Runs stop once `|x| + |y|` exceeds this.
pub const ESCAPE_RADIUS: f64 = 1e3;
/// Step tolerance used by the return map.
pub const RETURN_TOL: f64 = 1e-12;
/// Section crossings are refined until `|y|` is below this.
pub const CROSSING_TOL: f64 = 1e-12;
/// Displacements at or below this size count as zero.
pub const DISPLACEMENT_NOISE: f64 = 1e-11;

/// `(x', y')` of the perturbed system.
pub fn perturbed_field(p: &ReversibleParams, q: &Perturbation, x: f64, y: f64) -> [f64; 2] {
    let (a1, a4) = (p.a1(), p.a4());
    [
        y * (1.0 + a1 * x) + q.eps * q.a10 * x,
        -x + x * x + a4 * y * y + q.eps * (q.b01 * y + q.b11 * x * y),
    ]
}

// Dormand–Prince 5(4) tableau; the field is autonomous so the nodes are
// only needed by the consistency test.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State = [f64; 2];

fn axpy(z: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *z;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

struct Stepper<'a> {
    p: &'a ReversibleParams,
    q: &'a Perturbation,
    evaluations: usize,
}

impl Stepper<'_> {
    fn f(&mut self, z: &State) -> State {
        self.evaluations += 1;
        perturbed_field(self.p, self.q, z[0], z[1])
    }

    /// One step of size `h` from `z` with `k1 = f(z)`; returns the fifth-order
    /// state, its derivative and the embedded error vector.
    fn step(&mut self, z: &State, k1: &State, h: f64) -> (State, State, State) {
        let k2 = self.f(&axpy(z, h, &[(A21, k1)]));
        let k3 = self.f(&axpy(z, h, &[(A31, k1), (A32, &k2)]));
        let k4 = self.f(&axpy(z, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
        let k5 = self.f(&axpy(z, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = self.f(&axpy(z, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let z5 = axpy(z, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = self.f(&z5);
        let mut err = [0.0; 2];
        for i in 0..2 {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        (z5, k7, err)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Largest accepted scaled error estimate (at most 1).
    pub max_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    NearSingularLine,
    Escaped,
    SectionCrossing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Accepted `(t, x, y)` samples, starting with the initial state.
    pub samples: Vec<(f64, f64, f64)>,
    pub stats: IntegratorStats,
    pub termination: Termination,
}

/// Sign change on `y = 0` in the given direction, with `x` accepted by the filter.
struct Section<'a> {
    direction: f64,
    accept: &'a dyn Fn(f64) -> bool,
}

struct Crossing {
    t: f64,
    x: f64,
}

fn check_tol(tol: f64) -> Result<()> {
    if (1e-13..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(QlcError::DegenerateParameters(format!("tolerance {tol:e} outside [1e-13, 1e-6]")))
    }
}

fn run(
    p: &ReversibleParams,
    q: &Perturbation,
    z0: State,
    t_max: f64,
    tol: f64,
    section: Option<&Section<'_>>,
    keep: bool,
    escape: f64,
) -> Result<(Trajectory, Option<Crossing>)> {
    let xs = p.singular_x();
    if (z0[0] - xs).abs() < SINGULAR_STOP {
        return Err(QlcError::SingularLine { x: z0[0] });
    }
    let mut st = Stepper { p, q, evaluations: 0 };
    let mut stats = IntegratorStats::default();
    let mut samples = vec![(0.0, z0[0], z0[1])];
    let (mut t, mut z) = (0.0, z0);
    let mut k1 = st.f(&z);
    let scale = |z: &State| 1.0 + z[0].abs().max(z[1].abs());
    let speed = k1[0].abs().max(k1[1].abs());
    let mut h = if speed > 0.0 { (0.01 * scale(&z) / speed).min(0.1) } else { 0.1 }.min(t_max);
    let mut termination = Termination::Completed;
    let mut crossing = None;
    while t < t_max {
        h = h.min(t_max - t);
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(QlcError::StepFailure { t });
        }
        let (zn, kn, err) = st.step(&z, &k1, h);
        let sc = |i: usize| tol * (1.0 + z[i].abs().max(zn[i].abs()));
        let e = ((err[0] / sc(0)).powi(2) + (err[1] / sc(1)).powi(2)).sqrt() / std::f64::consts::SQRT_2;
        if !e.is_finite() || !zn.iter().all(|v| v.is_finite()) {
            stats.rejected += 1;
            h *= 0.2;
            continue;
        }
        if e > 1.0 {
            stats.rejected += 1;
            h *= (0.9 * e.powf(-0.2)).max(0.2);
            continue;
        }
        stats.steps += 1;
        stats.max_error = stats.max_error.max(e);
        if let Some(sec) = section {
            let y_old = sec.direction * z[1];
            let y_new = sec.direction * zn[1];
            if y_old < 0.0 && y_new >= 0.0 && (sec.accept)(zn[0]) {
                let (zc, tau) = refine_crossing(&mut st, &z, &k1, h)?;
                t += tau;
                if keep {
                    samples.push((t, zc[0], zc[1]));
                }
                crossing = Some(Crossing { t, x: zc[0] });
                termination = Termination::SectionCrossing;
                break;
            }
        }
        t += h;
        z = zn;
        k1 = kn;
        if keep {
            samples.push((t, z[0], z[1]));
        }
        if (z[0] - xs).abs() < SINGULAR_STOP {
            termination = Termination::NearSingularLine;
            break;
        }
        if z[0].abs() + z[1].abs() > escape {
            termination = Termination::Escaped;
            break;
        }
        h *= (0.9 * e.max(1e-10).powf(-0.2)).min(5.0);
    }
    stats.evaluations = st.evaluations;
    if !keep {
        samples.push((t, z[0], z[1]));
    }
    Ok((Trajectory { samples, stats, termination }, crossing))
}

/// Solves `y(tau) = 0` for a single step of length `tau` in `(0, h)`.
fn refine_crossing(st: &mut Stepper<'_>, z: &State, k1: &State, h: f64) -> Result<(State, f64)> {
    if z[1] == 0.0 {
        return Ok((*z, 0.0));
    }
    let end = st.step(z, k1, h).0;
    if end[1] == 0.0 {
        return Ok((end, h));
    }
    let mut y_at = |tau: f64| -> Result<f64> {
        if tau == 0.0 {
            return Ok(z[1]);
        }
        Ok(st.step(z, k1, tau).0[1])
    };
    let b = refine_bracket(&mut y_at, 0.0, h, 0.0, 200)?;
    let tau = if b.f_lo.abs() <= b.f_hi.abs() { b.lo } else { b.hi };
    let zc = if tau == 0.0 { *z } else { st.step(z, k1, tau).0 };
    if zc[1].abs() > CROSSING_TOL {
        return Err(QlcError::StepFailure { t: tau });
    }
    Ok((zc, tau))
}

/// Adaptive Dormand–Prince 5(4) integration from `(x0, y0)` up to `t_max`.
pub fn integrate(
    p: &ReversibleParams,
    q: &Perturbation,
    x0: f64,
    y0: f64,
    t_max: f64,
    tol: f64,
) -> Result<Trajectory> {
    check_tol(tol)?;
    if !(t_max > 0.0) || !x0.is_finite() || !y0.is_finite() {
        return Err(QlcError::DegenerateParameters("need finite start and t_max > 0".into()));
    }
    Ok(run(p, q, [x0, y0], t_max, tol, None, true, ESCAPE_RADIUS)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    Origin,
    OneZero,
}

impl Center {
    pub fn region(self) -> Region {
        match self {
            Center::Origin => Region::Left,
            Center::OneZero => Region::Right,
        }
    }
}

impl From<Region> for Center {
    fn from(r: Region) -> Self {
        match r {
            Region::Left => Center::Origin,
            Region::Right => Center::OneZero,
        }
    }
}

/// Open segment of the x-axis between the center and the singular line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionSegment {
    pub center_x: f64,
    pub singular_x: f64,
    /// `+1` when orbits cross the segment upward, `-1` when downward.
    pub direction: f64,
}

impl SectionSegment {
    pub fn new(p: &ReversibleParams, center: Center) -> Result<Self> {
        let region = center.region();
        if region == Region::Right && !p.has_right_center() {
            return Err(QlcError::RegionMismatch("(1,0) is not a center for a1 >= -1".into()));
        }
        let (xc, xs) = (region.center_x(), p.singular_x());
        let far = if region == Region::Left && xs > 1.0 { 1.0 } else { xs };
        let mid = 0.5 * (xc + far);
        Ok(Self { center_x: xc, singular_x: xs, direction: (mid * (mid - 1.0)).signum() })
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = if self.center_x < self.singular_x {
            (self.center_x, self.singular_x)
        } else {
            (self.singular_x, self.center_x)
        };
        x > lo && x < hi
    }

    /// `+1` when moving away from the center along the segment.
    pub fn outward(&self) -> f64 {
        (self.singular_x - self.center_x).signum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Return {
    pub x: f64,
    pub period: f64,
}

/// Escape radius for a return map: `ESCAPE_RADIUS`, or ten times the
/// extent of the unperturbed oval through the start when that is larger.
fn annulus_radius(p: &ReversibleParams, center: Center, x_start: f64) -> f64 {
    let extent = first_integral(x_start, 0.0, p)
        .and_then(|h| LevelSet::new(h, center.region(), &critical_levels(p)))
        .and_then(|ls| turning_points(&ls, p))
        .map(|tp| tp.x_min.abs().max(tp.x_max.abs()) + (tp.x_max - tp.x_min))
        .unwrap_or(0.0);
    ESCAPE_RADIUS.max(10.0 * extent)
}

/// Next crossing of the section segment in the orbit's crossing direction.
pub fn return_map_full(p: &ReversibleParams, q: &Perturbation, x_start: f64, center: Center) -> Result<Return> {
    let seg = SectionSegment::new(p, center)?;
    if !seg.contains(x_start) {
        return Err(QlcError::RegionMismatch(format!("x = {x_start} is not on the section segment")));
    }
    let accept = |x: f64| seg.contains(x);
    let section = Section { direction: seg.direction, accept: &accept };
    let t_max = 1e5;
    let escape = annulus_radius(p, center, x_start);
    let (traj, crossing) = run(p, q, [x_start, 0.0], t_max, RETURN_TOL, Some(&section), false, escape)?;
    match (traj.termination, crossing) {
        (_, Some(c)) => Ok(Return { x: c.x, period: c.t }),
        (Termination::NearSingularLine, _) => {
            let (t, x, _) = *traj.samples.last().expect("nonempty");
            Err(QlcError::SingularLineHit { t, x })
        }
        (Termination::Escaped, _) => Err(QlcError::EscapedAnnulus(format!("|x|+|y| exceeded {escape}"))),
        _ => Err(QlcError::EscapedAnnulus(format!("no return to the section within t = {t_max}"))),
    }
}

/// Abscissa of the first return to the section started at `(x_start, 0)`.
pub fn return_map(p: &ReversibleParams, q: &Perturbation, x_start: f64, center: Center) -> Result<f64> {
    Ok(return_map_full(p, q, x_start, center)?.x)
}

/// `return_map(x) - x`.
pub fn displacement(p: &ReversibleParams, q: &Perturbation, x: f64, center: Center) -> Result<f64> {
    Ok(return_map(p, q, x, center)? - x)
}

/// Where the oval `H = h` meets the section segment.
pub fn section_abscissa(p: &ReversibleParams, center: Center, h: f64) -> Result<f64> {
    let seg = SectionSegment::new(p, center)?;
    let ls = LevelSet::new(h, center.region(), &critical_levels(p))?;
    let tp = turning_points(&ls, p)?;
    [tp.x_min, tp.x_max]
        .into_iter()
        .find(|&x| seg.contains(x))
        .ok_or_else(|| QlcError::NoOval { h, reason: "oval does not meet the section segment".into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub center: Center,
    pub x_cross: f64,
    pub period: f64,
    pub stability: Stability,
    pub h_assoc: f64,
    /// Displacement left at `x_cross`.
    pub residual: f64,
    pub eps: f64,
}

fn noisy_sign(d: f64) -> i8 {
    if d > DISPLACEMENT_NOISE {
        1
    } else if d < -DISPLACEMENT_NOISE {
        -1
    } else {
        0
    }
}

/// Finds the limit cycle near the oval `H = h_hint` from a sign change of
/// the displacement on the section.
pub fn locate_cycle(p: &ReversibleParams, q: &Perturbation, center: Center, h_hint: f64) -> Result<CycleReport> {
    let seg = SectionSegment::new(p, center)?;
    let x_star = section_abscissa(p, center, h_hint)?;
    let d = |x: f64| displacement(p, q, x, center);
    let room = (x_star - seg.center_x).abs().min((seg.singular_x - x_star).abs());
    let mut delta = (0.02f64).min(0.25 * room);
    let mut profile = Vec::new();
    let mut found = None;
    for _ in 0..4 {
        profile.clear();
        let xs: Vec<f64> = (0..9).map(|i| x_star + delta * (i as f64 - 4.0) / 4.0).collect();
        let mut prev: Option<(f64, f64)> = None;
        for &x in &xs {
            if !seg.contains(x) {
                continue;
            }
            let v = d(x)?;
            profile.push((x, v));
            if let Some((xp, vp)) = prev {
                let (sp, sv) = (noisy_sign(vp), noisy_sign(v));
                if sp != 0 && sv != 0 && sp != sv {
                    let closer = |a: f64, b: f64| (a - x_star).abs().min((b - x_star).abs());
                    if found.is_none_or(|(a, b, _, _)| closer(xp, x) < closer(a, b)) {
                        found = Some((xp, x, vp, v));
                    }
                }
            }
            prev = Some((x, v));
        }
        if found.is_some() {
            break;
        }
        delta = (2.0 * delta).min(0.5 * room);
    }
    let Some((lo, hi, d_lo, d_hi)) = found else {
        return Err(QlcError::NoSignChange { profile });
    };
    let b = refine_bracket(&d, lo, hi, 1e-13, 100)?;
    let x_cross = if b.f_lo.abs() <= b.f_hi.abs() { b.lo } else { b.hi };
    let ret = return_map_full(p, q, x_cross, center)?;
    let (d_in, d_out) = if (lo - seg.center_x).abs() < (hi - seg.center_x).abs() { (d_lo, d_hi) } else { (d_hi, d_lo) };
    let o = seg.outward();
    let stability = if d_in * o > 0.0 && d_out * o < 0.0 {
        Stability::Attracting
    } else if d_in * o < 0.0 && d_out * o > 0.0 {
        Stability::Repelling
    } else {
        Stability::Undetermined
    };
    Ok(CycleReport {
        center,
        x_cross,
        period: ret.period,
        stability,
        h_assoc: first_integral(x_cross, 0.0, p)?,
        residual: ret.x - x_cross,
        eps: q.eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> (ReversibleParams, Perturbation) {
        (ReversibleParams::new(-3.0, -8.0 / 3.0).unwrap(), Perturbation::new(0.0, 1.0, -1.0, 2.0).unwrap())
    }

    #[test]
    fn tableau_consistency() {
        const C2: f64 = 1.0 / 5.0;
        const C3: f64 = 3.0 / 10.0;
        const C4: f64 = 4.0 / 5.0;
        const C5: f64 = 8.0 / 9.0;
        let rows: [(f64, &[f64]); 5] = [
            (C2, &[A21]),
            (C3, &[A31, A32]),
            (C4, &[A41, A42, A43]),
            (C5, &[A51, A52, A53, A54]),
            (1.0, &[A61, A62, A63, A64, A65]),
        ];
        for (c, a) in rows {
            assert!((a.iter().sum::<f64>() - c).abs() < 1e-14);
        }
        assert!((B1 + B3 + B4 + B5 + B6 - 1.0).abs() < 1e-15);
        assert!((E1 + E3 + E4 + E5 + E6 + E7).abs() < 1e-15);
    }

    #[test]
    fn fifth_order_on_a_linear_problem() {
        // eps = 0 near the origin behaves like a rotation; compare two steps.
        let (p, q) = fixture();
        let mut st = Stepper { p: &p, q: &q, evaluations: 0 };
        let z = [1e-4, 0.0];
        let k1 = st.f(&z);
        let (z1, _, _) = st.step(&z, &k1, 0.1);
        // Exact rotation x = r cos t, y = -r sin t to leading order.
        assert!((z1[0] - 1e-4 * 0.1f64.cos()).abs() < 1e-9);
        assert!((z1[1] + 1e-4 * 0.1f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn equilibrium_stays_put() {
        let (p, _) = fixture();
        let q = Perturbation::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let tr = integrate(&p, &q, 1.0, 0.0, 10.0, 1e-10).unwrap();
        assert!(tr.samples.iter().all(|&(_, x, y)| x == 1.0 && y == 0.0));
        assert_eq!(tr.termination, Termination::Completed);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (p, q) = fixture();
        assert!(integrate(&p, &q, 0.1, 0.0, 1.0, 1e-3).is_err());
        assert!(matches!(integrate(&p, &q, 1.0 / 3.0, 0.0, 1.0, 1e-10), Err(QlcError::SingularLine { .. })));
    }

    #[test]
    fn times_increase() {
        let (p, q) = fixture();
        let q = q.with_eps(1e-3);
        let tr = integrate(&p, &q, 0.1, 0.0, 20.0, 1e-10).unwrap();
        assert!(tr.samples.windows(2).all(|w| w[1].0 > w[0].0));
        assert!(tr.stats.max_error <= 1.0 && tr.stats.steps > 10);
    }

    #[test]
    fn conserves_h_without_perturbation() {
        let (p, q) = fixture();
        let h0 = first_integral(0.1, 0.0, &p).unwrap();
        let tr = integrate(&p, &q, 0.1, 0.0, 100.0, 1e-13).unwrap();
        for &(_, x, y) in &tr.samples {
            assert!((first_integral(x, y, &p).unwrap() - h0).abs() <= 1e-9);
        }
    }

    #[test]
    fn section_geometry() {
        let (p, _) = fixture();
        let s = SectionSegment::new(&p, Center::Origin).unwrap();
        assert_eq!((s.direction, s.outward()), (-1.0, 1.0));
        let s = SectionSegment::new(&p, Center::OneZero).unwrap();
        assert_eq!((s.direction, s.outward()), (-1.0, -1.0));
        assert!(s.contains(0.5) && !s.contains(0.2));
        let p = ReversibleParams::new(2.0, 3.0).unwrap();
        assert!(SectionSegment::new(&p, Center::OneZero).is_err());
        assert_eq!(SectionSegment::new(&p, Center::Origin).unwrap().direction, 1.0);
    }

    #[test]
    fn unperturbed_return_is_identity() {
        let (p, q) = fixture();
        for &x in &[0.05, 0.1, 0.2] {
            assert!((return_map(&p, &q, x, Center::Origin).unwrap() - x).abs() <= 1e-9);
        }
        for &x in &[0.6, 0.75, 0.9] {
            assert!((return_map(&p, &q, x, Center::OneZero).unwrap() - x).abs() <= 1e-9);
        }
        // Large ovals near the singular line still close up.
        assert!((return_map(&p, &q, 0.3, Center::Origin).unwrap() - 0.3).abs() <= 1e-9);
        assert!(matches!(return_map(&p, &q, 0.4, Center::Origin), Err(QlcError::RegionMismatch(_))));
    }

    #[test]
    fn unperturbed_has_no_cycle() {
        let (p, q) = fixture();
        let h = first_integral(0.2, 0.0, &p).unwrap();
        assert!(matches!(locate_cycle(&p, &q, Center::Origin, h), Err(QlcError::NoSignChange { .. })));
    }
}
