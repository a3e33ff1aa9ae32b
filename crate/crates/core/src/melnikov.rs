//! First-order Melnikov function of the perturbed reversible system by direct
//! quadrature over the level ovals, with scans and zero refinement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QlcError, Result};
use crate::integrable::{critical_levels, turning_points, TurningPoints};
use crate::model::{LevelSet, Perturbation, Region, ReversibleParams};
use crate::quadrature::{integrate_vec, midpoint, QuadOptions};
use crate::roots::refine_bracket;

/// Accepted relative error of each Abelian integral, against `∫|f|`.
pub const QUAD_REL_TOL: f64 = 1e-11;

/// Ovals whose turning points come this close to the singular line are
/// rejected.
pub const SINGULAR_MARGIN: f64 = 1e-6;

/// Width at which [`find_zero`] stops.
pub const ZERO_XTOL: f64 = 1e-12;
pub const ZERO_MAX_ITER: usize = 80;

/// The three Abelian integrals whose combination is the Melnikov function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbelianTriple {
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
    /// Largest estimated relative error of the three.
    pub rel_error: f64,
}

impl AbelianTriple {
    pub fn combine(&self, q: &Perturbation) -> f64 {
        (q.a10 + q.b01) * self.i0 + q.b11 * self.i1 + q.a10 * self.i2
    }
}

struct Setup {
    tp: TurningPoints,
    /// Oval end nearest the singular line is `x_max`.
    near_max: bool,
    /// `1 + a1 x` at that end.
    u_near: f64,
    k: f64,
    e1: f64,
    e2: f64,
    s0: f64,
    s2: f64,
}

fn setup(ls: &LevelSet, p: &ReversibleParams) -> Result<Setup> {
    let tp = turning_points(ls, p)?;
    let xs = p.singular_x();
    let gap = (tp.x_min - xs).abs().min((tp.x_max - xs).abs());
    if gap < SINGULAR_MARGIN {
        return Err(QlcError::QuadratureFailure(format!(
            "oval at h = {} comes within {gap:e} of the singular line",
            ls.h()
        )));
    }
    let (a1, a4) = (p.a1(), p.a4());
    let s0 = match ls.region() {
        Region::Left => 2.0,
        Region::Right => -2.0,
    };
    let near_max = (tp.x_max - xs).abs() <= (tp.x_min - xs).abs();
    let near = if near_max { tp.x_max } else { tp.x_min };
    Ok(Setup {
        tp,
        near_max,
        u_near: 1.0 + a1 * near,
        k: (1.0 + a1 - a4) / (a4 * (a1 - a4) * (a1 - 2.0 * a4)),
        e1: -(a1 + 2.0 * a4) / a1,
        e2: -2.0 * (a1 + a4) / a1,
        s0,
        s2: -2.0 * (a1 + 2.0 * a4),
    })
}

/// Integrands in `theta` after `x = x_min + w sin^2(theta)`. The distance
/// to the end nearest the singular line is formed directly from `theta`,
/// so `1 + a1 x` keeps full relative accuracy where the factors peak.
fn integrand(th: f64, st: &Setup, h: f64, p: &ReversibleParams) -> [f64; 3] {
    let (a1, a4) = (p.a1(), p.a4());
    let w = st.tp.x_max - st.tp.x_min;
    let (s, c) = th.sin_cos();
    let (x, u) = if st.near_max {
        let d = w * c * c;
        (st.tp.x_max - d, st.u_near - a1 * d)
    } else {
        let d = w * s * s;
        (st.tp.x_min + d, st.u_near + a1 * d)
    };
    let dx = 2.0 * w * s * c;
    let b = u.abs();
    let f = x * x / (a1 - a4) - st.k * (1.0 + 2.0 * a4 * x) + 2.0 * h * u.signum() * b.powf(2.0 * a4 / a1);
    let y = f.max(0.0).sqrt();
    let g1 = b.powf(st.e1) * y * dx;
    [g1, g1 * x, b.powf(st.e2) * x * y * dx]
}

fn assemble(st: &Setup, raw: [f64; 3], rel_error: f64) -> AbelianTriple {
    AbelianTriple { i0: st.s0 * raw[0], i1: st.s0 * raw[1], i2: st.s2 * raw[2], rel_error }
}

/// Abelian integrals on the oval `ls` by adaptive Gauss–Kronrod quadrature.
pub fn abelian_integrals(ls: &LevelSet, p: &ReversibleParams) -> Result<AbelianTriple> {
    let st = setup(ls, p)?;
    let h = ls.h();
    let opts = QuadOptions { rel_tol: 1e-13, ..QuadOptions::default() };
    let est = integrate_vec(|th| integrand(th, &st, h, p), 0.0, std::f64::consts::FRAC_PI_2, &opts);
    let rel = est.worst_relative_error();
    if !(rel <= QUAD_REL_TOL) || est.value.iter().any(|v| !v.is_finite()) {
        return Err(QlcError::QuadratureFailure(format!(
            "relative error {rel:e} after {} intervals at h = {h}",
            est.intervals
        )));
    }
    Ok(assemble(&st, est.value, rel))
}

/// The same integrals by an `n`-panel midpoint rule in `theta`; an
/// independent check on [`abelian_integrals`].
pub fn abelian_integrals_midpoint(ls: &LevelSet, p: &ReversibleParams, n: usize) -> Result<AbelianTriple> {
    let st = setup(ls, p)?;
    let h = ls.h();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut raw = [0.0; 3];
    for (k, r) in raw.iter_mut().enumerate() {
        *r = midpoint(|th| integrand(th, &st, h, p)[k], 0.0, half_pi, n);
    }
    Ok(assemble(&st, raw, f64::NAN))
}

/// `M(h) = (a10 + b01) I0 + b11 I1 + a10 I2`.
pub fn melnikov(ls: &LevelSet, p: &ReversibleParams, q: &Perturbation) -> Result<f64> {
    Ok(abelian_integrals(ls, p)?.combine(q))
}

/// Convenience wrapper that builds the level set.
pub fn melnikov_at(h: f64, region: Region, p: &ReversibleParams, q: &Perturbation) -> Result<f64> {
    let ls = LevelSet::new(h, region, &critical_levels(p))?;
    melnikov(&ls, p, q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MelnikovSample {
    pub h: f64,
    /// `None` when the evaluation failed; see `error`.
    pub m: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
    pub m_lo: f64,
    pub m_hi: f64,
}

impl ZeroBracket {
    pub fn new(lo: f64, hi: f64, m_lo: f64, m_hi: f64) -> Result<Self> {
        if !(lo < hi) || !(m_lo * m_hi < 0.0) {
            return Err(QlcError::LostBracket { lo, hi, m_lo, m_hi });
        }
        Ok(Self { lo, hi, m_lo, m_hi })
    }
}

/// Scan grid on `[h_lo, h_hi]`: uniform, except that when one end lies
/// within a tenth of the width of the critical level, the first tenth of
/// the interval next to it gets a quarter of the points spaced
/// geometrically in distance from the critical level.
pub fn scan_grid(h_lo: f64, h_hi: f64, n: usize, critical: f64) -> Vec<f64> {
    if n <= 2 {
        return vec![h_lo, h_hi];
    }
    let width = h_hi - h_lo;
    let near_lo = (h_lo - critical).abs() <= (h_hi - critical).abs();
    let (near, far) = if near_lo { (h_lo, h_hi) } else { (h_hi, h_lo) };
    let d0 = (near - critical).abs();
    let mut pts = Vec::with_capacity(n);
    if d0 < 0.1 * width && d0 > 0.0 && n >= 8 {
        let n_geo = n / 4;
        let dir = (far - near).signum();
        let d1 = d0 + 0.1 * width;
        let ratio = (d1 / d0).powf(1.0 / n_geo as f64);
        let mut d = d0;
        for _ in 0..n_geo {
            pts.push(critical + dir * d);
            d *= ratio;
        }
        let start = near + dir * 0.1 * width;
        let n_uni = n - n_geo;
        for i in 0..n_uni {
            pts.push(start + (far - start) * i as f64 / (n_uni - 1) as f64);
        }
        pts[0] = near;
        *pts.last_mut().expect("nonempty") = far;
    } else {
        for i in 0..n {
            pts.push(h_lo + width * i as f64 / (n - 1) as f64);
        }
        pts[n - 1] = h_hi;
    }
    pts.sort_by(f64::total_cmp);
    pts
}

/// Samples `M` on [`scan_grid`]; failed samples are kept and flagged.
pub fn scan(
    region: Region,
    h_lo: f64,
    h_hi: f64,
    n: usize,
    p: &ReversibleParams,
    q: &Perturbation,
) -> Result<Vec<MelnikovSample>> {
    if n < 2 || !(h_lo < h_hi) {
        return Err(QlcError::DegenerateParameters(format!(
            "scan needs n >= 2 and h_lo < h_hi, got n = {n}, [{h_lo}, {h_hi}]"
        )));
    }
    let lv = critical_levels(p);
    LevelSet::new(h_lo, region, &lv)?;
    LevelSet::new(h_hi, region, &lv)?;
    let critical = match region {
        Region::Left => lv.h00,
        Region::Right => lv.h10,
    };
    let grid = scan_grid(h_lo, h_hi, n, critical);
    Ok(grid
        .par_iter()
        .map(|&h| match melnikov_at(h, region, p, q) {
            Ok(m) => MelnikovSample { h, m: Some(m), error: None },
            Err(e) => MelnikovSample { h, m: None, error: Some(e.to_string()) },
        })
        .collect())
}

/// Adjacent successful samples with strictly opposite signs.
pub fn sign_changes(samples: &[MelnikovSample]) -> Vec<ZeroBracket> {
    samples
        .windows(2)
        .filter_map(|w| match (w[0].m, w[1].m) {
            (Some(a), Some(b)) => ZeroBracket::new(w[0].h, w[1].h, a, b).ok(),
            _ => None,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroEstimate {
    pub h: f64,
    pub lo: f64,
    pub hi: f64,
    pub m_lo: f64,
    pub m_hi: f64,
    pub iterations: usize,
}

/// Refines a sign change of `M` by safeguarded secant–bisection.
pub fn find_zero(
    bracket: &ZeroBracket,
    p: &ReversibleParams,
    q: &Perturbation,
    region: Region,
) -> Result<ZeroEstimate> {
    let b = refine_bracket(
        |h| melnikov_at(h, region, p, q),
        bracket.lo,
        bracket.hi,
        ZERO_XTOL,
        ZERO_MAX_ITER,
    )?;
    Ok(ZeroEstimate { h: b.mid(), lo: b.lo, hi: b.hi, m_lo: b.f_lo, m_hi: b.f_hi, iterations: b.iterations })
}
