//! Integrating factors, first integrals, critical levels and level ovals of
//! the unperturbed systems.
//!
//! For the reversible family every fractional power is taken of
//! `|1 + a1 x|`, with the sign of `1 + a1 x` carried separately. The two
//! half-planes are treated independently, so no rationality condition on
//! the exponents is needed.

use serde::{Deserialize, Serialize};

use crate::error::{QlcError, Result};
use crate::model::{CriticalLevels, LevelSet, Region, ReversibleParams};
use crate::roots::bisect_to_adjacent;

/// Smallest `|1 + a1 x|` accepted before reporting the singular line.
pub const SINGULAR_TOL: f64 = 1e-14;

/// Levels closer than this to a center level are rejected by
/// [`turning_points`].
pub const NEAR_CENTER_TOL: f64 = 1e-9;

fn base(x: f64, p: &ReversibleParams) -> Result<f64> {
    let u = 1.0 + p.a1() * x;
    if u.abs() < SINGULAR_TOL {
        Err(QlcError::SingularLine { x })
    } else {
        Ok(u)
    }
}

/// The constant `(1+a1-a4) / (a4 (a1-a4) (a1-2a4))`.
fn k_const(p: &ReversibleParams) -> f64 {
    let (a1, a4) = (p.a1(), p.a4());
    (1.0 + a1 - a4) / (a4 * (a1 - a4) * (a1 - 2.0 * a4))
}

/// Integrating factor `|1 + a1 x|^(-(a1 + 2 a4)/a1)`.
pub fn gamma(x: f64, p: &ReversibleParams) -> Result<f64> {
    let u = base(x, p)?;
    Ok(u.abs().powf(-(p.a1() + 2.0 * p.a4()) / p.a1()))
}

/// First integral of the reversible system.
pub fn first_integral(x: f64, y: f64, p: &ReversibleParams) -> Result<f64> {
    let (a1, a4) = (p.a1(), p.a4());
    let u = base(x, p)?;
    let s = u.signum();
    let bracket = y * y + k_const(p) * (1.0 + 2.0 * a4 * x) - x * x / (a1 - a4);
    Ok(0.5 * s * u.abs().powf(-2.0 * a4 / a1) * bracket)
}

/// `H(0,0)` and `H(1,0)` in closed form.
pub fn critical_levels(p: &ReversibleParams) -> CriticalLevels {
    let (a1, a4) = (p.a1(), p.a4());
    let d = a4 * (a1 - a4) * (a1 - 2.0 * a4);
    let h00 = (1.0 + a1 - a4) / (2.0 * d);
    let h10 = if a1 < -1.0 {
        -(a1 + 1.0) * (a4 + 1.0) * (-1.0 - a1).powf(-2.0 * a4 / a1) / (2.0 * d)
    } else {
        (1.0 + a1).powf(-2.0 * a4 / a1) * (1.0 + a1) * (1.0 + a4) / (2.0 * d)
    };
    CriticalLevels { h00, h10, right_center: a1 < -1.0 }
}

/// `y^2` on the level curve `H = h` at abscissa `x`.
pub fn oval_radicand(x: f64, h: f64, p: &ReversibleParams) -> Result<f64> {
    let (a1, a4) = (p.a1(), p.a4());
    let u = base(x, p)?;
    Ok(x * x / (a1 - a4) - k_const(p) * (1.0 + 2.0 * a4 * x)
        + 2.0 * h * u.signum() * u.abs().powf(2.0 * a4 / a1))
}

fn check_side(x: f64, region: Region, p: &ReversibleParams) -> Result<()> {
    match p.region_of(x) {
        Some(r) if r == region => Ok(()),
        Some(r) => Err(QlcError::RegionMismatch(format!(
            "x = {x} lies in the {r} region, level set is {region}"
        ))),
        None => Err(QlcError::SingularLine { x }),
    }
}

/// Upper branch of the oval at `x`; `None` when `x` is outside the oval.
pub fn y_plus(x: f64, ls: &LevelSet, p: &ReversibleParams) -> Result<Option<f64>> {
    check_side(x, ls.region(), p)?;
    let f = oval_radicand(x, ls.h(), p)?;
    Ok(if f >= 0.0 { Some(f.sqrt()) } else { None })
}

/// Intersections of an oval with the x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoints {
    pub x_min: f64,
    pub x_max: f64,
}

/// Locates both turning points by marching outward from the enclosed center
/// with doubling steps, then bisecting each sign change to adjacent floats.
pub fn turning_points(ls: &LevelSet, p: &ReversibleParams) -> Result<TurningPoints> {
    let h = ls.h();
    let region = ls.region();
    let lv = critical_levels(p);
    let gap = match region {
        Region::Left => h - lv.h00,
        Region::Right => lv.h10 - h,
    };
    if gap < NEAR_CENTER_TOL {
        return Err(QlcError::NoOval {
            h,
            reason: format!("level within {NEAR_CENTER_TOL:e} of the center level"),
        });
    }
    let xc = region.center_x();
    let xs = p.singular_x();
    let f = |x: f64| oval_radicand(x, h, p).unwrap_or(f64::NAN);
    if !(f(xc) > 0.0) {
        return Err(QlcError::NoOval { h, reason: "radicand not positive at the center".into() });
    }
    let toward = (xs - xc).signum();
    let dist = (xs - xc).abs();

    // Toward the singular line: doubling steps, never more than half the
    // remaining gap, so x_s itself is never evaluated.
    let mut pos = xc;
    let mut step = 1e-3 * dist;
    let inner = loop {
        let remaining = (xs - pos).abs();
        if remaining < 1e-12 * dist {
            return Err(QlcError::NoOval {
                h,
                reason: "level curve reaches the singular line".into(),
            });
        }
        let next = pos + toward * step.min(0.5 * remaining);
        let fv = f(next);
        if fv.is_nan() {
            return Err(QlcError::SingularLine { x: next });
        }
        if fv < 0.0 {
            break bisect_to_adjacent(f, pos, next);
        }
        pos = next;
        step *= 2.0;
    };

    // Away from the singular line: doubling steps without bound.
    let mut pos = xc;
    let mut step = 1e-3 * dist;
    let outer = loop {
        let next = pos - toward * step;
        if next.abs() > 1e12 {
            return Err(QlcError::NoOval { h, reason: "level curve is unbounded".into() });
        }
        let fv = f(next);
        if fv < 0.0 {
            break bisect_to_adjacent(f, pos, next);
        }
        pos = next;
        step *= 2.0;
    };
    let (x_min, x_max) = if inner < outer { (inner, outer) } else { (outer, inner) };
    Ok(TurningPoints { x_min, x_max })
}

/// Hamiltonian of the Hamiltonian class.
pub fn first_integral_hamiltonian(x: f64, y: f64, a1: f64, a2: f64) -> f64 {
    0.5 * (x * x + y * y) - x.powi(3) / 3.0 + 0.5 * a1 * x * y * y + a2 * y.powi(3) / 3.0
}

/// Branch of the Lotka–Volterra first integral, by the sign of
/// `a3^2 + 4 (1 + a1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LvBranch {
    Hyperbolic,
    Trigonometric,
}

pub fn lv_branch(a1: f64, a3: f64) -> Option<LvBranch> {
    let d = a3 * a3 + 4.0 * (1.0 + a1);
    if d > 0.0 {
        Some(LvBranch::Hyperbolic)
    } else if d < 0.0 {
        Some(LvBranch::Trigonometric)
    } else {
        None
    }
}

/// `g` whose reciprocal modulus is the Lotka–Volterra integrating factor.
pub fn lv_g(x: f64, y: f64, a1: f64, a3: f64) -> f64 {
    let w = x - 1.0;
    (1.0 + a1 * x) * (w * w + a3 * w * y - (1.0 + a1) * y * y)
}

/// First integral of the Lotka–Volterra class.
pub fn first_integral_lv(x: f64, y: f64, a1: f64, a3: f64) -> Result<f64> {
    let branch = lv_branch(a1, a3).ok_or_else(|| {
        QlcError::DivisionByZero("a3^2 + 4(1 + a1) = 0 separates the two branches".into())
    })?;
    if a1 == 0.0 || a1 == -1.0 {
        return Err(QlcError::DivisionByZero("a1 (1 + a1) = 0".into()));
    }
    let d = a3 * a3 + 4.0 * (1.0 + a1);
    let w = x - 1.0;
    let u = 1.0 + a1 * x;
    let q = (1.0 + a1) * y * y - a3 * y * w - w * w;
    if u == 0.0 || q == 0.0 {
        return Err(QlcError::LogDomain(format!("zero logarithm argument at ({x}, {y})")));
    }
    if w == 0.0 {
        return Err(QlcError::LogDomain("x = 1 makes the inverse-function argument unbounded".into()));
    }
    let r = (d.abs() * w * w).sqrt();
    let z = (a3 * w - 2.0 * (1.0 + a1) * y) / r;
    let logs = 2.0 * u.abs().ln() + a1 * q.abs().ln();
    let pre = -1.0 / (2.0 * a1 * (1.0 + a1));
    match branch {
        LvBranch::Hyperbolic => {
            if z.abs() >= 1.0 {
                return Err(QlcError::LogDomain(format!("|z| = {} >= 1 in atanh", z.abs())));
            }
            let atanh = 0.5 * ((1.0 + z) / (1.0 - z)).ln();
            let g = lv_g(x, y, a1, a3);
            Ok(g.signum() * pre * (logs + 2.0 * a1 * a3 * w / r * atanh))
        }
        LvBranch::Trigonometric => Ok(u.signum() * pre * (logs - 2.0 * a1 * a3 * w / r * z.atan())),
    }
}

/// `g` whose modulus to the power `-5/2` is the codimension-four factor.
pub fn q4_g(x: f64, y: f64, a2: f64) -> f64 {
    let w = x + a2 * y;
    1.0 - 2.0 * (1.0 + 2.0 * a2 * a2) * x - 2.0 * a2 * y + (1.0 + 4.0 * a2 * a2) * w * w
}

fn q4_f(x: f64, y: f64, a2: f64) -> f64 {
    let s = a2 * a2;
    let w = x + a2 * y;
    -(1.0 + s) + 3.0 * (x + a2 * y + 2.0 * s * x) * (1.0 + s - (1.0 + 3.0 * s) * w)
        + (1.0 + 3.0 * s) * (1.0 + 4.0 * s) * w.powi(3)
}

/// First integral of the codimension-four class.
pub fn first_integral_q4(x: f64, y: f64, a2: f64) -> Result<f64> {
    if a2 == 0.0 {
        return Err(QlcError::DivisionByZero("a2 = 0".into()));
    }
    let g = q4_g(x, y, a2);
    if g == 0.0 {
        return Err(QlcError::DivisionByZero(format!("g = 0 at ({x}, {y})")));
    }
    Ok(g.signum() * g.abs().powf(-1.5) * q4_f(x, y, a2) / (12.0 * a2.powi(6)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(a1: f64, a4: f64) -> ReversibleParams {
        ReversibleParams::new(a1, a4).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(0.0, &p(-3.0, 1.0)).unwrap(), 1.0);
        assert_eq!(gamma(0.37, &p(-3.0, 1.5)).unwrap(), 1.0);
        let g = gamma(0.1, &p(-5.0, -4.0)).unwrap();
        assert_relative_eq!(g, 0.5f64.powf(-13.0 / 5.0), max_relative = 1e-15);
        assert_relative_eq!(g, 6.062866266041592, max_relative = 1e-14);
        assert!(matches!(gamma(0.2, &p(-5.0, -4.0)), Err(QlcError::SingularLine { .. })));
    }

    #[test]
    fn first_integral_examples() {
        let pa = p(-30.0 / 7.0, -65.0 / 21.0);
        assert_relative_eq!(first_integral(0.0, 0.0, &pa).unwrap(), -441.0 / 32500.0, max_relative = 1e-14);
        let pe = p(-5.0, -4.0);
        assert_relative_eq!(first_integral(1.0, 0.0, &pe).unwrap(), -(2f64.powf(-21.0 / 5.0)), max_relative = 1e-14);
    }

    #[test]
    fn critical_levels_match_first_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let Ok(q) = ReversibleParams::new(rng.gen_range(-9.0..3.0), rng.gen_range(-6.0..6.0)) else {
                continue;
            };
            let lv = critical_levels(&q);
            assert_relative_eq!(lv.h00, first_integral(0.0, 0.0, &q).unwrap(), max_relative = 1e-12);
            if q.region_of(1.0).is_some() {
                assert_relative_eq!(lv.h10, first_integral(1.0, 0.0, &q).unwrap(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn y_plus_vanishes_at_centers_and_inverts_h() {
        let q = p(-4.0, -18.0 / 5.0);
        let lv = critical_levels(&q);
        // On the center level the oval degenerates to the center itself.
        assert!(oval_radicand(0.0, lv.h00, &q).unwrap().abs() < 1e-15);
        assert!(oval_radicand(1.0, lv.h10, &q).unwrap().abs() < 1e-15);
        let ls = LevelSet::new(lv.h00 + 0.01, Region::Left, &lv).unwrap();
        let y = y_plus(0.05, &ls, &q).unwrap().unwrap();
        assert!(y > 0.0);
        // Oracle: invert H(0.05, y) = h by bisection on y in [0, 10].
        let yo = bisect_to_adjacent(|yy| first_integral(0.05, yy, &q).unwrap() - ls.h(), 0.0, 10.0);
        assert!((y - yo).abs() < 1e-10);
        assert_relative_eq!(first_integral(0.05, y, &q).unwrap(), ls.h(), max_relative = 1e-12);
        assert!(matches!(y_plus(0.9, &ls, &q), Err(QlcError::RegionMismatch(_))));
    }

    #[test]
    fn turning_points_bracket_the_center() {
        let q = p(-4.0, -18.0 / 5.0);
        let lv = critical_levels(&q);
        let ls = LevelSet::new(0.1448192224, Region::Left, &lv).unwrap();
        let tp = turning_points(&ls, &q).unwrap();
        assert!(tp.x_min < 0.0 && 0.0 < tp.x_max && tp.x_max < q.singular_x());
        for x in [tp.x_min, tp.x_max] {
            assert!(oval_radicand(x, ls.h(), &q).unwrap().abs() < 1e-12);
            assert_relative_eq!(first_integral(x, 0.0, &q).unwrap(), ls.h(), max_relative = 1e-10);
            // Sign change across the root, the bisection oracle.
            let d = 1e-9 * x.abs().max(1.0);
            let inside = if x == tp.x_min { x + d } else { x - d };
            let outside = if x == tp.x_min { x - d } else { x + d };
            assert!(y_plus(inside, &ls, &q).unwrap().is_some());
            assert!(y_plus(outside, &ls, &q).unwrap().is_none());
        }
    }

    #[test]
    fn turning_points_shrink_to_centers() {
        let q = p(-30.0 / 7.0, -65.0 / 21.0);
        let lv = critical_levels(&q);
        let mut last = f64::INFINITY;
        for d in [1e-2, 1e-4, 1e-6, 1e-8] {
            let tl = turning_points(&LevelSet::new(lv.h00 + d, Region::Left, &lv).unwrap(), &q).unwrap();
            let tr = turning_points(&LevelSet::new(lv.h10 - d, Region::Right, &lv).unwrap(), &q).unwrap();
            assert!(tl.x_min < 0.0 && tl.x_max > 0.0);
            assert!(tr.x_min < 1.0 && tr.x_max > 1.0 && tr.x_min > q.singular_x());
            let w = (tl.x_max - tl.x_min).max(tr.x_max - tr.x_min);
            assert!(w < last);
            last = w;
        }
        assert!(last < 1e-2);
        let tiny = LevelSet::new(lv.h00 + 1e-12, Region::Left, &lv).unwrap();
        assert!(matches!(turning_points(&tiny, &q), Err(QlcError::NoOval { .. })));
    }

    #[test]
    fn far_right_oval_is_large() {
        let q = p(-30.0 / 7.0, -65.0 / 21.0);
        let lv = critical_levels(&q);
        let tp = turning_points(&LevelSet::new(-1.5, Region::Right, &lv).unwrap(), &q).unwrap();
        assert!(tp.x_max > 100.0);
        assert_relative_eq!(first_integral(tp.x_max, 0.0, &q).unwrap(), -1.5, max_relative = 1e-10);
        assert_relative_eq!(first_integral(tp.x_min, 0.0, &q).unwrap(), -1.5, max_relative = 1e-10);
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(first_integral_hamiltonian(0.0, 0.0, 3.0, -1.0), 0.0);
        assert_relative_eq!(first_integral_hamiltonian(1.0, 0.0, 3.0, -1.0), 1.0 / 6.0);
    }

    #[test]
    fn lv_branches() {
        assert_eq!(lv_branch(-2.0, 0.0), Some(LvBranch::Trigonometric));
        assert_eq!(lv_branch(0.5, 1.0), Some(LvBranch::Hyperbolic));
        assert_eq!(lv_branch(-2.0, 2.0), None);
        assert!(first_integral_lv(0.1, 0.05, -2.0, 0.0).is_ok());
        assert!(first_integral_lv(0.1, 0.05, 0.5, 1.0).is_ok());
        assert!(matches!(first_integral_lv(1.0, 0.3, 0.5, 1.0), Err(QlcError::LogDomain(_))));
    }

    #[test]
    fn q4_examples() {
        assert!(matches!(first_integral_q4(0.1, 0.1, 0.0), Err(QlcError::DivisionByZero(_))));
        for a2 in [1.0, 0.5, -0.8, 2.0] {
            assert_eq!(q4_g(0.0, 0.0, a2), 1.0);
            assert_relative_eq!(
                first_integral_q4(0.0, 0.0, a2).unwrap(),
                -(1.0 + a2 * a2) / (12.0 * a2.powi(6)),
                max_relative = 1e-15
            );
        }
    }

    fn divergence(field: impl Fn(f64, f64) -> (f64, f64), x: f64, y: f64, h: f64) -> f64 {
        (field(x + h, y).0 - field(x - h, y).0) / (2.0 * h)
            + (field(x, y + h).1 - field(x, y - h).1) / (2.0 * h)
    }

    #[test]
    fn reversible_factor_makes_field_divergence_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &(a1, a4) in &[(-3.0, -8.0 / 3.0), (-4.0, -3.6), (2.0, 3.0), (-5.0, -4.0)] {
            let q = p(a1, a4);
            let mut n = 0;
            while n < 1000 {
                let x = rng.gen_range(-1.0..1.5);
                let y = rng.gen_range(-1.0..1.0);
                if (1.0 + a1 * x).abs() < 0.5 {
                    continue;
                }
                n += 1;
                let field = |x: f64, y: f64| {
                    let g = gamma(x, &q).unwrap();
                    let (u, v) = q.field(x, y);
                    (g * u, g * v)
                };
                assert!(divergence(field, x, y, 1e-6).abs() < 1e-6, "({a1},{a4}) at ({x},{y})");
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn h_is_even_in_y(x in -3.0f64..3.0, y in -3.0f64..3.0, a1 in -6.0f64..4.0, a4 in -4.0f64..4.0) {
            if let Ok(q) = ReversibleParams::new(a1, a4) {
                if let (Ok(u), Ok(v)) = (first_integral(x, y, &q), first_integral(x, -y, &q)) {
                    proptest::prop_assert_eq!(u, v);
                }
            }
        }

        #[test]
        fn turning_points_lie_on_the_level(a1 in -8.0f64..-1.2, a4 in -5.0f64..-0.2, d in 1e-6f64..0.5) {
            if let Ok(q) = ReversibleParams::new(a1, a4) {
                let lv = critical_levels(&q);
                let ls = LevelSet::new(lv.h00 + d * lv.h00.abs().max(0.01), Region::Left, &lv).unwrap();
                if let Ok(tp) = turning_points(&ls, &q) {
                    for x in [tp.x_min, tp.x_max] {
                        let hx = first_integral(x, 0.0, &q).unwrap();
                        proptest::prop_assert!((hx - ls.h()).abs() <= 1e-10 * ls.h().abs().max(1.0));
                    }
                    proptest::prop_assert!(tp.x_min < 0.0 && tp.x_max > 0.0);
                }
            }
        }
    }
}
