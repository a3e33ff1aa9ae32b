//! Center classification, singularity layout of the reversible system and
//! numerical validation of integrating factors.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QlcError, Result};
use crate::integrable::{lv_g, q4_g};
use crate::model::{CanonicalQuadratic, ComplexFormParams, ReversibleParams};

/// Residual tolerance for accepting a center condition.
pub const CLASS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CenterLabel {
    /// Hamiltonian.
    Q3H,
    /// Lotka–Volterra.
    Q3LV,
    /// Reversible.
    Q3R,
    /// Codimension four.
    Q4,
}

impl fmt::Display for CenterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CenterLabel::Q3H => "Q3H",
            CenterLabel::Q3LV => "Q3LV",
            CenterLabel::Q3R => "Q3R",
            CenterLabel::Q4 => "Q4",
        })
    }
}

/// Priority order for the primary label.
const PRIORITY: [CenterLabel; 4] =
    [CenterLabel::Q3H, CenterLabel::Q3LV, CenterLabel::Q3R, CenterLabel::Q4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterClass {
    /// Primary label, `None` when no condition set holds.
    pub label: Option<CenterLabel>,
    /// Every label whose residuals pass, in priority order.
    pub labels: Vec<CenterLabel>,
    pub residuals: BTreeMap<String, f64>,
    pub note: Option<String>,
    /// First focus value, reported for the complex form only.
    pub v1: Option<f64>,
}

fn assemble(
    groups: &[(CenterLabel, Vec<(&str, f64)>)],
    extra: Option<(Vec<(&str, f64)>, &str)>,
    v1: Option<f64>,
) -> CenterClass {
    let mut residuals = BTreeMap::new();
    let mut passing = Vec::new();
    for (label, rs) in groups {
        let mut ok = true;
        for (name, r) in rs {
            residuals.insert(format!("{label}:{name}"), r.abs());
            ok &= r.abs() <= CLASS_TOL;
        }
        if ok {
            passing.push(*label);
        }
    }
    let mut note = None;
    if let Some((rs, msg)) = extra {
        let mut ok = true;
        for (name, r) in &rs {
            residuals.insert(format!("Q3R*:{name}"), r.abs());
            ok &= r.abs() <= CLASS_TOL;
        }
        if ok {
            if !passing.contains(&CenterLabel::Q3R) {
                passing.push(CenterLabel::Q3R);
            }
            note = Some(msg.to_string());
        }
    }
    let labels: Vec<CenterLabel> = PRIORITY.iter().copied().filter(|l| passing.contains(l)).collect();
    CenterClass { label: labels.first().copied(), labels, residuals, note, v1 }
}

/// Classifies `x' = y + a1 x y + a2 y^2`, `y' = -x + x^2 + a3 x y + a4 y^2`.
pub fn classify_canonical(c: &CanonicalQuadratic) -> CenterClass {
    let CanonicalQuadratic { a1, a2, a3, a4 } = *c;
    let groups = vec![
        (CenterLabel::Q3R, vec![("a3", a3), ("a2", a2)]),
        (CenterLabel::Q3H, vec![("a3", a3), ("a1+2a4", a1 + 2.0 * a4)]),
        (CenterLabel::Q3LV, vec![("a2", a2), ("1+a4", 1.0 + a4)]),
        (
            CenterLabel::Q4,
            vec![
                ("a3-5a2", a3 - 5.0 * a2),
                ("a1-5-3a4", a1 - 5.0 - 3.0 * a4),
                ("a4+2(1+a2^2)", a4 + 2.0 * (1.0 + a2 * a2)),
            ],
        ),
    ];
    let extra = vec![
        ("a3-5a2", a3 - 5.0 * a2),
        ("a1-5-3a4", a1 - 5.0 - 3.0 * a4),
        ("3(a4+2)(a4+1)^2-(5a4+6)a2^2", 3.0 * (a4 + 2.0) * (a4 + 1.0).powi(2) - (5.0 * a4 + 6.0) * a2 * a2),
    ];
    assemble(
        &groups,
        Some((extra, "reversible through the codimension-four normal form")),
        None,
    )
}

/// Classifies `z' = (i + lambda) z + A z^2 + B z zbar + C zbar^2`.
pub fn classify_complex(z: &ComplexFormParams) -> CenterClass {
    let (a, b, c) = (z.a, z.b, z.c);
    let l = z.lambda;
    let groups = vec![
        (CenterLabel::Q3LV, vec![("lambda", l), ("|B|", b.norm())]),
        (CenterLabel::Q3H, vec![("lambda", l), ("|2A+conj(B)|", (2.0 * a + b.conj()).norm())]),
        (
            CenterLabel::Q3R,
            vec![
                ("lambda", l),
                ("Im(AB)", (a * b).im),
                ("Im(conj(B)^3 C)", (b.conj().powu(3) * c).im),
                ("Im(A^3 C)", (a.powu(3) * c).im),
            ],
        ),
        (
            CenterLabel::Q4,
            vec![("lambda", l), ("|A-2conj(B)|", (a - 2.0 * b.conj()).norm()), ("||C|-|B||", c.norm() - b.norm())],
        ),
    ];
    assemble(&groups, None, Some(-(a * b).im))
}

fn denom(v: f64, what: &str) -> Result<f64> {
    if v.abs() < 1e-12 {
        Err(QlcError::DegenerateMap(format!("{what} = 0")))
    } else {
        Ok(v)
    }
}

fn normalized(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(QlcError::DegenerateMap(format!("complex form is not normalized: needs {what}")))
    }
}

/// Canonical coefficients of a complex-form system of the given class.
///
/// The identifications assume the normalization that puts the second
/// singularity on the x-axis: `C1 = -A1` (Q3LV), `C1 = A1` (Q3H), all
/// coefficients real (Q3R), `C1 = -3 B1` (Q4).
pub fn complex_to_canonical(z: &ComplexFormParams, class: CenterLabel) -> Result<CanonicalQuadratic> {
    let (a1, a2) = (z.a.re, z.a.im);
    let (b1, b2) = (z.b.re, z.b.im);
    let (c1, c2) = (z.c.re, z.c.im);
    let tol = 1e-10;
    let c = match class {
        CenterLabel::Q3LV => {
            normalized((c1 + a1).abs() <= tol, "C1 = -A1")?;
            let d = denom(a2 + c2, "A2 + C2")?;
            CanonicalQuadratic { a1: -2.0 * (a2 - c2) / d, a2: 0.0, a3: -4.0 * a1 / d, a4: -1.0 }
        }
        CenterLabel::Q3H => {
            normalized((c1 - a1).abs() <= tol, "C1 = A1")?;
            let d = denom(3.0 * a2 + c2, "3 A2 + C2")?;
            let k = -2.0 * (a2 - c2) / d;
            CanonicalQuadratic { a1: k, a2: 4.0 * a1 / d, a3: 0.0, a4: (a2 - c2) / d }
        }
        CenterLabel::Q3R => {
            normalized(a2.abs().max(b2.abs()).max(c2.abs()) <= tol, "real A, B, C")?;
            let d = denom(b1 - a1 - c1, "B1 - A1 - C1")?;
            CanonicalQuadratic { a1: 2.0 * (a1 - c1) / d, a2: 0.0, a3: 0.0, a4: (a1 + b1 + c1) / d }
        }
        CenterLabel::Q4 => {
            normalized((c1 + 3.0 * b1).abs() <= tol, "C1 = -3 B1")?;
            let d = denom(b2 - c2, "B2 - C2")?;
            CanonicalQuadratic {
                a1: -2.0 * (2.0 * b2 + c2) / d,
                a2: 2.0 * b1 / d,
                a3: 10.0 * b1 / d,
                a4: -(3.0 * b2 - c2) / d,
            }
        }
    };
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Center,
    Saddle,
    Node,
    Focus,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub x: f64,
    pub y: f64,
    pub kind: EquilibriumKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityLayout {
    pub equilibria: Vec<Equilibrium>,
}

/// Kind from the Jacobian; `symmetric` marks points fixed by the
/// reversing symmetry, where a zero trace means a true center.
pub fn jacobian_kind(j: [[f64; 2]; 2], symmetric: bool) -> EquilibriumKind {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let scale = j.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    if det.abs() <= 1e-14 * scale * scale {
        EquilibriumKind::Degenerate
    } else if det < 0.0 {
        EquilibriumKind::Saddle
    } else if tr.abs() <= 1e-14 * scale {
        if symmetric {
            EquilibriumKind::Center
        } else {
            EquilibriumKind::Degenerate
        }
    } else if tr * tr - 4.0 * det >= 0.0 {
        EquilibriumKind::Node
    } else {
        EquilibriumKind::Focus
    }
}

/// Equilibria of the reversible system with their linear type.
pub fn singularity_layout(p: &ReversibleParams) -> SingularityLayout {
    let (a1, a4) = (p.a1(), p.a4());
    let jac = |x: f64, y: f64| [[a1 * y, 1.0 + a1 * x], [-1.0 + 2.0 * x, 2.0 * a4 * y]];
    let mut equilibria = vec![
        Equilibrium { x: 0.0, y: 0.0, kind: jacobian_kind(jac(0.0, 0.0), true) },
        Equilibrium { x: 1.0, y: 0.0, kind: jacobian_kind(jac(1.0, 0.0), true) },
    ];
    if (a1 + 1.0) * a4 < 0.0 {
        let xs = -1.0 / a1;
        let ys = (-a4 * (a1 + 1.0)).sqrt() / (a1 * a4);
        for y in [ys, -ys] {
            equilibria.push(Equilibrium { x: xs, y, kind: jacobian_kind(jac(xs, y), false) });
        }
    }
    SingularityLayout { equilibria }
}

/// Linear type of `(1,0)` for the Lotka–Volterra class.
pub fn lv_one_zero_kind(a1: f64, a3: f64) -> EquilibriumKind {
    jacobian_kind([[0.0, 1.0 + a1], [1.0, a3]], a3 == 0.0)
}

/// System whose integrating factor is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorSystem {
    Canonical(CanonicalQuadratic),
    Complex(ComplexFormParams),
}

/// Points closer than this (in the factor's base) to the zero set are skipped.
pub const ZERO_SET_MARGIN: f64 = 0.1;

fn halton(i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut n = i;
    while n > 0 {
        f /= base as f64;
        r += f * (n % base) as f64;
        n /= base;
    }
    r
}

type Field = Box<dyn Fn(f64, f64) -> (f64, f64) + Sync>;
type Factor = Box<dyn Fn(f64, f64) -> (f64, f64) + Sync>;

/// `(base, exponent)` with factor `|base|^exponent`.
fn factor_for(label: CenterLabel, sys: &FactorSystem) -> (Field, Factor) {
    match *sys {
        FactorSystem::Canonical(c) => {
            let field: Field = Box::new(move |x, y| c.field(x, y));
            let factor: Factor = match label {
                CenterLabel::Q3H => Box::new(|_, _| (1.0, 0.0)),
                CenterLabel::Q3R => {
                    let e = -(c.a1 + 2.0 * c.a4) / c.a1;
                    Box::new(move |x, _| (1.0 + c.a1 * x, e))
                }
                CenterLabel::Q3LV => Box::new(move |x, y| (lv_g(x, y, c.a1, c.a3), -1.0)),
                CenterLabel::Q4 => Box::new(move |x, y| (q4_g(x, y, c.a2), -2.5)),
            };
            (field, factor)
        }
        FactorSystem::Complex(z) => {
            let field: Field = Box::new(move |x, y| z.field(x, y));
            let (a1, a2) = (z.a.re, z.a.im);
            let (b1, b2) = (z.b.re, z.b.im);
            let (c1, c2) = (z.c.re, z.c.im);
            let factor: Factor = match label {
                CenterLabel::Q3H => Box::new(|_, _| (1.0, 0.0)),
                CenterLabel::Q3R => {
                    let e = -(2.0 * a1 + b1) / (a1 - c1);
                    Box::new(move |_, y| (1.0 - 2.0 * (a1 - c1) * y, e))
                }
                CenterLabel::Q3LV => Box::new(move |x, y| {
                    let g = 1.0 + 4.0 * (a2 * x - a1 * y)
                        + 4.0 * (a1 * c2 + a2 * c1 - 2.0 * a1 * a2) * x * y
                        + ((a1 + c1) * (a1 - 3.0 * c1) + (a2 + c2) * (5.0 * a2 - 3.0 * c2)) * x * x
                        + ((a2 + c2) * (a2 - 3.0 * c2) + (a1 + c1) * (5.0 * a1 - 3.0 * c1)) * y * y
                        + 2.0
                            * (a1 * a1 + a2 * a2 - c1 * c1 - c2 * c2)
                            * ((a2 + c2) * x.powi(3) - (a1 + c1) * y.powi(3)
                                - (a1 - 3.0 * c1) * x * x * y
                                + (a2 - 3.0 * c2) * x * y * y);
                    (g, -1.0)
                }),
                CenterLabel::Q4 => Box::new(move |x, y| {
                    let g = 1.0 - 4.0 * (b2 * x + b1 * y)
                        + 2.0 * (b1 * b1 + b2 * b2) * (x * x + y * y)
                        - 2.0 * (b1 * c1 + b2 * c2) * (x * x - y * y)
                        + 4.0 * (b1 * c2 - b2 * c1) * x * y;
                    (g, -2.5)
                }),
            };
            (field, factor)
        }
    }
}

/// Largest divergence of `(gamma P, gamma Q)` over 500 Halton points in
/// `[-0.8, 0.8]^2`, by fourth-order central differences, skipping points
/// where the factor's base is within `ZERO_SET_MARGIN` of zero.
pub fn verify_integrating_factor(label: CenterLabel, sys: &FactorSystem) -> f64 {
    let (field, factor) = factor_for(label, sys);
    let h = 1e-5;
    let weighted = |x: f64, y: f64| {
        let (g, e) = factor(x, y);
        let w = g.abs().powf(e);
        let (p, q) = field(x, y);
        (w * p, w * q)
    };
    let d = |f: &dyn Fn(f64) -> f64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
    (1..=500usize)
        .into_par_iter()
        .filter_map(|i| {
            let x = -0.8 + 1.6 * halton(i, 2);
            let y = -0.8 + 1.6 * halton(i, 3);
            let (g, e) = factor(x, y);
            if e != 0.0 && g.abs() < ZERO_SET_MARGIN {
                return None;
            }
            let div = d(&|t| weighted(x + t, y).0) + d(&|t| weighted(x, y + t).1);
            Some(div.abs())
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cq(a1: f64, a2: f64, a3: f64, a4: f64) -> CanonicalQuadratic {
        CanonicalQuadratic::new(a1, a2, a3, a4).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(classify_canonical(&cq(-3.0, 0.0, 0.0, -8.0 / 3.0)).label, Some(CenterLabel::Q3R));
        let c = classify_canonical(&cq(-7.0, 1.0, 5.0, -4.0));
        assert_eq!(c.label, Some(CenterLabel::Q4));
        assert_eq!(classify_canonical(&cq(-2.0, 0.3, 0.0, 1.0)).label, Some(CenterLabel::Q3H));
        assert_eq!(classify_canonical(&cq(-2.0, 0.3, 0.0, 0.5)).label, None);
        assert_eq!(classify_canonical(&cq(-2.0, 0.7, 0.0, 1.0)).label, Some(CenterLabel::Q3H));
        assert_eq!(classify_canonical(&cq(-2.0, 0.0, 0.4, -1.0)).label, Some(CenterLabel::Q3LV));
    }

    #[test]
    fn ties_report_every_label() {
        // a2 = a3 = 0 and a1 + 2 a4 = 0: Hamiltonian and reversible at once.
        let c = classify_canonical(&cq(2.0, 0.0, 0.0, -1.0));
        assert_eq!(c.labels, vec![CenterLabel::Q3H, CenterLabel::Q3LV, CenterLabel::Q3R]);
        assert_eq!(c.label, Some(CenterLabel::Q3H));
    }

    #[test]
    fn remark_case_counts_as_reversible() {
        // Pick a4 and solve the cubic condition for a nonzero a2.
        let a4: f64 = -0.5;
        let a2 = (3.0 * (a4 + 2.0) * (a4 + 1.0).powi(2) / (5.0 * a4 + 6.0)).sqrt();
        let c = classify_canonical(&cq(5.0 + 3.0 * a4, a2, 5.0 * a2, a4));
        assert!(c.labels.contains(&CenterLabel::Q3R));
        assert!(c.note.is_some());
        assert!(c.residuals.values().all(|r| r.is_finite()));
    }

    #[test]
    fn residual_invariant_holds_for_the_label() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let mut v: [f64; 4] = [0.0; 4];
            for x in v.iter_mut() {
                *x = if rng.gen_bool(0.4) { 0.0 } else { rng.gen_range(-3.0..3.0) };
            }
            if rng.gen_bool(0.2) {
                v[3] = -1.0;
            }
            let c = classify_canonical(&cq(v[0], v[1], v[2], v[3]));
            if let Some(l) = c.label {
                let prefix = format!("{l}:");
                for (k, r) in &c.residuals {
                    if k.starts_with(&prefix) {
                        assert!(*r <= CLASS_TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn complex_examples() {
        let z = ComplexFormParams::new(0.0, (0.7, -0.2), (0.0, 0.0), (1.1, 0.3)).unwrap();
        assert_eq!(classify_complex(&z).label, Some(CenterLabel::Q3LV));
        let z = ComplexFormParams::new(0.0, (1.0, 0.0), (-2.0, 0.0), (0.0, 0.0)).unwrap();
        assert_eq!(classify_complex(&z).label, Some(CenterLabel::Q3H));
        let z = ComplexFormParams::new(0.0, (1.0, 1.0), (1.0, -1.0), (0.0, 0.0)).unwrap();
        assert_eq!(classify_complex(&z).v1, Some(0.0));
        let z = ComplexFormParams::new(0.1, (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)).unwrap();
        assert_eq!(classify_complex(&z).label, None);
    }

    #[test]
    fn map_examples() {
        let z = ComplexFormParams::new(0.0, (1.0, 0.0), (0.0, 0.0), (-2.0, 0.0)).unwrap();
        let c = complex_to_canonical(&z, CenterLabel::Q3R).unwrap();
        assert!((c.a1 - 6.0).abs() < 1e-15 && (c.a4 + 1.0).abs() < 1e-15);
        let z = ComplexFormParams::new(0.0, (0.5, 1.0), (0.0, 0.0), (-0.5, -1.0)).unwrap();
        assert!(matches!(complex_to_canonical(&z, CenterLabel::Q3LV), Err(QlcError::DegenerateMap(_))));
    }

    /// Random normalized complex-form systems of each class.
    fn sample(label: CenterLabel, rng: &mut ChaCha8Rng) -> ComplexFormParams {
        let r = |rng: &mut ChaCha8Rng| rng.gen_range(-1.5..1.5);
        match label {
            CenterLabel::Q3LV => {
                let (a1, a2, c2) = (r(rng), r(rng), r(rng));
                ComplexFormParams::new(0.0, (a1, a2), (0.0, 0.0), (-a1, c2)).unwrap()
            }
            CenterLabel::Q3H => {
                let (a1, a2, c2) = (r(rng), r(rng), r(rng));
                ComplexFormParams::new(0.0, (a1, a2), (-2.0 * a1, 2.0 * a2), (a1, c2)).unwrap()
            }
            CenterLabel::Q3R => {
                let (a1, b1, c1) = (r(rng), r(rng), r(rng));
                ComplexFormParams::new(0.0, (a1, 0.0), (b1, 0.0), (c1, 0.0)).unwrap()
            }
            CenterLabel::Q4 => {
                let b1: f64 = rng.gen_range(-0.4..0.4);
                let b2: f64 = rng.gen_range(1.2..1.6) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let c2 = -(b2 * b2 - 8.0 * b1 * b1).sqrt() * b2.signum();
                ComplexFormParams::new(0.0, (2.0 * b1, -2.0 * b2), (b1, b2), (-3.0 * b1, c2)).unwrap()
            }
        }
    }

    #[test]
    fn complex_and_canonical_classification_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for label in PRIORITY {
            for _ in 0..50 {
                let z = sample(label, &mut rng);
                let cz = classify_complex(&z);
                assert!(cz.labels.contains(&label), "{label} {z:?}");
                match complex_to_canonical(&z, label) {
                    Ok(c) => {
                        let cc = classify_canonical(&c);
                        assert!(cc.labels.contains(&label), "{label} {c:?}");
                    }
                    Err(QlcError::DegenerateMap(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn maps_conjugate_the_fields() {
        // x_bar = k x, y_bar = k y turns the normalized complex form into the
        // canonical one: canonical(k x, k y) = k * complex(x, y).
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for label in [CenterLabel::Q3LV, CenterLabel::Q3H, CenterLabel::Q4] {
            for _ in 0..20 {
                let z = sample(label, &mut rng);
                let Ok(c) = complex_to_canonical(&z, label) else { continue };
                let k = match label {
                    CenterLabel::Q3LV => -(z.a.im + z.c.im),
                    CenterLabel::Q3H => -(3.0 * z.a.im + z.c.im),
                    _ => z.b.im - z.c.im,
                };
                for _ in 0..5 {
                    let (x, y) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                    let (u, v) = z.field(x, y);
                    let (cu, cv) = c.field(k * x, k * y);
                    assert!((cu - k * u).abs() < 1e-12 && (cv - k * v).abs() < 1e-12, "{label}");
                }
            }
        }
    }

    #[test]
    fn q4_map_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..100 {
            let (b1, b2, c2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let z = ComplexFormParams::new(0.0, (2.0 * b1, -2.0 * b2), (b1, b2), (-3.0 * b1, c2)).unwrap();
            if let Ok(c) = complex_to_canonical(&z, CenterLabel::Q4) {
                assert!((c.a3 - 5.0 * c.a2).abs() < 1e-9 * c.a3.abs().max(1.0));
                assert!((c.a1 - 5.0 - 3.0 * c.a4).abs() < 1e-9 * c.a1.abs().max(1.0));
            }
        }
    }

    #[test]
    fn layout_examples() {
        let l = singularity_layout(&ReversibleParams::new(-3.0, -8.0 / 3.0).unwrap());
        let kinds: Vec<_> = l.equilibria.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EquilibriumKind::Center, EquilibriumKind::Center]);
        let l = singularity_layout(&ReversibleParams::new(2.0, 3.0).unwrap());
        let kinds: Vec<_> = l.equilibria.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EquilibriumKind::Center, EquilibriumKind::Saddle]);
        let l = singularity_layout(&ReversibleParams::new(-3.0, 1.0).unwrap());
        assert_eq!(l.equilibria.len(), 4);
        let extra = &l.equilibria[2..];
        for e in extra {
            assert!((e.x - 1.0 / 3.0).abs() < 1e-15);
            assert!((e.y.abs() - 2f64.sqrt() / 3.0).abs() < 1e-15);
            assert_eq!(e.kind, EquilibriumKind::Saddle);
        }
        assert!(extra[0].y < 0.0);
    }

    #[test]
    fn right_equilibrium_kind_follows_a1() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..200 {
            let Ok(p) = ReversibleParams::new(rng.gen_range(-6.0..4.0), rng.gen_range(-4.0..4.0)) else {
                continue;
            };
            let k = singularity_layout(&p).equilibria[1].kind;
            if p.a1() < -1.0 {
                assert_eq!(k, EquilibriumKind::Center);
            } else {
                assert_eq!(k, EquilibriumKind::Saddle);
            }
            let extra = singularity_layout(&p).equilibria.len() == 4;
            assert_eq!(extra, (p.a1() + 1.0) * p.a4() < 0.0);
        }
    }

    #[test]
    fn lv_subclassification_matches_thresholds() {
        for &(a1, a3) in &[(-3.0, 1.0), (-1.1, 1.0), (-1.5, 0.5), (0.5, 1.0), (-2.5, 2.0)] {
            let expected = if a1 > -1.0 {
                EquilibriumKind::Saddle
            } else if a1 < -(1.0 + a3 * a3 / 4.0) {
                EquilibriumKind::Focus
            } else {
                EquilibriumKind::Node
            };
            assert_eq!(lv_one_zero_kind(a1, a3), expected, "({a1},{a3})");
        }
    }

    #[test]
    fn q4_complex_factor_needs_the_sign_of_the_anisotropic_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let z = sample(CenterLabel::Q4, &mut rng);
        assert!(verify_integrating_factor(CenterLabel::Q4, &FactorSystem::Complex(z)) <= 1e-5);
        let (b1, b2, c1, c2) = (z.b.re, z.b.im, z.c.re, z.c.im);
        let field = |x: f64, y: f64| z.field(x, y);
        let flipped = |x: f64, y: f64| {
            1.0 - 4.0 * (b2 * x + b1 * y)
                + 2.0 * (b1 * b1 + b2 * b2) * (x * x + y * y)
                + 2.0 * (b1 * c1 + b2 * c2) * (x * x - y * y)
                + 4.0 * (b1 * c2 - b2 * c1) * x * y
        };
        let h = 1e-5;
        let w = |x: f64, y: f64| {
            let g = flipped(x, y).abs().powf(-2.5);
            let (p, q) = field(x, y);
            (g * p, g * q)
        };
        let (x, y) = (0.1, 0.05);
        let div = (w(x + h, y).0 - w(x - h, y).0 + w(x, y + h).1 - w(x, y - h).1) / (2.0 * h);
        assert!(div.abs() > 1e-3, "{div}");
    }

    #[test]
    fn canonical_factors_pass() {
        let h = verify_integrating_factor(CenterLabel::Q3H, &FactorSystem::Canonical(cq(-2.0, 0.7, 0.0, 1.0)));
        assert!(h <= 1e-8, "{h}");
        let r = verify_integrating_factor(CenterLabel::Q3R, &FactorSystem::Canonical(cq(-3.0, 0.0, 0.0, -8.0 / 3.0)));
        assert!(r <= 1e-5, "{r}");
        let q = verify_integrating_factor(CenterLabel::Q4, &FactorSystem::Canonical(cq(-7.0, 1.0, 5.0, -4.0)));
        assert!(q <= 1e-5, "{q}");
        let l = verify_integrating_factor(CenterLabel::Q3LV, &FactorSystem::Canonical(cq(-2.0, 0.0, 0.4, -1.0)));
        assert!(l <= 1e-5, "{l}");
    }

    #[test]
    fn wrong_factor_is_detected() {
        let d = verify_integrating_factor(CenterLabel::Q3H, &FactorSystem::Canonical(cq(-3.0, 0.0, 0.0, -8.0 / 3.0)));
        assert!(d > 1e-2);
    }

    #[test]
    fn reversible_factor_passes_for_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let mut n = 0;
        while n < 20 {
            let Ok(p) = ReversibleParams::new(rng.gen_range(-5.0..3.0), rng.gen_range(-3.0..3.0)) else {
                continue;
            };
            n += 1;
            let c = cq(p.a1(), 0.0, 0.0, p.a4());
            let d = verify_integrating_factor(CenterLabel::Q3R, &FactorSystem::Canonical(c));
            assert!(d <= 1e-5, "{p:?}: {d}");
        }
    }

    #[test]
    fn complex_factors_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for label in PRIORITY {
            for _ in 0..5 {
                let z = sample(label, &mut rng);
                let d = verify_integrating_factor(label, &FactorSystem::Complex(z));
                assert!(d <= 1e-5, "{label} {z:?}: {d}");
            }
        }
    }
}
