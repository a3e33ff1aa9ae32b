//! Parameter types and region geometry.
//!
//! The reversible system is
//!
//! ```text
//! x' = y (1 + a1 x) + eps a10 x
//! y' = -x + x^2 + a4 y^2 + eps (b01 y + b11 x y)
//! ```
//!
//! with the singular line `1 + a1 x = 0` splitting the plane into a
//! `Left` half (containing the center `(0,0)`) and a `Right` half
//! (containing `(1,0)` when `a1 < -1`).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QlcError, Result};

/// Absolute tolerance for the excluded parameter sets.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Coefficients of `x' = y + a1 x y + a2 y^2`, `y' = -x + x^2 + a3 x y + a4 y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalQuadratic {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl CanonicalQuadratic {
    pub fn new(a1: f64, a2: f64, a3: f64, a4: f64) -> Result<Self> {
        if ![a1, a2, a3, a4].iter().all(|v| v.is_finite()) {
            return Err(QlcError::DegenerateParameters(
                "canonical coefficients must be finite".into(),
            ));
        }
        Ok(Self { a1, a2, a3, a4 })
    }

    pub fn field(&self, x: f64, y: f64) -> (f64, f64) {
        (
            y + self.a1 * x * y + self.a2 * y * y,
            -x + x * x + self.a3 * x * y + self.a4 * y * y,
        )
    }
}

/// Validated `(a1, a4)` for the reversible system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReversible", into = "RawReversible")]
pub struct ReversibleParams {
    a1: f64,
    a4: f64,
    two_center: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawReversible {
    a1: f64,
    a4: f64,
    #[serde(default)]
    two_center: bool,
}

impl TryFrom<RawReversible> for ReversibleParams {
    type Error = QlcError;
    fn try_from(r: RawReversible) -> Result<Self> {
        validate_reversible(r.a1, r.a4)
    }
}

impl From<ReversibleParams> for RawReversible {
    fn from(p: ReversibleParams) -> Self {
        RawReversible { a1: p.a1, a4: p.a4, two_center: p.two_center }
    }
}

/// Checks the excluded degeneracies and tags the two-center flag.
pub fn validate_reversible(a1: f64, a4: f64) -> Result<ReversibleParams> {
    let fail = |why: &str| Err(QlcError::DegenerateParameters(why.to_string()));
    if !a1.is_finite() || !a4.is_finite() {
        return fail("a1 and a4 must be finite");
    }
    if a4.abs() < DEGENERACY_TOL {
        return fail("a4 = 0");
    }
    if (a1 - a4).abs() < DEGENERACY_TOL {
        return fail("a1 = a4");
    }
    if (a1 - 2.0 * a4).abs() < DEGENERACY_TOL {
        return fail("a1 = 2*a4");
    }
    if a1.abs() < DEGENERACY_TOL {
        return fail("a1 = 0");
    }
    if (a1 + 1.0).abs() < DEGENERACY_TOL {
        return fail("a1 = -1");
    }
    Ok(ReversibleParams { a1, a4, two_center: a1 < -1.0 && a4 < 0.0 })
}

impl ReversibleParams {
    pub fn new(a1: f64, a4: f64) -> Result<Self> {
        validate_reversible(a1, a4)
    }

    /// Re-runs validation; a validated value comes back unchanged.
    pub fn validate(self) -> Result<Self> {
        validate_reversible(self.a1, self.a4)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a4(&self) -> f64 {
        self.a4
    }

    /// Set iff `a1 < -1` and `a4 < 0`.
    pub fn two_center(&self) -> bool {
        self.two_center
    }

    /// `(1,0)` is a center iff `a1 < -1`.
    pub fn has_right_center(&self) -> bool {
        self.a1 < -1.0
    }

    /// Abscissa of the singular line.
    pub fn singular_x(&self) -> f64 {
        -1.0 / self.a1
    }

    /// Region containing `x`, or `None` on the singular line.
    pub fn region_of(&self, x: f64) -> Option<Region> {
        let u = 1.0 + self.a1 * x;
        if u > 0.0 {
            Some(Region::Left)
        } else if u < 0.0 {
            Some(Region::Right)
        } else {
            None
        }
    }

    /// The unperturbed vector field.
    pub fn field(&self, x: f64, y: f64) -> (f64, f64) {
        (y * (1.0 + self.a1 * x), -x + x * x + self.a4 * y * y)
    }
}

/// Perturbation `(eps, a10, b01, b11)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub eps: f64,
    pub a10: f64,
    pub b01: f64,
    pub b11: f64,
}

impl Perturbation {
    pub fn new(eps: f64, a10: f64, b01: f64, b11: f64) -> Result<Self> {
        if ![eps, a10, b01, b11].iter().all(|v| v.is_finite()) {
            return Err(QlcError::DegenerateParameters(
                "perturbation coefficients must be finite".into(),
            ));
        }
        if eps < 0.0 {
            return Err(QlcError::DegenerateParameters("eps < 0".into()));
        }
        Ok(Self { eps, a10, b01, b11 })
    }

    /// Scales `(a10, b01, b11)` jointly, leaving `eps` alone.
    pub fn scaled(&self, c: f64) -> Self {
        Self { eps: self.eps, a10: c * self.a10, b01: c * self.b01, b11: c * self.b11 }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..*self }
    }
}

/// Half-plane on one side of the singular line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// `1 + a1 x > 0`, around `(0,0)`.
    Left,
    /// `1 + a1 x < 0`, around `(1,0)`.
    Right,
}

impl Region {
    /// Abscissa of the center enclosed by ovals of this region.
    pub fn center_x(self) -> f64 {
        match self {
            Region::Left => 0.0,
            Region::Right => 1.0,
        }
    }

    /// Sign of `1 + a1 x` inside the region.
    pub fn sign(self) -> f64 {
        match self {
            Region::Left => 1.0,
            Region::Right => -1.0,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Left => "left",
            Region::Right => "right",
        })
    }
}

impl FromStr for Region {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Region::Left),
            "right" | "r" => Ok(Region::Right),
            other => Err(format!("unknown region '{other}' (expected left|right)")),
        }
    }
}

/// Values of the first integral at the two centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalLevels {
    pub h00: f64,
    /// `H(1,0)`; a center level only when `right_center` holds.
    pub h10: f64,
    pub right_center: bool,
}

/// A level value together with the half-plane of its oval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    h: f64,
    region: Region,
}

impl LevelSet {
    /// Left needs `h > h00`; Right needs `h < h10` and a center at `(1,0)`.
    pub fn new(h: f64, region: Region, levels: &CriticalLevels) -> Result<Self> {
        if !h.is_finite() {
            return Err(QlcError::NoOval { h, reason: "level is not finite".into() });
        }
        match region {
            Region::Left if h <= levels.h00 => Err(QlcError::NoOval {
                h,
                reason: format!("left ovals need h > h00 = {}", levels.h00),
            }),
            Region::Right if !levels.right_center => Err(QlcError::RegionMismatch(
                "(1,0) is not a center (a1 >= -1)".into(),
            )),
            Region::Right if h >= levels.h10 => Err(QlcError::NoOval {
                h,
                reason: format!("right ovals need h < h10 = {}", levels.h10),
            }),
            _ => Ok(Self { h, region }),
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn region(&self) -> Region {
        self.region
    }
}

/// Complex-form coefficients of `z' = (i + lambda) z + A z^2 + B z zbar + C zbar^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexFormParams {
    pub lambda: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl ComplexFormParams {
    pub fn new(lambda: f64, a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Result<Self> {
        let all = [lambda, a.0, a.1, b.0, b.1, c.0, c.1];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(QlcError::DegenerateParameters(
                "complex-form coefficients must be finite".into(),
            ));
        }
        Ok(Self {
            lambda,
            a: Complex64::new(a.0, a.1),
            b: Complex64::new(b.0, b.1),
            c: Complex64::new(c.0, c.1),
        })
    }

    /// The real form of the system (with `y -> -y`).
    pub fn field(&self, x: f64, y: f64) -> (f64, f64) {
        let (a1, a2) = (self.a.re, self.a.im);
        let (b1, b2) = (self.b.re, self.b.im);
        let (c1, c2) = (self.c.re, self.c.im);
        let l = self.lambda;
        (
            l * x + y + (a1 + b1 + c1) * x * x + 2.0 * (a2 - c2) * x * y
                - (a1 - b1 + c1) * y * y,
            -x + l * y - (a2 + b2 + c2) * x * x + 2.0 * (a1 - c1) * x * y
                + (a2 - b2 + c2) * y * y,
        )
    }
}
