//! Expansion coefficients of the Melnikov function at the two centers and
//! the parameter solves that make leading coefficients vanish.
//!
//! Near the centers,
//!
//! ```text
//! M(h) = sum_j mu0j (h - h00)^(j+1)    (Left ovals)
//! M(h) = sum_j mu1j (h10 - h)^(j+1)    (Right ovals)
//! ```
//!
//! Each coefficient is `pi / N * s^e * (P_a10 a10 + P_b01 b01 + P_b11 b11)`
//! with `s = -1 - a1` and integer polynomials `P` in `(a1, a4)`. The
//! polynomials are evaluated in double-double so that the f64 result is
//! limited by the prefactor rounding rather than by cancellation.

mod dd;
mod tables;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{QlcError, Result};
use crate::model::{validate_reversible, Perturbation, ReversibleParams};
use dd::{powers, powers_dd, Dd};
use tables::*;

/// `mu0 = [mu00..mu03]` at `(0,0)`, `mu1 = [mu10..mu13]` at `(1,0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuCoefficients {
    pub mu0: [f64; 4],
    /// Present only when `(1,0)` is a center (`a1 < -1`).
    pub mu1: Option<[f64; 4]>,
}

impl MuCoefficients {
    /// Index of the first coefficient of `row` above `tol`, if any.
    pub fn first_nonzero(row: &[f64; 4], tol: f64) -> Option<usize> {
        row.iter().position(|m| m.abs() > tol)
    }
}

struct Poly3 {
    a10: &'static [Term],
    b01: &'static [Term],
    b11: &'static [Term],
    denom: f64,
}

const MU0: [Poly3; 4] = [
    Poly3 { a10: M00_A10, b01: M00_B01, b11: M00_B11, denom: 1.0 },
    Poly3 { a10: M01_A10, b01: M01_B01, b11: M01_B11, denom: 12.0 },
    Poly3 { a10: M02_A10, b01: M02_B01, b11: M02_B11, denom: 864.0 },
    Poly3 { a10: M03_A10, b01: M03_B01, b11: M03_B11, denom: 622080.0 },
];

const MU1: [Poly3; 4] = [
    Poly3 { a10: M10_A10, b01: M10_B01, b11: M10_B11, denom: 1.0 },
    Poly3 { a10: M11_A10, b01: M11_B01, b11: M11_B11, denom: 12.0 },
    Poly3 { a10: M12_A10, b01: M12_B01, b11: M12_B11, denom: 864.0 },
    Poly3 { a10: M13_A10, b01: M13_B01, b11: M13_B11, denom: 1244160.0 },
];

const MAX_DEGREE: usize = 8;

fn eval_table(t: &[Term], p1: &[Dd], p4: &[Dd]) -> Dd {
    let mut acc = Dd::ZERO;
    for &(c, i, j) in t {
        acc = acc.add(p1[i as usize].mul(p4[j as usize]).mul_f64(c));
    }
    acc
}

fn eval_poly3(poly: &Poly3, p1: &[Dd], p4: &[Dd], a10: Dd, b01: Dd, b11: Dd) -> f64 {
    eval_table(poly.a10, p1, p4)
        .mul(a10)
        .add(eval_table(poly.b01, p1, p4).mul(b01))
        .add(eval_table(poly.b11, p1, p4).mul(b11))
        .to_f64()
}

/// Exponents of `s = -1 - a1` multiplying `mu10..mu13`.
pub fn right_exponents(a1: f64, a4: f64) -> [f64; 4] {
    [
        -1.5,
        -2.0 * (a1 - a4) / a1,
        -(5.0 * a1 - 8.0 * a4) / (2.0 * a1),
        -2.0 * (a1 - 3.0 * a4) / a1,
    ]
}

/// Coefficients with `a4` and the perturbation given in double-double, so
/// that solved parameters enter before rounding to f64.
fn mu_from_dd(a1: f64, a4: Dd, a10: Dd, b01: Dd, b11: Dd, right: bool) -> MuCoefficients {
    let p1 = powers(a1, MAX_DEGREE);
    let p4 = powers_dd(a4, MAX_DEGREE);
    let mut mu0 = [0.0; 4];
    mu0[0] = 2.0 * PI * a10.add(b01).to_f64();
    for j in 1..4 {
        mu0[j] = PI / MU0[j].denom * eval_poly3(&MU0[j], &p1, &p4, a10, b01, b11);
    }
    let mu1 = right.then(|| {
        let s = -1.0 - a1;
        let ex = right_exponents(a1, a4.to_f64());
        let mut row = [0.0; 4];
        for j in 0..4 {
            row[j] = PI / MU1[j].denom * s.powf(ex[j]) * eval_poly3(&MU1[j], &p1, &p4, a10, b01, b11);
        }
        row
    });
    MuCoefficients { mu0, mu1 }
}

/// The eight expansion coefficients. Only `(a10, b01, b11)` of `q` enter.
pub fn mu_coefficients(p: &ReversibleParams, q: &Perturbation) -> MuCoefficients {
    let d = Dd::from_f64;
    mu_from_dd(p.a1(), d(p.a4()), d(q.a10), d(q.b01), d(q.b11), p.has_right_center())
}

/// `mu00 = 0`.
pub fn solve_b01_zero_mu00(a10: f64) -> f64 {
    -a10
}

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() < crate::model::DEGENERACY_TOL
}

/// `mu01 = 0` given `b01 = -a10`.
pub fn solve_b11_zero_mu01(p: &ReversibleParams, a10: f64) -> Result<f64> {
    let (a1, a4) = (p.a1(), p.a4());
    if near(a4, -1.0) {
        return Err(QlcError::DegenerateParameters(
            "a4 = -1: mu01 does not depend on b11 after mu00 = 0".into(),
        ));
    }
    Ok(-(a1 - 1.0 - a4) * (a1 + 2.0 * a4) / (1.0 + a4) * a10)
}

/// Line `a4(a1)` on which `mu02` vanishes after the left chain.
pub fn solve_a4_zero_mu02(a1: f64) -> f64 {
    (a1 - 5.0) / 3.0
}

/// Line `a4(a1)` on which `mu12` vanishes after the right chain.
pub fn solve_a4_zero_mu12(a1: f64) -> f64 {
    (6.0 * a1 + 5.0) / 3.0
}

/// `(b01, b11)` making `mu10 = mu11 = 0`.
pub fn solve_chain_right(p: &ReversibleParams, a10: f64) -> Result<(f64, f64)> {
    let (a1, a4) = (p.a1(), p.a4());
    if !p.has_right_center() {
        return Err(QlcError::DegenerateParameters("a1 >= -1: (1,0) is not a center".into()));
    }
    if near(a1 - a4 + 1.0, 0.0) {
        return Err(QlcError::DegenerateParameters(
            "a1 - a4 + 1 = 0: mu11 does not depend on b11; only a (1,1) distribution is reachable"
                .into(),
        ));
    }
    let b11 =
        (a1 + 2.0 * a4) * (2.0 * a1 - a4 + 1.0) / ((1.0 + a1).powi(2) * (a1 - a4 + 1.0)) * a10;
    let b01 = -b11 + (2.0 * a4 - 1.0) / (1.0 + a1) * a10;
    Ok((b01, b11))
}

/// Solved parameters carried in double-double.
#[derive(Clone, Copy)]
struct Exact {
    a4: Dd,
    b01: Dd,
    b11: Dd,
}

impl Exact {
    fn plain(a4: f64, b01: f64, b11: f64) -> Self {
        Exact { a4: Dd::from_f64(a4), b01: Dd::from_f64(b01), b11: Dd::from_f64(b11) }
    }
}

fn line_dd(a1: f64, c: f64, k: f64) -> Dd {
    Dd::from_f64(a1).mul_f64(c).add(Dd::from_f64(k)).div(Dd::from_f64(3.0))
}

/// `b11` of [`solve_b11_zero_mu01`].
fn b11_zero_mu01_dd(a1: f64, a4: Dd, a10: f64) -> Dd {
    let a1d = Dd::from_f64(a1);
    let f1 = a1d.sub(Dd::ONE).sub(a4);
    let f2 = a1d.add(a4.mul_f64(2.0));
    f1.mul(f2).div(Dd::ONE.add(a4)).mul_f64(-a10)
}

/// `(b01, b11)` of [`solve_chain_right`].
fn chain_right_dd(a1: f64, a4: Dd, a10: f64) -> (Dd, Dd) {
    let a1d = Dd::from_f64(a1);
    let one_a1 = a1d.add(Dd::ONE);
    let num = a1d.add(a4.mul_f64(2.0)).mul(a1d.mul_f64(2.0).sub(a4).add(Dd::ONE));
    let den = one_a1.mul(one_a1).mul(a1d.sub(a4).add(Dd::ONE));
    let b11 = num.div(den).mul_f64(a10);
    let b01 = b11.neg().add(a4.mul_f64(2.0).sub(Dd::ONE).div(one_a1).mul_f64(a10));
    (b01, b11)
}

/// Factored forms of the coefficients after the solves, used as
/// cross-checks of the general polynomials.
pub mod reduced {
    use std::f64::consts::PI;

    fn s(a1: f64) -> f64 {
        -1.0 - a1
    }

    fn core(a1: f64, a4: f64) -> f64 {
        a1 * (a1 - a4) * (a1 + 2.0 * a4)
    }

    /// `mu01` after `b01 = -a10`.
    pub fn mu01_after_b01(a1: f64, a4: f64, a10: f64, b11: f64) -> f64 {
        PI * ((a1 - 1.0 - a4) * (a1 + 2.0 * a4) * a10 + (1.0 + a4) * b11)
    }

    /// `mu02` after the left chain.
    pub fn mu02_left_chain(a1: f64, a4: f64, a10: f64) -> f64 {
        PI / 3.0 * core(a1, a4) * (a1 - 3.0 * a4 - 5.0) * a10
    }

    /// `mu03` after the left chain.
    pub fn mu03_left_chain(a1: f64, a4: f64, a10: f64) -> f64 {
        let q = 770.0 + 105.0 * a1 + 1400.0 * a4 + 42.0 * a1 * a1 - 434.0 * a1 * a4
            + 1274.0 * a4 * a4
            - 13.0 * a1.powi(3)
            + 128.0 * a1 * a1 * a4
            - 415.0 * a1 * a4 * a4
            + 444.0 * a4.powi(3);
        -PI / 144.0 * core(a1, a4) * q * a10
    }

    /// `mu10` after the left chain (requires `a4 != -1`).
    pub fn mu10_left_chain(a1: f64, a4: f64, a10: f64) -> f64 {
        -2.0 * PI / ((1.0 + a4) * s(a1).powf(1.5)) * core(a1, a4) * a10
    }

    /// `mu11` after the `mu10 = 0` solve for `b01`.
    pub fn mu11_after_b01(a1: f64, a4: f64, a10: f64, b11: f64) -> f64 {
        PI * s(a1).powf(-2.0 * (a1 - a4) / a1)
            * ((a1 + 2.0 * a4) * (2.0 * a1 - a4 + 1.0) * a10
                - (1.0 + a1).powi(2) * (a1 - a4 + 1.0) * b11)
    }

    /// `mu12` after the right chain.
    pub fn mu12_right_chain(a1: f64, a4: f64, a10: f64) -> f64 {
        PI / 3.0
            * s(a1).powf(-(5.0 * a1 - 8.0 * a4) / (2.0 * a1))
            * core(a1, a4)
            * (6.0 * a1 - 3.0 * a4 + 5.0)
            * a10
    }

    /// `mu00` after the right chain.
    pub fn mu00_right_chain(a1: f64, a4: f64, a10: f64) -> f64 {
        2.0 * PI / ((1.0 + a1).powi(2) * (a1 - a4 + 1.0)) * core(a1, a4) * a10
    }

    /// Values on the line `a4 = (a1 - 5)/3` after the left chain:
    /// `[mu03, mu04, mu10, mu11]`.
    pub fn line_left(a1: f64, a10: f64) -> [f64; 4] {
        let w = a1 * (a1 + 1.0) * (a1 - 2.0).powi(2) * (2.0 * a1 + 5.0) * a10;
        [
            -25.0 * PI / 162.0 * w,
            -5.0 * PI / 8748.0 * w * (a1 + 4.0) * (17.0 * a1 + 518.0),
            -10.0 * PI / 3.0 * s(a1).powf(-1.5) * a1 * (2.0 * a1 + 5.0) * a10,
            25.0 * PI / 324.0
                * s(a1).powf(-2.0 * (2.0 * a1 + 5.0) / (3.0 * a1))
                * a1
                * (a1 - 2.0).powi(2)
                * (2.0 * a1 + 5.0)
                * a10,
        ]
    }

    /// Values on the line `a4 = (6 a1 + 5)/3` after the right chain:
    /// `[mu13, mu14, mu00, mu01]`.
    pub fn line_right(a1: f64, a10: f64) -> [f64; 4] {
        let w = a1 * (3.0 * a1 + 2.0).powi(2) * (3.0 * a1 + 5.0) * a10;
        [
            -25.0 * PI / 324.0 * s(a1).powf((10.0 + 11.0 * a1) / a1) * w,
            -5.0 * PI / 17496.0
                * s(a1).powf((80.0 + 87.0 * a1) / (6.0 * a1))
                * w
                * (3.0 * a1 + 4.0)
                * (501.0 * a1 + 518.0),
            10.0 * PI / (3.0 * (1.0 + a1).powi(2)) * a1 * (3.0 * a1 + 5.0) * a10,
            -25.0 * PI / (324.0 * (1.0 + a1).powi(2)) * w,
        ]
    }

    /// `[mu01, mu10, mu11]` for `a4 = -1`, `b01 = -a10`.
    pub fn a4_minus_one(a1: f64, a10: f64, b11: f64) -> [f64; 3] {
        [
            PI * a1 * (a1 - 2.0) * a10,
            -2.0 * PI * s(a1).powf(-1.5) * ((a1 - 2.0) * a10 - (1.0 + a1) * b11),
            PI * s(a1).powf(-(2.0 + a1) / a1) * a1 * (a1 - 2.0) * a10,
        ]
    }

    /// `[mu00, mu01, mu11]` for `a4 = a1 + 1` after the `mu10 = 0` solve.
    pub fn a4_is_a1_plus_one(a1: f64, a10: f64, b11: f64) -> [f64; 3] {
        let a4 = a1 + 1.0;
        [
            2.0 * PI / (1.0 + a1) * ((3.0 * a1 + 2.0) * a10 - (1.0 + a1) * b11),
            -PI / (1.0 + a1) * a1 * (3.0 * a1 + 2.0) * a10,
            PI * s(a1).powf(-2.0 * (a1 - a4) / a1) * a1 * (3.0 * a1 + 2.0) * a10,
        ]
    }

    /// `[mu01, mu11]` for the one-cycle-at-each-center choice.
    pub fn one_one(a1: f64, a4: f64, a10: f64) -> [f64; 2] {
        [
            PI / (1.0 + a1) * core(a1, a4) * a10,
            -PI * s(a1).powf(-2.0 * (a1 - a4) / a1) * core(a1, a4) * a10,
        ]
    }
}

/// A named quantity that must be nonzero for a distribution to hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: f64,
}

/// A realized small-cycle distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub n0: u8,
    pub n1: u8,
    pub a1: f64,
    pub a4: f64,
    pub a10: f64,
    pub b01: f64,
    pub b11: f64,
    pub witnesses: Vec<Witness>,
    pub mu: MuCoefficients,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum DistributionOutcome {
    Achievable(Distribution),
    Impossible { n0: u8, n1: u8, reason: String, witness: Option<Witness> },
}

fn witness(name: &str, value: f64, a10: f64) -> Result<Witness> {
    if value.abs() <= 1e-12 * a10.abs().max(1.0) || !value.is_finite() {
        return Err(QlcError::DegenerateParameters(format!("witness {name} vanishes ({value:e})")));
    }
    Ok(Witness { name: name.to_string(), value })
}

fn realize(
    n: (u8, u8),
    a1: f64,
    a10: f64,
    exact: Exact,
    mut witnesses: Vec<Witness>,
    note: Option<String>,
) -> Result<DistributionOutcome> {
    let (a4, b01, b11) = (exact.a4.to_f64(), exact.b01.to_f64(), exact.b11.to_f64());
    validate_reversible(a1, a4)?;
    let mu = mu_from_dd(a1, exact.a4, Dd::from_f64(a10), exact.b01, exact.b11, true);
    let mu1 = mu.mu1.expect("a1 < -1 checked by caller");
    // The leading coefficients at each center are reported as well.
    let lead0 = mu.mu0[n.0 as usize];
    let lead1 = mu1[n.1 as usize];
    witnesses.push(witness(&format!("mu0{}", n.0), lead0, a10)?);
    witnesses.push(witness(&format!("mu1{}", n.1), lead1, a10)?);
    Ok(DistributionOutcome::Achievable(Distribution {
        n0: n.0,
        n1: n.1,
        a1,
        a4,
        a10,
        b01,
        b11,
        witnesses,
        mu,
        note,
    }))
}

/// Parameters realizing `target = (n0, n1)` small cycles around the two
/// centers, or the reason no such choice exists.
pub fn distribution(
    p: &ReversibleParams,
    target: (u8, u8),
    a10: f64,
) -> Result<DistributionOutcome> {
    let (a1, a4) = (p.a1(), p.a4());
    if !p.has_right_center() {
        return Err(QlcError::DegenerateParameters(
            "distributions need both centers (a1 < -1)".into(),
        ));
    }
    let core = a1 * (a1 - a4) * (a1 + 2.0 * a4) * a10;
    match target {
        (2, 1) | (1, 2) => Ok(DistributionOutcome::Impossible {
            n0: target.0,
            n1: target.1,
            reason: "impossible: a second cycle at one center forces the first \
                     coefficient at the other center to be nonzero"
                .into(),
            witness: Some(Witness { name: "a1(a1-a4)(a1+2a4)*a10".into(), value: core }),
        }),
        (3, 0) => {
            let a4 = solve_a4_zero_mu02(a1);
            let w = witness("(2a1+5)*a10", (2.0 * a1 + 5.0) * a10, a10)?;
            let q = validate_reversible(a1, a4)?;
            let b01 = solve_b01_zero_mu00(a10);
            solve_b11_zero_mu01(&q, a10)?;
            let a4d = line_dd(a1, 1.0, -5.0);
            let exact = Exact { a4: a4d, b01: Dd::from_f64(b01), b11: b11_zero_mu01_dd(a1, a4d, a10) };
            realize(target, a1, a10, exact, vec![w], Some("a4 set to (a1-5)/3".into()))
        }
        (0, 3) => {
            let a4 = solve_a4_zero_mu12(a1);
            let w = witness("(3a1+5)*a10", (3.0 * a1 + 5.0) * a10, a10)?;
            let q = validate_reversible(a1, a4)?;
            solve_chain_right(&q, a10)?;
            let a4d = line_dd(a1, 6.0, 5.0);
            let (b01, b11) = chain_right_dd(a1, a4d, a10);
            let exact = Exact { a4: a4d, b01, b11 };
            realize(target, a1, a10, exact, vec![w], Some("a4 set to (6a1+5)/3".into()))
        }
        (2, 0) => {
            let b01 = solve_b01_zero_mu00(a10);
            solve_b11_zero_mu01(p, a10).map_err(|_| {
                QlcError::DegenerateParameters(
                    "a4 = -1: only a (1,1) distribution is reachable".into(),
                )
            })?;
            let w = witness(
                "a1(a1-a4)(a1+2a4)(a1-3a4-5)*a10",
                core * (a1 - 3.0 * a4 - 5.0),
                a10,
            )?;
            let a4d = Dd::from_f64(a4);
            let exact = Exact { a4: a4d, b01: Dd::from_f64(b01), b11: b11_zero_mu01_dd(a1, a4d, a10) };
            realize(target, a1, a10, exact, vec![w], None)
        }
        (0, 2) => {
            solve_chain_right(p, a10)?;
            let a4d = Dd::from_f64(a4);
            let (b01, b11) = chain_right_dd(a1, a4d, a10);
            let w = witness(
                "a1(a1-a4)(a1+2a4)(6a1-3a4+5)*a10",
                core * (6.0 * a1 - 3.0 * a4 + 5.0),
                a10,
            )?;
            realize(target, a1, a10, Exact { a4: a4d, b01, b11 }, vec![w], None)
        }
        (1, 1) => {
            let b01 = solve_b01_zero_mu00(a10);
            let b11 = (a1 + 2.0 * a4) / (1.0 + a1) * a10;
            let w = witness("a1(a1-a4)(a1+2a4)*a10", core, a10)?;
            realize(target, a1, a10, Exact::plain(a4, b01, b11), vec![w], None)
        }
        (1, 0) => {
            let b01 = solve_b01_zero_mu00(a10);
            // b11 = 0 keeps mu10 = -2 pi s^{-3/2} (a1+2a4) a10 away from zero;
            // switch to b11 = a10 on the line where mu01 would vanish.
            let b11 = if near(a1 - 1.0 - a4, 0.0) { a10 } else { 0.0 };
            realize(target, a1, a10, Exact::plain(a4, b01, b11), vec![], None)
        }
        (0, 1) => {
            let b11 = if near(2.0 * a1 - a4 + 1.0, 0.0) { a10 } else { 0.0 };
            let b01 = -b11 + (2.0 * a4 - 1.0) / (1.0 + a1) * a10;
            realize(target, a1, a10, Exact::plain(a4, b01, b11), vec![], None)
        }
        (0, 0) => {
            let b11 = if near(a4, 0.5) { a10 } else { 0.0 };
            realize(target, a1, a10, Exact::plain(a4, 0.0, b11), vec![], None)
        }
        (n0, n1) => Ok(DistributionOutcome::Impossible {
            n0,
            n1,
            reason: "not an achievable small-cycle distribution (at most three in total, \
                     never (2,1) or (1,2))"
                .into(),
            witness: None,
        }),
    }
}
