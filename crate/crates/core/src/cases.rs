//! The five worked parameter sets with their reference values.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::model::{Perturbation, Region, ReversibleParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuExpectation {
    /// `"mu03"` style name; row 0 is the origin, row 1 the point `(1,0)`.
    pub name: &'static str,
    pub row: usize,
    pub index: usize,
    pub value: f64,
    /// A differing published value, when the reference value is recomputed.
    pub published: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroExpectation {
    pub name: &'static str,
    pub region: Region,
    /// Interval known to contain the zero.
    pub lo: f64,
    pub hi: f64,
    /// Scan window holding this zero and no other.
    pub scan: (f64, f64),
}

impl ZeroExpectation {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseSpec {
    pub label: char,
    pub a1: f64,
    pub a4: f64,
    /// `b01 / a10`.
    pub b01: f64,
    /// `b11 / a10`.
    pub b11: f64,
    pub h00: f64,
    pub h10: f64,
    pub mu: Vec<MuExpectation>,
    pub zeros: Vec<ZeroExpectation>,
    /// Zero whose oval carries the large cycle checked by simulation.
    pub cycle: Option<&'static str>,
}

impl CaseSpec {
    pub fn params(&self) -> Result<ReversibleParams> {
        ReversibleParams::new(self.a1, self.a4)
    }

    pub fn perturbation(&self, eps: f64, a10: f64) -> Result<Perturbation> {
        Perturbation::new(eps, a10, self.b01 * a10, self.b11 * a10)
    }

    pub fn zero(&self, name: &str) -> Option<&ZeroExpectation> {
        self.zeros.iter().find(|z| z.name == name)
    }
}

fn mu(name: &'static str, value: f64) -> MuExpectation {
    let row = (name.as_bytes()[2] - b'0') as usize;
    let index = (name.as_bytes()[3] - b'0') as usize;
    MuExpectation { name, row, index, value, published: None }
}

fn zero(name: &'static str, region: Region, lo: f64, hi: f64, scan: (f64, f64)) -> ZeroExpectation {
    ZeroExpectation { name, region, lo, hi, scan }
}

pub const LABELS: [char; 5] = ['A', 'B', 'C', 'D', 'E'];

/// Reference data for case `label` (`A`..`E`).
pub fn case(label: char) -> Option<CaseSpec> {
    let l = label.to_ascii_uppercase();
    let c = match l {
        'A' => {
            let h10 = -(33957.0 / 747500.0) * (23.0f64 / 7.0).powf(5.0 / 9.0);
            CaseSpec {
                label: l,
                a1: -30.0 / 7.0,
                a4: -65.0 / 21.0,
                b01: -1.0,
                b11: 230.0 / 21.0,
                h00: -441.0 / 32500.0,
                h10,
                mu: vec![
                    mu("mu03", 139150000.0 * PI / 453789.0),
                    mu("mu10", -2500.0 * 161f64.sqrt() * PI / 3703.0),
                ],
                zeros: vec![zero("h1*", Region::Right, -0.9250363254, -0.9250363253, (-1.5, h10 - 1e-4))],
                cycle: Some("h1*"),
            }
        }
        'B' => {
            let h00 = 7803.0 / 5500.0;
            CaseSpec {
                label: l,
                a1: -70.0 / 51.0,
                a4: -55.0 / 51.0,
                b01: -5611.0 / 361.0,
                b11: 8670.0 / 361.0,
                h00,
                h10: -(44217.0 / 104500.0) * (19.0f64 / 51.0).powf(3.0 / 7.0),
                mu: vec![
                    mu("mu00", -10500.0 * PI / 361.0),
                    mu("mu13", 4561235000.0 / 565036352721.0 * (51.0f64 / 19.0).powf(2.0 / 7.0) * PI),
                ],
                zeros: vec![zero("h2*", Region::Left, 13.3847179116, 13.3847179117, (h00 + 1e-4, 20.0))],
                cycle: None,
            }
        }
        'C' => {
            let (h00, h10) = (25.0 / 384.0, -(325.0 / 3456.0) * 3f64.powf(0.2));
            let mut mu10 = mu("mu10", -896.0 * 3f64.sqrt() * PI / 585.0);
            mu10.published = Some(-40.0 * 3f64.sqrt() * PI / 9.0);
            CaseSpec {
                label: l,
                a1: -4.0,
                a4: -18.0 / 5.0,
                b01: -1.0,
                b11: 392.0 / 65.0,
                h00,
                h10,
                mu: vec![mu("mu02", -1344.0 * PI / 125.0), mu10],
                zeros: vec![
                    zero("h3*", Region::Left, 0.1448192224, 0.1448192225, (h00 + 1e-4, 1.0)),
                    zero("h4*", Region::Right, -0.5822537644, -0.5822537643, (-2.0, h10 - 1e-4)),
                ],
                cycle: None,
            }
        }
        'D' => {
            let (h00, h10) = (325.0 / 128.0, -(75.0 / 128.0) * 3f64.powf(0.8));
            CaseSpec {
                label: l,
                a1: -4.0 / 3.0,
                a4: -6.0 / 5.0,
                b01: -513.0 / 65.0,
                b11: 1176.0 / 65.0,
                h00,
                h10,
                mu: vec![
                    mu("mu00", -896.0 * PI / 65.0),
                    mu("mu12", -(448.0 / 30375.0) * 3f64.powf(0.9) * PI),
                ],
                zeros: vec![
                    zero("h5*", Region::Left, 12.6197809949, 12.6197809950, (h00 + 1e-4, 20.0)),
                    zero("h6*", Region::Right, -3.1388150376, -3.1388150375, (-5.0, h10 - 1e-4)),
                ],
                cycle: Some("h5*"),
            }
        }
        'E' => {
            let h10 = -(2f64.powf(-21.0 / 5.0));
            CaseSpec {
                label: l,
                a1: -5.0,
                a4: -4.0,
                b01: -1.0,
                b11: 26.0 / 3.0,
                h00: 0.0,
                h10,
                mu: vec![mu("mu02", -130.0 * PI / 3.0), mu("mu10", -65.0 * PI / 12.0)],
                zeros: vec![
                    zero("h7*", Region::Left, 0.0, 0.1, (1e-4, 0.1)),
                    zero("h8*", Region::Right, h10 - 0.8, h10, (h10 - 0.8, h10 - 1e-4)),
                ],
                cycle: None,
            }
        }
        _ => return None,
    };
    Some(c)
}

pub fn all_cases() -> Vec<CaseSpec> {
    LABELS.iter().filter_map(|&l| case(l)).collect()
}
