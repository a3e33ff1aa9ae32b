use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use qlc_core::odesim::Center;
use qlc_core::{case, CaseSpec, Region};

#[derive(Debug, Parser)]
#[command(name = "qlc", version, about = "Limit cycles of quadratic near-integrable reversible systems")]
pub struct Cli {
    /// Worker threads for scans (default: logical cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Relative tolerance of the ODE integrator
    #[arg(long, global = true, value_parser = parse_num)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Center class of a canonical or complex-form quadratic system
    Classify(ClassifyArgs),
    /// Critical levels of the first integral at both centers
    Levels(SystemArgs),
    /// Expansion coefficients of the Melnikov function at both centers
    Mu(SystemArgs),
    /// Parameters realizing a small-cycle distribution
    HopfSolve(HopfArgs),
    /// Melnikov function on a level grid, as CSV `h,M,ok`
    Scan(ScanArgs),
    /// Zeros of the Melnikov function, as JSON
    Zeros(ScanArgs),
    /// Trajectory of the perturbed system, as CSV `t,x,y`
    Simulate(SimulateArgs),
    /// Large limit cycle near a level, as JSON
    Cycles(CycleArgs),
    /// Recompute the reference values of a worked case
    Reproduce(ReproduceArgs),
}

/// Decimal or `p/q` fraction.
pub fn parse_num(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
            let d: f64 = d.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
            if d == 0.0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            n / d
        }
        None => s.parse().map_err(|_| format!("'{s}' is not a number"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// `re,im` pair of numbers.
pub fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected 're,im', got '{s}'"))?;
    Ok((parse_num(re)?, parse_num(im)?))
}

pub fn parse_case(s: &str) -> Result<char, String> {
    let mut chars = s.trim().chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if case(c).is_some() => Ok(c.to_ascii_uppercase()),
        _ => Err(format!("unknown case '{s}' (expected one of A, B, C, D, E)")),
    }
}

pub fn parse_distribution(s: &str) -> Result<(u8, u8), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'n0,n1', got '{s}'"))?;
    let n = |t: &str| t.trim().parse::<u8>().map_err(|_| format!("bad count '{t}'"));
    Ok((n(a)?, n(b)?))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegionArg {
    Left,
    Right,
}

impl From<RegionArg> for Region {
    fn from(r: RegionArg) -> Self {
        match r {
            RegionArg::Left => Region::Left,
            RegionArg::Right => Region::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CenterArg {
    Origin,
    OneZero,
}

impl From<CenterArg> for Center {
    fn from(c: CenterArg) -> Self {
        match c {
            CenterArg::Origin => Center::Origin,
            CenterArg::OneZero => Center::OneZero,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a2: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a3: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a4: Option<f64>,
    /// Complex form: real part of the linear eigenvalue
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num, conflicts_with_all = ["a1", "a2", "a3", "a4"])]
    pub lambda: Option<f64>,
    /// Complex form: coefficient of z^2 as `re,im`
    #[arg(long = "A", allow_hyphen_values = true, value_parser = parse_pair, requires = "lambda")]
    pub a: Option<(f64, f64)>,
    /// Complex form: coefficient of z*conj(z) as `re,im`
    #[arg(long = "B", allow_hyphen_values = true, value_parser = parse_pair, requires = "lambda")]
    pub b: Option<(f64, f64)>,
    /// Complex form: coefficient of conj(z)^2 as `re,im`
    #[arg(long = "C", allow_hyphen_values = true, value_parser = parse_pair, requires = "lambda")]
    pub c: Option<(f64, f64)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parameters of the reversible system and its perturbation; `--case`
/// supplies defaults that explicit flags override.
#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long, value_parser = parse_case)]
    pub case: Option<char>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a4: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num, default_value = "1")]
    pub a10: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub b01: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub b11: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved system parameters.
#[derive(Debug, Clone, Copy)]
pub struct System {
    pub a1: f64,
    pub a4: f64,
    pub a10: f64,
    pub b01: f64,
    pub b11: f64,
    pub eps: f64,
}

pub fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::MissingRequiredArgument, msg).exit()
}

impl SystemArgs {
    pub fn spec(&self) -> Option<CaseSpec> {
        self.case.and_then(case)
    }

    /// Resolves the parameters; a missing `a1`/`a4` without `--case` is a usage error.
    pub fn resolve(&self, default_eps: f64) -> System {
        let spec = self.spec();
        let pick = |flag: Option<f64>, from_case: Option<f64>, name: &str| {
            flag.or(from_case).unwrap_or_else(|| usage_error(format!("--{name} is required without --case")))
        };
        let a10 = self.a10;
        System {
            a1: pick(self.a1, spec.as_ref().map(|c| c.a1), "a1"),
            a4: pick(self.a4, spec.as_ref().map(|c| c.a4), "a4"),
            a10,
            b01: self.b01.or(spec.as_ref().map(|c| c.b01 * a10)).unwrap_or(0.0),
            b11: self.b11.or(spec.as_ref().map(|c| c.b11 * a10)).unwrap_or(0.0),
            eps: self.eps.unwrap_or(default_eps),
        }
    }
}

#[derive(Debug, Args)]
pub struct HopfArgs {
    /// Target `n0,n1`: small cycles around (0,0) and (1,0)
    #[arg(long, value_parser = parse_distribution)]
    pub distribution: (u8, u8),
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a1: f64,
    /// Needed except for 3,0 and 0,3, which fix a4 themselves
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub a4: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num, default_value = "1")]
    pub a10: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum)]
    pub region: RegionArg,
    /// Lower level (default: the case's scan window)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub h_lo: Option<f64>,
    /// Upper level (default: the case's scan window)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub h_hi: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub x0: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num, default_value = "0")]
    pub y0: f64,
    #[arg(long, value_parser = parse_num, default_value = "100")]
    pub t_max: f64,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Center enclosed by the cycle (default: from --region or the case)
    #[arg(long, value_enum)]
    pub center: Option<CenterArg>,
    #[arg(long, value_enum)]
    pub region: Option<RegionArg>,
    /// Level of the oval the cycle bifurcates from (default: the case's zero)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
    pub h_hint: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_parser = parse_case)]
    pub case: char,
    /// Also locate the large cycle by simulation, when the case has one
    #[arg(long)]
    pub cycles: bool,
    #[arg(long, value_parser = parse_num, default_value = "1e-3")]
    pub eps: f64,
    /// JSON report destination
    #[arg(long)]
    pub out: Option<PathBuf>,
}
