//! Bracketed scalar root finding.

use crate::error::{QlcError, Result};

/// Final bracket of a sign-change search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub iterations: usize,
}

impl Bracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Plain bisection on a continuous `f` with `f(a)` and `f(b)` of opposite
/// sign, run until the endpoints are adjacent floats. Returns the endpoint
/// with the smaller `|f|`.
pub fn bisect_to_adjacent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

/// Bisection with one guarded secant step per iteration, for functions whose
/// evaluation can fail. Stops when `hi - lo <= xtol` or after `max_iter`.
pub fn refine_bracket<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<Bracket> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if !(f_lo * f_hi < 0.0) {
        return Err(QlcError::LostBracket { lo, hi, m_lo: f_lo, m_hi: f_hi });
    }
    let mut it = 0;
    while hi - lo > xtol && it < max_iter {
        it += 1;
        let w = hi - lo;
        let s = lo - f_lo * w / (f_hi - f_lo);
        if s.is_finite() && s > lo + 0.05 * w && s < hi - 0.05 * w {
            let fs = f(s)?;
            if fs == 0.0 {
                return Ok(Bracket { lo: s, hi: s, f_lo: 0.0, f_hi: 0.0, iterations: it });
            }
            if (fs < 0.0) == (f_lo < 0.0) {
                lo = s;
                f_lo = fs;
            } else {
                hi = s;
                f_hi = fs;
            }
            if hi - lo <= xtol {
                break;
            }
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if !fm.is_finite() {
            return Err(QlcError::LostBracket { lo, hi, m_lo: f_lo, m_hi: f_hi });
        }
        if fm == 0.0 {
            return Ok(Bracket { lo: mid, hi: mid, f_lo: 0.0, f_hi: 0.0, iterations: it });
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    Ok(Bracket { lo, hi, f_lo, f_hi, iterations: it })
}
