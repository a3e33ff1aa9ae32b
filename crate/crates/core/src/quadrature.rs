//! Globally adaptive 7/15-point Gauss–Kronrod quadrature for vector-valued
//! integrands.
//!
//! All components share one subdivision. The interval refined next is the
//! one whose error, measured against each component's tolerance, is worst.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [-1, 1], nonnegative half, ascending.
const XGK: [f64; 8] = [
    0.0,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.991_455_371_120_812_639_206_854_697_526_329,
];

const WGK: [f64; 8] = [
    0.209_482_141_084_727_828_012_999_174_891_714,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.022_935_322_010_529_224_963_732_008_058_970,
];

/// Gauss weights for XGK[0], XGK[2], XGK[4], XGK[6].
const WG: [f64; 4] = [
    0.417_959_183_673_469_387_755_102_040_816_327,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.129_484_966_168_869_693_270_611_432_679_082,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Relative tolerance per component, measured against `∫|f_k|`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-13, abs_tol: 1e-300, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    /// `∫|f_k|`, the scale used by the relative tolerance.
    pub l1: [f64; N],
    pub intervals: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl<const N: usize> Estimate<N> {
    /// Largest `error_k / ∫|f_k|`.
    pub fn worst_relative_error(&self) -> f64 {
        (0..N)
            .map(|k| if self.l1[k] > 0.0 { self.error[k] / self.l1[k] } else { 0.0 })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    l1: [f64; N],
}

/// One application of the 15-point Kronrod rule and its embedded 7-point
/// Gauss rule. Returns `(kronrod, gauss)`.
pub fn gk15_rule<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let f0 = f(c);
    let mut k = WGK[0] * f0;
    let mut g = WG[0] * f0;
    for j in 1..8 {
        let s = f(c + h * XGK[j]) + f(c - h * XGK[j]);
        k += WGK[j] * s;
        if j % 2 == 0 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, g * h)
}

fn apply<const N: usize, F: FnMut(f64) -> [f64; N]>(f: &mut F, a: f64, b: f64) -> Segment<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [[0.0; N]; 15];
    fv[0] = f(c);
    for j in 1..8 {
        fv[2 * j - 1] = f(c + h * XGK[j]);
        fv[2 * j] = f(c - h * XGK[j]);
    }
    let weight = |idx: usize| -> (f64, f64) {
        if idx == 0 {
            (WGK[0], WG[0])
        } else {
            let j = (idx + 1) / 2;
            (WGK[j], if j % 2 == 0 { WG[j / 2] } else { 0.0 })
        }
    };
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut l1 = [0.0; N];
    for i in 0..N {
        let (mut rk, mut rg, mut rabs) = (0.0, 0.0, 0.0);
        for (idx, v) in fv.iter().enumerate() {
            let (wk, wg) = weight(idx);
            rk += wk * v[i];
            rg += wg * v[i];
            rabs += wk * v[i].abs();
        }
        let mean = 0.5 * rk;
        let mut rasc = 0.0;
        for (idx, v) in fv.iter().enumerate() {
            rasc += weight(idx).0 * (v[i] - mean).abs();
        }
        let hh = h.abs();
        let mut err = ((rk - rg) * h).abs();
        let rasc = rasc * hh;
        if rasc != 0.0 && err != 0.0 {
            err = rasc * (200.0 * err / rasc).powf(1.5).min(1.0);
        }
        let rabs = rabs * hh;
        if rabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * rabs);
        }
        value[i] = rk * h;
        error[i] = err;
        l1[i] = rabs;
    }
    Segment { a, b, value, error, l1 }
}

struct Ranked<const N: usize> {
    score: f64,
    seg: Segment<N>,
}

impl<const N: usize> PartialEq for Ranked<N> {
    fn eq(&self, o: &Self) -> bool {
        self.score == o.score
    }
}
impl<const N: usize> Eq for Ranked<N> {}
impl<const N: usize> PartialOrd for Ranked<N> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const N: usize> Ord for Ranked<N> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.score.total_cmp(&o.score)
    }
}

/// Integrates every component of `f` over `[a, b]`.
pub fn integrate_vec<const N: usize, F: FnMut(f64) -> [f64; N]>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Estimate<N> {
    let first = apply(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap: BinaryHeap<Ranked<N>> = BinaryHeap::new();
    let mut total_v = first.value;
    let mut total_e = first.error;
    let mut total_l1 = first.l1;
    let tol_of = |l1: &[f64; N]| -> [f64; N] {
        let mut t = [0.0; N];
        for k in 0..N {
            t[k] = (opts.rel_tol * l1[k]).max(opts.abs_tol);
        }
        t
    };
    let score = |s: &Segment<N>, tol: &[f64; N]| -> f64 {
        (0..N).map(|k| s.error[k] / tol[k]).fold(0.0, f64::max)
    };
    let mut tol = tol_of(&total_l1);
    heap.push(Ranked { score: score(&first, &tol), seg: first });
    let min_width = (b - a).abs() * 1e-15;
    let mut converged = (0..N).all(|k| total_e[k] <= tol[k]);
    while !converged && heap.len() < opts.max_intervals {
        let worst = heap.pop().expect("heap is never empty");
        let s = worst.seg;
        let m = 0.5 * (s.a + s.b);
        if (s.b - s.a).abs() < min_width {
            heap.push(Ranked { score: f64::NEG_INFINITY, seg: s });
            break;
        }
        let left = apply(&mut f, s.a, m);
        let right = apply(&mut f, m, s.b);
        evaluations += 30;
        for k in 0..N {
            total_v[k] += left.value[k] + right.value[k] - s.value[k];
            total_e[k] += left.error[k] + right.error[k] - s.error[k];
            total_l1[k] += left.l1[k] + right.l1[k] - s.l1[k];
        }
        tol = tol_of(&total_l1);
        heap.push(Ranked { score: score(&left, &tol), seg: left });
        heap.push(Ranked { score: score(&right, &tol), seg: right });
        if heap.len() % 64 == 0 {
            // Resum to keep the running totals free of drift.
            let mut v = [0.0; N];
            let mut e = [0.0; N];
            let mut l = [0.0; N];
            for r in heap.iter() {
                for k in 0..N {
                    v[k] += r.seg.value[k];
                    e[k] += r.seg.error[k];
                    l[k] += r.seg.l1[k];
                }
            }
            total_v = v;
            total_e = e;
            total_l1 = l;
            tol = tol_of(&total_l1);
        }
        converged = (0..N).all(|k| total_e[k] <= tol[k]);
    }
    // Final totals by direct summation, smallest contributions first.
    let mut segs: Vec<Segment<N>> = heap.into_iter().map(|r| r.seg).collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut l1 = [0.0; N];
    for k in 0..N {
        let mut parts: Vec<f64> = segs.iter().map(|s| s.value[k]).collect();
        parts.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
        value[k] = parts.iter().sum();
        error[k] = segs.iter().map(|s| s.error[k]).sum();
        l1[k] = segs.iter().map(|s| s.l1[k]).sum();
    }
    let tol = tol_of(&l1);
    let converged = (0..N).all(|k| error[k] <= tol[k]);
    Estimate { value, error, l1, intervals: segs.len(), evaluations, converged }
}

/// Scalar convenience wrapper.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Estimate<1> {
    integrate_vec(|x| [f(x)], a, b, opts)
}

/// Composite midpoint rule with `n` panels.
pub fn midpoint<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..n {
        // Kahan summation keeps the 10^6-panel sum at rounding level.
        let y = f(a + (i as f64 + 0.5) * h) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_integral(deg: i32, a: f64, b: f64) -> f64 {
        (b.powi(deg + 1) - a.powi(deg + 1)) / (deg as f64 + 1.0)
    }

    #[test]
    fn kronrod_exact_to_degree_22_gauss_to_13() {
        for deg in 0..=22 {
            let (k, g) = gk15_rule(|x| x.powi(deg), -0.3, 1.1);
            let exact = poly_integral(deg, -0.3, 1.1);
            assert!((k - exact).abs() <= 1e-14 * exact.abs().max(1.0), "K deg {deg}");
            if deg <= 13 {
                assert!((g - exact).abs() <= 1e-14 * exact.abs().max(1.0), "G deg {deg}");
            }
        }
        let (_, g) = gk15_rule(|x| x.powi(14), -1.0, 1.0);
        assert!((g - 2.0 / 15.0).abs() > 1e-6);
    }

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[0] + 2.0 * WGK[1..].iter().sum::<f64>();
        let g: f64 = WG[0] + 2.0 * WG[1..].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let est = integrate(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, &QuadOptions::default());
        assert!((est.value[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn adaptive_vector_components_share_grid() {
        let est = integrate_vec(
            |x| [x.exp(), (3.0 * x).sin(), 1.0 / (1.0 + 25.0 * x * x)],
            -1.0,
            1.0,
            &QuadOptions::default(),
        );
        assert!(est.converged);
        assert!((est.value[0] - (1f64.exp() - (-1f64).exp())).abs() < 1e-13);
        assert!(est.value[1].abs() < 1e-15);
        assert!((est.value[2] - 2.0 * 5f64.atan() / 5.0).abs() < 1e-13);
    }

    #[test]
    fn midpoint_converges_quadratically() {
        let e1 = (midpoint(f64::exp, 0.0, 1.0, 100) - (1f64.exp() - 1.0)).abs();
        let e2 = (midpoint(f64::exp, 0.0, 1.0, 200) - (1f64.exp() - 1.0)).abs();
        assert!((e1 / e2 - 4.0).abs() < 0.01);
    }
}
