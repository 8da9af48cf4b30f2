//! Globally adaptive 7/15-point Gauss-Kronrod quadrature for vector-valued
//! integrands.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae on [0, 1]; odd indices are the Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    pub abs_error: [f64; N],
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_subdivisions: 200,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: [f64; N],
    priority: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Kronrod panel with its 7-point Gauss error estimate.
pub fn gauss_kronrod_15<const N: usize, F>(f: &F, lo: f64, hi: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let mut res_abs = [0.0; N];
    let mut fvals = [[0.0; N]; 15];
    fvals[14] = fc;
    for i in 0..N {
        kron[i] = fc[i] * WGK[7];
        gauss[i] = fc[i] * WG[3];
        res_abs[i] = (fc[i] * WGK[7]).abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fvals[2 * j] = f1;
        fvals[2 * j + 1] = f2;
        for i in 0..N {
            kron[i] += WGK[j] * (f1[i] + f2[i]);
            res_abs[i] += WGK[j] * (f1[i].abs() + f2[i].abs());
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * (f1[i] + f2[i]);
            }
        }
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for i in 0..N {
        let mean = kron[i] * 0.5;
        let mut res_asc = WGK[7] * (fc[i] - mean).abs();
        for j in 0..7 {
            res_asc +=
                WGK[j] * ((fvals[2 * j][i] - mean).abs() + (fvals[2 * j + 1][i] - mean).abs());
        }
        let h = half.abs();
        value[i] = kron[i] * half;
        error[i] = rescale_error((kron[i] - gauss[i]) * half, res_abs[i] * h, res_asc * h);
    }
    (value, error)
}

/// Integrate `f` over the panels delimited by `breakpoints` (sorted,
/// at least two entries), bisecting the worst panel until every component
/// meets `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<const N: usize, F>(
    f: F,
    breakpoints: &[f64],
    options: &QuadOptions,
) -> QuadResult<N>
where
    F: Fn(f64) -> [f64; N],
{
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() + 2 * options.max_subdivisions);
    let mut total = [0.0; N];
    let mut total_err = [0.0; N];
    let mut evaluations = 0;

    let priority = |err: &[f64; N]| err.iter().fold(0.0f64, |m, e| m.max(*e));

    for w in breakpoints.windows(2) {
        let (value, error) = gauss_kronrod_15(&f, w[0], w[1]);
        evaluations += 15;
        for i in 0..N {
            total[i] += value[i];
            total_err[i] += error[i];
        }
        heap.push(Panel {
            lo: w[0],
            hi: w[1],
            value,
            error,
            priority: 0.0,
        });
    }

    let done = |total: &[f64; N], err: &[f64; N]| {
        (0..N).all(|i| err[i] <= options.abs_tol.max(options.rel_tol * total[i].abs()))
    };
    // Priorities are relative to the running total so that components of
    // very different magnitude are balanced.
    let weigh = |total: &[f64; N], err: &[f64; N]| {
        let mut scaled = [0.0; N];
        for i in 0..N {
            let scale = options
                .abs_tol
                .max(options.rel_tol * total[i].abs())
                .max(f64::MIN_POSITIVE);
            scaled[i] = err[i] / scale;
        }
        priority(&scaled)
    };
    heap = heap
        .into_iter()
        .map(|mut p| {
            p.priority = weigh(&total, &p.error);
            p
        })
        .collect();

    let mut subdivisions = 0;
    while !done(&total, &total_err) && subdivisions < options.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            heap.push(worst);
            break;
        }
        let (lv, le) = gauss_kronrod_15(&f, worst.lo, mid);
        let (rv, re) = gauss_kronrod_15(&f, mid, worst.hi);
        evaluations += 30;
        for i in 0..N {
            total[i] += lv[i] + rv[i] - worst.value[i];
            total_err[i] += le[i] + re[i] - worst.error[i];
        }
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            value: lv,
            error: le,
            priority: weigh(&total, &le),
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            value: rv,
            error: re,
            priority: weigh(&total, &re),
        });
        subdivisions += 1;
    }

    // Re-sum from the panels to shed accumulated update round-off.
    let mut value = [0.0; N];
    let mut abs_error = [0.0; N];
    let mut panels: Vec<_> = heap.into_vec();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    for p in &panels {
        for i in 0..N {
            value[i] += p.value[i];
            abs_error[i] += p.error[i];
        }
    }
    QuadResult {
        value,
        abs_error,
        evaluations,
        converged: done(&value, &abs_error),
    }
}

/// Scalar convenience wrapper.
pub fn integrate_scalar<F>(f: F, lo: f64, hi: f64, options: &QuadOptions) -> QuadResult<1>
where
    F: Fn(f64) -> f64,
{
    integrate(|x| [f(x)], &[lo, hi], options)
}
