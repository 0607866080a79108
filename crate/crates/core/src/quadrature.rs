//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite
//! intervals.
//!
//! Global subdivision: the panel with the largest error estimate is bisected
//! until the summed error meets the tolerance. The panel decomposition depends
//! only on the integrand values, so repeated runs are bitwise identical.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
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

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping criterion: `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance { rel, abs: 0.0 }
    }

    fn met(&self, value: f64, error: f64) -> bool {
        error <= self.abs.max(self.rel * value.abs())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = rescale_error(
        (res_k - res_g) * half,
        res_abs * half.abs(),
        res_asc * half.abs(),
    );
    Panel {
        a,
        b,
        value: res_k * half,
        error: err,
        abs: res_abs * half.abs(),
    }
}

fn resum(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut v = NeumaierSum::new();
    let mut e = NeumaierSum::new();
    for p in heap.iter() {
        v.add(p.value);
        e.add(p.error);
    }
    (v.total(), e.total())
}

/// Below this ∫|f| the result is accepted as is.
pub const UNDERFLOW_SCALE: f64 = 1e-150;

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    max_panels: usize,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let first = gauss_kronrod(&f, a, b);
    if !first.value.is_finite() || !first.error.is_finite() {
        return Err(Error::Domain(format!(
            "integrand is not finite on [{a:e}, {b:e}]"
        )));
    }

    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut value = first.value;
    let mut error = first.error;
    let mut previous = value;
    let mut abs = first.abs;
    // An error at the rounding floor of ∫|f| cannot be reduced further, and
    // neither can one for an integral so small that the integrand is built
    // from underflowing exponentials.
    let done = |value: f64, error: f64, abs: f64| {
        tol.met(value, error) || error <= 100.0 * f64::EPSILON * abs || abs < UNDERFLOW_SCALE
    };

    while !done(value, error, abs) {
        if heap.len() >= max_panels.max(1) {
            return Err(Error::Quadrature {
                panels: heap.len(),
                previous,
                last: value,
                error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Panel cannot be split further in floating point.
            return Err(Error::Quadrature {
                panels: heap.len() + 1,
                previous,
                last: value,
                error,
            });
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        if !(left.value + right.value).is_finite() {
            return Err(Error::Domain(format!(
                "integrand is not finite on [{:e}, {:e}]",
                worst.a, worst.b
            )));
        }
        heap.push(left);
        heap.push(right);

        previous = value;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs += left.abs + right.abs - worst.abs;
        if done(value, error, abs) {
            // Confirm with a compensated re-sum before accepting.
            let (v, e) = resum(&heap);
            value = v;
            error = e;
        }
    }

    Ok(Estimate {
        value,
        error,
        panels: heap.len(),
    })
}

/// Integrates `f` over `[a, ∞)` through `x = a + scale·t/(1−t)`.
///
/// `scale` should be of the order of the width over which `f` decays.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    tol: Tolerance,
    max_panels: usize,
) -> Result<Estimate> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Invalid(format!(
            "mapping scale must be positive, got {scale}"
        )));
    }
    let mapped = |t: f64| {
        let one_minus = 1.0 - t;
        let x = a + scale * t / one_minus;
        if !x.is_finite() {
            return 0.0;
        }
        f(x) * scale / (one_minus * one_minus)
    };
    integrate(mapped, 0.0, 1.0, tol, max_panels)
}
