//! Adaptive quadrature on finite, semi-infinite and Dirichlet-panelled ranges.
//!
//! The base rule is the 10/21-point Gauss–Kronrod pair. Intervals live in a
//! max-heap keyed on their error estimate and the worst one is bisected until
//! the global tolerance is met or every remaining interval has hit
//! `max_depth`. Complex integrands share one subdivision; the per-interval
//! error is the larger of the two component estimates. Interval
//! contributions are combined with compensated summation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{ComplexSum, NeumaierSum};

// Abscissae and weights of the 21-point Kronrod extension of the 10-point
// Gauss rule on [-1, 1] (QUADPACK qk21). Gauss nodes are XGK[1], XGK[3], ...
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_787_180,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Hard cap on integrand evaluations for a single call.
pub const MAX_EVALUATIONS: usize = 20_000_000;

/// Largest truncation offset tried by [`integrate_semi_infinite`].
pub const MAX_TRUNCATION_OFFSET: f64 = 1.0e6;

/// Tolerances and subdivision limits shared by every integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Truncation threshold for the tail of a semi-infinite integral.
    pub tail_cutoff: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 40,
            tail_cutoff: 1e-16,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.tail_cutoff > 0.0) {
            return Err(Error::InvalidInput(format!(
                "quadrature tolerances must be positive: {self:?}"
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidInput("max_depth must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// The value, or a [`Error::Quadrature`] when the tolerance was missed.
    pub fn into_value(self) -> Result<Complex64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                value: format!("{}", self.value),
                error_estimate: self.error_estimate,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
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

/// One Gauss–Kronrod 10/21 step: `(kronrod value, error estimate)`.
fn gk21<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_k = f_center * WGK[10];
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut abs_k = [f_center.re.abs() * WGK[10], f_center.im.abs() * WGK[10]];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];

    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        res_k += pair * WGK[j];
        if j % 2 == 1 {
            res_g += pair * WG[j / 2];
        }
        abs_k[0] += WGK[j] * (f1.re.abs() + f2.re.abs());
        abs_k[1] += WGK[j] * (f1.im.abs() + f2.im.abs());
        *slot = (f1, f2);
    }

    let mean = res_k * 0.5;
    let mut asc = [
        WGK[10] * (f_center.re - mean.re).abs(),
        WGK[10] * (f_center.im - mean.im).abs(),
    ];
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc[0] += WGK[j] * ((f1.re - mean.re).abs() + (f2.re - mean.re).abs());
        asc[1] += WGK[j] * ((f1.im - mean.im).abs() + (f2.im - mean.im).abs());
    }

    let h = half.abs();
    let diff = (res_k - res_g) * h;
    let err_re = rescale_error(diff.re, abs_k[0] * h, asc[0] * h);
    let err_im = rescale_error(diff.im, abs_k[1] * h, asc[1] * h);
    (res_k * half, err_re.max(err_im))
}

/// Global adaptive integration over consecutive panels `breaks[i]..breaks[i+1]`.
fn adaptive_panels<F>(f: &F, breaks: &[f64], spec: &QuadSpec) -> QuadResult
where
    F: Fn(f64) -> Complex64,
{
    if breaks.len() < 2 {
        return QuadResult::zero();
    }

    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut finished: Vec<Segment> = Vec::new();
    let mut evaluations = 0usize;
    let mut total_value = Complex64::new(0.0, 0.0);
    let mut total_error = 0.0;

    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (value, error) = gk21(f, a, b);
        evaluations += 21;
        total_value += value;
        total_error += error;
        heap.push(Segment {
            a,
            b,
            value,
            error,
            depth: 0,
        });
    }

    let mut converged = false;
    loop {
        if total_error <= spec.target(total_value) {
            converged = true;
            break;
        }
        if evaluations >= MAX_EVALUATIONS {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_depth || mid <= worst.a || mid >= worst.b {
            finished.push(worst);
            continue;
        }

        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        evaluations += 42;
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        for (a, b, value, error) in [(worst.a, mid, v1, e1), (mid, worst.b, v2, e2)] {
            heap.push(Segment {
                a,
                b,
                value,
                error,
                depth: worst.depth + 1,
            });
        }
    }

    let segments = || heap.iter().chain(finished.iter());
    let value = segments().map(|s| s.value).collect::<ComplexSum>().value();
    let error_estimate = segments().map(|s| s.error).collect::<NeumaierSum>().value();
    let finite = value.re.is_finite() && value.im.is_finite() && error_estimate.is_finite();
    QuadResult {
        value,
        error_estimate,
        evaluations,
        converged: converged && finite && error_estimate <= spec.target(value),
    }
}

fn oriented<G>(a: f64, b: f64, integrate: G) -> QuadResult
where
    G: FnOnce(f64, f64) -> QuadResult,
{
    if a == b {
        QuadResult::zero()
    } else if a < b {
        integrate(a, b)
    } else {
        let mut r = integrate(b, a);
        r.value = -r.value;
        r
    }
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Reversed limits flip the sign. A result with `converged == false` is
/// returned, not an error, when `max_depth` stops refinement first.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, spec: &QuadSpec) -> QuadResult
where
    F: Fn(f64) -> Complex64,
{
    oriented(a, b, |a, b| adaptive_panels(&f, &[a, b], spec))
}

/// Real-valued convenience wrapper over [`integrate_adaptive`].
pub fn integrate_adaptive_real<F>(f: F, a: f64, b: f64, spec: &QuadSpec) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    integrate_adaptive(|t| Complex64::new(f(t), 0.0), a, b, spec)
}

/// Upper bound for `∫_t^∞ bound` assuming `bound` is non-increasing on
/// `[t, ∞)`. Returns `None` when the sampled values increase, which means
/// `t` lies before the majorant's peak.
fn tail_estimate<B>(bound: &B, t: f64) -> Option<f64>
where
    B: Fn(f64) -> f64,
{
    let mut width = t.abs().max(1.0);
    let mut left = t;
    let mut prev = bound(left);
    if !prev.is_finite() || prev < 0.0 {
        return None;
    }
    let mut total = 0.0;
    for _ in 0..64 {
        let term = width * prev;
        total += term;
        if term <= 1e-3 * total || term < 1e-300 {
            return Some(total);
        }
        left += width;
        width *= 2.0;
        let next = bound(left);
        if !next.is_finite() || next > prev {
            return None;
        }
        prev = next;
    }
    None
}

/// Integrates `f` over `[a, ∞)` given a non-increasing majorant
/// `bound(t) ≥ |f(t)|`.
///
/// The range is cut at the first `T` on a geometric ladder where the
/// majorant's tail is below `spec.tail_cutoff`, and `[a, T]` is integrated
/// adaptively on unit-width starting panels. The tail estimate is added to
/// `error_estimate`.
pub fn integrate_semi_infinite<F, B>(f: F, a: f64, bound: B, spec: &QuadSpec) -> QuadResult
where
    F: Fn(f64) -> Complex64,
    B: Fn(f64) -> f64,
{
    let mut offset = 0.25;
    let cut = loop {
        if offset > MAX_TRUNCATION_OFFSET {
            break None;
        }
        let t = a + offset;
        if let Some(tail) = tail_estimate(&bound, t) {
            if tail < spec.tail_cutoff {
                break Some((t, tail));
            }
        }
        offset *= 1.25;
    };
    let Some((t, tail)) = cut else {
        return QuadResult {
            value: Complex64::new(f64::NAN, f64::NAN),
            error_estimate: f64::INFINITY,
            evaluations: 0,
            converged: false,
        };
    };

    let panels = ((t - a).ceil() as usize).clamp(1, 4096);
    let breaks: Vec<f64> = (0..=panels)
        .map(|k| {
            if k == panels {
                t
            } else {
                a + (t - a) * k as f64 / panels as f64
            }
        })
        .collect();
    let mut result = adaptive_panels(&f, &breaks, spec);
    result.error_estimate += tail;
    result
}

/// Breakpoints of `[a, b]` at the zeros `k / (2l + 1)` of `sin((2l+1)πt)`.
pub fn dirichlet_breakpoints(a: f64, b: f64, l: u32) -> Vec<f64> {
    let period = 2.0 * f64::from(l) + 1.0;
    let first = (a * period).floor() as i64 + 1;
    let mut breaks = vec![a];
    let mut k = first;
    loop {
        let t = k as f64 / period;
        if t >= b {
            break;
        }
        if t > a {
            breaks.push(t);
        }
        k += 1;
    }
    breaks.push(b);
    breaks
}

/// Integrates `f` over `[a, b]` on panels bounded by consecutive zeros of
/// `sin((2l+1)πt)`. The caller folds the Dirichlet-type factor into `f`.
pub fn integrate_oscillatory_dirichlet<F>(
    f: F,
    a: f64,
    b: f64,
    l: u32,
    spec: &QuadSpec,
) -> QuadResult
where
    F: Fn(f64) -> Complex64,
{
    oriented(a, b, |a, b| {
        let breaks = dirichlet_breakpoints(a, b, l);
        adaptive_panels(&f, &breaks, spec)
    })
}

/// `sin(πx)` with exact reduction of the argument modulo 2.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    // r in [-1, 1]; fold onto [-1/2, 1/2] where sin is well conditioned
    if r > 0.5 {
        (std::f64::consts::PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(std::f64::consts::PI * (1.0 + r)).sin()
    } else {
        (std::f64::consts::PI * r).sin()
    }
}

/// Dirichlet kernel `sin((2l+1)πt) / sin(πt)`, with the limit `2l+1` at
/// integer `t`.
pub fn dirichlet_kernel(t: f64, l: u32) -> f64 {
    let n = 2.0 * f64::from(l) + 1.0;
    let den = sin_pi(t);
    if den.abs() < 1e-12 {
        // near an integer m the ratio is (−1)^{2lm}·(2l+1) = 2l+1
        let d = t - t.round();
        let y = std::f64::consts::PI * d;
        // second-order expansion of sin(ny)/sin(y)
        return n * (1.0 - (n * n - 1.0) * y * y / 6.0);
    }
    sin_pi(n * t) / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn kronrod_rule_is_exact_on_polynomials() {
        // K21 integrates degree 31 exactly, G10 degree 19.
        for deg in 0..=31 {
            let (k, _) = gk21(&|t: f64| c(t.powi(deg)), 0.0, 1.0);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!(
                (k.re - exact).abs() < 1e-14,
                "deg {deg}: {} vs {exact}",
                k.re
            );
        }
        for deg in 0..=19 {
            let g: f64 = (0..5)
                .map(|j| {
                    let x = XGK[2 * j + 1];
                    WG[j] * (0.5f64 * (1.0 - x)).powi(deg) * 0.5
                        + WG[j] * (0.5f64 * (1.0 + x)).powi(deg) * 0.5
                })
                .sum();
            assert!(
                (g - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14,
                "gauss deg {deg}"
            );
        }
    }

    #[test]
    fn constant_integrand() {
        let r = integrate_adaptive(|_| c(1.0), 0.0, 1.0, &QuadSpec::default());
        assert!(r.converged);
        assert!((r.value.re - 1.0).abs() <= r.error_estimate.max(1e-15));
        assert!((r.value.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_ratio_half_period() {
        let f = |t: f64| c((3.0 * PI * t).sin() / (PI * t).sin());
        let spec = QuadSpec::default();
        let plain = integrate_adaptive(f, 0.0, 0.5, &spec);
        assert!(plain.converged);
        assert!((plain.value.re - 0.5).abs() < 1e-13);
        assert!((plain.value.re - 0.5).abs() <= plain.error_estimate);

        let panels = integrate_oscillatory_dirichlet(f, 0.0, 0.5, 1, &spec);
        assert!(panels.converged);
        assert!((panels.value.re - 0.5).abs() < 1e-13);
    }

    #[test]
    fn gaussian_on_finite_range() {
        let r = integrate_adaptive_real(|u| (-PI * u * u).exp(), 0.0, 6.0, &QuadSpec::default());
        assert!(r.converged);
        assert!((r.value.re - 0.5).abs() < 1e-12);
        assert!((r.value.re - 0.5).abs() <= r.error_estimate);
    }

    #[test]
    fn semi_infinite_gaussian_and_gamma2() {
        let spec = QuadSpec::default();
        let g = integrate_semi_infinite(
            |u| c((-PI * u * u).exp()),
            0.0,
            |u| (-PI * u * u).exp(),
            &spec,
        );
        assert!(g.converged);
        assert!((g.value.re - 0.5).abs() < 1e-12);

        let r = integrate_semi_infinite(
            |u| c(u * (-u).exp()),
            0.0,
            |u| (u + 1.0) * (-u).exp(),
            &spec,
        );
        assert!(r.converged, "{r:?}");
        assert!((r.value.re - 1.0).abs() < 1e-12);
        assert!((r.value.re - 1.0).abs() <= r.error_estimate);
    }

    #[test]
    fn semi_infinite_fails_without_decay() {
        let r = integrate_semi_infinite(|_| c(1.0), 0.0, |_| 1.0, &QuadSpec::default());
        assert!(!r.converged);
        assert!(r.into_value().is_err());
    }

    #[test]
    fn oscillatory_matches_plain_on_sinc_tail() {
        let spec = QuadSpec::default();
        let f = |t: f64| c((5.0 * PI * t).sin() / (PI * t));
        let panels = integrate_oscillatory_dirichlet(f, 0.5, 10.0, 2, &spec);
        let plain = integrate_adaptive(f, 0.5, 10.0, &spec);
        assert!(panels.converged && plain.converged);
        assert!((panels.value - plain.value).norm() < 1e-10);
    }

    #[test]
    fn zero_integrand_on_panels() {
        let r = integrate_oscillatory_dirichlet(|_| c(0.0), 0.0, 3.0, 1, &QuadSpec::default());
        assert!(r.converged);
        assert_eq!(r.value, c(0.0));
    }

    #[test]
    fn breakpoints_hit_kernel_zeros() {
        let b = dirichlet_breakpoints(0.0, 0.5, 2);
        assert_eq!(b.len(), 4);
        assert!((b[1] - 0.2).abs() < 1e-15 && (b[2] - 0.4).abs() < 1e-15);
        let b = dirichlet_breakpoints(0.2, 0.6, 2);
        assert_eq!(b, vec![0.2, 0.4, 0.6]);
    }

    #[test]
    fn complex_integrand_shares_subdivision() {
        // ∫_0^1 e^{iωt} dt = (e^{iω} − 1)/(iω)
        let w = 40.0;
        let r = integrate_adaptive(
            |t| Complex64::new(0.0, w * t).exp(),
            0.0,
            1.0,
            &QuadSpec::default(),
        );
        let exact = (Complex64::new(0.0, w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!(r.converged);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn max_depth_exhaustion_reports_non_convergence() {
        let spec = QuadSpec {
            max_depth: 2,
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            ..QuadSpec::default()
        };
        let r = integrate_adaptive_real(|t| t.abs().sqrt().recip(), -1.0, 1.0, &spec);
        assert!(!r.converged);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate_adaptive_real(|t| t, 1.0, 0.0, &QuadSpec::default());
        assert!((r.value.re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_kernel_limits() {
        assert!((dirichlet_kernel(0.0, 3) - 7.0).abs() < 1e-15);
        assert!((dirichlet_kernel(1.0, 3) - 7.0).abs() < 1e-12);
        assert!((dirichlet_kernel(1e-13, 3) - 7.0).abs() < 1e-10);
        let t = 0.123;
        let direct = (7.0 * PI * t).sin() / (PI * t).sin();
        assert!((dirichlet_kernel(t, 3) - direct).abs() < 1e-13);
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -5..=5 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(1001.25) + (PI * 0.25).sin()).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadSpec::default().validate().is_ok());
        assert!(QuadSpec {
            abs_tol: 0.0,
            ..QuadSpec::default()
        }
        .validate()
        .is_err());
        assert!(QuadSpec {
            max_depth: 0,
            ..QuadSpec::default()
        }
        .validate()
        .is_err());
    }
}
