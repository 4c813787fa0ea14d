//! Complex-argument special functions: Γ, ζ, the completed zeta ξ and the
//! incomplete gamma functions with complex shape and real argument.
//!
//! Convention: `ξ(s) = s(s−1)π^{−s/2}Γ(s/2)ζ(s)`, i.e. without the classical
//! factor 1/2. With this normalisation the Mellin transform of `F_ρ` divided
//! by `ζ(s)` is `s(s−1)π^{−s/2}Γ(s/2)/(s−ρ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::ComplexSum;

/// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Even Bernoulli numbers B_2 .. B_30 as (numerator, denominator).
const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialFunConfig {
    pub series_tol: f64,
    /// Iteration cap for the continued fraction and the power series.
    pub cf_max_iters: usize,
    /// Number of Bernoulli corrections in the Euler–Maclaurin sum for ζ.
    pub em_terms: usize,
}

impl Default for SpecialFunConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-15,
            cf_max_iters: 500,
            em_terms: 12,
        }
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `log sin(πz)` on some branch; stable for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    let ipz = i * PI * z;
    if z.im > 0.0 {
        // sin(πz) = (i/2) e^{−iπz} (1 − e^{2iπz})
        Complex64::new(0.5f64.ln(), PI / 2.0) - ipz + ln_1p(-(ipz * 2.0).exp())
    } else {
        // sin(πz) = (−i/2) e^{iπz} (1 − e^{−2iπz})
        Complex64::new(0.5f64.ln(), -PI / 2.0) + ipz + ln_1p(-(-ipz * 2.0).exp())
    }
}

fn ln_1p(w: Complex64) -> Complex64 {
    if w.norm() < 1e-8 {
        w - w * w * 0.5
    } else {
        (w + 1.0).ln()
    }
}

/// A logarithm of Γ(z) (not necessarily the principal branch of log Γ;
/// `exp` of it is Γ(z)).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("{z}"),
        });
    }
    if z.re < 0.5 {
        let reflected = ln_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected);
    }
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln())
}

/// Γ(s) for complex `s`; error at the poles `s = 0, −1, −2, …`.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re > 0.0 && s.re == s.re.round() && s.re <= 20.0 {
        // exact factorials keep Γ(n) integral
        let n = s.re as u32;
        return Ok(Complex64::new((1..n).map(f64::from).product(), 0.0));
    }
    Ok(ln_gamma(s)?.exp())
}

/// `(s − 1)ζ(s)`, entire, via Euler–Maclaurin with cutoff `N = max(20, ⌈|Im s|⌉)`.
fn zeta_times_s_minus_1(s: Complex64, cfg: &SpecialFunConfig) -> Complex64 {
    let n_cut = 20usize.max(s.im.abs().ceil() as usize);
    let nf = n_cut as f64;
    let ln_n = nf.ln();

    let head: ComplexSum = (1..n_cut).map(|n| (-s * (n as f64).ln()).exp()).collect();
    let n_pow_neg_s = (-s * ln_n).exp();

    // Bernoulli corrections B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut corrections = ComplexSum::new();
    let mut rising = s;
    let mut n_pow = n_pow_neg_s / nf;
    let mut factorial = 2.0;
    let terms = cfg.em_terms.min(BERNOULLI_EVEN.len());
    for (k, &(num, den)) in BERNOULLI_EVEN.iter().enumerate().take(terms) {
        let k = k + 1;
        corrections.add(rising * n_pow * (num / den / factorial));
        let two_k = 2.0 * k as f64;
        rising *= (s + two_k - 1.0) * (s + two_k);
        n_pow /= nf * nf;
        factorial *= (two_k + 1.0) * (two_k + 2.0);
    }

    let regular = head.value() + n_pow_neg_s * 0.5 + corrections.value();
    (s - 1.0) * regular + n_pow_neg_s * nf
}

/// Riemann ζ(s) with the default configuration.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    zeta_with(s, &SpecialFunConfig::default())
}

pub fn zeta_with(s: Complex64, cfg: &SpecialFunConfig) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: format!("{s}"),
        });
    }
    if s.re < -1.0 {
        // functional equation ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
        let one_minus = Complex64::new(1.0, 0.0) - s;
        let z = zeta_with(one_minus, cfg)?;
        let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_gamma(one_minus)?;
        return Ok(log_factor.exp() * (s * (PI / 2.0)).sin() * z);
    }
    Ok(zeta_times_s_minus_1(s, cfg) / (s - 1.0))
}

/// Completed zeta `ξ(s) = s(s−1)π^{−s/2}Γ(s/2)ζ(s)`; entire, `ξ(0) = ξ(1) = 1`.
pub fn xi_completed(s: Complex64) -> Complex64 {
    xi_completed_with(s, &SpecialFunConfig::default())
}

pub fn xi_completed_with(s: Complex64, cfg: &SpecialFunConfig) -> Complex64 {
    if s.re < -1.0 {
        return xi_completed_with(Complex64::new(1.0, 0.0) - s, cfg);
    }
    // s·Γ(s/2) = 2Γ(s/2 + 1) removes the pole at 0; the one at 1 is folded
    // into (s−1)ζ(s). Re(s/2 + 1) ≥ 1/2 here, so ln_gamma never hits a pole.
    let half = s * 0.5;
    let log_scale = -half * PI.ln() + ln_gamma(half + 1.0).expect("Re(s/2+1) >= 1/2 has no poles");
    2.0 * zeta_times_s_minus_1(s, cfg) * log_scale.exp()
}

/// `Ξ(t) = ξ(1/2 + it)`, real for real `t`; the imaginary part is dropped.
pub fn xi_on_critical_line(t: f64) -> f64 {
    xi_completed(Complex64::new(0.5, t)).re
}

fn check_incomplete_args(a: Complex64, x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!(
            "incomplete gamma needs finite x >= 0, got {x}"
        )));
    }
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite shape {a}")));
    }
    Ok(())
}

/// `γ(a, x)` by the power series `x^a e^{−x} Σ x^k / (a(a+1)…(a+k))`.
fn lower_series(a: Complex64, x: f64, cfg: &SpecialFunConfig) -> Result<Complex64> {
    let mut term = a.inv();
    let mut acc = ComplexSum::new();
    acc.add(term);
    let mut converged = false;
    for k in 1..=cfg.cf_max_iters {
        term *= x / (a + k as f64);
        acc.add(term);
        if term.norm() <= cfg.series_tol * acc.value().norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "incomplete gamma series",
            iterations: cfg.cf_max_iters,
        });
    }
    Ok((a * x.ln() - x).exp() * acc.value())
}

/// `Γ(a, x)` by the modified Lentz continued fraction.
fn upper_continued_fraction(a: Complex64, x: f64, cfg: &SpecialFunConfig) -> Result<Complex64> {
    const TINY: f64 = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = x + one - a;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..=cfg.cf_max_iters {
        let i = i as f64;
        let an = -i * (Complex64::new(i, 0.0) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = Complex64::new(TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = Complex64::new(TINY, 0.0);
        }
        d = d.inv();
        let delta = d * c;
        h *= delta;
        if (delta - one).norm() <= cfg.series_tol {
            return Ok((a * x.ln() - x).exp() * h);
        }
    }
    Err(Error::NonConvergence {
        what: "incomplete gamma continued fraction",
        iterations: cfg.cf_max_iters,
    })
}

fn use_series(a: Complex64, x: f64) -> bool {
    x < a.norm() + 1.0
}

/// Upper incomplete gamma `Γ(a, x) = ∫_x^∞ t^{a−1}e^{−t} dt` for real `x ≥ 0`.
///
/// Below `x = |a| + 1` it is `Γ(a) − γ(a, x)` with the series for γ; above,
/// the continued fraction is used directly. `x^a` is `e^{a·ln x}` with the
/// real logarithm.
pub fn upper_incomplete_gamma(a: Complex64, x: f64) -> Result<Complex64> {
    upper_incomplete_gamma_with(a, x, &SpecialFunConfig::default())
}

pub fn upper_incomplete_gamma_with(
    a: Complex64,
    x: f64,
    cfg: &SpecialFunConfig,
) -> Result<Complex64> {
    check_incomplete_args(a, x)?;
    if x == 0.0 {
        return gamma(a);
    }
    if use_series(a, x) {
        if is_nonpositive_integer(a) {
            return Err(Error::Pole {
                function: "upper_incomplete_gamma",
                at: format!("a = {a}, x = {x}"),
            });
        }
        Ok(gamma(a)? - lower_series(a, x, cfg)?)
    } else {
        upper_continued_fraction(a, x, cfg)
    }
}

/// Lower incomplete gamma `γ(a, x) = ∫_0^x t^{a−1}e^{−t} dt`, `Re a > 0`.
pub fn lower_incomplete_gamma(a: Complex64, x: f64) -> Result<Complex64> {
    lower_incomplete_gamma_with(a, x, &SpecialFunConfig::default())
}

pub fn lower_incomplete_gamma_with(
    a: Complex64,
    x: f64,
    cfg: &SpecialFunConfig,
) -> Result<Complex64> {
    check_incomplete_args(a, x)?;
    if !(a.re > 0.0) {
        return Err(Error::InvalidInput(format!(
            "lower incomplete gamma needs Re a > 0, got {a}"
        )));
    }
    if x == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if use_series(a, x) {
        lower_series(a, x, cfg)
    } else {
        Ok(gamma(a)? - upper_continued_fraction(a, x, cfg)?)
    }
}
