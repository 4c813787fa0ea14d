//! The kernel `η(x) = 8πx²(πx² − 3/2)e^{−πx²}` and the transforms built on it.
//!
//! `η` is even, self-Fourier under `𝔉f(y) = ∫ f(x)e^{2πixy}dx`, and has
//! `η(0) = 𝔉η(0) = 0`. Its Mellin transform is
//! `η̂(s) = s(s−1)π^{−s/2}Γ(s/2) = 2(s−1)π^{−s/2}Γ(s/2+1)`; head and tail
//! pieces reduce to incomplete gamma functions of argument `πA²`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, QuadSpec};
use crate::special::{ln_gamma, lower_incomplete_gamma, upper_incomplete_gamma};
use crate::sum::NeumaierSum;

/// Location of the maximum of the majorant [`eta_majorant`],
/// `t = √(3/(2π))` (also the positive root of `η`).
pub const ETA_MAJORANT_PEAK: f64 = 0.690_988_298_942_670_9;

/// Leading coefficient of the majorant, `8π²`.
pub const ETA_MAJORANT_QUARTIC: f64 = 8.0 * PI * PI;

/// Quadratic coefficient of the majorant, `12π`.
pub const ETA_MAJORANT_QUADRATIC: f64 = 12.0 * PI;

/// Hard cap on the number of dilation terms in [`z_eta`].
pub const Z_SUM_MAX_TERMS: usize = 50_000;

/// Absolute truncation tolerance used when `Zη` is evaluated internally.
pub const Z_SUM_DEFAULT_TOL: f64 = 1e-17;

/// A kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaEval {
    pub point: f64,
    pub value: f64,
}

impl EtaEval {
    pub fn at(point: f64) -> Self {
        Self {
            point,
            value: eta(point),
        }
    }
}

/// `η(t)`, extended to negative `t` by evenness.
pub fn eta(t: f64) -> f64 {
    let u = PI * t * t;
    8.0 * u * (u - 1.5) * (-u).exp()
}

/// `(8π²t⁴ + 12πt²)e^{−πt²} ≥ |η(t)|` for every real `t`.
pub fn eta_majorant(t: f64) -> f64 {
    let t2 = t * t;
    (ETA_MAJORANT_QUARTIC * t2 * t2 + ETA_MAJORANT_QUADRATIC * t2) * (-PI * t2).exp()
}

/// Non-increasing envelope of [`eta_majorant`] on `t ≥ 0`.
pub fn eta_majorant_decreasing(t: f64) -> f64 {
    eta_majorant(t.abs().max(ETA_MAJORANT_PEAK))
}

/// Upper bound on `∫_y^∞ v^k e^{−πv²} dv`, from one integration by parts.
/// Infinite when the bound does not apply (`2πy² ≤ k − 1`).
pub fn gaussian_moment_tail(k: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return f64::INFINITY;
    }
    let lead = y.powf(k - 1.0) * (-PI * y * y).exp() / (2.0 * PI);
    if k <= 1.0 {
        return lead;
    }
    let shrink = 1.0 - (k - 1.0) / (2.0 * PI * y * y);
    if shrink <= 0.0 {
        f64::INFINITY
    } else {
        lead / shrink
    }
}

/// Upper bound on `∫_y^∞ |η(v)| v^{σ−1} dv`.
pub fn eta_weighted_tail_bound(y: f64, sigma: f64) -> f64 {
    ETA_MAJORANT_QUARTIC * gaussian_moment_tail(sigma + 3.0, y)
        + ETA_MAJORANT_QUADRATIC * gaussian_moment_tail(sigma + 1.0, y)
}

/// Upper bound on `Σ_{n≥1} |η(n y)|` for `y > 0`: the first term's
/// envelope plus an integral comparison for the rest.
pub fn z_sum_bound(y: f64) -> f64 {
    if y < ETA_MAJORANT_PEAK {
        return f64::INFINITY;
    }
    eta_majorant(y) + eta_weighted_tail_bound(y, 1.0) / y
}

/// `∫_0^A η(t) dt = −4πA³e^{−πA²}`.
pub fn eta_antiderivative(a: f64) -> f64 {
    -4.0 * PI * a * a * a * (-PI * a * a).exp()
}

/// Mellin transform `η̂(s) = ∫_0^∞ η(v)v^{s−1}dv = s(s−1)π^{−s/2}Γ(s/2)`.
///
/// Evaluated as `2(s−1)·exp(−(s/2)ln π + ln Γ(s/2+1))`, which is entire in
/// the half plane `Re s > −2` and avoids underflow of the factors for large
/// `|Im s|`. Note `η̂(0) = −2` and `η̂(1) = 0`.
pub fn mellin_eta(s: Complex64) -> Complex64 {
    let half = s * 0.5;
    match ln_gamma(half + 1.0) {
        Ok(lg) => 2.0 * (s - 1.0) * (lg - half * PI.ln()).exp(),
        // Γ(s/2 + 1) has poles at s = −2, −4, …; η̂ has the same poles.
        Err(_) => Complex64::new(f64::INFINITY, 0.0),
    }
}

/// `x^a e^{−x}` for complex `a` and real `x > 0`.
fn power_exp(a: Complex64, x: f64) -> Complex64 {
    (a * x.ln() - x).exp()
}

/// Tail piece `∫_A^∞ η(v)v^{s−1}dv`.
///
/// With `a = s/2 + 1` and `X = πA²` this is
/// `π^{−s/2}[4Γ(a+1, X) − 6Γ(a, X)] = π^{−s/2}[2(s−1)Γ(a, X) + 4X^a e^{−X}]`;
/// the second form needs a single incomplete gamma call.
pub fn eta_tail_mellin(a_cut: f64, s: Complex64) -> Result<Complex64> {
    if !(a_cut >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tail cut must be >= 0, got {a_cut}"
        )));
    }
    if a_cut == 0.0 {
        return Ok(mellin_eta(s));
    }
    let x = PI * a_cut * a_cut;
    let shape = s * 0.5 + 1.0;
    let pi_pow = (-(s * 0.5) * PI.ln()).exp();
    let upper = upper_incomplete_gamma(shape, x)?;
    Ok(pi_pow * (2.0 * (s - 1.0) * upper + 4.0 * power_exp(shape, x)))
}

/// Head piece `∫_0^A η(w)w^{s−1}dw = π^{−s/2}[2(s−1)γ(a, X) − 4X^a e^{−X}]`,
/// `a = s/2 + 1`, `X = πA²`. Needs `Re s > −2`.
pub fn eta_head_mellin(a_cut: f64, s: Complex64) -> Result<Complex64> {
    if !(a_cut >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "head cut must be >= 0, got {a_cut}"
        )));
    }
    if !(s.re > -2.0) {
        return Err(Error::InvalidInput(format!(
            "head integral diverges at 0 for Re s <= -2 (s = {s})"
        )));
    }
    if a_cut == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let x = PI * a_cut * a_cut;
    let shape = s * 0.5 + 1.0;
    let pi_pow = (-(s * 0.5) * PI.ln()).exp();
    let lower = lower_incomplete_gamma(shape, x)?;
    Ok(pi_pow * (2.0 * (s - 1.0) * lower - 4.0 * power_exp(shape, x)))
}

/// `𝔉η(y) = 2∫_0^∞ η(t)cos(2πty)dt` by quadrature.
pub fn fourier_eta_numeric(y: f64, spec: &QuadSpec) -> Result<f64> {
    let r = integrate_semi_infinite(
        |t| Complex64::new(eta(t) * (2.0 * PI * t * y).cos(), 0.0),
        0.0,
        eta_majorant_decreasing,
        spec,
    );
    Ok(2.0 * r.into_value()?.re)
}

/// Dilation sum `Zη(x) = Σ_{n≥1} η(nx)`, truncated once the bound on the
/// remaining terms drops below `tol`.
pub fn z_eta(x: f64, tol: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("z_eta needs x > 0, got {x}")));
    }
    let mut acc = NeumaierSum::new();
    let mut n = 1usize;
    loop {
        acc.add(eta(n as f64 * x));
        let next = (n + 1) as f64 * x;
        if next >= ETA_MAJORANT_PEAK && z_sum_bound(next) < tol {
            return Ok(acc.value());
        }
        n += 1;
        if n > Z_SUM_MAX_TERMS {
            return Err(Error::Range(format!(
                "z_eta({x}) needs more than {Z_SUM_MAX_TERMS} terms"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_adaptive, integrate_adaptive_real};

    const RHO1: Complex64 = Complex64::new(0.5, 14.134_725_141_734_694);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mellin_by_quadrature(s: Complex64) -> Complex64 {
        let spec = QuadSpec::default().with_abs_tol(1e-14);
        integrate_semi_infinite(
            |v| eta(v) * ((s - 1.0) * v.ln()).exp(),
            0.0,
            |v| eta_majorant_decreasing(v) * v.max(1.0).powf((s.re - 1.0).max(0.0)),
            &spec,
        )
        .into_value()
        .unwrap()
    }

    #[test]
    fn eta_values() {
        assert_eq!(eta(0.0), 0.0);
        assert!(eta(ETA_MAJORANT_PEAK).abs() < 1e-15);
        // 8π(π − 3/2)e^{−π}, extended-precision reference
        assert!((eta(1.0) - 1.782_907_885_271_979_0).abs() < 1e-14);
        assert_eq!(eta(-1.3), eta(1.3));
    }

    #[test]
    fn majorant_dominates_eta() {
        for k in 0..2000 {
            let t = k as f64 * 0.005;
            assert!(eta(t).abs() <= eta_majorant(t) * (1.0 + 1e-15));
            assert!(eta_majorant(t) <= eta_majorant_decreasing(t) * (1.0 + 1e-15));
        }
        let peak = (3.0 / (2.0 * PI)).sqrt();
        assert!((ETA_MAJORANT_PEAK - peak).abs() < 1e-15);
    }

    #[test]
    fn quartic_bound_with_20_pi_fails_past_1_53() {
        // 20πt⁴e^{−πt²} is not a majorant for t > ~1.53; the quartic
        // coefficient has to be 8π².
        let t: f64 = 2.0;
        let weak = 20.0 * PI * t.powi(4) * (-PI * t * t).exp();
        assert!(eta(t).abs() > weak);
        assert!(eta(t).abs() <= eta_majorant(t));
    }

    #[test]
    fn tail_bounds_are_upper_bounds() {
        let spec = QuadSpec::default().with_abs_tol(1e-20).with_rel_tol(1e-12);
        for y in [0.8, 1.0, 1.5, 2.5, 4.0] {
            for sigma in [0.5, 1.0, 2.0] {
                let exact = integrate_adaptive_real(
                    |v| eta(v).abs() * v.powf(sigma - 1.0),
                    y,
                    y + 12.0,
                    &spec,
                )
                .value
                .re;
                let bound = eta_weighted_tail_bound(y, sigma);
                assert!(bound >= exact, "y = {y}, σ = {sigma}: {bound} < {exact}");
            }
        }
    }

    #[test]
    fn antiderivative_matches_quadrature() {
        assert_eq!(eta_antiderivative(0.0), 0.0);
        assert!(eta_antiderivative(10.0).abs() < 1e-130);
        let spec = QuadSpec::default().with_abs_tol(1e-15);
        for a in [0.5, 1.0, 2.0, 3.0] {
            let q = integrate_adaptive_real(eta, 0.0, a, &spec).value.re;
            assert!((q - eta_antiderivative(a)).abs() < 1e-12, "A = {a}");
        }
        let closed = -4.0 * PI * (-PI).exp();
        assert!((eta_antiderivative(1.0) - closed).abs() < 1e-16);
    }

    #[test]
    fn mellin_closed_form_values() {
        let m2 = mellin_eta(c(2.0, 0.0));
        assert!((m2.re - 2.0 / PI).abs() < 1e-15 && m2.im == 0.0);
        assert_eq!(mellin_eta(c(1.0, 0.0)), c(0.0, 0.0));
        assert!((mellin_eta(c(0.0, 0.0)).re + 2.0).abs() < 1e-14);
        // 40-digit reference for η̂(1 − ρ₁)
        let want = c(5.481_604_931_569_812_4e-4, -3.443_246_098_252_770_6e-3);
        assert!((mellin_eta(c(1.0, 0.0) - RHO1) - want).norm() < 1e-15);
    }

    #[test]
    fn mellin_agrees_with_quadrature() {
        for s in [
            c(2.0, 0.0),
            c(3.0, 0.0),
            c(1.0, 0.0) - RHO1,
            RHO1,
            c(0.0, 0.0),
        ] {
            let q = mellin_by_quadrature(s);
            assert!(
                (q - mellin_eta(s)).norm() < 1e-9,
                "s = {s}: {q} vs {}",
                mellin_eta(s)
            );
        }
    }

    #[test]
    fn tail_mellin_matches_quadrature() {
        let spec = QuadSpec::default().with_abs_tol(1e-14);
        let q = integrate_semi_infinite(
            |v| eta(v) * ((RHO1 - 1.0) * v.ln()).exp(),
            1.0,
            eta_majorant_decreasing,
            &spec,
        )
        .into_value()
        .unwrap();
        let closed = eta_tail_mellin(1.0, RHO1).unwrap();
        assert!((q - closed).norm() < 1e-9, "{q} vs {closed}");
    }

    #[test]
    fn tail_limits() {
        let s = c(0.7, -9.0);
        let near_zero = eta_tail_mellin(1e-9, s).unwrap();
        assert!((near_zero - mellin_eta(s)).norm() < 1e-12);
        for im in [-30.0, -5.0, 0.0, 12.0, 30.0] {
            let t = eta_tail_mellin(5.0, c(0.5, im)).unwrap();
            assert!(t.norm() < 1e-30, "{t}");
        }
        // s = 1 reduces to −∫_0^A η
        let t1 = eta_tail_mellin(0.8, c(1.0, 0.0)).unwrap();
        assert!((t1.re + eta_antiderivative(0.8)).abs() < 1e-15);
    }

    #[test]
    fn head_plus_tail_is_complete() {
        let s = c(1.0, 0.0) - RHO1;
        let total = eta_head_mellin(1.0, s).unwrap() + eta_tail_mellin(1.0, s).unwrap();
        assert!((total - mellin_eta(s)).norm() < 1e-10);
        assert_eq!(eta_head_mellin(0.0, s).unwrap(), c(0.0, 0.0));
        assert!(eta_head_mellin(1e-6, s).unwrap().norm() < 1e-13);
        let h = eta_head_mellin(1.0, c(1.0, 0.0)).unwrap();
        assert!((h.re - eta_antiderivative(1.0)).abs() < 1e-15);
        assert!(h.im.abs() < 1e-16);
        assert!(eta_head_mellin(1.0, c(-2.5, 0.0)).is_err());
    }

    #[test]
    fn head_matches_quadrature() {
        let spec = QuadSpec::default().with_abs_tol(1e-15);
        let s = c(1.0, 0.0) - RHO1;
        for a in [0.3, 1.0, 2.2] {
            let q =
                integrate_adaptive(|w| eta(w) * ((s - 1.0) * w.ln()).exp(), 0.0, a, &spec).value;
            let closed = eta_head_mellin(a, s).unwrap();
            assert!((q - closed).norm() < 1e-11, "A = {a}: {q} vs {closed}");
        }
    }

    #[test]
    fn self_fourier() {
        let spec = QuadSpec::default();
        assert!(fourier_eta_numeric(0.0, &spec).unwrap().abs() < 1e-12);
        for y in [0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
            let f = fourier_eta_numeric(y, &spec).unwrap();
            assert!((f - eta(y)).abs() < 1e-9, "y = {y}: {f} vs {}", eta(y));
        }
    }

    #[test]
    fn z_eta_values() {
        let z3 = z_eta(3.0, 1e-20).unwrap();
        assert!(((z3 - eta(3.0)) / eta(3.0)).abs() < 1e-12);
        assert!(matches!(z_eta(1e-5, 1e-16), Err(Error::Range(_))));
        assert!(z_eta(1e-3, 1e-16).is_ok());
        assert!(z_eta(0.0, 1e-16).is_err());
    }

    #[test]
    fn theta_relation() {
        let lhs = z_eta(0.5, Z_SUM_DEFAULT_TOL).unwrap();
        let rhs = 2.0 * z_eta(2.0, Z_SUM_DEFAULT_TOL).unwrap();
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        for x in [0.3, 0.5, 0.8, 1.0, 1.7, 2.9] {
            let a = z_eta(x, Z_SUM_DEFAULT_TOL).unwrap();
            let b = z_eta(1.0 / x, Z_SUM_DEFAULT_TOL).unwrap() / x;
            assert!((a - b).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn z_sum_bound_dominates() {
        for y in [0.7, 0.9, 1.2, 2.0] {
            let exact: f64 = (1..200).map(|n| eta(n as f64 * y).abs()).sum();
            assert!(z_sum_bound(y) >= exact);
        }
        assert!(z_sum_bound(0.5).is_infinite());
    }
}
