//! The eigenfunction `F_ρ(x) = ∫_1^∞ Zη(tx)t^{ρ−1}dt`, its derivative and
//! the Fourier transform of `Z⁻¹F_ρ`.
//!
//! Two evaluation paths are kept independent:
//!
//! * quadrature of the defining integral (slow, trusted), and
//! * the dilation series `F_ρ(x) = Σ_n (nx)^{−ρ} ∫_{nx}^∞ η(v)v^{ρ−1}dv`
//!   obtained by swapping sum and integral and substituting `v = ntx`
//!   (fast, used everywhere else).
//!
//! Differentiating the series term by term gives
//! `−xF_ρ′(x) = ρF_ρ(x) + Zη(x)`, so the eigen-equation is an
//! integration-by-parts identity valid for every `ρ`, zero of ζ or not.
//! Powers `(nx)^{−ρ}` use the real logarithm of `nx > 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::{
    eta, eta_head_mellin, eta_tail_mellin, eta_weighted_tail_bound, z_eta, z_sum_bound,
    ETA_MAJORANT_PEAK, Z_SUM_DEFAULT_TOL,
};
use crate::quadrature::{integrate_semi_infinite, QuadSpec};
use crate::sum::ComplexSum;

/// Extra terms summed after the truncation bound is met.
pub const SERIES_SAFETY_TERMS: usize = 2;

/// Hard cap on dilation-series terms (reached near `x ≈ 1e-4`).
pub const SERIES_MAX_TERMS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenParams {
    pub rho: Complex64,
    pub series_tol: f64,
    pub quad: QuadSpec,
}

impl EigenParams {
    /// Parameters for `ρ` in the critical strip `0 < Re ρ < 1`.
    pub fn new(rho: Complex64) -> Result<Self> {
        if !(rho.re > 0.0 && rho.re < 1.0) || !rho.im.is_finite() {
            return Err(Error::InvalidInput(format!(
                "rho must lie in the critical strip, got {rho}"
            )));
        }
        Ok(Self::unrestricted(rho))
    }

    /// Parameters without the strip check, for control runs such as
    /// `ρ = 2`. The defining integral converges for every `ρ`; the Fourier
    /// side needs `Re ρ < 3` and the mollifier `Re ρ > 0`.
    pub fn unrestricted(rho: Complex64) -> Self {
        Self {
            rho,
            series_tol: 1e-16,
            quad: QuadSpec::default(),
        }
    }

    pub fn with_series_tol(mut self, tol: f64) -> Self {
        self.series_tol = tol;
        self
    }

    pub fn with_quad(mut self, quad: QuadSpec) -> Self {
        self.quad = quad;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    Quadrature,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSample {
    pub x: f64,
    pub value: Complex64,
    pub method: EvalMethod,
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "x must be positive and finite, got {x}"
        )))
    }
}

/// `y^{−ρ}` for real `y > 0`.
fn real_pow_neg(y: f64, rho: Complex64) -> Complex64 {
    (-rho * y.ln()).exp()
}

/// Bound on `|Z⁻¹F_ρ(y)| = |y^{−ρ} ∫_y^∞ η(v)v^{ρ−1}dv|`, valid for
/// `y ≥ 0.69` and decreasing there.
pub fn z_inverse_f_bound(y: f64, rho: Complex64) -> f64 {
    y.powf(-rho.re) * eta_weighted_tail_bound(y, rho.re)
}

/// Sums `term(n)` for `n = 1, 2, …` until the dilation-term bound at `nx`
/// drops below `tol`, then adds [`SERIES_SAFETY_TERMS`] more.
fn dilation_series<T>(x: f64, rho: Complex64, tol: f64, mut term: T) -> Result<Complex64>
where
    T: FnMut(f64) -> Result<Complex64>,
{
    let mut acc = ComplexSum::new();
    let mut n = 1usize;
    let mut extra = None;
    loop {
        let y = n as f64 * x;
        acc.add(term(y)?);
        match extra {
            Some(0) => return Ok(acc.value()),
            Some(ref mut k) => *k -= 1,
            None => {
                if y >= 1.0 && z_inverse_f_bound(y, rho) < tol {
                    extra = Some(SERIES_SAFETY_TERMS);
                    if SERIES_SAFETY_TERMS == 0 {
                        return Ok(acc.value());
                    }
                }
            }
        }
        n += 1;
        if n > SERIES_MAX_TERMS {
            return Err(Error::Range(format!(
                "dilation series at x = {x} needs more than {SERIES_MAX_TERMS} terms"
            )));
        }
    }
}

/// `Z⁻¹F_ρ(t) = ∫_1^∞ η(tu)u^{ρ−1}du = t^{−ρ}∫_t^∞ η(v)v^{ρ−1}dv`, `t > 0`.
pub fn z_inverse_f(t: f64, rho: Complex64) -> Result<Complex64> {
    let t = t.abs();
    check_x(t)?;
    Ok(real_pow_neg(t, rho) * eta_tail_mellin(t, rho)?)
}

/// `F_ρ(x)` by quadrature of `∫_1^∞ Zη(tx)t^{ρ−1}dt`.
pub fn f_rho_quadrature(x: f64, p: &EigenParams) -> Result<Complex64> {
    check_x(x)?;
    let rho = p.rho;
    let growth = (rho.re - 1.0).max(0.0);
    let integrand = |t: f64| -> Complex64 {
        match z_eta(t * x, Z_SUM_DEFAULT_TOL) {
            Ok(z) => z * ((rho - 1.0) * t.ln()).exp(),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let majorant = |t: f64| t.powf(growth) * z_sum_bound((t * x).max(ETA_MAJORANT_PEAK));
    integrate_semi_infinite(integrand, 1.0, majorant, &p.quad).into_value()
}

/// `F_ρ(x)` by the dilation series.
pub fn f_rho_series(x: f64, p: &EigenParams) -> Result<Complex64> {
    check_x(x)?;
    let rho = p.rho;
    dilation_series(x, rho, p.series_tol, |y| {
        Ok(real_pow_neg(y, rho) * eta_tail_mellin(y, rho)?)
    })
}

pub fn f_rho(x: f64, p: &EigenParams, method: EvalMethod) -> Result<EigenSample> {
    let value = match method {
        EvalMethod::Quadrature => f_rho_quadrature(x, p)?,
        EvalMethod::Series => f_rho_series(x, p)?,
    };
    Ok(EigenSample { x, value, method })
}

/// `F_ρ′(x)` from the series:
/// `d/dx[(nx)^{−ρ}T(nx)] = −(ρ(nx)^{−ρ}T(nx) + η(nx))/x` with
/// `T(A) = ∫_A^∞ η(v)v^{ρ−1}dv`, `T′(A) = −η(A)A^{ρ−1}`.
pub fn f_rho_derivative(x: f64, p: &EigenParams) -> Result<Complex64> {
    check_x(x)?;
    let rho = p.rho;
    let sum = dilation_series(x, rho, p.series_tol, |y| {
        let t = real_pow_neg(y, rho) * eta_tail_mellin(y, rho)?;
        Ok(rho * t + eta(y))
    })?;
    Ok(-sum / x)
}

/// `|−xF_ρ′(x) − ρF_ρ(x) − Zη(x)|`.
pub fn eigen_residual(x: f64, p: &EigenParams) -> Result<f64> {
    let d = f_rho_derivative(x, p)?;
    let f = f_rho_series(x, p)?;
    let z = z_eta(x, Z_SUM_DEFAULT_TOL)?;
    Ok((-x * d - p.rho * f - z).norm())
}

/// `𝔉Z⁻¹F_ρ(t) = ∫_1^∞ η(t/u)u^{ρ−2}du = t^{ρ−1}∫_0^t η(w)w^{−ρ}dw`.
///
/// Behaves like `O(t²)` at 0 and like `t^{ρ−1}η̂(1−ρ)` for large `t`.
pub fn inv_dilation_fourier(t: f64, p: &EigenParams) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    check_x(t)?;
    let rho = p.rho;
    let s = Complex64::new(1.0, 0.0) - rho;
    Ok(((rho - 1.0) * t.ln()).exp() * eta_head_mellin(t, s)?)
}
