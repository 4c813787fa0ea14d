//! The counterterm `δ_l(x)` subtracted from the truncated dual sum.
//!
//! With `B = (l + 1/2)/x` and `a = (3 − ρ)/2`:
//!
//! ```text
//! δ = ∫_0^B 𝔉Z⁻¹F_ρ(t) dt                                   (quadrature)
//!   = η̂(1−ρ)B^ρ/ρ + 2π·π^{−a}B^ρ·Γ(a, πB²)                 (closed form A)
//!   = −2π·π^{−a}B^ρ·γ(a, πB²) = −4πB³∫_0^1 u^{2−ρ}e^{−π(Bu)²}du   (closed form B)
//! ```
//!
//! A and B agree because `−2π·π^{−a}Γ(a) = η̂(1−ρ)/ρ`. None of this uses
//! `ζ(ρ) = 0`; any `ρ` with `0 < Re ρ < 3` is accepted.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{inv_dilation_fourier, EigenParams};
use crate::error::{Error, Result};
use crate::eta::mellin_eta;
use crate::quadrature::{integrate_adaptive, QuadSpec};
use crate::special::{lower_incomplete_gamma, upper_incomplete_gamma};

/// Above this `πB²` the factor `e^{−πB²}` underflows and the Gaussian term
/// of closed form A is exactly zero.
pub const GAUSSIAN_UNDERFLOW_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaQuery {
    pub l: u32,
    pub x: f64,
    pub rho: Complex64,
}

impl DeltaQuery {
    pub fn new(l: u32, x: f64, rho: Complex64) -> Result<Self> {
        let q = Self { l, x, rho };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::InvalidInput("l must be at least 1".into()));
        }
        if !(self.x > 0.0 && self.x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "x must be positive, got {}",
                self.x
            )));
        }
        if !(self.rho.re > 0.0 && self.rho.re < 3.0) || !self.rho.im.is_finite() {
            return Err(Error::InvalidInput(format!(
                "delta needs 0 < Re rho < 3, got {}",
                self.rho
            )));
        }
        Ok(())
    }

    /// `B = (l + 1/2)/x`.
    pub fn b(&self) -> f64 {
        (f64::from(self.l) + 0.5) / self.x
    }

    fn shape(&self) -> Complex64 {
        (Complex64::new(3.0, 0.0) - self.rho) / 2.0
    }

    /// `2π·π^{−a}·B^ρ`, the common prefactor of both incomplete-gamma terms.
    fn prefactor(&self) -> Complex64 {
        let a = self.shape();
        2.0 * PI * (-a * PI.ln() + self.rho * self.b().ln()).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRoute {
    #[default]
    ClosedA,
    ClosedB,
    /// Closed form B with its `u`-integral done by quadrature.
    ClosedBQuadrature,
    Quadrature,
}

impl DeltaRoute {
    pub const ALL: [DeltaRoute; 4] = [
        DeltaRoute::ClosedA,
        DeltaRoute::ClosedB,
        DeltaRoute::ClosedBQuadrature,
        DeltaRoute::Quadrature,
    ];
}

pub fn delta_closed_a(q: &DeltaQuery) -> Result<Complex64> {
    q.validate()?;
    let rho = q.rho;
    let b = q.b();
    let main = mellin_eta(Complex64::new(1.0, 0.0) - rho) * (rho * b.ln()).exp() / rho;
    let x = PI * b * b;
    if x > GAUSSIAN_UNDERFLOW_EXPONENT {
        return Ok(main);
    }
    Ok(main + q.prefactor() * upper_incomplete_gamma(q.shape(), x)?)
}

pub fn delta_closed_b(q: &DeltaQuery) -> Result<Complex64> {
    q.validate()?;
    let b = q.b();
    Ok(-q.prefactor() * lower_incomplete_gamma(q.shape(), PI * b * b)?)
}

/// `−4πB³∫_0^1 u^{2−ρ}e^{−π(Bu)²}du` by adaptive quadrature.
pub fn delta_closed_b_quadrature(q: &DeltaQuery, spec: &QuadSpec) -> Result<Complex64> {
    q.validate()?;
    let b = q.b();
    let exponent = Complex64::new(2.0, 0.0) - q.rho;
    let integrand = |u: f64| {
        if u == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (exponent * u.ln() - PI * b * b * u * u).exp()
        }
    };
    let v = integrate_adaptive(integrand, 0.0, 1.0, spec).into_value()?;
    Ok(-4.0 * PI * b.powi(3) * v)
}

/// `∫_0^B 𝔉Z⁻¹F_ρ(t) dt` by adaptive quadrature on unit starting panels.
pub fn delta_quadrature(q: &DeltaQuery, spec: &QuadSpec) -> Result<Complex64> {
    q.validate()?;
    let p = EigenParams::unrestricted(q.rho);
    let b = q.b();
    let integrand =
        |t: f64| inv_dilation_fourier(t, &p).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let panels = b.ceil().max(1.0) as usize;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let lo = b * k as f64 / panels as f64;
        let hi = b * (k + 1) as f64 / panels as f64;
        total += integrate_adaptive(integrand, lo, hi, spec).into_value()?;
    }
    Ok(total)
}

pub fn delta(q: &DeltaQuery, route: DeltaRoute, spec: &QuadSpec) -> Result<Complex64> {
    match route {
        DeltaRoute::ClosedA => delta_closed_a(q),
        DeltaRoute::ClosedB => delta_closed_b(q),
        DeltaRoute::ClosedBQuadrature => delta_closed_b_quadrature(q, spec),
        DeltaRoute::Quadrature => delta_quadrature(q, spec),
    }
}

/// `|η̂(1−ρ)|/(|ρ|·x^{Re ρ})`, the limit of `|δ_l(x)|·(l+½)^{−Re ρ}`.
pub fn growth_constant(x: f64, rho: Complex64) -> f64 {
    mellin_eta(Complex64::new(1.0, 0.0) - rho).norm() / (rho.norm() * x.powf(rho.re))
}
