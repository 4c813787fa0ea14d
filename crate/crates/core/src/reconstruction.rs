//! Truncated dual-sum reconstruction of `F_ρ`.
//!
//! The residual `(1/x)Σ_{m≤l} 𝔉Z⁻¹F_ρ(m/x) − δ_l(x) − F_ρ(x)` splits as
//! `I1 − I2 + I3` with `f = Z⁻¹F_ρ` extended evenly and
//! `D_l(t) = sin((2l+1)πt)/sin(πt)`:
//!
//! ```text
//! I1 = ∫_0^{1/2} f(xt)(1/sin πt − 1/(πt)) sin((2l+1)πt) dt
//! I2 = ∫_{1/2}^∞ f(xt) sin((2l+1)πt)/(πt) dt
//! I3 = Σ_{m≥1} ∫_{−1/2}^{1/2} (f(xm + xt) − f(xm)) D_l(t) dt
//! ```
//!
//! `f(t) ~ η̂(ρ)t^{−ρ}` at 0, so the `I1` integrand behaves like `t^{2−ρ}`
//! there. `f` is evaluated as `t^{−ρ}·∫_t^∞ η(v)v^{ρ−1}dv` for every `t > 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::delta::{delta, delta_closed_a, DeltaQuery, DeltaRoute};
use crate::eigen::{
    f_rho_series, inv_dilation_fourier, z_inverse_f, z_inverse_f_bound, EigenParams,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quadrature::{dirichlet_kernel, integrate_oscillatory_dirichlet, sin_pi, QuadSpec};
use crate::sum::ComplexSum;

/// Negligible size of `|f|` used to truncate `I2` and the `I3` sum.
pub const F_TRUNCATION_TOL: f64 = 1e-20;

/// Terms of the `I3` sum kept after the truncation test passes.
pub const I3_SAFETY_TERMS: usize = 2;

/// Smallest grid accepted by [`l2_norm_residual`].
pub const MIN_L2_GRID: usize = 16;

/// Below this `πt` the `1/sin πt − 1/(πt)` factor uses its Taylor series.
const SIN_SERIES_CUTOFF: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub l: u32,
    pub rho: Complex64,
    pub domain: (f64, f64),
    pub grid: Vec<f64>,
    pub partial_sums: Vec<Complex64>,
    pub deltas: Vec<Complex64>,
    pub f_values: Vec<Complex64>,
    pub residuals: Vec<Complex64>,
    /// Closed form B counterterms, present when verification was requested.
    pub deltas_check: Option<Vec<Complex64>>,
    pub l2_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub points: Vec<(u32, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionTerms {
    pub i1: Complex64,
    pub i2: Complex64,
    pub i3: Complex64,
}

impl DecompositionTerms {
    /// `I1 − I2 + I3`.
    pub fn combined(&self) -> Complex64 {
        self.i1 - self.i2 + self.i3
    }
}

fn check_lx(l: u32, x: f64) -> Result<()> {
    if l == 0 {
        return Err(Error::InvalidInput("l must be at least 1".into()));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput(format!("x must be positive, got {x}")));
    }
    Ok(())
}

/// `(1/x)Σ_{m=1}^{l} 𝔉Z⁻¹F_ρ(m/x)`.
pub fn partial_sum(l: u32, x: f64, p: &EigenParams) -> Result<Complex64> {
    check_lx(l, x)?;
    let mut acc = ComplexSum::new();
    for m in 1..=l {
        acc.add(inv_dilation_fourier(f64::from(m) / x, p)?);
    }
    Ok(acc.value() / x)
}

pub fn residual(l: u32, x: f64, p: &EigenParams) -> Result<Complex64> {
    residual_with(l, x, p, DeltaRoute::ClosedA)
}

pub fn residual_with(l: u32, x: f64, p: &EigenParams, route: DeltaRoute) -> Result<Complex64> {
    let s = partial_sum(l, x, p)?;
    let d = delta(&DeltaQuery::new(l, x, p.rho)?, route, &p.quad)?;
    Ok(s - d - f_rho_series(x, p)?)
}

/// `1/sin y − 1/y`.
fn cosecant_excess(y: f64) -> f64 {
    if y.abs() < SIN_SERIES_CUTOFF {
        let y2 = y * y;
        y * (1.0 / 6.0 + y2 * (7.0 / 360.0 + y2 * (31.0 / 15120.0 + y2 * 127.0 / 604_800.0)))
    } else {
        1.0 / y.sin() - 1.0 / y
    }
}

/// Smallest `v ≥ 1` on a quarter-unit ladder with `|f| < F_TRUNCATION_TOL`
/// beyond it.
fn f_cutoff(rho: Complex64) -> f64 {
    let mut v = 1.0;
    while z_inverse_f_bound(v, rho) >= F_TRUNCATION_TOL {
        v += 0.25;
    }
    v
}

fn nan_on_err(v: Result<Complex64>) -> Complex64 {
    v.unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

pub fn decomposition_terms(
    l: u32,
    x: f64,
    p: &EigenParams,
    spec: &QuadSpec,
) -> Result<DecompositionTerms> {
    check_lx(l, x)?;
    spec.validate()?;
    let rho = p.rho;
    let f = |t: f64| nan_on_err(z_inverse_f(t, rho));
    let n = 2.0 * f64::from(l) + 1.0;
    let pi = std::f64::consts::PI;

    let i1 = integrate_oscillatory_dirichlet(
        |t| {
            if t == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            f(x * t) * cosecant_excess(pi * t) * sin_pi(n * t)
        },
        0.0,
        0.5,
        l,
        spec,
    )
    .into_value()?;

    let v_cut = f_cutoff(rho);
    let t_max = (v_cut / x).max(0.5);
    let i2 = integrate_oscillatory_dirichlet(
        |t| f(x * t) * sin_pi(n * t) / (pi * t),
        0.5,
        t_max,
        l,
        spec,
    )
    .into_value()?;

    let mut acc = ComplexSum::new();
    let mut extra: Option<usize> = None;
    let mut m = 1u32;
    loop {
        let c = x * f64::from(m);
        let fc = f(c);
        let term = integrate_oscillatory_dirichlet(
            |t| (f(c + x * t) + f(c - x * t) - 2.0 * fc) * dirichlet_kernel(t, l),
            0.0,
            0.5,
            l,
            spec,
        )
        .into_value()?;
        acc.add(term);
        match extra {
            Some(0) => break,
            Some(ref mut k) => *k -= 1,
            None if c - 0.5 * x >= v_cut => extra = Some(I3_SAFETY_TERMS.saturating_sub(1)),
            None => {}
        }
        m += 1;
        if m > 1_000_000 {
            return Err(Error::NonConvergence {
                what: "shifted-window sum",
                iterations: m as usize,
            });
        }
    }
    Ok(DecompositionTerms {
        i1,
        i2,
        i3: acc.value(),
    })
}

/// `n` log-spaced points from `x_min` to `x_max` inclusive.
pub fn log_grid(x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(x_min > 0.0 && x_min < x_max && x_max.is_finite()) || n < 2 {
        return Err(Error::InvalidInput(format!(
            "need 0 < x_min < x_max and at least 2 points (got {x_min}, {x_max}, {n})"
        )));
    }
    let (a, b) = (x_min.ln(), x_max.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => x_min,
            i if i == n - 1 => x_max,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

/// `sqrt(∫|v|²dx)` by the trapezoidal rule on an increasing grid.
pub fn l2_norm_trapezoid(grid: &[f64], values: &[Complex64]) -> f64 {
    assert_eq!(grid.len(), values.len());
    let mut acc = 0.0;
    for i in 1..grid.len() {
        let h = grid[i] - grid[i - 1];
        acc += 0.5 * h * (values[i].norm_sqr() + values[i - 1].norm_sqr());
    }
    acc.sqrt()
}

fn check_domain(x_min: f64, x_max: f64, n_grid: usize) -> Result<Vec<f64>> {
    if n_grid < MIN_L2_GRID {
        return Err(Error::InvalidInput(format!(
            "L2 grid needs at least {MIN_L2_GRID} points, got {n_grid}"
        )));
    }
    log_grid(x_min, x_max, n_grid)
}

/// Full report at one `l` over a log grid.
pub fn reconstruct(
    l: u32,
    p: &EigenParams,
    x_min: f64,
    x_max: f64,
    n_grid: usize,
    verify: bool,
    exec: Exec,
) -> Result<ReconstructionReport> {
    check_lx(l, 1.0)?;
    let grid = check_domain(x_min, x_max, n_grid)?;
    let rows = exec.try_map(&grid, |&x| -> Result<[Complex64; 4]> {
        let q = DeltaQuery::new(l, x, p.rho)?;
        let check = if verify {
            crate::delta::delta_closed_b(&q)?
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        };
        Ok([
            partial_sum(l, x, p)?,
            delta_closed_a(&q)?,
            f_rho_series(x, p)?,
            check,
        ])
    })?;
    let partial_sums: Vec<_> = rows.iter().map(|r| r[0]).collect();
    let deltas: Vec<_> = rows.iter().map(|r| r[1]).collect();
    let f_values: Vec<_> = rows.iter().map(|r| r[2]).collect();
    let residuals: Vec<_> = rows.iter().map(|r| r[0] - r[1] - r[2]).collect();
    let l2_norm = l2_norm_trapezoid(&grid, &residuals);
    Ok(ReconstructionReport {
        l,
        rho: p.rho,
        domain: (x_min, x_max),
        grid,
        partial_sums,
        deltas,
        f_values,
        residuals,
        deltas_check: verify.then(|| rows.iter().map(|r| r[3]).collect()),
        l2_norm,
    })
}

pub fn l2_norm_residual(
    l: u32,
    p: &EigenParams,
    x_min: f64,
    x_max: f64,
    n_grid: usize,
) -> Result<f64> {
    Ok(reconstruct(l, p, x_min, x_max, n_grid, false, Exec::default())?.l2_norm)
}

/// Residuals at every `(x, l)` pair, reusing `F_ρ(x)` and the running
/// partial sums across `l`. Rows follow `xs`, columns follow `ls`.
pub fn residual_table(
    ls: &[u32],
    xs: &[f64],
    p: &EigenParams,
    exec: Exec,
) -> Result<Vec<Vec<Complex64>>> {
    if ls.is_empty() || ls.contains(&0) {
        return Err(Error::InvalidInput("l values must be positive".into()));
    }
    let l_max = *ls.iter().max().expect("nonempty");
    exec.try_map(xs, |&x| {
        check_lx(1, x)?;
        let f = f_rho_series(x, p)?;
        let mut prefix = Vec::with_capacity(l_max as usize + 1);
        let mut acc = ComplexSum::new();
        prefix.push(Complex64::new(0.0, 0.0));
        for m in 1..=l_max {
            acc.add(inv_dilation_fourier(f64::from(m) / x, p)?);
            prefix.push(acc.value() / x);
        }
        ls.iter()
            .map(|&l| {
                let d = delta_closed_a(&DeltaQuery::new(l, x, p.rho)?)?;
                Ok(prefix[l as usize] - d - f)
            })
            .collect()
    })
}

/// L² residual norms on one shared grid for every `l`, in order.
pub fn l2_norm_sweep(
    ls: &[u32],
    p: &EigenParams,
    x_min: f64,
    x_max: f64,
    n_grid: usize,
    exec: Exec,
) -> Result<Vec<(u32, f64)>> {
    let grid = check_domain(x_min, x_max, n_grid)?;
    let table = residual_table(ls, &grid, p, exec)?;
    Ok(ls
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            let column: Vec<Complex64> = table.iter().map(|row| row[j]).collect();
            (l, l2_norm_trapezoid(&grid, &column))
        })
        .collect())
}

/// Least-squares line through `(log(2l+1), log norm)`.
pub fn rate_fit(points: &[(u32, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "rate fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(l, v)) = points
        .iter()
        .find(|&&(l, v)| l == 0 || !(v > 0.0 && v.is_finite()))
    {
        return Err(Error::InvalidInput(format!(
            "bad rate point (l = {l}, norm = {v})"
        )));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|&(l, _)| (2.0 * f64::from(l) + 1.0).ln())
        .collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput(
            "rate fit needs at least two distinct l".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    Ok(RateFit {
        points: points.to_vec(),
        slope,
        intercept,
        r_squared,
    })
}
