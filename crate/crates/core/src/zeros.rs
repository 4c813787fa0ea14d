//! Nontrivial zeros `ρ = 1/2 + iγ` on the critical line.
//!
//! The first 100 ordinates ship as `data/zeros.csv` (header `index,gamma`,
//! 12 significant digits). The table is produced by [`scan_zeros`]: sign
//! changes of the real function `Ξ(t) = ξ(1/2 + it)` on a 0.05 grid, each
//! refined by bisection. Residuals `|ζ(1/2 + iγ)|` are recomputed on load.
//! Setting `HP_ZEROS_PATH` replaces the embedded table with another file of
//! the same format.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{xi_on_critical_line, zeta};

pub const EMBEDDED_ZEROS_CSV: &str = include_str!("../data/zeros.csv");

/// Environment variable overriding the zeros table path.
pub const ZEROS_PATH_ENV: &str = "HP_ZEROS_PATH";

/// Residual every table entry must satisfy.
pub const CERTIFICATION_TOL: f64 = 1e-8;

/// Grid step of the sign-change scan that generated the table.
pub const SCAN_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaZero {
    pub index: usize,
    pub gamma: f64,
    /// `|ζ(1/2 + iγ)|` at the stored ordinate.
    pub residual: f64,
}

impl ZetaZero {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(0.5, self.gamma)
    }

    fn with_residual(index: usize, gamma: f64) -> Result<Self> {
        Ok(Self {
            index,
            gamma,
            residual: zeta(Complex64::new(0.5, gamma))?.norm(),
        })
    }
}

/// Riemann–Siegel theta by its asymptotic series (accurate for `t ≳ 10`).
pub fn riemann_siegel_theta(t: f64) -> f64 {
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// Ordinal of the zero at height `gamma`, from `N(γ) ≈ θ(γ)/π + 1`.
/// Exact for the embedded range; for larger heights `S(t)` may shift it.
pub fn estimate_index(gamma: f64) -> usize {
    (riemann_siegel_theta(gamma) / PI + 1.5).round().max(1.0) as usize
}

/// Parses a zeros table (`index,gamma` header, one zero per line).
pub fn parse_zeros_csv(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("index,gamma") => {}
        other => {
            return Err(Error::ZerosTable(format!(
                "expected header `index,gamma`, found {other:?}"
            )))
        }
    }
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let (idx, gamma) = line
            .trim()
            .split_once(',')
            .ok_or_else(|| Error::ZerosTable(format!("line {}: missing comma", lineno + 2)))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|e| Error::ZerosTable(format!("line {}: index: {e}", lineno + 2)))?;
        let gamma: f64 = gamma
            .trim()
            .parse()
            .map_err(|e| Error::ZerosTable(format!("line {}: gamma: {e}", lineno + 2)))?;
        if let Some(&(prev_idx, prev_gamma)) = rows.last() {
            if idx != prev_idx + 1 || !(gamma > prev_gamma) {
                return Err(Error::ZerosTable(format!(
                    "line {}: zeros must be consecutive and increasing",
                    lineno + 2
                )));
            }
        } else if idx != 1 || !(gamma > 0.0) {
            return Err(Error::ZerosTable("table must start at index 1".into()));
        }
        rows.push((idx, gamma));
    }
    Ok(rows)
}

/// Renders a table in the on-disk format.
pub fn format_zeros_csv(zeros: &[ZetaZero]) -> String {
    let mut out = String::from("index,gamma\n");
    for z in zeros {
        out.push_str(&format!(
            "{},{}\n",
            z.index,
            format_significant(z.gamma, 12)
        ));
    }
    out
}

fn format_significant(value: f64, digits: usize) -> String {
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

fn table_text() -> Result<String> {
    match std::env::var_os(ZEROS_PATH_ENV) {
        Some(path) => read_table(Path::new(&path)),
        None => Ok(EMBEDDED_ZEROS_CSV.to_string()),
    }
}

fn read_table(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::ZerosTable(format!("{}: {e}", path.display())))
}

/// First `count` zeros of the active table with freshly computed residuals.
pub fn load_zeros(count: usize) -> Result<Vec<ZetaZero>> {
    load_zeros_from_str(&table_text()?, count)
}

pub fn load_zeros_from_str(text: &str, count: usize) -> Result<Vec<ZetaZero>> {
    let rows = parse_zeros_csv(text)?;
    if count > rows.len() {
        return Err(Error::Range(format!(
            "requested {count} zeros, table has {}",
            rows.len()
        )));
    }
    rows.into_iter()
        .take(count)
        .map(|(index, gamma)| ZetaZero::with_residual(index, gamma))
        .collect()
}

/// The `index`-th zero (1-based) of the active table.
pub fn zero_by_index(index: usize) -> Result<ZetaZero> {
    if index == 0 {
        return Err(Error::Range("zero indices start at 1".into()));
    }
    Ok(load_zeros(index)?[index - 1])
}

/// Bisects a sign change of `Ξ` in `[lo, hi]` down to width `tol`.
pub fn refine_zero(lo: f64, hi: f64, tol: f64) -> Result<ZetaZero> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "refine_zero needs lo < hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = xi_on_critical_line(a);
    let fb = xi_on_critical_line(b);
    if fa == 0.0 {
        return ZetaZero::with_residual(estimate_index(a), a);
    }
    if fb == 0.0 {
        return ZetaZero::with_residual(estimate_index(b), b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = xi_on_critical_line(mid);
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let gamma = 0.5 * (a + b);
    ZetaZero::with_residual(estimate_index(gamma), gamma)
}

/// `|ζ(1/2 + iγ)| < tol`.
pub fn verify_zero(z: &ZetaZero, tol: f64) -> bool {
    match zeta(z.rho()) {
        Ok(v) => v.norm() < tol,
        Err(_) => false,
    }
}

/// Scans `Ξ` on `(t_min, t_max)` with the given step and refines every sign
/// change. Indices come from the scan order, offset by the zeros below
/// `t_min` estimated through `θ`.
pub fn scan_zeros(t_min: f64, t_max: f64, step: f64, tol: f64) -> Result<Vec<ZetaZero>> {
    let mut out = Vec::new();
    let first_index = if t_min < 14.0 {
        1
    } else {
        estimate_index(t_min)
    };
    let mut t = t_min.max(step);
    let mut prev = xi_on_critical_line(t);
    while t < t_max {
        let next_t = (t + step).min(t_max);
        let next = xi_on_critical_line(next_t);
        if prev.signum() != next.signum() && prev != 0.0 {
            let mut z = refine_zero(t, next_t, tol)?;
            z.index = first_index + out.len();
            out.push(z);
        }
        prev = next;
        t = next_t;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA1: f64 = 14.134_725_141_734_694;

    #[test]
    fn embedded_table_is_well_formed() {
        let rows = parse_zeros_csv(EMBEDDED_ZEROS_CSV).unwrap();
        assert_eq!(rows.len(), 100);
        assert!((rows[99].1 - 236.524_229_666).abs() < 1e-8);
    }

    #[test]
    fn load_counts() {
        let zs = load_zeros_from_str(EMBEDDED_ZEROS_CSV, 3).unwrap();
        assert!((zs[0].gamma - 14.134_725_142).abs() < 1e-9);
        assert!((zs[1].gamma - 21.022_039_639).abs() < 1e-9);
        assert!((zs[2].gamma - 25.010_857_580).abs() < 1e-9);
        assert!(load_zeros_from_str(EMBEDDED_ZEROS_CSV, 0)
            .unwrap()
            .is_empty());
        assert!(matches!(
            load_zeros_from_str(EMBEDDED_ZEROS_CSV, 101),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn refine_first_zero() {
        let z = refine_zero(14.0, 15.0, 1e-10).unwrap();
        assert!((z.gamma - GAMMA1).abs() < 1e-10);
        assert_eq!(z.index, 1);
        assert!(z.residual < 1e-9);

        let loose = refine_zero(14.0, 15.0, 0.5).unwrap();
        assert!(loose.gamma > 14.0 && loose.gamma < 15.0);
        assert!((loose.gamma - GAMMA1).abs() <= 0.5);
    }

    #[test]
    fn refine_without_sign_change() {
        for k in 0..=20 {
            let t = 20.0 + 0.05 * k as f64;
            assert!(xi_on_critical_line(t) != 0.0);
            assert_eq!(
                xi_on_critical_line(t).signum(),
                xi_on_critical_line(20.0).signum()
            );
        }
        assert!(matches!(
            refine_zero(20.0, 21.0, 1e-10),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn refinement_is_bracket_independent() {
        let tol = 1e-11;
        let a = refine_zero(13.5, 14.5, tol).unwrap().gamma;
        let b = refine_zero(14.1, 14.9, tol).unwrap().gamma;
        assert!((a - b).abs() <= 2.0 * tol);
    }

    #[test]
    fn verify() {
        let z1 = ZetaZero {
            index: 1,
            gamma: GAMMA1,
            residual: 0.0,
        };
        assert!(verify_zero(&z1, 1e-8));
        let off = ZetaZero { gamma: 14.0, ..z1 };
        assert!(!verify_zero(&off, 1e-8));
        assert!(verify_zero(&off, 1e300));
    }

    #[test]
    fn index_estimate_matches_table() {
        for (idx, gamma) in parse_zeros_csv(EMBEDDED_ZEROS_CSV).unwrap() {
            assert_eq!(estimate_index(gamma), idx, "γ = {gamma}");
        }
    }

    #[test]
    fn csv_rejects_malformed_tables() {
        assert!(parse_zeros_csv("gamma\n14.1\n").is_err());
        assert!(parse_zeros_csv("index,gamma\n2,14.1\n").is_err());
        assert!(parse_zeros_csv("index,gamma\n1,21.0\n2,14.1\n").is_err());
        assert!(parse_zeros_csv("index,gamma\n1,abc\n").is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(
            format_significant(14.134_725_141_734_694, 12),
            "14.1347251417"
        );
        assert_eq!(
            format_significant(236.524_229_665_816_2, 12),
            "236.524229666"
        );
    }
}
