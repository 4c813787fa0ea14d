use std::path::PathBuf;

use hp_core::quadrature::QuadSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Zeros,
    EtaCheck,
    EigenCheck,
    DeltaCheck,
    Reconstruct,
    Rate,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Zeros => "zeros",
            Suite::EtaCheck => "eta",
            Suite::EigenCheck => "eigen",
            Suite::DeltaCheck => "delta",
            Suite::Reconstruct => "reconstruct",
            Suite::Rate => "rate",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpec {
    List(Vec<f64>),
    Domain { x_min: f64, x_max: f64, n: usize },
}

impl GridSpec {
    /// Parses `a:b:n`.
    pub fn parse_domain(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected x_min:x_max:n, got `{s}`"));
        };
        let x_min: f64 = a.trim().parse().map_err(|e| format!("x_min: {e}"))?;
        let x_max: f64 = b.trim().parse().map_err(|e| format!("x_max: {e}"))?;
        let n: usize = n.trim().parse().map_err(|e| format!("n: {e}"))?;
        if !(x_min > 0.0 && x_min < x_max && x_max.is_finite()) || n < 2 {
            return Err(format!(
                "domain needs 0 < x_min < x_max and n ≥ 2, got `{s}`"
            ));
        }
        Ok(GridSpec::Domain { x_min, x_max, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_depth: Option<u32>,
}

impl ToleranceOverrides {
    pub fn apply(&self) -> QuadSpec {
        let mut spec = QuadSpec::default();
        if let Some(v) = self.abs_tol {
            spec.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            spec.rel_tol = v;
        }
        if let Some(v) = self.max_depth {
            spec.max_depth = v;
        }
        spec
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Suite,
    pub rho_index: usize,
    pub l_list: Option<Vec<u32>>,
    pub grid: Option<GridSpec>,
    pub tolerances: ToleranceOverrides,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub jobs: Option<usize>,
    /// Carry the closed form B counterterm alongside A in reconstruction.
    pub verify_delta: bool,
    pub zero_count: Option<usize>,
    pub regenerate: bool,
}

impl RunConfig {
    pub fn new(command: Suite) -> Self {
        Self {
            command,
            rho_index: 1,
            l_list: None,
            grid: None,
            tolerances: ToleranceOverrides::default(),
            output_path: None,
            format: Format::Json,
            jobs: None,
            verify_delta: false,
            zero_count: None,
            regenerate: false,
        }
    }

    /// Checks everything that can be checked before any numerics run.
    pub fn validate(&self) -> Result<(), String> {
        if self.rho_index == 0 {
            return Err("--rho-index starts at 1".into());
        }
        if let Some(ls) = &self.l_list {
            if ls.is_empty() || ls.contains(&0) {
                return Err("--l needs positive integers".into());
            }
        }
        match &self.grid {
            Some(GridSpec::List(xs))
                if xs.is_empty() || xs.iter().any(|&x| !(x > 0.0 && x.is_finite())) =>
            {
                return Err("--x needs positive finite values".into());
            }
            Some(GridSpec::Domain { x_min, x_max, n })
                if !(*x_min > 0.0 && x_min < x_max && x_max.is_finite()) || *n < 2 =>
            {
                return Err("--domain needs 0 < x_min < x_max and n ≥ 2".into());
            }
            _ => {}
        }
        if self.jobs == Some(0) {
            return Err("--jobs must be at least 1".into());
        }
        if self.zero_count == Some(0) {
            return Err("--count must be at least 1".into());
        }
        self.tolerances
            .apply()
            .validate()
            .map_err(|e| e.to_string())
    }
}

/// Pass/fail thresholds shared by every suite. Bump `version` whenever a
/// value changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub version: u32,
    pub eta_self_fourier: f64,
    pub eta_theta: f64,
    pub eta_antiderivative: f64,
    pub eigen_residual: f64,
    pub eigen_series_vs_quadrature: f64,
    pub delta_closed_forms: f64,
    pub delta_quadrature: f64,
    pub zero_residual: f64,
    pub zero_refinement: f64,
    pub rate_slope_max: f64,
}

pub const THRESHOLDS: Thresholds = Thresholds {
    version: 1,
    eta_self_fourier: 1e-8,
    eta_theta: 1e-10,
    eta_antiderivative: 1e-12,
    eigen_residual: 1e-6,
    eigen_series_vs_quadrature: 1e-8,
    delta_closed_forms: 1e-9,
    delta_quadrature: 1e-6,
    zero_residual: 1e-8,
    zero_refinement: 1e-9,
    rate_slope_max: -0.9,
};
