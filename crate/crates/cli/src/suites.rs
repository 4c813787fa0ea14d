use hp_core::delta::{delta_closed_a, delta_closed_b, delta_quadrature, DeltaQuery};
use hp_core::eigen::{eigen_residual, f_rho_quadrature, f_rho_series, EigenParams};
use hp_core::eta::{eta, eta_antiderivative, fourier_eta_numeric, z_eta, Z_SUM_DEFAULT_TOL};
use hp_core::exec::Exec;
use hp_core::quadrature::{integrate_adaptive_real, QuadSpec};
use hp_core::reconstruction::{l2_norm_trapezoid, log_grid, partial_sum, rate_fit, residual_table};
use hp_core::zeros::{
    estimate_index, format_zeros_csv, load_zeros, refine_zero, scan_zeros, ZetaZero, SCAN_STEP,
};
use hp_core::{Complex64, Result};
use serde_json::{Map, Value};

use crate::config::{GridSpec, RunConfig, Suite, THRESHOLDS};
use crate::report::{complex, fmt_f64, num, Report, Table};

const ETA_FOURIER_POINTS: [f64; 7] = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0];
const ETA_THETA_POINTS: [f64; 6] = [0.3, 0.5, 0.8, 1.0, 1.7, 3.0];
const ETA_ANTIDERIVATIVE_POINTS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
const EIGEN_DEFAULT_X: [f64; 5] = [0.3, 0.7, 1.0, 2.0, 5.0];
const DELTA_DEFAULT_L: [u32; 5] = [1, 2, 5, 10, 20];
const DELTA_DEFAULT_X: [f64; 3] = [0.5, 1.0, 2.0];
const SWEEP_DEFAULT_L: [u32; 5] = [2, 4, 8, 16, 32];
const SWEEP_DEFAULT_DOMAIN: GridSpec = GridSpec::Domain {
    x_min: 0.1,
    x_max: 10.0,
    n: 64,
};
const DEFAULT_ZERO_COUNT: usize = 100;
const REGENERATE_TOL: f64 = 1e-12;

/// Everything a suite needs, resolved from a validated [`RunConfig`].
pub struct Context {
    pub config: RunConfig,
    pub rho: Complex64,
    pub spec: QuadSpec,
    pub exec: Exec,
}

impl Context {
    pub fn resolve(config: &RunConfig) -> std::result::Result<Self, String> {
        config.validate()?;
        let table = load_zeros(config.rho_index).map_err(|e| format!("--rho-index: {e}"))?;
        if let Some(count) = config.zero_count {
            if !config.regenerate {
                load_zeros(count).map_err(|e| format!("--count: {e}"))?;
            }
        }
        Ok(Self {
            config: config.clone(),
            rho: table[config.rho_index - 1].rho(),
            spec: config.tolerances.apply(),
            exec: Exec::default(),
        })
    }

    fn params(&self) -> Result<EigenParams> {
        Ok(EigenParams::new(self.rho)?.with_quad(self.spec))
    }

    fn ls(&self, default: &[u32]) -> Vec<u32> {
        self.config
            .l_list
            .clone()
            .unwrap_or_else(|| default.to_vec())
    }

    fn xs(&self, default: &GridSpec) -> Result<Vec<f64>> {
        match self.config.grid.as_ref().unwrap_or(default) {
            GridSpec::List(xs) => Ok(xs.clone()),
            GridSpec::Domain { x_min, x_max, n } => log_grid(*x_min, *x_max, *n),
        }
    }

    /// Shared report header: resolved parameters and the thresholds table.
    pub fn header(&self) -> Map<String, Value> {
        let mut params = Map::new();
        params.insert("rho_index".into(), self.config.rho_index.into());
        params.insert("rho".into(), complex(self.rho));
        let mut quad = Map::new();
        quad.insert("abs_tol".into(), num(self.spec.abs_tol));
        quad.insert("rel_tol".into(), num(self.spec.rel_tol));
        quad.insert("max_depth".into(), self.spec.max_depth.into());
        quad.insert("tail_cutoff".into(), num(self.spec.tail_cutoff));
        params.insert("quadrature".into(), Value::Object(quad));

        let mut m = Map::new();
        m.insert("parameters".into(), Value::Object(params));
        m.insert("thresholds".into(), thresholds_json());
        m
    }
}

pub fn thresholds_json() -> Value {
    let raw = serde_json::to_value(THRESHOLDS).expect("thresholds serialize");
    let Value::Object(map) = raw else {
        unreachable!()
    };
    Value::Object(
        map.into_iter()
            .map(|(k, v)| match v {
                Value::Number(n) if !(n.is_u64() || n.is_i64()) => {
                    (k, num(n.as_f64().expect("finite threshold")))
                }
                other => (k, other),
            })
            .collect(),
    )
}

fn list_f64(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn list_u32(ls: &[u32]) -> Value {
    Value::Array(ls.iter().map(|&l| l.into()).collect())
}

pub fn run(ctx: &Context, suite: Suite) -> Result<Report> {
    match suite {
        Suite::Zeros => zeros(ctx),
        Suite::EtaCheck => eta_suite(ctx),
        Suite::EigenCheck => eigen_suite(ctx),
        Suite::DeltaCheck => delta_suite(ctx),
        Suite::Reconstruct => reconstruct_suite(ctx),
        Suite::Rate => rate_suite(ctx),
        Suite::All => all(ctx),
    }
}

struct Check {
    name: &'static str,
    max_abs_error: f64,
    tolerance: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.max_abs_error < self.tolerance
    }
}

fn eta_suite(ctx: &Context) -> Result<Report> {
    let spec = &ctx.spec;
    let mut fourier: f64 = 0.0;
    for y in ETA_FOURIER_POINTS {
        fourier = fourier.max((fourier_eta_numeric(y, spec)? - eta(y)).abs());
    }
    let mut theta: f64 = 0.0;
    for x in ETA_THETA_POINTS {
        let lhs = z_eta(x, Z_SUM_DEFAULT_TOL)?;
        let rhs = z_eta(1.0 / x, Z_SUM_DEFAULT_TOL)? / x;
        theta = theta.max((lhs - rhs).abs());
    }
    let anti_spec = spec
        .with_abs_tol(spec.abs_tol.min(1e-13))
        .with_rel_tol(spec.rel_tol.min(1e-13));
    let mut anti: f64 = 0.0;
    for a in ETA_ANTIDERIVATIVE_POINTS {
        let q = integrate_adaptive_real(eta, 0.0, a, &anti_spec)
            .into_value()?
            .re;
        anti = anti.max((q - eta_antiderivative(a)).abs());
    }
    let checks = [
        Check {
            name: "self_fourier",
            max_abs_error: fourier,
            tolerance: THRESHOLDS.eta_self_fourier,
        },
        Check {
            name: "theta_equation",
            max_abs_error: theta,
            tolerance: THRESHOLDS.eta_theta,
        },
        Check {
            name: "antiderivative",
            max_abs_error: anti,
            tolerance: THRESHOLDS.eta_antiderivative,
        },
    ];
    let mut table = Table::new(&["check", "max_abs_error", "tolerance", "pass"]);
    let mut items = Vec::new();
    for c in &checks {
        table.push(vec![
            c.name.into(),
            fmt_f64(c.max_abs_error),
            fmt_f64(c.tolerance),
            c.pass().to_string(),
        ]);
        let mut m = Map::new();
        m.insert("check".into(), c.name.into());
        m.insert("max_abs_error".into(), num(c.max_abs_error));
        m.insert("tolerance".into(), num(c.tolerance));
        m.insert("pass".into(), c.pass().into());
        items.push(Value::Object(m));
    }
    let mut body = Map::new();
    body.insert("checks".into(), Value::Array(items));
    Ok(Report {
        suite: "eta",
        pass: checks.iter().all(Check::pass),
        body,
        table,
    })
}

fn eigen_suite(ctx: &Context) -> Result<Report> {
    let p = ctx.params()?;
    let xs = ctx.xs(&GridSpec::List(EIGEN_DEFAULT_X.to_vec()))?;
    let rows = ctx
        .exec
        .try_map(&xs, |&x| -> Result<(Complex64, Complex64, f64)> {
            Ok((
                f_rho_series(x, &p)?,
                f_rho_quadrature(x, &p)?,
                eigen_residual(x, &p)?,
            ))
        })?;
    let mut table = Table::new(&[
        "x",
        "re_series",
        "im_series",
        "re_quadrature",
        "im_quadrature",
        "series_vs_quadrature",
        "eigen_residual",
    ]);
    let mut items = Vec::new();
    let (mut max_diff, mut max_res): (f64, f64) = (0.0, 0.0);
    for (&x, &(s, q, r)) in xs.iter().zip(&rows) {
        let diff = (s - q).norm();
        max_diff = max_diff.max(diff);
        max_res = max_res.max(r);
        table.push(vec![
            fmt_f64(x),
            fmt_f64(s.re),
            fmt_f64(s.im),
            fmt_f64(q.re),
            fmt_f64(q.im),
            fmt_f64(diff),
            fmt_f64(r),
        ]);
        let mut m = Map::new();
        m.insert("x".into(), num(x));
        m.insert("series".into(), complex(s));
        m.insert("quadrature".into(), complex(q));
        m.insert("series_vs_quadrature".into(), num(diff));
        m.insert("eigen_residual".into(), num(r));
        items.push(Value::Object(m));
    }
    let mut body = Map::new();
    body.insert("rows".into(), Value::Array(items));
    body.insert("max_series_vs_quadrature".into(), num(max_diff));
    body.insert("max_eigen_residual".into(), num(max_res));
    Ok(Report {
        suite: "eigen",
        pass: max_diff < THRESHOLDS.eigen_series_vs_quadrature
            && max_res < THRESHOLDS.eigen_residual,
        body,
        table,
    })
}

fn delta_suite(ctx: &Context) -> Result<Report> {
    let ls = ctx.ls(&DELTA_DEFAULT_L);
    let xs = ctx.xs(&GridSpec::List(DELTA_DEFAULT_X.to_vec()))?;
    let queries = ls
        .iter()
        .flat_map(|&l| xs.iter().map(move |&x| (l, x)))
        .map(|(l, x)| DeltaQuery::new(l, x, ctx.rho))
        .collect::<Result<Vec<_>>>()?;
    let values = ctx.exec.try_map(&queries, |q| -> Result<[Complex64; 3]> {
        Ok([
            delta_closed_a(q)?,
            delta_closed_b(q)?,
            delta_quadrature(q, &ctx.spec)?,
        ])
    })?;
    let mut table = Table::new(&[
        "l",
        "x",
        "re_a",
        "im_a",
        "re_b",
        "im_b",
        "re_quad",
        "im_quad",
        "max_disagreement",
    ]);
    let mut items = Vec::new();
    let (mut ab, mut aq): (f64, f64) = (0.0, 0.0);
    for (q, [a, b, quad]) in queries.iter().zip(values) {
        let d_ab = (a - b).norm();
        let d_aq = (a - quad).norm();
        let worst = d_ab.max(d_aq).max((b - quad).norm());
        ab = ab.max(d_ab);
        aq = aq.max(d_aq);
        table.push(vec![
            q.l.to_string(),
            fmt_f64(q.x),
            fmt_f64(a.re),
            fmt_f64(a.im),
            fmt_f64(b.re),
            fmt_f64(b.im),
            fmt_f64(quad.re),
            fmt_f64(quad.im),
            fmt_f64(worst),
        ]);
        let mut m = Map::new();
        m.insert("l".into(), q.l.into());
        m.insert("x".into(), num(q.x));
        m.insert("closed_a".into(), complex(a));
        m.insert("closed_b".into(), complex(b));
        m.insert("quadrature".into(), complex(quad));
        m.insert("max_disagreement".into(), num(worst));
        items.push(Value::Object(m));
    }
    let mut body = Map::new();
    body.insert("rows".into(), Value::Array(items));
    body.insert("max_closed_a_vs_b".into(), num(ab));
    body.insert("max_closed_a_vs_quadrature".into(), num(aq));
    Ok(Report {
        suite: "delta",
        pass: ab < THRESHOLDS.delta_closed_forms && aq < THRESHOLDS.delta_quadrature,
        body,
        table,
    })
}

fn zero_json(z: &ZetaZero) -> Value {
    let mut m = Map::new();
    m.insert("index".into(), z.index.into());
    m.insert("gamma".into(), num(z.gamma));
    m.insert("residual".into(), num(z.residual));
    m.insert(
        "certified".into(),
        (z.residual < THRESHOLDS.zero_residual).into(),
    );
    Value::Object(m)
}

/// Scans upward until `count` zeros are found.
pub fn regenerate_zeros(count: usize) -> Result<Vec<ZetaZero>> {
    let mut t_max = 20.0;
    while estimate_index(t_max) <= count + 1 {
        t_max *= 1.25;
    }
    let mut zs = scan_zeros(0.0, t_max, SCAN_STEP, REGENERATE_TOL)?;
    zs.truncate(count);
    Ok(zs)
}

fn zeros(ctx: &Context) -> Result<Report> {
    let count = ctx.config.zero_count.unwrap_or(DEFAULT_ZERO_COUNT);
    let mut body = Map::new();
    if ctx.config.regenerate {
        let zs = regenerate_zeros(count)?;
        let all_certified =
            zs.len() == count && zs.iter().all(|z| z.residual < THRESHOLDS.zero_residual);
        let mut table = Table::new(&["index", "gamma"]);
        for line in format_zeros_csv(&zs).lines().skip(1) {
            let (i, g) = line.split_once(',').expect("formatted row");
            table.push(vec![i.into(), g.into()]);
        }
        body.insert(
            "zeros".into(),
            Value::Array(zs.iter().map(zero_json).collect()),
        );
        return Ok(Report {
            suite: "zeros",
            pass: all_certified,
            body,
            table,
        });
    }

    let zs = load_zeros(count)?;
    let mut table = Table::new(&["index", "gamma", "residual", "certified"]);
    for z in &zs {
        table.push(vec![
            z.index.to_string(),
            fmt_f64(z.gamma),
            fmt_f64(z.residual),
            (z.residual < THRESHOLDS.zero_residual).to_string(),
        ]);
    }
    let certified = zs.iter().all(|z| z.residual < THRESHOLDS.zero_residual);
    let refined = refine_zero(14.0, 15.0, REGENERATE_TOL)?;
    let diff = (refined.gamma - zs[0].gamma).abs();
    let refine_pass = diff < THRESHOLDS.zero_refinement;
    let mut refinement = Map::new();
    refinement.insert("bracket".into(), list_f64(&[14.0, 15.0]));
    refinement.insert("gamma".into(), num(refined.gamma));
    refinement.insert("table_gamma".into(), num(zs[0].gamma));
    refinement.insert("difference".into(), num(diff));
    refinement.insert("tolerance".into(), num(THRESHOLDS.zero_refinement));
    refinement.insert("pass".into(), refine_pass.into());
    body.insert(
        "zeros".into(),
        Value::Array(zs.iter().map(zero_json).collect()),
    );
    body.insert("refinement".into(), Value::Object(refinement));
    Ok(Report {
        suite: "zeros",
        pass: certified && refine_pass,
        body,
        table,
    })
}

/// `true` when `xs` is strictly increasing with at least two points.
fn integrable_grid(xs: &[f64]) -> bool {
    xs.len() >= 2 && xs.windows(2).all(|w| w[0] < w[1])
}

fn reconstruct_suite(ctx: &Context) -> Result<Report> {
    let p = ctx.params()?;
    let ls = ctx.ls(&SWEEP_DEFAULT_L);
    let xs = ctx.xs(&SWEEP_DEFAULT_DOMAIN)?;
    let verify = ctx.config.verify_delta;
    // rows[x][l] = [partial, delta_a, f, delta_b]
    let rows = ctx.exec.try_map(&xs, |&x| -> Result<Vec<[Complex64; 4]>> {
        let f = f_rho_series(x, &p)?;
        ls.iter()
            .map(|&l| {
                let q = DeltaQuery::new(l, x, ctx.rho)?;
                let b = if verify {
                    delta_closed_b(&q)?
                } else {
                    Complex64::new(f64::NAN, f64::NAN)
                };
                Ok([partial_sum(l, x, &p)?, delta_closed_a(&q)?, f, b])
            })
            .collect()
    })?;

    let mut header = vec![
        "l",
        "x",
        "re_partial",
        "im_partial",
        "re_delta",
        "im_delta",
        "re_f",
        "im_f",
        "re_residual",
        "im_residual",
        "abs_residual",
    ];
    if verify {
        header.extend(["re_delta_b", "im_delta_b"]);
    }
    let mut table = Table::new(&header);
    let mut per_l = Vec::new();
    let mut norms = Vec::new();
    let mut max_ab: f64 = 0.0;
    for (j, &l) in ls.iter().enumerate() {
        let residuals: Vec<Complex64> = rows.iter().map(|r| r[j][0] - r[j][1] - r[j][2]).collect();
        for (i, &x) in xs.iter().enumerate() {
            let [s, d, f, b] = rows[i][j];
            let r = residuals[i];
            let mut row = vec![
                l.to_string(),
                fmt_f64(x),
                fmt_f64(s.re),
                fmt_f64(s.im),
                fmt_f64(d.re),
                fmt_f64(d.im),
                fmt_f64(f.re),
                fmt_f64(f.im),
                fmt_f64(r.re),
                fmt_f64(r.im),
                fmt_f64(r.norm()),
            ];
            if verify {
                max_ab = max_ab.max((d - b).norm());
                row.extend([fmt_f64(b.re), fmt_f64(b.im)]);
            }
            table.push(row);
        }
        let norm = integrable_grid(&xs).then(|| l2_norm_trapezoid(&xs, &residuals));
        norms.push(norm);
        let max_abs = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let mut m = Map::new();
        m.insert("l".into(), l.into());
        m.insert("l2_norm".into(), norm.map_or(Value::Null, num));
        m.insert("max_abs_residual".into(), num(max_abs));
        per_l.push(Value::Object(m));
    }

    let (first, last) = (
        ls.iter().enumerate().min_by_key(|p| p.1),
        ls.iter().enumerate().max_by_key(|p| p.1),
    );
    let decreasing = match (first, last) {
        (Some((i, li)), Some((j, lj))) if li != lj => match (norms[i], norms[j]) {
            (Some(a), Some(b)) => b < a,
            _ => true,
        },
        _ => true,
    };
    let pass = decreasing && (!verify || max_ab < THRESHOLDS.delta_closed_forms);

    let mut body = Map::new();
    body.insert("l_list".into(), list_u32(&ls));
    body.insert("grid".into(), list_f64(&xs));
    body.insert("norms".into(), Value::Array(per_l));
    if verify {
        body.insert("max_closed_a_vs_b".into(), num(max_ab));
    }
    Ok(Report {
        suite: "reconstruct",
        pass,
        body,
        table,
    })
}

fn rate_suite(ctx: &Context) -> Result<Report> {
    let p = ctx.params()?;
    let ls = ctx.ls(&SWEEP_DEFAULT_L);
    let xs = ctx.xs(&SWEEP_DEFAULT_DOMAIN)?;
    if !integrable_grid(&xs) {
        return Err(hp_core::Error::InvalidInput(
            "rate needs an increasing grid of at least two points".into(),
        ));
    }
    let residuals = residual_table(&ls, &xs, &p, ctx.exec)?;
    let points: Vec<(u32, f64)> = ls
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            let column: Vec<Complex64> = residuals.iter().map(|row| row[j]).collect();
            (l, l2_norm_trapezoid(&xs, &column))
        })
        .collect();
    let fit = rate_fit(&points)?;

    let mut table = Table::new(&["l", "norm"]);
    let mut items = Vec::new();
    for &(l, n) in &points {
        table.push(vec![l.to_string(), fmt_f64(n)]);
        let mut m = Map::new();
        m.insert("l".into(), l.into());
        m.insert("norm".into(), num(n));
        items.push(Value::Object(m));
    }
    let mut body = Map::new();
    body.insert("points".into(), Value::Array(items));
    body.insert("slope".into(), num(fit.slope));
    body.insert("intercept".into(), num(fit.intercept));
    body.insert("r_squared".into(), num(fit.r_squared));
    body.insert("grid".into(), list_f64(&xs));
    Ok(Report {
        suite: "rate",
        pass: fit.slope <= THRESHOLDS.rate_slope_max,
        body,
        table,
    })
}

fn all(ctx: &Context) -> Result<Report> {
    let suites = [
        Suite::EtaCheck,
        Suite::EigenCheck,
        Suite::DeltaCheck,
        Suite::Zeros,
        Suite::Reconstruct,
        Suite::Rate,
    ];
    let mut table = Table::new(&["suite", "pass"]);
    let mut items = Vec::new();
    let mut pass = true;
    for s in suites {
        let r = run(ctx, s)?;
        pass &= r.pass;
        table.push(vec![r.suite.into(), r.pass.to_string()]);
        items.push(r.to_json(&Map::new()));
    }
    let mut body = Map::new();
    body.insert("suites".into(), Value::Array(items));
    Ok(Report {
        suite: "all",
        pass,
        body,
        table,
    })
}
