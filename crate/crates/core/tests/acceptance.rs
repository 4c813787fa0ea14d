//! Acceptance suite. Runs without the libtest harness so that the
//! per-criterion lines are always printed; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hp_core::delta::{
    delta_closed_a, delta_closed_b, delta_quadrature, growth_constant, DeltaQuery,
};
use hp_core::eigen::{eigen_residual, EigenParams};
use hp_core::eta::{eta, eta_antiderivative, fourier_eta_numeric, z_eta, Z_SUM_DEFAULT_TOL};
use hp_core::exec::Exec;
use hp_core::quadrature::{integrate_adaptive_real, QuadSpec};
use hp_core::reconstruction::{decomposition_terms, l2_norm_sweep, rate_fit, residual};
use hp_core::zeros::{load_zeros, refine_zero, verify_zero};
use hp_core::{Complex64, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn zeros(n: usize) -> Result<Vec<Complex64>> {
    Ok(load_zeros(n)?.iter().map(|z| z.rho()).collect())
}

fn self_fourier() -> Result<Outcome> {
    let spec = QuadSpec::default();
    let mut worst: f64 = 0.0;
    for y in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
        worst = worst.max((fourier_eta_numeric(y, &spec)? - eta(y)).abs());
    }
    outcome(worst < 1e-8, format!("max |Fη − η| = {worst:.3e} (< 1e-8)"))
}

fn antiderivative() -> Result<Outcome> {
    let spec = QuadSpec::default().with_abs_tol(1e-13).with_rel_tol(1e-13);
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 2.0, 3.0] {
        let q = integrate_adaptive_real(eta, 0.0, a, &spec).into_value()?.re;
        worst = worst.max((q - eta_antiderivative(a)).abs());
    }
    outcome(worst < 1e-12, format!("max error = {worst:.3e} (< 1e-12)"))
}

fn theta_relation() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for x in [0.3, 0.5, 0.8, 1.0, 1.7, 3.0] {
        let lhs = z_eta(x, Z_SUM_DEFAULT_TOL)?;
        let rhs = z_eta(1.0 / x, Z_SUM_DEFAULT_TOL)? / x;
        worst = worst.max((lhs - rhs).abs());
    }
    outcome(
        worst < 1e-10,
        format!("max |Zη(x) − Zη(1/x)/x| = {worst:.3e} (< 1e-10)"),
    )
}

fn delta_agreement() -> Result<Outcome> {
    let spec = QuadSpec::default();
    let (mut ab, mut aq): (f64, f64) = (0.0, 0.0);
    for rho in zeros(2)? {
        for l in [1, 2, 5, 10, 20] {
            for x in [0.5, 1.0, 2.0] {
                let q = DeltaQuery::new(l, x, rho)?;
                let a = delta_closed_a(&q)?;
                ab = ab.max((a - delta_closed_b(&q)?).norm());
                aq = aq.max((a - delta_quadrature(&q, &spec)?).norm());
            }
        }
    }
    outcome(
        ab < 1e-9 && aq < 1e-6,
        format!("max |A−B| = {ab:.3e} (< 1e-9), max |A−quad| = {aq:.3e} (< 1e-6)"),
    )
}

fn eigen_equation() -> Result<Outcome> {
    let mut rhos = zeros(3)?;
    rhos.push(Complex64::new(0.3, 5.0));
    let mut worst: f64 = 0.0;
    for rho in rhos {
        let p = EigenParams::new(rho)?;
        for x in [0.3, 0.7, 1.0, 2.0, 5.0] {
            worst = worst.max(eigen_residual(x, &p)?);
        }
    }
    outcome(worst < 1e-6, format!("max residual = {worst:.3e} (< 1e-6)"))
}

fn decomposition() -> Result<Outcome> {
    let p = EigenParams::new(zeros(1)?[0])?;
    let spec = QuadSpec::default();
    let mut worst: f64 = 0.0;
    for (l, x) in [(3, 1.0), (8, 0.7)] {
        let terms = decomposition_terms(l, x, &p, &spec)?;
        worst = worst.max((terms.combined() - residual(l, x, &p)?).norm());
    }
    outcome(
        worst < 1e-6,
        format!("max |I1 − I2 + I3 − residual| = {worst:.3e} (< 1e-6)"),
    )
}

fn pointwise_convergence() -> Result<Outcome> {
    let p = EigenParams::new(zeros(1)?[0])?;
    let ls = [2u32, 4, 8, 16, 32, 64];
    let mut pass = true;
    let mut parts = Vec::new();
    for x in [0.5, 1.0, 2.0] {
        let points = ls
            .iter()
            .map(|&l| Ok((l, residual(l, x, &p)?.norm())))
            .collect::<Result<Vec<_>>>()?;
        let factor = points[0].1 / points[ls.len() - 1].1;
        let slope = rate_fit(&points)?.slope;
        pass &= factor >= 8.0 && slope <= -0.8;
        parts.push(format!("x={x}: factor {factor:.1}, slope {slope:.3}"));
    }
    outcome(
        pass,
        format!("{} (factor ≥ 8, slope ≤ −0.8)", parts.join("; ")),
    )
}

fn l2_rate() -> Result<Outcome> {
    let p = EigenParams::new(zeros(1)?[0])?;
    let points = l2_norm_sweep(&[2, 4, 8, 16, 32], &p, 0.1, 10.0, 64, Exec::default())?;
    let fit = rate_fit(&points)?;
    outcome(
        fit.slope <= -0.9 && fit.r_squared >= 0.98,
        format!(
            "slope {:.4} (≤ −0.9), r² {:.5} (≥ 0.98)",
            fit.slope, fit.r_squared
        ),
    )
}

fn counterterm_growth() -> Result<Outcome> {
    let rho = zeros(1)?[0];
    let c = growth_constant(1.0, rho);
    let d = delta_closed_a(&DeltaQuery::new(400, 1.0, rho)?)?;
    let rel = (d.norm() * 400.5f64.powf(-0.5) / c - 1.0).abs();
    outcome(
        rel < 1e-6,
        format!("relative deviation at l = 400: {rel:.3e} (< 1e-6)"),
    )
}

fn zero_certification() -> Result<Outcome> {
    let table = load_zeros(10)?;
    let certified = table.iter().filter(|z| verify_zero(z, 1e-8)).count();
    let refined = refine_zero(14.0, 15.0, 1e-12)?;
    let diff = (refined.gamma - table[0].gamma).abs();
    outcome(
        certified == 10 && diff < 1e-9,
        format!("{certified}/10 zeros certified, |γ₁ refined − table| = {diff:.3e} (< 1e-9)"),
    )
}

type Check = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Check, u64); 10] = [
        ("self-Fourier kernel", self_fourier, 5),
        ("antiderivative identity", antiderivative, 1),
        ("theta functional equation", theta_relation, 1),
        ("three-way delta agreement", delta_agreement, 30),
        ("eigen-equation", eigen_equation, 60),
        ("residual decomposition", decomposition, 60),
        ("pointwise convergence", pointwise_convergence, 120),
        ("L2 convergence rate", l2_rate, 180),
        ("counterterm growth", counterterm_growth, 5),
        ("zero certification", zero_certification, 10),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} [{}] {}: {} [{:.2}s, limit {}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            name,
            detail,
            elapsed.as_secs_f64(),
            limit
        );
    }
    if failures == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {failures} of {} criteria failed",
            criteria.len()
        );
        ExitCode::FAILURE
    }
}
