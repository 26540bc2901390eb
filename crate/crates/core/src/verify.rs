//! Numerical checks of every transformation law, limit and integral identity
//! behind `ϑ` and `θ̃`. Each check compares two independent evaluation paths
//! and returns a [`VerificationReport`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::eisenstein::{
    c, c0, c_tilde, c_tilde0, eval_vartheta, eval_vartheta_tilde, harmonic_expansion, q_expansion,
    required_m_max, vartheta, vartheta_tilde, xi_expansion,
};
use crate::error::{invalid, Error, Result};
use crate::kernel::{
    c_minus1, theta, theta_h, theta_tilde, theta_tilde_h_with_sign, theta_tilde_shifted,
    FramePoint, KernelSign, ShiftPair,
};
use crate::lattice::{CosetIndex, LatticeContext};
use crate::phase::{e_real, sgn, unit_root};
use crate::quadrature::{integrate_points, PanelRule, QuadConfig};
use crate::schwartz::{
    d_function, ft2d, ft_phi_star, ft_plus_last_term, ft_plus_last_term_quadrature, phi_star,
    phi_tilde, xi_numeric, ErfcNormalization, Ft2dConfig, ModularPoint, SplitPoint,
};
use crate::special::{erfc_real, gamma0, log_gamma, rational_to_f64};
use crate::weil::{rho_dual, rho_s, rho_t, VectorValuedData, WeilMatrix};

/// Truncation tolerance for every kernel and series evaluated inside a check.
const INNER_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub inputs: Value,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// `passed` is `residual ≤ tolerance`; a NaN residual fails.
    pub fn new(check: impl Into<String>, inputs: Value, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            inputs,
            residual,
            tolerance,
            passed: residual <= tolerance,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

/// Fixed-width table, one row per report, followed by a pass count.
pub fn render_table(reports: &[VerificationReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.check.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>11}  {:>9}  status  inputs",
        "check", "residual", "tol"
    );
    for r in reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<width$}  {:>11.3e}  {:>9.1e}  {:<6}  {}",
            r.check, r.residual, r.tolerance, status, r.inputs
        );
        for n in &r.notes {
            let _ = writeln!(out, "{:<width$}    note: {n}", "");
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} passed", reports.len());
    out
}

fn tau_json(tau: &ModularPoint) -> Value {
    json!([tau.u(), tau.v()])
}

fn max_norm(values: impl IntoIterator<Item = Complex64>) -> f64 {
    values.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// Weil representation

/// `S⁴ = 1`, `(ST)³ = S²`, `S²𝔢_h = 𝔢_{−h}`, and unitarity of `S` and `T`.
pub fn check_weil_relations(ctx: &LatticeContext, tol: f64) -> Result<VerificationReport> {
    let s = rho_s(ctx);
    let t = rho_t(ctx);
    let id = WeilMatrix::identity(ctx);
    let s2 = s.mul(&s)?;
    let st = s.mul(&t)?;
    let r_s4 = s2.mul(&s2)?.max_distance(&id);
    let r_braid = st.pow(3).max_distance(&s2);
    let mut r_neg: f64 = 0.0;
    for h in ctx.cosets() {
        let image = s2.apply(&VectorValuedData::basis(ctx, h))?;
        r_neg = r_neg.max(image.max_distance(&VectorValuedData::basis(ctx, ctx.negate(h))));
    }
    let r_unit = s.unitarity_defect().max(t.unitarity_defect());
    let residual = r_s4.max(r_braid).max(r_neg).max(r_unit);
    Ok(VerificationReport::new("weil-relations", json!({"N": ctx.level()}), residual, tol).with_note(
        format!("S^4 {r_s4:.1e}, (ST)^3=S^2 {r_braid:.1e}, S^2=negation {r_neg:.1e}, unitarity {r_unit:.1e}"),
    ))
}

// Coefficients

/// Divisor enumeration against a plain scan of the box `|x1|, |x2| ≤ m`.
pub fn check_coefficient_oracle(
    ctx: &LatticeContext,
    m_max: i64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut worst: f64 = 0.0;
    let mut integer_mismatches = 0usize;
    for h in ctx.cosets() {
        for m in 1..=m_max {
            let (mut count, mut logs) = (0i64, 0.0f64);
            for x1 in -m..=m {
                for x2 in -m..=m {
                    if ctx.coset(x1, x2) != h {
                        continue;
                    }
                    if x1 * x2 == m {
                        count += x1.signum();
                    } else if x1 * x2 == -m {
                        logs +=
                            x1.signum() as f64 * ((x1.abs() as f64).ln() - (x2.abs() as f64).ln());
                    }
                }
            }
            if c(ctx, h, m)? != count {
                integer_mismatches += 1;
            }
            worst = worst.max((c_tilde(ctx, h, m)? - logs).abs());
        }
    }
    let residual = if integer_mismatches > 0 {
        f64::INFINITY
    } else {
        worst
    };
    Ok(VerificationReport::new(
        "coefficient-oracle",
        json!({"N": ctx.level(), "m_max": m_max}),
        residual,
        tol,
    )
    .with_note(format!(
        "{integer_mismatches} integer mismatches, log residual {worst:.1e}"
    )))
}

/// At level one every coefficient and every value of `ϑ` and `θ̃` is exactly zero.
pub fn check_level_one_vanishing(m_max: i64) -> Result<VerificationReport> {
    let ctx = LatticeContext::new(1)?;
    let h = ctx.coset(0, 0);
    let mut residual: f64 = rational_to_f64(c0(&ctx, h)).abs() + c_tilde0(&ctx, h)?.abs();
    for m in 1..=m_max {
        residual += (c(&ctx, h, m)? as f64).abs() + c_tilde(&ctx, h, m)?.abs();
    }
    for tau in [ModularPoint::i(), ModularPoint::new(0.3, 0.7)?] {
        residual += vartheta(&ctx, &tau, 1e-12)?.components.max_norm();
        residual += vartheta_tilde(&ctx, &tau, 1e-12)?.components.max_norm();
    }
    Ok(VerificationReport::new(
        "level-one-vanishing",
        json!({"m_max": m_max}),
        residual,
        0.0,
    ))
}

/// `xi_expansion ∘ harmonic_expansion = q_expansion`, compared exactly.
pub fn check_xi_expansion(ctx: &LatticeContext, m_max: i64) -> Result<VerificationReport> {
    let mismatches = ctx
        .cosets()
        .map(|h| {
            Ok(xi_expansion(&harmonic_expansion(ctx, h, m_max)?) != q_expansion(ctx, h, m_max)?)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok(VerificationReport::new(
        "xi-expansion",
        json!({"N": ctx.level(), "m_max": m_max}),
        mismatches as f64,
        0.0,
    ))
}

// Kernels

/// `Θ(τ+1, t) = ρ(T)Θ(τ, t)` and `Θ(−1/τ, t) = τρ(S)Θ(τ, t)`.
pub fn check_theta_modularity(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
) -> Result<VerificationReport> {
    let base = theta(ctx, tau, t, INNER_TOL)?.components;
    let shifted = theta(ctx, &tau.t_image(), t, INNER_TOL)?.components;
    let inverted = theta(ctx, &tau.s_image(), t, INNER_TOL)?.components;
    let r_t = shifted.max_distance(&rho_t(ctx).apply(&base)?);
    let r_s = inverted.max_distance(&rho_s(ctx).apply(&base)?.scale(tau.tau()));
    Ok(VerificationReport::new(
        "theta-modularity",
        json!({"N": ctx.level(), "tau": tau_json(tau), "t": t.t()}),
        r_t.max(r_s),
        tol,
    )
    .with_note(format!("T {r_t:.1e}, S {r_s:.1e}")))
}

fn theta_tilde_s_residual(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    sign: KernelSign,
) -> Result<(f64, f64)> {
    let base = theta_tilde(ctx, tau, t, INNER_TOL, sign)?.components;
    let shifted = theta_tilde(ctx, &tau.t_image(), t, INNER_TOL, sign)?.components;
    let inverted = theta_tilde(ctx, &tau.s_image(), t, INNER_TOL, sign)?.components;
    let r_t = shifted.max_distance(&rho_dual(&rho_t(ctx)).apply(&base)?);
    let r_s = inverted.max_distance(&rho_dual(&rho_s(ctx)).apply(&base)?.scale(tau.tau()));
    Ok((r_t, r_s))
}

/// Poisson summation for the shifted kernel at `(ε, −ε)`, the `c_{−1}` averaging
/// identity, and the `T`/`S` laws of the completed kernel under the dual representation.
pub fn check_theta_tilde_modularity(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    eps: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let n = ctx.level_f64();
    let shift = ShiftPair::new(eps, -eps)?;
    let swapped = ShiftPair::new(-shift.eps_prime(), shift.eps())?;
    let lhs = theta_tilde_shifted(ctx, &tau.s_image(), t, shift, INNER_TOL)?
        .components
        .scale(tau.tau().inv());
    let rhs_parts = theta_tilde_shifted(ctx, tau, t, swapped, INNER_TOL)?.components;
    let phase = e_real(2.0 * shift.eps() * shift.eps_prime() / n) / n;
    let rhs = VectorValuedData::from_fn(ctx, |h| {
        let sum: Complex64 = ctx
            .cosets()
            .map(|d| unit_root(ctx.pairing_residue(d, h), ctx.level_i64()) * rhs_parts.get(d))
            .sum();
        phase * sum
    });
    let r_poisson = lhs.max_distance(&rhs);

    let r_avg = max_norm(ctx.cosets().map(|h| {
        let avg: Complex64 = ctx
            .cosets()
            .map(|d| {
                unit_root(ctx.pairing_residue(d, h), ctx.level_i64()) * f64::from(c_minus1(ctx, d))
            })
            .sum::<Complex64>()
            / n;
        avg - f64::from(c_minus1(ctx, h))
    }));

    let (r_t, r_s) = theta_tilde_s_residual(ctx, tau, t, KernelSign::Minus)?;
    let (_, r_s_plus) = theta_tilde_s_residual(ctx, tau, t, KernelSign::Plus)?;
    let residual = r_poisson.max(r_avg).max(r_t).max(r_s);
    Ok(VerificationReport::new(
        "theta-tilde-modularity",
        json!({"N": ctx.level(), "tau": tau_json(tau), "t": t.t(), "eps": eps}),
        residual,
        tol,
    )
    .with_note(format!(
        "Poisson {r_poisson:.1e}, c_-1 average {r_avg:.1e}, T {r_t:.1e}, S {r_s:.1e}"
    ))
    .with_note(format!("S residual with +Θ* variant: {r_s_plus:.1e}")))
}

/// Finite-difference `ξ₁` of `τ ↦ Θ̃(τ, t)` compared with `Θ(τ, t)`.
pub fn xi_kernel_residual(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    step: f64,
    sign: KernelSign,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for h in ctx.cosets() {
        let xi = xi_numeric(
            |p| Ok(theta_tilde_h_with_sign(ctx, h, p, t, INNER_TOL, sign)?.value),
            1.0,
            tau,
            step,
        )?;
        let target = theta_h(ctx, h, tau, t, INNER_TOL)?.value;
        worst = worst.max((xi - target).norm());
    }
    Ok(worst)
}

pub fn check_xi_kernel(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    step: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let residual = xi_kernel_residual(ctx, tau, t, step, KernelSign::Minus)?;
    Ok(VerificationReport::new(
        "xi-kernel",
        json!({"N": ctx.level(), "tau": tau_json(tau), "t": t.t(), "step": step}),
        residual,
        tol,
    ))
}

/// Evaluates both readings of the completed kernel against `ξΘ̃ = Θ` and the `S`-law.
pub fn check_kernel_sign(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
) -> Result<VerificationReport> {
    let mut residuals = BTreeMap::new();
    for (name, sign) in [("minus", KernelSign::Minus), ("plus", KernelSign::Plus)] {
        let xi = xi_kernel_residual(ctx, tau, t, 1e-4, sign)?;
        let (_, s) = theta_tilde_s_residual(ctx, tau, t, sign)?;
        residuals.insert(name, xi.max(s));
    }
    let chosen = residuals["minus"];
    let verdict = if residuals["plus"] > tol {
        "rejected"
    } else {
        "also passes"
    };
    Ok(VerificationReport::new(
        "kernel-sign",
        json!({"N": ctx.level(), "tau": tau_json(tau), "t": t.t()}),
        chosen,
        tol,
    )
    .with_note(format!(
        "selected c0 + Θ⁺ − Θ* (residual {chosen:.1e}); c0 + Θ⁺ + Θ* {verdict} (residual {:.1e})",
        residuals["plus"]
    )))
}

/// Least-squares slope of `log r` against `log ε`.
fn loglog_slope(eps: &[f64], r: &[f64]) -> f64 {
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = r.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Distance of the pole-subtracted shifted kernel from the completed kernel, for `ε′ = ±ε`.
pub fn epsilon_limit_errors(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    eps: &[f64],
    plus: bool,
) -> Result<Vec<f64>> {
    let limit = theta_tilde(ctx, tau, t, INNER_TOL, KernelSign::Minus)?.components;
    let sign = if plus { 1.0 } else { -1.0 };
    eps.iter()
        .map(|&e| {
            let shifted =
                theta_tilde_shifted(ctx, tau, t, ShiftPair::new(e, sign * e)?, INNER_TOL)?
                    .components;
            let pole = Complex64::new(0.0, 2.0 * PI) * (tau.tau() - sign) * e;
            let corrected = VectorValuedData::from_fn(ctx, |h| {
                shifted.get(h) - f64::from(c_minus1(ctx, h)) / pole
            });
            Ok(corrected.max_distance(&limit))
        })
        .collect()
}

/// Empirical convergence order of the ε-limit; residual is `1 − order`.
pub fn check_epsilon_limit(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    eps: &[f64],
    min_order: f64,
) -> Result<VerificationReport> {
    if eps.len() < 2 {
        return invalid("need at least two shifts to estimate an order");
    }
    let mut orders = Vec::new();
    let mut notes = Vec::new();
    for plus in [true, false] {
        let errs = epsilon_limit_errors(ctx, tau, t, eps, plus)?;
        // already at rounding level: nothing left to converge
        let order = if errs.iter().all(|&r| r < 1e-12) {
            f64::INFINITY
        } else {
            loglog_slope(eps, &errs)
        };
        notes.push(format!(
            "ε′ = {}ε: errors {:?}, order {order:.3}",
            if plus { "+" } else { "−" },
            errs.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>()
        ));
        orders.push(order);
    }
    let order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let mut report = VerificationReport::new(
        "epsilon-limit",
        json!({"N": ctx.level(), "tau": tau_json(tau), "t": t.t(), "eps": eps}),
        (1.0 - order).max(0.0),
        1.0 - min_order,
    );
    report.notes = notes;
    Ok(report)
}

// Series

/// `ξ₁θ̃_h = ϑ_h` by central differences on the evaluated series.
pub fn check_xi_series(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    step: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let m_max = required_m_max(ctx, tau.v() - step, 1e-15)?;
    let mut worst: f64 = 0.0;
    for h in ctx.cosets() {
        let hx = harmonic_expansion(ctx, h, m_max)?;
        let q = q_expansion(ctx, h, m_max)?;
        let xi = xi_numeric(
            |p| Ok(eval_vartheta_tilde(&hx, p, 1e-12)?.value),
            1.0,
            tau,
            step,
        )?;
        worst = worst.max((xi - eval_vartheta(&q, tau, 1e-12)?.value).norm());
    }
    Ok(VerificationReport::new(
        "xi-series",
        json!({"N": ctx.level(), "tau": tau_json(tau), "step": step}),
        worst,
        tol,
    ))
}

/// `Δ₁θ̃ = −ξ₁ξ₁θ̃` by nested central differences.
pub fn check_harmonicity(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    tol: f64,
) -> Result<VerificationReport> {
    let step = 1e-3;
    let m_max = required_m_max(ctx, tau.v() - 2.0 * step, 1e-15)?;
    let mut worst: f64 = 0.0;
    for h in ctx.cosets() {
        let hx = harmonic_expansion(ctx, h, m_max)?;
        let inner = |p: &ModularPoint| {
            xi_numeric(
                |q| Ok(eval_vartheta_tilde(&hx, q, 1e-12)?.value),
                1.0,
                p,
                step,
            )
        };
        let outer = xi_numeric(inner, 1.0, tau, step)?;
        worst = worst.max(outer.norm());
    }
    Ok(VerificationReport::new(
        "harmonicity",
        json!({"N": ctx.level(), "tau": tau_json(tau), "step": step}),
        worst,
        tol,
    ))
}

/// `T`/`S` laws of `ϑ` under `ρ` and of `θ̃` under the dual representation.
pub fn check_vartheta_modularity(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    tol: f64,
) -> Result<VerificationReport> {
    let inner = 1e-13;
    let img_t = tau.t_image();
    let img_s = tau.s_image();
    let t = rho_t(ctx);
    let s = rho_s(ctx);
    let (td, sd) = (rho_dual(&t), rho_dual(&s));

    let base = vartheta(ctx, tau, inner)?.components;
    let r_t = vartheta(ctx, &img_t, inner)?
        .components
        .max_distance(&t.apply(&base)?);
    let r_s = vartheta(ctx, &img_s, inner)?
        .components
        .max_distance(&s.apply(&base)?.scale(tau.tau()));

    let base_h = vartheta_tilde(ctx, tau, inner)?.components;
    let rh_t = vartheta_tilde(ctx, &img_t, inner)?
        .components
        .max_distance(&td.apply(&base_h)?);
    let rh_s = vartheta_tilde(ctx, &img_s, inner)?
        .components
        .max_distance(&sd.apply(&base_h)?.scale(tau.tau()));
    let residual = r_t.max(r_s).max(rh_t).max(rh_s);
    Ok(VerificationReport::new(
        "series-modularity",
        json!({"N": ctx.level(), "tau": tau_json(tau)}),
        residual,
        tol,
    )
    .with_note(format!(
        "ϑ: T {r_t:.1e}, S {r_s:.1e}; θ̃: T {rh_t:.1e}, S {rh_s:.1e}"
    )))
}

// Integral identities

fn quad_cfg() -> QuadConfig {
    QuadConfig::with_tol(1e-15, 1e-13)
}

/// General closed form of `∫_0^∞ sgn(x1/t + t·x2) min(t, 1/t)^s dt/t` for `x1·x2 < 0`, times `sgn(x1)`:
/// `2(r^{−s} − 1)/s` if `r = |x2/x1|^{1/2} ≥ 1`, else `2(1 − r^s)/s`.
pub fn i_plus_closed_form(x1: f64, x2: f64, s: f64) -> f64 {
    let r = (x2 / x1).abs().sqrt();
    if r >= 1.0 {
        2.0 * (r.powf(-s) - 1.0) / s
    } else {
        2.0 * (1.0 - r.powf(s)) / s
    }
}

/// `Σ sgn(x1/t + t·x2) min(t,1/t)^s dt/t` by quadrature in `σ = log t`, times `sgn(x1)`.
fn i_plus_quadrature(x1: f64, x2: f64, s: f64) -> Result<f64> {
    let reach = 45.0 / s;
    let flip = 0.5 * (x1 / x2).abs().ln();
    let mut pts = vec![-reach, 0.0, reach];
    if flip != 0.0 {
        pts.push(flip);
    }
    pts.sort_by(f64::total_cmp);
    let est = integrate_points(
        |sig: f64| {
            let t = sig.exp();
            sgn(x1 / t + t * x2) * (-s * sig.abs()).exp()
        },
        &pts,
        &QuadConfig::with_tol(1e-10, 1e-11),
    )?;
    Ok(sgn(x1) * est.value)
}

/// Quadrature-versus-closed-form residuals of the integral identities used in the proofs.
pub fn check_proof_integrals(tol: f64) -> Result<Vec<VerificationReport>> {
    let cfg = quad_cfg();
    let mut reports = Vec::new();

    // e^{−2πy} = √y ∫ e^{−πy(t²+t⁻²)}(t + 1/t) dt/t, with t = e^σ
    let mut worst: f64 = 0.0;
    for y in [0.5, 1.0, 2.0] {
        let est = integrate_points(
            |sig: f64| (-2.0 * PI * y * (2.0 * sig).cosh()).exp() * 2.0 * sig.cosh(),
            &[-6.0, 0.0, 6.0],
            &cfg,
        )?;
        worst = worst.max((y.sqrt() * est.value - (-2.0 * PI * y).exp()).abs());
    }
    reports.push(VerificationReport::new(
        "integral-bessel",
        json!({"y": [0.5, 1.0, 2.0]}),
        worst,
        tol,
    ));

    // ∫ erfc(α(w + 1/w)) dw/w = Γ(0, 4α²)
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0, 2.0] {
        let est = integrate_points(
            |sig: f64| erfc_real(2.0 * alpha * sig.cosh()),
            &[-8.0, 0.0, 8.0],
            &cfg,
        )?;
        worst = worst.max((est.value - gamma0(4.0 * alpha * alpha)?).abs());
    }
    reports.push(VerificationReport::new(
        "integral-erfc",
        json!({"alpha": [0.5, 1.0, 2.0]}),
        worst,
        tol,
    ));

    // ∫ sgn(w − 1/w) erfc(α|w − 1/w|) e^{−β(w+1/w)} dw/w = 0: the halves w < 1 and w > 1 cancel
    let mut worst: f64 = 0.0;
    for (alpha, beta) in [(0.5, 0.3), (1.0, 1.0), (2.0, 0.1)] {
        let g = |w: f64| erfc_real(alpha * (w - 1.0 / w).abs()) * (-beta * (w + 1.0 / w)).exp() / w;
        let below = integrate_points(g, &[1e-300, 1e-6, 0.1, 0.5, 1.0], &cfg)?.value;
        let above = integrate_points(g, &[1.0, 2.0, 10.0, 1e6], &cfg)?.value;
        worst = worst.max((above - below).abs());
    }
    reports.push(VerificationReport::new(
        "integral-erfc-odd",
        json!({"alpha": [0.5, 1.0, 2.0]}),
        worst,
        tol,
    ));

    // Mellin: ∫_0^∞ t^s e^{−πyt²} dt/t = Γ(s/2)(πy)^{−s/2}/2
    let mut worst: f64 = 0.0;
    for (s, y) in [(0.5, 1.0), (1.0, 2.0), (1.5, 0.5), (3.0, 1.0)] {
        let est = integrate_points(
            |sig: f64| (s * sig - PI * y * (2.0 * sig).exp()).exp(),
            &[-80.0, 0.0, 6.0],
            &cfg,
        )?;
        let closed = (log_gamma(s / 2.0)? - 0.5 * s * (PI * y).ln()).exp() / 2.0;
        worst = worst.max((est.value - closed).abs());
    }
    reports.push(VerificationReport::new(
        "integral-mellin",
        json!({"s": [0.5, 1.0, 1.5, 3.0]}),
        worst,
        tol,
    ));

    // last term of the transform of φ⁺
    let mut worst: f64 = 0.0;
    for tau in [ModularPoint::i(), ModularPoint::new(0.3, 0.8)?] {
        for (xr, yr) in [(0.5, 0.3), (-0.4, -0.7), (0.6, -0.2), (1.2, 0.9)] {
            let closed = ft_plus_last_term(&tau, xr, yr)?;
            let quad =
                ft_plus_last_term_quadrature(&tau, xr, yr, &QuadConfig::with_tol(1e-13, 1e-11))?;
            worst = worst.max((closed - quad).norm());
        }
    }
    reports.push(VerificationReport::new(
        "integral-ft-last-term",
        json!({"tau": [[0.0, 1.0], [0.3, 0.8]]}),
        worst,
        tol,
    ));

    // I⁺: the printed 2(r^{−s} − 1)/s is the r ≥ 1 branch of the general closed form
    let mut worst: f64 = 0.0;
    let mut literal_worst: f64 = 0.0;
    let vectors = [
        (1.0, -3.0),
        (-3.0, 1.0),
        (2.0, -5.0),
        (-7.0, 2.0),
        (4.0, -4.0),
    ];
    for &(x1, x2) in &vectors {
        for s in [0.5, 0.1, 0.01] {
            let quad = i_plus_quadrature(x1, x2, s)?;
            worst = worst.max((quad - i_plus_closed_form(x1, x2, s)).abs());
            let r = (x2 / x1).abs().sqrt();
            literal_worst = literal_worst.max((quad - 2.0 * (r.powf(-s) - 1.0) / s).abs());
        }
    }
    reports.push(
        VerificationReport::new(
            "integral-i-plus",
            json!({"s": [0.5, 0.1, 0.01]}),
            worst,
            tol,
        )
        .with_note(format!(
            "literal 2(r^-s - 1)/s for all r: residual {literal_worst:.1e}"
        )),
    );

    // s → 0: sgn(x1)·log|x1/x2| with an O(s) gap
    let mut worst: f64 = 0.0;
    let s = 1e-3;
    for &(x1, x2) in &vectors {
        let quad = i_plus_quadrature(x1, x2, s)?;
        let log = (x1 / x2).abs().ln();
        let bound = s * 0.25 * log * log * 1.01 + tol;
        worst = worst.max((quad - log).abs() / bound);
    }
    reports.push(VerificationReport::new(
        "integral-i-plus-limit",
        json!({"s": s}),
        worst,
        1.0,
    ));

    Ok(reports)
}

// Constant-term oracle

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Constant term of the regularized integral at `s = 0`.
    pub value: Complex64,
    /// Residue of the `1/s` pole, `lim_{t→0} + lim_{t→∞}` of the integrand.
    pub pole: Complex64,
    pub half_width: f64,
    pub condition: f64,
    pub quadrature_error: f64,
}

/// Inverse of a 3×3 matrix by cofactors.
fn invert3(m: [[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let c = |r: usize, k: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
        m[r1][k1] * m[r2][k2] - m[r1][k2] * m[r2][k1]
    };
    let det = m[0][0] * c(0, 0) + m[0][1] * c(0, 1) + m[0][2] * c(0, 2);
    // below this the cofactors are rounding noise
    if !det.is_finite() || det.abs() <= 1e-13 * norm1(&m).powi(3) {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for (r, row) in inv.iter_mut().enumerate() {
        for (k, x) in row.iter_mut().enumerate() {
            *x = c(k, r) / det;
        }
    }
    Some(inv)
}

fn norm1(m: &[[f64; 3]; 3]) -> f64 {
    (0..3)
        .map(|k| (0..3).map(|r| m[r][k].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Least-squares `a + b·s + c·s²` through the samples; returns `a` and the condition number.
fn quadratic_intercept(s: &[f64], y: &[Complex64]) -> Result<(Complex64, f64)> {
    let scale = s.iter().copied().fold(0.0, f64::max);
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [Complex64::zero(); 3];
    for (&si, &yi) in s.iter().zip(y) {
        let x = si / scale;
        let row = [1.0, x, x * x];
        for r in 0..3 {
            for k in 0..3 {
                ata[r][k] += row[r] * row[k];
            }
            aty[r] += row[r] * yi;
        }
    }
    let inv = invert3(ata).ok_or(Error::IllConditioned(f64::INFINITY))?;
    let condition = norm1(&ata) * norm1(&inv);
    if condition > 1e10 {
        return Err(Error::IllConditioned(condition));
    }
    let a = (0..3).map(|k| inv[0][k] * aty[k]).sum();
    Ok((a, condition))
}

fn panel_sum(
    f: &mut impl FnMut(f64) -> Result<Complex64>,
    cache: &mut BTreeMap<u64, Complex64>,
    rule: &PanelRule,
    s: f64,
) -> Result<Complex64> {
    let mut failure = None;
    let value = rule.apply(|sig: f64| {
        let key = sig.to_bits();
        let fv = match cache.get(&key) {
            Some(&v) => v,
            None => match f(sig) {
                Ok(v) => {
                    cache.insert(key, v);
                    v
                }
                Err(err) => {
                    failure.get_or_insert(err);
                    Complex64::zero()
                }
            },
        };
        fv * (-s * sig.abs()).exp()
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(value),
    }
}

/// Constant term at `s = 0` of `∫_R f(σ) e^{−s|σ|} dσ` for `f` with finite limits at `±∞`.
///
/// The window `[−S, S]` grows until both end values settle; outside it `f` is
/// replaced by its end values, which contribute `(L₀ + L∞)e^{−sS}/s`. The pole
/// `(L₀ + L∞)/s` is removed and the remainder is fitted by a quadratic in `s`.
pub fn regularized_constant(
    mut f: impl FnMut(f64) -> Result<Complex64>,
    s_grid: &[f64],
) -> Result<OracleResult> {
    if s_grid.len() < 3
        || s_grid.windows(2).any(|w| w[1] >= w[0])
        || s_grid.iter().any(|&s| !(s > 0.0 && s <= 1.0))
    {
        return invalid("s-grid must have at least 3 strictly decreasing values in (0, 1]");
    }
    let settle = 1e-12;
    let mut half = 4.0;
    let (mut lo, mut hi) = (f(-half)?, f(half)?);
    loop {
        let next = half + 2.0;
        let (lo2, hi2) = (f(-next)?, f(next)?);
        let moved = (lo2 - lo).norm().max((hi2 - hi).norm());
        half = next;
        lo = lo2;
        hi = hi2;
        if moved < settle {
            break;
        }
        if half >= 20.0 {
            return Err(Error::Quadrature {
                estimate: moved,
                tol: settle,
            });
        }
    }
    let pole = lo + hi;
    let mut cache = BTreeMap::new();
    let mut fitted = Vec::new();
    for width in [0.25, 0.125] {
        let rule = PanelRule::new(&[-half, 0.0, half], width, 16);
        let mut values = Vec::with_capacity(s_grid.len());
        for &s in s_grid {
            let q = panel_sum(&mut f, &mut cache, &rule, s)?;
            values.push(q + pole * ((-s * half).exp() - 1.0) / s);
        }
        fitted.push(quadratic_intercept(s_grid, &values)?);
    }
    let (value, condition) = fitted[1];
    let quadrature_error = (fitted[1].0 - fitted[0].0).norm();
    if quadrature_error > 1e-8 {
        return Err(Error::Quadrature {
            estimate: quadrature_error,
            tol: 1e-8,
        });
    }
    Ok(OracleResult {
        value,
        pole,
        half_width: half,
        condition,
        quadrature_error,
    })
}

pub const DEFAULT_S_GRID: [f64; 4] = [0.02, 0.015, 0.01, 0.005];

/// Regularized `∫ Θ̃_h(τ, t) dt/t` with the split weight `min(t, 1/t)^s`.
pub fn constant_term_oracle(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    s_grid: &[f64],
    sign: KernelSign,
) -> Result<OracleResult> {
    regularized_constant(
        |sig| {
            Ok(
                theta_tilde_h_with_sign(
                    ctx,
                    h,
                    tau,
                    &FramePoint::new(sig.exp())?,
                    INNER_TOL,
                    sign,
                )?
                .value,
            )
        },
        s_grid,
    )
}

/// `∫ Θ_h(τ, t) dt/t`, which needs no regularization.
pub fn vartheta_oracle(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    s_grid: &[f64],
) -> Result<OracleResult> {
    regularized_constant(
        |sig| Ok(theta_h(ctx, h, tau, &FramePoint::new(sig.exp())?, INNER_TOL)?.value),
        s_grid,
    )
}

/// The oracle against the series value of `θ̃_h`, with both kernel sign readings.
pub fn check_constant_term(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    tol: f64,
) -> Result<VerificationReport> {
    let series = eval_vartheta_tilde(
        &harmonic_expansion(ctx, h, required_m_max(ctx, tau.v(), 1e-14)?)?,
        tau,
        1e-14,
    )?;
    let minus = constant_term_oracle(ctx, h, tau, &DEFAULT_S_GRID, KernelSign::Minus)?;
    let plus = constant_term_oracle(ctx, h, tau, &DEFAULT_S_GRID, KernelSign::Plus)?;
    let residual = (minus.value - series.value).norm();
    Ok(VerificationReport::new(
        "constant-term-oracle",
        json!({"N": ctx.level(), "h": [h.h1(), h.h2()], "tau": tau_json(tau), "s_grid": DEFAULT_S_GRID}),
        residual,
        tol,
    )
    .with_note(format!(
        "oracle {:.12}, series {:.12}, window ±{}, condition {:.1e}",
        minus.value.re, series.value.re, minus.half_width, minus.condition
    ))
    .with_note(format!("+Θ* variant residual {:.1e}", (plus.value - series.value).norm())))
}

pub fn check_vartheta_oracle(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    tol: f64,
) -> Result<VerificationReport> {
    let series = eval_vartheta(
        &q_expansion(ctx, h, required_m_max(ctx, tau.v(), 1e-14)?)?,
        tau,
        1e-14,
    )?;
    let oracle = vartheta_oracle(ctx, h, tau, &DEFAULT_S_GRID)?;
    Ok(VerificationReport::new(
        "vartheta-oracle",
        json!({"N": ctx.level(), "h": [h.h1(), h.h2()], "tau": tau_json(tau)}),
        (oracle.value - series.value).norm(),
        tol,
    ))
}

// Schwartz functions

/// `φ̃_{τ+1} = e((y²−x²)/2)φ̃_τ`, `ℱ(φ̃_{−1/τ}) = τφ̃_τ` by 2D quadrature, and `|φ̃_τ| ≤ 1`.
pub fn check_phi_tilde_identities(
    points: &[(ModularPoint, SplitPoint)],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factor: f64 = 0.0;
    let mut sup: f64 = 0.0;
    for _ in 0..samples {
        let tau = ModularPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..3.0))?;
        let p = SplitPoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let lhs = phi_tilde(&tau.t_image(), p);
        let rhs = e_real(0.5 * (p.y * p.y - p.x * p.x)) * phi_tilde(&tau, p);
        factor = factor.max((lhs - rhs).norm());
        sup = sup.max(phi_tilde(&tau, p).norm());
    }
    let mut ft_worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (tau, p) in points {
        if p.on_light_cone() {
            return Err(Error::LightCone { x: p.x, y: p.y });
        }
        let img = tau.s_image();
        let est = ft2d(
            |q| phi_tilde(&img, q),
            *p,
            &Ft2dConfig::damped_light_cone(img.v()),
        )?;
        let r = (est.value - tau.tau() * phi_tilde(tau, *p)).norm();
        notes.push(format!(
            "τ={tau} ({}, {}): {r:.1e} (quadrature spread {:.1e})",
            p.x, p.y, est.error
        ));
        ft_worst = ft_worst.max(r);
    }
    let mut ft = VerificationReport::new(
        "phi-tilde-fourier",
        json!({"points": points.len()}),
        ft_worst,
        tol,
    );
    ft.notes = notes;
    Ok(vec![
        VerificationReport::new(
            "phi-tilde-t-factor",
            json!({"samples": samples, "seed": seed}),
            factor,
            1e-14,
        ),
        ft,
        VerificationReport::new(
            "phi-tilde-bounded",
            json!({"samples": samples, "seed": seed}),
            sup,
            1.0 + 1e-12,
        ),
    ])
}

/// `𝒟*_τ = φ*_τ − ℱ(φ*_{−1/τ})/τ` for the default erfc normalization; the printed one is reported alongside.
pub fn check_d_function(
    tau: &ModularPoint,
    points: &[SplitPoint],
    tol: f64,
) -> Result<VerificationReport> {
    let img = tau.s_image();
    let cfg = QuadConfig::with_tol(1e-14, 1e-12);
    let mut worst: f64 = 0.0;
    let mut literal: f64 = 0.0;
    for &p in points {
        let target = phi_star(tau, p) - ft_phi_star(&img, p, &cfg)? / tau.tau();
        worst = worst.max((d_function(tau, p, ErfcNormalization::PiScaled) - target).norm());
        literal = literal.max((d_function(tau, p, ErfcNormalization::Literal) - target).norm());
    }
    Ok(VerificationReport::new(
        "d-function",
        json!({"tau": tau_json(tau), "points": points.len()}),
        worst,
        tol,
    )
    .with_note(format!("literal erfc(√(−iτ)|x|) residual {literal:.1e}")))
}

// Suites

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suite {
    All,
    Weil,
    Coefficients,
    Kernel,
    EpsilonLimit,
    Xi,
    Modularity,
    ProofIntegrals,
    ConstantTerm,
    Schwartz,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Weil,
        Suite::Coefficients,
        Suite::Kernel,
        Suite::EpsilonLimit,
        Suite::Xi,
        Suite::Modularity,
        Suite::ProofIntegrals,
        Suite::ConstantTerm,
        Suite::Schwartz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Weil => "weil",
            Suite::Coefficients => "coefficients",
            Suite::Kernel => "kernel",
            Suite::EpsilonLimit => "epsilon-limit",
            Suite::Xi => "xi",
            Suite::Modularity => "modularity",
            Suite::ProofIntegrals => "proof-integrals",
            Suite::ConstantTerm => "constant-term",
            Suite::Schwartz => "schwartz",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::ALL)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// `count` points `(τ, t)` with `|u| ≤ 1/2`, `v ∈ [0.8, 2]`, `t ∈ [1/2, 2]` log-uniform.
pub fn kernel_samples(seed: u64, count: usize) -> Result<Vec<(ModularPoint, FramePoint)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let tau = ModularPoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0))?;
            let t = FramePoint::new(rng.gen_range(-(2f64.ln())..2f64.ln()).exp())?;
            Ok((tau, t))
        })
        .collect()
}

pub fn series_samples(seed: u64, count: usize) -> Result<Vec<ModularPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..count)
        .map(|_| ModularPoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..2.0)))
        .collect()
}

/// Five off-cone points for the two-dimensional transform check.
pub fn fourier_points() -> Result<Vec<(ModularPoint, SplitPoint)>> {
    let skew = ModularPoint::new(0.3, 0.8)?;
    Ok(vec![
        (ModularPoint::i(), SplitPoint::new(0.7, 0.2)),
        (ModularPoint::i(), SplitPoint::new(0.3, -0.9)),
        (ModularPoint::i(), SplitPoint::new(-0.5, 0.1)),
        (skew, SplitPoint::new(0.2, 1.3)),
        (skew, SplitPoint::new(-0.4, -1.1)),
    ])
}

pub const EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Runs one suite at level `N` with samples drawn from `seed`; reports come back in a fixed order.
pub fn run_suite(ctx: &LatticeContext, suite: Suite, seed: u64) -> Result<Vec<VerificationReport>> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::ALL {
            out.extend(run_suite(ctx, s, seed)?);
        }
        return Ok(out);
    }
    let mut out = Vec::new();
    let i = ModularPoint::i();
    let one = FramePoint::new(1.0)?;
    match suite {
        Suite::All => unreachable!(),
        Suite::Weil => out.push(check_weil_relations(ctx, 1e-12)?),
        Suite::Coefficients => {
            out.push(check_coefficient_oracle(ctx, 30, 1e-12)?);
            out.push(check_level_one_vanishing(30)?);
            out.push(check_xi_expansion(ctx, 30)?);
        }
        Suite::Kernel => {
            for (tau, t) in kernel_samples(seed, 6)? {
                out.push(check_theta_modularity(ctx, &tau, &t, 1e-8)?);
            }
            out.push(check_theta_tilde_modularity(ctx, &i, &one, 0.1, 1e-7)?);
            out.push(check_kernel_sign(ctx, &i, &one, 1e-6)?);
        }
        Suite::EpsilonLimit => {
            let tau = ModularPoint::new(0.2, 1.1)?;
            out.push(check_epsilon_limit(
                ctx,
                &tau,
                &FramePoint::new(1.3)?,
                &EPSILONS,
                0.9,
            )?);
        }
        Suite::Xi => {
            out.push(check_xi_kernel(ctx, &i, &one, 1e-4, 1e-6)?);
            for tau in series_samples(seed, 10)? {
                out.push(check_xi_series(ctx, &tau, 1e-4, 1e-6)?);
            }
            out.push(check_harmonicity(ctx, &ModularPoint::new(1.0, 2.0)?, 1e-4)?);
        }
        Suite::Modularity => {
            for tau in [
                i,
                ModularPoint::new(0.0, 2.0)?,
                ModularPoint::new(0.5, 1.5)?,
            ] {
                out.push(check_vartheta_modularity(ctx, &tau, 1e-6)?);
            }
        }
        Suite::ProofIntegrals => out.extend(check_proof_integrals(1e-8)?),
        Suite::ConstantTerm => {
            let far = ModularPoint::new(0.0, 10.0)?;
            let mut any = false;
            for h in ctx.cosets().filter(|&h| !c0(ctx, h).is_zero()) {
                out.push(check_constant_term(ctx, h, &far, 1e-5)?);
                any = true;
            }
            if !any {
                out.push(check_constant_term(ctx, ctx.coset(0, 0), &far, 1e-5)?);
            }
            let h = ctx.coset(1, 0);
            out.push(check_vartheta_oracle(ctx, h, &far, 1e-6)?);
        }
        Suite::Schwartz => {
            out.extend(check_phi_tilde_identities(
                &fourier_points()?,
                2000,
                seed,
                1e-5,
            )?);
            let pts = [
                SplitPoint::new(0.7, 0.2),
                SplitPoint::new(0.3, -0.9),
                SplitPoint::new(-0.5, 0.1),
            ];
            for tau in [i, ModularPoint::new(0.3, 0.8)?] {
                out.push(check_d_function(&tau, &pts, 1e-10)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32) -> LatticeContext {
        LatticeContext::new(n).unwrap()
    }

    #[test]
    fn report_invariant_and_serialization() {
        let r = VerificationReport::new("x", json!({"N": 2}), 1e-9, 1e-8);
        assert!(r.passed);
        assert!(!VerificationReport::new("x", Value::Null, f64::NAN, 1.0).passed);
        let line = r.to_json_line().unwrap();
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
        let table = render_table(&[r]);
        assert!(table.contains("PASS") && table.ends_with("1/1 passed\n"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn samples_are_deterministic() {
        assert_eq!(kernel_samples(0, 6).unwrap(), kernel_samples(0, 6).unwrap());
        assert_ne!(kernel_samples(0, 6).unwrap(), kernel_samples(1, 6).unwrap());
    }

    #[test]
    fn quadratic_fit_recovers_intercept() {
        let s = DEFAULT_S_GRID;
        let y: Vec<Complex64> = s
            .iter()
            .map(|&x| Complex64::new(1.5 - 2.0 * x + 7.0 * x * x, -0.25 * x))
            .collect();
        let (a, cond) = quadratic_intercept(&s, &y).unwrap();
        assert!((a - Complex64::new(1.5, 0.0)).norm() < 1e-12);
        assert!(cond < 1e6);
        assert!(matches!(
            quadratic_intercept(&[1.0, 1.0 - 1e-9, 1.0 - 2e-9], &y[..3]),
            Err(Error::IllConditioned(_))
        ));
    }

    #[test]
    fn regularized_constant_of_known_profiles() {
        // f = tanh: limits ±1 cancel, constant is ∫ tanh = 0 by symmetry
        let r =
            regularized_constant(|s| Ok(Complex64::new(s.tanh(), 0.0)), &DEFAULT_S_GRID).unwrap();
        assert!(r.value.norm() < 1e-10 && r.pole.norm() < 1e-12);
        // f = 1/(1+e^{3σ}) tends to 1 at −∞; ∫(f − 𝟙_{σ<0}) = 0, so the constant is 0 too
        let r = regularized_constant(
            |s| Ok(Complex64::new(1.0 / (1.0 + (3.0 * s).exp()), 0.0)),
            &DEFAULT_S_GRID,
        )
        .unwrap();
        assert!((r.pole.re - 1.0).abs() < 1e-12);
        assert!(r.value.norm() < 1e-9, "{}", r.value);
        // f = e^{−σ²}: constant √π
        let r = regularized_constant(|s| Ok(Complex64::new((-s * s).exp(), 0.0)), &DEFAULT_S_GRID)
            .unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-6);
        assert!(regularized_constant(|_| Ok(Complex64::zero()), &[0.01, 0.02, 0.03]).is_err());
    }

    #[test]
    fn i_plus_branches_agree_with_quadrature() {
        for (x1, x2) in [(1.0, -4.0), (-4.0, 1.0), (3.0, -2.0)] {
            for s in [0.7, 0.05] {
                let q = i_plus_quadrature(x1, x2, s).unwrap();
                assert!(
                    (q - i_plus_closed_form(x1, x2, s)).abs() < 1e-9,
                    "{x1} {x2} {s}"
                );
            }
        }
        // both branches tend to log|x1/x2|
        assert!((i_plus_closed_form(1.0, -4.0, 1e-7) - 0.25f64.ln()).abs() < 1e-6);
        assert!((i_plus_closed_form(4.0, -1.0, 1e-7) - 4f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn level_one_suites_pass() {
        let c1 = ctx(1);
        for suite in [
            Suite::Weil,
            Suite::Coefficients,
            Suite::Kernel,
            Suite::Modularity,
        ] {
            let reports = run_suite(&c1, suite, 0).unwrap();
            assert!(all_passed(&reports), "{}", render_table(&reports));
        }
    }

    #[test]
    fn weil_and_poisson_small_level() {
        let c = ctx(3);
        assert!(check_weil_relations(&c, 1e-12).unwrap().passed);
        let r = check_theta_tilde_modularity(
            &c,
            &ModularPoint::i(),
            &FramePoint::new(1.0).unwrap(),
            0.1,
            1e-7,
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
    }
}
