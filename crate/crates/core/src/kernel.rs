//! Theta kernels on `H × R_{>0}`: the holomorphic kernel `Θ_h(τ, t)`, the
//! regularized `Θ̃_h(τ, t; ε, ε′) = Θ⁺_h − Θ*_h`, and the completed `Θ̃_h(τ, t)`.
//!
//! Every sum is truncated to a box whose complement is bounded by a Gaussian
//! comparison, so each value carries a certified tail bound.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eisenstein::c0;
use crate::error::{invalid, Error, Result};
use crate::lattice::{majorant_real, CosetIndex, LatticeContext, LatticeVector};
use crate::phase::{e, e_real, sgn};
use crate::schwartz::{phi_star, ModularPoint, SplitPoint};
use crate::special::{frac_angle, rational_to_f64};
use crate::weil::VectorValuedData;

use num_rational::Rational64;

const MAX_TERMS: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePoint {
    t: f64,
}

impl FramePoint {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return invalid(format!("frame parameter t must be positive, got {t}"));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `min{1/(1+t²), t²/(1+t²)}`: shifts below this keep the ray signs fixed.
    pub fn shift_window(&self) -> f64 {
        let t2 = self.t * self.t;
        (1.0 / (1.0 + t2)).min(t2 / (1.0 + t2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftPair {
    eps: f64,
    eps_prime: f64,
}

impl ShiftPair {
    pub fn new(eps: f64, eps_prime: f64) -> Result<Self> {
        if !(eps.abs() < 0.5 && eps_prime.abs() < 0.5) {
            return invalid(format!(
                "shifts must lie in (−1/2, 1/2), got ({eps}, {eps_prime})"
            ));
        }
        Ok(Self { eps, eps_prime })
    }

    pub const fn zero() -> Self {
        Self {
            eps: 0.0,
            eps_prime: 0.0,
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps_prime(&self) -> f64 {
        self.eps_prime
    }
}

/// A value with a bound on everything the truncation dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certified {
    pub value: Complex64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelValue {
    pub components: VectorValuedData,
    pub truncation_bound: f64,
}

/// How `Θ*` enters the completed kernel `c_h(0) + Θ⁺ ± Θ*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum KernelSign {
    #[default]
    Minus,
    Plus,
}

impl KernelSign {
    fn factor(self) -> f64 {
        match self {
            KernelSign::Minus => -1.0,
            KernelSign::Plus => 1.0,
        }
    }
}

pub fn c_minus1(ctx: &LatticeContext, h: CosetIndex) -> u32 {
    ctx.c_minus1(h)
}

/// `ι_t X = (B(X, W_t), B(X, Z_t)) = ((x1/t + t·x2)/√(2N), (x1/t − t·x2)/√(2N))`.
pub fn iota(ctx: &LatticeContext, t: &FramePoint, x: LatticeVector) -> SplitPoint {
    iota_real(ctx.level_f64(), t.t, x.x1 as f64, x.x2 as f64)
}

fn iota_real(n: f64, t: f64, x1: f64, x2: f64) -> SplitPoint {
    let s = (2.0 * n).sqrt();
    SplitPoint::new((x1 / t + t * x2) / s, (x1 / t - t * x2) / s)
}

/// Box `|x1| ≤ a1`, `|x2| ≤ a2` with a bound on `Σ e^{−πv·Q(X)_t}` outside it.
#[derive(Clone, Copy, Debug, PartialEq)]
struct TruncationBox {
    radius: f64,
    a1: f64,
    a2: f64,
    tail: f64,
}

fn gaussian_box(n: f64, v: f64, t: f64, radius: f64) -> TruncationBox {
    let alpha1 = PI * v / (2.0 * n * t * t);
    let alpha2 = PI * v * t * t / (2.0 * n);
    let a1 = t * (2.0 * n * radius).sqrt();
    let a2 = (2.0 * n * radius).sqrt() / t;
    let full = |alpha: f64| 2.0 * (1.0 + PI.sqrt() / (2.0 * n * alpha.sqrt()));
    let beyond =
        |alpha: f64, a: f64| 2.0 * (-alpha * a * a).exp() * (1.0 + 1.0 / (2.0 * alpha * a * n));
    let tail = beyond(alpha1, a1) * full(alpha2) + full(alpha1) * beyond(alpha2, a2);
    TruncationBox {
        radius,
        a1,
        a2,
        tail,
    }
}

fn certified_box(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
) -> Result<TruncationBox> {
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let n = ctx.level_f64();
    let (v, t) = (tau.v(), t.t);
    let mut hi = 1.0;
    while gaussian_box(n, v, t, hi).tail > tol {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Truncation {
                tol,
                bound: gaussian_box(n, v, t, hi).tail,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid > 0.0 && gaussian_box(n, v, t, mid).tail <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let b = gaussian_box(n, v, t, hi);
    let count = (2.0 * b.a1 / n + 2.0) * (2.0 * b.a2 / n + 2.0);
    if count > MAX_TERMS as f64 {
        return Err(Error::Truncation { tol, bound: b.tail });
    }
    Ok(b)
}

/// Majorant radius `R` such that the Gaussian tail over `{X : Q(X)_t > R}` is below `tol`.
pub fn truncation_radius(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
) -> Result<f64> {
    Ok(certified_box(ctx, tau, t, tol)?.radius)
}

/// Integers `≡ r (mod n)` with `|k + shift| ≤ a`.
fn progression(r: u32, n: i64, shift: f64, a: f64) -> impl Iterator<Item = i64> {
    let r = i64::from(r);
    let lo = (-a - shift).ceil() as i64;
    let hi = (a - shift).floor() as i64;
    let start = lo + (r - lo).rem_euclid(n);
    (start..=hi).step_by(n as usize)
}

/// Box points of `L + h + ε(1,1)` sorted by majorant, then lexicographically.
fn box_points(
    ctx: &LatticeContext,
    h: CosetIndex,
    t: f64,
    eps: f64,
    b: &TruncationBox,
) -> Vec<(f64, i64, i64)> {
    let n = ctx.level_i64();
    let nf = ctx.level_f64();
    let mut pts = Vec::new();
    for n1 in progression(h.h1(), n, eps, b.a1) {
        for n2 in progression(h.h2(), n, eps, b.a2) {
            let maj = majorant_real(nf, n1 as f64 + eps, n2 as f64 + eps, t);
            pts.push((maj, n1, n2));
        }
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    pts
}

/// `Θ_h(τ, t) = √(v/N) Σ_{X∈L+h} (x1/t + t·x2) e(x1x2·u/N + Q(X)_t·iv)`.
pub fn theta_h(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
) -> Result<Certified> {
    let b = certified_box(ctx, tau, t, tol)?;
    let (u, v, tt) = (tau.u(), tau.v(), t.t);
    let nf = ctx.level_f64();
    let mut sum = Complex64::new(0.0, 0.0);
    for (maj, n1, n2) in box_points(ctx, h, tt, 0.0, &b) {
        let (x1, x2) = (n1 as f64, n2 as f64);
        let weight = (x1 / tt + tt * x2) * (-2.0 * PI * v * maj).exp();
        if weight == 0.0 {
            continue;
        }
        sum += weight * e_real(x1 * x2 * u / nf);
    }
    Ok(Certified {
        value: (v / nf).sqrt() * sum,
        tail_bound: b.tail,
    })
}

/// `Θ*_h(τ, t; ε, ε′) = Σ_{X∈L+h} φ*_τ(ι_t(X + ε(1,1))) e(B(X + ε(1,1), ε′(1,1)))`.
pub fn theta_star_h(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    t: &FramePoint,
    shift: ShiftPair,
    tol: f64,
) -> Result<Certified> {
    let b = certified_box(ctx, tau, t, tol)?;
    let nf = ctx.level_f64();
    let (eps, epsp) = (shift.eps, shift.eps_prime);
    let mut sum = Complex64::new(0.0, 0.0);
    for (_, n1, n2) in box_points(ctx, h, t.t, eps, &b) {
        let (x1, x2) = (n1 as f64 + eps, n2 as f64 + eps);
        let val = phi_star(tau, iota_real(nf, t.t, x1, x2));
        if val.norm() == 0.0 {
            continue;
        }
        sum += val * e_real((x1 + x2) * epsp / nf);
    }
    Ok(Certified {
        value: sum,
        tail_bound: b.tail,
    })
}

/// Largest `|n1 n2|` kept in the anisotropic part of `Θ⁺` and the bound on the rest.
fn hyperbolic_cutoff(ctx: &LatticeContext, tau: &ModularPoint, tol: f64) -> Result<(i64, f64)> {
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let r = (-PI * tau.v() / ctx.level_f64()).exp();
    let bound = |m: f64| 2.0 * r.powf(m + 1.0) * ((m + 1.0) - m * r) / ((1.0 - r) * (1.0 - r));
    let mut m = 1i64;
    while bound(m as f64) > tol {
        m += 1 + m / 8;
        if m > 5_000_000 {
            return Err(Error::Truncation {
                tol,
                bound: bound(m as f64),
            });
        }
    }
    Ok((m, bound(m as f64)))
}

/// Closed-form sum over the isotropic rays `n1·n2 = 0` that meet the region `x1·x2 < 0`.
pub fn ray_sum(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    t: &FramePoint,
    shift: ShiftPair,
) -> Result<Complex64> {
    let (eps, epsp) = (shift.eps, shift.eps_prime);
    let rays = [h.h1() == 0, h.h2() == 0];
    if eps == 0.0 || !rays.iter().any(|&r| r) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let limit = t.shift_window();
    if eps.abs() >= limit {
        return Err(Error::ShiftWindow { eps, limit, t: t.t });
    }
    let n = ctx.level_i64();
    let nf = ctx.level_f64();
    let tc = tau.tau();
    let prefactor = e((2.0 * eps * epsp - eps * eps * tc) / nf);
    let mut total = Complex64::new(0.0, 0.0);
    for (j, present) in rays.iter().enumerate() {
        if !present {
            continue;
        }
        let hk = i64::from(if j == 0 { h.h2() } else { h.h1() });
        if eps > 0.0 {
            let z = eps * tc - epsp;
            let a = rational_to_f64(frac_angle(Rational64::new(-hk, n)));
            total -= prefactor * e(z * a) / (1.0 - e(z));
        } else {
            let z = epsp - eps * tc;
            let a = rational_to_f64(frac_angle(Rational64::new(hk, n)));
            total += prefactor * e(z * a) / (1.0 - e(z));
        }
    }
    Ok(total)
}

/// `Θ⁺_h(τ, t; ε, ε′)`: anisotropic part summed over `n1·n2 ≤ −1`, rays in closed form.
pub fn theta_plus_h(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    t: &FramePoint,
    shift: ShiftPair,
    tol: f64,
) -> Result<Certified> {
    let rays = ray_sum(ctx, h, tau, t, shift)?;
    let (m, tail) = hyperbolic_cutoff(ctx, tau, tol)?;
    let n = ctx.level_i64();
    let nf = ctx.level_f64();
    let (u, v, tt) = (tau.u(), tau.v(), t.t);
    let (eps, epsp) = (shift.eps, shift.eps_prime);
    let mut terms = Vec::new();
    for n1 in progression(h.h1(), n, 0.0, m as f64) {
        if n1 == 0 {
            continue;
        }
        let reach = (m / n1.abs()) as f64;
        for n2 in progression(h.h2(), n, 0.0, reach) {
            if n1 * n2 <= -1 {
                terms.push((-(n1 * n2), n1, n2));
            }
        }
    }
    terms.sort();
    let mut sum = Complex64::new(0.0, 0.0);
    for (_, n1, n2) in terms {
        let (x1, x2) = (n1 as f64 + eps, n2 as f64 + eps);
        let s = sgn(x1 / tt + tt * x2);
        if s == 0.0 {
            continue;
        }
        let q = x1 * x2 / nf;
        let modulus = (2.0 * PI * v * q).exp();
        sum += s * modulus * e_real(-q * u + (x1 + x2) * epsp / nf);
    }
    Ok(Certified {
        value: sum + rays,
        tail_bound: tail,
    })
}

/// `Θ̃_h(τ, t; ε, ε′) = Θ⁺_h − Θ*_h`.
pub fn theta_tilde_shifted_h(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    t: &FramePoint,
    shift: ShiftPair,
    tol: f64,
) -> Result<Certified> {
    let plus = theta_plus_h(ctx, h, tau, t, shift, tol / 2.0)?;
    let star = theta_star_h(ctx, h, tau, t, shift, tol / 2.0)?;
    Ok(Certified {
        value: plus.value - star.value,
        tail_bound: plus.tail_bound + star.tail_bound,
    })
}

/// Completed kernel `c_h(0) + Θ⁺_h(τ, t; 0, 0) ± Θ*_h(τ, t; 0, 0)`.
pub fn theta_tilde_h_with_sign(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
    sign: KernelSign,
) -> Result<Certified> {
    let plus = theta_plus_h(ctx, h, tau, t, ShiftPair::zero(), tol / 2.0)?;
    let star = theta_star_h(ctx, h, tau, t, ShiftPair::zero(), tol / 2.0)?;
    let constant = rational_to_f64(c0(ctx, h));
    Ok(Certified {
        value: constant + plus.value + sign.factor() * star.value,
        tail_bound: plus.tail_bound + star.tail_bound,
    })
}

/// Completed kernel with the sign that satisfies both `ξΘ̃ = Θ` and the `S`-law.
pub fn theta_tilde_h(
    ctx: &LatticeContext,
    h: CosetIndex,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
) -> Result<Certified> {
    theta_tilde_h_with_sign(ctx, h, tau, t, tol, KernelSign::Minus)
}

fn collect(
    ctx: &LatticeContext,
    mut f: impl FnMut(CosetIndex) -> Result<Certified>,
) -> Result<KernelValue> {
    let mut bound: f64 = 0.0;
    let components = VectorValuedData::try_from_fn(ctx, |h| {
        let c = f(h)?;
        bound = bound.max(c.tail_bound);
        Ok::<_, Error>(c.value)
    })?;
    Ok(KernelValue {
        components,
        truncation_bound: bound,
    })
}

/// `Θ(τ, t) = Σ_h Θ_h(τ, t) 𝔢_h`.
pub fn theta(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
) -> Result<KernelValue> {
    collect(ctx, |h| theta_h(ctx, h, tau, t, tol))
}

pub fn theta_tilde(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    tol: f64,
    sign: KernelSign,
) -> Result<KernelValue> {
    collect(ctx, |h| theta_tilde_h_with_sign(ctx, h, tau, t, tol, sign))
}

pub fn theta_tilde_shifted(
    ctx: &LatticeContext,
    tau: &ModularPoint,
    t: &FramePoint,
    shift: ShiftPair,
    tol: f64,
) -> Result<KernelValue> {
    collect(ctx, |h| theta_tilde_shifted_h(ctx, h, tau, t, shift, tol))
}
