//! Functions on the split plane `R^{1,1}` with `Q′(x, y) = (x² − y²)/2`, the
//! finite-difference `ξ` operator, and Fourier transforms with respect to `−Q′`:
//! `ℱ(f)(x, y) = ∫∫ f(w, z) e(−wx + yz) dw dz`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::phase::{e, e_real, sgn};
use crate::quadrature::{integrate_oscillatory, integrate_points, PanelRule, QuadConfig};
use crate::special::{erfc_complex, erfcx_complex, erfcx_real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularPoint {
    u: f64,
    v: f64,
}

impl ModularPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() || !u.is_finite() {
            return invalid(format!("τ = {u} + {v}i is not in the upper half-plane"));
        }
        Ok(Self { u, v })
    }

    pub fn from_tau(tau: Complex64) -> Result<Self> {
        Self::new(tau.re, tau.im)
    }

    pub fn i() -> Self {
        Self { u: 0.0, v: 1.0 }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    /// `τ + 1`.
    pub fn t_image(&self) -> Self {
        Self {
            u: self.u + 1.0,
            v: self.v,
        }
    }

    /// `−1/τ`.
    pub fn s_image(&self) -> Self {
        let w = -self.tau().inv();
        Self { u: w.re, v: w.im }
    }

    pub fn shifted(&self, du: f64, dv: f64) -> Result<Self> {
        Self::new(self.u + du, self.v + dv)
    }
}

impl std::fmt::Display for ModularPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:+}i", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitPoint {
    pub x: f64,
    pub y: f64,
}

impl SplitPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn q_prime(&self) -> f64 {
        0.5 * (self.x * self.x - self.y * self.y)
    }

    /// Light-cone coordinates `x′ = (x+y)/√2`, `y′ = (y−x)/√2`.
    pub fn rotated(&self) -> (f64, f64) {
        (
            (self.x + self.y) * FRAC_1_SQRT_2,
            (self.y - self.x) * FRAC_1_SQRT_2,
        )
    }

    pub fn on_light_cone(&self) -> bool {
        self.x * self.x == self.y * self.y
    }
}

/// Which argument the holomorphic erfc in `𝒟_τ` receives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErfcNormalization {
    /// `erfc(√(−iτ)|x|)` exactly as printed.
    Literal,
    /// `erfc(√(−πiτ)|x|)`, which is `erfc(√(πv)|x|)` on the imaginary axis.
    PiScaled,
}

/// `√(2v)·x·e(x²τ/2 − y²τ̄/2)`.
pub fn phi(tau: &ModularPoint, p: SplitPoint) -> Complex64 {
    let (x, y) = (p.x, p.y);
    let arg = Complex64::new(0.5 * (x * x - y * y) * tau.u, 0.5 * (x * x + y * y) * tau.v);
    (2.0 * tau.v).sqrt() * x * e(arg)
}

/// `e((y²−x²)τ/2)·sgn(x)·erfc(√(2πv)|x|)`, evaluated in scaled form so it never overflows.
pub fn phi_star(tau: &ModularPoint, p: SplitPoint) -> Complex64 {
    let (x, y) = (p.x, p.y);
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let z = (2.0 * PI * tau.v).sqrt() * x.abs();
    let modulus = (-PI * tau.v * (x * x + y * y)).exp() * erfcx_real(z);
    sgn(x) * modulus * e_real(0.5 * (y * y - x * x) * tau.u)
}

/// `e((y²−x²)τ/2)·sgn(x)·𝟙_{y²>x²}`.
pub fn phi_plus(tau: &ModularPoint, p: SplitPoint) -> Complex64 {
    let (x, y) = (p.x, p.y);
    if y * y <= x * x {
        return Complex64::new(0.0, 0.0);
    }
    sgn(x) * e(0.5 * (y * y - x * x) * tau.tau())
}

/// `𝒟_τ(x, y) = e((y²−x²)τ/2) sgn(x) erfc(c·√(−iτ)|x|)` with `c` fixed by `norm`.
pub fn d_function(tau: &ModularPoint, p: SplitPoint, norm: ErfcNormalization) -> Complex64 {
    let (x, y) = (p.x, p.y);
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let t = tau.tau();
    let c2 = match norm {
        ErfcNormalization::Literal => 1.0,
        ErfcNormalization::PiScaled => PI,
    };
    let i = Complex64::new(0.0, 1.0);
    let w = (-i * t * c2).sqrt() * x.abs();
    // e(−x²τ/2)·erfc(w) = exp(−πiτx² + c²iτx²)·erfcx(w)
    let combined = (i * t * x * x * (c2 - PI)).exp() * erfcx_complex(w);
    sgn(x) * e(0.5 * y * y * t) * combined
}

/// Same as [`d_function`] but through the unscaled erfc; only sensible for moderate `|x|`.
pub fn d_function_unscaled(
    tau: &ModularPoint,
    p: SplitPoint,
    norm: ErfcNormalization,
) -> Complex64 {
    let (x, y) = (p.x, p.y);
    let t = tau.tau();
    let c = match norm {
        ErfcNormalization::Literal => 1.0,
        ErfcNormalization::PiScaled => PI.sqrt(),
    };
    let w = (Complex64::new(0.0, -1.0) * t).sqrt() * c * x.abs();
    sgn(x) * e(0.5 * (y * y - x * x) * t) * erfc_complex(w)
}

/// `φ̃_τ = φ⁺_τ − φ*_τ`.
pub fn phi_tilde(tau: &ModularPoint, p: SplitPoint) -> Complex64 {
    phi_plus(tau, p) - phi_star(tau, p)
}

/// Central-difference `ξ_k f = 2i v^k conj(∂f/∂τ̄)` with `∂/∂τ̄ = (∂_u + i∂_v)/2`.
pub fn xi_numeric(
    mut f: impl FnMut(&ModularPoint) -> Result<Complex64>,
    k: f64,
    tau: &ModularPoint,
    step: f64,
) -> Result<Complex64> {
    if step < 1e-6 {
        return Err(Error::StepTooSmall(step));
    }
    if step >= tau.v {
        return invalid(format!(
            "step {step} leaves the upper half-plane at v = {}",
            tau.v
        ));
    }
    let fu = (f(&tau.shifted(step, 0.0)?)? - f(&tau.shifted(-step, 0.0)?)?) / (2.0 * step);
    let fv = (f(&tau.shifted(0.0, step)?)? - f(&tau.shifted(0.0, -step)?)?) / (2.0 * step);
    let dbar = (fu + Complex64::new(0.0, 1.0) * fv) * 0.5;
    Ok(Complex64::new(0.0, 2.0) * tau.v.powf(k) * dbar.conj())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    /// Tensor grid in `(w, z)`, split at the axes.
    Cartesian,
    /// Grid in `a = (z+w)/√2`, `b = (z−w)/√2`, split at the axes and at `a = b`.
    LightCone,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ft2dConfig {
    pub frame: Frame,
    pub radius: f64,
    pub panel_width: f64,
    pub order: usize,
    /// Gaussian damping exponents `η`, halving, for Richardson extrapolation to `η = 0`.
    /// Empty means no damping; the error is then estimated by a lower-order rerun.
    pub damping: Vec<f64>,
    /// Drop the region `|ab| > cutoff` (light-cone frame only).
    pub hyperbolic_cutoff: Option<f64>,
}

impl Ft2dConfig {
    /// Cartesian grid for integrands bounded by `e^{−πv(w²+z²)}`.
    pub fn gaussian(v: f64) -> Self {
        Self {
            frame: Frame::Cartesian,
            radius: (38.0 / (PI * v)).sqrt(),
            panel_width: 0.25,
            order: 16,
            damping: Vec::new(),
            hyperbolic_cutoff: None,
        }
    }

    /// Damped light-cone grid for bounded integrands decaying like `e^{−2πv|ab|}` off the cone.
    pub fn damped_light_cone(v: f64) -> Self {
        Self {
            frame: Frame::LightCone,
            radius: 0.0,
            panel_width: 0.2,
            order: 16,
            damping: vec![0.04, 0.02, 0.01, 0.005],
            hyperbolic_cutoff: Some(40.0 / (2.0 * PI * v)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtEstimate {
    pub value: Complex64,
    pub error: f64,
}

fn ft2d_single(
    f: &mut impl FnMut(SplitPoint) -> Complex64,
    p: SplitPoint,
    cfg: &Ft2dConfig,
    order: usize,
    eta: f64,
) -> Complex64 {
    let radius = if eta > 0.0 {
        cfg.radius.max((38.0 / eta).sqrt())
    } else {
        cfg.radius
    };
    match cfg.frame {
        Frame::Cartesian => {
            let rule = PanelRule::new(&[-radius, 0.0, radius], cfg.panel_width, order);
            rule.apply(|w| {
                rule.apply(|z| {
                    let damp = if eta > 0.0 {
                        (-eta * (w * w + z * z)).exp()
                    } else {
                        1.0
                    };
                    f(SplitPoint::new(w, z)) * e_real(-w * p.x + p.y * z) * damp
                })
            })
        }
        Frame::LightCone => {
            let (xr, yr) = p.rotated();
            let outer = PanelRule::new(&[-radius, 0.0, radius], cfg.panel_width, order);
            outer.apply(|a| {
                let reach = match cfg.hyperbolic_cutoff {
                    Some(c) if a != 0.0 => radius.min(c / a.abs()),
                    _ => radius,
                };
                let mut edges = vec![-reach, 0.0, reach];
                if a.abs() < reach {
                    edges.push(a);
                }
                edges.sort_by(f64::total_cmp);
                let inner = PanelRule::new(&edges, cfg.panel_width, order);
                inner.apply(|b| {
                    let w = (a - b) * FRAC_1_SQRT_2;
                    let z = (a + b) * FRAC_1_SQRT_2;
                    let damp = if eta > 0.0 {
                        (-eta * (a * a + b * b)).exp()
                    } else {
                        1.0
                    };
                    f(SplitPoint::new(w, z)) * e_real(a * yr + b * xr) * damp
                })
            })
        }
    }
}

/// Two-dimensional Fourier transform by composite Gauss–Legendre panels.
///
/// With damping, the values for each `η` are combined by two Richardson levels
/// (linear then quadratic in `η`) and the error is the spread of the last two.
pub fn ft2d(
    mut f: impl FnMut(SplitPoint) -> Complex64,
    p: SplitPoint,
    cfg: &Ft2dConfig,
) -> Result<FtEstimate> {
    if cfg.order < 6 || !(cfg.panel_width > 0.0) {
        return invalid("quadrature order must be at least 6 with positive panel width");
    }
    if cfg.damping.is_empty() {
        if !(cfg.radius > 0.0) {
            return invalid("undamped transform needs a positive radius");
        }
        let hi = ft2d_single(&mut f, p, cfg, cfg.order, 0.0);
        let lo = ft2d_single(&mut f, p, cfg, cfg.order - 4, 0.0);
        return Ok(FtEstimate {
            value: hi,
            error: (hi - lo).norm(),
        });
    }
    let etas = &cfg.damping;
    if etas.len() < 2
        || etas
            .windows(2)
            .any(|w| (w[1] - 0.5 * w[0]).abs() > 1e-12 * w[0])
    {
        return invalid("damping exponents must be a halving sequence of length at least 2");
    }
    let values: Vec<Complex64> = etas
        .iter()
        .map(|&eta| ft2d_single(&mut f, p, cfg, cfg.order, eta))
        .collect();
    let first: Vec<Complex64> = values.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
    let levels = if first.len() >= 2 {
        first
            .windows(2)
            .map(|w| (4.0 * w[1] - w[0]) / 3.0)
            .collect()
    } else {
        first
    };
    let value = *levels.last().expect("nonempty");
    let error = if levels.len() >= 2 {
        (levels[levels.len() - 1] - levels[levels.len() - 2]).norm()
    } else {
        (values[values.len() - 1] - values[values.len() - 2]).norm()
    };
    Ok(FtEstimate { value, error })
}

/// `ℱ(φ*_τ)` by separation: the `z`-integral is the Gaussian pair
/// `(−iτ)^{−1/2} e(−y²/(2τ))`, the `w`-integral is done adaptively.
pub fn ft_phi_star(tau: &ModularPoint, p: SplitPoint, cfg: &QuadConfig) -> Result<Complex64> {
    let t = tau.tau();
    let gauss = (Complex64::new(0.0, -1.0) * t).sqrt().inv() * e(-p.y * p.y / (2.0 * t));
    let r = (40.0 / (PI * tau.v)).sqrt();
    let w_part = integrate_points(
        |w: f64| phi_star(tau, SplitPoint::new(w, 0.0)) * e_real(-w * p.x),
        &[-r, 0.0, r],
        cfg,
    )?;
    Ok(gauss * w_part.value)
}

fn require_off_cone(xr: f64, yr: f64) -> Result<()> {
    if xr == 0.0 || yr == 0.0 {
        let x = (xr - yr) * FRAC_1_SQRT_2;
        let y = (xr + yr) * FRAC_1_SQRT_2;
        return Err(Error::LightCone { x, y });
    }
    Ok(())
}

/// Closed form of `∫_R e(a y′)/(2πi(aτ + x′)) da = sgn(x′) τ⁻¹ e(−x′y′/τ) 𝟙_{x′y′>0}`.
pub fn ft_plus_last_term(tau: &ModularPoint, xr: f64, yr: f64) -> Result<Complex64> {
    require_off_cone(xr, yr)?;
    if xr * yr < 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t = tau.tau();
    Ok(sgn(xr) * t.inv() * e(-xr * yr / t))
}

/// The same integral by symmetrized half-period pieces and Wynn acceleration.
pub fn ft_plus_last_term_quadrature(
    tau: &ModularPoint,
    xr: f64,
    yr: f64,
    cfg: &QuadConfig,
) -> Result<Complex64> {
    require_off_cone(xr, yr)?;
    let t = tau.tau();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let g = |a: f64| {
        e_real(a * yr) / (two_pi_i * (a * t + xr)) + e_real(-a * yr) / (two_pi_i * (-a * t + xr))
    };
    let half_period = 0.5 / yr.abs();
    let pole = -xr * t.re / t.norm_sqr();
    let head_end = (pole.abs() + 1.0).max(half_period);
    let head_end = half_period * (head_end / half_period).ceil();
    let head = integrate_points(g, &[0.0, pole.abs().min(head_end), head_end], cfg)?;
    let tail = integrate_oscillatory(g, head_end, half_period, cfg, 4000)?;
    Ok(head.value + tail.value)
}

/// `ℱ(φ⁺_τ)` by the one-dimensional reduction
/// `∫ e(a²τ + a(x′+y′))/(πi(aτ+x′)) da − sgn(x′) τ⁻¹ e(−x′y′/τ) 𝟙_{x′y′>0}`.
pub fn ft_phi_plus(tau: &ModularPoint, p: SplitPoint, cfg: &QuadConfig) -> Result<Complex64> {
    let (xr, yr) = p.rotated();
    require_off_cone(xr, yr)?;
    let t = tau.tau();
    let r = (40.0 / (2.0 * PI * tau.v)).sqrt() + 1.0;
    let pole = -xr * t.re / t.norm_sqr();
    let mut pts = vec![-r, r];
    if pole.abs() < r {
        pts.push(pole);
    }
    pts.sort_by(f64::total_cmp);
    let pi_i = Complex64::new(0.0, PI);
    let first = integrate_points(
        |a: f64| e(a * a * t + a * (xr + yr)) / (pi_i * (a * t + xr)),
        &pts,
        cfg,
    )?;
    Ok(first.value - ft_plus_last_term(tau, xr, yr)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(u: f64, v: f64) -> ModularPoint {
        ModularPoint::new(u, v).unwrap()
    }

    #[test]
    fn modular_point_validation() {
        assert!(ModularPoint::new(0.0, 0.0).is_err());
        assert!(ModularPoint::new(0.0, -1.0).is_err());
        let t = tau(0.3, 1.2).s_image();
        let expected = -Complex64::new(0.3, 1.2).inv();
        assert!((t.tau() - expected).norm() < 1e-16);
        assert_eq!(tau(0.3, 1.2).t_image().tau(), Complex64::new(1.3, 1.2));
    }

    #[test]
    fn phi_examples() {
        let i = ModularPoint::i();
        assert_eq!(phi(&i, SplitPoint::new(0.0, 3.0)), Complex64::new(0.0, 0.0));
        let v = phi(&i, SplitPoint::new(1.0, 0.0));
        assert!((v - 2f64.sqrt() * (-PI).exp()).norm() < 1e-16);
        assert!((v.re - 0.061_113_709_291_909_1).abs() < 1e-16);
        let t = tau(0.4, 0.7);
        for &(x, y) in &[(0.3, 1.1), (1.7, -0.2)] {
            let a = phi(&t, SplitPoint::new(x, y));
            let b = phi(&t, SplitPoint::new(-x, y));
            assert!((a + b).norm() < 1e-16);
            // direct formula with the conjugate
            let tb = t.tau().conj();
            let direct = (2.0 * t.v()).sqrt() * x * e(x * x * t.tau() / 2.0 - y * y * tb / 2.0);
            assert!((a - direct).norm() < 1e-15);
        }
    }

    #[test]
    fn phi_star_examples() {
        let i = ModularPoint::i();
        assert_eq!(
            phi_star(&i, SplitPoint::new(0.0, 1.0)),
            Complex64::new(0.0, 0.0)
        );
        // τ = i, (1, 0): e(−i/2)·erfc(√(2π)) = e^{π} erfc(√(2π))
        let v = phi_star(&i, SplitPoint::new(1.0, 0.0));
        let direct = PI.exp() * crate::special::erfc_real((2.0 * PI).sqrt());
        assert!((v.re - direct).abs() < 1e-15 && v.im.abs() < 1e-16);
        assert!((v.re - 0.009_088_520_644_876_38).abs() < 1e-16);
        let jump =
            phi_star(&i, SplitPoint::new(1e-8, 1.0)) - phi_star(&i, SplitPoint::new(-1e-8, 1.0));
        let expected = 2.0 * e(0.5 * Complex64::new(0.0, 1.0));
        assert!((jump - expected).norm() < 1e-7);
        // the scaled evaluation agrees with the literal product where neither underflows
        let t = tau(0.3, 0.8);
        let p = SplitPoint::new(0.6, -0.4);
        let literal = e(0.5 * (p.y * p.y - p.x * p.x) * t.tau())
            * crate::special::erfc_real((2.0 * PI * t.v()).sqrt() * p.x);
        assert!((phi_star(&t, p) - literal).norm() < 1e-15);
        assert!(phi_star(&i, SplitPoint::new(40.0, 40.0)).norm() == 0.0);
    }

    #[test]
    fn phi_plus_examples() {
        let i = ModularPoint::i();
        assert_eq!(
            phi_plus(&i, SplitPoint::new(2.0, 1.0)),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            phi_plus(&i, SplitPoint::new(1.0, 1.0)),
            Complex64::new(0.0, 0.0)
        );
        let v = phi_plus(&i, SplitPoint::new(1.0, 2.0));
        assert!((v.re - (-3.0 * PI).exp()).abs() < 1e-18);
        assert!((v.re - 8.06995e-5).abs() < 1e-9);
        assert!((phi_plus(&i, SplitPoint::new(-1.0, 2.0)) + v).norm() < 1e-18);
    }

    #[test]
    fn d_function_forms_agree() {
        for t in [tau(0.0, 1.0), tau(0.7, 0.4), tau(-1.2, 2.0)] {
            for &(x, y) in &[(0.2, 0.9), (-1.1, 0.3), (0.05, -2.0)] {
                let p = SplitPoint::new(x, y);
                for norm in [ErfcNormalization::Literal, ErfcNormalization::PiScaled] {
                    let a = d_function(&t, p, norm);
                    let b = d_function_unscaled(&t, p, norm);
                    assert!(
                        (a - b).norm() < 1e-13 * (1.0 + b.norm()),
                        "{t} {p:?} {norm:?}"
                    );
                }
                let q = SplitPoint::new(-x, y);
                let n = ErfcNormalization::PiScaled;
                assert!((d_function(&t, p, n) + d_function(&t, q, n)).norm() < 1e-15);
            }
            assert_eq!(
                d_function(&t, SplitPoint::new(0.0, 1.0), ErfcNormalization::PiScaled).norm(),
                0.0
            );
        }
        // on the imaginary axis the π-scaled argument is √(πv)|x|
        let t = tau(0.0, 2.0);
        let p = SplitPoint::new(0.4, 0.1);
        let v = d_function(&t, p, ErfcNormalization::PiScaled);
        let direct = e(0.5 * (p.y * p.y - p.x * p.x) * t.tau())
            * crate::special::erfc_real((PI * 2.0).sqrt() * 0.4);
        assert!((v - direct).norm() < 1e-14);
    }

    #[test]
    fn d_function_jump_and_continuity() {
        let t = tau(0.3, 0.9);
        let y = 0.8;
        let n = ErfcNormalization::PiScaled;
        let jump = d_function(&t, SplitPoint::new(1e-9, y), n)
            - d_function(&t, SplitPoint::new(-1e-9, y), n);
        assert!((jump - 2.0 * e(0.5 * y * y * t.tau())).norm() < 1e-7);
        let a = d_function(&t, SplitPoint::new(0.5, y), n);
        let b = d_function(&t, SplitPoint::new(0.5 + 1e-7, y), n);
        assert!((a - b).norm() < 1e-5);
    }

    #[test]
    fn phi_tilde_examples() {
        let i = ModularPoint::i();
        assert_eq!(phi_tilde(&i, SplitPoint::new(0.0, 2.0)).norm(), 0.0);
        let big = tau(0.2, 30.0);
        let p = SplitPoint::new(0.5, 0.9);
        let lead = e(0.5 * (p.y * p.y - p.x * p.x) * big.tau());
        assert!((phi_tilde(&big, p) - lead).norm() < 1e-12 * lead.norm());
    }

    #[test]
    fn xi_examples() {
        let t = tau(0.3, 1.7);
        let log_v = |z: &ModularPoint| Ok(Complex64::new(z.v().ln(), 0.0));
        let r = xi_numeric(log_v, 1.0, &t, 1e-4).unwrap();
        assert!((r - 1.0).norm() < 1e-7);
        let q = |z: &ModularPoint| Ok(e(z.tau()));
        assert!(xi_numeric(q, 1.0, &t, 1e-4).unwrap().norm() < 1e-6);
        assert!(matches!(
            xi_numeric(log_v, 1.0, &t, 1e-7),
            Err(Error::StepTooSmall(_))
        ));
        let p = SplitPoint::new(0.4, -0.7);
        let res = xi_numeric(|z| Ok(phi_tilde(z, p)), 1.0, &t, 1e-4).unwrap() - phi(&t, p);
        assert!(res.norm() < 1e-6);
        let res = xi_numeric(|z| Ok(phi_star(z, p)), 1.0, &t, 1e-4).unwrap() + phi(&t, p);
        assert!(res.norm() < 1e-6);
    }

    #[test]
    fn gaussian_transform_pair() {
        // f(w, z) = e((w² + z²)τ/2) has ℱf(x, y) = (−iτ)^{−1} e(−(x² + y²)/(2τ))
        for t in [tau(0.0, 1.0), tau(0.4, 0.8)] {
            let f = |q: SplitPoint| e(0.5 * (q.x * q.x + q.y * q.y) * t.tau());
            let p = SplitPoint::new(0.7, -0.3);
            let exact = (Complex64::new(0.0, -1.0) * t.tau()).inv()
                * e(-(p.x * p.x + p.y * p.y) / (2.0 * t.tau()));
            let est = ft2d(f, p, &Ft2dConfig::gaussian(t.v())).unwrap();
            assert!(
                (est.value - exact).norm() < 1e-12,
                "{}",
                (est.value - exact).norm()
            );
            assert!(est.error < 1e-10);
        }
    }

    #[test]
    fn transform_is_linear() {
        let t = tau(0.1, 1.1);
        let cfg = Ft2dConfig::gaussian(t.v());
        let p = SplitPoint::new(0.35, 0.6);
        let f = |q: SplitPoint| phi_star(&t, q);
        let g = |q: SplitPoint| phi(&t, q);
        let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let combined = ft2d(|q| a * f(q) + b * g(q), p, &cfg).unwrap().value;
        let split = a * ft2d(f, p, &cfg).unwrap().value + b * ft2d(g, p, &cfg).unwrap().value;
        assert!((combined - split).norm() < 1e-12);
    }

    #[test]
    fn separable_and_grid_transforms_of_phi_star_agree() {
        let t = tau(0.0, 1.0).s_image();
        let p = SplitPoint::new(0.7, 0.2);
        let grid = ft2d(|q| phi_star(&t, q), p, &Ft2dConfig::gaussian(t.v())).unwrap();
        let sep = ft_phi_star(&t, p, &QuadConfig::with_tol(1e-14, 1e-13)).unwrap();
        assert!((grid.value - sep).norm() < 1e-11);
    }

    #[test]
    fn last_term_closed_form_matches_quadrature() {
        let cfg = QuadConfig::with_tol(1e-12, 1e-11);
        for t in [tau(0.0, 1.0), tau(0.5, 0.8)] {
            for &(xr, yr) in &[
                (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
                (-0.4, -1.3),
                (0.9, -0.5),
                (-1.2, 0.3),
            ] {
                let closed = ft_plus_last_term(&t, xr, yr).unwrap();
                let quad = ft_plus_last_term_quadrature(&t, xr, yr, &cfg).unwrap();
                assert!(
                    (closed - quad).norm() < 1e-8,
                    "{t} ({xr},{yr}): {closed} vs {quad}"
                );
            }
        }
        assert!(matches!(
            ft_plus_last_term(&tau(0.0, 1.0), 0.0, 1.0),
            Err(Error::LightCone { .. })
        ));
    }
}
