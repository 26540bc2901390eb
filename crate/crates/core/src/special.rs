//! Error functions, `Γ(0, x)`, Hurwitz zeta, `log Γ` and digamma.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `B_2, B_4, …, B_16`.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accuracy {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
        }
    }
}

impl Accuracy {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return invalid("tolerances must be positive");
        }
        Ok(Self { abs_tol, rel_tol })
    }

    pub fn accepts(&self, error: f64, value: f64) -> bool {
        error <= self.abs_tol.max(self.rel_tol * value.abs())
    }
}

fn erf_series(x: f64) -> f64 {
    // e^{-x²} Σ (2x²)ⁿ / (2n+1)!!, all terms positive
    let x2 = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= x2 / (2.0 * k + 1.0);
        sum += term;
        k += 1.0;
    }
    2.0 / SQRT_PI * x * (-x * x).exp() * sum
}

/// `e^{x²} erfc(x)` for `x ≥ 1.5` by the Laplace continued fraction (modified Lentz).
fn erfcx_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        if d == 0.0 {
            d = tiny;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c == 0.0 {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (SQRT_PI * f)
}

/// Scaled complement `e^{x²} erfc(x)`.
pub fn erfcx_real(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx_real(-x);
    }
    if x < 1.5 {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        erfcx_cf(x)
    }
}

pub fn erfc_real(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc_real(-x);
    }
    if x < 1.5 {
        1.0 - erf_series(x)
    } else if x > 27.3 {
        0.0
    } else {
        (-x * x).exp() * erfcx_cf(x)
    }
}

fn erf_series_complex(z: Complex64) -> Complex64 {
    let z2 = -z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 1.0;
    loop {
        term = term * z2 / n;
        let add = term / (2.0 * n + 1.0);
        sum += add;
        if add.norm() < 1e-17 * sum.norm() || n > 200.0 {
            break;
        }
        n += 1.0;
    }
    sum * (2.0 / SQRT_PI)
}

fn erfcx_cf_complex(z: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z;
    let mut c = z;
    let mut d = Complex64::zero();
    for n in 1..5000 {
        let a = n as f64 / 2.0;
        d = z + d * a;
        if d.norm() == 0.0 {
            d = tiny;
        }
        d = d.inv();
        c = z + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (f * SQRT_PI).inv()
}

/// `e^{z²} erfc(z)` for `ℜz ≥ 0`.
pub fn erfcx_complex(z: Complex64) -> Complex64 {
    if z.norm() < 2.0 {
        (z * z).exp() * (Complex64::one() - erf_series_complex(z))
    } else {
        erfcx_cf_complex(z)
    }
}

/// `erfc(z)` for `ℜz ≥ 0`.
pub fn erfc_complex(z: Complex64) -> Complex64 {
    if z.norm() < 2.0 {
        Complex64::one() - erf_series_complex(z)
    } else {
        (-z * z).exp() * erfcx_cf_complex(z)
    }
}

/// `erfc(√(−iτ)·|x|)` with the principal root, positive on the imaginary axis.
pub fn erfc_scaled(tau: Complex64, x: f64) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return invalid(format!("τ must lie in the upper half-plane, got {tau}"));
    }
    let w = (Complex64::new(0.0, -1.0) * tau).sqrt() * x.abs();
    Ok(erfc_complex(w))
}

fn check_positive(x: f64, name: &str) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return invalid(format!(
            "{name} requires a positive finite argument, got {x}"
        ));
    }
    Ok(())
}

fn e1_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        term *= -x / k;
        let add = -term / k;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
        k += 1.0;
    }
    -EULER_GAMMA - x.ln() + sum
}

/// `e^x Γ(0, x)` for `x ≥ 1` by its continued fraction.
fn e1_scaled_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `Γ(0, x) = ∫ₓ^∞ e^{−t} dt/t`.
pub fn gamma0(x: f64) -> Result<f64> {
    check_positive(x, "Γ(0, x)")?;
    Ok(if x < 1.0 {
        e1_series(x)
    } else {
        (-x).exp() * e1_scaled_cf(x)
    })
}

/// `e^x Γ(0, x)`, finite for all `x > 0`.
pub fn gamma0_scaled(x: f64) -> Result<f64> {
    check_positive(x, "Γ(0, x)")?;
    Ok(if x < 1.0 {
        x.exp() * e1_series(x)
    } else {
        e1_scaled_cf(x)
    })
}

/// `H(s, x) = Σ_{n≥0} (x+n)^{−s}` continued to all real `s ≠ 1`.
pub fn hurwitz(s: f64, x: f64) -> Result<f64> {
    if s == 1.0 {
        return invalid("Hurwitz zeta has a pole at s = 1");
    }
    if !(x > 0.0 && x <= 1.0) {
        return invalid(format!("Hurwitz zeta shift must lie in (0, 1], got {x}"));
    }
    let m = 20 + s.abs().ceil() as usize;
    let mut sum: f64 = (0..m).map(|n| (x + n as f64).powf(-s)).sum();
    let a = x + m as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising factorial (s)_{2k-1} / (2k)!
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = k + 1;
        sum += b / fact * rising * a.powf(-s - (2 * k) as f64 + 1.0);
        rising *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    Ok(sum)
}

pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive(x, "log Γ")?;
    let mut shift = 0.0;
    let mut prod = 1.0;
    let mut y = x;
    while y < 10.0 {
        prod *= y;
        if prod > 1e280 {
            shift += prod.ln();
            prod = 1.0;
        }
        y += 1.0;
    }
    shift += prod.ln();
    let mut series = 0.0;
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(7).enumerate() {
        let k = (k + 1) as f64;
        series += b / (2.0 * k * (2.0 * k - 1.0)) * pow;
        pow *= inv2;
    }
    Ok((y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series - shift)
}

pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma")?;
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().take(7).enumerate() {
        series += b / (2.0 * (k + 1) as f64) * pow;
        pow *= inv2;
    }
    Ok(acc + y.ln() - 0.5 / y - series)
}

/// `Γ′(1/2)/Γ(1/2) = −γ − 2 log 2`.
pub fn digamma_half() -> f64 {
    -EULER_GAMMA - 2.0 * LN_2
}

/// Representative of `x` mod 1 in `(0, 1]`.
pub fn frac_angle(x: Rational64) -> Rational64 {
    let r = x - x.floor();
    if r.is_zero() {
        Rational64::one()
    } else {
        r
    }
}

pub fn rational_to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}
