//! `e(a) = exp(2πi a)` and a few sign helpers shared by the analytic modules.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `e(z) = exp(2πi z)` for complex `z`.
#[inline]
pub fn e(z: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * z).exp()
}

/// `e(a)` for real `a`, reduced mod 1 first.
#[inline]
pub fn e_real(a: f64) -> Complex64 {
    let r = a - a.round();
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// `e(k/n)` with the numerator reduced mod `n`, so that e.g. `e(1/2)` is exactly `-1`.
pub fn unit_root(k: i64, n: i64) -> Complex64 {
    let k = k.rem_euclid(n);
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// Sign with `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_exact_on_axes() {
        assert_eq!(unit_root(1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_root(-3, 4), Complex64::new(0.0, 1.0));
        assert_eq!(unit_root(6, 3), Complex64::new(1.0, 0.0));
        assert!((unit_root(1, 3) - e_real(1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn complex_argument() {
        let z = e(Complex64::new(0.25, 1.0));
        assert!((z - Complex64::new(0.0, (-2.0 * PI).exp())).norm() < 1e-15);
        assert_eq!(sgn(0.0), 0.0);
        assert_eq!(sgn(-3.0), -1.0);
    }
}
