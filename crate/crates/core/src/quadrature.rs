//! Adaptive Gauss–Kronrod integration, fixed Gauss–Legendre panels and Wynn's epsilon.
//!
//! Everything is generic over real and complex integrands through [`Integrand`].

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub trait Integrand:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
pub fn gk15<T: Integrand>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.magnitude() * WGK[7];
    let mut values = [(T::default(), T::default()); 7];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).magnitude();
    for (j, (f1, f2)) in values.iter().enumerate() {
        resasc += WGK[j] * ((*f1 - mean).magnitude() + (*f2 - mean).magnitude());
    }
    let scale = half.abs();
    resabs *= scale;
    resasc *= scale;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (kronrod * half, err)
}

struct Interval<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

/// Globally adaptive bisection over the segments `points[i]..points[i+1]`.
pub fn integrate_points<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    points: &[f64],
    cfg: &QuadConfig,
) -> Result<Estimate<T>> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two integration points".into(),
        ));
    }
    let mut intervals: Vec<Interval<T>> = Vec::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (value, error) = gk15(&mut f, w[0], w[1]);
        evaluations += 15;
        intervals.push(Interval {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    loop {
        let total = intervals
            .iter()
            .fold(T::default(), |acc, iv| acc + iv.value);
        let error: f64 = intervals.iter().map(|iv| iv.error).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if error <= tol {
            return Ok(Estimate {
                value: total,
                error,
                evaluations,
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .filter(|(_, iv)| (iv.b - iv.a).abs() > 1e-13 * (1.0 + iv.a.abs().max(iv.b.abs())))
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst.filter(|_| intervals.len() < cfg.max_intervals) else {
            return Err(Error::Quadrature {
                estimate: error,
                tol,
            });
        };
        let iv = intervals.swap_remove(i);
        let mid = 0.5 * (iv.a + iv.b);
        for (a, b) in [(iv.a, mid), (mid, iv.b)] {
            let (value, error) = gk15(&mut f, a, b);
            evaluations += 15;
            intervals.push(Interval { a, b, value, error });
        }
    }
}

pub fn integrate<T: Integrand>(
    f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<Estimate<T>> {
    integrate_points(f, &[a, b], cfg)
}

/// `∫_a^∞ f` through `x = a + s/(1−s)`.
pub fn integrate_upper<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    cfg: &QuadConfig,
) -> Result<Estimate<T>> {
    integrate(
        |s| {
            let d = 1.0 - s;
            f(a + s / d) * (1.0 / (d * d))
        },
        0.0,
        1.0,
        cfg,
    )
}

/// `∫_{−∞}^b f`.
pub fn integrate_lower<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    b: f64,
    cfg: &QuadConfig,
) -> Result<Estimate<T>> {
    integrate_upper(|x| f(-x), -b, cfg)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// A reusable composite Gauss–Legendre rule on a list of panel edges.
#[derive(Clone, Debug)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    /// Panels of width at most `width` between consecutive `edges`.
    pub fn new(edges: &[f64], width: f64, order: usize) -> Self {
        let (gx, gw) = gauss_legendre(order);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let count = ((hi - lo) / width).ceil().max(1.0) as usize;
            let h = (hi - lo) / count as f64;
            for p in 0..count {
                let l = lo + p as f64 * h;
                for (x, wt) in gx.iter().zip(&gw) {
                    nodes.push(l + 0.5 * h * (x + 1.0));
                    weights.push(0.5 * h * wt);
                }
            }
        }
        Self { nodes, weights }
    }

    pub fn apply<T: Integrand>(&self, mut f: impl FnMut(f64) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&x, &w)| acc + f(x) * w)
    }
}

/// Limit of a slowly converging sequence by Wynn's epsilon algorithm.
pub fn wynn_epsilon<T>(seq: &[T]) -> T
where
    T: Integrand + Div<Output = T> + From<f64>,
{
    let n = seq.len();
    if n == 0 {
        return T::default();
    }
    let mut prev = vec![T::default(); n + 1];
    let mut cur: Vec<T> = seq.to_vec();
    let mut best = seq[n - 1];
    let mut column = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff.magnitude() == 0.0 {
                return if column % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + T::from(1.0) / diff);
        }
        prev = cur;
        cur = next;
        column += 1;
        if column % 2 == 0 {
            best = cur[cur.len() - 1];
        }
    }
    best
}

/// `∫_a^∞ f` for an integrand whose oscillation has (half-)period `period`.
///
/// Partial integrals over consecutive periods are summed and the partial sums are
/// accelerated by Wynn's epsilon until two successive extrapolations agree.
pub fn integrate_oscillatory<T>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    period: f64,
    cfg: &QuadConfig,
    max_pieces: usize,
) -> Result<Estimate<T>>
where
    T: Integrand + Div<Output = T> + From<f64>,
{
    let mut partial = Vec::new();
    let mut sum = T::default();
    let mut evaluations = 0;
    let mut last: Option<T> = None;
    let mut last_gap = f64::INFINITY;
    for k in 0..max_pieces {
        let lo = a + k as f64 * period;
        let piece = integrate(&mut f, lo, lo + period, cfg)?;
        evaluations += piece.evaluations;
        sum = sum + piece.value;
        partial.push(sum);
        if partial.len() >= 7 {
            let window = &partial[partial.len() - 7..];
            let extrapolated = wynn_epsilon(window);
            if let Some(prev) = last {
                let gap = (extrapolated - prev).magnitude();
                let tol = cfg.abs_tol.max(cfg.rel_tol * extrapolated.magnitude());
                if gap <= tol && last_gap <= 10.0 * tol {
                    return Ok(Estimate {
                        value: extrapolated,
                        error: gap.max(last_gap),
                        evaluations,
                    });
                }
                last_gap = gap;
            }
            last = Some(extrapolated);
        }
    }
    Err(Error::Quadrature {
        estimate: last_gap,
        tol: cfg.abs_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_is_exact_for_low_degree() {
        for deg in 0..=22 {
            let (v, _) = gk15(&mut |x: f64| x.powi(deg), 0.0, 1.0);
            assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..2 * n {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((s - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn adaptive_handles_peaks_and_infinite_ranges() {
        let cfg = QuadConfig::default();
        let r = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, &cfg).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value - exact).abs() < 1e-10 * exact);

        let g = integrate_upper(|x: f64| (-x * x).exp(), 0.0, &cfg).unwrap();
        assert!((g.value - PI.sqrt() / 2.0).abs() < 1e-12);
        let h = integrate_lower(|x: f64| x.exp(), 1.0, &cfg).unwrap();
        assert!((h.value - 1f64.exp()).abs() < 1e-11);

        let z = integrate(|x: f64| Complex64::new(0.0, x).exp(), 0.0, PI, &cfg).unwrap();
        assert!((z.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn reports_failure_when_budget_is_exhausted() {
        let cfg = QuadConfig {
            max_intervals: 4,
            ..QuadConfig::default()
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn panel_rule_matches_exact_integral() {
        let rule = PanelRule::new(&[-2.0, 0.0, 3.0], 0.5, 12);
        let v = rule.apply(|x: f64| (-x * x).exp() * x.cos());
        let exact = {
            let cfg = QuadConfig::with_tol(1e-15, 1e-13);
            integrate(|x: f64| (-x * x).exp() * x.cos(), -2.0, 3.0, &cfg)
                .unwrap()
                .value
        };
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        let mut partial = Vec::new();
        let mut s = 0.0;
        for k in 0..20 {
            s += (-1f64).powi(k) / (k as f64 + 1.0);
            partial.push(s);
        }
        assert!((wynn_epsilon(&partial) - 2f64.ln()).abs() < 1e-12);
        assert!((partial[19] - 2f64.ln()).abs() > 1e-2);
    }

    #[test]
    fn oscillatory_dirichlet_integral() {
        let cfg = QuadConfig::with_tol(1e-12, 1e-12);
        let r = integrate_oscillatory(
            |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x },
            0.0,
            PI,
            &cfg,
            200,
        )
        .unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-10, "{}", r.value);
    }
}
