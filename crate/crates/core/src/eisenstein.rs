//! Fourier expansions of the weight-one Eisenstein series `ϑ_h` and of its
//! harmonic preimage `θ̃_h`, with certified evaluation.
//!
//! Norm indices are the integers `m = N·n`, so `qⁿ = e(mτ/N)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernel::{Certified, KernelValue};
use crate::lattice::{divisor_count, factorize, CosetIndex, LatticeContext};
use crate::phase::e_real;
use crate::schwartz::ModularPoint;
use crate::special::{digamma_half, frac_angle, gamma0_scaled, log_gamma, rational_to_f64};
use crate::weil::VectorValuedData;

/// `Σ q_p·log p` over primes `p`, the exact form of `c̃_h(m)` for `m > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogSkeleton {
    terms: BTreeMap<u64, i64>,
}

impl LogSkeleton {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `log|a/b|` for nonzero integers.
    pub fn log_ratio(a: i64, b: i64) -> Self {
        let mut s = Self::zero();
        for (p, k) in factorize(a.unsigned_abs()) {
            s.add_term(p, i64::from(k));
        }
        for (p, k) in factorize(b.unsigned_abs()) {
            s.add_term(p, -i64::from(k));
        }
        s
    }

    fn add_term(&mut self, p: u64, q: i64) {
        let entry = self.terms.entry(p).or_insert(0);
        *entry += q;
        if *entry == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: i64) {
        for (&p, &q) in &other.terms {
            self.add_term(p, factor * q);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> Vec<(u64, i64)> {
        self.terms.iter().map(|(&p, &q)| (p, q)).collect()
    }

    pub fn from_terms(terms: &[(u64, i64)]) -> Self {
        let mut s = Self::zero();
        for &(p, q) in terms {
            s.add_term(p, q);
        }
        s
    }

    pub fn value(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&p, &q)| q as f64 * (p as f64).ln())
            .sum()
    }

    pub fn negated(&self) -> Self {
        let mut s = Self::zero();
        s.add_scaled(self, -1);
        s
    }
}

impl std::fmt::Display for LogSkeleton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, q)| format!("{q}*log({p})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Constant term `c_h(0)`.
pub fn c0(ctx: &LatticeContext, h: CosetIndex) -> Rational64 {
    let n = ctx.level_i64();
    let half = Rational64::new(1, 2);
    match (h.h1() == 0, h.h2() == 0) {
        (false, true) => half - frac_angle(Rational64::new(i64::from(h.h1()), n)),
        (true, false) => half - frac_angle(Rational64::new(i64::from(h.h2()), n)),
        _ => Rational64::zero(),
    }
}

/// `c_h(m/N) = Σ sgn(x1)` over `X ∈ L + h` with `x1·x2 = m`.
pub fn c(ctx: &LatticeContext, h: CosetIndex, m: i64) -> Result<i64> {
    if m <= 0 {
        return invalid(format!("coefficient index must be positive, got {m}"));
    }
    Ok(ctx
        .vectors_with_norm(h, m)?
        .iter()
        .map(|x| x.x1.signum())
        .sum())
}

/// Exact form of `c̃_h(m/N) = Σ sgn(x1)·log|x1/x2|` over `x1·x2 = −m`.
pub fn c_tilde_symbolic(ctx: &LatticeContext, h: CosetIndex, m: i64) -> Result<LogSkeleton> {
    if m <= 0 {
        return invalid(format!("coefficient index must be positive, got {m}"));
    }
    let mut s = LogSkeleton::zero();
    for x in ctx.vectors_with_norm(h, -m)? {
        s.add_scaled(&LogSkeleton::log_ratio(x.x1, x.x2), x.x1.signum());
    }
    Ok(s)
}

pub fn c_tilde(ctx: &LatticeContext, h: CosetIndex, m: i64) -> Result<f64> {
    Ok(c_tilde_symbolic(ctx, h, m)?.value())
}

/// `c̃_h(0) = c_h(0)(log πN − Γ′(1/2)/Γ(1/2)) − log Γ(⟨k/N⟩) + log Γ(⟨−k/N⟩)`,
/// `k` the coordinate of `h` not divisible by `N`.
pub fn c_tilde0(ctx: &LatticeContext, h: CosetIndex) -> Result<f64> {
    let k = match (h.h1() == 0, h.h2() == 0) {
        (false, true) => i64::from(h.h1()),
        (true, false) => i64::from(h.h2()),
        _ => return Ok(0.0),
    };
    let n = ctx.level_i64();
    let a = rational_to_f64(frac_angle(Rational64::new(k, n)));
    let b = rational_to_f64(frac_angle(Rational64::new(-k, n)));
    let constant = rational_to_f64(c0(ctx, h)) * ((PI * n as f64).ln() - digamma_half());
    Ok(constant - log_gamma(a)? + log_gamma(b)?)
}

fn in_support(ctx: &LatticeContext, m: i64, residue: i64) -> bool {
    (m - residue).rem_euclid(ctx.level_i64()) == 0
}

#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    ctx: LatticeContext,
    h: CosetIndex,
    m_max: i64,
    coeffs: BTreeMap<i64, Rational64>,
}

impl QExpansion {
    /// Validated constructor; every stored `m` must lie in `[0, m_max]`.
    pub fn from_parts(
        ctx: LatticeContext,
        h: CosetIndex,
        m_max: i64,
        coeffs: BTreeMap<i64, Rational64>,
    ) -> Result<Self> {
        if m_max < 0 || coeffs.keys().any(|&m| m < 0 || m > m_max) {
            return invalid("coefficient indices must lie in [0, m_max]");
        }
        Ok(Self {
            ctx,
            h,
            m_max,
            coeffs,
        })
    }

    pub fn context(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn coset(&self) -> CosetIndex {
        self.h
    }

    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn coeff(&self, m: i64) -> Rational64 {
        self.coeffs
            .get(&m)
            .copied()
            .unwrap_or_else(Rational64::zero)
    }

    /// Stored `(m, c_h(m/N))` in increasing `m`.
    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Rational64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn to_json(&self) -> ExpansionJson {
        ExpansionJson {
            level: self.ctx.level(),
            h: [self.h.h1(), self.h.h2()],
            m_max: self.m_max,
            c: rational_rows(&self.coeffs),
            c_tilde: Vec::new(),
        }
    }

    pub fn from_json(json: &ExpansionJson) -> Result<Self> {
        let (ctx, h) = json.context()?;
        Self::from_parts(ctx, h, json.m_max, json.rationals())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,num,den\n");
        for (m, c) in self.coeffs() {
            out.push_str(&format!("{m},{},{}\n", c.numer(), c.denom()));
        }
        out
    }
}

/// `ϑ_h` up to `m_max`: `c_h(0)` and every `c_h(m/N)` with `m ≡ h1·h2 (mod N)`.
pub fn q_expansion(ctx: &LatticeContext, h: CosetIndex, m_max: i64) -> Result<QExpansion> {
    if m_max < 0 {
        return invalid(format!("m_max must be nonnegative, got {m_max}"));
    }
    let residue = ctx.norm_residue(h);
    let mut coeffs = BTreeMap::new();
    for m in 0..=m_max {
        if !in_support(ctx, m, residue) {
            continue;
        }
        let value = if m == 0 {
            c0(ctx, h)
        } else {
            Rational64::from_integer(c(ctx, h, m)?)
        };
        coeffs.insert(m, value);
    }
    Ok(QExpansion {
        ctx: *ctx,
        h,
        m_max,
        coeffs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicExpansion {
    ctx: LatticeContext,
    h: CosetIndex,
    m_max: i64,
    hol: BTreeMap<i64, (f64, Option<LogSkeleton>)>,
    log_v: Rational64,
    nonhol: BTreeMap<i64, Rational64>,
}

impl HarmonicExpansion {
    /// `hol` holds `m ↦ (c̃_h(m/N), exact form)`; `nonhol` the coefficients of `−Γ(0, 4πvm/N)e(−mτ/N)`.
    pub fn from_parts(
        ctx: LatticeContext,
        h: CosetIndex,
        m_max: i64,
        hol: BTreeMap<i64, (f64, Option<LogSkeleton>)>,
        log_v: Rational64,
        nonhol: BTreeMap<i64, Rational64>,
    ) -> Result<Self> {
        let bad = |m: i64, low: i64| m < low || m > m_max;
        if m_max < 0 || hol.keys().any(|&m| bad(m, 0)) || nonhol.keys().any(|&m| bad(m, 1)) {
            return invalid("coefficient indices out of range");
        }
        Ok(Self {
            ctx,
            h,
            m_max,
            hol,
            log_v,
            nonhol,
        })
    }

    pub fn context(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn coset(&self) -> CosetIndex {
        self.h
    }

    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn hol_coeff(&self, m: i64) -> f64 {
        self.hol.get(&m).map_or(0.0, |c| c.0)
    }

    pub fn skeleton(&self, m: i64) -> Option<&LogSkeleton> {
        self.hol.get(&m).and_then(|c| c.1.as_ref())
    }

    pub fn hol_coeffs(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.hol.iter().map(|(&m, c)| (m, c.0))
    }

    pub fn log_v_coeff(&self) -> Rational64 {
        self.log_v
    }

    pub fn nonhol_coeffs(&self) -> impl Iterator<Item = (i64, Rational64)> + '_ {
        self.nonhol.iter().map(|(&m, &c)| (m, c))
    }

    pub fn to_json(&self) -> ExpansionJson {
        let mut c = BTreeMap::new();
        c.insert(0, self.log_v);
        c.extend(self.nonhol.iter().map(|(&m, &v)| (m, v)));
        let c_tilde = self
            .hol
            .iter()
            .map(|(&m, (value, sk))| HolRow {
                m,
                value: *value,
                symbolic: sk.as_ref().map(LogSkeleton::terms),
            })
            .collect();
        ExpansionJson {
            level: self.ctx.level(),
            h: [self.h.h1(), self.h.h2()],
            m_max: self.m_max,
            c: rational_rows(&c),
            c_tilde,
        }
    }

    pub fn from_json(json: &ExpansionJson) -> Result<Self> {
        let (ctx, h) = json.context()?;
        let mut nonhol = json.rationals();
        let log_v = nonhol.remove(&0).unwrap_or_else(Rational64::zero);
        let hol = json
            .c_tilde
            .iter()
            .map(|r| {
                (
                    r.m,
                    (r.value, r.symbolic.as_deref().map(LogSkeleton::from_terms)),
                )
            })
            .collect();
        Self::from_parts(ctx, h, json.m_max, hol, log_v, nonhol)
    }

    /// One row per `m`: `m,num,den,c_tilde,symbolic`, empty where a table has no entry.
    pub fn to_csv(&self) -> String {
        let mut rows: BTreeMap<i64, (String, String, String, String)> = BTreeMap::new();
        let mut put_c = |m: i64, v: Rational64| {
            let r = rows.entry(m).or_default();
            r.0 = v.numer().to_string();
            r.1 = v.denom().to_string();
        };
        put_c(0, self.log_v);
        for (&m, &v) in &self.nonhol {
            put_c(m, v);
        }
        for (&m, (value, sk)) in &self.hol {
            let r = rows.entry(m).or_default();
            r.2 = format!("{value:.17e}");
            r.3 = sk.as_ref().map(|s| s.to_string()).unwrap_or_default();
        }
        let mut out = String::from("m,num,den,c_tilde,symbolic\n");
        for (m, (num, den, ct, sy)) in rows {
            out.push_str(&format!("{m},{num},{den},{ct},{sy}\n"));
        }
        out
    }
}

/// `θ̃_h` up to `m_max`: holomorphic part on `m ≡ −h1·h2`, non-holomorphic on `m ≡ h1·h2`.
pub fn harmonic_expansion(
    ctx: &LatticeContext,
    h: CosetIndex,
    m_max: i64,
) -> Result<HarmonicExpansion> {
    let q = q_expansion(ctx, h, m_max)?;
    let residue = ctx.norm_residue(h);
    let mut hol = BTreeMap::new();
    hol.insert(0, (c_tilde0(ctx, h)?, None));
    for m in 1..=m_max {
        if in_support(ctx, m, -residue) {
            let sk = c_tilde_symbolic(ctx, h, m)?;
            hol.insert(m, (sk.value(), Some(sk)));
        }
    }
    let log_v = q.coeff(0);
    let nonhol = q.coeffs.into_iter().filter(|&(m, _)| m > 0).collect();
    Ok(HarmonicExpansion {
        ctx: *ctx,
        h,
        m_max,
        hol,
        log_v,
        nonhol,
    })
}

/// Image under `ξ₁`: `c log v ↦ c`, `−c Γ(0, 4πvm/N) e(−mτ/N) ↦ c e(mτ/N)`, holomorphic part ↦ 0.
pub fn xi_expansion(exp: &HarmonicExpansion) -> QExpansion {
    let mut coeffs = exp.nonhol.clone();
    if exp.ctx.norm_residue(exp.h) == 0 {
        coeffs.insert(0, exp.log_v);
    }
    QExpansion {
        ctx: exp.ctx,
        h: exp.h,
        m_max: exp.m_max,
        coeffs,
    }
}

/// `Σ_{m>M} m rᵐ = r^{M+1}((M+1) − M r)/(1−r)²`.
fn weighted_geometric_tail(r: f64, m_max: i64) -> f64 {
    let m = m_max as f64;
    r.powf(m + 1.0) * ((m + 1.0) - m * r) / ((1.0 - r) * (1.0 - r))
}

/// Bound on everything past `m_max` in `ϑ_h` from `|c_h(m/N)| ≤ 2d(mN) ≤ 4√(mN)`.
pub fn vartheta_tail_bound(ctx: &LatticeContext, v: f64, m_max: i64) -> f64 {
    let n = ctx.level_f64();
    4.0 * n.sqrt() * weighted_geometric_tail((-2.0 * PI * v / n).exp(), m_max)
}

/// Bound past `m_max` in `θ̃_h`, using `|c̃| ≤ 2d(mN)log(mN) ≤ 4mN` and `e^xΓ(0,x) ≤ 1/x`.
pub fn vartheta_tilde_tail_bound(ctx: &LatticeContext, v: f64, m_max: i64) -> f64 {
    let n = ctx.level_f64();
    let r = (-2.0 * PI * v / n).exp();
    let hol = 4.0 * n * weighted_geometric_tail(r, m_max);
    let nonhol = 4.0 * n.sqrt() * n / (4.0 * PI * v) * weighted_geometric_tail(r, m_max);
    hol + nonhol
}

/// Smallest `m_max` whose certified tails, for both series, are below `tol`.
pub fn required_m_max(ctx: &LatticeContext, v: f64, tol: f64) -> Result<i64> {
    if !(tol > 0.0) || !(v > 0.0) {
        return invalid("tolerance and v must be positive");
    }
    let mut m = 1;
    while vartheta_tail_bound(ctx, v, m).max(vartheta_tilde_tail_bound(ctx, v, m)) > tol {
        m += 1 + m / 4;
        if m > 10_000_000 {
            return Err(Error::Truncation {
                tol,
                bound: vartheta_tilde_tail_bound(ctx, v, m),
            });
        }
    }
    Ok(m)
}

/// `Σ c_h(m/N) e(mτ/N)` over the stored coefficients, failing if the tail exceeds `tol`.
pub fn eval_vartheta(exp: &QExpansion, tau: &ModularPoint, tol: f64) -> Result<Certified> {
    let n = exp.ctx.level_f64();
    let tail = vartheta_tail_bound(&exp.ctx, tau.v(), exp.m_max);
    if tail > tol {
        return Err(Error::Truncation { tol, bound: tail });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (&m, c) in exp.coeffs.iter().rev() {
        let m = m as f64;
        sum += rational_to_f64(*c) * (-2.0 * PI * tau.v() * m / n).exp() * e_real(m * tau.u() / n);
    }
    Ok(Certified {
        value: sum,
        tail_bound: tail,
    })
}

/// `Σ c̃ e(mτ/N) + c_h(0) log v − Σ c_h(m/N) Γ(0, 4πvm/N) e(−mτ/N)`.
pub fn eval_vartheta_tilde(
    exp: &HarmonicExpansion,
    tau: &ModularPoint,
    tol: f64,
) -> Result<Certified> {
    let n = exp.ctx.level_f64();
    let (u, v) = (tau.u(), tau.v());
    let tail = vartheta_tilde_tail_bound(&exp.ctx, v, exp.m_max);
    if tail > tol {
        return Err(Error::Truncation { tol, bound: tail });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (&m, &c) in exp.nonhol.iter().rev() {
        if c.is_zero() {
            continue;
        }
        let x = 4.0 * PI * v * m as f64 / n;
        let weight = gamma0_scaled(x)? * (-0.5 * x).exp();
        sum -= rational_to_f64(c) * weight * e_real(-(m as f64) * u / n);
    }
    for (&m, &(c, _)) in exp.hol.iter().rev() {
        let m = m as f64;
        sum += c * (-2.0 * PI * v * m / n).exp() * e_real(m * u / n);
    }
    sum += rational_to_f64(exp.log_v) * v.ln();
    Ok(Certified {
        value: sum,
        tail_bound: tail,
    })
}

fn vector_eval(
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

/// `ϑ(τ) = Σ_h ϑ_h(τ) 𝔢_h` with the truncation chosen from `tol`.
pub fn vartheta(ctx: &LatticeContext, tau: &ModularPoint, tol: f64) -> Result<KernelValue> {
    let m_max = required_m_max(ctx, tau.v(), tol)?;
    vector_eval(ctx, |h| {
        eval_vartheta(&q_expansion(ctx, h, m_max)?, tau, tol)
    })
}

pub fn vartheta_tilde(ctx: &LatticeContext, tau: &ModularPoint, tol: f64) -> Result<KernelValue> {
    let m_max = required_m_max(ctx, tau.v(), tol)?;
    vector_eval(ctx, |h| {
        eval_vartheta_tilde(&harmonic_expansion(ctx, h, m_max)?, tau, tol)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalRow {
    pub m: i64,
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolRow {
    pub m: i64,
    pub value: f64,
    pub symbolic: Option<Vec<(u64, i64)>>,
}

/// Shared JSON shape of both expansion kinds; `c_tilde` is empty for `ϑ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionJson {
    #[serde(rename = "N")]
    pub level: u32,
    pub h: [u32; 2],
    pub m_max: i64,
    pub c: Vec<RationalRow>,
    #[serde(default)]
    pub c_tilde: Vec<HolRow>,
}

impl ExpansionJson {
    fn context(&self) -> Result<(LatticeContext, CosetIndex)> {
        let ctx = LatticeContext::new(self.level)?;
        let h = ctx.coset(i64::from(self.h[0]), i64::from(self.h[1]));
        Ok((ctx, h))
    }

    fn rationals(&self) -> BTreeMap<i64, Rational64> {
        self.c
            .iter()
            .map(|r| (r.m, Rational64::new(r.num, r.den)))
            .collect()
    }
}

fn rational_rows(map: &BTreeMap<i64, Rational64>) -> Vec<RationalRow> {
    map.iter()
        .map(|(&m, v)| RationalRow {
            m,
            num: *v.numer(),
            den: *v.denom(),
        })
        .collect()
}

/// `|c_h(m/N)| ≤ 2·d(mN)`.
pub fn coefficient_bound(ctx: &LatticeContext, m: i64) -> u64 {
    2 * divisor_count(m.unsigned_abs() * u64::from(ctx.level())) as u64
}

impl QExpansion {
    /// Largest stored `|c_h(m/N)|` relative to `2d(mN)`; at most 1.
    pub fn max_bound_ratio(&self) -> f64 {
        self.coeffs
            .iter()
            .filter(|(&m, _)| m > 0)
            .map(|(&m, c)| rational_to_f64(c.abs()) / coefficient_bound(&self.ctx, m) as f64)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(n: u32) -> LatticeContext {
        LatticeContext::new(n).unwrap()
    }

    fn box_scan(c: &LatticeContext, h: CosetIndex, target: i64) -> (i64, f64) {
        let r = target.abs();
        let mut count = 0;
        let mut logs = 0.0;
        for x1 in -r..=r {
            for x2 in -r..=r {
                if x1 * x2 == target && c.coset(x1, x2) == h {
                    count += x1.signum();
                    logs += x1.signum() as f64 * ((x1 as f64).abs() / (x2 as f64).abs()).ln();
                }
            }
        }
        (count, logs)
    }

    #[test]
    fn constant_term_examples() {
        let c3 = ctx(3);
        assert_eq!(c0(&c3, c3.coset(1, 0)), Rational64::new(1, 6));
        assert_eq!(c0(&c3, c3.coset(2, 0)), Rational64::new(-1, 6));
        assert_eq!(c0(&c3, c3.coset(0, 1)), Rational64::new(1, 6));
        assert_eq!(c0(&c3, c3.coset(1, 2)), Rational64::zero());
        assert_eq!(c0(&c3, c3.coset(0, 0)), Rational64::zero());
        assert_eq!(c_tilde0(&c3, c3.coset(0, 0)).unwrap(), 0.0);
        assert_eq!(c_tilde0(&c3, c3.coset(1, 2)).unwrap(), 0.0);
        // (1/6)(log 3π + γ + 2 log 2) − log Γ(1/3) + log Γ(2/3), evaluated independently
        let want = (1.0 / 6.0) * ((3.0 * PI).ln() + 0.5772156649015329 + 2.0 * 2f64.ln())
            - 0.9854206469277670
            + 0.3031502751475220;
        assert!((c_tilde0(&c3, c3.coset(0, 1)).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn coefficient_examples() {
        let c3 = ctx(3);
        assert_eq!(c(&c3, c3.coset(1, 0), 3).unwrap(), 1);
        assert_eq!(c(&c3, c3.coset(2, 0), 3).unwrap(), -1);
        assert!(c(&c3, c3.coset(1, 0), 0).is_err());
        let sk = c_tilde_symbolic(&c3, c3.coset(1, 0), 3).unwrap();
        assert_eq!(sk.terms(), vec![(3, -1)]);
        assert!((sk.value() + 3f64.ln()).abs() < 1e-15);
        let c1 = ctx(1);
        for m in 1..20 {
            assert_eq!(c(&c1, c1.coset(0, 0), m).unwrap(), 0);
            assert!(c_tilde_symbolic(&c1, c1.coset(0, 0), m).unwrap().is_zero());
        }
    }

    #[test]
    fn divisor_enumeration_matches_box_scan() {
        for n in 1..=4 {
            let c = ctx(n);
            for h in c.cosets() {
                for m in 1..=12 {
                    let (count, _) = box_scan(&c, h, m);
                    let (_, logs) = box_scan(&c, h, -m);
                    assert_eq!(self::c(&c, h, m).unwrap(), count);
                    assert!((c_tilde(&c, h, m).unwrap() - logs).abs() < 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn antisymmetry(n in 1u32..8, a in 0i64..8, b in 0i64..8, m in 1i64..60) {
            let c = ctx(n);
            let h = c.coset(a, b);
            let g = c.negate(h);
            prop_assert_eq!(self::c(&c, h, m).unwrap(), -self::c(&c, g, m).unwrap());
            prop_assert_eq!(c0(&c, h), -c0(&c, g));
            prop_assert_eq!(
                c_tilde_symbolic(&c, h, m).unwrap(),
                c_tilde_symbolic(&c, g, m).unwrap().negated()
            );
            prop_assert!((c_tilde0(&c, h).unwrap() + c_tilde0(&c, g).unwrap()).abs() < 1e-13);
        }

        #[test]
        fn support_congruences(n in 1u32..8, a in 0i64..8, b in 0i64..8) {
            let c = ctx(n);
            let h = c.coset(a, b);
            let r = c.norm_residue(h);
            let q = q_expansion(&c, h, 40).unwrap();
            for (m, v) in q.coeffs() {
                prop_assert!(in_support(&c, m, r));
                prop_assert!(v.is_zero() || m == 0 || in_support(&c, m, r));
            }
            prop_assert!(q.max_bound_ratio() <= 1.0);
            let hx = harmonic_expansion(&c, h, 40).unwrap();
            for (m, _) in hx.hol_coeffs() {
                prop_assert!(m == 0 || in_support(&c, m, -r));
            }
        }
    }

    #[test]
    fn expansion_fixture() {
        let c3 = ctx(3);
        let q = q_expansion(&c3, c3.coset(1, 0), 9).unwrap();
        let ms: Vec<i64> = q.coeffs().map(|(m, _)| m).collect();
        assert_eq!(ms, vec![0, 3, 6, 9]);
        assert_eq!(q.coeff(0), Rational64::new(1, 6));
        assert_eq!(q.coeff(3), Rational64::from_integer(1));
        assert!(q_expansion(&ctx(1), ctx(1).coset(0, 0), 30)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn xi_expansion_recovers_q_expansion() {
        for n in 1..=6 {
            let c = ctx(n);
            for h in c.cosets() {
                let hx = harmonic_expansion(&c, h, 30).unwrap();
                assert_eq!(
                    xi_expansion(&hx),
                    q_expansion(&c, h, 30).unwrap(),
                    "N={n} h={h}"
                );
            }
        }
        let c3 = ctx(3);
        let h = c3.coset(1, 0);
        let mut hol = BTreeMap::new();
        hol.insert(3, (1.5, None));
        let pure =
            HarmonicExpansion::from_parts(c3, h, 9, hol, Rational64::zero(), BTreeMap::new())
                .unwrap();
        assert!(xi_expansion(&pure).is_zero());
    }

    #[test]
    fn evaluation_and_tails() {
        let c3 = ctx(3);
        let h = c3.coset(1, 0);
        let i = ModularPoint::i();
        let a = eval_vartheta(&q_expansion(&c3, h, 60).unwrap(), &i, 1e-12).unwrap();
        let b = eval_vartheta(&q_expansion(&c3, h, 120).unwrap(), &i, 1e-12).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
        assert!(eval_vartheta(&q_expansion(&c3, h, 3).unwrap(), &i, 1e-12).is_err());

        let far = ModularPoint::new(0.0, 10.0).unwrap();
        let v = eval_vartheta(&q_expansion(&c3, h, 30).unwrap(), &far, 1e-12).unwrap();
        assert!((v.value - 1.0 / 6.0).norm() < 2.0 * (-2.0 * PI * 10.0 / 3.0).exp());

        let hx = harmonic_expansion(&c3, h, 30).unwrap();
        let w = eval_vartheta_tilde(&hx, &far, 1e-12).unwrap();
        let asym = c_tilde0(&c3, h).unwrap() + 10f64.ln() / 6.0;
        assert!((w.value - asym).norm() < 1e-8);

        let x = eval_vartheta_tilde(&harmonic_expansion(&c3, h, 80).unwrap(), &i, 1e-12).unwrap();
        let y = eval_vartheta_tilde(&harmonic_expansion(&c3, h, 160).unwrap(), &i, 1e-12).unwrap();
        assert!((x.value - y.value).norm() < 1e-12);
        let c1 = ctx(1);
        let z = eval_vartheta_tilde(
            &harmonic_expansion(&c1, c1.coset(0, 0), 30).unwrap(),
            &i,
            1e-6,
        )
        .unwrap();
        assert_eq!(z.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn json_and_csv_round_trip() {
        let c3 = ctx(3);
        let hx = harmonic_expansion(&c3, c3.coset(1, 1), 12).unwrap();
        let text = serde_json::to_string(&hx.to_json()).unwrap();
        assert!(text.starts_with("{\"N\":3,\"h\":[1,1],\"m_max\":12"));
        let back = HarmonicExpansion::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, hx);
        let q = q_expansion(&c3, c3.coset(1, 0), 9).unwrap();
        assert_eq!(QExpansion::from_json(&q.to_json()).unwrap(), q);
        assert_eq!(q.to_csv(), "m,num,den\n0,1,6\n3,1,1\n6,0,1\n9,1,1\n");
        let csv = harmonic_expansion(&c3, c3.coset(1, 0), 9).unwrap().to_csv();
        assert_eq!(csv.lines().count(), 5);
    }
}
