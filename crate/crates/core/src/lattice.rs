//! The split lattice `L = N·Z²` with quadratic form `Q((a, b)) = ab/N`.
//!
//! The dual lattice is `Z²`, so the discriminant group `L*/L` is `(Z/NZ)²`.
//! All form values live in `(1/N)Z` and are returned as exact rationals.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeContext {
    level: u32,
}

/// A class `h = (h1, h2)` in `(Z/NZ)²`, always stored reduced into `[0, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetIndex {
    h1: u32,
    h2: u32,
}

/// A vector of the dual lattice `Z²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    pub x1: i64,
    pub x2: i64,
}

/// Integer label `m` of the norm `n = m/N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormIndex {
    pub m: i64,
}

impl NormIndex {
    pub fn value(self, ctx: &LatticeContext) -> Rational64 {
        Rational64::new(self.m, ctx.level_i64())
    }
}

impl LatticeVector {
    pub const fn new(x1: i64, x2: i64) -> Self {
        Self { x1, x2 }
    }
}

impl std::ops::Add for LatticeVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl std::ops::Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2)
    }
}

impl CosetIndex {
    pub fn h1(self) -> u32 {
        self.h1
    }

    pub fn h2(self) -> u32 {
        self.h2
    }
}

impl std::fmt::Display for CosetIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.h1, self.h2)
    }
}

impl LatticeContext {
    pub fn new(level: u32) -> Result<Self> {
        if level == 0 {
            return invalid("level N must be at least 1");
        }
        Ok(Self { level })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub(crate) fn level_i64(&self) -> i64 {
        i64::from(self.level)
    }

    pub(crate) fn level_f64(&self) -> f64 {
        f64::from(self.level)
    }

    /// `|L*/L| = N²`.
    pub fn discriminant_order(&self) -> usize {
        (self.level as usize).pow(2)
    }

    /// Reduces an arbitrary integer pair to its coset representative.
    pub fn coset(&self, h1: i64, h2: i64) -> CosetIndex {
        let n = self.level_i64();
        CosetIndex {
            h1: h1.rem_euclid(n) as u32,
            h2: h2.rem_euclid(n) as u32,
        }
    }

    pub fn coset_of(&self, x: LatticeVector) -> CosetIndex {
        self.coset(x.x1, x.x2)
    }

    /// All cosets in row-major `(h1, h2)` order.
    pub fn cosets(&self) -> impl Iterator<Item = CosetIndex> + '_ {
        let n = self.level;
        (0..n).flat_map(move |h1| (0..n).map(move |h2| CosetIndex { h1, h2 }))
    }

    /// Position of `h` in the row-major ordering used for matrices and serialization.
    pub fn position(&self, h: CosetIndex) -> usize {
        h.h1 as usize * self.level as usize + h.h2 as usize
    }

    pub fn coset_at(&self, pos: usize) -> CosetIndex {
        let n = self.level as usize;
        CosetIndex {
            h1: (pos / n) as u32,
            h2: (pos % n) as u32,
        }
    }

    pub fn negate(&self, h: CosetIndex) -> CosetIndex {
        let n = self.level;
        CosetIndex {
            h1: (n - h.h1) % n,
            h2: (n - h.h2) % n,
        }
    }

    pub fn contains(&self, h: CosetIndex, x: LatticeVector) -> bool {
        self.coset_of(x) == h
    }

    pub fn quad_form(&self, x: LatticeVector) -> Rational64 {
        Rational64::new(x.x1 * x.x2, self.level_i64())
    }

    pub fn bilinear(&self, x: LatticeVector, y: LatticeVector) -> Rational64 {
        Rational64::new(x.x1 * y.x2 + x.x2 * y.x1, self.level_i64())
    }

    /// `Q(h)` of the coset representative, reduced to an integer `k` with `Q(h) ≡ k/N mod 1`.
    pub fn norm_residue(&self, h: CosetIndex) -> i64 {
        (i64::from(h.h1) * i64::from(h.h2)).rem_euclid(self.level_i64())
    }

    /// `(δ, h) = B(δ, h)` mod 1 as an integer `k` with `B ≡ k/N`.
    pub fn pairing_residue(&self, delta: CosetIndex, h: CosetIndex) -> i64 {
        let (d1, d2) = (i64::from(delta.h1), i64::from(delta.h2));
        let (h1, h2) = (i64::from(h.h1), i64::from(h.h2));
        (d1 * h2 + d2 * h1).rem_euclid(self.level_i64())
    }

    /// Majorant `Q(X)_t = (t⁻²x1² + t²x2²) / (2N)` of the frame `Z_t`.
    pub fn majorant(&self, x: LatticeVector, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return invalid(format!("frame parameter t must be positive, got {t}"));
        }
        Ok(majorant_real(self.level_f64(), x.x1 as f64, x.x2 as f64, t))
    }

    /// Every `X ∈ L + h` with `N·Q(X) = x1·x2 = m`, sorted by `x1`.
    pub fn vectors_with_norm(&self, h: CosetIndex, m: i64) -> Result<Vec<LatticeVector>> {
        if m == 0 {
            return Err(Error::IsotropicNorm);
        }
        let target = m.unsigned_abs();
        let mut out = Vec::new();
        for d in divisors(target) {
            let d = d as i64;
            for x1 in [d, -d] {
                let x = LatticeVector::new(x1, m / x1);
                if self.contains(h, x) {
                    out.push(x);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Number of coordinates of `h` that vanish mod N (0, 1 or 2).
    pub fn c_minus1(&self, h: CosetIndex) -> u32 {
        u32::from(h.h1 == 0) + u32::from(h.h2 == 0)
    }
}

pub(crate) fn majorant_real(n: f64, x1: f64, x2: f64, t: f64) -> f64 {
    (x1 * x1 / (t * t) + t * t * x2 * x2) / (2.0 * n)
}

/// Positive divisors of `n` in increasing order (`n ≥ 1`).
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn divisor_count(n: u64) -> usize {
    divisors(n).len()
}

/// Factorization of `n ≥ 1` into `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
