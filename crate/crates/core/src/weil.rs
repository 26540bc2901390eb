//! Weil representation `ρ_L` of `SL₂(Z)` on `C[L*/L]` and its dual `ρ_{−L}`.
//!
//! Matrices are dense, indexed by cosets in the row-major order of
//! [`LatticeContext::cosets`]. Column `h` of a matrix is the image of `𝔢_h`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CosetIndex, LatticeContext};
use crate::phase::unit_root;

#[derive(Clone, Debug, PartialEq)]
pub struct WeilMatrix {
    ctx: LatticeContext,
    dim: usize,
    entries: Vec<Complex64>,
    label: String,
}

/// One complex component per coset.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorValuedData {
    ctx: LatticeContext,
    components: Vec<Complex64>,
}

impl VectorValuedData {
    pub fn zeros(ctx: &LatticeContext) -> Self {
        Self {
            ctx: *ctx,
            components: vec![Complex64::new(0.0, 0.0); ctx.discriminant_order()],
        }
    }

    pub fn from_fn(ctx: &LatticeContext, mut f: impl FnMut(CosetIndex) -> Complex64) -> Self {
        Self {
            ctx: *ctx,
            components: ctx.cosets().map(&mut f).collect(),
        }
    }

    pub fn try_from_fn<E>(
        ctx: &LatticeContext,
        mut f: impl FnMut(CosetIndex) -> std::result::Result<Complex64, E>,
    ) -> std::result::Result<Self, E> {
        let components = ctx
            .cosets()
            .map(&mut f)
            .collect::<std::result::Result<_, E>>()?;
        Ok(Self {
            ctx: *ctx,
            components,
        })
    }

    pub fn from_components(ctx: &LatticeContext, components: Vec<Complex64>) -> Result<Self> {
        if components.len() != ctx.discriminant_order() {
            return Err(Error::DimensionMismatch {
                expected: ctx.discriminant_order(),
                got: components.len(),
            });
        }
        Ok(Self {
            ctx: *ctx,
            components,
        })
    }

    /// The basis vector `𝔢_h`.
    pub fn basis(ctx: &LatticeContext, h: CosetIndex) -> Self {
        let mut v = Self::zeros(ctx);
        v.components[ctx.position(h)] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn context(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn get(&self, h: CosetIndex) -> Complex64 {
        self.components[self.ctx.position(h)]
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            ctx: self.ctx,
            components: self.components.iter().map(|z| z * c).collect(),
        }
    }

    /// Max-norm distance.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.components.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl WeilMatrix {
    pub fn identity(ctx: &LatticeContext) -> Self {
        let dim = ctx.discriminant_order();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self {
            ctx: *ctx,
            dim,
            entries,
            label: "I".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn context(&self) -> &LatticeContext {
        &self.ctx
    }

    /// Entry in row `row` (target coset), column `col` (source coset).
    pub fn entry(&self, row: CosetIndex, col: CosetIndex) -> Complex64 {
        self.entries[self.ctx.position(row) * self.dim + self.ctx.position(col)]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        Ok(Self {
            ctx: self.ctx,
            dim: n,
            entries,
            label: format!("{}{}", self.label, rhs.label),
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(&self.ctx);
        for _ in 0..k {
            out = out.mul(self).expect("same dimension");
        }
        out.with_label(format!("({})^{k}", self.label))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        Self {
            ctx: self.ctx,
            dim: n,
            entries,
            label: format!("{}^H", self.label),
        }
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M·M^H − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.mul(&self.adjoint())
            .expect("square")
            .max_distance(&Self::identity(&self.ctx))
    }

    pub fn apply(&self, v: &VectorValuedData) -> Result<VectorValuedData> {
        if v.components.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.components.len(),
            });
        }
        let n = self.dim;
        let components = (0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(&v.components)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(VectorValuedData {
            ctx: self.ctx,
            components,
        })
    }

    pub fn to_json(&self) -> WeilMatrixJson {
        let n = self.dim;
        WeilMatrixJson {
            level: self.ctx.level(),
            label: self.label.clone(),
            dim: n,
            cosets: self.ctx.cosets().map(|h| [h.h1(), h.h2()]).collect(),
            entries: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let z = self.entries[i * n + j];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// JSON export: complex entries as `[re, im]`, rows in the fixed coset order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WeilMatrixJson {
    pub level: u32,
    pub label: String,
    pub dim: usize,
    pub cosets: Vec<[u32; 2]>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

/// `ρ_L(T) 𝔢_h = e(Q(h)) 𝔢_h`.
pub fn rho_t(ctx: &LatticeContext) -> WeilMatrix {
    let mut m = WeilMatrix::identity(ctx);
    let n = m.dim;
    for h in ctx.cosets() {
        let i = ctx.position(h);
        m.entries[i * n + i] = unit_root(ctx.norm_residue(h), i64::from(ctx.level()));
    }
    m.with_label("T")
}

/// `ρ_L(S) 𝔢_h = (1/N) Σ_δ e(−(δ, h)) 𝔢_δ`.
pub fn rho_s(ctx: &LatticeContext) -> WeilMatrix {
    let mut m = WeilMatrix::identity(ctx);
    let n = m.dim;
    let level = i64::from(ctx.level());
    let scale = 1.0 / ctx.level_f64();
    for delta in ctx.cosets() {
        for h in ctx.cosets() {
            let k = ctx.pairing_residue(delta, h);
            m.entries[ctx.position(delta) * n + ctx.position(h)] = unit_root(-k, level) * scale;
        }
    }
    m.with_label("S")
}

/// `ρ_{−L}` realized as the entrywise conjugate of `ρ_L` (signature (1,1) on both sides).
pub fn rho_dual(m: &WeilMatrix) -> WeilMatrix {
    WeilMatrix {
        ctx: m.ctx,
        dim: m.dim,
        entries: m.entries.iter().map(|z| z.conj()).collect(),
        label: format!("conj({})", m.label),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32) -> LatticeContext {
        LatticeContext::new(n).unwrap()
    }

    #[test]
    fn generator_examples() {
        let c1 = ctx(1);
        assert_eq!(rho_t(&c1).entries(), &[Complex64::new(1.0, 0.0)]);
        assert_eq!(rho_s(&c1).entries(), &[Complex64::new(1.0, 0.0)]);
        assert_eq!(rho_dual(&rho_s(&c1)).entries(), &[Complex64::new(1.0, 0.0)]);

        let c2 = ctx(2);
        let h11 = c2.coset(1, 1);
        assert_eq!(rho_t(&c2).entry(h11, h11), Complex64::new(-1.0, 0.0));
        assert_eq!(
            rho_dual(&rho_t(&c2)).entry(h11, h11),
            Complex64::new(-1.0, 0.0)
        );
        assert!((rho_s(&c2).entry(h11, h11) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let h10 = c2.coset(1, 0);
        assert!((rho_s(&c2).entry(h10, h10) - Complex64::new(0.5, 0.0)).norm() < 1e-15);

        let c3 = ctx(3);
        let h = c3.coset(1, 1);
        let third = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((rho_t(&c3).entry(h, h) - third).norm() < 1e-15);
        assert!((rho_dual(&rho_t(&c3)).entry(h, h) - third.conj()).norm() < 1e-15);
    }

    #[test]
    fn structure_of_generators() {
        for n in 1..=6 {
            let c = ctx(n);
            let t = rho_t(&c);
            let s = rho_s(&c);
            for a in c.cosets() {
                for b in c.cosets() {
                    if a != b {
                        assert_eq!(t.entry(a, b), Complex64::new(0.0, 0.0));
                    } else {
                        assert!((t.entry(a, a).norm() - 1.0).abs() < 1e-15);
                    }
                    assert!((s.entry(a, b) - s.entry(b, a)).norm() < 1e-15);
                    assert!((s.entry(a, b).norm() - 1.0 / n as f64).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn apply_examples() {
        let c2 = ctx(2);
        let v = VectorValuedData::from_fn(&c2, |_| Complex64::new(0.5, 0.0));
        assert_eq!(WeilMatrix::identity(&c2).apply(&v).unwrap(), v);
        // Row (0,0) of ρ(S) is constant 1/2, so the component is (1/2)·4·(1/2) = 1.
        let w = rho_s(&c2).apply(&v).unwrap();
        assert!((w.get(c2.coset(0, 0)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // Row (1,1) is (1, −1, −1, 1)/2, orthogonal to the constant vector.
        assert!(w.get(c2.coset(1, 1)).norm() < 1e-15);

        let s = rho_s(&ctx(3));
        let bad = VectorValuedData::zeros(&ctx(2));
        assert!(matches!(
            s.apply(&bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn s_squared_negates_basis() {
        for n in 1..=6 {
            let c = ctx(n);
            let s2 = rho_s(&c).pow(2);
            for h in c.cosets() {
                let image = s2.apply(&VectorValuedData::basis(&c, h)).unwrap();
                let expected = VectorValuedData::basis(&c, c.negate(h));
                assert!(image.max_distance(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn json_layout() {
        let c = ctx(2);
        let j = rho_s(&c).to_json();
        assert_eq!(j.dim, 4);
        assert_eq!(j.cosets, vec![[0, 0], [0, 1], [1, 0], [1, 1]]);
        assert_eq!(j.entries.len(), 4);
        assert!((j.entries[3][3][0] - 0.5).abs() < 1e-15);
        let text = serde_json::to_string(&j).unwrap();
        let back: WeilMatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
    }
}
