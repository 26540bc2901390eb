//! Python bindings: `import harmonic_eisenstein_py as he`.

use std::collections::BTreeMap;

use harmonic_eisenstein::eisenstein::{self as eis, ExpansionJson};
use harmonic_eisenstein::kernel::{self, FramePoint, ShiftPair};
use harmonic_eisenstein::verify::{run_suite, VerificationReport};
use harmonic_eisenstein::weil::{rho_dual, rho_s, rho_t};
use harmonic_eisenstein::{
    CosetIndex, Error, KernelSign, LatticeContext, ModularPoint, Suite, WeilMatrix,
};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

type Coset = (i64, i64);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Truncation { .. } | Error::Quadrature { .. } | Error::IllConditioned(_) => {
            PyArithmeticError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn point(tau: Complex64) -> PyResult<ModularPoint> {
    ModularPoint::from_tau(tau).map_err(to_py)
}

fn coset_key(h: CosetIndex) -> (u32, u32) {
    (h.h1(), h.h2())
}

fn matrix_rows(ctx: &LatticeContext, m: &WeilMatrix) -> Vec<Vec<Complex64>> {
    ctx.cosets()
        .map(|r| ctx.cosets().map(|c| m.entry(r, c)).collect())
        .collect()
}

/// The lattice `N·Z²` with form `x1·x2/N`.
#[pyclass(name = "Lattice", frozen)]
struct PyLattice {
    ctx: LatticeContext,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(level: u32) -> PyResult<Self> {
        Ok(Self {
            ctx: LatticeContext::new(level).map_err(to_py)?,
        })
    }

    #[getter]
    fn level(&self) -> u32 {
        self.ctx.level()
    }

    /// Cosets `(h1, h2)` in the fixed coset order used by every vector and matrix.
    fn cosets(&self) -> Vec<(u32, u32)> {
        self.ctx.cosets().map(coset_key).collect()
    }

    /// `c_{-1}(h)`: how many of `h1`, `h2` vanish.
    fn c_minus1(&self, h: Coset) -> u32 {
        self.ctx.c_minus1(self.ctx.coset(h.0, h.1))
    }

    fn rho_t(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(&self.ctx, &rho_t(&self.ctx))
    }

    fn rho_s(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(&self.ctx, &rho_s(&self.ctx))
    }

    fn rho_dual_t(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(&self.ctx, &rho_dual(&rho_t(&self.ctx)))
    }

    fn rho_dual_s(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(&self.ctx, &rho_dual(&rho_s(&self.ctx)))
    }

    /// `c_h(m/N)` as `(num, den)`; `m = 0` gives the constant term.
    fn c(&self, h: Coset, m: i64) -> PyResult<(i64, i64)> {
        let h = self.ctx.coset(h.0, h.1);
        if m == 0 {
            let r = eis::c0(&self.ctx, h);
            return Ok((*r.numer(), *r.denom()));
        }
        Ok((eis::c(&self.ctx, h, m).map_err(to_py)?, 1))
    }

    fn c_tilde(&self, h: Coset, m: i64) -> PyResult<f64> {
        let h = self.ctx.coset(h.0, h.1);
        if m == 0 {
            return eis::c_tilde0(&self.ctx, h).map_err(to_py);
        }
        eis::c_tilde(&self.ctx, h, m).map_err(to_py)
    }

    /// Exact `c̃_h(m/N)` for `m > 0` as `[(p, q), ...]` meaning `Σ q·log p`.
    fn c_tilde_symbolic(&self, h: Coset, m: i64) -> PyResult<Vec<(u64, i64)>> {
        let s = eis::c_tilde_symbolic(&self.ctx, self.ctx.coset(h.0, h.1), m).map_err(to_py)?;
        Ok(s.terms())
    }

    fn expansion(&self, h: Coset, m_max: i64) -> PyResult<PyExpansion> {
        let exp =
            eis::harmonic_expansion(&self.ctx, self.ctx.coset(h.0, h.1), m_max).map_err(to_py)?;
        Ok(PyExpansion { exp })
    }

    /// `ϑ(τ)` as `{(h1, h2): value}`.
    #[pyo3(signature = (tau, tol = 1e-12))]
    fn vartheta(&self, tau: Complex64, tol: f64) -> PyResult<BTreeMap<(u32, u32), Complex64>> {
        let v = eis::vartheta(&self.ctx, &point(tau)?, tol).map_err(to_py)?;
        Ok(self
            .ctx
            .cosets()
            .map(|h| (coset_key(h), v.components.get(h)))
            .collect())
    }

    /// `θ̃(τ)` as `{(h1, h2): value}`.
    #[pyo3(signature = (tau, tol = 1e-12))]
    fn vartheta_tilde(
        &self,
        tau: Complex64,
        tol: f64,
    ) -> PyResult<BTreeMap<(u32, u32), Complex64>> {
        let v = eis::vartheta_tilde(&self.ctx, &point(tau)?, tol).map_err(to_py)?;
        Ok(self
            .ctx
            .cosets()
            .map(|h| (coset_key(h), v.components.get(h)))
            .collect())
    }

    /// `Θ_h(τ, t)` with its truncation bound.
    #[pyo3(signature = (h, tau, t, tol = 1e-12))]
    fn theta(&self, h: Coset, tau: Complex64, t: f64, tol: f64) -> PyResult<(Complex64, f64)> {
        let t = FramePoint::new(t).map_err(to_py)?;
        let r = kernel::theta_h(&self.ctx, self.ctx.coset(h.0, h.1), &point(tau)?, &t, tol)
            .map_err(to_py)?;
        Ok((r.value, r.tail_bound))
    }

    /// `Θ̃_h(τ, t)`, or `Θ̃_h(τ, t; ε, ε′)` when `shift = (ε, ε′)` is given.
    #[pyo3(signature = (h, tau, t, shift = None, tol = 1e-12, plus = false))]
    fn theta_tilde(
        &self,
        h: Coset,
        tau: Complex64,
        t: f64,
        shift: Option<(f64, f64)>,
        tol: f64,
        plus: bool,
    ) -> PyResult<(Complex64, f64)> {
        let t = FramePoint::new(t).map_err(to_py)?;
        let (tau, h) = (point(tau)?, self.ctx.coset(h.0, h.1));
        let r = match shift {
            Some((e, ep)) => {
                let s = ShiftPair::new(e, ep).map_err(to_py)?;
                kernel::theta_tilde_shifted_h(&self.ctx, h, &tau, &t, s, tol)
            }
            None => {
                let sign = if plus {
                    KernelSign::Plus
                } else {
                    KernelSign::Minus
                };
                kernel::theta_tilde_h_with_sign(&self.ctx, h, &tau, &t, tol, sign)
            }
        }
        .map_err(to_py)?;
        Ok((r.value, r.tail_bound))
    }

    /// Run a verification suite; each report is a dict with the JSON-lines keys.
    #[pyo3(signature = (suite = "all", seed = 0))]
    fn verify(&self, py: Python<'_>, suite: &str, seed: u64) -> PyResult<Vec<Py<PyAny>>> {
        let suite: Suite = suite.parse().map_err(to_py)?;
        let reports = run_suite(&self.ctx, suite, seed).map_err(to_py)?;
        let json = py.import("json")?;
        reports
            .iter()
            .map(|r: &VerificationReport| {
                let line = r.to_json_line().map_err(to_py)?;
                Ok(json.call_method1("loads", (line,))?.unbind())
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Lattice(level={})", self.ctx.level())
    }
}

/// Truncated expansion of `θ̃_h` together with the holomorphic `ϑ_h` coefficients.
#[pyclass(name = "Expansion", frozen)]
struct PyExpansion {
    exp: eis::HarmonicExpansion,
}

#[pymethods]
impl PyExpansion {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let json: ExpansionJson =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self {
            exp: eis::HarmonicExpansion::from_json(&json).map_err(to_py)?,
        })
    }

    #[getter]
    fn m_max(&self) -> i64 {
        self.exp.m_max()
    }

    #[getter]
    fn coset(&self) -> (u32, u32) {
        coset_key(self.exp.coset())
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.exp.to_json()).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_csv(&self) -> String {
        self.exp.to_csv()
    }

    /// Holomorphic coefficients `{m: c̃(m/N)}` including `m = 0`.
    fn c_tilde(&self) -> BTreeMap<i64, f64> {
        self.exp.hol_coeffs().collect()
    }

    /// `(value, tail_bound)` of `θ̃_h(τ)` from this truncation.
    #[pyo3(signature = (tau, tol = 1e-12))]
    fn eval(&self, tau: Complex64, tol: f64) -> PyResult<(Complex64, f64)> {
        let r = eis::eval_vartheta_tilde(&self.exp, &point(tau)?, tol).map_err(to_py)?;
        Ok((r.value, r.tail_bound))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.exp == other.exp
    }

    fn __repr__(&self) -> String {
        let h = self.exp.coset();
        format!(
            "Expansion(N={}, h=({}, {}), m_max={})",
            self.exp.context().level(),
            h.h1(),
            h.h2(),
            self.exp.m_max()
        )
    }
}

#[pymodule]
fn harmonic_eisenstein_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyExpansion>()?;
    Ok(())
}
