//! Python bindings for the conifold calibrated-geometry library.
//!
//! The module mirrors the Rust API at the granularity a notebook wants:
//! a `Structure` class holding the resolution parameter with pointwise
//! evaluators, free functions for the coordinate maps and leaf samplers,
//! and the verification suites returning plain dicts.

use conifold::ambient::{lift_to_resolved, to_xyuv as rs_to_xyuv, to_z as rs_to_z, Patch, XyuvPoint, ZPoint};
use conifold::cli::{
    suite_asymptotics, suite_flat, suite_invariance, suite_moments, suite_so3, suite_structure,
    suite_t2, SuiteOutcome,
};
use conifold::cy_structure::{CyStructure, TangentVector};
use conifold::moment_maps::{so3_moment, t2_moment};
use conifold::slag_families::{
    cone_residual, so3_leaf_sample, t2_leaf_sample, Branch, ConeFamily, LeafSample,
};
use conifold::verify_engine::{conifold_cone, run_report, Tolerances};
use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn xyuv_from(vals: [C64; 4]) -> XyuvPoint {
    XyuvPoint::new(vals[0], vals[1], vals[2], vals[3])
}

fn xyuv_tuple(w: &XyuvPoint) -> (C64, C64, C64, C64) {
    (w.x, w.y, w.u, w.v)
}

fn parse_branch(branch: &str) -> PyResult<Branch> {
    match branch {
        "plus" | "+" => Ok(Branch::Plus),
        "minus" | "-" => Ok(Branch::Minus),
        other => Err(value_err(format!("branch must be 'plus' or 'minus', got {other:?}"))),
    }
}

/// The Calabi-Yau structure at resolution parameter `a`.
#[pyclass]
struct Structure {
    inner: CyStructure,
}

#[pymethods]
impl Structure {
    #[new]
    fn new(a: f64) -> PyResult<Self> {
        if a < 0.0 {
            return Err(value_err("resolution parameter must be >= 0"));
        }
        Ok(Structure { inner: CyStructure::new(a) })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    /// The positive root of the Kaehler-potential cubic at radius^2 `rsq`.
    fn gamma(&self, rsq: f64) -> PyResult<f64> {
        Ok(self.inner.potential.solve_gamma(rsq).map_err(value_err)?.gamma)
    }

    fn f_prime(&self, rsq: f64) -> PyResult<f64> {
        self.inner.potential.f_prime(rsq).map_err(value_err)
    }

    fn f_double_prime(&self, rsq: f64) -> PyResult<f64> {
        self.inner.potential.f_double_prime(rsq).map_err(value_err)
    }

    /// Full pointwise evaluation at an ambient point (X, Y, U, V).
    fn eval<'py>(&self, py: Python<'py>, xyuv: [C64; 4]) -> PyResult<Bound<'py, PyDict>> {
        let w = xyuv_from(xyuv);
        let p = lift_to_resolved(&w).map_err(value_err)?;
        let s = &self.inner;
        let rsq = p.radius_sq();
        let out = PyDict::new(py);
        out.set_item("rsq", rsq)?;
        out.set_item("patch", match p.patch { Patch::HPlus => "H+", Patch::HMinus => "H-" })?;
        out.set_item("lambda_plus", p.cp1.lambda_plus())?;
        out.set_item("gamma", s.potential.solve_gamma(rsq).map_err(value_err)?.gamma)?;
        out.set_item("f_prime", s.potential.f_prime(rsq).map_err(value_err)?)?;
        out.set_item("mu_t2", t2_moment(s, &p).map_err(value_err)?)?;
        out.set_item("mu_so3", so3_moment(s, &p).map_err(value_err)?)?;
        let ma = if p.is_on_bolt() {
            None
        } else {
            Some(s.monge_ampere_ratio(&p).map_err(value_err)?)
        };
        out.set_item("monge_ampere_ratio", ma)?;
        Ok(out)
    }

    /// `g(u, v)` with `u`, `v` given in the point's working-chart
    /// coordinates.
    fn metric(&self, xyuv: [C64; 4], u: [C64; 3], v: [C64; 3]) -> PyResult<f64> {
        let p = lift_to_resolved(&xyuv_from(xyuv)).map_err(value_err)?;
        self.inner
            .metric_eval(&TangentVector::new(p, u), &TangentVector::new(p, v))
            .map_err(value_err)
    }

    /// `omega(u, v)` in working-chart coordinates.
    fn kahler_form(&self, xyuv: [C64; 4], u: [C64; 3], v: [C64; 3]) -> PyResult<f64> {
        let p = lift_to_resolved(&xyuv_from(xyuv)).map_err(value_err)?;
        self.inner
            .kahler_form_eval(&TangentVector::new(p, u), &TangentVector::new(p, v))
            .map_err(value_err)
    }

    /// `Omega(v1, v2, v3)` in working-chart coordinates.
    fn holomorphic_volume(
        &self,
        xyuv: [C64; 4],
        v1: [C64; 3],
        v2: [C64; 3],
        v3: [C64; 3],
    ) -> PyResult<C64> {
        let p = lift_to_resolved(&xyuv_from(xyuv)).map_err(value_err)?;
        Ok(self.inner.holomorphic_volume_eval(&p, &v1, &v2, &v3))
    }

    fn monge_ampere_ratio(&self, xyuv: [C64; 4]) -> PyResult<f64> {
        let p = lift_to_resolved(&xyuv_from(xyuv)).map_err(value_err)?;
        self.inner.monge_ampere_ratio(&p).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Structure(a={})", self.inner.a)
    }
}

/// Ambient (X, Y, U, V) of a diagonalizing-frame point (z0, z1, z2, z3).
#[pyfunction]
fn to_xyuv(z: [C64; 4]) -> (C64, C64, C64, C64) {
    xyuv_tuple(&rs_to_xyuv(&ZPoint(z)))
}

/// Diagonalizing-frame coordinates of an ambient point.
#[pyfunction]
fn to_z(xyuv: [C64; 4]) -> (C64, C64, C64, C64) {
    let z = rs_to_z(&xyuv_from(xyuv)).0;
    (z[0], z[1], z[2], z[3])
}

/// Scale-free defect of a point against the asymptotic cone of a family
/// ("t2" or "so3").
#[pyfunction]
fn cone_defect(family: &str, xyuv: [C64; 4]) -> PyResult<f64> {
    let fam = match family {
        "t2" => ConeFamily::T2,
        "so3" => ConeFamily::So3,
        other => return Err(value_err(format!("unknown family {other:?}"))),
    };
    Ok(cone_residual(fam, &xyuv_from(xyuv)))
}

fn sample_to_dict<'py>(
    py: Python<'py>,
    s: &CyStructure,
    sample: &LeafSample,
    family: ConeFamily,
) -> PyResult<Bound<'py, PyDict>> {
    let report = run_report(s, sample, &Tolerances::default(), conifold_cone(family));
    let points = PyList::new(
        py,
        sample.points.iter().map(|p| xyuv_tuple(&p.xyuv)),
    )?;
    let out = PyDict::new(py);
    out.set_item("points", points)?;
    let rep = PyDict::new(py);
    rep.set_item("passed", report.passed)?;
    rep.set_item("lagrangian_max", report.lagrangian.max)?;
    rep.set_item("special_max", report.special.max)?;
    rep.set_item("cone_max", report.cone.max)?;
    rep.set_item("kappa", report.kappa)?;
    rep.set_item("calibration_rel_std", report.calibration_rel_std)?;
    rep.set_item("rank_flagged", report.rank_flagged)?;
    out.set_item("report", rep)?;
    Ok(out)
}

/// Sample a torus-invariant leaf with constants `c = (c1, c2, c3)` and
/// certify it; returns the ambient points and the summary report.
#[pyfunction]
#[pyo3(signature = (a, c, n1=6, n2=6, n3=4))]
fn sample_t2<'py>(
    py: Python<'py>,
    a: f64,
    c: [f64; 3],
    n1: usize,
    n2: usize,
    n3: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let s = CyStructure::new(a);
    let sample = t2_leaf_sample(&s, &c, n1, n2, n3, (0.6, 2.2)).map_err(value_err)?;
    sample_to_dict(py, &s, &sample, ConeFamily::T2)
}

/// Sample an SO(3)-invariant leaf (constant `c`, branch "plus"/"minus")
/// and certify it.
#[pyfunction]
#[pyo3(signature = (a, c, branch="plus", n_profile=7, n_sphere=24))]
fn sample_so3<'py>(
    py: Python<'py>,
    a: f64,
    c: f64,
    branch: &str,
    n_profile: usize,
    n_sphere: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let s = CyStructure::new(a);
    let sample = so3_leaf_sample(&s, c, parse_branch(branch)?, n_profile, n_sphere, (-1.6, 1.6))
        .map_err(value_err)?;
    sample_to_dict(py, &s, &sample, ConeFamily::So3)
}

fn outcome_to_dict<'py>(py: Python<'py>, o: &SuiteOutcome) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("suite", &o.suite)?;
    out.set_item("passed", o.passed)?;
    let checks = PyList::empty(py);
    for c in &o.checks {
        let d = PyDict::new(py);
        d.set_item("name", &c.name)?;
        d.set_item("value", c.value)?;
        d.set_item("threshold", c.threshold)?;
        d.set_item("passed", c.passed)?;
        checks.append(d)?;
    }
    out.set_item("checks", checks)?;
    Ok(out)
}

/// Run one verification suite by name: structure, invariance, moments,
/// t2, so3, flat, or asymptotics.
#[pyfunction]
#[pyo3(signature = (name, a=1.0, seed=42))]
fn verify_suite<'py>(py: Python<'py>, name: &str, a: f64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let tol = Tolerances::default();
    let o = match name {
        "structure" => suite_structure(seed),
        "invariance" => suite_invariance(a, seed),
        "moments" => suite_moments(a, seed),
        "t2" => suite_t2(a, seed, &tol, None, false),
        "so3" => suite_so3(a, seed, &tol, None),
        "flat" => suite_flat(seed),
        "asymptotics" => suite_asymptotics(a, seed),
        other => return Err(value_err(format!("unknown suite {other:?}"))),
    };
    outcome_to_dict(py, &o)
}

#[pymodule]
fn conifold_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Structure>()?;
    m.add_function(wrap_pyfunction!(to_xyuv, m)?)?;
    m.add_function(wrap_pyfunction!(to_z, m)?)?;
    m.add_function(wrap_pyfunction!(cone_defect, m)?)?;
    m.add_function(wrap_pyfunction!(sample_t2, m)?)?;
    m.add_function(wrap_pyfunction!(sample_so3, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
