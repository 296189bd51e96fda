//! Python bindings: a `Context` class exposing the field setup, Carlitz
//! quantities, power sums, multizeta series, tuple classification, and
//! identity-family verification.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use fqmzv::{
    run_search, ClassificationRecord, CompositionTuple, Error, Family, FamilyBounds, FieldConfig,
    LaurentSeries, SearchConfig, TheoremIndex,
};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidField(_) | Error::InvalidParameter(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn composition(entries: Vec<u32>) -> PyResult<CompositionTuple> {
    CompositionTuple::new(entries).map_err(to_py_err)
}

fn series_dict<'py>(py: Python<'py>, value: &LaurentSeries) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    let val = value.valuation_or_prec();
    dict.set_item("valuation", val)?;
    dict.set_item("precision", value.precision())?;
    // Vec<u8> would surface as Python bytes; widen so the caller sees ints.
    let coefficients: Vec<u32> = (val..value.precision())
        .map(|k| u32::from(value.coeff_at(k)))
        .collect();
    dict.set_item("coefficients", coefficients)?;
    Ok(dict)
}

fn record_dict<'py>(py: Python<'py>, record: &ClassificationRecord) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("tuple", record.tuple.entries().to_vec())?;
    dict.set_item("weight", record.weight)?;
    dict.set_item("depth", record.depth)?;
    dict.set_item("status", record.status.to_string())?;
    dict.set_item("ratio", record.ratio.as_ref().map(|r| r.render()))?;
    dict.set_item("covered_by_theorem", record.covered_by_theorem)?;
    dict.set_item("precision", record.precision_used)?;
    dict.set_item("heuristic", record.heuristic)?;
    dict.set_item("note", record.note.clone())?;
    Ok(dict)
}

/// Computation context for a fixed F_q: carries the field tables and the
/// memoized Carlitz data shared by all operations.
#[pyclass]
struct Context {
    inner: fqmzv::Context,
}

#[pymethods]
impl Context {
    #[new]
    #[pyo3(signature = (q, modulus=None, budget=None))]
    fn new(q: u32, modulus: Option<Vec<u8>>, budget: Option<u64>) -> PyResult<Self> {
        let field = match modulus {
            Some(m) => FieldConfig::with_modulus(q, &m),
            None => FieldConfig::new(q),
        }
        .map_err(to_py_err)?;
        let inner = match budget {
            Some(b) => fqmzv::Context::with_budget(field, b),
            None => fqmzv::Context::new(field),
        };
        Ok(Context { inner })
    }

    fn q(&self) -> u32 {
        self.inner.q()
    }

    fn characteristic(&self) -> u32 {
        self.inner.field().p()
    }

    fn modulus(&self) -> Option<Vec<u32>> {
        self.inner
            .field()
            .modulus()
            .map(|m| m.iter().map(|&c| u32::from(c)).collect())
    }

    /// [n] = t^(q^n) - t, rendered as a polynomial in t.
    fn bracket(&self, n: u32) -> PyResult<String> {
        Ok(self.inner.bracket(n).map_err(to_py_err)?.render())
    }

    /// l_n = prod_{i<=n} (t - t^(q^i)); l_0 = 1.
    fn ell(&self, n: u32) -> PyResult<String> {
        Ok(self.inner.ell(n).map_err(to_py_err)?.render())
    }

    /// S_d(s): sum of 1/a^s over monic a of degree d, as a series in 1/t.
    fn power_sum<'py>(&self, py: Python<'py>, d: u32, s: u32, prec: i64) -> PyResult<Bound<'py, PyDict>> {
        let value = self.inner.power_sum(d, s, prec).map_err(to_py_err)?;
        series_dict(py, &value)
    }

    /// S_d(s_1, ..., s_r): the iterated power sum with outer degree d.
    fn iterated_power_sum<'py>(
        &self,
        py: Python<'py>,
        d: u32,
        entries: Vec<u32>,
        prec: i64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let value = self
            .inner
            .iterated_power_sum(d, &entries, prec)
            .map_err(to_py_err)?;
        series_dict(py, &value)
    }

    /// zeta(s_1, ..., s_r) as a series in 1/t to absolute precision `prec`.
    #[pyo3(signature = (entries, prec=64))]
    fn zeta<'py>(&self, py: Python<'py>, entries: Vec<u32>, prec: i64) -> PyResult<Bound<'py, PyDict>> {
        let tuple = composition(entries)?;
        let zeta = self.inner.zeta_value(&tuple, prec).map_err(to_py_err)?;
        let dict = series_dict(py, &zeta.value)?;
        dict.set_item("levels", zeta.levels_used)?;
        dict.set_item("heuristic", zeta.heuristic)?;
        Ok(dict)
    }

    /// zeta(tuple) / zeta(weight) as a series in 1/t.
    #[pyo3(signature = (entries, prec=64))]
    fn zeta_ratio<'py>(
        &self,
        py: Python<'py>,
        entries: Vec<u32>,
        prec: i64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let tuple = composition(entries)?;
        let ratio = self.inner.zeta_ratio(&tuple, prec).map_err(to_py_err)?;
        let heuristic = ratio.heuristic();
        let dict = series_dict(py, &ratio.ratio)?;
        dict.set_item("heuristic", heuristic)?;
        Ok(dict)
    }

    /// Classify a tuple as eulerian / zeta_like / not_detected by rational
    /// reconstruction of its zeta ratio (with doubled-precision recheck).
    #[pyo3(signature = (entries, prec=64))]
    fn classify<'py>(&self, py: Python<'py>, entries: Vec<u32>, prec: i64) -> PyResult<Bound<'py, PyDict>> {
        let tuple = composition(entries)?;
        let index = TheoremIndex::build(&self.inner, tuple.weight()).map_err(to_py_err)?;
        let record = self
            .inner
            .classify_tuple(&tuple, prec, Some(&index))
            .map_err(to_py_err)?;
        record_dict(py, &record)
    }

    /// Classify every tuple of the given depth up to a weight bound.
    #[pyo3(signature = (depth, max_weight, restricted=false, primitive_only=true, prec=64))]
    fn search<'py>(
        &self,
        py: Python<'py>,
        depth: usize,
        max_weight: u32,
        restricted: bool,
        primitive_only: bool,
        prec: i64,
    ) -> PyResult<Bound<'py, PyList>> {
        let config = SearchConfig {
            depth,
            max_weight,
            restricted,
            primitive_only,
            precision: prec,
        };
        let results = run_search(&self.inner, &config, None).map_err(to_py_err)?;
        let records: Vec<Bound<'py, PyDict>> = results
            .records
            .iter()
            .map(|r| record_dict(py, r))
            .collect::<PyResult<_>>()?;
        PyList::new(py, records)
    }

    /// Numerically verify an identity family over its parameter sweep.
    #[pyo3(signature = (family, max_n=3, max_r=4, prec=50))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        family: &str,
        max_n: u32,
        max_r: u32,
        prec: i64,
    ) -> PyResult<Bound<'py, PyList>> {
        let family: Family = family.parse().map_err(to_py_err)?;
        let bounds = FamilyBounds { max_n, max_r };
        let cases = self.inner.enumerate_cases(family, &bounds).map_err(to_py_err)?;
        let mut reports = Vec::with_capacity(cases.len());
        for case in cases {
            let report = self.inner.verify_case(&case, prec).map_err(to_py_err)?;
            let dict = PyDict::new(py);
            dict.set_item("family", report.case.family.to_string())?;
            let params = PyDict::new(py);
            for (k, v) in &report.case.params {
                params.set_item(k, *v)?;
            }
            dict.set_item("params", params)?;
            dict.set_item("tuple", report.case.lhs_tuple.entries().to_vec())?;
            dict.set_item("coefficient", report.case.rhs_coefficient.render())?;
            dict.set_item("zeta_arg", report.case.rhs_zeta_arg)?;
            dict.set_item("residual_valuation", report.residual_valuation)?;
            dict.set_item("precision", report.precision)?;
            dict.set_item("pass", report.pass)?;
            dict.set_item("heuristic", report.heuristic)?;
            reports.push(dict);
        }
        PyList::new(py, reports)
    }

    /// Strip p-th-power structure: returns (tuple / p^e, e) with e maximal.
    fn primitive_reduce(&self, entries: Vec<u32>) -> PyResult<(Vec<u32>, u32)> {
        let tuple = composition(entries)?;
        let (reduced, e) = tuple.primitive_reduce(self.inner.field().p());
        Ok((reduced.entries().to_vec(), e))
    }

    fn is_primitive(&self, entries: Vec<u32>) -> PyResult<bool> {
        let tuple = composition(entries)?;
        Ok(tuple.is_primitive(self.inner.field().p()))
    }

    fn __repr__(&self) -> String {
        match self.inner.field().modulus() {
            Some(m) => format!("Context(q={}, modulus={:?})", self.inner.q(), m),
            None => format!("Context(q={})", self.inner.q()),
        }
    }
}

#[pymodule]
pub fn fqmzv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Context>()?;
    Ok(())
}
