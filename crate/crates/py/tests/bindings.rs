//! Drives the compiled module through the Python interpreter: registers it
//! on the inittab, imports it, and checks a handful of known values.
//!
//! Single test function: the inittab append must happen exactly once, before
//! interpreter startup.

use fqmzv_py::fqmzv_py;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAnyMethods;

#[test]
fn python_surface_matches_known_values() {
    pyo3::append_to_inittab!(fqmzv_py);
    pyo3::prepare_freethreaded_python();
    Python::with_gil(|py| {
        let module = py.import("fqmzv_py").unwrap();
        let context = module.getattr("Context").unwrap();

        let ctx2 = context.call1((2,)).unwrap();
        let bracket: String = ctx2
            .call_method1("bracket", (1,))
            .unwrap()
            .extract()
            .unwrap();
        assert_eq!(bracket, "t^2 + t");

        let zeta = ctx2.call_method1("zeta", (vec![1u32], 8i64)).unwrap();
        let coeffs: Vec<u32> = zeta.get_item("coefficients").unwrap().extract().unwrap();
        assert_eq!(coeffs, vec![1, 0, 1, 1, 1, 1, 0, 0]);
        let valuation: i64 = zeta.get_item("valuation").unwrap().extract().unwrap();
        assert_eq!(valuation, 0);
        let heuristic: bool = zeta.get_item("heuristic").unwrap().extract().unwrap();
        assert!(!heuristic);

        let record = ctx2.call_method1("classify", (vec![1u32, 1],)).unwrap();
        let status: String = record.get_item("status").unwrap().extract().unwrap();
        assert_eq!(status, "eulerian");
        let ratio: Option<String> = record.get_item("ratio").unwrap().extract().unwrap();
        assert_eq!(ratio.as_deref(), Some("1/(t^2 + t)"));
        let covered: bool = record
            .get_item("covered_by_theorem")
            .unwrap()
            .extract()
            .unwrap();
        assert!(covered);

        let ctx3 = context.call1((3,)).unwrap();
        let record = ctx3.call_method1("classify", (vec![1u32, 2],)).unwrap();
        let status: String = record.get_item("status").unwrap().extract().unwrap();
        assert_eq!(status, "zeta_like");
        let ratio: Option<String> = record.get_item("ratio").unwrap().extract().unwrap();
        assert_eq!(ratio.as_deref(), Some("2/(t^3 + 2*t)"));

        let reduced: (Vec<u32>, u32) = ctx2
            .call_method1("primitive_reduce", (vec![2u32, 6],))
            .unwrap()
            .extract()
            .unwrap();
        assert_eq!(reduced, (vec![1, 3], 1));

        let reports = ctx3
            .call_method1("verify", ("mainII", 1u32, 4u32, 50i64))
            .unwrap();
        let reports: Vec<Bound<'_, PyAny>> = reports.extract().unwrap();
        assert_eq!(reports.len(), 2);
        for report in &reports {
            let pass: bool = report.get_item("pass").unwrap().extract().unwrap();
            assert!(pass);
        }

        // parameter errors arrive as ValueError
        let err = context.call1((6,)).unwrap_err();
        assert!(err.is_instance_of::<PyValueError>(py));
        let err = ctx2.call_method1("classify", (vec![1u32],)).unwrap_err();
        assert!(err.is_instance_of::<PyValueError>(py));
    });
}
