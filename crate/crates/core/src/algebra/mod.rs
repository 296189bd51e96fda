pub mod field;
pub mod laurent;
pub mod poly;
pub mod ratfunc;

pub use field::{FieldConfig, FieldElement, FieldOp};
pub use laurent::{LaurentSeries, SeriesOp};
pub use poly::{monics_of_degree, Polynomial, PolyOp, PolyValue};
pub use ratfunc::{rational_to_series, RationalFunction};
