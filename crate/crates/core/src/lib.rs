//! Arithmetic of multizeta values for the rational function field over F_q.
//!
//! The base objects are the polynomial ring A = F_q[t] inside the completion
//! K_inf = F_q((1/t)) at the infinite place. On top of truncated Laurent
//! arithmetic this crate computes power sums over monic polynomials, their
//! iterated (multizeta) analogues, continued fractions and rationality
//! detection in K_inf, and verification of identity families that express
//! certain multizeta values as rational multiples of single zeta values.

pub mod algebra;
mod carlitz;
pub mod error;
pub mod identities;
pub mod search;
pub mod multizeta;
pub mod rationality;

pub use algebra::{
    monics_of_degree, rational_to_series, FieldConfig, FieldElement, FieldOp, LaurentSeries,
    PolyOp, PolyValue, Polynomial, RationalFunction, SeriesOp,
};
pub use error::{Error, Result};
pub use identities::{
    membership_lists, Family, FamilyBounds, IdentityCase, MembershipLists, VerificationReport,
};
pub use search::{
    check_tuple_restrictions, load_checkpoint, run_search, splice_check, weight_summary,
    ClassificationRecord, PredicateCheck, RestrictionViolation, ResultSet, SearchConfig,
    TheoremIndex, TupleStatus, WeightSummary,
};
pub use multizeta::{CompositionTuple, ZetaApproximation, ZetaRatio};
pub use rationality::{
    continued_fraction, detect_rational, reconstruct_at_spike, ContinuedFraction,
    DetectOptions, DetectionStatus, RationalityVerdict, StopReason,
};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Default cap on the number of monic polynomials enumerated per degree
/// level: levels with q^d above this are refused rather than attempted.
pub const DEFAULT_LEVEL_BUDGET: u64 = 1 << 20;

/// Shared computation context: the coefficient field plus memoized
/// Carlitz data (brackets, their products, power-sum rows).
pub struct Context {
    field: FieldConfig,
    budget: u64,
    pub(crate) carlitz_cache: Mutex<CarlitzCache>,
    pub(crate) rows: Mutex<HashMap<u32, Arc<PowerSumRow>>>,
}

#[derive(Default)]
pub(crate) struct CarlitzCache {
    /// brackets[n-1] = t^(q^n) - t
    pub(crate) brackets: Vec<Polynomial>,
    /// ell[n] = prod_{i=1..n} (t - t^(q^i)), ell[0] = 1
    pub(crate) ell: Vec<Polynomial>,
    /// big_l[n] = prod_{i=1..n} (t^(q^i) - t), big_l[0] = 1
    pub(crate) big_l: Vec<Polynomial>,
}

/// Memoized row of power sums for one degree d: values S_d(1..=s_max)
/// at a common absolute precision.
pub(crate) struct PowerSumRow {
    pub(crate) prec: i64,
    /// sums[s-1] = S_d(s); entries that vanish to the row precision are
    /// stored as the zero series.
    pub(crate) sums: Vec<LaurentSeries>,
}

impl Context {
    pub fn new(field: FieldConfig) -> Self {
        Self::with_budget(field, DEFAULT_LEVEL_BUDGET)
    }

    pub fn with_budget(field: FieldConfig, budget: u64) -> Self {
        Context {
            field,
            budget,
            carlitz_cache: Mutex::new(CarlitzCache::default()),
            rows: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
