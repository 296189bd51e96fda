//! Sweep over composition tuples: classify each as eulerian, zeta-like or
//! not-detected by rationality detection on its zeta ratio, reproduce the
//! classification tables, and run the falsification checks for the
//! restriction, splicing and weight conjectures.

use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::field::prime_power;
use crate::algebra::RationalFunction;
use crate::error::{Error, Result};
use crate::multizeta::CompositionTuple;
use crate::rationality::{detect_rational, DetectOptions, DetectionStatus};
use crate::Context;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub depth: usize,
    pub max_weight: u32,
    pub restricted: bool,
    pub primitive_only: bool,
    pub precision: i64,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.depth < 2 {
            return Err(Error::InvalidParameter(
                "search depth must be at least 2".into(),
            ));
        }
        if (self.max_weight as u64) < self.depth as u64 {
            return Err(Error::InvalidParameter(
                "max_weight must be at least the depth".into(),
            ));
        }
        if self.precision < 1 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TupleStatus {
    #[serde(rename = "eulerian")]
    Eulerian,
    #[serde(rename = "zeta_like")]
    ZetaLike,
    #[serde(rename = "not_detected")]
    NotDetected,
}

impl TupleStatus {
    pub fn detected(&self) -> bool {
        *self != TupleStatus::NotDetected
    }
}

impl fmt::Display for TupleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TupleStatus::Eulerian => "eulerian",
            TupleStatus::ZetaLike => "zeta_like",
            TupleStatus::NotDetected => "not_detected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub tuple: CompositionTuple,
    pub weight: u32,
    pub depth: usize,
    pub status: TupleStatus,
    pub ratio: Option<RationalFunction>,
    pub covered_by_theorem: bool,
    pub precision_used: i64,
    pub heuristic: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredicateCheck {
    pub predicate: String,
    pub holds: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightSummary {
    pub q: u32,
    pub depth: usize,
    pub eulerian_weights: Vec<u32>,
    pub zeta_like_weights: Vec<u32>,
    pub conformance: Vec<PredicateCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultSet {
    pub q: u32,
    pub config: SearchConfig,
    pub records: Vec<ClassificationRecord>,
    pub summary: WeightSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictionViolation {
    pub tuple: CompositionTuple,
    pub constraint: String,
}

/// Lookup from tuples to the coefficients of the proven families covering them.
pub struct TheoremIndex {
    map: HashMap<CompositionTuple, RationalFunction>,
}

impl TheoremIndex {
    pub fn build(ctx: &Context, max_weight: u32) -> Result<Self> {
        let mut map = HashMap::new();
        for case in ctx.theorem_cases_up_to_weight(max_weight)? {
            // overlapping families carry the same coefficient for the same tuple
            map.entry(case.lhs_tuple).or_insert(case.rhs_coefficient);
        }
        Ok(TheoremIndex { map })
    }

    pub fn covers(&self, tuple: &CompositionTuple) -> bool {
        self.map.contains_key(tuple)
    }

    pub fn coefficient_for(&self, tuple: &CompositionTuple) -> Option<&RationalFunction> {
        self.map.get(tuple)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl Context {
    /// All candidate tuples for the config, ordered by (weight, lexicographic).
    pub fn enumerate_tuples(&self, config: &SearchConfig) -> Vec<CompositionTuple> {
        let q = self.q();
        let p = self.field().p();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(config.depth);
        for w in config.depth as u32..=config.max_weight {
            compositions(w, config.depth, q, config.restricted, &mut cur, &mut out);
        }
        if config.primitive_only {
            out.retain(|t| t.is_primitive(p));
        }
        out
    }

    /// Classify one tuple by detecting rationality of its zeta ratio, with
    /// the detector's built-in re-verification at doubled precision.
    /// Running out of enumeration budget downgrades to not-detected.
    pub fn classify_tuple(
        &self,
        tuple: &CompositionTuple,
        precision: i64,
        index: Option<&TheoremIndex>,
    ) -> Result<ClassificationRecord> {
        if tuple.depth() < 2 {
            return Err(Error::InvalidParameter(
                "classification applies to tuples of depth >= 2".into(),
            ));
        }
        let heuristic = Cell::new(false);
        let outcome = detect_rational(self.field(), precision, &DetectOptions::default(), |p| {
            let zr = self.zeta_ratio(tuple, p)?;
            if zr.heuristic() {
                heuristic.set(true);
            }
            Ok(zr.ratio)
        });
        let (status, ratio, note) = match outcome {
            Ok(verdict) => match verdict.status {
                DetectionStatus::Rational => {
                    let status = if tuple.even_weight(self.q()) {
                        TupleStatus::Eulerian
                    } else {
                        TupleStatus::ZetaLike
                    };
                    (status, verdict.ratio, None)
                }
                DetectionStatus::NotDetected => (TupleStatus::NotDetected, None, None),
            },
            Err(Error::BudgetExceeded {
                degree,
                needed,
                budget,
            }) => (
                TupleStatus::NotDetected,
                None,
                Some(format!(
                    "budget exceeded: level {degree} needs {needed} monics, budget {budget}"
                )),
            ),
            Err(e) => return Err(e),
        };
        Ok(ClassificationRecord {
            tuple: tuple.clone(),
            weight: tuple.weight(),
            depth: tuple.depth(),
            status,
            ratio,
            covered_by_theorem: index.is_some_and(|ix| ix.covers(tuple)),
            precision_used: precision,
            heuristic: heuristic.get(),
            note,
        })
    }
}

fn compositions(
    w: u32,
    depth: usize,
    q: u32,
    restricted: bool,
    cur: &mut Vec<u32>,
    out: &mut Vec<CompositionTuple>,
) {
    if depth == 1 {
        let s = w;
        if s == 0 {
            return;
        }
        if restricted && !cur.is_empty() {
            if s % (q - 1).max(1) != 0 || *cur.last().unwrap() > s {
                return;
            }
        }
        cur.push(s);
        out.push(CompositionTuple::new(cur.clone()).unwrap());
        cur.pop();
        return;
    }
    for s in 1..=w.saturating_sub(depth as u32 - 1) {
        if restricted && !cur.is_empty() {
            if s % (q - 1).max(1) != 0 || *cur.last().unwrap() > s {
                continue;
            }
        }
        cur.push(s);
        compositions(w - s, depth - 1, q, restricted, cur, out);
        cur.pop();
    }
}

/// Classify every enumerated tuple, skipping tuples already present in the
/// checkpoint log and appending each fresh record to it as work completes.
pub fn run_search(
    ctx: &Context,
    config: &SearchConfig,
    checkpoint: Option<&Path>,
) -> Result<ResultSet> {
    config.validate()?;
    let tuples = ctx.enumerate_tuples(config);
    let mut done: HashMap<CompositionTuple, ClassificationRecord> = HashMap::new();
    if let Some(path) = checkpoint {
        let (records, damaged) = load_checkpoint_lenient(path)?;
        if damaged {
            // rewrite cleanly so later appends start on a fresh line
            let mut buf = String::new();
            for record in &records {
                buf.push_str(&serde_json::to_string(record)?);
                buf.push('\n');
            }
            std::fs::write(path, buf)?;
        }
        for record in records {
            done.insert(record.tuple.clone(), record);
        }
    }
    let index = TheoremIndex::build(ctx, config.max_weight)?;
    let todo: Vec<&CompositionTuple> = tuples.iter().filter(|t| !done.contains_key(t)).collect();
    let writer = match checkpoint {
        Some(path) => Some(Mutex::new(BufWriter::new(
            OpenOptions::new().create(true).append(true).open(path)?,
        ))),
        None => None,
    };
    let fresh: Vec<Result<ClassificationRecord>> = todo
        .par_iter()
        .map(|tuple| {
            let record = ctx.classify_tuple(tuple, config.precision, Some(&index))?;
            if let Some(writer) = &writer {
                let line = serde_json::to_string(&record)?;
                let mut guard = writer.lock().unwrap();
                writeln!(guard, "{line}")?;
                guard.flush()?;
            }
            Ok(record)
        })
        .collect();
    for result in fresh {
        let record = result?;
        done.insert(record.tuple.clone(), record);
    }
    let records: Vec<ClassificationRecord> = tuples
        .iter()
        .filter_map(|t| done.get(t).cloned())
        .collect();
    let summary = weight_summary(ctx.q(), config, &records);
    Ok(ResultSet {
        q: ctx.q(),
        config: config.clone(),
        records,
        summary,
    })
}

/// Read records back from an append-only checkpoint log.  A final line cut
/// short by a crash is dropped; damage anywhere else is an error.
pub fn load_checkpoint(path: &Path) -> Result<Vec<ClassificationRecord>> {
    load_checkpoint_lenient(path).map(|(records, _)| records)
}

fn load_checkpoint_lenient(path: &Path) -> Result<(Vec<ClassificationRecord>, bool)> {
    if !path.exists() {
        return Ok((Vec::new(), false));
    }
    let text = std::fs::read_to_string(path)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let mut records = Vec::with_capacity(lines.len());
    let mut damaged = !text.is_empty() && !text.ends_with('\n');
    for (i, line) in lines.iter().enumerate() {
        match serde_json::from_str::<ClassificationRecord>(line) {
            Ok(record) => records.push(record),
            Err(_) if i + 1 == lines.len() => {
                damaged = true;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((records, damaged))
}

/// Consecutive-entry and suffix conditions every detected tuple is
/// conjectured to satisfy; returns decisive counterexamples.  A not-detected
/// suffix or prefix is inconclusive rather than a violation, since failure
/// to detect never certifies that a value is not zeta-like.
pub fn check_tuple_restrictions(
    ctx: &Context,
    results: &ResultSet,
) -> Result<Vec<RestrictionViolation>> {
    let q = results.q as u64;
    let mut violations = Vec::new();
    for record in results.records.iter().filter(|r| r.status.detected()) {
        let s = record.tuple.entries();
        for i in 0..s.len() - 1 {
            let (a, b) = (s[i] as u64, s[i + 1] as u64);
            if a > b {
                violations.push(RestrictionViolation {
                    tuple: record.tuple.clone(),
                    constraint: format!("s_{} <= s_{} fails: {a} > {b}", i + 1, i + 2),
                });
            }
            if (q - 1) * a > b {
                violations.push(RestrictionViolation {
                    tuple: record.tuple.clone(),
                    constraint: format!("(q-1)s_{} <= s_{} fails for {a}, {b}", i + 1, i + 2),
                });
            }
            if b > (q * q - 1) * a {
                violations.push(RestrictionViolation {
                    tuple: record.tuple.clone(),
                    constraint: format!("s_{} <= (q^2-1)s_{} fails for {b}, {a}", i + 2, i + 1),
                });
            }
        }
        // the suffix is predicted eulerian, which forces an 'even' weight;
        // parity is the decisive part (depth-one suffixes reduce to it)
        let suffix_weight: u64 = s[1..].iter().map(|&x| x as u64).sum();
        if suffix_weight % (q - 1).max(1) != 0 {
            violations.push(RestrictionViolation {
                tuple: record.tuple.clone(),
                constraint: format!("suffix weight {suffix_weight} is not 'even'"),
            });
        } else if s.len() > 2 {
            let suffix = CompositionTuple::new(s[1..].to_vec())?;
            let sub = ctx.classify_tuple(&suffix, record.precision_used, None)?;
            if sub.status == TupleStatus::ZetaLike {
                violations.push(RestrictionViolation {
                    tuple: record.tuple.clone(),
                    constraint: format!("suffix {suffix} is zeta-like but not eulerian"),
                });
            }
        }
    }
    Ok(violations)
}

/// Join two zeta-like tuples overlapping in one entry and classify the
/// result; the weight must land on a power of two or one less (q = 2 only).
pub fn splice_check(
    ctx: &Context,
    t1: &CompositionTuple,
    t2: &CompositionTuple,
    precision: i64,
) -> Result<ClassificationRecord> {
    if ctx.q() != 2 {
        return Err(Error::InvalidParameter("splicing applies to q = 2".into()));
    }
    if t1.entries().last() != t2.entries().first() {
        return Err(Error::InvalidParameter(
            "tuples must overlap in their shared entry".into(),
        ));
    }
    let mut entries = t1.entries().to_vec();
    entries.extend_from_slice(&t2.entries()[1..]);
    let spliced = CompositionTuple::new(entries)?;
    let w = spliced.weight() as u64;
    if !(w + 1).is_power_of_two() && !w.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "spliced weight {w} is neither a power of 2 nor one less"
        )));
    }
    for part in [t1, t2] {
        let record = ctx.classify_tuple(part, precision, None)?;
        if !record.status.detected() {
            return Err(Error::InvalidParameter(format!(
                "{part} is not detected as zeta-like, cannot splice"
            )));
        }
    }
    let index = TheoremIndex::build(ctx, spliced.weight())?;
    let mut record = ctx.classify_tuple(&spliced, precision, Some(&index))?;
    if t1.entries() == [1, 1] && t2.entries() == [1, 1] {
        record.note = Some("known exception: (1, 1) spliced with itself is predicted not zeta-like".into());
    }
    Ok(record)
}

fn strip_factors(mut x: u64, p: u64) -> u64 {
    while x % p == 0 {
        x /= p;
    }
    x
}

fn digits_nonzero_with_at_most_one_unit(mut x: u64, p: u64) -> bool {
    let mut units = 0;
    while x > 0 {
        let d = x % p;
        if d == 0 {
            return false;
        }
        if d == 1 {
            units += 1;
        }
        x /= p;
    }
    units <= 1
}

fn is_p_power(x: u64, p: u64) -> bool {
    strip_factors(x, p) == 1
}

/// Distinct detected weights plus conformance of the weight-shape predicates.
pub fn weight_summary(q: u32, config: &SearchConfig, records: &[ClassificationRecord]) -> WeightSummary {
    let p = prime_power(q).map(|(p, _)| p as u64).unwrap_or(q as u64);
    let q64 = q as u64;
    let mut eulerian_weights: Vec<u32> = records
        .iter()
        .filter(|r| r.status == TupleStatus::Eulerian)
        .map(|r| r.weight)
        .collect();
    eulerian_weights.sort_unstable();
    eulerian_weights.dedup();
    let mut zeta_like_weights: Vec<u32> = records
        .iter()
        .filter(|r| r.status == TupleStatus::ZetaLike)
        .map(|r| r.weight)
        .collect();
    zeta_like_weights.sort_unstable();
    zeta_like_weights.dedup();

    let mut conformance = Vec::new();

    let offenders: Vec<u32> = eulerian_weights
        .iter()
        .copied()
        .filter(|&w| {
            let mut k = 1u32;
            loop {
                let base = match q64.checked_pow(k) {
                    Some(v) if v - 1 <= w as u64 => v - 1,
                    _ => return true,
                };
                if w as u64 % base == 0 && is_p_power(w as u64 / base, p) {
                    return false;
                }
                k += 1;
            }
        })
        .collect();
    conformance.push(PredicateCheck {
        predicate: "eulerian weights have the form p^m(q^k-1)".into(),
        holds: offenders.is_empty(),
        details: if offenders.is_empty() {
            format!("checked {} weights", eulerian_weights.len())
        } else {
            format!("offending weights: {offenders:?}")
        },
    });

    let primitive_eulerian: Vec<u32> = {
        let mut ws: Vec<u32> = records
            .iter()
            .filter(|r| r.status == TupleStatus::Eulerian && r.tuple.is_primitive(p as u32))
            .map(|r| r.weight)
            .collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    };
    let offenders: Vec<u32> = primitive_eulerian
        .iter()
        .copied()
        .filter(|&w| {
            let w = w as u64;
            if q == 2 {
                !(w.is_power_of_two() || (w + 1).is_power_of_two())
            } else {
                w != q64 * (q64 - 1) && !is_q_power_minus_one(w, q64)
            }
        })
        .collect();
    conformance.push(PredicateCheck {
        predicate: if q == 2 {
            "primitive eulerian weights are 2^n or 2^n - 1".into()
        } else {
            "primitive eulerian weights are q(q-1) or q^n - 1".into()
        },
        holds: offenders.is_empty(),
        details: if offenders.is_empty() {
            format!("checked {} weights", primitive_eulerian.len())
        } else {
            format!("offending weights: {offenders:?}")
        },
    });

    if q64 == p {
        let offenders: Vec<u32> = zeta_like_weights
            .iter()
            .copied()
            .filter(|&w| !digits_nonzero_with_at_most_one_unit(strip_factors(w as u64, p), p))
            .collect();
        conformance.push(PredicateCheck {
            predicate: "zeta-like weights are p^m times a base-p number with no zero digit and at most one digit 1"
                .into(),
            holds: offenders.is_empty(),
            details: if offenders.is_empty() {
                format!("checked {} weights", zeta_like_weights.len())
            } else {
                format!("offending weights: {offenders:?}")
            },
        });
    }

    let predicted_min = q64.checked_pow(config.depth as u32 - 1);
    if let Some(predicted) = predicted_min.filter(|&m| m <= config.max_weight as u64) {
        let observed = eulerian_weights
            .iter()
            .chain(zeta_like_weights.iter())
            .copied()
            .min();
        conformance.push(PredicateCheck {
            predicate: "smallest zeta-like weight is q^(r-1)".into(),
            holds: observed == Some(predicted as u32),
            details: format!("predicted {predicted}, observed {observed:?}"),
        });
    }

    if q > 2 {
        let predicted = if config.depth == 2 {
            Some(q64 * (q64 - 1))
        } else {
            q64.checked_pow(config.depth as u32).map(|v| v - 1)
        };
        if let Some(predicted) = predicted.filter(|&m| m <= config.max_weight as u64) {
            let observed = eulerian_weights.first().copied();
            conformance.push(PredicateCheck {
                predicate: "smallest eulerian weight matches the depth prediction".into(),
                holds: observed == Some(predicted as u32),
                details: format!("predicted {predicted}, observed {observed:?}"),
            });
        }
    }

    let k_min = if config.depth <= 3 { 4 } else { config.depth as u32 + 1 };
    let primitive_detected: Vec<u32> = records
        .iter()
        .filter(|r| r.status.detected() && r.tuple.is_primitive(p as u32))
        .map(|r| r.weight)
        .collect();
    let mut checked_powers = Vec::new();
    let mut offenders = Vec::new();
    let mut k = k_min;
    while let Some(v) = q64.checked_pow(k).filter(|&v| v <= config.max_weight as u64) {
        checked_powers.push(v as u32);
        if primitive_detected.contains(&(v as u32)) {
            offenders.push(v as u32);
        }
        k += 1;
    }
    if !checked_powers.is_empty() {
        conformance.push(PredicateCheck {
            predicate: format!("q^k is not a primitive zeta-like weight for k >= {k_min}"),
            holds: offenders.is_empty(),
            details: if offenders.is_empty() {
                format!("checked weights {checked_powers:?}")
            } else {
                format!("offending weights: {offenders:?}")
            },
        });
    }

    WeightSummary {
        q,
        depth: config.depth,
        eulerian_weights,
        zeta_like_weights,
        conformance,
    }
}

fn is_q_power_minus_one(w: u64, q: u64) -> bool {
    let mut v = q;
    loop {
        if v - 1 == w {
            return true;
        }
        if v - 1 > w {
            return false;
        }
        v = match v.checked_mul(q) {
            Some(v) => v,
            None => return false,
        };
    }
}
