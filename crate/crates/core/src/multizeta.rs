//! Multizeta values: zeta(s_1, ..., s_r) = sum over d_1 > ... > d_r >= 0 of
//! S_{d_1}(s_1) ... S_{d_r}(s_r), an element of K_inf of weight sum(s_i).

use crate::algebra::LaurentSeries;
use crate::error::{Error, Result};
use crate::Context;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Consecutive all-vanishing degree levels required before the level sum is
/// cut off without a proven tail bound.
const STABLE_LEVELS: u32 = 3;

/// Composition: a nonempty tuple of positive integer exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompositionTuple {
    entries: Vec<u32>,
}

impl CompositionTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("tuple must be nonempty".into()));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidParameter("tuple entries must be positive".into()));
        }
        if entries.iter().map(|&s| s as u64).sum::<u64>() > u32::MAX as u64 {
            return Err(Error::InvalidParameter("tuple weight overflows".into()));
        }
        Ok(CompositionTuple { entries })
    }

    pub fn single(s: u32) -> Result<Self> {
        Self::new(vec![s])
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn weight(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    /// Weight divisible by q - 1 (the analogue of an even integer weight).
    pub fn even_weight(&self, q: u32) -> bool {
        self.weight() % (q - 1) == 0
    }

    /// Not every entry divisible by the characteristic.
    pub fn is_primitive(&self, p: u32) -> bool {
        self.entries.iter().any(|&s| s % p != 0)
    }

    /// Strip the common p-power: returns (primitive tuple, e) with
    /// self = p^e * reduced entrywise.
    pub fn primitive_reduce(&self, p: u32) -> (Self, u32) {
        let mut entries = self.entries.clone();
        let mut e = 0;
        while entries.iter().all(|&s| s % p == 0) {
            for s in entries.iter_mut() {
                *s /= p;
            }
            e += 1;
        }
        (CompositionTuple { entries }, e)
    }

    /// Entrywise multiple k * (s_1, ..., s_r).
    pub fn scaled(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("scale factor must be positive".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|&s| {
                s.checked_mul(k)
                    .ok_or_else(|| Error::InvalidParameter("scaled entry overflows".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::new(entries)
    }
}

impl fmt::Display for CompositionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// A truncated multizeta value together with how it was obtained.
#[derive(Debug, Clone)]
pub struct ZetaApproximation {
    pub tuple: CompositionTuple,
    pub value: LaurentSeries,
    /// Degree levels d_1 = 0..levels_used-1 were summed.
    pub levels_used: u32,
    /// Proven (or, when heuristic, claimed) valuation lower bound for the
    /// omitted tail; always >= the requested precision.
    pub tail_bound_exponent: i64,
    /// True when the level sum was cut off after STABLE_LEVELS consecutive
    /// vanishing contributions instead of a proven bound.
    pub heuristic: bool,
}

/// zeta(tuple) / zeta(weight) at a common precision.
#[derive(Debug, Clone)]
pub struct ZetaRatio {
    pub tuple: CompositionTuple,
    pub ratio: LaurentSeries,
    pub numerator: ZetaApproximation,
    pub denominator: ZetaApproximation,
}

impl ZetaRatio {
    pub fn heuristic(&self) -> bool {
        self.numerator.heuristic || self.denominator.heuristic
    }
}

impl Context {
    /// zeta(s_1, ..., s_r) to absolute precision `prec`.
    ///
    /// Levels are summed until either the omitted tail provably has
    /// valuation >= prec (every term at level d has valuation >= s_1 d), or
    /// - when that level count would enumerate more monics than the budget
    /// allows - until STABLE_LEVELS consecutive levels vanish to precision,
    /// which is flagged as heuristic in the result.
    pub fn zeta_value(&self, tuple: &CompositionTuple, prec: i64) -> Result<ZetaApproximation> {
        if prec < 1 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        let entries = tuple.entries();
        let r = entries.len();
        let s1 = entries[0] as i64;
        let d_rig = (prec + s1 - 1) / s1 - 1; // tail from d_rig + 1 on has valuation >= prec
        let rigorous = (self.q() as u128)
            .checked_pow(d_rig as u32)
            .is_some_and(|n| n <= self.budget() as u128);
        let cfg = self.field();

        // tails[j][e] = sum over e > d_{j+1} > ... > d_r >= 0 of
        // prod_{i=j+1..r} S_{d_i}(s_i)  (0-based j, so tails[1] pairs with
        // the outermost inner entry); prefixes[j] carries the running sum
        // that becomes tails[j][e+1].
        let mut tails: Vec<Vec<LaurentSeries>> = vec![Vec::new(); r];
        let mut prefixes: Vec<LaurentSeries> = vec![LaurentSeries::zero(prec); r];
        let mut value = LaurentSeries::zero(prec);
        let mut levels_used = 0u32;
        let mut stable = 0u32;
        let mut e = 0u32;
        loop {
            if rigorous {
                if e as i64 > d_rig {
                    break;
                }
            } else if stable >= STABLE_LEVELS {
                break;
            } else {
                self.check_budget(e)?;
            }
            for j in (1..r).rev() {
                tails[j].push(prefixes[j].clone());
                let here = self.power_sum(e, entries[j], prec)?;
                let term = if j + 1 < r {
                    LaurentSeries::mul(cfg, &here, &tails[j + 1][e as usize])
                } else {
                    here
                };
                prefixes[j] = LaurentSeries::add(cfg, &prefixes[j], &term);
            }
            if e as usize >= r - 1 {
                let head = self.power_sum(e, entries[0], prec)?;
                let term = if r > 1 {
                    LaurentSeries::mul(cfg, &head, &tails[1][e as usize])
                } else {
                    head
                };
                if term.valuation_or_prec() >= prec {
                    stable += 1;
                } else {
                    stable = 0;
                }
                value = LaurentSeries::add(cfg, &value, &term.truncate(prec));
                levels_used = e + 1;
            }
            e += 1;
        }
        // a heuristic cutoff can still end past the proven-tail threshold;
        // either way the tail consists of levels e and beyond
        let proven_bound = s1 * e as i64;
        let (heuristic, tail_bound_exponent) = if proven_bound >= prec {
            (false, proven_bound)
        } else {
            (true, prec)
        };
        Ok(ZetaApproximation {
            tuple: tuple.clone(),
            value: value.truncate(prec),
            levels_used,
            tail_bound_exponent,
            heuristic,
        })
    }

    /// zeta(tuple) / zeta(weight(tuple)), both at precision `prec`. The
    /// denominator has valuation 0, so the quotient keeps full precision.
    pub fn zeta_ratio(&self, tuple: &CompositionTuple, prec: i64) -> Result<ZetaRatio> {
        let numerator = self.zeta_value(tuple, prec)?;
        let single = CompositionTuple::single(tuple.weight())?;
        let denominator = self.zeta_value(&single, prec)?;
        let ratio = LaurentSeries::div(self.field(), &numerator.value, &denominator.value)?;
        Ok(ZetaRatio {
            tuple: tuple.clone(),
            ratio: ratio.truncate(prec),
            numerator,
            denominator,
        })
    }
}
