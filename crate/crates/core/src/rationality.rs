//! Continued fractions in K_inf and detection of rational values.
//!
//! A truncated series only determines finitely many partial quotients; the
//! expansion here stops before any quotient could depend on digits beyond
//! the precision horizon, so everything it emits is exact.

use crate::algebra::{FieldConfig, LaurentSeries, Polynomial, RationalFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The remainder vanished to precision: the expansion is complete.
    ExactTermination,
    /// The next quotient would not be determined by the available digits.
    PrecisionExhausted,
    /// The requested quotient cap was reached.
    QuotientLimit,
}

#[derive(Debug, Clone)]
pub struct ContinuedFraction {
    /// Partial quotients a_0, a_1, ...; every a_k with k >= 1 has degree >= 1.
    pub quotients: Vec<Polynomial>,
    /// Convergent pairs (p_k, q_k): p_k = a_k p_{k-1} + p_{k-2}, likewise q.
    pub convergents: Vec<(Polynomial, Polynomial)>,
    pub stop: StopReason,
    /// Sum of deg a_k over k >= 1; each step consumes twice its quotient's
    /// degree in precision, so this is capped near half the input precision.
    pub total_quotient_degree: i64,
}

pub fn continued_fraction(
    cfg: &FieldConfig,
    x: &LaurentSeries,
    max_quotients: usize,
) -> Result<ContinuedFraction> {
    if x.precision() < 1 {
        return Err(Error::InvalidParameter(
            "continued fraction needs positive precision".into(),
        ));
    }
    if max_quotients == 0 {
        return Err(Error::InvalidParameter("quotient cap must be positive".into()));
    }
    let mut quotients: Vec<Polynomial> = Vec::new();
    let mut convergents: Vec<(Polynomial, Polynomial)> = Vec::new();
    let mut total_quotient_degree = 0i64;
    let mut cur = x.clone();
    let stop;
    loop {
        let a = cur.polynomial_part()?;
        if let Some((prev_p, prev_q)) = convergents.last().cloned() {
            total_quotient_degree += a.degree().expect("quotients past a_0 are nonconstant") as i64;
            let (pp, qq) = if convergents.len() == 1 {
                (Polynomial::one(), Polynomial::zero())
            } else {
                convergents[convergents.len() - 2].clone()
            };
            convergents.push((
                Polynomial::add(cfg, &Polynomial::mul(cfg, &a, &prev_p), &pp),
                Polynomial::add(cfg, &Polynomial::mul(cfg, &a, &prev_q), &qq),
            ));
        } else {
            convergents.push((a.clone(), Polynomial::one()));
        }
        quotients.push(a);
        let rem = cur.fractional_part(cfg)?;
        if rem.is_zero() {
            stop = StopReason::ExactTermination;
            break;
        }
        if quotients.len() >= max_quotients {
            stop = StopReason::QuotientLimit;
            break;
        }
        // inverting costs twice the remainder's valuation in precision, and
        // the next quotient needs at least one exact digit after that
        let v = rem.valuation().expect("nonzero");
        if rem.precision() - 2 * v < 1 {
            stop = StopReason::PrecisionExhausted;
            break;
        }
        cur = rem.inv(cfg)?;
    }
    Ok(ContinuedFraction {
        quotients,
        convergents,
        stop,
        total_quotient_degree,
    })
}

impl ContinuedFraction {
    /// Value of the prefix a_0, ..., a_{cut-1} as a reduced rational.
    pub fn prefix_value(&self, cfg: &FieldConfig, cut: usize) -> Result<RationalFunction> {
        if cut == 0 || cut > self.convergents.len() {
            return Err(Error::OutOfRange(format!(
                "cut {cut} outside 1..={}",
                self.convergents.len()
            )));
        }
        let (p, q) = &self.convergents[cut - 1];
        RationalFunction::new(cfg, p.clone(), q.clone())
    }
}

/// Truncate the expansion just before quotient `k` and return that value.
pub fn reconstruct_at_spike(
    cfg: &FieldConfig,
    cf: &ContinuedFraction,
    k: usize,
) -> Result<RationalFunction> {
    cf.prefix_value(cfg, k)
}

#[derive(Debug, Clone)]
pub struct DetectOptions {
    /// A quotient of at least this degree always counts as a spike.
    pub spike_floor: i64,
    /// ... as does one at least this multiple of the degree seen before it.
    pub spike_threshold: f64,
    pub max_quotients: usize,
    /// Digits of agreement beyond the 2·degree a rational pins down anyway,
    /// required before an exactly-terminating expansion counts as detection.
    /// Any truncated series is trivially some rational of degree half its
    /// length, so termination without this surplus is noise.
    pub termination_margin: i64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            spike_floor: 8,
            spike_threshold: 1.0,
            max_quotients: 128,
            termination_margin: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionStatus {
    Rational,
    NotDetected,
}

#[derive(Debug, Clone)]
pub struct RationalityVerdict {
    pub status: DetectionStatus,
    pub ratio: Option<RationalFunction>,
    /// Length of the partial-quotient prefix shared by both precision runs.
    pub stable_quotients: usize,
    /// Degree of the spike quotient, when detection went through one.
    pub spike_degree: Option<usize>,
    pub precisions_used: Vec<i64>,
}

/// Two-stage rationality detection. The expansion of the value at `prec`
/// suggests candidate cut points (exact termination, a degree spike, or the
/// last few quotients before precision ran out); a candidate is accepted
/// only if the value recomputed at twice the precision extends the same
/// quotient prefix and agrees with the candidate rational to the doubled
/// horizon. A rational too large for `prec` digits is still caught when the
/// doubled expansion terminates exactly, extends the first run's quotients,
/// and leaves `termination_margin` digits of agreement to spare.
pub fn detect_rational<F>(
    cfg: &FieldConfig,
    prec: i64,
    opts: &DetectOptions,
    mut eval: F,
) -> Result<RationalityVerdict>
where
    F: FnMut(i64) -> Result<LaurentSeries>,
{
    let x = eval(prec)?;
    if x.precision() < prec {
        return Err(Error::InsufficientPrecision);
    }
    let x = x.truncate(prec);
    let cf = continued_fraction(cfg, &x, opts.max_quotients)?;
    let n = cf.quotients.len();

    let spike = spike_position(&cf, opts);
    let mut candidates: Vec<usize> = Vec::new();
    if cf.stop == StopReason::ExactTermination {
        candidates.push(n);
    }
    if let Some(k) = spike {
        candidates.push(k);
    }
    if cf.stop != StopReason::ExactTermination {
        for cut in (n.saturating_sub(2)..=n).rev() {
            if cut >= 1 {
                candidates.push(cut);
            }
        }
    }
    candidates.dedup();

    let prec2 = prec * 2;
    let x2 = eval(prec2)?;
    if x2.precision() < prec2 {
        return Err(Error::InsufficientPrecision);
    }
    let x2 = x2.truncate(prec2);
    let cf2 = continued_fraction(cfg, &x2, opts.max_quotients)?;

    let stable = cf
        .quotients
        .iter()
        .zip(cf2.quotients.iter())
        .take_while(|(a, b)| a == b)
        .count();

    for &cut in &candidates {
        if cut > stable {
            continue;
        }
        let ratio = cf.prefix_value(cfg, cut)?;
        let approx = ratio.to_series(cfg, prec2);
        if x2.agrees_with(cfg, &approx) {
            let spike_degree = match spike {
                Some(k) if k == cut => cf.quotients[k].degree(),
                _ => None,
            };
            return Ok(RationalityVerdict {
                status: DetectionStatus::Rational,
                ratio: Some(ratio),
                stable_quotients: stable,
                spike_degree,
                precisions_used: vec![prec, prec2],
            });
        }
    }
    // A rational may need more than `prec` digits to pin down: the first
    // expansion then stops on a wrong shorter fraction (rejected above).
    // When the doubled expansion terminates exactly and extends the first
    // one's quotients — the first run's final quotient may be a truncation
    // artifact, so it alone is allowed to differ — the full second
    // expansion is the value, with both runs still vouching for it.
    if cf2.stop == StopReason::ExactTermination && stable + 1 >= n {
        let ratio = cf2.prefix_value(cfg, cf2.quotients.len())?;
        let degree = ratio
            .numerator()
            .degree()
            .max(ratio.denominator().degree())
            .unwrap_or(0) as i64;
        let approx = ratio.to_series(cfg, prec2);
        if prec2 >= 2 * degree + opts.termination_margin && x2.agrees_with(cfg, &approx) {
            // this candidate was fitted on every digit of x2, so unlike the
            // stage-one candidates it has no untouched digits vouching for
            // it; demand agreement over a whole fresh window
            let prec3 = prec2 + prec;
            let x3 = eval(prec3)?;
            if x3.precision() < prec3 {
                return Err(Error::InsufficientPrecision);
            }
            if x3.truncate(prec3).agrees_with(cfg, &ratio.to_series(cfg, prec3)) {
                return Ok(RationalityVerdict {
                    status: DetectionStatus::Rational,
                    ratio: Some(ratio),
                    stable_quotients: stable,
                    spike_degree: None,
                    precisions_used: vec![prec, prec2, prec3],
                });
            }
        }
    }
    Ok(RationalityVerdict {
        status: DetectionStatus::NotDetected,
        ratio: None,
        stable_quotients: stable,
        spike_degree: None,
        precisions_used: vec![prec, prec2],
    })
}

/// First k >= 1 whose quotient degree reaches the spike rule relative to
/// the total degree before it.
fn spike_position(cf: &ContinuedFraction, opts: &DetectOptions) -> Option<usize> {
    let mut before = 0i64;
    for (k, a) in cf.quotients.iter().enumerate().skip(1) {
        let deg = a.degree().expect("nonconstant") as i64;
        let bar = opts
            .spike_floor
            .max((opts.spike_threshold * before as f64).ceil() as i64);
        if deg >= bar {
            return Some(k);
        }
        before += deg;
    }
    None
}
