//! Carlitz brackets and power sums over monic polynomials.
//!
//! S_d(s) denotes the sum of a^{-s} over the q^d monic polynomials a of
//! degree d; S_{<d}(s) sums over all monic a with deg a < d. Iterated
//! variants sum over strictly decreasing degree chains.

use crate::algebra::{monics_of_degree, LaurentSeries, Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::{Context, PowerSumRow};
use std::sync::Arc;

/// Degree bound for materialized bracket products: ell(n) with q^n above
/// this would allocate past any sensible use.
const MAX_DENSE_DEGREE: u64 = 1 << 26;

impl Context {
    /// [n] = t^(q^n) - t, n >= 1.
    pub fn bracket(&self, n: u32) -> Result<Polynomial> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "bracket index must be at least 1".into(),
            ));
        }
        self.ensure_products(n)?;
        let cache = self.carlitz_cache.lock().unwrap();
        Ok(cache.brackets[(n - 1) as usize].clone())
    }

    /// ell(n) = prod_{i=1..n} (t - t^(q^i)); ell(0) = 1. Equals (-1)^n L_n.
    pub fn ell(&self, n: u32) -> Result<Polynomial> {
        self.ensure_products(n)?;
        let cache = self.carlitz_cache.lock().unwrap();
        Ok(cache.ell[n as usize].clone())
    }

    /// L_n = prod_{i=1..n} (t^(q^i) - t); L_0 = 1.
    pub fn big_l(&self, n: u32) -> Result<Polynomial> {
        self.ensure_products(n)?;
        let cache = self.carlitz_cache.lock().unwrap();
        Ok(cache.big_l[n as usize].clone())
    }

    fn ensure_products(&self, n: u32) -> Result<()> {
        let q = self.q() as u64;
        let mut cache = self.carlitz_cache.lock().unwrap();
        if cache.ell.is_empty() {
            cache.ell.push(Polynomial::one());
            cache.big_l.push(Polynomial::one());
        }
        let cfg = self.field();
        while cache.ell.len() <= n as usize {
            let i = cache.ell.len() as u32;
            let deg = q
                .checked_pow(i)
                .filter(|&d| d <= MAX_DENSE_DEGREE)
                .ok_or_else(|| {
                    Error::OutOfRange(format!("bracket degree q^{i} is too large to materialize"))
                })?;
            // t^(q^i) - t
            let mut coeffs = vec![0u8; deg as usize + 1];
            coeffs[1] = cfg.neg(1);
            coeffs[deg as usize] = 1;
            let bracket = Polynomial::from_coeffs(coeffs);
            let ell = Polynomial::mul(cfg, cache.ell.last().unwrap(), &Polynomial::neg(cfg, &bracket));
            let big_l = Polynomial::mul(cfg, cache.big_l.last().unwrap(), &bracket);
            cache.brackets.push(bracket);
            cache.ell.push(ell);
            cache.big_l.push(big_l);
        }
        Ok(())
    }

    pub(crate) fn check_budget(&self, d: u32) -> Result<()> {
        let needed = (self.q() as u128)
            .checked_pow(d)
            .unwrap_or(u128::MAX);
        if needed > self.budget() as u128 {
            return Err(Error::BudgetExceeded {
                degree: d,
                needed,
                budget: self.budget(),
            });
        }
        Ok(())
    }

    /// Memoized row of S_d(1..=s) at absolute precision `prec`; rows only
    /// ever grow, and a request within the cached envelope is served as is.
    fn row(&self, d: u32, s: u32, prec: i64) -> Result<Arc<PowerSumRow>> {
        debug_assert!(d >= 1 && s >= 1 && prec >= 1);
        self.check_budget(d)?;
        let mut rows = self.rows.lock().unwrap();
        if let Some(row) = rows.get(&d) {
            if row.prec >= prec && row.sums.len() >= s as usize {
                return Ok(Arc::clone(row));
            }
        }
        let (smax, rprec) = match rows.get(&d) {
            Some(row) => (row.sums.len().max(s as usize), row.prec.max(prec)),
            None => (s as usize, prec),
        };
        let cfg = self.field();
        let mut sums = vec![LaurentSeries::zero(rprec); smax];
        // a^{-k} has valuation k*d, hence vanishes to precision once k*d >= rprec.
        let live = smax.min(((rprec - 1) / d as i64) as usize);
        if live > 0 {
            for a in monics_of_degree(cfg, d) {
                let mut cur = LaurentSeries::one(rprec).div_by_poly(cfg, &a, rprec)?;
                for k in 0..live {
                    sums[k] = LaurentSeries::add(cfg, &sums[k], &cur);
                    if k + 1 < live {
                        cur = cur.div_by_poly(cfg, &a, rprec)?;
                    }
                }
            }
        }
        let row = Arc::new(PowerSumRow { prec: rprec, sums });
        rows.insert(d, Arc::clone(&row));
        Ok(row)
    }

    /// S_d(s): sum of a^{-s} over monic a of degree d, to absolute
    /// precision `prec`.
    pub fn power_sum(&self, d: u32, s: u32, prec: i64) -> Result<LaurentSeries> {
        if prec < 1 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        if s == 0 {
            // q^d monics each contribute 1; q^d = 0 in characteristic p for d >= 1
            let v = if d == 0 {
                LaurentSeries::one(prec)
            } else {
                LaurentSeries::zero(prec)
            };
            return Ok(v);
        }
        if d == 0 {
            return Ok(LaurentSeries::one(prec));
        }
        let row = self.row(d, s, prec)?;
        Ok(row.sums[(s - 1) as usize].truncate(prec))
    }

    /// Reference implementation of S_d(s): per-monic polynomial power and a
    /// fresh series inversion, no shared state. Quadratic in s; test use only.
    pub fn power_sum_bruteforce(&self, d: u32, s: u32, prec: i64) -> Result<LaurentSeries> {
        if prec < 1 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        self.check_budget(d)?;
        let cfg = self.field();
        let mut acc = LaurentSeries::zero(prec);
        for a in monics_of_degree(cfg, d) {
            let pw = a.pow(cfg, s as u64);
            let inv = LaurentSeries::from_polynomial(&pw, prec).inv(cfg)?;
            acc = LaurentSeries::add(cfg, &acc, &inv.truncate(prec));
        }
        Ok(acc)
    }

    /// S_{<d}(s): sum of a^{-s} over monic a of degree < d.
    pub fn power_sum_below(&self, d: u32, s: u32, prec: i64) -> Result<LaurentSeries> {
        if prec < 1 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        let cfg = self.field();
        let mut acc = LaurentSeries::zero(prec);
        for e in 0..d {
            acc = LaurentSeries::add(cfg, &acc, &self.power_sum(e, s, prec)?);
        }
        Ok(acc)
    }

    /// Exact closed form for S_d(s) when one applies; None otherwise.
    ///
    /// Covered shapes, up to the twist S_d(q*u) = S_d(u)^q:
    ///   s <= q                      -> 1 / ell(d)^s
    ///   s = q^j - 1                 -> ell(d+j-1) / (ell(j-1) ell(d)^(q^j))
    ///   s = q^k - sum_i q^(k_i)     -> ell(d)^((m-1)q^k) prod_i S_d(q^k - q^(k_i))
    /// the last with 1 <= m < q terms and exponents k_i < k.
    pub fn power_sum_closed(&self, d: u32, s: u32) -> Result<Option<RationalFunction>> {
        let q = self.q() as u64;
        if s == 0 {
            return Ok(Some(if d == 0 {
                RationalFunction::one()
            } else {
                RationalFunction::zero()
            }));
        }
        if d == 0 {
            return Ok(Some(RationalFunction::one()));
        }
        // peel the q-part of s; Frobenius twists the reduced value
        let mut u = s as u64;
        let mut twist = 0u32;
        while u % q == 0 {
            u /= q;
            twist += 1;
        }
        let base = match self.closed_form_reduced(d, u)? {
            Some(r) => r,
            None => return Ok(None),
        };
        let out = if twist == 0 {
            base
        } else {
            base.pow(self.field(), q.pow(twist))
        };
        Ok(Some(out))
    }

    fn closed_form_reduced(&self, d: u32, u: u64) -> Result<Option<RationalFunction>> {
        let q = self.q() as u64;
        let cfg = self.field();
        if u <= q {
            let den = self.ell(d)?.pow(cfg, u);
            return Ok(Some(RationalFunction::inverse_of(cfg, &den)?));
        }
        if let Some(j) = power_plus_one(q, u) {
            return Ok(Some(self.sd_power_defect(d, j, 0)?));
        }
        // q^k - u as a sum of exactly m powers of q, smallest k first
        let mut k = 1u32;
        let mut qk = q;
        while qk <= u {
            k += 1;
            match qk.checked_mul(q) {
                Some(v) => qk = v,
                None => return Ok(None),
            }
        }
        let x = qk - u;
        let m = digit_sum(q, x);
        if m >= q {
            return Ok(None);
        }
        let exps = match q_power_exponents(q, x, m, k - 1) {
            Some(e) => e,
            None => return Ok(None),
        };
        let ell_d = self.ell(d)?;
        let mut acc = RationalFunction::from_polynomial(ell_d.pow(cfg, (m - 1) * qk));
        for ki in exps {
            let factor = self.sd_power_defect(d, k - ki, ki)?;
            acc = RationalFunction::mul(cfg, &acc, &factor);
        }
        Ok(Some(acc))
    }

    /// S_d(q^j - 1)^(q^e) = [ ell(d+j-1) / (ell(j-1) ell(d)^(q^j)) ]^(q^e).
    fn sd_power_defect(&self, d: u32, j: u32, e: u32) -> Result<RationalFunction> {
        let q = self.q() as u64;
        let cfg = self.field();
        let num = self.ell(d + j - 1)?;
        let den = Polynomial::mul(
            cfg,
            &self.ell(j - 1)?,
            &self.ell(d)?.pow(cfg, q.pow(j)),
        );
        let base = RationalFunction::new(cfg, num, den)?;
        Ok(if e == 0 { base } else { base.pow(cfg, q.pow(e)) })
    }

    /// Exact closed form for S_{<d}(s) when one applies; None otherwise.
    ///
    /// Covered shapes, up to the twist S_{<d}(q*u) = S_{<d}(u)^q:
    ///   s = q^j - 1                    -> ell(d+j-1) / (ell(j) ell(d-1)^(q^j))
    ///   s = sum_{i=1..m} (q^k - q^(k_i)) -> prod_i S_{<d}(q^k - q^(k_i))
    /// the last with 1 <= m <= q terms and exponents k_i <= k (a term with
    /// k_i = k contributes S_{<d}(0) = 1).
    pub fn power_sum_below_closed(&self, d: u32, s: u32) -> Result<Option<RationalFunction>> {
        let q = self.q() as u64;
        if d == 0 {
            return Ok(Some(RationalFunction::zero()));
        }
        if s == 0 {
            return Ok(Some(RationalFunction::one()));
        }
        let mut u = s as u64;
        let mut twist = 0u32;
        while u % q == 0 {
            u /= q;
            twist += 1;
        }
        let base = match self.below_closed_reduced(d, u)? {
            Some(r) => r,
            None => return Ok(None),
        };
        let out = if twist == 0 {
            base
        } else {
            base.pow(self.field(), q.pow(twist))
        };
        Ok(Some(out))
    }

    fn below_closed_reduced(&self, d: u32, u: u64) -> Result<Option<RationalFunction>> {
        let q = self.q() as u64;
        let cfg = self.field();
        if let Some(j) = power_plus_one(q, u) {
            return Ok(Some(self.sbelow_power_defect(d, j, 0)?));
        }
        // m*q^k - u as a sum of exactly m powers of q with exponents <= k;
        // smallest k, then smallest m, wins. Each step past the first k with
        // q^k > u adds q - 1 to the digit sum, so only two more can work.
        let mut k0 = 0u32;
        let mut p = 1u64;
        while p <= u {
            p *= q;
            k0 += 1;
        }
        let mut qk = 1u128;
        for k in 0..=k0 + 2 {
            for m in 1..=q {
                let x = match (m as u128 * qk)
                    .checked_sub(u as u128)
                    .and_then(|x| u64::try_from(x).ok())
                {
                    Some(x) => x,
                    None => continue,
                };
                let exps = match q_power_exponents(q, x, m, k) {
                    Some(e) => e,
                    None => continue,
                };
                let mut acc = RationalFunction::one();
                for ki in exps {
                    if ki == k {
                        continue; // q^k - q^k = 0 contributes an empty factor
                    }
                    let factor = self.sbelow_power_defect(d, k - ki, ki)?;
                    acc = RationalFunction::mul(cfg, &acc, &factor);
                }
                return Ok(Some(acc));
            }
            qk *= q as u128;
        }
        Ok(None)
    }

    /// S_{<d}(q^j - 1)^(q^e) = [ ell(d+j-1) / (ell(j) ell(d-1)^(q^j)) ]^(q^e).
    fn sbelow_power_defect(&self, d: u32, j: u32, e: u32) -> Result<RationalFunction> {
        let q = self.q() as u64;
        let cfg = self.field();
        debug_assert!(d >= 1);
        let num = self.ell(d + j - 1)?;
        let den = Polynomial::mul(cfg, &self.ell(j)?, &self.ell(d - 1)?.pow(cfg, q.pow(j)));
        let base = RationalFunction::new(cfg, num, den)?;
        Ok(if e == 0 { base } else { base.pow(cfg, q.pow(e)) })
    }

    /// Iterated power sum S_d(s_1, ..., s_r): a^{-s_1} ranges over degree d
    /// and the remaining factors over strictly decreasing degrees below it.
    pub fn iterated_power_sum(&self, d: u32, tuple: &[u32], prec: i64) -> Result<LaurentSeries> {
        if prec < 1 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        if tuple.is_empty() || tuple.contains(&0) {
            return Err(Error::InvalidParameter(
                "exponent tuple must be nonempty with positive entries".into(),
            ));
        }
        let r = tuple.len();
        if (d as usize) < r - 1 {
            // a chain d > d_2 > ... > d_r >= 0 needs depth many degrees
            return Ok(LaurentSeries::zero(prec));
        }
        if r == 1 {
            return self.power_sum(d, tuple[0], prec);
        }
        let cfg = self.field();
        let dd = d as usize;
        // Processing entries innermost-first, maintain
        //   cur[e] = sum over chains e > d_k > ... > d_r >= 0 of prod S_{d_i}(s_i)
        // for the entries consumed so far; the base (no entries) is 1.
        let mut cur = vec![LaurentSeries::one(prec); dd + 1];
        for &s in tuple.iter().skip(1).rev() {
            let mut next = Vec::with_capacity(dd + 1);
            let mut prefix = LaurentSeries::zero(prec);
            for e in 0..=dd {
                next.push(prefix.clone());
                if e < dd {
                    let term =
                        LaurentSeries::mul(cfg, &self.power_sum(e as u32, s, prec)?, &cur[e]);
                    prefix = LaurentSeries::add(cfg, &prefix, &term);
                }
            }
            cur = next;
        }
        let head = self.power_sum(d, tuple[0], prec)?;
        Ok(LaurentSeries::mul(cfg, &head, &cur[dd]).truncate(prec))
    }

    /// Carlitz logarithm log(z) = sum_{d>=0} z^(q^d) / ell(d), for
    /// valuation(z) >= -1 (the series diverges past that). `max_terms`
    /// caps the number of summands; the returned precision then reflects
    /// the first omitted term.
    pub fn carlitz_log(
        &self,
        z: &LaurentSeries,
        prec: i64,
        max_terms: Option<u32>,
    ) -> Result<LaurentSeries> {
        if prec < 1 {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        if z.precision() < prec {
            return Err(Error::InsufficientPrecision);
        }
        if z.is_zero() {
            return Ok(LaurentSeries::zero(prec));
        }
        let v = z.valuation().expect("nonzero");
        if v < -1 {
            return Err(Error::NonconvergentLog { valuation: v });
        }
        let q = self.q() as i128;
        let cfg = self.field();
        let mut acc = LaurentSeries::zero(prec);
        let mut zq = z.truncate(prec);
        let mut d = 0u32;
        loop {
            // valuation of z^(q^d)/ell(d) = q^d v + (q^(d+1) - q)/(q - 1),
            // strictly increasing in d whenever v >= -1
            let qd = q.pow(d);
            let term_val = qd * v as i128 + (qd * q - q) / (q - 1);
            if term_val >= prec as i128 {
                break;
            }
            if let Some(cap) = max_terms {
                if d >= cap {
                    // the tail starting here is unaccounted for
                    return Ok(acc.truncate((prec as i128).min(term_val) as i64));
                }
            }
            let term = zq.div_by_poly(cfg, &self.ell(d)?, prec)?;
            acc = LaurentSeries::add(cfg, &acc, &term);
            for _ in 0..cfg.s() {
                zq = zq.frobenius_pow(cfg);
            }
            zq = zq.truncate(prec.min(zq.precision()));
            d += 1;
        }
        Ok(acc.truncate(prec))
    }
}

/// j >= 1 with u = q^j - 1, if u has that shape.
fn power_plus_one(q: u64, u: u64) -> Option<u32> {
    let mut v = u + 1;
    let mut j = 0u32;
    while v % q == 0 {
        v /= q;
        j += 1;
    }
    (v == 1 && j >= 1).then_some(j)
}

fn digit_sum(q: u64, mut x: u64) -> u64 {
    let mut s = 0;
    while x > 0 {
        s += x % q;
        x /= q;
    }
    s
}

/// Write x as a sum of exactly m powers of q with exponents <= cap, if
/// possible: start from the base-q digits and repeatedly split the highest
/// power into q copies one level down. Exponents return in ascending order.
fn q_power_exponents(q: u64, x: u64, m: u64, cap: u32) -> Option<Vec<u32>> {
    if m == 0 || x < m {
        return None;
    }
    let mut counts: Vec<u64> = Vec::new(); // counts[e] = multiplicity of q^e
    let mut rest = x;
    while rest > 0 {
        counts.push(rest % q);
        rest /= q;
    }
    if counts.len() > cap as usize + 1 {
        return None;
    }
    let mut have: u64 = counts.iter().sum();
    if have > m || (m - have) % (q - 1) != 0 {
        return None;
    }
    while have < m {
        let e = counts.iter().rposition(|&c| c > 0).expect("x > 0");
        if e == 0 {
            return None; // cannot split q^0; unreachable given have < m <= x
        }
        counts[e] -= 1;
        counts[e - 1] += q;
        have += q - 1;
    }
    let mut exps = Vec::with_capacity(m as usize);
    for (e, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            exps.push(e as u32);
        }
    }
    Some(exps)
}
