use crate::algebra::field::{FieldConfig, FieldElement};
use crate::algebra::poly::Polynomial;
use crate::error::{Error, Result};

/// Truncated element of K_inf = F_q((1/t)).
///
/// Stores coefficients of t^{-k} for k = val, val+1, ... and guarantees every
/// coefficient at exponents < prec is exact; nothing is known at >= prec.
/// Canonical forms: leading stored coefficient nonzero (or no coefficients at
/// all), trailing zeros dropped (implicitly zero up to prec), and the
/// zero-to-precision series is val == prec with empty coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    val: i64,
    coeffs: Vec<FieldElement>,
    prec: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
}

impl LaurentSeries {
    pub(crate) fn from_raw(val: i64, coeffs: Vec<FieldElement>, prec: i64) -> Self {
        let mut s = LaurentSeries { val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        // Drop anything at or beyond the precision horizon.
        if self.val < self.prec {
            let cap = (self.prec - self.val) as usize;
            self.coeffs.truncate(cap);
        } else {
            self.coeffs.clear();
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.val += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
        debug_assert!(self.val <= self.prec);
    }

    /// The zero-to-precision series.
    pub fn zero(prec: i64) -> Self {
        LaurentSeries {
            val: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn one(prec: i64) -> Self {
        Self::from_raw(0, vec![1], prec)
    }

    /// Embed a polynomial, keeping only exponents below prec.
    pub fn from_polynomial(f: &Polynomial, prec: i64) -> Self {
        match f.degree() {
            None => Self::zero(prec),
            Some(d) => {
                // t^i contributes at exponent -i.
                let coeffs: Vec<FieldElement> =
                    (0..=d).rev().map(|i| f.coeff(i)).collect();
                Self::from_raw(-(d as i64), coeffs, prec)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation; None when zero-to-precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Valuation with the zero series reported at its precision horizon.
    pub fn valuation_or_prec(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Coefficient of t^{-k}; k must be below the precision horizon.
    pub fn coeff_at(&self, k: i64) -> FieldElement {
        debug_assert!(k < self.prec, "coefficient beyond precision");
        if k < self.val {
            return 0;
        }
        self.coeffs.get((k - self.val) as usize).copied().unwrap_or(0)
    }

    /// Exact coefficients from the valuation up to prec (implicit zeros kept).
    pub fn dense_coeffs(&self) -> Vec<FieldElement> {
        if self.is_zero() {
            return Vec::new();
        }
        let len = (self.prec - self.val) as usize;
        let mut v = vec![0u8; len];
        v[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        v
    }

    /// Restrict to a lower precision horizon.
    pub fn truncate(&self, prec: i64) -> Self {
        debug_assert!(prec <= self.prec, "cannot gain precision");
        Self::from_raw(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn add(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        let prec = a.prec.min(b.prec);
        let val = a.val.min(b.val).min(prec);
        if val >= prec {
            return Self::zero(prec);
        }
        let len = (prec - val) as usize;
        let mut coeffs = vec![0u8; len];
        for (s, seq) in [(a, &a.coeffs), (b, &b.coeffs)] {
            for (i, &c) in seq.iter().enumerate() {
                let k = s.val + i as i64;
                if k < prec {
                    let idx = (k - val) as usize;
                    coeffs[idx] = cfg.add(coeffs[idx], c);
                }
            }
        }
        Self::from_raw(val, coeffs, prec)
    }

    pub fn neg(&self, cfg: &FieldConfig) -> Self {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| cfg.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        Self::add(cfg, a, &b.neg(cfg))
    }

    /// Product, precision min(Na + v_b, Nb + v_a) per worst-case propagation.
    pub fn mul(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        let prec = (a.prec + b.val).min(b.prec + a.val);
        if a.is_zero() || b.is_zero() {
            return Self::zero(prec);
        }
        let val = a.val + b.val;
        if val >= prec {
            return Self::zero(prec);
        }
        let len = ((prec - val) as usize).min(a.coeffs.len() + b.coeffs.len() - 1);
        let mut coeffs = vec![0u8; len];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = cfg.add(coeffs[i + j], cfg.mul(x, y));
            }
        }
        Self::from_raw(val, coeffs, prec)
    }

    pub fn scale(&self, cfg: &FieldConfig, c: FieldElement) -> Self {
        if c == 0 {
            return Self::zero(self.prec);
        }
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&x| cfg.mul(x, c)).collect(),
            prec: self.prec,
        }
    }

    /// Multiplicative inverse; precision N - 2v.
    pub fn inv(&self, cfg: &FieldConfig) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InsufficientPrecision);
        }
        let v = self.val;
        let prec = self.prec - 2 * v;
        let val = -v;
        let len = (prec - val) as usize;
        debug_assert!(len >= 1);
        // Write self = c0 t^{-v} (1 + u). Solve (self) * y = 1 coefficient by
        // coefficient: y_k, k indexed from 0 at exponent -v.
        let c0inv = cfg.inv_nz(self.coeffs[0]);
        let mut y = vec![0u8; len];
        y[0] = c0inv;
        for k in 1..len {
            // sum_{j=0..k} a_j y_{k-j} = 0 for k >= 1.
            let mut acc = 0u8;
            let jmax = k.min(self.coeffs.len() - 1);
            for j in 1..=jmax {
                let a = self.coeffs[j];
                if a != 0 {
                    acc = cfg.add(acc, cfg.mul(a, y[k - j]));
                }
            }
            y[k] = cfg.neg(cfg.mul(acc, c0inv));
        }
        Ok(Self::from_raw(val, y, prec))
    }

    pub fn div(cfg: &FieldConfig, a: &Self, b: &Self) -> Result<Self> {
        Ok(Self::mul(cfg, a, &b.inv(cfg)?))
    }

    /// x^p; characteristic-p exactness gives precision p * N (error terms are
    /// themselves p-th powers).
    pub fn frobenius_pow(&self, cfg: &FieldConfig) -> Self {
        let p = cfg.p() as i64;
        let prec = self.prec.saturating_mul(p);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let len = (self.coeffs.len() - 1) * p as usize + 1;
        let mut coeffs = vec![0u8; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = cfg.frobenius(c);
        }
        Self::from_raw(self.val * p, coeffs, prec)
    }

    /// x^e via base-p digits of e (Frobenius steps are exact and cheap).
    pub fn pow(&self, cfg: &FieldConfig, e: u64) -> Self {
        if e == 0 {
            return Self::one(self.prec);
        }
        let p = cfg.p() as u64;
        let mut digits = Vec::new();
        let mut k = e;
        while k > 0 {
            digits.push((k % p) as u32);
            k /= p;
        }
        let mut acc: Option<LaurentSeries> = None;
        let mut frob_power = self.clone();
        for (i, &d) in digits.iter().enumerate() {
            for _ in 0..d {
                acc = Some(match acc {
                    None => frob_power.clone(),
                    Some(a) => Self::mul(cfg, &a, &frob_power),
                });
            }
            if i + 1 < digits.len() {
                frob_power = frob_power.frobenius_pow(cfg);
            }
        }
        acc.expect("e > 0")
    }

    /// Divide by a nonzero polynomial; the result is exact to
    /// min(N + deg a, cap). Used for iterated 1/a^s chains where inverting a
    /// raises precision instead of losing it.
    pub fn div_by_poly(&self, cfg: &FieldConfig, a: &Polynomial, cap: i64) -> Result<Self> {
        let da = a.degree().ok_or(Error::ZeroPolynomialDivision)? as i64;
        let prec = (self.prec + da).min(cap);
        if self.is_zero() {
            return Ok(Self::zero(prec));
        }
        let val = self.val + da;
        if val >= prec {
            return Ok(Self::zero(prec));
        }
        // x = a*y with a = sum b_i t^i: x_k = sum_i b_i y_{k+i}, so
        // y_{k+da} = (x_k - sum_{i<da} b_i y_{k+i}) / b_da, solved upward.
        let len = (prec - val) as usize;
        let lead_inv = cfg.inv_nz(a.leading_coeff().expect("nonzero"));
        let mut y = vec![0u8; len];
        for m in 0..len {
            // y index m corresponds to exponent val + m; driven by x at
            // exponent self.val + m.
            let mut acc = self.coeffs.get(m).copied().unwrap_or(0);
            for i in 0..da {
                // b_i * y at exponent (self.val + m) + ... matching x_k with
                // k = self.val + m: term b_i y_{k+i} has y exponent k + i,
                // i.e. y-index k + i - val = m + i - da.
                let yi = m as i64 + i - da;
                if yi >= 0 {
                    let b = a.coeff(i as usize);
                    if b != 0 {
                        acc = cfg.sub(acc, cfg.mul(b, y[yi as usize]));
                    }
                }
            }
            y[m] = cfg.mul(acc, lead_inv);
        }
        Ok(Self::from_raw(val, y, prec))
    }

    /// The part with exponents <= 0, as a polynomial in t.
    pub fn polynomial_part(&self) -> Result<Polynomial> {
        if self.prec <= 0 {
            return Err(Error::NoPolynomialPart);
        }
        if self.val > 0 {
            return Ok(Polynomial::zero());
        }
        let coeffs: Vec<FieldElement> = (self.val..=0)
            .rev()
            .map(|k| self.coeff_at(k))
            .collect();
        Ok(Polynomial::from_coeffs(coeffs))
    }

    /// Strip the polynomial part, leaving valuation >= 1.
    pub fn fractional_part(&self, cfg: &FieldConfig) -> Result<Self> {
        let p = self.polynomial_part()?;
        Ok(Self::sub(
            cfg,
            self,
            &Self::from_polynomial(&p, self.prec),
        ))
    }

    /// True when a and b agree on every coefficient below the common horizon.
    pub fn agrees_with(&self, cfg: &FieldConfig, other: &Self) -> bool {
        Self::sub(cfg, self, other).is_zero()
    }

    /// Valuation of (self - other), with zero-to-precision differences
    /// reported at the common precision horizon.
    pub fn difference_valuation(&self, cfg: &FieldConfig, other: &Self) -> i64 {
        Self::sub(cfg, self, other).valuation_or_prec()
    }

    pub fn series_arith(cfg: &FieldConfig, a: &Self, b: &Self, op: SeriesOp) -> Result<Self> {
        Ok(match op {
            SeriesOp::Add => Self::add(cfg, a, b),
            SeriesOp::Mul => Self::mul(cfg, a, b),
            SeriesOp::Inv => a.inv(cfg)?,
            SeriesOp::Pow(e) => a.pow(cfg, e),
        })
    }
}
