use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::field::{FieldConfig, FieldElement};
use crate::error::{Error, Result};

/// Element of A = F_q[t]; coefficients ascending in t, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Divmod,
    Gcd,
    Eval,
    Pow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyValue {
    Single(Polynomial),
    Pair(Polynomial, Polynomial),
    Scalar(FieldElement),
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![1] }
    }

    pub fn constant(c: FieldElement) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Polynomial { coeffs: vec![c] }
        }
    }

    /// c * t^d.
    pub fn monomial(c: FieldElement, d: usize) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Polynomial { coeffs }
    }

    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of t^i (zero beyond the stored range).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial ("degree negative infinity").
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(1)
    }

    pub fn add(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(cfg.add(a.coeff(i), b.coeff(i)));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn neg(cfg: &FieldConfig, a: &Self) -> Self {
        Polynomial {
            coeffs: a.coeffs.iter().map(|&c| cfg.neg(c)).collect(),
        }
    }

    pub fn sub(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        Self::add(cfg, a, &Self::neg(cfg, b))
    }

    pub fn scale(&self, cfg: &FieldConfig, c: FieldElement) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|&x| cfg.mul(x, c)).collect(),
        }
    }

    pub fn mul(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        if a.is_zero() || b.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u8; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                coeffs[i + j] = cfg.add(coeffs[i + j], cfg.mul(x, y));
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// (quotient, remainder) with deg(remainder) < deg(b).
    pub fn divmod(cfg: &FieldConfig, a: &Self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::ZeroPolynomialDivision);
        }
        let db = b.degree().expect("nonzero");
        let lead_inv = cfg.inv_nz(b.leading_coeff().expect("nonzero"));
        let mut rem = a.clone();
        let mut quot = Polynomial::zero();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let c = cfg.mul(rem.leading_coeff().expect("nonzero"), lead_inv);
            let shift = dr - db;
            // rem -= c * t^shift * b; quot += c * t^shift.
            let mut qc = quot.coeffs;
            if qc.len() <= shift {
                qc.resize(shift + 1, 0);
            }
            qc[shift] = cfg.add(qc[shift], c);
            quot = Polynomial { coeffs: qc };
            let mut rc = rem.coeffs;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                rc[shift + i] = cfg.sub(rc[shift + i], cfg.mul(c, bc));
            }
            rem = Self::from_coeffs(rc);
        }
        quot.trim();
        Ok((quot, rem))
    }

    /// Monic gcd; gcd(f, 0) is the monic normalization of f.
    pub fn gcd(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = Self::divmod(cfg, &x, &y).expect("y nonzero");
            x = y;
            y = r;
        }
        match x.leading_coeff() {
            None => x,
            Some(l) => x.scale(cfg, cfg.inv_nz(l)),
        }
    }

    pub fn eval(&self, cfg: &FieldConfig, x: FieldElement) -> FieldElement {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = cfg.add(cfg.mul(acc, x), c);
        }
        acc
    }

    /// f^p in O(deg) via the Frobenius: (sum c_i t^i)^p = sum c_i^p t^{ip}.
    pub fn frobenius_pow(&self, cfg: &FieldConfig) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let p = cfg.p() as usize;
        let mut coeffs = vec![0u8; (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = cfg.frobenius(c);
        }
        Polynomial { coeffs }
    }

    /// f^e using base-p digits of e, so huge q-power exponents stay cheap.
    pub fn pow(&self, cfg: &FieldConfig, e: u64) -> Self {
        if e == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return Self::zero();
        }
        let p = cfg.p() as u64;
        let mut digits = Vec::new();
        let mut k = e;
        while k > 0 {
            digits.push((k % p) as u32);
            k /= p;
        }
        let mut acc = Self::one();
        let mut frob_power = self.clone(); // self^(p^i)
        for (i, &d) in digits.iter().enumerate() {
            if d > 0 {
                for _ in 0..d {
                    acc = Self::mul(cfg, &acc, &frob_power);
                }
            }
            if i + 1 < digits.len() {
                frob_power = frob_power.frobenius_pow(cfg);
            }
        }
        acc
    }

    pub fn poly_arith(cfg: &FieldConfig, a: &Self, b: &Self, op: PolyOp) -> Result<PolyValue> {
        Ok(match op {
            PolyOp::Add => PolyValue::Single(Self::add(cfg, a, b)),
            PolyOp::Mul => PolyValue::Single(Self::mul(cfg, a, b)),
            PolyOp::Divmod => {
                let (q, r) = Self::divmod(cfg, a, b)?;
                PolyValue::Pair(q, r)
            }
            PolyOp::Gcd => PolyValue::Single(Self::gcd(cfg, a, b)),
            PolyOp::Eval => PolyValue::Scalar(a.eval(cfg, b.coeff(0))),
            PolyOp::Pow => PolyValue::Single(a.pow(cfg, b.coeff(0) as u64)),
        })
    }

    /// Descending-power rendering with integer coefficient representatives,
    /// e.g. "t^3 + 2*t" or "1".
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match (c, i) {
                (_, 0) => {
                    let _ = write!(out, "{c}");
                }
                (1, 1) => out.push('t'),
                (1, _) => {
                    let _ = write!(out, "t^{i}");
                }
                (_, 1) => {
                    let _ = write!(out, "{c}*t");
                }
                (_, _) => {
                    let _ = write!(out, "{c}*t^{i}");
                }
            }
        }
        out
    }
}

/// Iterator over all q^d monic polynomials of degree d, ordered by the base-q
/// integer whose digits are the non-leading coefficients (constant term least
/// significant). Deterministic; used by every streamed enumeration.
pub fn monics_of_degree(cfg: &FieldConfig, d: u32) -> impl Iterator<Item = Polynomial> + '_ {
    let q = cfg.q() as u64;
    let count = q.checked_pow(d).expect("enumeration within u64");
    (0..count).map(move |idx| {
        let mut coeffs = vec![0u8; d as usize + 1];
        let mut k = idx;
        for c in coeffs.iter_mut().take(d as usize) {
            *c = (k % q) as u8;
            k /= q;
        }
        coeffs[d as usize] = 1;
        Polynomial { coeffs }
    })
}
