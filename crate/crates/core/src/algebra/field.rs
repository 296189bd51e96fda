use crate::error::{Error, Result};

/// Element of F_q, encoded as an index in 0..q.
///
/// For prime q the index is the residue itself. For q = p^s the element
/// sum c_i x^i (x the class of the modulus variable) is packed as
/// sum c_i p^i, so the prime subfield occupies indices 0..p in both cases.
pub type FieldElement = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow,
}

/// Arithmetic tables for F_q, q = p^s <= 256.
#[derive(Debug, Clone)]
pub struct FieldConfig {
    p: u32,
    s: u32,
    q: u32,
    /// Irreducible modulus over F_p, ascending coefficients, length s+1; None for prime q.
    modulus: Option<Vec<u8>>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor q as p^s with p prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = q;
            let mut s = 0;
            while m % p == 0 {
                m /= p;
                s += 1;
            }
            return if m == 1 { Some((p, s)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

// Polynomial helpers over F_p used only for modulus validation and search
// (degrees <= 8, so naive arithmetic is fine).

fn fp_trim(v: &mut Vec<u8>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u8], b: &[u8], p: u32) -> Vec<u8> {
    let mut r: Vec<u8> = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fp_inv_scalar(b[db] as u32, p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] as u32 * lead_inv) % p;
        for i in 0..=db {
            let idx = dr - db + i;
            let sub = (c * b[i] as u32) % p;
            r[idx] = ((r[idx] as u32 + p - sub) % p) as u8;
        }
        fp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_inv_scalar(a: u32, p: u32) -> u32 {
    // p is small; scan.
    (1..p).find(|&x| (a * x) % p == 1).expect("nonzero scalar")
}

fn fp_is_irreducible(m: &[u8], p: u32) -> bool {
    let s = m.len() - 1;
    if s == 0 || m[s] == 0 {
        return false;
    }
    // Trial division by every monic polynomial of degree 1..=s/2.
    for d in 1..=s / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = vec![0u8; d + 1];
            let mut k = idx;
            for c in div.iter_mut().take(d) {
                *c = (k % p as u64) as u8;
                k /= p as u64;
            }
            div[d] = 1;
            if fp_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn builtin_modulus(p: u32, s: u32) -> Option<Vec<u8>> {
    match (p, s) {
        (2, 2) => Some(vec![1, 1, 1]),    // x^2 + x + 1
        (2, 3) => Some(vec![1, 1, 0, 1]), // x^3 + x + 1
        (3, 2) => Some(vec![1, 0, 1]),    // x^2 + 1
        (5, 2) => Some(vec![2, 1, 1]),    // x^2 + x + 2
        (3, 3) => Some(vec![1, 2, 0, 1]), // x^3 + 2x + 1
        _ => None,
    }
}

fn search_modulus(p: u32, s: u32) -> Vec<u8> {
    // Smallest irreducible in the base-p encoding with the constant term least
    // significant; deterministic.
    let count = (p as u64).pow(s);
    for idx in 0..count {
        let mut m = vec![0u8; (s + 1) as usize];
        let mut k = idx;
        for c in m.iter_mut().take(s as usize) {
            *c = (k % p as u64) as u8;
            k /= p as u64;
        }
        m[s as usize] = 1;
        if fp_is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

impl FieldConfig {
    /// Build F_q with the built-in modulus (or the smallest irreducible when
    /// no built-in is listed). Prime q needs no modulus.
    pub fn new(q: u32) -> Result<Self> {
        let (p, s) =
            prime_power(q).ok_or_else(|| Error::InvalidField("q must be a prime power".into()))?;
        if q > 256 {
            return Err(Error::InvalidField("q must be at most 256".into()));
        }
        if s == 1 {
            return Self::build(p, s, None);
        }
        let m = builtin_modulus(p, s).unwrap_or_else(|| search_modulus(p, s));
        Self::build(p, s, Some(m))
    }

    /// Build F_q with a caller-supplied irreducible modulus (ascending
    /// coefficients over F_p, monic, degree s).
    pub fn with_modulus(q: u32, modulus: &[u8]) -> Result<Self> {
        let (p, s) =
            prime_power(q).ok_or_else(|| Error::InvalidField("q must be a prime power".into()))?;
        if q > 256 {
            return Err(Error::InvalidField("q must be at most 256".into()));
        }
        if s == 1 {
            return Err(Error::InvalidField("prime q takes no modulus".into()));
        }
        if modulus.len() != (s + 1) as usize {
            return Err(Error::InvalidField(format!(
                "modulus must have degree {s}"
            )));
        }
        if modulus.iter().any(|&c| c as u32 >= p) {
            return Err(Error::InvalidField(
                "modulus coefficients must lie in F_p".into(),
            ));
        }
        if modulus[s as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !fp_is_irreducible(modulus, p) {
            return Err(Error::InvalidField("modulus is reducible over F_p".into()));
        }
        Self::build(p, s, Some(modulus.to_vec()))
    }

    fn build(p: u32, s: u32, modulus: Option<Vec<u8>>) -> Result<Self> {
        debug_assert!(is_prime(p));
        let q = p.pow(s);
        let qs = q as usize;
        let digits = |x: u32| -> Vec<u32> {
            let mut v = vec![0u32; s as usize];
            let mut k = x;
            for d in v.iter_mut() {
                *d = k % p;
                k /= p;
            }
            v
        };
        let pack = |v: &[u32]| -> u8 {
            let mut x = 0u32;
            for &d in v.iter().rev() {
                x = x * p + d;
            }
            x as u8
        };

        let mut add = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        for a in 0..q {
            let da = digits(a);
            let n: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = pack(&n);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = pack(&sum);
            }
        }

        let mut mul = vec![0u8; qs * qs];
        if s == 1 {
            for a in 0..q {
                for b in 0..q {
                    mul[(a * q + b) as usize] = ((a * b) % p) as u8;
                }
            }
        } else {
            let m = modulus.as_ref().expect("extension field has a modulus");
            for a in 0..q {
                let da = digits(a);
                for b in a..q {
                    let db = digits(b);
                    let mut buf = vec![0u32; 2 * s as usize - 1];
                    for (i, &x) in da.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (j, &y) in db.iter().enumerate() {
                            buf[i + j] = (buf[i + j] + x * y) % p;
                        }
                    }
                    // Reduce by the monic modulus: x^s = -sum m_j x^j.
                    for i in (s as usize..buf.len()).rev() {
                        let c = buf[i];
                        if c == 0 {
                            continue;
                        }
                        buf[i] = 0;
                        for j in 0..s as usize {
                            let sub = (c * m[j] as u32) % p;
                            buf[i - s as usize + j] = (buf[i - s as usize + j] + p - sub) % p;
                        }
                    }
                    let v = pack(&buf[..s as usize]);
                    mul[(a * q + b) as usize] = v;
                    mul[(b * q + a) as usize] = v;
                }
            }
        }

        let mut inv = vec![0u8; qs];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u8;
                    break;
                }
            }
            debug_assert_ne!(inv[a as usize], 0, "every nonzero element is invertible");
        }

        let mut cfg = FieldConfig {
            p,
            s,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            frob: Vec::new(),
        };
        let mut frob = vec![0u8; qs];
        for a in 0..q {
            frob[a as usize] = cfg.pow(a as u8, p as u64);
        }
        cfg.frob = frob;
        Ok(cfg)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> Option<&[u8]> {
        self.modulus.as_deref()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|x| x as FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    /// Inverse of a known-nonzero element; hot-path variant.
    #[inline]
    pub(crate) fn inv_nz(&self, a: FieldElement) -> FieldElement {
        debug_assert_ne!(a, 0);
        self.inv[a as usize]
    }

    /// x -> x^p.
    #[inline]
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.frob[a as usize]
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        // a^(q-1) = 1 for a != 0.
        let m = (self.q - 1) as u64;
        let mut e = e % m;
        if e == 0 {
            e = m;
        }
        let mut base = a;
        let mut acc: FieldElement = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// True when the element lies in the prime subfield F_p.
    pub fn in_prime_subfield(&self, a: FieldElement) -> bool {
        (a as u32) < self.p
    }

    pub fn field_arith(&self, a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Pow => Ok(self.pow(a, b as u64)),
        }
    }
}

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}
impl Eq for FieldConfig {}
