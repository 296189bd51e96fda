use serde::{Deserialize, Serialize};

use crate::algebra::field::{FieldConfig, FieldElement};
use crate::algebra::laurent::LaurentSeries;
use crate::algebra::poly::Polynomial;
use crate::error::{Error, Result};

/// Element of K = F_q(t), reduced with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(cfg: &FieldConfig, num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomialDivision);
        }
        let mut num = num;
        let mut den = den;
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Polynomial::one(),
            });
        }
        let g = Polynomial::gcd(cfg, &num, &den);
        if g.degree() != Some(0) {
            num = Polynomial::divmod(cfg, &num, &g)?.0;
            den = Polynomial::divmod(cfg, &den, &g)?.0;
        }
        let lead = den.leading_coeff().expect("nonzero");
        if lead != 1 {
            let li = cfg.inv_nz(lead);
            num = num.scale(cfg, li);
            den = den.scale(cfg, li);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction {
            num: Polynomial::one(),
            den: Polynomial::one(),
        }
    }

    pub fn from_polynomial(f: Polynomial) -> Self {
        RationalFunction {
            num: f,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn inverse_of(cfg: &FieldConfig, f: &Polynomial) -> Result<Self> {
        Self::new(cfg, Polynomial::one(), f.clone())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Valuation in K_inf: deg(den) - deg(num); None for zero.
    pub fn valuation(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        let dd = self.den.degree().expect("den nonzero") as i64;
        Some(dd - dn)
    }

    pub fn add(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        let num = Polynomial::add(
            cfg,
            &Polynomial::mul(cfg, &a.num, &b.den),
            &Polynomial::mul(cfg, &b.num, &a.den),
        );
        let den = Polynomial::mul(cfg, &a.den, &b.den);
        Self::new(cfg, num, den).expect("den nonzero")
    }

    pub fn neg(&self, cfg: &FieldConfig) -> Self {
        RationalFunction {
            num: Polynomial::neg(cfg, &self.num),
            den: self.den.clone(),
        }
    }

    pub fn sub(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        Self::add(cfg, a, &b.neg(cfg))
    }

    pub fn mul(cfg: &FieldConfig, a: &Self, b: &Self) -> Self {
        Self::new(
            cfg,
            Polynomial::mul(cfg, &a.num, &b.num),
            Polynomial::mul(cfg, &a.den, &b.den),
        )
        .expect("den nonzero")
    }

    pub fn div(cfg: &FieldConfig, a: &Self, b: &Self) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::ZeroPolynomialDivision);
        }
        Self::new(
            cfg,
            Polynomial::mul(cfg, &a.num, &b.den),
            Polynomial::mul(cfg, &a.den, &b.num),
        )
    }

    pub fn pow(&self, cfg: &FieldConfig, e: u64) -> Self {
        RationalFunction {
            num: self.num.pow(cfg, e),
            den: self.den.pow(cfg, e),
        }
        .renormalize(cfg)
    }

    fn renormalize(self, cfg: &FieldConfig) -> Self {
        // num/den already coprime; powering preserves that, but the monic
        // normalization must be re-applied in odd characteristic.
        Self::new(cfg, self.num, self.den).expect("den nonzero")
    }

    /// Expand in K_inf to absolute precision n.
    pub fn to_series(&self, cfg: &FieldConfig, n: i64) -> LaurentSeries {
        rational_to_series(cfg, self, n)
    }

    /// Rendering like "1/(t^2 + t)", "(t + 1)/(t^3 + 2*t)", or "t + 1".
    pub fn render(&self) -> String {
        if self.den.degree() == Some(0) {
            return self.num.render();
        }
        let num = self.num.render();
        let den = self.den.render();
        let num_simple = self.num.degree().map_or(true, |d| {
            d == 0 || self.num.coeffs().iter().filter(|&&c| c != 0).count() == 1
        });
        if num_simple {
            format!("{num}/({den})")
        } else {
            format!("({num})/({den})")
        }
    }

    /// True when every coefficient of numerator and denominator lies in F_p.
    pub fn has_prime_subfield_coeffs(&self, cfg: &FieldConfig) -> bool {
        self.num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .all(|&c| cfg.in_prime_subfield(c))
    }
}

/// Embed K into K_inf: expand num/den to absolute precision n.
pub fn rational_to_series(cfg: &FieldConfig, r: &RationalFunction, n: i64) -> LaurentSeries {
    if r.is_zero() {
        return LaurentSeries::zero(n);
    }
    let exact_num = LaurentSeries::from_polynomial(r.numerator(), n + 1);
    if r.den.degree() == Some(0) {
        return exact_num.truncate(n);
    }
    let v = r.valuation().expect("nonzero");
    if v >= n {
        return LaurentSeries::zero(n);
    }
    exact_num
        .div_by_poly(cfg, r.denominator(), n)
        .expect("den nonzero")
}
