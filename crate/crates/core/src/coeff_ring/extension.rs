use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::RngCore;

use super::{poly, Ring};
use crate::error::{Error, Result};
use crate::quad_field::{Element, QuadraticField};

/// `base[var] / (modulus)` for a monic modulus over a field. The modulus is
/// assumed irreducible; when it is not, elimination surfaces a zero divisor
/// and callers split the modulus (dynamic evaluation).
#[derive(Clone, Debug, PartialEq)]
pub struct PolyQuotient<R: Ring> {
    base: R,
    modulus: Vec<R::Elem>,
    var: String,
    label: Option<String>,
}

impl<R: Ring> PolyQuotient<R> {
    pub fn new(base: R, modulus: Vec<R::Elem>, var: &str) -> Result<Self> {
        let modulus = poly::trim(&base, modulus);
        if poly::degree(&base, &modulus) == 0 {
            return Err(Error::Parse("extension modulus must have positive degree".into()));
        }
        let modulus = poly::monic(&base, &modulus);
        Ok(PolyQuotient { base, modulus, var: var.to_string(), label: None })
    }

    /// Overrides the printed descriptor (used for canonical `fq:p,e`).
    pub fn with_label(mut self, label: String) -> Self {
        self.label = Some(label);
        self
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn modulus(&self) -> &[R::Elem] {
        &self.modulus
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// The class of `var`.
    pub fn generator(&self) -> Vec<R::Elem> {
        self.reduce(vec![self.base.zero(), self.base.one()])
    }

    pub fn reduce(&self, f: Vec<R::Elem>) -> Vec<R::Elem> {
        poly::rem(&self.base, &f, &self.modulus)
    }

    pub fn from_base(&self, c: &R::Elem) -> Vec<R::Elem> {
        poly::trim(&self.base, vec![c.clone()])
    }

    /// Splits the modulus along a zero divisor: returns the nontrivial
    /// factor `gcd(z, modulus)` and its cofactor.
    pub fn split_along(&self, z: &[R::Elem]) -> Option<(Vec<R::Elem>, Vec<R::Elem>)> {
        let g = poly::gcd(&self.base, z, &self.modulus);
        let dg = poly::degree(&self.base, &g);
        if dg == 0 || dg == self.degree() {
            return None;
        }
        let h = poly::divrem(&self.base, &self.modulus, &g).0;
        Some((g, poly::monic(&self.base, &h)))
    }
}

impl<R: Ring> Ring for PolyQuotient<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        self.from_base(&self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        poly::add(&self.base, a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        poly::sub(&self.base, a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|c| self.base.neg(c)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(poly::mul(&self.base, a, b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        self.from_base(&self.base.from_int(n))
    }
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem> {
        Ok(self.from_base(&self.base.from_rational(q)?))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.is_empty() {
            return None;
        }
        let (g, s, _) = poly::ext_gcd(&self.base, a, &self.modulus);
        (g.len() == 1).then(|| self.reduce(s))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn is_field(&self) -> bool {
        self.base.is_field()
    }
    fn field_order(&self) -> Option<BigUint> {
        self.base.field_order().map(|q| q.pow(self.degree() as u32))
    }
    fn descriptor(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let m = poly::format_poly(&self.base, &self.modulus, &self.var);
        match self.base.descriptor().as_str() {
            "q" => format!("nf:{m}"),
            b => format!("ext:{b}/{m}"),
        }
    }
    fn format(&self, a: &Self::Elem) -> String {
        poly::format_poly(&self.base, a, &self.var)
    }
    fn parse(&self, s: &str) -> Result<Self::Elem> {
        Ok(self.reduce(poly::parse_poly(&self.base, s, &self.var)?))
    }
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem {
        let v = (0..self.degree()).map(|_| self.base.random_element(rng)).collect();
        poly::trim(&self.base, v)
    }

    /// `omega` is found as a root of its minimal polynomial when the
    /// modulus is that polynomial or `x^2 - d`; otherwise through the base.
    fn embed_quadratic(&self, field: &QuadraticField, a: &Element) -> Option<Self::Elem> {
        let lift = |e: &BigRational| self.base.from_rational(e).ok();
        let omega = if let Some(w) = self.base.embed_quadratic(field, &Element::omega()) {
            self.from_base(&w)
        } else if self.degree() == 2 {
            let m0 = self.base.neg(&self.modulus[0]);
            let m1 = self.base.neg(&self.modulus[1]);
            let t = self.base.from_i64(field.omega_trace());
            let n = self.base.from_i64(field.omega_norm_coeff());
            let x = self.generator();
            if m1 == t && m0 == n {
                x
            } else if self.base.is_zero(&m1) && m0 == self.base.from_i64(field.d()) {
                // x = sqrt(d)
                if field.omega_trace() == 0 {
                    x
                } else {
                    let half = self.base.inv(&self.base.from_i64(2))?;
                    self.mul(&self.add(&self.one(), &x), &self.from_base(&half))
                }
            } else {
                return None;
            }
        } else {
            return None;
        };
        let x = self.from_base(&lift(&a.x)?);
        let y = self.from_base(&lift(&a.y)?);
        Some(self.add(&x, &self.mul(&y, &omega)))
    }

    fn factor_poly(&self, f: &[Self::Elem]) -> Vec<Vec<Self::Elem>> {
        poly::default_factor(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_ring::{PrimeField, Rationals};

    #[test]
    fn f9_arithmetic() {
        let f3 = PrimeField::new(3).unwrap();
        let f9 = PolyQuotient::new(f3, vec![1, 0, 1], "x").unwrap();
        let z = f9.generator();
        assert_eq!(f9.pow_u64(&z, 4), f9.one());
        assert_ne!(f9.pow_u64(&z, 2), f9.one());
        assert_eq!(f9.multiplicative_order(&z, 8), Some(4));
        let inv = f9.inv(&z).unwrap();
        assert_eq!(f9.mul(&inv, &z), f9.one());
        assert_eq!(f9.field_order(), Some(BigUint::from(9u32)));
        let s = f9.format(&f9.neg(&z));
        assert_eq!(s, "2*x");
        assert_eq!(f9.parse(&s).unwrap(), f9.neg(&z));
        assert_eq!(f9.parse("x^2").unwrap(), f9.from_i64(-1));
    }

    #[test]
    fn number_field_embeds_omega() {
        let k = QuadraticField::new(6).unwrap();
        let nf = PolyQuotient::new(Rationals, vec![BigRational::from_integer((-6).into()), BigRational::from_integer(0.into()), BigRational::from_integer(1.into())], "x").unwrap();
        assert_eq!(nf.descriptor(), "nf:x^2-6");
        let a = Element::from_ints(5, 2);
        let img = nf.embed_quadratic(&k, &a).unwrap();
        let b = Element::from_ints(5, -2);
        let img_b = nf.embed_quadratic(&k, &b).unwrap();
        assert_eq!(nf.mul(&img, &img_b), nf.one());
    }

    #[test]
    fn reducible_modulus_splits() {
        let r = Rationals;
        let q = |n: i64| BigRational::from_integer(n.into());
        // (x-1)(x+1)
        let ring = PolyQuotient::new(r, vec![q(-1), q(0), q(1)], "y").unwrap();
        let z = ring.sub(&ring.generator(), &ring.one());
        assert!(ring.inv(&z).is_none());
        let (g, h) = ring.split_along(&z).unwrap();
        assert_eq!(g, vec![q(-1), q(1)]);
        assert_eq!(h, vec![q(1), q(1)]);
    }
}
