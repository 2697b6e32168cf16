//! Exact arithmetic in a real quadratic field `K = Q(sqrt d)`.
//!
//! Elements are written `x + y*w` in the maximal-order basis `{1, w}` where
//! `w = sqrt(d)` if `d = 2, 3 mod 4` and `w = (1 + sqrt d)/2` if `d = 1 mod 4`,
//! so that `O_K = Z[w]`. The coordinate scalar is generic: integral lattice
//! points use `i64`, general elements use exact rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar usable as a coordinate of a field element.
pub trait Coord: Clone + PartialOrd + Num + Signed + FromPrimitive + fmt::Debug {}

impl<T> Coord for T where T: Clone + PartialOrd + Num + Signed + FromPrimitive + fmt::Debug {}

/// `x + y*w` with coordinates in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement<T> {
    pub x: T,
    pub y: T,
}

impl<T> FieldElement<T> {
    pub const fn new(x: T, y: T) -> Self {
        FieldElement { x, y }
    }
}

impl<T: Coord> FieldElement<T> {
    pub fn zero() -> Self {
        FieldElement::new(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        FieldElement::new(T::one(), T::zero())
    }

    pub fn from_scalar(x: T) -> Self {
        FieldElement::new(x, T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, s: &T) -> Self {
        FieldElement::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }
}

impl<T: Coord> std::ops::Add for FieldElement<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        FieldElement::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Coord> std::ops::Sub for FieldElement<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        FieldElement::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Coord> std::ops::Neg for FieldElement<T> {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement::new(-self.x, -self.y)
    }
}

/// General element with exact rational coordinates.
pub type Element = FieldElement<BigRational>;
/// Integral element (lattice point of `O_K`).
pub type IntElement = FieldElement<i64>;

impl IntElement {
    pub fn to_element(&self) -> Element {
        FieldElement::new(
            BigRational::from_integer(BigInt::from(self.x)),
            BigRational::from_integer(BigInt::from(self.y)),
        )
    }
}

impl Element {
    /// The basis element `omega` of the maximal order.
    pub fn omega() -> Self {
        Element::from_ints(0, 1)
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        IntElement::new(x, y).to_element()
    }

    /// `Some` when both coordinates are integers that fit in `i64`.
    pub fn to_int_element(&self) -> Option<IntElement> {
        if !self.x.is_integer() || !self.y.is_integer() {
            return None;
        }
        Some(IntElement::new(
            self.x.to_integer().to_i64()?,
            self.y.to_integer().to_i64()?,
        ))
    }
}

impl fmt::Display for FieldElement<i64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_element(f, &self.x.to_string(), &self.y.to_string(), self.x == 0, self.y)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.y.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        fmt_element(f, &self.x.to_string(), &self.y.abs().to_string(), self.x.is_zero(), sign)
    }
}

// Writes `x+y*w` using the short forms `w`, `-w`, `2-w`.
fn fmt_element(f: &mut fmt::Formatter<'_>, x: &str, y_abs_or_y: &str, x_zero: bool, y: impl Into<i64>) -> fmt::Result {
    let y: i64 = y.into();
    let y_abs = y_abs_or_y.trim_start_matches('-');
    let ypart = if y_abs == "1" { "w".to_string() } else { format!("{y_abs}*w") };
    match (x_zero, y.signum()) {
        (_, 0) => write!(f, "{x}"),
        (true, 1) => write!(f, "{ypart}"),
        (true, _) => write!(f, "-{ypart}"),
        (false, 1) => write!(f, "{x}+{ypart}"),
        (false, _) => write!(f, "{x}-{ypart}"),
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    x: String,
    y: String,
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr { x: self.x.to_string(), y: self.y.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        let x = parse_rational(&r.x).map_err(serde::de::Error::custom)?;
        let y = parse_rational(&r.y).map_err(serde::de::Error::custom)?;
        Ok(FieldElement::new(x, y))
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str_radix(p.trim(), 10).map_err(|_| bad())?;
            let q = BigInt::from_str_radix(q.trim(), 10).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str_radix(s, 10).map_err(|_| bad())?)),
    }
}

/// Which real embedding: `First` sends `sqrt d` to the positive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    First,
    Second,
}

impl Embedding {
    pub const BOTH: [Embedding; 2] = [Embedding::First, Embedding::Second];

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            1 => Some(Embedding::First),
            2 => Some(Embedding::Second),
            _ => None,
        }
    }
}

/// `K = Q(sqrt d)` for squarefree `d > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    d: i64,
    /// `w^2 = t*w + n`.
    t: i64,
    n: i64,
    disc: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 1 || !is_squarefree(d) {
            return Err(Error::InvalidField(d));
        }
        let (t, n, disc) = if d.rem_euclid(4) == 1 { (1, (d - 1) / 4, d) } else { (0, d, 4 * d) };
        Ok(QuadraticField { d, t, n, disc })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// Trace of `w` (0 or 1).
    pub fn omega_trace(&self) -> i64 {
        self.t
    }

    /// `-N(w)`, i.e. the constant in `w^2 = t*w + n`.
    pub fn omega_norm_coeff(&self) -> i64 {
        self.n
    }

    pub fn omega_is_sqrt_d(&self) -> bool {
        self.t == 0
    }

    pub fn mul<T: Coord>(&self, a: &FieldElement<T>, b: &FieldElement<T>) -> FieldElement<T> {
        let t = T::from_i64(self.t).unwrap();
        let n = T::from_i64(self.n).unwrap();
        let yy = a.y.clone() * b.y.clone();
        FieldElement::new(
            a.x.clone() * b.x.clone() + n * yy.clone(),
            a.x.clone() * b.y.clone() + b.x.clone() * a.y.clone() + t * yy,
        )
    }

    pub fn pow<T: Coord>(&self, a: &FieldElement<T>, mut e: u64) -> FieldElement<T> {
        let mut base = a.clone();
        let mut acc = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Galois conjugate `x + y*w'`.
    pub fn conj<T: Coord>(&self, a: &FieldElement<T>) -> FieldElement<T> {
        let t = T::from_i64(self.t).unwrap();
        FieldElement::new(a.x.clone() + t * a.y.clone(), -a.y.clone())
    }

    pub fn norm<T: Coord>(&self, a: &FieldElement<T>) -> T {
        let t = T::from_i64(self.t).unwrap();
        let n = T::from_i64(self.n).unwrap();
        a.x.clone() * a.x.clone() + t * a.x.clone() * a.y.clone() - n * a.y.clone() * a.y.clone()
    }

    pub fn trace<T: Coord>(&self, a: &FieldElement<T>) -> T {
        let t = T::from_i64(self.t).unwrap();
        a.x.clone() + a.x.clone() + t * a.y.clone()
    }

    pub fn inverse(&self, a: &Element) -> Option<Element> {
        let nrm = self.norm(a);
        if nrm.is_zero() {
            return None;
        }
        let c = self.conj(a);
        Some(FieldElement::new(c.x / nrm.clone(), c.y / nrm))
    }

    /// Exact sign of the image of `a` under embedding `i`.
    ///
    /// With `2^s (x + y w) = p + q sqrt(d)` (`s = 1` iff `w = (1+sqrt d)/2`) the
    /// sign is decided by comparing `p^2` against `q^2 d` with a case split on
    /// the signs of `p` and `q`.
    pub fn embedding_sign<T: Coord>(&self, a: &FieldElement<T>, i: Embedding) -> i8 {
        let (p, q) = if self.t == 0 {
            (a.x.clone(), a.y.clone())
        } else {
            (a.x.clone() + a.x.clone() + a.y.clone(), a.y.clone())
        };
        let q = match i {
            Embedding::First => q,
            Embedding::Second => -q,
        };
        sign_p_plus_q_sqrt(p, q, T::from_i64(self.d).unwrap())
    }

    pub fn is_totally_positive<T: Coord>(&self, a: &FieldElement<T>) -> bool {
        Embedding::BOTH.iter().all(|&i| self.embedding_sign(a, i) > 0)
    }

    /// Floating-point image of `w` under an embedding; only used to size
    /// enumeration ranges, never to decide membership.
    pub fn omega_float(&self, i: Embedding) -> f64 {
        let s = (self.d as f64).sqrt();
        let s = match i {
            Embedding::First => s,
            Embedding::Second => -s,
        };
        if self.t == 0 {
            s
        } else {
            (1.0 + s) / 2.0
        }
    }

    pub fn embed_float(&self, a: &IntElement, i: Embedding) -> f64 {
        a.x as f64 + a.y as f64 * self.omega_float(i)
    }

    pub fn embed_float_rational(&self, a: &Element, i: Embedding) -> f64 {
        a.x.to_f64().unwrap_or(f64::NAN) + a.y.to_f64().unwrap_or(f64::NAN) * self.omega_float(i)
    }

    /// Fundamental unit from the continued fraction of `w`.
    pub fn fundamental_unit(&self) -> UnitData {
        let d = BigInt::from(self.d);
        let sqrt_floor = d.sqrt();
        let (mut p, mut q) = if self.t == 0 { (BigInt::zero(), BigInt::one()) } else { (BigInt::one(), BigInt::from(2)) };
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        let t = BigInt::from(self.t);
        let n = BigInt::from(self.n);
        loop {
            let a = if q.is_positive() {
                (&p + &sqrt_floor).div_floor(&q)
            } else {
                (-&p - &sqrt_floor - BigInt::one()).div_floor(&(-&q))
            };
            let h_next = &a * &h + &h_prev;
            let k_next = &a * &k + &k_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
            let nrm = &h * &h - &t * &h * &k - &n * &k * &k;
            if k.is_positive() && nrm.abs().is_one() {
                let x = BigRational::from_integer(&h - &k * &t);
                let y = BigRational::from_integer(k.clone());
                let eps = FieldElement::new(x, y);
                let norm_sign = if nrm.is_positive() { 1 } else { -1 };
                let tp = if norm_sign == 1 { eps.clone() } else { self.mul(&eps, &eps) };
                debug_assert!(self.is_totally_positive(&tp));
                return UnitData { fundamental_unit: eps, norm_of_unit: norm_sign, totally_positive_fundamental_unit: tp };
            }
            let p_next = &a * &q - &p;
            let q_next = (&d - &p_next * &p_next) / &q;
            p = p_next;
            q = q_next;
        }
    }
}

fn sign_p_plus_q_sqrt<T: Coord>(p: T, q: T, d: T) -> i8 {
    let zero = T::zero();
    let ps = if p > zero { 1 } else if p < zero { -1 } else { 0 };
    let qs = if q > zero { 1 } else if q < zero { -1 } else { 0 };
    if ps >= 0 && qs >= 0 {
        return if ps == 0 && qs == 0 { 0 } else { 1 };
    }
    if ps <= 0 && qs <= 0 {
        return -1;
    }
    // opposite signs: compare p^2 with q^2 d (never equal, d squarefree > 1)
    let lhs = p.clone() * p;
    let rhs = q.clone() * q * d;
    let p_dominates = lhs > rhs;
    match (ps, p_dominates) {
        (1, true) | (-1, false) => 1,
        _ => -1,
    }
}

/// Units of `O_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    /// Generator of `O_K^x / {+-1}` that exceeds 1 in the first embedding.
    pub fundamental_unit: Element,
    pub norm_of_unit: i8,
    /// Generator of the totally positive units.
    pub totally_positive_fundamental_unit: Element,
}

impl UnitData {
    pub fn tp_unit_int(&self) -> IntElement {
        self.totally_positive_fundamental_unit.to_int_element().expect("unit coordinates exceed i64")
    }

    pub fn fundamental_int(&self) -> IntElement {
        self.fundamental_unit.to_int_element().expect("unit coordinates exceed i64")
    }
}

pub fn is_squarefree(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn signs_d6() {
        let k = QuadraticField::new(6).unwrap();
        let a = IntElement::new(1, 1);
        assert_eq!(k.embedding_sign(&a, Embedding::First), 1);
        assert_eq!(k.embedding_sign(&a, Embedding::Second), -1);
        let z = IntElement::new(0, 0);
        assert_eq!(k.embedding_sign(&z, Embedding::First), 0);
        assert_eq!(k.embedding_sign(&z, Embedding::Second), 0);
    }

    #[test]
    fn signs_d5_oracle() {
        // 3 - w with w = (1+sqrt5)/2: 3 > (1 +- sqrt5)/2 <=> 5 < (6-1)^2 and trivially for minus.
        let k = QuadraticField::new(5).unwrap();
        let a = IntElement::new(3, -1);
        // the oracle: 3 - w > 0 in both embeddings since 25 > 5
        assert_eq!(k.embedding_sign(&a, Embedding::First), 1);
        assert_eq!(k.embedding_sign(&a, Embedding::Second), 1);
    }

    #[test]
    fn total_positivity_d6() {
        let k = QuadraticField::new(6).unwrap();
        assert!(k.is_totally_positive(&IntElement::new(5, 1)));
        assert!(!k.is_totally_positive(&IntElement::new(1, 1)));
        // 25 + 7 sqrt 6 > 0 in both embeddings since 625 > 49 * 6
        assert!(k.is_totally_positive(&IntElement::new(25, 7)));
        assert!(k.is_totally_positive(&Element::from_ints(25, 7)));
    }

    #[test]
    fn units() {
        let k6 = QuadraticField::new(6).unwrap().fundamental_unit();
        assert_eq!(k6.fundamental_unit, Element::from_ints(5, 2));
        assert_eq!(k6.norm_of_unit, 1);
        assert_eq!(k6.totally_positive_fundamental_unit, Element::from_ints(5, 2));

        let k2 = QuadraticField::new(2).unwrap().fundamental_unit();
        assert_eq!(k2.fundamental_unit, Element::from_ints(1, 1));
        assert_eq!(k2.norm_of_unit, -1);
        assert_eq!(k2.totally_positive_fundamental_unit, Element::from_ints(3, 2));

        let f5 = QuadraticField::new(5).unwrap();
        let k5 = f5.fundamental_unit();
        assert_eq!(k5.fundamental_unit, Element::from_ints(0, 1));
        assert_eq!(k5.norm_of_unit, -1);
        // w^2 = w + 1
        assert_eq!(k5.totally_positive_fundamental_unit, Element::from_ints(1, 1));
    }

    #[test]
    fn units_pell_oracle() {
        for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 29, 31, 94] {
            let k = QuadraticField::new(d).unwrap();
            let u = k.fundamental_unit();
            let n = k.norm(&u.fundamental_unit);
            assert_eq!(n, q(u.norm_of_unit as i64));
            assert!(u.fundamental_unit.x.is_integer() && u.fundamental_unit.y.is_integer());
            assert_eq!(k.embedding_sign(&(u.fundamental_unit.clone() - Element::one()), Embedding::First), 1);
            // brute force: no smaller unit with y in [1, y_eps)
            let ye = u.fundamental_unit.y.to_integer().to_i64().unwrap();
            for y in 1..ye.min(2000) {
                for x in -(4 * y * d)..=(4 * y * d) {
                    let e = IntElement::new(x, y);
                    let nn = k.norm(&e);
                    assert!(nn.abs() != 1 || k.embed_float(&e, Embedding::First).abs() < 1.0 + 1e-9
                        || k.embed_float(&e, Embedding::First).abs() > k.embed_float_rational(&u.fundamental_unit, Embedding::First) - 1e-6,
                        "d={d}: smaller unit {e:?}");
                }
            }
        }
    }

    #[test]
    fn arithmetic() {
        let k = QuadraticField::new(5).unwrap();
        let a = Element::from_ints(3, -1);
        let b = Element::from_ints(2, 5);
        let ab = k.mul(&a, &b);
        assert_eq!(k.norm(&ab), k.norm(&a) * k.norm(&b));
        let inv = k.inverse(&a).unwrap();
        assert_eq!(k.mul(&a, &inv), Element::one());
        assert_eq!(k.trace(&(a.clone() + b.clone())), k.trace(&a) + k.trace(&b));
    }

    #[test]
    fn display_and_serde() {
        assert_eq!(IntElement::new(2, -1).to_string(), "2-w");
        assert_eq!(IntElement::new(1, 2).to_string(), "1+2*w");
        assert_eq!(IntElement::new(0, -1).to_string(), "-w");
        let e = Element::new(BigRational::new(1.into(), 2.into()), q(-3));
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"x":"1/2","y":"-3"}"#);
        let back: Element = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn rejects_bad_d() {
        assert!(QuadraticField::new(12).is_err());
        assert!(QuadraticField::new(1).is_err());
        assert!(QuadraticField::new(-5).is_err());
    }
}
