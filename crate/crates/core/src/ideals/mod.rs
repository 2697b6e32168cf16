//! Fractional ideals of `O_K` as scaled rank-2 lattices in Hermite normal form.

mod class_group;
mod enumerate;
mod lattice;

pub use class_group::{narrow_class_number, totally_positive_generator, NarrowClassData};
pub use enumerate::{div_factorizations, ideals_up_to, mul_factorizations, Factorization, IdealTable, TablePrime};
pub use lattice::points_in_box;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::{parse_rational, Element, IntElement, QuadraticField};

/// The lattice `c * (Z a + Z (b + w))`.
///
/// `a > 0`, `0 <= b < a`, `a | N(b + w)` and `c > 0` rational. Every
/// fractional ideal has exactly one such representation, so derived equality
/// is ideal equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealHNF {
    a: i64,
    b: i64,
    c: BigRational,
}

impl IdealHNF {
    pub fn unit() -> Self {
        IdealHNF { a: 1, b: 0, c: BigRational::one() }
    }

    pub fn from_parts(field: &QuadraticField, a: i64, b: i64, c: BigRational) -> Result<Self> {
        if a <= 0 || b < 0 || b >= a || !c.is_positive() {
            return Err(Error::Parse(format!("not a reduced ideal: a={a} b={b} c={c}")));
        }
        let nb = field.norm(&IntElement::new(b, 1));
        if nb.rem_euclid(a) != 0 {
            return Err(Error::Parse(format!("a={a} does not divide N({b}+w)={nb}")));
        }
        Ok(IdealHNF { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn is_integral(&self) -> bool {
        self.c.is_integer()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.a == 1 && self.c.is_one()
    }

    pub fn norm(&self) -> BigRational {
        &self.c * &self.c * BigRational::from_integer(BigInt::from(self.a))
    }

    /// Norm of an integral ideal.
    pub fn norm_u64(&self) -> Option<u64> {
        let n = self.norm();
        if n.is_integer() {
            n.to_integer().to_u64()
        } else {
            None
        }
    }

    pub fn label(&self) -> String {
        format!("{}.{}.{}", self.a, self.b, self.c)
    }

    pub fn parse_label(field: &QuadraticField, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().splitn(3, '.').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad ideal label {s:?}")));
        }
        let a = parts[0].parse().map_err(|_| Error::Parse(format!("bad ideal label {s:?}")))?;
        let b = parts[1].parse().map_err(|_| Error::Parse(format!("bad ideal label {s:?}")))?;
        let c = parse_rational(parts[2])?;
        Self::from_parts(field, a, b, c)
    }

    /// Z-basis `{a c, (b + w) c}`.
    pub fn basis(&self) -> [Element; 2] {
        let c = self.c.clone();
        [
            Element::from_ints(self.a, 0).scale(&c),
            Element::from_ints(self.b, 1).scale(&c),
        ]
    }

    /// Integral ideal spanned (over `Z`) by the given vectors, times `scale`.
    /// Returns `None` if the vectors span a lattice of rank < 2.
    fn from_lattice(vecs: &[(i128, i128)], scale: BigRational) -> Option<Self> {
        let mut piv: (i128, i128) = (0, 0);
        let mut a_acc: i128 = 0;
        for &(x, y) in vecs {
            if y == 0 {
                a_acc = a_acc.gcd(&x);
                continue;
            }
            if piv.1 == 0 {
                piv = (x, y);
                continue;
            }
            let e = piv.1.extended_gcd(&y);
            let g = e.gcd;
            let new = (e.x * piv.0 + e.y * x, g);
            let rem = (y / g) * piv.0 - (piv.1 / g) * x;
            a_acc = a_acc.gcd(&rem);
            piv = new;
            if a_acc != 0 {
                piv.0 = piv.0.rem_euclid(a_acc);
            }
        }
        if piv.1 == 0 || a_acc == 0 {
            return None;
        }
        if piv.1 < 0 {
            piv = (-piv.0, -piv.1);
        }
        let g = piv.1;
        let big_a = a_acc.abs();
        debug_assert!(big_a % g == 0 && piv.0 % g == 0, "not an ideal lattice");
        let a = big_a / g;
        let b = (piv.0 / g).rem_euclid(a);
        let c = scale * BigRational::from_integer(BigInt::from(g));
        Some(IdealHNF { a: a as i64, b: b as i64, c })
    }

    /// `(alpha)`; `None` for zero.
    pub fn principal(field: &QuadraticField, alpha: &Element) -> Option<Self> {
        if alpha.is_zero() {
            return None;
        }
        let den = alpha.x.denom().lcm(alpha.y.denom());
        let dq = BigRational::from_integer(den.clone());
        let x = (&alpha.x * &dq).to_integer().to_i128()?;
        let y = (&alpha.y * &dq).to_integer().to_i128()?;
        let t = field.omega_trace() as i128;
        let n = field.omega_norm_coeff() as i128;
        Self::from_lattice(&[(x, y), (y * n, x + y * t)], BigRational::one() / dq)
    }

    pub fn principal_int(field: &QuadraticField, alpha: &IntElement) -> Option<Self> {
        if alpha.is_zero() {
            return None;
        }
        let (x, y) = (alpha.x as i128, alpha.y as i128);
        let t = field.omega_trace() as i128;
        let n = field.omega_norm_coeff() as i128;
        Self::from_lattice(&[(x, y), (y * n, x + y * t)], BigRational::one())
    }

    /// `(q)` for a positive rational `q`.
    pub fn from_rational(q: &BigRational) -> Self {
        IdealHNF { a: 1, b: 0, c: q.abs() }
    }

    pub fn mul(&self, field: &QuadraticField, other: &Self) -> Self {
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let t = field.omega_trace() as i128;
        let n = field.omega_norm_coeff() as i128;
        let vecs = [(a1 * a2, 0), (a1 * b2, a1), (a2 * b1, a2), (b1 * b2 + n, b1 + b2 + t)];
        Self::from_lattice(&vecs, &self.c * &other.c).expect("product of ideals has rank 2")
    }

    pub fn pow(&self, field: &QuadraticField, e: u32) -> Self {
        let mut acc = IdealHNF::unit();
        for _ in 0..e {
            acc = acc.mul(field, self);
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        IdealHNF { a: self.a, b: self.b, c: &self.c * q.abs() }
    }

    pub fn conj(&self, field: &QuadraticField) -> Self {
        let b = (-self.b - field.omega_trace()).rem_euclid(self.a);
        IdealHNF { a: self.a, b, c: self.c.clone() }
    }

    pub fn inverse(&self, field: &QuadraticField) -> Self {
        let n = self.norm();
        self.conj(field).scale(&(BigRational::one() / n))
    }

    pub fn div(&self, field: &QuadraticField, other: &Self) -> Self {
        self.mul(field, &other.inverse(field))
    }

    pub fn contains(&self, alpha: &Element) -> bool {
        let y = &alpha.y / &self.c;
        if !y.is_integer() {
            return false;
        }
        let x = &alpha.x / &self.c - &y * BigRational::from_integer(BigInt::from(self.b));
        (x / BigRational::from_integer(BigInt::from(self.a))).is_integer()
    }

    pub fn contains_int(&self, alpha: &IntElement) -> bool {
        if !self.c.is_integer() {
            return self.contains(&alpha.to_element());
        }
        let Some(c) = self.c.to_integer().to_i128() else {
            return self.contains(&alpha.to_element());
        };
        let (x, y) = (alpha.x as i128, alpha.y as i128);
        if y % c != 0 || x % c != 0 {
            return false;
        }
        let (x, y) = (x / c, y / c);
        (x - y * self.b as i128) % self.a as i128 == 0
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Self) -> bool {
        other.basis().iter().all(|g| self.contains(g))
    }

    /// `self | other` for integral ideals, i.e. `other ⊆ self`.
    pub fn divides(&self, other: &Self) -> bool {
        self.contains_ideal(other)
    }

    /// Prime factorization of an integral ideal, primes in ascending order.
    pub fn factor(&self, field: &QuadraticField) -> Vec<(IdealHNF, u32)> {
        assert!(self.is_integral(), "factor requires an integral ideal");
        let mut out: BTreeMap<IdealHNF, u32> = BTreeMap::new();
        let c = self.c.to_integer().to_u64().expect("ideal scale exceeds u64");
        for (q, e) in arith::factor_u64(c) {
            for pr in primes_above(field, q) {
                let mult = match pr.kind {
                    PrimeKind::Ramified => 2 * e,
                    _ => e,
                };
                *out.entry(pr.ideal).or_default() += mult;
            }
        }
        for (p, e) in arith::factor_u64(self.a as u64) {
            let above = primes_above(field, p);
            let pr = above
                .into_iter()
                .find(|pr| pr.ideal.a == p as i64 && pr.ideal.b == self.b % p as i64)
                .expect("primitive ideal factor must be a degree-one prime");
            *out.entry(pr.ideal).or_default() += e;
        }
        out.into_iter().collect()
    }

    /// All integral divisors of an integral ideal, sorted.
    pub fn divisors(&self, field: &QuadraticField) -> Vec<IdealHNF> {
        let mut divs = vec![IdealHNF::unit()];
        for (p, e) in self.factor(field) {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for d in &divs {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..e {
                    cur = cur.mul(field, &p);
                    next.push(cur.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// `self + other` for integral ideals.
    pub fn sum(&self, field: &QuadraticField, other: &Self) -> Self {
        let den = self.c.denom().lcm(other.c.denom());
        let dq = BigRational::from_integer(den.clone());
        let mut vecs = Vec::new();
        for id in [self, other] {
            for g in id.basis() {
                let x = (&g.x * &dq).to_integer().to_i128().expect("ideal sum overflow");
                let y = (&g.y * &dq).to_integer().to_i128().expect("ideal sum overflow");
                vecs.push((x, y));
                let t = field.omega_trace() as i128;
                let n = field.omega_norm_coeff() as i128;
                vecs.push((y * n, x + y * t));
            }
        }
        Self::from_lattice(&vecs, BigRational::one() / dq).expect("sum has rank 2")
    }

    pub fn is_coprime(&self, field: &QuadraticField, other: &Self) -> bool {
        self.sum(field, other).is_unit_ideal()
    }
}

impl PartialOrd for IdealHNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IdealHNF {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
            .then(self.c.cmp(&other.c))
    }
}

impl fmt::Display for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    a: i64,
    b: i64,
    c: String,
}

impl Serialize for IdealHNF {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealRepr { a: self.a, b: self.b, c: self.c.to_string() }.serialize(s)
    }
}

/// Deserialization checks the shape only; `a | N(b+w)` needs the field and is
/// checked by [`IdealHNF::validate`].
impl<'de> Deserialize<'de> for IdealHNF {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IdealRepr::deserialize(d)?;
        let c = parse_rational(&r.c).map_err(serde::de::Error::custom)?;
        if r.a <= 0 || r.b < 0 || r.b >= r.a || !c.is_positive() {
            return Err(serde::de::Error::custom(format!("not a reduced ideal: {}.{}.{}", r.a, r.b, c)));
        }
        Ok(IdealHNF { a: r.a, b: r.b, c })
    }
}

impl IdealHNF {
    pub fn validate(&self, field: &QuadraticField) -> Result<()> {
        Self::from_parts(field, self.a, self.b, self.c.clone()).map(|_| ())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    Split,
    Ramified,
    Inert,
}

/// A prime ideal with its splitting type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeAbove {
    pub ideal: IdealHNF,
    pub kind: PrimeKind,
}

/// Prime ideals above the rational prime `p`, sorted.
pub fn primes_above(field: &QuadraticField, p: u64) -> Vec<PrimeAbove> {
    let pi = p as i64;
    let t = field.omega_trace();
    let n = field.omega_norm_coeff();
    let f = |b: i64| (b * b + t * b - n).rem_euclid(pi);
    let mut roots: Vec<i64> = if p < 64 {
        (0..pi).filter(|&b| f(b) == 0).collect()
    } else if t == 0 {
        match arith::sqrt_mod(n, p) {
            Some(s) => vec![s as i64, (pi - s as i64) % pi],
            None => vec![],
        }
    } else {
        // b = (-1 +- sqrt(d)) / 2
        match arith::sqrt_mod(field.d(), p) {
            Some(s) => {
                let inv2 = (pi + 1) / 2;
                let r1 = ((-1 + s as i64).rem_euclid(pi) as i128 * inv2 as i128 % pi as i128) as i64;
                let r2 = ((-1 - s as i64).rem_euclid(pi) as i128 * inv2 as i128 % pi as i128) as i64;
                vec![r1, r2]
            }
            None => vec![],
        }
    };
    roots.sort();
    roots.dedup();
    debug_assert!(roots.iter().all(|&b| f(b) == 0));
    let mut out: Vec<PrimeAbove> = match roots.len() {
        0 => vec![PrimeAbove {
            ideal: IdealHNF { a: 1, b: 0, c: BigRational::from_integer(BigInt::from(p)) },
            kind: PrimeKind::Inert,
        }],
        1 => vec![PrimeAbove {
            ideal: IdealHNF { a: pi, b: roots[0], c: BigRational::one() },
            kind: PrimeKind::Ramified,
        }],
        _ => roots
            .iter()
            .map(|&b| PrimeAbove { ideal: IdealHNF { a: pi, b, c: BigRational::one() }, kind: PrimeKind::Split })
            .collect(),
    };
    out.sort_by(|x, y| x.ideal.cmp(&y.ideal));
    out
}

/// Residue field data of a prime ideal: for degree one, the image of `w`.
pub fn omega_residue(prime: &IdealHNF) -> Option<i64> {
    if prime.c.is_one() {
        Some((-prime.b).rem_euclid(prime.a))
    } else {
        None
    }
}
