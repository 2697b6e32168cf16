//! Characters on the group of ideals coprime to a modulus, trivial on
//! principal ideals with a totally positive generator congruent to 1.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith;
use crate::coeff_ring::{convert, Ring};
use crate::error::{Error, Result};
use crate::ideals::{IdealHNF, IdealTable, NarrowClassData, PrimeKind};
use crate::quad_field::{Element, IntElement, QuadraticField};

#[derive(Clone, Debug)]
enum Part<R: Ring> {
    /// Explicit values on primes; other primes are unknown.
    Table(BTreeMap<IdealHNF, R::Elem>),
    /// A character of the narrow class group, one value per class index.
    Class { classes: Arc<NarrowClassData>, values: Vec<R::Elem> },
    /// Quadratic residue symbol of a totally positive generator, extended to
    /// the other narrow classes by declared signs.
    Quadratic(QuadraticPart),
}

#[derive(Clone, Debug)]
struct QuadraticPart {
    classes: Arc<NarrowClassData>,
    p: u64,
    /// Image of `w` in the residue field, `None` for an inert prime.
    omega: Option<i64>,
    /// Per class: declared value on `t_lambda` times the symbol of `N(t_lambda)`.
    class_signs: Vec<i8>,
}

impl QuadraticPart {
    /// Residue symbol of an integral element modulo the prime.
    fn symbol(&self, field: &QuadraticField, xi: &Element) -> i8 {
        let p = self.p as i64;
        let red = |q: &num_rational::BigRational| -> i64 {
            let n = q.numer().mod_floor(&p.into()).to_i64().unwrap();
            let d = q.denom().mod_floor(&p.into()).to_u64().unwrap();
            let inv = arith::mod_inv(d, self.p).expect("element is integral at the modulus") as i64;
            (n as i128 * inv as i128).rem_euclid(p as i128) as i64
        };
        match self.omega {
            Some(r) => {
                let v = (red(&xi.x) as i128 + red(&xi.y) as i128 * r as i128).rem_euclid(p as i128) as i64;
                arith::legendre(v, self.p)
            }
            None => arith::legendre(red(&field.norm(xi)), self.p),
        }
    }

    /// Value on any ideal coprime to the modulus.
    fn value(&self, ideal: &IdealHNF) -> i8 {
        let (lambda, xi) = self.classes.class_with_generator(ideal);
        self.symbol(self.classes.field(), &xi) * self.class_signs[lambda]
    }
}

/// An `R`-valued character modulo an integral ideal, evaluated on ideals.
#[derive(Clone, Debug)]
pub struct IdealCharacter<R: Ring> {
    ring: R,
    field: QuadraticField,
    modulus: IdealHNF,
    modulus_primes: Vec<IdealHNF>,
    parts: Vec<Part<R>>,
    order: u64,
    label: String,
}

impl<R: Ring> IdealCharacter<R> {
    fn with_parts(ring: R, field: &QuadraticField, modulus: IdealHNF, parts: Vec<Part<R>>, order: u64, label: String) -> Self {
        let modulus_primes = modulus.factor(field).into_iter().map(|(p, _)| p).collect();
        IdealCharacter { ring, field: field.clone(), modulus, modulus_primes, parts, order, label }
    }

    pub fn trivial(ring: R, field: &QuadraticField, modulus: IdealHNF) -> Self {
        Self::with_parts(ring, field, modulus, Vec::new(), 1, "trivial".into())
    }

    /// The quadratic character modulo a prime of odd residue characteristic.
    /// On narrow-trivial classes it is the residue symbol of a totally
    /// positive generator, which requires the totally positive fundamental
    /// unit to be a square modulo the prime. `class_values[i]` is the
    /// declared value (`+1` or `-1`) on the representative of class `i + 1`.
    pub fn quadratic(ring: R, classes: Arc<NarrowClassData>, modulus: IdealHNF, class_values: &[i8]) -> Result<Self> {
        let field = classes.field().clone();
        let fac = modulus.factor(&field);
        if fac.len() != 1 || fac[0].1 != 1 {
            return Err(Error::Validation(format!("modulus {} is not prime", modulus.label())));
        }
        let norm = modulus.norm_u64().ok_or_else(|| Error::Validation("modulus must be integral".into()))?;
        let p = arith::factor_u64(norm)[0].0;
        if p == 2 {
            return Err(Error::Validation("quadratic character needs a residue field of odd size".into()));
        }
        let h = classes.h_plus();
        if class_values.len() != h - 1 || class_values.iter().any(|v| v.abs() != 1) {
            return Err(Error::Validation(format!("expected {} class values in {{1, -1}}", h - 1)));
        }
        let kind = crate::ideals::primes_above(&field, p)
            .into_iter()
            .find(|pa| pa.ideal == modulus)
            .map(|pa| pa.kind)
            .ok_or_else(|| Error::Validation("modulus is not a prime ideal".into()))?;
        let omega = if kind == PrimeKind::Inert { None } else { crate::ideals::omega_residue(&modulus) };
        let mut part = QuadraticPart { classes: classes.clone(), p, omega, class_signs: vec![1; h] };
        let eps = classes.units().totally_positive_fundamental_unit.clone();
        if part.symbol(&field, &eps) != 1 {
            return Err(Error::IllDefined {
                reason: format!(
                    "the totally positive unit is not a square modulo {}, so the residue symbol of a totally positive generator is not well defined",
                    modulus.label()
                ),
                witness: eps.to_string(),
            });
        }
        let identity = classes.identity();
        let mut declared = vec![1i8; h];
        let mut it = class_values.iter();
        for (lambda, slot) in declared.iter_mut().enumerate() {
            if lambda != identity {
                *slot = *it.next().unwrap();
            }
        }
        for lambda in 0..h {
            let t = classes.representative(lambda);
            if !t.is_coprime(&field, &modulus) {
                return Err(Error::Unsupported(format!("class representative {} divides the modulus", t.label())));
            }
            let nt = Element::from_scalar(t.norm());
            part.class_signs[lambda] = declared[lambda] * part.symbol(&field, &nt);
        }
        // the declared values must extend to a homomorphism
        for l in 0..h {
            for m in 0..h {
                let prod = classes.representative(l).mul(&field, classes.representative(m));
                if part.value(&prod) != declared[l] * declared[m] {
                    return Err(Error::IllDefined {
                        reason: format!("declared class values are not multiplicative (classes {l}, {m})"),
                        witness: prod.label(),
                    });
                }
            }
        }
        let order = 2;
        Ok(Self::with_parts(ring, &field, modulus, vec![Part::Quadratic(part)], order, "quadratic".into()))
    }

    /// A character of the narrow class group (conductor dividing the
    /// infinite places), made zero on primes dividing `modulus`.
    pub fn class_character(ring: R, classes: Arc<NarrowClassData>, modulus: IdealHNF, values: Vec<R::Elem>) -> Result<Self> {
        let h = classes.h_plus();
        if values.len() != h {
            return Err(Error::Validation(format!("expected {h} class values")));
        }
        if !ring.is_one(&values[classes.identity()]) {
            return Err(Error::Validation("class character must be 1 on the trivial class".into()));
        }
        for i in 0..h {
            for j in 0..h {
                if values[classes.class_mul(i, j)] != ring.mul(&values[i], &values[j]) {
                    return Err(Error::IllDefined {
                        reason: format!("class values are not multiplicative (classes {i}, {j})"),
                        witness: classes.representative(i).mul(classes.field(), classes.representative(j)).label(),
                    });
                }
            }
        }
        let order = values.iter().map(|v| ring.multiplicative_order(v, h as u64).unwrap_or(1)).fold(1, |a: u64, b| a.lcm(&b));
        let field = classes.field().clone();
        Ok(Self::with_parts(ring, &field, modulus, vec![Part::Class { classes, values }], order, "class".into()))
    }

    /// Explicit prime values. Values must be units and primes must be
    /// coprime to the modulus.
    pub fn from_table(ring: R, field: &QuadraticField, modulus: IdealHNF, entries: Vec<(IdealHNF, R::Elem)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut order = 1u64;
        for (p, v) in entries {
            let f = p.factor(field);
            if f.len() != 1 || f[0].1 != 1 {
                return Err(Error::Validation(format!("{} is not a prime ideal", p.label())));
            }
            if !p.is_coprime(field, &modulus) {
                return Err(Error::Validation(format!("table prime {} divides the modulus", p.label())));
            }
            if ring.inv(&v).is_none() {
                return Err(Error::Validation(format!("value at {} is not a unit", p.label())));
            }
            if let Some(o) = ring.multiplicative_order(&v, 10_000) {
                order = order.lcm(&o);
            }
            map.insert(p, v);
        }
        Ok(Self::with_parts(ring, field, modulus, vec![Part::Table(map)], order, "table".into()))
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    pub fn modulus(&self) -> &IdealHNF {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    /// Pointwise product, with modulus the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let g = self.modulus.sum(f, &other.modulus);
        let modulus = self.modulus.mul(f, &other.modulus).div(f, &g);
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        let label = match (self.is_trivial(), other.is_trivial()) {
            (true, _) => other.label.clone(),
            (_, true) => self.label.clone(),
            _ => format!("{}*{}", self.label, other.label),
        };
        Self::with_parts(self.ring.clone(), f, modulus, parts, self.order.lcm(&other.order), label)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::trivial(self.ring.clone(), &self.field, self.modulus.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        if k == 0 {
            return acc;
        }
        acc.label = format!("({})^{k}", self.label);
        acc
    }

    /// Same character with values pushed into another ring.
    pub fn map_ring<S: Ring>(&self, target: &S) -> Result<IdealCharacter<S>> {
        let parts = self
            .parts
            .iter()
            .map(|p| {
                Ok(match p {
                    Part::Table(m) => Part::Table(m.iter().map(|(k, v)| Ok((k.clone(), convert(&self.ring, target, v)?))).collect::<Result<_>>()?),
                    Part::Class { classes, values } => Part::Class {
                        classes: classes.clone(),
                        values: values.iter().map(|v| convert(&self.ring, target, v)).collect::<Result<_>>()?,
                    },
                    Part::Quadratic(q) => Part::Quadratic(q.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealCharacter::with_parts(target.clone(), &self.field, self.modulus.clone(), parts, self.order, self.label.clone()))
    }

    fn divides_modulus(&self, prime: &IdealHNF) -> bool {
        self.modulus_primes.contains(prime)
    }

    /// Value on a prime ideal.
    pub fn eval_prime(&self, prime: &IdealHNF) -> Result<R::Elem> {
        if self.divides_modulus(prime) {
            return Ok(self.ring.zero());
        }
        let mut acc = self.ring.one();
        for part in &self.parts {
            let v = match part {
                Part::Table(m) => m
                    .get(prime)
                    .cloned()
                    .ok_or_else(|| Error::InsufficientData(format!("no character value at prime {}", prime.label())))?,
                Part::Class { classes, values } => values[classes.class_of(prime)].clone(),
                Part::Quadratic(q) => self.ring.from_i64(q.value(prime) as i64),
            };
            acc = self.ring.mul(&acc, &v);
        }
        Ok(acc)
    }

    /// Value on an integral ideal: 0 unless coprime to the modulus, otherwise
    /// the product of prime values.
    pub fn eval(&self, ideal: &IdealHNF) -> Result<R::Elem> {
        let mut acc = self.ring.one();
        for (p, e) in ideal.factor(&self.field) {
            let v = self.eval_prime(&p)?;
            acc = self.ring.mul(&acc, &self.ring.pow_u64(&v, e as u64));
        }
        Ok(acc)
    }

    /// Values on every slot of an ideal table.
    pub fn values_on_table(&self, table: &IdealTable) -> Result<Vec<R::Elem>> {
        let prime_vals = table.primes().iter().map(|p| self.eval_prime(&p.ideal)).collect::<Result<Vec<_>>>()?;
        Ok((0..table.len())
            .map(|i| {
                table.factorization(i).iter().fold(self.ring.one(), |acc, &(j, e)| {
                    self.ring.mul(&acc, &self.ring.pow_u64(&prime_vals[j as usize], e as u64))
                })
            })
            .collect())
    }

    /// Checks `chi((xi)) = 1` on up to `samples` totally positive integral
    /// `xi = 1 mod modulus` of small height.
    pub fn check_ray_consistency(&self, samples: usize) -> Result<usize> {
        let mut seen = 0;
        let range = 60i64;
        'outer: for s in 1..=range {
            for y in -s..=s {
                for x in [-s, s] {
                    let xi = IntElement::new(x, y);
                    if seen >= samples {
                        break 'outer;
                    }
                    let shifted = IntElement::new(x - 1, y);
                    if !self.field.is_totally_positive(&xi) || !self.modulus.contains_int(&shifted) {
                        continue;
                    }
                    let id = IdealHNF::principal_int(&self.field, &xi).expect("nonzero");
                    let v = self.eval(&id)?;
                    if !self.ring.is_one(&v) {
                        return Err(Error::Validation(format!("character is {} on ({xi}), which is 1 mod the modulus", self.ring.format(&v))));
                    }
                    seen += 1;
                }
            }
        }
        Ok(seen)
    }
}
