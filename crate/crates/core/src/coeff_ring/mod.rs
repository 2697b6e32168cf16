//! Exact coefficient rings.
//!
//! A [`Ring`] value is a runtime context (modulus, inverted primes, ...) and
//! elements are plain data interpreted by that context, so one generic code
//! path serves `Q`, `F_p`, `F_q`, number fields and `Z[1/S]`.

mod descriptor;
mod extension;
mod localized;
pub mod matrix;
pub mod poly;
mod prime_field;
mod rational;
pub mod snf;

use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::RngCore;

pub use descriptor::{AnyElem, AnyRing, Embedding, Extension, RingDescriptor};
pub use extension::PolyQuotient;
pub use localized::LocalizedIntegers;
pub use matrix::{LinResult, Matrix, ZeroDivisor};
pub use prime_field::PrimeField;
pub use rational::Rationals;
pub use snf::{hermite, int_smith_normal_form, invariant_factors, kernel_basis, saturation_basis, Hermite, Snf};

use crate::error::{Error, Result};
use crate::quad_field::{Element, QuadraticField};

/// Basis of a module together with the non-unit SNF pivots met computing it.
#[derive(Clone, Debug)]
pub struct Solved<E> {
    pub basis: Matrix<E>,
    pub pivots: Vec<BigInt>,
}

pub trait Ring: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// Image of a rational; fails when the denominator is not a unit.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    /// Inverse of a unit, `None` otherwise.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn is_field(&self) -> bool;
    fn descriptor(&self) -> String;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Number of elements, for finite fields.
    fn field_order(&self) -> Option<BigUint> {
        None
    }

    /// Image of a field element when the ring contains `K`.
    fn embed_quadratic(&self, _field: &QuadraticField, _a: &Element) -> Option<Self::Elem> {
        None
    }

    /// Whether Smith normal form is available.
    fn is_pid(&self) -> bool {
        false
    }

    /// Rational primes made invertible on top of the prime ring.
    fn inverted_primes(&self) -> Vec<u64> {
        Vec::new()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        self.pow(a, &BigUint::from(e))
    }

    /// Signed integer power; negative exponents need a unit.
    fn pow_i64(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        if e >= 0 {
            Ok(self.pow_u64(a, e as u64))
        } else {
            let inv = self.inv(a).ok_or_else(|| Error::NotInvertible(self.format(a)))?;
            Ok(self.pow_u64(&inv, e.unsigned_abs()))
        }
    }

    /// Right kernel. Over a PID the basis spans the kernel module, which is
    /// saturated, and `pivots` lists the non-unit SNF pivots of `m`.
    fn kernel(&self, m: &Matrix<Self::Elem>) -> LinResult<Solved<Self::Elem>, Self::Elem> {
        Ok(Solved { basis: matrix::kernel_field(self, m)?, pivots: Vec::new() })
    }

    /// Basis of the saturation of the column module of `m` (over a field:
    /// of its column space), with the non-unit SNF pivots of `m`.
    fn saturate(&self, m: &Matrix<Self::Elem>) -> LinResult<Solved<Self::Elem>, Self::Elem> {
        Ok(Solved { basis: matrix::column_basis_field(self, m)?, pivots: Vec::new() })
    }

    /// Non-unit SNF pivots of `m`; empty over fields.
    fn snf_pivots(&self, _m: &Matrix<Self::Elem>) -> Vec<BigInt> {
        Vec::new()
    }

    fn smith_normal_form(&self, _m: &Matrix<Self::Elem>) -> Result<Snf<Self::Elem>> {
        Err(Error::Unsupported(format!("Smith normal form over {}", self.descriptor())))
    }

    /// Distinct monic irreducible factors of a nonzero polynomial (low to
    /// high coefficients). Where full factorization is unavailable some
    /// returned factors may be reducible; callers split them on zero divisors.
    fn factor_poly(&self, f: &[Self::Elem]) -> Vec<Vec<Self::Elem>> {
        poly::default_factor(self, f)
    }

    /// Order of a root of unity, if `a^n = 1` for some `n <= limit`.
    fn multiplicative_order(&self, a: &Self::Elem, limit: u64) -> Option<u64> {
        let mut acc = a.clone();
        for n in 1..=limit {
            if self.is_one(&acc) {
                return Some(n);
            }
            acc = self.mul(&acc, a);
        }
        None
    }
}

/// Converts an element between rings through its printed form; used to
/// reduce rational data into finite fields and to lift base-field data.
pub fn convert<A: Ring, B: Ring>(from: &A, to: &B, a: &A::Elem) -> Result<B::Elem> {
    to.parse(&from.format(a))
}
