use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng as _, RngCore};

use super::Ring;
use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::parse_rational;

/// The prime field `F_p`, elements in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !arith::is_prime(p) || p >= 1 << 62 {
            return Err(Error::Parse(format!("{p} is not a supported prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        self.reduce_big(n)
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let d = self.reduce_big(q.denom());
        let inv = arith::mod_inv(d, self.p)
            .ok_or_else(|| Error::InvalidPrime(format!("{} divides the denominator of {q}", self.p)))?;
        Ok(self.mul(&self.reduce_big(q.numer()), &inv))
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        arith::mod_inv(*a, self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn is_field(&self) -> bool {
        true
    }
    fn field_order(&self) -> Option<BigUint> {
        Some(BigUint::from(self.p))
    }
    fn descriptor(&self) -> String {
        format!("fp:{}", self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        self.from_rational(&parse_rational(s)?)
    }
    fn random_element(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
}
