use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng as _, RngCore};

use super::{poly, Ring};
use crate::error::Result;
use crate::quad_field::parse_rational;

/// The field `Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_field(&self) -> bool {
        true
    }
    fn descriptor(&self) -> String {
        "q".into()
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn random_element(&self, rng: &mut dyn RngCore) -> BigRational {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=4);
        BigRational::new(n.into(), d.into())
    }

    /// Rational roots are split off exactly; the squarefree cofactor is kept
    /// whole (possibly reducible).
    fn factor_poly(&self, f: &[BigRational]) -> Vec<Vec<BigRational>> {
        let sf = poly::squarefree_part(self, f);
        let mut rest = sf;
        let mut out = Vec::new();
        for r in rational_roots(&rest) {
            let lin = vec![-r.clone(), BigRational::one()];
            let (q, rem) = poly::divrem(self, &rest, &lin);
            debug_assert!(poly::is_zero_poly(self, &rem));
            rest = q;
            out.push(lin);
        }
        if poly::degree(self, &rest) > 0 {
            out.push(poly::monic(self, &rest));
        }
        out
    }
}

/// Roots in `Q` of a squarefree polynomial, via the rational root test.
/// Numerators and denominators larger than 10^12 are not searched.
pub fn rational_roots(f: &[BigRational]) -> Vec<BigRational> {
    let deg = match f.iter().rposition(|c| !c.is_zero()) {
        Some(d) => d,
        None => return Vec::new(),
    };
    if deg == 0 {
        return Vec::new();
    }
    let den = f.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = f[..=deg].iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut out = Vec::new();
    let mut lo = 0;
    while ints[lo].is_zero() {
        lo += 1;
    }
    if lo > 0 {
        out.push(BigRational::zero());
    }
    let a0 = ints[lo].abs();
    let an = ints[deg].abs();
    let limit = BigInt::from(1_000_000_000_000u64);
    if a0 > limit || an > limit {
        return out;
    }
    let divs = |n: &BigInt| -> Vec<BigInt> {
        let n: u64 = n.try_into().unwrap();
        let mut v = Vec::new();
        let mut i = 1u64;
        while i * i <= n {
            if n % i == 0 {
                v.push(BigInt::from(i));
                if i * i != n {
                    v.push(BigInt::from(n / i));
                }
            }
            i += 1;
        }
        v
    };
    for p in divs(&a0) {
        for q in divs(&an) {
            for s in [1, -1] {
                let r = BigRational::new(&p * s, q.clone());
                if out.contains(&r) {
                    continue;
                }
                let mut acc = BigRational::zero();
                for c in f[..=deg].iter().rev() {
                    acc = acc * &r + c;
                }
                if acc.is_zero() {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}
