use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng as _, RngCore};

use super::matrix::{LinResult, Matrix};
use super::snf::{int_smith_normal_form, invariant_factors, kernel_basis, saturation_basis, Snf};
use super::{PrimeField, Ring, Solved};
use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::parse_rational;

/// `Z[1/S]` for a finite set of primes `S`: rationals whose denominators are
/// `S`-smooth. A PID, so kernels and saturations come with SNF pivots.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LocalizedIntegers {
    inverted: Vec<u64>,
}

impl LocalizedIntegers {
    /// The integers.
    pub fn integers() -> Self {
        LocalizedIntegers::default()
    }

    /// Inverts the prime divisors of every entry of `units`.
    pub fn inverting(units: &[u64]) -> Self {
        let mut inverted: Vec<u64> = units.iter().flat_map(|&u| arith::factor_u64(u).into_iter().map(|(p, _)| p)).collect();
        inverted.sort_unstable();
        inverted.dedup();
        LocalizedIntegers { inverted }
    }

    pub fn inverted(&self) -> &[u64] {
        &self.inverted
    }

    /// Removes the primes of `S` from `n`, leaving a positive integer.
    pub fn strip(&self, n: &BigInt) -> BigInt {
        let mut m = n.abs();
        for &p in &self.inverted {
            let pb = BigInt::from(p);
            while !m.is_zero() && m.is_multiple_of(&pb) {
                m /= &pb;
            }
        }
        m
    }

    fn is_smooth(&self, n: &BigInt) -> bool {
        !n.is_zero() && self.strip(n).is_one()
    }

    /// `Z[1/S] -> F_p`; fails when `p` is inverted.
    pub fn reduction(&self, p: u64) -> Result<PrimeField> {
        if self.inverted.contains(&p) {
            return Err(Error::InvalidPrime(format!("{p} is inverted in {}", self.descriptor())));
        }
        PrimeField::new(p)
    }

    pub fn reduce_mod(&self, a: &BigRational, p: u64) -> Result<u64> {
        self.reduction(p)?.from_rational(a)
    }

    /// Multiplies each row by the lcm of its denominators.
    fn clear_rows(&self, m: &Matrix<BigRational>) -> Matrix<BigInt> {
        let mut out = Matrix::filled(m.rows(), m.cols(), BigInt::zero());
        for i in 0..m.rows() {
            let l = m.row(i).iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            for j in 0..m.cols() {
                let x = m.get(i, j);
                out.set(i, j, x.numer() * (&l / x.denom()));
            }
        }
        out
    }

    fn clear_columns(&self, m: &Matrix<BigRational>) -> Matrix<BigInt> {
        self.clear_rows(&m.transpose()).transpose()
    }

    fn stripped_pivots(&self, factors: &[BigInt]) -> Vec<BigInt> {
        factors.iter().map(|d| self.strip(d)).filter(|d| !d.is_one()).collect()
    }
}

impl Ring for LocalizedIntegers {
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
        if self.is_smooth(q.denom()) {
            Ok(q.clone())
        } else {
            Err(Error::NotInvertible(format!("denominator of {q} in {}", self.descriptor())))
        }
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        self.is_smooth(a.numer()).then(|| a.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn is_field(&self) -> bool {
        false
    }
    fn is_pid(&self) -> bool {
        true
    }
    fn inverted_primes(&self) -> Vec<u64> {
        self.inverted.clone()
    }
    fn descriptor(&self) -> String {
        if self.inverted.is_empty() {
            "z".into()
        } else {
            let s: Vec<String> = self.inverted.iter().map(|p| p.to_string()).collect();
            format!("loc:x;inv={}", s.join(","))
        }
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        self.from_rational(&parse_rational(s)?)
    }
    fn random_element(&self, rng: &mut dyn RngCore) -> BigRational {
        let n: i64 = rng.gen_range(-9..=9);
        let d = match self.inverted.len() {
            0 => 1,
            k => self.inverted[rng.gen_range(0..k)].pow(rng.gen_range(0..2)),
        };
        BigRational::new(n.into(), d.into())
    }

    /// Right kernel as a saturated module; pivots are the non-unit SNF
    /// pivots of the row-cleared matrix.
    fn kernel(&self, m: &Matrix<BigRational>) -> LinResult<Solved<BigRational>, BigRational> {
        let (k, factors) = kernel_basis(&self.clear_rows(m));
        Ok(Solved { basis: k.map(|x| BigRational::from_integer(x.clone())), pivots: self.stripped_pivots(&factors) })
    }

    /// Saturation of the column module after clearing column denominators.
    fn saturate(&self, m: &Matrix<BigRational>) -> LinResult<Solved<BigRational>, BigRational> {
        let (s, factors) = saturation_basis(&self.clear_columns(m));
        Ok(Solved { basis: s.map(|x| BigRational::from_integer(x.clone())), pivots: self.stripped_pivots(&factors) })
    }

    fn snf_pivots(&self, m: &Matrix<BigRational>) -> Vec<BigInt> {
        self.stripped_pivots(&invariant_factors(&self.clear_rows(m)))
    }

    fn smith_normal_form(&self, m: &Matrix<BigRational>) -> Result<Snf<BigRational>> {
        let a = self.clear_rows(m);
        let s = int_smith_normal_form(&a);
        // M = diag(1/l_i) * A
        let u = Matrix::from_fn(m.rows(), m.rows(), |i, j| {
            let l = m.row(i).iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            BigRational::new(s.u.get(i, j).clone(), l)
        });
        Ok(Snf { u, d: s.d.map(|x| BigRational::from_integer(x.clone())), v: s.v.map(|x| BigRational::from_integer(x.clone())) })
    }

    fn field_order(&self) -> Option<BigUint> {
        None
    }
}
