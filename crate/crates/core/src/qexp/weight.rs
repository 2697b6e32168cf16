use std::fmt;
use std::ops::{Add, Neg};

use serde::{Deserialize, Serialize};

use crate::coeff_ring::Ring;
use crate::error::{Error, Result};
use crate::quad_field::{Element, QuadraticField};

/// Weight `(k1, k2)` of a form over a real quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct WeightVector {
    pub k1: i64,
    pub k2: i64,
}

impl WeightVector {
    pub fn new(k1: i64, k2: i64) -> Self {
        WeightVector { k1, k2 }
    }

    pub fn parallel(k: i64) -> Self {
        WeightVector { k1: k, k2: k }
    }

    pub fn k0(&self) -> i64 {
        self.k1.max(self.k2)
    }

    pub fn is_parallel(&self) -> bool {
        self.k1 == self.k2
    }

    pub fn is_paritious(&self) -> bool {
        (self.k1 - self.k2) % 2 == 0
    }

    /// Exponents `(a, b)` with `xi^{(k0 - k)/2} = xi^a * conj(xi)^b`.
    pub fn half_defect(&self) -> (u32, u32) {
        let k0 = self.k0();
        (((k0 - self.k1) / 2) as u32, ((k0 - self.k2) / 2) as u32)
    }

    /// `xi^{(k0 - k)/2}` in the ring, i.e. the factor turning geometric
    /// coefficients into adelic ones.
    pub fn psi_factor<R: Ring>(&self, ring: &R, field: &QuadraticField, xi: &Element) -> Result<R::Elem> {
        if self.is_parallel() {
            return Ok(ring.one());
        }
        let (a, b) = self.half_defect();
        let val = field.mul(&field.pow(xi, a as u64), &field.pow(&field.conj(xi), b as u64));
        ring.embed_quadratic(field, &val).ok_or_else(|| Error::RingWeight {
            condition: 2,
            reason: format!("{} does not contain the image of the quadratic field", ring.descriptor()),
        })
    }

    /// `xi^{(k - k0)/2}`, the inverse of [`psi_factor`](Self::psi_factor).
    pub fn phi_factor<R: Ring>(&self, ring: &R, field: &QuadraticField, xi: &Element) -> Result<R::Elem> {
        let f = self.psi_factor(ring, field, xi)?;
        ring.inv(&f).ok_or_else(|| Error::RingWeight { condition: 2, reason: format!("{} is not a unit", ring.format(&f)) })
    }
}

impl Add for WeightVector {
    type Output = WeightVector;
    fn add(self, o: WeightVector) -> WeightVector {
        WeightVector::new(self.k1 + o.k1, self.k2 + o.k2)
    }
}

impl Neg for WeightVector {
    type Output = WeightVector;
    fn neg(self) -> WeightVector {
        WeightVector::new(-self.k1, -self.k2)
    }
}

impl From<[i64; 2]> for WeightVector {
    fn from(k: [i64; 2]) -> Self {
        WeightVector::new(k[0], k[1])
    }
}

impl From<WeightVector> for [i64; 2] {
    fn from(w: WeightVector) -> Self {
        [w.k1, w.k2]
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

/// Checks that series of the given weights are well defined over `ring`.
///
/// Condition (1) asks for `eps^{k/2}` to be a unit for totally positive
/// units, which fails for non-paritious weights. Condition (2) asks for
/// `xi^{(k0 - k)/2}` to be a unit for all totally positive integers; for a
/// non-parallel weight this needs characteristic zero and a copy of the
/// quadratic field inside the ring.
pub fn validate_ring_weight_compat<R: Ring>(ring: &R, field: &QuadraticField, weights: &[WeightVector]) -> Result<()> {
    for w in weights {
        if w.is_parallel() {
            continue;
        }
        if !w.is_paritious() {
            return Err(Error::RingWeight { condition: 1, reason: format!("weight {w} is not paritious") });
        }
        if ring.characteristic() > 0 {
            return Err(Error::RingWeight {
                condition: 2,
                reason: format!("weight {w} is not parallel and {} has characteristic {}", ring.descriptor(), ring.characteristic()),
            });
        }
        if ring.embed_quadratic(field, &Element::omega()).is_none() {
            return Err(Error::RingWeight {
                condition: 2,
                reason: format!("weight {w} is not parallel and {} does not contain the quadratic field", ring.descriptor()),
            });
        }
        // rational primes must be invertible, e.g. xi = 2 gives 2^{a+b}
        if !ring.is_field() {
            let (a, b) = w.half_defect();
            let f = ring.embed_quadratic(field, &field.pow(&Element::from_ints(2, 0), (a + b) as u64));
            if f.and_then(|f| ring.inv(&f)).is_none() {
                return Err(Error::RingWeight { condition: 2, reason: format!("rational integers are not units in {}", ring.descriptor()) });
            }
        }
    }
    Ok(())
}
