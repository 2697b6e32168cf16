//! Eisenstein series `E_k(eta, psi)` from divisor sums, with supplied
//! constant terms.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::characters::IdealCharacter;
use crate::coeff_ring::Ring;
use crate::error::{Error, Result};
use crate::ideals::IdealHNF;
use crate::qexp::{AdelicSeries, SeriesContext, WeightVector};

#[derive(Clone, Debug)]
pub struct EisensteinSpec<R: Ring> {
    pub eta: IdealCharacter<R>,
    pub psi: IdealCharacter<R>,
    /// Parallel weight `k >= 1`.
    pub k: i64,
    /// One constant per narrow class, indexed like the representatives.
    pub constant: Vec<R::Elem>,
    pub bound: u64,
}

/// A failed constant-term check: class index and prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantWitness {
    pub class: usize,
    pub prime: IdealHNF,
    pub lhs: String,
    pub rhs: String,
}

impl<R: Ring> EisensteinSpec<R> {
    pub fn ring(&self) -> &R {
        self.eta.ring()
    }

    /// The character `eta * psi` of the Hecke action.
    pub fn nebentypus(&self) -> IdealCharacter<R> {
        self.eta.mul(&self.psi)
    }

    pub fn weight(&self) -> WeightVector {
        WeightVector::parallel(self.k)
    }

    /// `eta(p) + psi(p) N(p)^{k-1}`, the `T_p` eigenvalue.
    pub fn eigenvalue(&self, prime: &IdealHNF) -> Result<R::Elem> {
        let r = self.ring();
        let n = prime.norm_u64().ok_or_else(|| Error::Mismatch("prime must be integral".into()))?;
        let nk = r.pow_u64(&r.from_int(&BigInt::from(n)), (self.k - 1) as u64);
        Ok(r.add(&self.eta.eval_prime(prime)?, &r.mul(&self.psi.eval_prime(prime)?, &nk)))
    }
}

/// `a_m = sum_{a | m} eta(m/a) psi(a) N(a)^{k-1}` for `0 < N(m) < B`, with
/// the supplied constant tuple.
pub fn eisenstein_series<R: Ring>(ctx: &Arc<SeriesContext>, spec: &EisensteinSpec<R>) -> Result<AdelicSeries<R>> {
    if spec.k < 1 {
        return Err(Error::Validation(format!("Eisenstein weight must be at least 1, got {}", spec.k)));
    }
    let r = spec.ring();
    let table = ctx.table();
    let n = ctx.slots_below(spec.bound);
    let eta = spec.eta.values_on_table(table)?;
    let psi = spec.psi.values_on_table(table)?;
    let powk: Vec<R::Elem> = (0..n).map(|i| r.pow_u64(&r.from_int(&BigInt::from(table.norm(i))), (spec.k - 1) as u64)).collect();
    let coeffs = (0..n)
        .map(|m| {
            let fm = table.factorization(m);
            table.divisor_slots(m).into_iter().fold(r.zero(), |acc, a| {
                let q = crate::ideals::div_factorizations(fm, table.factorization(a), 1).expect("divisor");
                let qi = table.index_of_factorization(&q).expect("quotient of a table ideal");
                r.add(&acc, &r.mul(&r.mul(&eta[qi], &psi[a]), &powk[a]))
            })
        })
        .collect();
    AdelicSeries::from_parts(ctx, r, spec.weight(), spec.bound, spec.constant.clone(), coeffs)
}

/// Checks the constant tuple against the `T_p` constant-term formula for
/// primes of norm `<= 25` coprime to the level: for every class `lambda`,
/// `a0[t p] + eta psi(p) N(p)^{k-1} a0[t p^{-1}] = a_p a0[t]`.
pub fn validate_constant_tuple<R: Ring>(ctx: &Arc<SeriesContext>, spec: &EisensteinSpec<R>) -> Result<std::result::Result<(), ConstantWitness>> {
    const PRIME_NORM_LIMIT: u64 = 25;
    let r = spec.ring();
    let field = ctx.field();
    let classes = ctx.classes();
    let h = classes.h_plus();
    if spec.constant.len() != h {
        return Err(Error::Mismatch(format!("{} constants for {h} classes", spec.constant.len())));
    }
    let level = spec.eta.modulus().mul(field, spec.psi.modulus());
    let chi = spec.nebentypus();
    let primes = crate::ideals::IdealTable::new(field, PRIME_NORM_LIMIT + 1);
    for tp in primes.primes() {
        let p = &tp.ideal;
        if !p.is_coprime(field, &level) {
            continue;
        }
        let ap = spec.eigenvalue(p)?;
        let nk = r.pow_u64(&r.from_int(&BigInt::from(tp.norm)), (spec.k - 1) as u64);
        let twist = r.mul(&chi.eval_prime(p)?, &nk);
        let up = classes.class_of(p);
        let down = classes.class_inv(up);
        for lambda in 0..h {
            let lhs = r.add(&spec.constant[classes.class_mul(lambda, up)], &r.mul(&twist, &spec.constant[classes.class_mul(lambda, down)]));
            let rhs = r.mul(&ap, &spec.constant[lambda]);
            if lhs != rhs {
                return Ok(Err(ConstantWitness { class: lambda, prime: p.clone(), lhs: r.format(&lhs), rhs: r.format(&rhs) }));
            }
        }
    }
    Ok(Ok(()))
}
