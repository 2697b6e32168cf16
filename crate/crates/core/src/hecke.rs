//! Hecke operators on truncated adelic series.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::characters::IdealCharacter;
use crate::coeff_ring::matrix::{solve_field, Matrix};
use crate::coeff_ring::Ring;
use crate::error::{Error, Result};
use crate::ideals::{div_factorizations, mul_factorizations, IdealHNF};
use crate::qexp::AdelicSeries;

/// Level and character of the Hecke action. The weight is read from the
/// series each operator is applied to.
#[derive(Clone, Debug)]
pub struct HeckeContext<R: Ring> {
    pub level: IdealHNF,
    pub character: IdealCharacter<R>,
}

impl<R: Ring> HeckeContext<R> {
    pub fn new(level: IdealHNF, character: IdealCharacter<R>) -> Self {
        HeckeContext { level, character }
    }

    /// `E(b) N(b)^{k0-1}`, zero when `b` meets the level.
    fn divisor_weight(&self, ring: &R, b: &IdealHNF, k0: i64) -> Result<R::Elem> {
        let field = self.character.field();
        if !b.is_coprime(field, &self.level) {
            return Ok(ring.zero());
        }
        let n = ring.from_int(&BigInt::from(b.norm_u64().expect("integral")));
        let nk = ring.pow_i64(&n, k0 - 1)?;
        Ok(ring.mul(&self.character.eval(b)?, &nk))
    }
}

/// Output precision of `T_a` on a series known mod `q^B`.
pub fn hecke_bound(bound: u64, norm: u64) -> u64 {
    bound / norm
}

/// `T_a f` mod `q^{floor(B / N(a))}`.
pub fn hecke_apply<R: Ring>(hctx: &HeckeContext<R>, a: &IdealHNF, f: &AdelicSeries<R>) -> Result<AdelicSeries<R>> {
    let ctx = f.context();
    let ring = f.ring();
    let na = a.norm_u64().filter(|_| a.is_integral()).ok_or_else(|| Error::Mismatch(format!("{a} is not integral")))?;
    if na >= f.bound() {
        return Err(Error::OutOfPrecision(format!("T at {} needs precision above {}, have {}", a.label(), na, f.bound())));
    }
    let table = ctx.table();
    let ai = ctx.slot_of(a).expect("ideal of norm below the bound");
    let fa = table.factorization(ai).clone();
    let k0 = f.weight().k0();
    let divisors: Vec<(usize, R::Elem)> = table
        .divisor_slots(ai)
        .into_iter()
        .map(|b| Ok((b, hctx.divisor_weight(ring, table.ideal(b), k0)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, w)| !ring.is_zero(w))
        .collect();

    let new_bound = hecke_bound(f.bound(), na);
    let n = ctx.slots_below(new_bound);
    let coeffs: Vec<R::Elem> = (0..n)
        .into_par_iter()
        .map(|m| {
            let fm_a = mul_factorizations(table.factorization(m), &fa);
            let mut acc = ring.zero();
            for (b, w) in &divisors {
                let fb = table.factorization(*b);
                if div_factorizations(table.factorization(m), fb, 1).is_none() {
                    continue;
                }
                let q = div_factorizations(&fm_a, fb, 2).expect("b divides both m and a");
                let qi = table.index_of_factorization(&q).expect("N(ma/b^2) < B");
                acc = ring.add(&acc, &ring.mul(w, &f.coeffs()[qi]));
            }
            acc
        })
        .collect();

    let classes = ctx.classes();
    let ca = classes.class_of(a);
    let constant = (0..classes.h_plus())
        .map(|lambda| {
            divisors.iter().fold(ring.zero(), |acc, (b, w)| {
                let cb = classes.class_of(table.ideal(*b));
                let target = classes.class_mul(classes.class_mul(lambda, ca), classes.class_pow(cb, -2));
                ring.add(&acc, &ring.mul(w, &f.constants()[target]))
            })
        })
        .collect();
    AdelicSeries::from_parts(ctx, ring, f.weight(), new_bound, constant, coeffs)
}

/// Columns are the coefficient vectors of `T_a b` for each basis element.
pub fn hecke_matrix<R: Ring>(hctx: &HeckeContext<R>, a: &IdealHNF, basis: &[AdelicSeries<R>]) -> Result<Matrix<R::Elem>> {
    let Some(first) = basis.first() else {
        return Ok(Matrix::from_columns(&[], 0));
    };
    for b in basis {
        if b.bound() != first.bound() || b.weight() != first.weight() || b.ring().descriptor() != first.ring().descriptor() {
            return Err(Error::Mismatch("basis elements must share ring, weight and precision".into()));
        }
    }
    let cols = basis.iter().map(|b| Ok(hecke_apply(hctx, a, b)?.to_vector())).collect::<Result<Vec<_>>>()?;
    let rows = cols[0].len();
    Ok(Matrix::from_columns(&cols, rows))
}

/// Matrix of `T_a` relative to the basis truncated to the output precision:
/// `X` with `trunc(basis) X = T_a(basis)`. Needs a field and images inside
/// the span.
pub fn hecke_matrix_in_basis<R: Ring>(hctx: &HeckeContext<R>, a: &IdealHNF, basis: &[AdelicSeries<R>]) -> Result<Matrix<R::Elem>> {
    let Some(first) = basis.first() else {
        return Ok(Matrix::from_columns(&[], 0));
    };
    let ring = first.ring();
    if !ring.is_field() {
        return Err(Error::Unsupported(format!("coordinates over {}", ring.descriptor())));
    }
    let images = hecke_matrix(hctx, a, basis)?;
    let nb = hecke_bound(first.bound(), a.norm_u64().unwrap_or(u64::MAX));
    let trunc = basis.iter().map(|b| Ok(b.truncate(nb)?.to_vector())).collect::<Result<Vec<_>>>()?;
    let tm = Matrix::from_columns(&trunc, images.rows());
    match solve_field(ring, &tm, &images) {
        Ok(Some(x)) => Ok(x),
        Ok(None) => Err(Error::Validation(format!("T at {} leaves the span of the basis", a.label()))),
        Err(z) => Err(Error::NotInvertible(ring.format(&z.0))),
    }
}

/// `T_a T_b f = T_b T_a f`, and for coprime `a`, `b` also `= T_{ab} f`, on
/// the common truncation.
pub fn hecke_commutes<R: Ring>(hctx: &HeckeContext<R>, a: &IdealHNF, b: &IdealHNF, f: &AdelicSeries<R>) -> Result<bool> {
    let field = hctx.character.field();
    let ab = hecke_apply(hctx, a, &hecke_apply(hctx, b, f)?)?;
    let ba = hecke_apply(hctx, b, &hecke_apply(hctx, a, f)?)?;
    let common = ab.bound().min(ba.bound());
    if ab.truncate(common)? != ba.truncate(common)? {
        return Ok(false);
    }
    if a.is_coprime(field, b) {
        let prod = hecke_apply(hctx, &a.mul(field, b), f)?;
        let c = common.min(prod.bound());
        if prod.truncate(c)? != ab.truncate(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}
