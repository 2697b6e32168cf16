//! Synthetic weight-one data over Q(sqrt 5) shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use hmf_core::characters::IdealCharacter;
use hmf_core::coeff_ring::{AnyRing, Ring};
use hmf_core::eisenstein::{eisenstein_series, EisensteinSpec};
use hmf_core::hecke::HeckeContext;
use hmf_core::ideals::{primes_above, IdealHNF};
use hmf_core::qexp::{AdelicSeries, SeriesContext};
use hmf_core::quad_field::QuadraticField;

/// Two weight-one Eisenstein series of level `p q` (the primes above 41 in
/// Q(sqrt 5)) and character `chi_a`:
///
/// * `f1 = E_1(1, chi_a)`, eigenvalues `1 + chi_a(p)`;
/// * `f2 = E_1(chi_b, chi_a chi_b)`, eigenvalues `chi_b(p) (1 + chi_a(p))`.
///
/// `chi_a`, `chi_b` are the quadratic characters of the two primes above 41.
/// The fundamental unit is a non-residue at both, so both characters are odd
/// at both infinite places and the series are genuine weight-one forms.
/// With one narrow class the Hecke relations leave the constant terms free;
/// `f1` gets constant 1 so that it is a unit over Z, `f2` has constant 0.
pub struct Synthetic {
    pub field: QuadraticField,
    pub ctx: Arc<SeriesContext>,
    pub ring: AnyRing,
    pub chi_a: IdealCharacter<AnyRing>,
    pub chi_b: IdealCharacter<AnyRing>,
    pub level: IdealHNF,
    pub f1: AdelicSeries<AnyRing>,
    pub f2: AdelicSeries<AnyRing>,
    pub hctx: HeckeContext<AnyRing>,
}

impl Synthetic {
    pub fn new(ring: &AnyRing, bound: u64) -> Synthetic {
        let field = QuadraticField::new(5).unwrap();
        let ctx = SeriesContext::new(&field, bound);
        let classes = ctx.classes().clone();
        let ps = primes_above(&field, 41);
        let (p, q) = (ps[0].ideal.clone(), ps[1].ideal.clone());
        let chi_a = IdealCharacter::quadratic(ring.clone(), classes.clone(), p.clone(), &[]).unwrap();
        let chi_b = IdealCharacter::quadratic(ring.clone(), classes, q.clone(), &[]).unwrap();
        let level = p.mul(&field, &q);
        let one = IdealCharacter::trivial(ring.clone(), &field, IdealHNF::unit());
        let s1 = EisensteinSpec { eta: one, psi: chi_a.clone(), k: 1, constant: vec![ring.one()], bound };
        let s2 = EisensteinSpec { eta: chi_b.clone(), psi: chi_a.mul(&chi_b), k: 1, constant: vec![ring.zero()], bound };
        let f1 = eisenstein_series(&ctx, &s1).unwrap();
        let f2 = eisenstein_series(&ctx, &s2).unwrap();
        let hctx = HeckeContext::new(level.clone(), s2.nebentypus());
        Synthetic { field, ctx, ring: ring.clone(), chi_a, chi_b, level, f1, f2, hctx }
    }

    /// `1 + chi_a(p)` and `chi_b(p) (1 + chi_a(p))`.
    pub fn eigenvalues(&self, p: &IdealHNF) -> (<AnyRing as Ring>::Elem, <AnyRing as Ring>::Elem) {
        let r = &self.ring;
        let a = r.add(&r.one(), &self.chi_a.eval_prime(p).unwrap());
        let b = r.mul(&self.chi_b.eval_prime(p).unwrap(), &a);
        (a, b)
    }

    /// Weight-two products `f_i * f1`, the multiplier being `f1`.
    pub fn products(&self) -> Vec<AdelicSeries<AnyRing>> {
        vec![self.f1.mul(&self.f1).unwrap(), self.f2.mul(&self.f1).unwrap()]
    }

    /// All products `f_i f_j`, the weight-two basis for the squaring test.
    pub fn square_basis(&self) -> Vec<AdelicSeries<AnyRing>> {
        vec![self.f1.mul(&self.f1).unwrap(), self.f1.mul(&self.f2).unwrap(), self.f2.mul(&self.f2).unwrap()]
    }
}
