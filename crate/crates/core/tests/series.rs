use std::sync::Arc;

use hmf_core::characters::IdealCharacter;
use hmf_core::coeff_ring::{AnyElem, AnyRing, Ring};
use hmf_core::eisenstein::{eisenstein_series, validate_constant_tuple, EisensteinSpec};
use hmf_core::hecke::{hecke_apply, hecke_commutes, hecke_matrix, hecke_matrix_in_basis, HeckeContext};
use hmf_core::ideals::{IdealHNF, NarrowClassData};
use hmf_core::qexp::{validate_ring_weight_compat, AdelicSeries, SeriesContext, WeightVector};
use hmf_core::quad_field::{Element, IntElement, QuadraticField};
use hmf_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn k6() -> QuadraticField {
    QuadraticField::new(6).unwrap()
}

fn n331(k: &QuadraticField) -> IdealHNF {
    IdealHNF::principal_int(k, &IntElement::new(25, 7)).unwrap()
}

/// Class character `[1, -1]` of Q(sqrt 6) over `ring`, made zero on `modulus`.
fn sign_character(ring: &AnyRing, classes: &Arc<NarrowClassData>, modulus: IdealHNF) -> IdealCharacter<AnyRing> {
    IdealCharacter::class_character(ring.clone(), classes.clone(), modulus, vec![ring.one(), ring.from_i64(-1)]).unwrap()
}

fn e1<R: Ring>(ctx: &Arc<SeriesContext>, eta: IdealCharacter<R>, constant: Vec<R::Elem>, bound: u64) -> AdelicSeries<R> {
    let psi = IdealCharacter::trivial(eta.ring().clone(), ctx.field(), IdealHNF::unit());
    eisenstein_series(ctx, &EisensteinSpec { eta, psi, k: 1, constant, bound }).unwrap()
}

#[test]
fn one_is_identity_and_product_commutes() {
    let k = k6();
    let ctx = SeriesContext::new(&k, 40);
    let f7 = AnyRing::prime_field(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let one = AdelicSeries::one(&ctx, &f7, 40).unwrap();
    for _ in 0..50 {
        let f = AdelicSeries::random(&ctx, &f7, WeightVector::parallel(1), 40, &mut rng).unwrap();
        let g = AdelicSeries::random(&ctx, &f7, WeightVector::parallel(2), 40, &mut rng).unwrap();
        assert_eq!(one.mul(&f).unwrap().with_weight(f.weight()), f);
        let fg = f.mul(&g).unwrap();
        assert_eq!(fg, g.mul(&f).unwrap());
        assert_eq!(fg.weight(), WeightVector::parallel(3));
    }
}

/// Independent convolution: scan a rectangle of `x + y w` for generators and
/// box points instead of using the lattice enumeration.
#[test]
fn eisenstein_square_matches_rectangle_scan() {
    let k = k6();
    let bound = 30;
    let ctx = SeriesContext::new(&k, bound);
    let q = AnyRing::rationals();
    let classes = ctx.classes().clone();
    let chi = sign_character(&q, &classes, IdealHNF::unit());
    let half = q.parse("1/2").unwrap();
    let e = e1(&ctx, chi.clone(), vec![half.clone(), half.clone()], bound);
    let sq = e.mul(&e).unwrap();

    // divisor-sum oracle for the coefficients of e
    let coeff = |m: &IdealHNF| -> AnyElem { m.divisors(&k).iter().fold(q.zero(), |acc, d| q.add(&acc, &chi.eval(d).unwrap())) };
    let r = 60i64;
    for i in 0..ctx.slots_below(bound) {
        let m = ctx.table().ideal(i);
        let (lambda, xi) = (0..classes.h_plus())
            .find_map(|l| {
                let t = classes.representative(l);
                let target = m.mul(&k, t);
                for y in -r..=r {
                    for x in -4 * r..=4 * r {
                        let c = IntElement::new(x, y);
                        if k.is_totally_positive(&c) && IdealHNF::principal_int(&k, &c).as_ref() == Some(&target) {
                            return Some((l, c));
                        }
                    }
                }
                None
            })
            .unwrap();
        let t = classes.representative(lambda);
        let t_inv = t.inverse(&k);
        let mut acc = q.add(&q.mul(&e.constants()[lambda], &coeff(m)), &q.mul(&coeff(m), &e.constants()[lambda]));
        for y in -r..=r {
            for x in -4 * r..=4 * r {
                let a = IntElement::new(x, y);
                let b = xi.clone() - a.clone();
                if t.contains_int(&a) && k.is_totally_positive(&a) && k.is_totally_positive(&b) {
                    let ia = IdealHNF::principal_int(&k, &a).unwrap().mul(&k, &t_inv);
                    let ib = IdealHNF::principal_int(&k, &b).unwrap().mul(&k, &t_inv);
                    acc = q.add(&acc, &q.mul(&coeff(&ia), &coeff(&ib)));
                }
            }
        }
        assert_eq!(sq.coeffs()[i], acc, "slot {i} ideal {m}");
    }
}

#[test]
fn inverse_of_scaled_eisenstein_mod_5() {
    let k = k6();
    let bound = 50;
    let ctx = SeriesContext::new(&k, bound);
    let f5 = AnyRing::prime_field(5).unwrap();
    let chi = sign_character(&f5, ctx.classes(), IdealHNF::unit());
    let e = e1(&ctx, chi, vec![f5.one(), f5.one()], bound).scale(&f5.from_i64(12));
    let inv = e.invert().unwrap();
    let one = AdelicSeries::one(&ctx, &f5, bound).unwrap();
    assert_eq!(e.mul(&inv).unwrap(), one);
    assert_eq!(one.invert().unwrap(), one);
    let c = AdelicSeries::constant(&ctx, &f5, &f5.from_i64(3), bound).unwrap();
    assert_eq!(c.invert().unwrap(), AdelicSeries::constant(&ctx, &f5, &f5.from_i64(2), bound).unwrap());
    let zero_const = AdelicSeries::zero(&ctx, &f5, WeightVector::parallel(1), bound).unwrap();
    assert!(matches!(zero_const.invert(), Err(Error::NotInvertible(_))));
}

#[test]
fn truncation_is_an_ideal() {
    let k = QuadraticField::new(5).unwrap();
    let ctx = SeriesContext::new(&k, 60);
    let f3 = AnyRing::prime_field(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..30 {
        let f = AdelicSeries::random(&ctx, &f3, WeightVector::parallel(1), 60, &mut rng).unwrap();
        let g = AdelicSeries::random(&ctx, &f3, WeightVector::parallel(1), 60, &mut rng).unwrap();
        let b = 10 + i;
        let lhs = f.mul(&g).unwrap().truncate(b).unwrap();
        let rhs = f.truncate(b).unwrap().mul(&g.truncate(b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
    let f = AdelicSeries::random(&ctx, &f3, WeightVector::parallel(1), 60, &mut rng).unwrap();
    assert_eq!(f.truncate(60).unwrap(), f);
    assert!(matches!(f.truncate(61), Err(Error::OutOfPrecision(_))));
}

fn nf6() -> AnyRing {
    AnyRing::number_field("x^2-6").unwrap()
}

#[test]
fn representative_change_preserves_products() {
    let k = k6();
    let ctx = SeriesContext::new(&k, 40);
    let eps = ctx.classes().units().totally_positive_fundamental_unit.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f7 = AnyRing::prime_field(7).unwrap();
    let f = AdelicSeries::random(&ctx, &f7, WeightVector::parallel(1), 40, &mut rng).unwrap();
    let g = AdelicSeries::random(&ctx, &f7, WeightVector::parallel(1), 40, &mut rng).unwrap();
    let ones = vec![Element::from_ints(1, 0); 2];
    assert_eq!(f.rep_change(&ones, None).unwrap(), f);
    let units = vec![eps.clone(), eps];
    assert_eq!(f.rep_change(&units, None).unwrap(), f);
    let scal = vec![Element::from_ints(3, 1), Element::from_ints(5, 2)];
    let (f2, g2) = (f.rep_change(&scal, None).unwrap(), g.rep_change(&scal, None).unwrap());
    assert_eq!(f2.mul(&g2).unwrap().coeffs(), f.mul(&g).unwrap().coeffs());
    assert!(matches!(f.rep_change(&[Element::from_ints(1, -1), Element::from_ints(1, 0)], None), Err(Error::InvalidRepresentative(_))));

    // weights (3,1) and (5,1) over Q(sqrt 6), where the maximal component is
    // additive: the geometric factors differ, the products agree
    let nf = nf6();
    let w = WeightVector::new(3, 1);
    let f = AdelicSeries::random(&ctx, &nf, w, 40, &mut rng).unwrap();
    let g = AdelicSeries::random(&ctx, &nf, WeightVector::new(5, 1), 40, &mut rng).unwrap();
    let (f2, g2) = (f.rep_change(&scal, None).unwrap(), g.rep_change(&scal, None).unwrap());
    assert_eq!(f2.mul(&g2).unwrap().coeffs(), f.mul(&g).unwrap().coeffs());
    assert_ne!(f.geometric_view().unwrap().values, f2.geometric_view().unwrap().values);
}

#[test]
fn non_parallel_weight_round_trip_and_algebra() {
    let k = k6();
    let ctx = SeriesContext::new(&k, 30);
    let nf = nf6();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let w = WeightVector::new(3, 1);
    for _ in 0..10 {
        let f = AdelicSeries::random(&ctx, &nf, w, 30, &mut rng).unwrap();
        let view = f.geometric_view().unwrap();
        assert_eq!(AdelicSeries::from_geometric(&ctx, &nf, w, 30, &view).unwrap(), f);
        let g = AdelicSeries::random(&ctx, &nf, WeightVector::new(0, 2), 30, &mut rng).unwrap();
        let h = AdelicSeries::random(&ctx, &nf, WeightVector::new(2, 2), 30, &mut rng).unwrap();
        let lhs = f.mul(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&g.mul(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
    }
    // phi at xi = 3 + w in the trivial class: factor 1/conj(xi)
    let f = AdelicSeries::random(&ctx, &nf, w, 30, &mut rng).unwrap();
    let xi = Element::from_ints(3, 1);
    let id = IdealHNF::principal(&k, &xi).unwrap();
    let lambda = ctx.classes().class_of(&id);
    let t = ctx.classes().representative(lambda).clone();
    assert!(t.is_unit_ideal());
    let expect = nf.mul(&f.coeff(&id).unwrap(), &nf.inv(&nf.embed_quadratic(&k, &Element::from_ints(3, -1)).unwrap()).unwrap());
    assert_eq!(f.phi_coefficient(lambda, &xi).unwrap(), expect);
    // non-parallel forms are cuspidal: constants are rejected, so no inverse
    let c: Vec<AnyElem> = vec![nf.one(), nf.from_i64(2)];
    let f = AdelicSeries::from_parts(&ctx, &nf, w, 30, c, f.coeffs().to_vec()).unwrap();
    assert!(matches!(f.invert(), Err(Error::Validation(_))));
    assert!(matches!(f.mul(&f), Err(Error::Validation(_))));
}

#[test]
fn ring_weight_gate() {
    let k = k6();
    let f3 = AnyRing::prime_field(3).unwrap();
    assert!(validate_ring_weight_compat(&f3, &k, &[WeightVector::parallel(1), WeightVector::parallel(2)]).is_ok());
    assert!(matches!(validate_ring_weight_compat(&f3, &k, &[WeightVector::new(3, 1)]), Err(Error::RingWeight { condition: 2, .. })));
    assert!(validate_ring_weight_compat(&nf6(), &k, &[WeightVector::new(3, 1)]).is_ok());
    assert!(matches!(validate_ring_weight_compat(&AnyRing::rationals(), &k, &[WeightVector::new(3, 1)]), Err(Error::RingWeight { condition: 2, .. })));
    assert!(matches!(validate_ring_weight_compat(&nf6(), &k, &[WeightVector::new(2, 1)]), Err(Error::RingWeight { condition: 1, .. })));
}

#[test]
fn subring_coefficients() {
    let k = k6();
    let ctx = SeriesContext::new(&k, 60);
    let q = AnyRing::rationals();
    let n = n331(&k);
    let chi = sign_character(&q, ctx.classes(), IdealHNF::unit());
    let c = q.parse("1/12").unwrap();
    let e = e1(&ctx, chi, vec![c.clone(), c], 60);
    let z = AnyRing::from_descriptor("z").unwrap();
    assert!(!e.verify_subring_coeffs(&z, 25));
    let scaled = e.scale(&q.from_i64(12));
    assert!(scaled.verify_subring_coeffs(&z, 25));
    let loc = AnyRing::from_descriptor("loc:x;inv=331").unwrap();
    assert!(scaled.verify_subring_coeffs(&loc, 25));
    let _ = n;
}

#[test]
fn eisenstein_constant_tuple_check() {
    let k = k6();
    let ctx = SeriesContext::new(&k, 30);
    let q = AnyRing::rationals();
    let n = n331(&k);
    let chi = sign_character(&q, ctx.classes(), n.clone());
    let triv = IdealCharacter::trivial(q.clone(), &k, IdealHNF::unit());
    let spec = EisensteinSpec { eta: chi.clone(), psi: triv.clone(), k: 1, constant: vec![q.one(), q.one()], bound: 30 };
    assert_eq!(validate_constant_tuple(&ctx, &spec).unwrap(), Ok(()));
    let plain = EisensteinSpec { eta: triv.clone(), psi: triv, k: 1, constant: vec![q.from_i64(5), q.from_i64(5)], bound: 30 };
    assert_eq!(validate_constant_tuple(&ctx, &plain).unwrap(), Ok(()));
    // with trivial characters a prime in the nontrivial class forces equal constants
    let bad = EisensteinSpec { constant: vec![q.from_i64(5), q.from_i64(7)], ..plain.clone() };
    let w = validate_constant_tuple(&ctx, &bad).unwrap().unwrap_err();
    assert!(w.prime.norm_u64().unwrap() <= 25);
    assert_eq!(ctx.classes().class_of(&w.prime), 1);
    let e = eisenstein_series(&ctx, &plain).unwrap();
    for i in 0..e.num_slots() {
        let m = e.ideal(i);
        let f = m.factor(&k);
        if f.len() == 1 && f[0].1 == 1 {
            assert_eq!(e.coeffs()[i], q.from_i64(2));
        }
    }
}

#[test]
fn hecke_on_eisenstein() {
    let k = k6();
    let bound = 200;
    let ctx = SeriesContext::new(&k, bound);
    let q = AnyRing::rationals();
    let n = n331(&k);
    let chi = sign_character(&q, ctx.classes(), n.clone());
    let e = e1(&ctx, chi.clone(), vec![q.one(), q.one()], bound);
    let hctx = HeckeContext::new(n.clone(), chi.clone());
    assert_eq!(hecke_apply(&hctx, &IdealHNF::unit(), &e).unwrap(), e);
    for tp in ctx.table().primes().iter().filter(|p| p.norm <= 19) {
        let p = &tp.ideal;
        let lam = q.add(&q.one(), &chi.eval(p).unwrap());
        let te = hecke_apply(&hctx, p, &e).unwrap();
        assert_eq!(te.bound(), bound / tp.norm);
        let expect = e.truncate(te.bound()).unwrap().scale(&lam);
        assert_eq!(te.coeffs(), expect.coeffs(), "prime {p}");
        assert_eq!(te.constants(), expect.constants(), "prime {p}");
        let m = hecke_matrix_in_basis(&hctx, p, std::slice::from_ref(&e)).unwrap();
        assert_eq!(m.get(0, 0), &lam);
    }
    assert_eq!(hecke_matrix(&hctx, &IdealHNF::unit(), &[]).unwrap().cols(), 0);
}

#[test]
fn hecke_operators_commute() {
    let k = k6();
    let ctx = SeriesContext::new(&k, 100);
    let f7 = AnyRing::prime_field(7).unwrap();
    let chi = sign_character(&f7, ctx.classes(), IdealHNF::unit());
    let hctx = HeckeContext::new(IdealHNF::unit(), chi);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let primes: Vec<IdealHNF> = ctx.table().primes().iter().filter(|p| p.norm <= 3).map(|p| p.ideal.clone()).collect();
    assert_eq!(primes.len(), 2);
    for _ in 0..5 {
        let f = AdelicSeries::random(&ctx, &f7, WeightVector::parallel(1), 100, &mut rng).unwrap();
        assert!(hecke_commutes(&hctx, &primes[0], &primes[1], &f).unwrap());
        assert!(hecke_commutes(&hctx, &IdealHNF::unit(), &primes[1], &f).unwrap());
        let p2 = primes[0].pow(&k, 2);
        assert!(hecke_commutes(&hctx, &primes[0], &p2, &f).unwrap());
    }
}
