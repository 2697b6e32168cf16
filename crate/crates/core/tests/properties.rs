mod common;

use std::sync::Arc;

use common::Synthetic;
use hmf_core::characters::IdealCharacter;
use hmf_core::coeff_ring::matrix::{mat_mul, rank, Matrix};
use hmf_core::coeff_ring::{convert, AnyElem, AnyRing, Ring};
use hmf_core::eisenstein::{eisenstein_series, EisensteinSpec};
use hmf_core::hecke::{hecke_apply, HeckeContext};
use hmf_core::ideals::{totally_positive_generator, IdealHNF, IdealTable};
use hmf_core::io::SeriesJson;
use hmf_core::qexp::{AdelicSeries, SeriesContext, WeightVector};
use hmf_core::quad_field::{Element, Embedding, IntElement, QuadraticField};
use hmf_core::stability::{candidate_space, largest_stable_submodule, span_contains};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(d: i64) -> QuadraticField {
    QuadraticField::new(d).unwrap()
}

/// Sign of `a + b sqrt d` by exact integer comparison.
fn sign_oracle(a: i128, b: i128, d: i128) -> i8 {
    let (sa, sb) = (a.signum() as i8, b.signum() as i8);
    if sa == 0 || sb == 0 || sa == sb {
        return if sa != 0 { sa } else { sb };
    }
    match (a * a).cmp(&(b * b * d)) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

fn int_matrix(z: &AnyRing, rows: &[Vec<i64>], cols: usize) -> Matrix<AnyElem> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| z.from_i64(x)).collect()).collect(), cols)
}

fn reduce(z: &AnyRing, fp: &AnyRing, m: &Matrix<AnyElem>) -> Matrix<AnyElem> {
    m.map(|a| convert(z, fp, a).unwrap())
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r))
    })
}

/// First prime of `ctx` carrying a quadratic character (the totally
/// positive unit must be a square there).
fn quadratic_character(ctx: &SeriesContext, ring: &AnyRing) -> IdealCharacter<AnyRing> {
    let values = vec![1i8; ctx.h_plus() - 1];
    ctx.table()
        .primes()
        .iter()
        .filter(|p| p.norm % 2 == 1)
        .find_map(|p| IdealCharacter::quadratic(ring.clone(), ctx.classes().clone(), p.ideal.clone(), &values).ok())
        .expect("some prime admits a quadratic character")
}

fn random_series(ctx: &Arc<SeriesContext>, ring: &AnyRing, k: i64, seed: u64) -> AdelicSeries<AnyRing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AdelicSeries::random(ctx, ring, WeightVector::parallel(k), ctx.bound(), &mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn embedding_signs_match_exact_oracle(d in prop::sample::select(vec![2i64, 3, 5, 6, 7, 13, 21, 331]), x in -10_000i64..10_000, y in -10_000i64..10_000) {
        let k = field(d);
        let a = IntElement::new(x, y);
        let (x, y, d) = (x as i128, y as i128, d as i128);
        for (e, s) in [(Embedding::First, 1i128), (Embedding::Second, -1)] {
            // 2(x + y w) = (2x + t y) + s y sqrt d
            let expect = if k.omega_is_sqrt_d() { sign_oracle(x, s * y, d) } else { sign_oracle(2 * x + y, s * y, d) };
            prop_assert_eq!(k.embedding_sign(&a, e), expect);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn norm_is_multiplicative_and_trace_additive(d in prop::sample::select(vec![2i64, 5, 6, 13]), a in (-500i64..500, -500i64..500), b in (-500i64..500, -500i64..500)) {
        let k = field(d);
        let (a, b) = (Element::from_ints(a.0, a.1), Element::from_ints(b.0, b.1));
        prop_assert_eq!(k.norm(&k.mul(&a, &b)), k.norm(&a) * k.norm(&b));
        prop_assert_eq!(k.trace(&(a.clone() + b.clone())), k.trace(&a) + k.trace(&b));
    }

    #[test]
    fn ideal_norm_is_multiplicative(d in prop::sample::select(vec![5i64, 6, 10, 15]), i in 0usize..200, j in 0usize..200) {
        let k = field(d);
        let table = IdealTable::new(&k, 200);
        let (a, b) = (table.ideal(i % table.len()), table.ideal(j % table.len()));
        let ab = a.mul(&k, b);
        prop_assert_eq!(ab.norm_u64().unwrap(), a.norm_u64().unwrap() * b.norm_u64().unwrap());
    }
}

#[test]
fn unit_powers_in_parallel_weight_are_trivial() {
    for d in [2, 3, 5, 6, 7, 10, 13, 331] {
        let k = field(d);
        let u = k.fundamental_unit().totally_positive_fundamental_unit;
        assert_eq!(k.norm(&u), BigRational::from_integer(1.into()), "d = {d}");
        assert!(k.is_totally_positive(&u));
    }
}

#[test]
fn principal_classes_have_totally_positive_generators() {
    for d in [5, 6, 10, 15, 34] {
        let k = field(d);
        let ctx = SeriesContext::new(&k, 150);
        let classes = ctx.classes();
        for id in ctx.table().ideals() {
            if classes.class_of(id) != classes.identity() {
                continue;
            }
            let g = totally_positive_generator(&k, classes.units(), id).expect("principal in the narrow sense");
            assert!(k.is_totally_positive(&g));
            assert_eq!(&IdealHNF::principal(&k, &g).unwrap(), id);
        }
    }
}

#[test]
fn class_of_products_follows_the_group_law() {
    for d in [6, 10, 15, 34, 79] {
        let k = field(d);
        let ctx = SeriesContext::new(&k, 80);
        let classes = ctx.classes();
        let h = classes.h_plus();
        let ids = ctx.table().ideals();
        for a in ids.iter().take(25) {
            for b in ids.iter().take(25) {
                let c = classes.class_of(&a.mul(&k, b));
                assert_eq!(c, classes.class_mul(classes.class_of(a), classes.class_of(b)));
            }
        }
        for l in 0..h {
            assert_eq!(classes.class_mul(l, classes.class_inv(l)), classes.identity());
            assert_eq!(classes.class_pow(l, h as i64), classes.identity());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_remultiplies((r, c, rows) in matrix_strategy(20)) {
        let z = AnyRing::from_descriptor("z").unwrap();
        let m = int_matrix(&z, &rows, c);
        let s = z.smith_normal_form(&m).unwrap();
        prop_assert_eq!(mat_mul(&z, &mat_mul(&z, &s.u, &s.d), &s.v), m);
        // diagonal, each entry dividing the next
        let diag: Vec<BigRational> = (0..r.min(c)).map(|i| z.parse(&z.format(s.d.get(i, i))).unwrap()).map(|e| to_q(&z, &e)).collect();
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(z.is_zero(s.d.get(i, j)));
                }
            }
        }
        for w in diag.windows(2) {
            if !w[0].numer().eq(&BigInt::from(0)) {
                prop_assert!((w[1].clone() / w[0].clone()).is_integer());
            } else {
                prop_assert!(w[1].numer() == &BigInt::from(0));
            }
        }
    }
}

fn to_q(z: &AnyRing, e: &AnyElem) -> BigRational {
    hmf_core::quad_field::parse_rational(&z.format(e)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn saturation_is_idempotent((_, c, rows) in matrix_strategy(8), scale in 1i64..7) {
        let z = AnyRing::from_descriptor("z").unwrap();
        let m = int_matrix(&z, &rows, c).map(|a| z.mul(a, &z.from_i64(scale)));
        let once = z.saturate(&m).unwrap();
        let twice = z.saturate(&once.basis).unwrap();
        prop_assert!(twice.pivots.is_empty());
        prop_assert_eq!(once.basis.cols(), twice.basis.cols());
        for j in 0..twice.basis.cols() {
            prop_assert!(span_contains(&z, &once.basis, &twice.basis.column(j)).unwrap());
            prop_assert!(span_contains(&z, &twice.basis, &once.basis.column(j)).unwrap());
        }
    }

    #[test]
    fn kernel_commutes_with_reduction((_, c, rows) in matrix_strategy(7), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let z = AnyRing::from_descriptor("z").unwrap();
        let m = int_matrix(&z, &rows, c);
        let pivots = z.snf_pivots(&m);
        prop_assume!(pivots.iter().all(|d| d % BigInt::from(p) != BigInt::from(0)));
        let fp = AnyRing::prime_field(p).unwrap();
        let k = z.kernel(&m).unwrap().basis;
        let k_mod_p = reduce(&z, &fp, &k);
        let m_mod_p = reduce(&z, &fp, &m);
        let direct = fp.kernel(&m_mod_p).unwrap().basis;
        prop_assert_eq!(k_mod_p.cols(), direct.cols());
        prop_assert_eq!(rank(&fp, &k_mod_p).unwrap(), k_mod_p.cols());
        for j in 0..direct.cols() {
            prop_assert!(span_contains(&fp, &k_mod_p, &direct.column(j)).unwrap());
        }
    }
}

#[test]
fn character_order_and_multiplicativity() {
    let k = field(6);
    let ctx = SeriesContext::new(&k, 120);
    let classes = ctx.classes().clone();
    let table = ctx.table();
    let q = AnyRing::rationals();
    let f9 = AnyRing::from_descriptor("fq:3,2").unwrap();
    let n331 = IdealHNF::principal_int(&k, &IntElement::new(25, 7)).unwrap();
    let chars = vec![
        IdealCharacter::class_character(q.clone(), classes.clone(), IdealHNF::unit(), vec![q.one(), q.from_i64(-1)]).unwrap(),
        IdealCharacter::class_character(q.clone(), classes.clone(), n331.clone(), vec![q.one(), q.from_i64(-1)]).unwrap(),
        quadratic_character(&ctx, &q),
        quadratic_character(&ctx, &f9),
    ];
    for chi in &chars {
        let r = chi.ring();
        let power = chi.pow(chi.order() as u32);
        for p in table.primes() {
            if p.ideal.divides(chi.modulus()) {
                continue;
            }
            assert!(r.is_one(&power.eval_prime(&p.ideal).unwrap()));
        }
        for a in table.ideals().iter().take(40) {
            for b in table.ideals().iter().take(40) {
                let ab = a.mul(&k, b);
                assert_eq!(chi.eval(&ab).unwrap(), r.mul(&chi.eval(a).unwrap(), &chi.eval(b).unwrap()));
            }
        }
        assert!(chi.check_ray_consistency(50).unwrap() > 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_algebra_laws(d in prop::sample::select(vec![5i64, 6]), seed in any::<u64>(), ring in prop::sample::select(vec!["q", "fp:7", "fq:5,2"])) {
        let ctx = SeriesContext::new(&field(d), 40);
        let r = AnyRing::from_descriptor(ring).unwrap();
        let (f, g, h) = (random_series(&ctx, &r, 1, seed), random_series(&ctx, &r, 2, seed ^ 1), random_series(&ctx, &r, 2, seed ^ 2));
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g.add(&h).unwrap()).unwrap(), f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().weight(), WeightVector::parallel(3));
        let back = f.geometric_view().and_then(|v| AdelicSeries::from_geometric(&ctx, &r, f.weight(), 40, &v)).unwrap();
        prop_assert_eq!(back, f.clone());
        let json = SeriesJson::from_json(&SeriesJson::from_series(&f).to_json()).unwrap();
        prop_assert_eq!(json.to_series_in(&ctx).unwrap(), f);
    }

    #[test]
    fn hecke_operators_are_linear(seed in any::<u64>(), i in 0usize..6, a in -5i64..5, b in -5i64..5) {
        let k = field(6);
        let ctx = SeriesContext::new(&k, 120);
        let q = AnyRing::rationals();
        let chi = quadratic_character(&ctx, &q);
        let hctx = HeckeContext::new(chi.modulus().clone(), chi);
        let m = ctx.table().ideal(1 + i).clone();
        let (f, g) = (random_series(&ctx, &q, 2, seed), random_series(&ctx, &q, 2, seed.wrapping_add(1)));
        let (a, b) = (q.from_i64(a), q.from_i64(b));
        let lhs = hecke_apply(&hctx, &m, &f.scale(&a).add(&g.scale(&b)).unwrap()).unwrap();
        let rhs = hecke_apply(&hctx, &m, &f).unwrap().scale(&a).add(&hecke_apply(&hctx, &m, &g).unwrap().scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn parallel_weight_geometric_coefficients_are_unit_invariant() {
    for d in [5, 6] {
        let k = field(d);
        let ctx = SeriesContext::new(&k, 60);
        let q = AnyRing::rationals();
        let f = random_series(&ctx, &q, 2, 9);
        let eps = k.fundamental_unit().totally_positive_fundamental_unit;
        let mut compared = 0;
        for (l, t) in ctx.classes().representatives().iter().enumerate() {
            for x in -30..=30 {
                for y in -30..=30 {
                    let xi = Element::from_ints(x, y);
                    if !k.is_totally_positive(&xi) || !t.contains(&xi) {
                        continue;
                    }
                    let (a, b) = (f.phi_coefficient(l, &xi), f.phi_coefficient(l, &k.mul(&eps, &xi)));
                    if let (Ok(a), Ok(b)) = (a, b) {
                        assert_eq!(a, b);
                        compared += 1;
                    }
                }
            }
        }
        assert!(compared > 10);
    }
}

#[test]
fn eisenstein_coefficients_are_multiplicative() {
    let k = field(6);
    let bound = 150;
    let ctx = SeriesContext::new(&k, bound);
    let q = AnyRing::rationals();
    let classes = ctx.classes().clone();
    let table = ctx.table();
    let sign = IdealCharacter::class_character(q.clone(), classes.clone(), IdealHNF::unit(), vec![q.one(), q.from_i64(-1)]).unwrap();
    let quad = quadratic_character(&ctx, &q);
    let one = IdealCharacter::trivial(q.clone(), &k, IdealHNF::unit());
    for (eta, psi, kk) in [(one.clone(), one.clone(), 2), (sign.clone(), one.clone(), 1), (one.clone(), quad.clone(), 3), (quad.clone(), sign.clone(), 2)] {
        let constant = vec![q.zero(); ctx.h_plus()];
        let e = eisenstein_series(&ctx, &EisensteinSpec { eta, psi, k: kk, constant, bound }).unwrap();
        assert!(q.is_one(&e.coeff(&IdealHNF::unit()).unwrap()));
        for a in table.ideals() {
            for b in table.ideals() {
                let n = a.norm_u64().unwrap() * b.norm_u64().unwrap();
                if n >= bound || !a.is_coprime(&k, b) {
                    continue;
                }
                let ab = e.coeff(&a.mul(&k, b)).unwrap();
                assert_eq!(ab, q.mul(&e.coeff(a).unwrap(), &e.coeff(b).unwrap()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Random junk on top of the synthetic products: the rank drops at every
    /// cut, there are at most rank(V0) cuts, the Eisenstein quotients survive,
    /// and Z and Q agree.
    #[test]
    fn stability_descends_monotonically(seed in any::<u64>(), junk in 1usize..4) {
        let bound = 80;
        let q = AnyRing::rationals();
        let z = AnyRing::from_descriptor("z").unwrap();
        let mut ranks = Vec::new();
        for r in [&q, &z] {
            let s = Synthetic::new(r, bound);
            let mut basis = s.products();
            for j in 0..junk {
                basis.push(random_series(&s.ctx, r, 2, seed.wrapping_add(j as u64)));
            }
            let v0 = candidate_space(&s.f1, &basis, bound).unwrap();
            let v = largest_stable_submodule(&v0, &s.hctx, None).unwrap();
            prop_assert!(v.log().len() <= v0.rank());
            for cut in v.log() {
                prop_assert!(cut.rank_after < cut.rank_before);
            }
            prop_assert!(v.contains(&s.f1.truncate(bound).unwrap()).unwrap());
            prop_assert!(v.contains(&s.f2.truncate(bound).unwrap()).unwrap());
            prop_assert_eq!(v.rank(), 2);
            ranks.push(v.rank());
        }
        prop_assert_eq!(ranks[0], ranks[1]);
    }
}
