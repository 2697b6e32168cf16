mod common;

use common::Synthetic;
use hmf_core::coeff_ring::matrix::{rank, Matrix};
use hmf_core::coeff_ring::{AnyRing, Ring};
use hmf_core::hecke::hecke_apply;
use hmf_core::ideals::IdealHNF;
use hmf_core::qexp::{AdelicSeries, WeightVector};
use hmf_core::stability::*;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const B: u64 = 120;

fn junk(s: &Synthetic, seed: u64) -> AdelicSeries<AnyRing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AdelicSeries::random(&s.ctx, &s.ring, WeightVector::parallel(2), B, &mut rng).unwrap()
}

#[test]
fn multiplier_alone_gives_the_one_series() {
    let s = Synthetic::new(&AnyRing::rationals(), B);
    let v = candidate_space(&s.f1, &[s.f1.mul(&s.f1).unwrap()], B).unwrap();
    assert_eq!(v.rank(), 1);
    assert_eq!(v.weight(), WeightVector::parallel(1));
    assert!(v.contains(&s.f1).unwrap());
    let quotient = candidate_space(&s.f1, &s.products(), B).unwrap();
    assert!(quotient.contains(&s.f2).unwrap());
}

#[test]
fn junk_column_is_cut_and_eisenstein_quotients_survive() {
    let s = Synthetic::new(&AnyRing::rationals(), B);
    let mut basis = s.products();
    basis.push(junk(&s, 7));
    let v0 = candidate_space(&s.f1, &basis, B).unwrap();
    assert_eq!(v0.rank(), 3);

    // rank oracle: the junk quotient leaves the span under the first operator
    let jq = v0.series(2).unwrap();
    let p = &default_schedule(&s.ctx, B)[0];
    let tj = hecke_apply(&s.hctx, p, &jq).unwrap();
    let nb = tj.bound();
    let cols: Vec<_> = (0..3).map(|j| v0.series(j).unwrap().truncate(nb).unwrap().to_vector()).chain([tj.to_vector()]).collect();
    let rows = cols[0].len();
    assert_eq!(rank(&s.ring, &Matrix::from_columns(&cols, rows)).unwrap(), 4);

    let v = largest_stable_submodule(&v0, &s.hctx, None).unwrap();
    assert_eq!(v.rank(), 2);
    assert!(v.contains(&s.f1).unwrap());
    assert!(v.contains(&s.f2).unwrap());
    assert_eq!(v.log().len(), 1);
    assert_eq!((v.log()[0].rank_before, v.log()[0].rank_after), (3, 2));
    assert!(prime_list(&v).is_empty());

    // a stable input has no cuts
    let again = largest_stable_submodule(&v, &s.hctx, None).unwrap();
    assert_eq!(again.log().len(), 1);
}

#[test]
fn eigenforms_of_the_synthetic_space() {
    let s = Synthetic::new(&AnyRing::rationals(), B);
    let v = candidate_space(&s.f1, &s.products(), B).unwrap();
    let v = largest_stable_submodule(&v, &s.hctx, None).unwrap();
    let primes: Vec<IdealHNF> = s.ctx.table().primes().iter().filter(|p| p.norm <= 40).map(|p| p.ideal.clone()).collect();
    let sq = s.square_basis();
    let forms = eigenforms(&v, &s.hctx, Some(&sq), Some(&primes)).unwrap();
    assert_eq!(forms.len(), 2);
    let mut found = [false, false];
    for f in &forms {
        assert!(f.normalized);
        assert_eq!(f.eigenspace_dim, 1);
        assert_eq!(f.verification, Verification::Verified);
        let which = if f.series == s.f1 { 0 } else { 1 };
        if which == 1 {
            assert_eq!(f.series, s.f2);
        }
        found[which] = true;
        for (p, lambda) in &f.eigenvalues {
            let (a, b) = s.eigenvalues(p);
            assert_eq!(*lambda, if which == 0 { a } else { b });
        }
    }
    assert_eq!(found, [true, true]);

    let unverified = eigenforms(&v, &s.hctx, None, Some(&primes)).unwrap();
    assert!(unverified.iter().all(|f| f.verification == Verification::Unverified));

    let empty = CandidateSpace::from_columns(&s.ctx, &s.ring, WeightVector::parallel(1), B, &Matrix::from_columns(&[], v.basis().rows())).unwrap();
    assert!(eigenforms(&empty, &s.hctx, None, None).unwrap().is_empty());
}

#[test]
fn squaring_test_outcomes() {
    let s = Synthetic::new(&AnyRing::rationals(), B);
    let sq = s.square_basis();
    assert_eq!(squaring_test(&s.f1, Some(&sq), B).unwrap(), Verification::Verified);
    assert_eq!(squaring_test(&s.f1, None, B).unwrap(), Verification::Unverified);
    assert_eq!(squaring_test(&s.f1, Some(&[]), B).unwrap(), Verification::Unverified);
    let j = junk(&s, 3).truncate(B).unwrap();
    let jq = s.f1.invert().unwrap().mul(&j).unwrap();
    assert_eq!(squaring_test(&jq, Some(&sq), B).unwrap(), Verification::Failed);
}

fn z() -> AnyRing {
    AnyRing::from_descriptor("z").unwrap()
}

#[test]
fn scaling_leaves_the_saturated_result_unchanged() {
    let s = Synthetic::new(&z(), B);
    let mut basis = s.products();
    basis.push(junk(&s, 11));
    let reference = largest_stable_submodule(&candidate_space(&s.f1, &basis, B).unwrap(), &s.hctx, None).unwrap();
    for k in [2, 3, 6] {
        let scaled: Vec<_> = basis.iter().map(|g| g.scale(&s.ring.from_i64(k))).collect();
        let v0 = candidate_space(&s.f1, &scaled, B).unwrap();
        assert!(v0.pivot_primes().iter().all(|p| k % *p as i64 == 0));
        let v = largest_stable_submodule(&v0, &s.hctx, None).unwrap();
        assert_eq!(v.rank(), reference.rank());
        for j in 0..v.rank() {
            assert!(reference.contains(&v.series(j).unwrap()).unwrap());
            assert!(v.contains(&reference.series(j).unwrap()).unwrap());
        }
    }
    // the same input over Q has the same final dimension
    let q = Synthetic::new(&AnyRing::rationals(), B);
    let mut qb = q.products();
    qb.push(junk(&q, 11));
    let vq = largest_stable_submodule(&candidate_space(&q.f1, &qb, B).unwrap(), &q.hctx, None).unwrap();
    assert_eq!(vq.rank(), reference.rank());
}

#[test]
fn prime_list_of_a_toy_solve() {
    let s = Synthetic::new(&z(), B);
    let rows = s.ctx.h_plus() + s.ctx.slots_below(B);
    let d = [1, 2, 6];
    let cols: Vec<Vec<_>> = (0..3).map(|j| (0..rows).map(|i| s.ring.from_i64(if i == j { d[j] } else { 0 })).collect()).collect();
    let v = CandidateSpace::from_columns(&s.ctx, &s.ring, WeightVector::parallel(1), B, &Matrix::from_columns(&cols, rows)).unwrap();
    assert_eq!(prime_list(&v).into_iter().collect::<Vec<_>>(), vec![2, 3]);
    let unit: Vec<Vec<_>> = (0..3).map(|j| (0..rows).map(|i| s.ring.from_i64((i == j) as i64)).collect()).collect();
    let v = CandidateSpace::from_columns(&s.ctx, &s.ring, WeightVector::parallel(1), B, &Matrix::from_columns(&unit, rows)).unwrap();
    assert!(prime_list(&v).is_empty());
    assert!(v.pivot_log().iter().all(|r| r.pivots.iter().all(|p| p.parse::<BigInt>().is_ok())));
}

#[test]
fn multicharacteristic_run_without_exceptional_primes() {
    let s = Synthetic::new(&z(), B);
    let ring = base_ring(s.level.norm_u64().unwrap(), &[]);
    let run = MultiRun {
        multiplier: s.f1.map_ring(&ring).unwrap(),
        basis: s.products().iter().map(|g| g.map_ring(&ring).unwrap()).collect(),
        level: s.level.clone(),
        character: s.hctx.character.map_ring(&ring).unwrap(),
        bound: B,
        schedule: None,
        extra_primes: vec![3, 5, 7, 41],
    };
    let out = run_multicharacteristic(&run).unwrap();
    let r = &out.report;
    assert_eq!(r.rank, 2);
    assert!(r.exceptional_primes.is_empty(), "{:?}", r.pivots);
    assert_eq!(r.inverted_primes, vec![41]);
    assert_eq!(r.reruns.iter().map(|x| x.prime).collect::<Vec<_>>(), vec![3, 5, 7]);
    assert!(r.reruns.iter().all(|x| x.rank == 2 && x.difference == 0));
    assert_eq!(r.mode, "heuristic");
    assert!(r.assumptions.iter().any(|a| a.name == "surjectivity" && !a.verified && a.statement.contains("parallel weight 2")));
    assert!(!r.render().is_empty());
}

#[test]
fn sturm_plan() {
    let p = sturm_heuristic(1, 1, 331);
    assert_eq!(p.hard_bound.to_string(), (4u64 * 331 * 331 * 331).to_string());
    assert_eq!(p.escalation, vec![500, 1000, 1500, 2000]);
    assert_eq!(sturm_heuristic(1, 1, 1).hard_bound.to_string(), "4");
    assert_eq!(p.mode(2000), "heuristic");
    assert_eq!(sturm_heuristic(1, 1, 1).mode(5), "certified");
    let dims = [3usize, 2, 2, 2];
    let mut i = 0;
    let e = p
        .escalate(|_| {
            i += 1;
            Ok(dims[i - 1])
        })
        .unwrap();
    assert_eq!(e.stable_at, Some(1500));
}
