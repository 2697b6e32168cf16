use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::characters::IdealCharacter;
use crate::coeff_ring::{AnyRing, LocalizedIntegers, Ring};
use crate::error::{Error, Result};
use crate::hecke::HeckeContext;
use crate::ideals::IdealHNF;
use crate::qexp::{AdelicSeries, WeightVector};

use super::candidate::{candidate_space, largest_stable_submodule, CandidateSpace, CutRecord, PivotRecord};

/// The known Sturm bound `2(k + k') N(level)^3` and the precision schedule
/// used in its place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmPlan {
    #[serde(with = "as_string")]
    pub hard_bound: BigUint,
    pub escalation: Vec<u64>,
}

mod as_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Precision steps of 500 up to 2000.
pub const ESCALATION: [u64; 4] = [500, 1000, 1500, 2000];

pub fn sturm_heuristic(k: i64, k_prime: i64, level_norm: u64) -> SturmPlan {
    let n = BigUint::from(level_norm);
    let hard_bound = BigUint::from((2 * (k + k_prime)).max(0) as u64) * &n * &n * &n;
    SturmPlan { hard_bound, escalation: ESCALATION.to_vec() }
}

/// Dimensions met while escalating precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Escalation {
    pub steps: Vec<(u64, usize)>,
    /// First precision whose dimension repeated the previous one.
    pub stable_at: Option<u64>,
}

impl SturmPlan {
    pub fn is_certified(&self, bound: u64) -> bool {
        BigUint::from(bound) > self.hard_bound
    }

    pub fn mode(&self, bound: u64) -> &'static str {
        if self.is_certified(bound) {
            "certified"
        } else {
            "heuristic"
        }
    }

    /// Runs `dim` at each scheduled precision and stops once two consecutive
    /// dimensions agree.
    pub fn escalate(&self, mut dim: impl FnMut(u64) -> Result<usize>) -> Result<Escalation> {
        let mut steps: Vec<(u64, usize)> = Vec::new();
        for &b in &self.escalation {
            let d = dim(b)?;
            let repeat = steps.last().is_some_and(|&(_, prev)| prev == d);
            steps.push((b, d));
            if repeat {
                return Ok(Escalation { steps, stable_at: Some(b) });
            }
        }
        Ok(Escalation { steps, stable_at: None })
    }
}

/// A hypothesis the results depend on, with whether it was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub name: String,
    pub statement: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rerun {
    pub prime: u64,
    pub ring: String,
    pub rank: usize,
    /// Rank here minus the rank over the base ring.
    pub difference: i64,
    pub trace: Vec<CutRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub ring: String,
    pub weight: WeightVector,
    pub bound: u64,
    pub mode: String,
    pub sturm: SturmPlan,
    pub initial_rank: usize,
    pub rank: usize,
    pub trace: Vec<CutRecord>,
    pub pivots: Vec<PivotRecord>,
    /// Primes dividing a recorded pivot, outside the inverted set.
    pub exceptional_primes: Vec<u64>,
    pub inverted_primes: Vec<u64>,
    pub assumptions: Vec<Assumption>,
    pub reruns: Vec<Rerun>,
    pub notes: Vec<String>,
}

impl StabilityReport {
    /// Plain text summary.
    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("ring {}  weight {}  precision {} ({})\n", self.ring, self.weight, self.bound, self.mode));
        s.push_str(&format!("rank {} -> {}\n", self.initial_rank, self.rank));
        for c in &self.trace {
            s.push_str(&format!("  cut at {} (norm {}): {} -> {}\n", c.ideal, c.norm, c.rank_before, c.rank_after));
        }
        let l: Vec<String> = self.exceptional_primes.iter().map(|p| p.to_string()).collect();
        s.push_str(&format!("exceptional primes: {{{}}}\n", l.join(", ")));
        let inv: Vec<String> = self.inverted_primes.iter().map(|p| p.to_string()).collect();
        s.push_str(&format!("inverted primes: {{{}}}\n", inv.join(", ")));
        for r in &self.reruns {
            s.push_str(&format!("  mod {}: rank {} (difference {:+})\n", r.prime, r.rank, r.difference));
        }
        for a in &self.assumptions {
            s.push_str(&format!("assumption [{}] {}: {}\n", if a.verified { "checked" } else { "unverified" }, a.name, a.statement));
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}

/// Inputs of a run over `Z[1/S]` and its reductions.
#[derive(Clone, Debug)]
pub struct MultiRun {
    /// The multiplier `E` of weight `k'`.
    pub multiplier: AdelicSeries<AnyRing>,
    /// A basis of forms of weight `k + k'`.
    pub basis: Vec<AdelicSeries<AnyRing>>,
    pub level: IdealHNF,
    /// Character of the weight `k` space.
    pub character: IdealCharacter<AnyRing>,
    pub bound: u64,
    pub schedule: Option<Vec<IdealHNF>>,
    /// Primes to rerun at besides the exceptional ones.
    pub extra_primes: Vec<u64>,
}

pub struct MultiOutcome {
    pub report: StabilityReport,
    pub base: CandidateSpace<AnyRing>,
    pub reruns: Vec<(u64, CandidateSpace<AnyRing>)>,
}

/// `Z[1/S]` with `S` the primes of the level norm and of the numerators and
/// denominators of the multiplier's constant terms.
pub fn base_ring(level_norm: u64, constants: &[BigRational]) -> AnyRing {
    let mut s: Vec<u64> = arith::factor_u64(level_norm).into_iter().map(|(p, _)| p).collect();
    for c in constants {
        for n in [c.numer(), c.denom()] {
            if *n != BigInt::from(0) {
                s.extend(arith::prime_divisors_big(n));
            }
        }
    }
    AnyRing::Loc(LocalizedIntegers::inverting(&s))
}

fn stable_space(run: &MultiRun, ring: &AnyRing) -> Result<(usize, CandidateSpace<AnyRing>)> {
    let e = run.multiplier.map_ring(ring)?;
    let basis = run.basis.iter().map(|g| g.map_ring(ring)).collect::<Result<Vec<_>>>()?;
    let chi = run.character.map_ring(ring)?;
    let hctx = HeckeContext::new(run.level.clone(), chi);
    let v0 = candidate_space(&e, &basis, run.bound)?;
    let v = largest_stable_submodule(&v0, &hctx, run.schedule.as_deref())?;
    Ok((v0.rank(), v))
}

/// Runs the stability algorithm over the base ring, lists the exceptional
/// primes, and reruns over `F_p` for each of them and each requested prime.
pub fn run_multicharacteristic(run: &MultiRun) -> Result<MultiOutcome> {
    let base_ring = run.multiplier.ring().clone();
    if !base_ring.is_pid() {
        return Err(Error::Unsupported(format!("multi-characteristic runs need Z[1/S], got {}", base_ring.descriptor())));
    }
    let kp = run.multiplier.weight();
    let total = run.basis.first().ok_or_else(|| Error::InsufficientData("empty basis".into()))?.weight();
    if !kp.is_parallel() || !total.is_parallel() {
        return Err(Error::Unsupported("multi-characteristic runs need parallel weights".into()));
    }
    let (initial_rank, base) = stable_space(run, &base_ring)?;
    let exceptional: Vec<u64> = base.pivot_primes().into_iter().collect();
    let inverted = base_ring.inverted_primes();
    let mut notes = Vec::new();
    let mut primes: Vec<u64> = exceptional.iter().chain(&run.extra_primes).copied().collect();
    primes.sort_unstable();
    primes.dedup();
    primes.retain(|p| {
        let keep = !inverted.contains(p);
        if !keep {
            notes.push(format!("{p} is inverted in the base ring; no rerun"));
        }
        keep
    });
    let reruns = primes
        .par_iter()
        .map(|&p| Ok((p, stable_space(run, &AnyRing::prime_field(p)?)?.1)))
        .collect::<Result<Vec<_>>>()?;

    let level_norm = run.level.norm_u64().ok_or_else(|| Error::Mismatch("level must be integral".into()))?;
    let k = total.k1 - kp.k1;
    let sturm = sturm_heuristic(k, kp.k1, level_norm);
    let certified = sturm.is_certified(run.bound);
    let mut surjectivity = format!(
        "reduction of weight {} forms of level {} from {} to F_p is surjective for the primes considered",
        total,
        run.level.label(),
        base_ring.descriptor()
    );
    if total.k1 == 2 {
        surjectivity.push_str("; no such result is proven for parallel weight 2");
    }
    let assumptions = vec![
        Assumption { name: "surjectivity".into(), statement: surjectivity, verified: false },
        Assumption {
            name: "sturm".into(),
            statement: format!("precision {} exceeds the Sturm bound mod p (known bound {})", run.bound, sturm.hard_bound),
            verified: certified,
        },
        Assumption {
            name: "hecke-generation".into(),
            statement: "the operators T_m with N(m)^2 <= B generate the Hecke algebra".into(),
            verified: false,
        },
    ];
    let report = StabilityReport {
        ring: base_ring.descriptor(),
        weight: base.weight(),
        bound: run.bound,
        mode: sturm.mode(run.bound).into(),
        sturm,
        initial_rank,
        rank: base.rank(),
        trace: base.log().to_vec(),
        pivots: base.pivot_log().to_vec(),
        exceptional_primes: exceptional,
        inverted_primes: inverted,
        assumptions,
        reruns: reruns
            .iter()
            .map(|(p, v)| Rerun {
                prime: *p,
                ring: v.ring().descriptor(),
                rank: v.rank(),
                difference: v.rank() as i64 - base.rank() as i64,
                trace: v.log().to_vec(),
            })
            .collect(),
        notes,
    };
    Ok(MultiOutcome { report, base, reruns })
}
