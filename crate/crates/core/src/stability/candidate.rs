use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::coeff_ring::matrix::{mat_mul, Matrix};
use crate::coeff_ring::{Ring, Solved, ZeroDivisor};
use crate::error::{Error, Result};
use crate::hecke::{hecke_apply, hecke_bound, HeckeContext};
use crate::ideals::IdealHNF;
use crate::qexp::{AdelicSeries, SeriesContext, WeightVector};

/// One applied cut `V <- {v in V : T_m v in pi(V)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRecord {
    pub ideal: String,
    pub norm: u64,
    pub rank_before: usize,
    pub rank_after: usize,
}

/// Non-unit SNF pivots met in one linear solve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotRecord {
    pub stage: String,
    pub pivots: Vec<String>,
}

/// A module of truncated series given by a basis matrix whose rows are the
/// coefficient slots (constants first, then ideals by norm).
#[derive(Clone, Debug)]
pub struct CandidateSpace<R: Ring> {
    ctx: Arc<SeriesContext>,
    ring: R,
    weight: WeightVector,
    bound: u64,
    basis: Matrix<R::Elem>,
    log: Vec<CutRecord>,
    pivots: Vec<PivotRecord>,
}

fn lin<R: Ring, T>(ring: &R, r: std::result::Result<T, ZeroDivisor<R::Elem>>) -> Result<T> {
    r.map_err(|z| Error::NotInvertible(format!("{} in {}", ring.format(&z.0), ring.descriptor())))
}

impl<R: Ring> CandidateSpace<R> {
    /// The saturation (over a field: the span) of the given columns.
    pub fn from_columns(ctx: &Arc<SeriesContext>, ring: &R, weight: WeightVector, bound: u64, columns: &Matrix<R::Elem>) -> Result<Self> {
        let rows = ctx.h_plus() + ctx.slots_below(bound);
        if columns.rows() != rows {
            return Err(Error::Mismatch(format!("{} rows for {rows} slots", columns.rows())));
        }
        let mut space = CandidateSpace {
            ctx: ctx.clone(),
            ring: ring.clone(),
            weight,
            bound,
            basis: Matrix::from_columns(&[], rows),
            log: Vec::new(),
            pivots: Vec::new(),
        };
        let Solved { basis, pivots } = lin(ring, ring.saturate(columns))?;
        space.record("initial saturation", pivots);
        space.basis = if basis.cols() == 0 { Matrix::from_columns(&[], rows) } else { basis };
        Ok(space)
    }

    pub fn from_series(series: &[AdelicSeries<R>]) -> Result<Self> {
        let first = series.first().ok_or_else(|| Error::InsufficientData("no series given".into()))?;
        for s in series {
            first.check_compatible(s)?;
            if s.weight() != first.weight() {
                return Err(Error::Mismatch(format!("weights {} and {}", first.weight(), s.weight())));
            }
        }
        let cols: Vec<_> = series.iter().map(|s| s.to_vector()).collect();
        let rows = cols[0].len();
        Self::from_columns(first.context(), first.ring(), first.weight(), first.bound(), &Matrix::from_columns(&cols, rows))
    }

    fn record(&mut self, stage: &str, pivots: Vec<BigInt>) {
        if !pivots.is_empty() {
            self.pivots.push(PivotRecord { stage: stage.into(), pivots: pivots.iter().map(|p| p.to_string()).collect() });
        }
    }

    pub fn context(&self) -> &Arc<SeriesContext> {
        &self.ctx
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn weight(&self) -> WeightVector {
        self.weight
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn basis(&self) -> &Matrix<R::Elem> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Cuts applied so far.
    pub fn log(&self) -> &[CutRecord] {
        &self.log
    }

    pub fn pivot_log(&self) -> &[PivotRecord] {
        &self.pivots
    }

    pub fn series(&self, j: usize) -> Result<AdelicSeries<R>> {
        AdelicSeries::from_vector(&self.ctx, &self.ring, self.weight, self.bound, self.basis.column(j))
    }

    pub fn all_series(&self) -> Result<Vec<AdelicSeries<R>>> {
        (0..self.rank()).map(|j| self.series(j)).collect()
    }

    /// Whether `f` lies in the module (over a field: in the span).
    pub fn contains(&self, f: &AdelicSeries<R>) -> Result<bool> {
        let v = f.truncate(self.bound)?.to_vector();
        span_contains(&self.ring, &self.basis, &v)
    }

    /// Primes dividing a recorded pivot, minus the inverted ones.
    pub fn pivot_primes(&self) -> BTreeSet<u64> {
        let inverted = self.ring.inverted_primes();
        self.pivots
            .iter()
            .flat_map(|r| r.pivots.iter())
            .flat_map(|p| arith::prime_divisors_big(&p.parse::<BigInt>().expect("pivots are printed integers")))
            .filter(|p| !inverted.contains(p))
            .collect()
    }

    /// Rows of the basis for slots below `b`, i.e. the truncation map.
    fn truncated(&self, b: u64) -> Matrix<R::Elem> {
        self.basis.top_rows(self.ctx.h_plus() + self.ctx.slots_below(b))
    }

    /// `T_m` applied to every basis vector, as columns.
    fn images(&self, hctx: &HeckeContext<R>, m: &IdealHNF) -> Result<Matrix<R::Elem>> {
        let rows = self.ctx.h_plus() + self.ctx.slots_below(hecke_bound(self.bound, m.norm_u64().unwrap_or(u64::MAX)));
        let cols = (0..self.rank())
            .into_par_iter()
            .map(|j| Ok(hecke_apply(hctx, m, &self.series(j)?)?.to_vector()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(&cols, rows))
    }

    /// `{v in V : T_m v in pi_{B/N m}(V)}`, saturated over a PID. Returns the
    /// new rank; the basis only changes when the rank drops.
    pub fn solve_saturated_preimage(&mut self, hctx: &HeckeContext<R>, m: &IdealHNF) -> Result<usize> {
        let ring = self.ring.clone();
        let r = self.rank();
        if r == 0 {
            return Ok(0);
        }
        let norm = m.norm_u64().ok_or_else(|| Error::Mismatch(format!("{} is not integral", m.label())))?;
        let images = self.images(hctx, m)?;
        let target = self.truncated(hecke_bound(self.bound, norm));
        let system = images.hcat(&target.map(|x| ring.neg(x)));
        let Solved { basis: kernel, pivots } = lin(&ring, ring.kernel(&system))?;
        self.record(&format!("T{} preimage", m.label()), pivots);
        let coords = kernel.top_rows(r);
        let preimage = mat_mul(&ring, &self.basis, &coords);
        let Solved { basis, pivots } = lin(&ring, ring.saturate(&preimage))?;
        self.record(&format!("T{} saturation", m.label()), pivots);
        let after = basis.cols();
        if after < r {
            self.log.push(CutRecord { ideal: m.label(), norm, rank_before: r, rank_after: after });
            self.basis = if after == 0 { Matrix::from_columns(&[], self.basis.rows()) } else { basis };
        }
        Ok(after)
    }

    /// Replaces the entries through `f`, keeping the log. Used to move a
    /// space into another ring without re-solving.
    pub fn map_entries<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<CandidateSpace<S>> {
        Ok(CandidateSpace {
            ctx: self.ctx.clone(),
            ring: target.clone(),
            weight: self.weight,
            bound: self.bound,
            basis: self.basis.try_map(f)?,
            log: self.log.clone(),
            pivots: self.pivots.clone(),
        })
    }
}

/// Whether `v` lies in the column module of `basis`. Over a PID this uses
/// the saturated kernel of `[basis | v]`: `v` is in the module exactly when
/// the last coordinates of the kernel generate the unit ideal.
pub fn span_contains<R: Ring>(ring: &R, basis: &Matrix<R::Elem>, v: &[R::Elem]) -> Result<bool> {
    if v.iter().all(|x| ring.is_zero(x)) {
        return Ok(true);
    }
    if basis.cols() == 0 {
        return Ok(false);
    }
    let aug = basis.hcat(&Matrix::from_columns(&[v.to_vec()], v.len()));
    let k = lin(ring, ring.kernel(&aug))?.basis;
    let last: Vec<R::Elem> = (0..k.cols()).map(|j| k.get(basis.cols(), j).clone()).collect();
    if last.iter().all(|x| ring.is_zero(x)) {
        return Ok(false);
    }
    if ring.is_field() {
        return Ok(true);
    }
    if !ring.is_pid() {
        return Err(Error::Unsupported(format!("membership over {}", ring.descriptor())));
    }
    Ok(ring.snf_pivots(&Matrix::from_rows(vec![last.clone()], last.len())).is_empty())
}

/// Columns `E^{-1} g_i` truncated to `bound`, saturated. The weight is the
/// weight of the `g_i` minus that of `E`.
pub fn candidate_space<R: Ring>(e: &AdelicSeries<R>, basis: &[AdelicSeries<R>], bound: u64) -> Result<CandidateSpace<R>> {
    let ring = e.ring();
    let weight = match basis.first() {
        Some(g) => g.weight(),
        None => return Err(Error::InsufficientData("empty basis".into())),
    };
    for g in basis {
        if g.weight() != weight {
            return Err(Error::Mismatch(format!("basis weights {} and {}", weight, g.weight())));
        }
    }
    for (lambda, c) in e.constants().iter().enumerate() {
        if ring.inv(c).is_none() {
            return Err(Error::NotInvertible(format!("constant term {} of the multiplier at class {lambda}", ring.format(c))));
        }
    }
    let inv = e.truncate(bound)?.invert()?;
    let cols = basis
        .par_iter()
        .map(|g| {
            let g = g.truncate(bound)?;
            inv.check_compatible(&g)?;
            Ok(inv.mul(&g)?.to_vector())
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = cols[0].len();
    let k = WeightVector::new(weight.k1 - e.weight().k1, weight.k2 - e.weight().k2);
    CandidateSpace::from_columns(e.context(), ring, k, bound, &Matrix::from_columns(&cols, rows))
}

/// All integral ideals `m != O` with `N(m)^2 <= B`, by norm.
pub fn default_schedule(ctx: &SeriesContext, bound: u64) -> Vec<IdealHNF> {
    let table = ctx.table();
    (0..ctx.slots_below(bound))
        .filter(|&i| {
            let n = table.norm(i);
            n > 1 && n * n <= bound
        })
        .map(|i| table.ideal(i).clone())
        .collect()
}

/// Largest submodule stable under the scheduled operators. Sweeps the
/// schedule in order and restarts after every cut; stops after a sweep
/// without cuts.
pub fn largest_stable_submodule<R: Ring>(
    v0: &CandidateSpace<R>,
    hctx: &HeckeContext<R>,
    schedule: Option<&[IdealHNF]>,
) -> Result<CandidateSpace<R>> {
    let default;
    let schedule = match schedule {
        Some(s) => s,
        None => {
            default = default_schedule(&v0.ctx, v0.bound);
            &default
        }
    };
    let mut v = v0.clone();
    'sweep: loop {
        for m in schedule {
            if v.rank() == 0 {
                break 'sweep;
            }
            let before = v.rank();
            if v.solve_saturated_preimage(hctx, m)? < before {
                continue 'sweep;
            }
        }
        break;
    }
    Ok(v)
}

/// Primes dividing a recorded SNF pivot, minus the inverted primes. Empty
/// for runs over fields, which record no pivots.
pub fn prime_list<R: Ring>(run: &CandidateSpace<R>) -> BTreeSet<u64> {
    run.pivot_primes()
}
