use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff_ring::{AnyRing, Ring};
use crate::eisenstein::{eisenstein_series, EisensteinSpec};
use crate::error::{Error, Result};
use crate::ideals::IdealHNF;
use crate::qexp::{AdelicSeries, SeriesContext};
use crate::quad_field::{parse_rational, QuadraticField};
use crate::stability::{base_ring, MultiRun};

use super::basis::{BasisFile, Basis};
use super::character::parse_character;
use super::series_json::{context_for, SeriesJson};

/// The multiplier `E` of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MultiplierSpec {
    /// `scale * E_k(eta, psi)` with the given constant terms.
    Eisenstein {
        eta: String,
        psi: String,
        k: i64,
        constant: Vec<String>,
        #[serde(default)]
        scale: Option<String>,
    },
    /// A series JSON file.
    File { path: PathBuf },
}

/// A stability run read from JSON. Paths are relative to the config file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: i64,
    pub level: String,
    /// Character of the weight `k` space.
    pub character: String,
    pub multiplier: MultiplierSpec,
    /// Basis file of weight `k + k'`.
    pub basis: PathBuf,
    /// Ring descriptor, or `auto` for `Z[1/S]` from the level and the
    /// multiplier's constant terms.
    #[serde(default = "auto")]
    pub ring: String,
    pub bound: u64,
    #[serde(default)]
    pub classes: Vec<String>,
    /// Labels overriding the default operator schedule.
    #[serde(default)]
    pub schedule: Option<Vec<String>>,
    /// Extra primes for the per-prime reruns.
    #[serde(default)]
    pub primes: Vec<u64>,
    /// Optional basis file of weight `2k` for the squaring test.
    #[serde(default)]
    pub square_basis: Option<PathBuf>,
}

fn auto() -> String {
    "auto".into()
}

/// Everything a run needs, over one ring.
#[derive(Clone, Debug)]
pub struct LoadedRun {
    pub ctx: Arc<SeriesContext>,
    pub run: MultiRun,
    pub square_basis: Option<Vec<AdelicSeries<AnyRing>>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let cfg = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, dir))
    }

    fn multiplier_over_q(&self, ctx: &Arc<SeriesContext>, dir: &Path) -> Result<AdelicSeries<AnyRing>> {
        let q = AnyRing::rationals();
        match &self.multiplier {
            MultiplierSpec::Eisenstein { eta, psi, k, constant, scale } => {
                let eta = parse_character(eta, &q, ctx.classes())?;
                let psi = parse_character(psi, &q, ctx.classes())?;
                let constant = constant.iter().map(|c| q.parse(c)).collect::<Result<Vec<_>>>()?;
                let e = eisenstein_series(ctx, &EisensteinSpec { eta, psi, k: *k, constant, bound: self.bound })?;
                Ok(match scale {
                    Some(s) => e.scale(&q.parse(s)?),
                    None => e,
                })
            }
            MultiplierSpec::File { path } => {
                let text = std::fs::read_to_string(dir.join(path)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let json = SeriesJson::from_json(&text)?;
                let e = json.to_series_in(&self.reading_context(ctx, json.bound)?)?;
                e.truncate(self.bound)?.in_context(ctx)?.map_ring(&q)
            }
        }
    }

    /// Files may be more precise than the run; they are read in a context of
    /// their own precision and then truncated.
    fn reading_context(&self, ctx: &Arc<SeriesContext>, file_bound: u64) -> Result<Arc<SeriesContext>> {
        if file_bound <= ctx.bound() {
            return Ok(ctx.clone());
        }
        context_for(ctx.field(), &self.classes, file_bound)
    }

    fn load_basis(&self, ctx: &Arc<SeriesContext>, path: &Path, ring: &AnyRing) -> Result<Basis> {
        let file = BasisFile::load(path)?;
        let mut b = file.materialize_in(&self.reading_context(ctx, file.header.bound)?)?;
        b.series = b.series.iter().map(|s| s.truncate(self.bound)?.in_context(ctx)?.map_ring(ring)).collect::<Result<Vec<_>>>()?;
        b.ctx = ctx.clone();
        b.bound = self.bound;
        b.ring = ring.clone();
        Ok(b)
    }

    /// Builds the run. `ring` overrides the configured ring.
    pub fn build(&self, dir: &Path, ring: Option<&str>) -> Result<LoadedRun> {
        let field = QuadraticField::new(self.field)?;
        let ctx = context_for(&field, &self.classes, self.bound)?;
        let level = IdealHNF::parse_label(&field, &self.level)?;
        let e_q = self.multiplier_over_q(&ctx, dir)?;
        let ring = match ring.unwrap_or(&self.ring) {
            "auto" => {
                let consts: Vec<BigRational> = e_q.constants().iter().map(|c| parse_rational(&AnyRing::rationals().format(c))).collect::<Result<_>>()?;
                let n = level.norm_u64().ok_or_else(|| Error::Validation("level must be integral".into()))?;
                base_ring(n, &consts)
            }
            d => AnyRing::from_descriptor(d)?,
        };
        let multiplier = e_q.map_ring(&ring)?;
        let basis = self.load_basis(&ctx, &dir.join(&self.basis), &ring)?;
        let square_basis = match &self.square_basis {
            Some(p) => Some(self.load_basis(&ctx, &dir.join(p), &ring)?.series),
            None => None,
        };
        let character = parse_character(&self.character, &ring, ctx.classes())?;
        let schedule = self
            .schedule
            .as_ref()
            .map(|s| s.iter().map(|l| IdealHNF::parse_label(&field, l)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let run = MultiRun {
            multiplier,
            basis: basis.series,
            level,
            character,
            bound: self.bound,
            schedule,
            extra_primes: self.primes.clone(),
        };
        Ok(LoadedRun { ctx, run, square_basis })
    }
}
