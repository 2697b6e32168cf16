use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::IdealCharacter;
use crate::coeff_ring::matrix::Matrix;
use crate::coeff_ring::{AnyRing, Ring};
use crate::error::{Error, Result};
use crate::hecke::{hecke_apply, HeckeContext};
use crate::ideals::IdealHNF;
use crate::qexp::{AdelicSeries, SeriesContext, WeightVector};
use crate::quad_field::QuadraticField;
use crate::stability::span_contains;

use super::character::parse_character;
use super::series_json::{class_labels, context_for, payload, read_payload, CoeffEntry};

/// Parameters shared by every series of a basis file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisHeader {
    pub field: i64,
    /// Label of the level.
    pub level: String,
    pub weight: WeightVector,
    /// Character description, see [`parse_character`].
    pub character: String,
    pub bound: u64,
    pub ring: String,
    #[serde(default)]
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesPayload {
    pub constant: Vec<String>,
    pub coeffs: Vec<CoeffEntry>,
}

/// A basis of a space of forms computed elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFile {
    pub header: BasisHeader,
    pub series: Vec<SeriesPayload>,
    #[serde(default)]
    pub cuspidal: bool,
}

/// A materialized basis file.
#[derive(Clone, Debug)]
pub struct Basis {
    pub ctx: Arc<SeriesContext>,
    pub ring: AnyRing,
    pub level: IdealHNF,
    pub character: IdealCharacter<AnyRing>,
    pub weight: WeightVector,
    pub bound: u64,
    pub series: Vec<AdelicSeries<AnyRing>>,
    pub cuspidal: bool,
}

impl Basis {
    pub fn hecke_context(&self) -> HeckeContext<AnyRing> {
        HeckeContext::new(self.level.clone(), self.character.clone())
    }
}

/// Outcome of the spot check `T_p g in span(basis) mod q^{B/N p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureCheck {
    pub series: usize,
    pub prime: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisValidation {
    pub vectors: usize,
    pub closure: Vec<ClosureCheck>,
}

impl BasisValidation {
    pub fn closure_passed(&self) -> bool {
        self.closure.iter().all(|c| c.passed)
    }
}

impl BasisFile {
    /// Writes the given series (which must share context, ring, weight and
    /// precision) under a header.
    pub fn from_series(level: &IdealHNF, character: &str, series: &[AdelicSeries<AnyRing>], cuspidal: bool) -> Result<Self> {
        let first = series.first().ok_or_else(|| Error::InsufficientData("empty basis".into()))?;
        for s in series {
            first.check_compatible(s)?;
            if s.weight() != first.weight() {
                return Err(Error::Mismatch(format!("weights {} and {}", first.weight(), s.weight())));
            }
        }
        let ctx = first.context();
        let header = BasisHeader {
            field: ctx.field().d(),
            level: level.label(),
            weight: first.weight(),
            character: character.into(),
            bound: first.bound(),
            ring: first.ring().descriptor(),
            classes: class_labels(ctx),
        };
        let series = series
            .iter()
            .map(|s| {
                let (constant, coeffs) = payload(s);
                SeriesPayload { constant, coeffs }
            })
            .collect();
        Ok(BasisFile { header, series, cuspidal })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn materialize(&self) -> Result<Basis> {
        let h = &self.header;
        let field = QuadraticField::new(h.field)?;
        let ctx = context_for(&field, &h.classes, h.bound)?;
        self.materialize_in(&ctx)
    }

    pub fn materialize_in(&self, ctx: &Arc<SeriesContext>) -> Result<Basis> {
        let h = &self.header;
        if ctx.field().d() != h.field {
            return Err(Error::Mismatch(format!("basis over d = {}, context over d = {}", h.field, ctx.field().d())));
        }
        let ring = AnyRing::from_descriptor(&h.ring)?;
        let level = IdealHNF::parse_label(ctx.field(), &h.level)?;
        let character = parse_character(&h.character, &ring, ctx.classes())?;
        let series = self
            .series
            .iter()
            .enumerate()
            .map(|(i, p)| {
                read_payload(ctx, &ring, h.weight, h.bound, &p.constant, &p.coeffs).map_err(|e| match e {
                    Error::Parse(m) => Error::Parse(format!("series {i}: {m}")),
                    Error::Validation(m) => Error::Validation(format!("series {i}: {m}")),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Basis { ctx: ctx.clone(), ring, level, character, weight: h.weight, bound: h.bound, series, cuspidal: self.cuspidal })
    }
}

/// `T_p g` for each basis vector and each given prime, tested for
/// membership in the span of the truncated basis.
pub fn check_closure(basis: &Basis, primes: &[IdealHNF]) -> Result<Vec<ClosureCheck>> {
    let hctx = basis.hecke_context();
    let mut out = Vec::new();
    for p in primes {
        let mut truncated: Option<Matrix<_>> = None;
        for (i, g) in basis.series.iter().enumerate() {
            let image = hecke_apply(&hctx, p, g)?;
            let m = truncated.get_or_insert_with(|| {
                let cols: Vec<_> = basis.series.iter().map(|s| s.truncate(image.bound()).expect("lower precision").to_vector()).collect();
                Matrix::from_columns(&cols, image.to_vector().len())
            });
            out.push(ClosureCheck { series: i, prime: p.label(), passed: span_contains(&basis.ring, m, &image.to_vector())? });
        }
    }
    Ok(out)
}

/// Reads and validates a basis file. The closure check uses the prime
/// ideals among the first `closure_primes` of norm below the precision.
pub fn ingest_basis(path: &Path, closure_primes: usize) -> Result<(Basis, BasisValidation)> {
    let basis = BasisFile::load(path)?.materialize()?;
    let primes: Vec<IdealHNF> = basis
        .ctx
        .table()
        .primes()
        .iter()
        .filter(|p| p.norm < basis.bound)
        .take(closure_primes)
        .map(|p| p.ideal.clone())
        .collect();
    let closure = check_closure(&basis, &primes)?;
    let validation = BasisValidation { vectors: basis.series.len(), closure };
    Ok((basis, validation))
}
