use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff_ring::{AnyRing, Ring};
use crate::error::{Error, Result};
use crate::ideals::{IdealHNF, NarrowClassData};
use crate::qexp::{AdelicSeries, SeriesContext, WeightVector};
use crate::quad_field::QuadraticField;

/// A coefficient `a_m` keyed by the label of `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub ideal: String,
    pub value: String,
}

/// Exchange form of one series. Values are exact strings in the ring;
/// ideals absent from `coeffs` have coefficient 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub field: i64,
    pub weight: WeightVector,
    pub ring: String,
    pub bound: u64,
    /// Labels of the narrow class representatives, in class order.
    pub classes: Vec<String>,
    pub constant: Vec<String>,
    pub coeffs: Vec<CoeffEntry>,
}

/// Context for `field` whose class representatives have the given labels
/// (the default representatives when `classes` is empty).
pub fn context_for(field: &QuadraticField, classes: &[String], bound: u64) -> Result<Arc<SeriesContext>> {
    let default = NarrowClassData::new(field);
    let labels: Vec<String> = default.representatives().iter().map(|r| r.label()).collect();
    if classes.is_empty() || classes == labels.as_slice() {
        return Ok(SeriesContext::with_classes(Arc::new(default), bound));
    }
    let reps = classes.iter().map(|l| IdealHNF::parse_label(field, l)).collect::<Result<Vec<_>>>()?;
    let data = NarrowClassData::with_representatives(field, field.fundamental_unit(), reps)
        .ok_or_else(|| Error::InvalidRepresentative(format!("{classes:?} is not a system of narrow class representatives")))?;
    Ok(SeriesContext::with_classes(Arc::new(data), bound))
}

pub(crate) fn class_labels(ctx: &SeriesContext) -> Vec<String> {
    ctx.classes().representatives().iter().map(|r| r.label()).collect()
}

/// Constants and nonzero coefficients of `f` as strings.
pub(crate) fn payload<R: Ring>(f: &AdelicSeries<R>) -> (Vec<String>, Vec<CoeffEntry>) {
    let r = f.ring();
    let constant = f.constants().iter().map(|c| r.format(c)).collect();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, v)| !r.is_zero(v))
        .map(|(i, v)| CoeffEntry { ideal: f.ideal(i).label(), value: r.format(v) })
        .collect();
    (constant, coeffs)
}

/// Reads a payload in `ctx`, checking labels, norms and ring membership.
/// Errors name the offending ideal.
pub(crate) fn read_payload(
    ctx: &Arc<SeriesContext>,
    ring: &AnyRing,
    weight: WeightVector,
    bound: u64,
    constant: &[String],
    coeffs: &[CoeffEntry],
) -> Result<AdelicSeries<AnyRing>> {
    let field = ctx.field();
    if constant.len() != ctx.h_plus() {
        return Err(Error::Mismatch(format!("{} constant terms for {} narrow classes", constant.len(), ctx.h_plus())));
    }
    let constant = constant
        .iter()
        .enumerate()
        .map(|(i, c)| ring.parse(c).map_err(|e| Error::Parse(format!("constant term of class {i}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = BTreeSet::new();
    let mut values = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let id = IdealHNF::parse_label(field, &c.ideal).map_err(|e| Error::Parse(format!("ideal {}: {e}", c.ideal)))?;
        match id.norm_u64().filter(|_| id.is_integral()) {
            Some(n) if n >= 1 && n < bound => {}
            _ => return Err(Error::Validation(format!("ideal {} has norm {} outside [1, {bound})", c.ideal, id.norm()))),
        }
        if !seen.insert(id.clone()) {
            return Err(Error::Validation(format!("ideal {} listed twice", c.ideal)));
        }
        let v = ring.parse(&c.value).map_err(|e| Error::Parse(format!("coefficient at ideal {}: {e}", c.ideal)))?;
        values.push((id, v));
    }
    AdelicSeries::from_ideal_values(ctx, ring, weight, bound, constant, values)
}

impl SeriesJson {
    pub fn from_series<R: Ring>(f: &AdelicSeries<R>) -> Self {
        let ctx = f.context();
        let (constant, coeffs) = payload(f);
        SeriesJson {
            field: ctx.field().d(),
            weight: f.weight(),
            ring: f.ring().descriptor(),
            bound: f.bound(),
            classes: class_labels(ctx),
            constant,
            coeffs,
        }
    }

    /// Materializes the series in a fresh context.
    pub fn to_series(&self) -> Result<AdelicSeries<AnyRing>> {
        let field = QuadraticField::new(self.field)?;
        let ctx = context_for(&field, &self.classes, self.bound)?;
        self.to_series_in(&ctx)
    }

    /// Materializes the series in an existing context, which must use the
    /// same field and representatives.
    pub fn to_series_in(&self, ctx: &Arc<SeriesContext>) -> Result<AdelicSeries<AnyRing>> {
        if ctx.field().d() != self.field {
            return Err(Error::Mismatch(format!("series over d = {}, context over d = {}", self.field, ctx.field().d())));
        }
        if !self.classes.is_empty() && self.classes != class_labels(ctx) {
            return Err(Error::Mismatch("class representatives differ".into()));
        }
        let ring = AnyRing::from_descriptor(&self.ring)?;
        read_payload(ctx, &ring, self.weight, self.bound, &self.constant, &self.coeffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
