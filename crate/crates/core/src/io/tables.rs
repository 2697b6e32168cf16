use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff_ring::Ring;
use crate::error::{Error, Result};
use crate::ideals::IdealHNF;
use crate::quad_field::{IntElement, QuadraticField};
use crate::stability::Eigenform;

/// A generator `x + y w` of a principal ideal with the smallest coordinates,
/// or `None` if none is found in a modest box.
pub fn small_generator(field: &QuadraticField, ideal: &IdealHNF) -> Option<IntElement> {
    let norm = ideal.norm_u64()? as i128;
    for r in 0..=200i64 {
        // the ring of radius r, smallest |y| first, then nonnegative signs
        let mut cands = Vec::new();
        for y in -r..=r {
            for x in [-r, r] {
                cands.push((x, y));
            }
        }
        for x in -r + 1..r {
            for y in [-r, r] {
                cands.push((x, y));
            }
        }
        cands.sort_by_key(|&(x, y)| (y.abs(), x.abs(), y < 0, x < 0));
        cands.dedup();
        for (x, y) in cands {
            let a = IntElement::new(x, y);
            if (field.norm(&a) as i128).abs() == norm && IdealHNF::principal_int(field, &a).as_ref() == Some(ideal) {
                return Some(a);
            }
        }
    }
    None
}

/// One row of the eigenvalue table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenRow {
    pub norm: u64,
    pub ideal: String,
    pub generator: String,
    pub values: Vec<String>,
}

/// Frequency of one value; `counts[i]` is `(absolute, relative)` for form `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub value: String,
    pub counts: Vec<(u64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportTables {
    pub forms: usize,
    pub eigenvalues: Vec<EigenRow>,
    pub frequencies: Vec<FrequencyRow>,
    pub warnings: Vec<String>,
}

/// `a_p` of every form for the primes of norm `<= max_norm`, ordered by norm
/// then label, and the frequency of each value.
pub fn report_tables(field: &QuadraticField, forms: &[Eigenform], max_norm: u64) -> ReportTables {
    let mut warnings = Vec::new();
    let mut limit = max_norm;
    if let Some(b) = forms.iter().map(|f| f.series.bound()).min() {
        if max_norm >= b {
            warnings.push(format!("requested norms up to {max_norm} but coefficients are known below {b}; truncated"));
            limit = b - 1;
        }
    }
    let mut eigenvalues = Vec::new();
    if let Some(f0) = forms.first() {
        let ctx = f0.series.context();
        let table = ctx.table();
        let mut primes: Vec<_> = table.primes().iter().filter(|p| p.norm <= limit).collect();
        primes.sort_by_key(|p| (p.norm, p.ideal.label()));
        for p in primes {
            let slot = ctx.slot_of(&p.ideal).expect("prime below the precision");
            eigenvalues.push(EigenRow {
                norm: p.norm,
                ideal: p.ideal.label(),
                generator: small_generator(field, &p.ideal).map(|g| g.to_string()).unwrap_or_else(|| "-".into()),
                values: forms.iter().map(|f| f.ring.format(&f.series.coeffs()[slot])).collect(),
            });
        }
    }
    let total = eigenvalues.len() as u64;
    let mut counts: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for row in &eigenvalues {
        for (i, v) in row.values.iter().enumerate() {
            counts.entry(v.clone()).or_insert_with(|| vec![0; forms.len()])[i] += 1;
        }
    }
    let frequencies = counts
        .into_iter()
        .map(|(value, c)| FrequencyRow {
            value,
            counts: c.into_iter().map(|n| (n, BigRational::new(n.into(), total.max(1).into()).to_string())).collect(),
        })
        .collect();
    ReportTables { forms: forms.len(), eigenvalues, frequencies, warnings }
}

impl ReportTables {
    pub fn eigenvalue_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["norm".to_string(), "ideal".into(), "generator".into()];
        header.extend((1..=self.forms).map(|i| format!("f{i}")));
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.eigenvalues {
            let mut rec = vec![r.norm.to_string(), r.ideal.clone(), r.generator.clone()];
            rec.extend(r.values.iter().cloned());
            w.write_record(&rec).map_err(csv_err)?;
        }
        finish(w)
    }

    pub fn frequency_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["value".to_string()];
        for i in 1..=self.forms {
            header.push(format!("f{i}_abs"));
            header.push(format!("f{i}_rel"));
        }
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.frequencies {
            let mut rec = vec![r.value.clone()];
            for (a, rel) in &r.counts {
                rec.push(a.to_string());
                rec.push(rel.clone());
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        finish(w)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

/// Writes `eigenvalues.csv` and `frequencies.csv` into `dir`.
pub fn emit_tables(field: &QuadraticField, forms: &[Eigenform], max_norm: u64, dir: &Path) -> Result<(Vec<PathBuf>, ReportTables)> {
    let tables = report_tables(field, forms, max_norm);
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let a = dir.join("eigenvalues.csv");
    let b = dir.join("frequencies.csv");
    std::fs::write(&a, tables.eigenvalue_csv()?).map_err(|e| Error::Io(format!("{}: {e}", a.display())))?;
    std::fs::write(&b, tables.frequency_csv()?).map_err(|e| Error::Io(format!("{}: {e}", b.display())))?;
    Ok((vec![a, b], tables))
}
