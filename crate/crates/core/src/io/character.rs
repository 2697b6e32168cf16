use std::sync::Arc;

use crate::characters::IdealCharacter;
use crate::coeff_ring::{AnyRing, Ring};
use crate::error::{Error, Result};
use crate::ideals::{IdealHNF, NarrowClassData};

/// Parses a character description.
///
/// * `trivial`, `trivial@LABEL`
/// * `class:v0,v1,...` with one ring value per narrow class, optionally
///   `@LABEL` to make it vanish on the primes of that ideal
/// * `quadratic:LABEL` or `quadratic:LABEL:s1,...` with signs on the
///   non-trivial classes
/// * products `A*B`
pub fn parse_character(spec: &str, ring: &AnyRing, classes: &Arc<NarrowClassData>) -> Result<IdealCharacter<AnyRing>> {
    let mut parts = spec.split('*');
    let first = parts.next().ok_or_else(|| Error::Parse("empty character".into()))?;
    let mut chi = parse_one(first.trim(), ring, classes)?;
    for p in parts {
        chi = chi.mul(&parse_one(p.trim(), ring, classes)?);
    }
    Ok(chi)
}

fn parse_one(spec: &str, ring: &AnyRing, classes: &Arc<NarrowClassData>) -> Result<IdealCharacter<AnyRing>> {
    let field = classes.field();
    let (body, modulus) = match spec.split_once('@') {
        Some((b, m)) => (b, IdealHNF::parse_label(field, m)?),
        None => (spec, IdealHNF::unit()),
    };
    let bad = || Error::Parse(format!("bad character {spec:?}"));
    if body == "trivial" {
        return Ok(IdealCharacter::trivial(ring.clone(), field, modulus));
    }
    let (kind, rest) = body.split_once(':').ok_or_else(bad)?;
    match kind {
        "class" => {
            let values = rest.split(',').map(|v| ring.parse(v.trim())).collect::<Result<Vec<_>>>()?;
            IdealCharacter::class_character(ring.clone(), classes.clone(), modulus, values)
        }
        "quadratic" => {
            if !modulus.is_unit_ideal() {
                return Err(Error::Parse(format!("quadratic characters take their modulus from the prime: {spec:?}")));
            }
            let (label, signs) = match rest.split_once(':') {
                Some((l, s)) => (l, s.split(',').map(|x| x.trim().parse::<i8>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?),
                None => (rest, Vec::new()),
            };
            IdealCharacter::quadratic(ring.clone(), classes.clone(), IdealHNF::parse_label(field, label)?, &signs)
        }
        _ => Err(bad()),
    }
}
