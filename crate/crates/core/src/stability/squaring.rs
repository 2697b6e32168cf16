use serde::{Deserialize, Serialize};

use crate::coeff_ring::matrix::Matrix;
use crate::coeff_ring::Ring;
use crate::error::{Error, Result};
use crate::qexp::AdelicSeries;

use super::candidate::span_contains;

/// Outcome of the holomorphy test on a candidate series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verification {
    /// The square lies in the span of the supplied basis.
    Verified,
    Failed,
    /// No basis to test against: a candidate only.
    Unverified,
}

/// Tests whether `beta^2 mod q^B` lies in the span of the truncated basis of
/// weight `2k`. Without a basis the result is [`Verification::Unverified`].
pub fn squaring_test<R: Ring>(beta: &AdelicSeries<R>, basis: Option<&[AdelicSeries<R>]>, bound: u64) -> Result<Verification> {
    let Some(basis) = basis.filter(|b| !b.is_empty()) else {
        return Ok(Verification::Unverified);
    };
    let w = beta.weight() + beta.weight();
    for g in basis {
        if g.weight() != w {
            return Err(Error::Mismatch(format!("squaring basis has weight {}, expected {w}", g.weight())));
        }
    }
    let b = beta.truncate(bound)?;
    let square = b.mul(&b)?;
    let cols = basis
        .iter()
        .map(|g| {
            let g = g.truncate(bound)?;
            square.check_compatible(&g)?;
            Ok(g.to_vector())
        })
        .collect::<Result<Vec<_>>>()?;
    let target = square.to_vector();
    let m = Matrix::from_columns(&cols, target.len());
    Ok(if span_contains(beta.ring(), &m, &target)? { Verification::Verified } else { Verification::Failed })
}
