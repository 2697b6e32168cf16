use crate::coeff_ring::matrix::{identity, kernel_field, mat_mul, rank, solve_field, Matrix};
use crate::coeff_ring::{poly, AnyElem, AnyRing, Extension, LinResult, Ring, ZeroDivisor};
use crate::error::{Error, Result};
use crate::hecke::{hecke_bound, hecke_matrix_in_basis, HeckeContext};
use crate::ideals::IdealHNF;
use crate::qexp::AdelicSeries;

use super::candidate::{default_schedule, CandidateSpace};
use super::squaring::{squaring_test, Verification};

/// A simultaneous eigenvector of the Hecke operators on a stable space.
#[derive(Clone, Debug)]
pub struct Eigenform {
    /// Coefficient ring, possibly an extension of the ring of the space.
    pub ring: AnyRing,
    /// `T_p` eigenvalues on the primes used for splitting, by norm.
    pub eigenvalues: Vec<(IdealHNF, AnyElem)>,
    pub series: AdelicSeries<AnyRing>,
    /// False when the coefficient at the unit ideal vanishes (or the
    /// eigenspace is not one-dimensional); the series is then left as found.
    pub normalized: bool,
    /// Dimension of the simultaneous eigenspace the form was taken from.
    pub eigenspace_dim: usize,
    pub verification: Verification,
}

/// How an element of the base field reaches a branch ring.
#[derive(Clone, Debug)]
enum Step {
    Embed { from: AnyRing, ext: Extension },
    Project { parent: AnyRing, child: AnyRing },
}

fn lift(steps: &[Step], a: &AnyElem) -> AnyElem {
    steps.iter().fold(a.clone(), |x, s| match s {
        Step::Embed { from, ext } => ext.embed(from, &x),
        Step::Project { parent, child } => child.project_from(parent, &x),
    })
}

fn lift_matrix(steps: &[Step], m: &Matrix<AnyElem>) -> Matrix<AnyElem> {
    m.map(|x| lift(steps, x))
}

#[derive(Clone, Debug)]
struct Branch {
    ring: AnyRing,
    steps: Vec<Step>,
    /// Coordinates of the eigenspace in the basis of the space, as columns.
    coords: Matrix<AnyElem>,
    eigenvalues: Vec<(usize, AnyElem)>,
    next: usize,
}

impl Branch {
    fn then(&self, step: Step, ring: AnyRing) -> Branch {
        let mut steps = self.steps.clone();
        steps.push(step.clone());
        let one = |x: &AnyElem| lift(std::slice::from_ref(&step), x);
        Branch {
            ring,
            steps,
            coords: self.coords.map(one),
            eigenvalues: self.eigenvalues.iter().map(|(i, v)| (*i, one(v))).collect(),
            next: self.next,
        }
    }
}

enum Outcome {
    Done(Branch),
    Split(Vec<Branch>),
}

/// Splits `branch` along the operator `a` (given on the whole space).
fn refine(branch: &Branch, a: &Matrix<AnyElem>) -> Result<LinResult<Outcome, AnyElem>> {
    let ring = &branch.ring;
    let s = branch.coords.cols();
    let image = mat_mul(ring, a, &branch.coords);
    let y = match solve_field(ring, &branch.coords, &image) {
        Ok(Some(y)) => y,
        Ok(None) => return Err(Error::Validation("an eigenspace is not stable under the next operator".into())),
        Err(z) => return Ok(Err(z)),
    };
    let cp = crate::coeff_ring::matrix::char_poly(ring, &y);
    let eigenspace = |ring: &AnyRing, y: &Matrix<AnyElem>, lambda: &AnyElem| -> LinResult<Matrix<AnyElem>, AnyElem> {
        let shifted = Matrix::from_fn(s, s, |i, j| if i == j { ring.sub(y.get(i, j), lambda) } else { y.get(i, j).clone() });
        kernel_field(ring, &shifted)
    };
    let mut out = Vec::new();
    for g in ring.factor_poly(&cp) {
        if poly::degree(ring, &g) == 1 {
            let lambda = ring.neg(&poly::monic(ring, &g)[0]);
            let k = match eigenspace(ring, &y, &lambda) {
                Ok(k) => k,
                Err(z) => return Ok(Err(z)),
            };
            if k.cols() == 0 {
                continue;
            }
            let mut b = branch.clone();
            b.coords = mat_mul(ring, &branch.coords, &k);
            b.eigenvalues.push((branch.next, lambda));
            out.push(b);
        } else {
            let ext = ring.extend(&g)?;
            for root in ext.roots.clone() {
                let b = branch.then(Step::Embed { from: ring.clone(), ext: ext.clone() }, ext.ring.clone());
                let y2 = lift_matrix(std::slice::from_ref(&Step::Embed { from: ring.clone(), ext: ext.clone() }), &y);
                let k = match eigenspace(&b.ring, &y2, &root) {
                    Ok(k) => k,
                    Err(z) => {
                        // zero divisor in the new extension: split it instead
                        let parts = b.ring.split_along(&z.0).ok_or_else(|| Error::NotInvertible(b.ring.format(&z.0)))?;
                        let mut bs = Vec::new();
                        for child in [parts.0, parts.1] {
                            bs.push(b.then(Step::Project { parent: b.ring.clone(), child: child.clone() }, child));
                        }
                        out.extend(bs);
                        continue;
                    }
                };
                if k.cols() == 0 {
                    continue;
                }
                let mut b = b;
                b.coords = mat_mul(&b.ring, &b.coords, &k);
                b.eigenvalues.push((branch.next, root));
                out.push(b);
            }
        }
    }
    if out.len() == 1 && out[0].coords.cols() == s && out[0].eigenvalues.len() == branch.eigenvalues.len() + 1 {
        let mut b = out.pop().unwrap();
        b.next += 1;
        return Ok(Ok(Outcome::Done(b)));
    }
    for b in &mut out {
        if b.eigenvalues.len() == branch.eigenvalues.len() + 1 {
            b.next += 1;
        }
    }
    Ok(Ok(Outcome::Split(out)))
}

/// Normalized eigenforms of a stable space over a field, found by splitting
/// along `T_p` for the scheduled primes in increasing norm. Irreducible
/// factors of degree above one extend the coefficient field. Each form is
/// scaled to have coefficient 1 at the unit ideal and tested by squaring
/// against the weight `2k` basis when one is given.
pub fn eigenforms(
    v: &CandidateSpace<AnyRing>,
    hctx: &HeckeContext<AnyRing>,
    square_basis: Option<&[AdelicSeries<AnyRing>]>,
    primes: Option<&[IdealHNF]>,
) -> Result<Vec<Eigenform>> {
    let base = v.ring().clone();
    if !base.is_field() {
        return Err(Error::Unsupported(format!("eigenforms over {}, which is not a field", base.descriptor())));
    }
    let r = v.rank();
    if r == 0 {
        return Ok(Vec::new());
    }
    let ctx = v.context();
    let default;
    let candidates = match primes {
        Some(p) => p,
        None => {
            default = default_schedule(ctx, v.bound());
            &default
        }
    };
    let field = ctx.field();
    let series = v.all_series()?;
    let mut ops: Vec<(IdealHNF, Matrix<AnyElem>)> = Vec::new();
    for p in candidates {
        let f = p.factor(field);
        if f.len() != 1 || f[0].1 != 1 {
            continue;
        }
        let nb = hecke_bound(v.bound(), p.norm_u64().unwrap_or(u64::MAX));
        if nb == 0 {
            continue;
        }
        // T_p has a matrix only when truncation stays injective on V
        let trunc = v.basis().top_rows(ctx.h_plus() + ctx.slots_below(nb));
        if rank(&base, &trunc).map_err(|z| Error::NotInvertible(base.format(&z.0)))? < r {
            continue;
        }
        ops.push((p.clone(), hecke_matrix_in_basis(hctx, p, &series)?));
    }

    let mut done = Vec::new();
    let mut stack = vec![Branch { ring: base.clone(), steps: Vec::new(), coords: identity(&base, r), eigenvalues: Vec::new(), next: 0 }];
    while let Some(b) = stack.pop() {
        if b.next == ops.len() {
            done.push(b);
            continue;
        }
        let a = lift_matrix(&b.steps, &ops[b.next].1);
        match refine(&b, &a)? {
            Ok(Outcome::Done(nb)) => stack.push(nb),
            Ok(Outcome::Split(bs)) => stack.extend(bs.into_iter().rev()),
            Err(ZeroDivisor(z)) => {
                let (r1, r2) = b.ring.split_along(&z).ok_or_else(|| Error::NotInvertible(b.ring.format(&z)))?;
                for child in [r2, r1] {
                    stack.push(b.then(Step::Project { parent: b.ring.clone(), child: child.clone() }, child));
                }
            }
        }
    }

    let mut out = Vec::new();
    for b in done {
        let basis = lift_matrix(&b.steps, v.basis());
        let vecs = mat_mul(&b.ring, &basis, &b.coords);
        let squares: Option<Vec<AdelicSeries<AnyRing>>> = square_basis
            .map(|sb| sb.iter().map(|g| g.map_with(&b.ring, |x| Ok(lift(&b.steps, x)))).collect::<Result<Vec<_>>>())
            .transpose()?;
        let dim = vecs.cols();
        for j in 0..dim {
            let mut f = AdelicSeries::from_vector(ctx, &b.ring, v.weight(), v.bound(), vecs.column(j))?;
            let lead = f.coeffs()[0].clone();
            let normalized = match (dim == 1).then(|| b.ring.inv(&lead)).flatten() {
                Some(inv) => {
                    f = f.scale(&inv);
                    true
                }
                None => false,
            };
            let verification = squaring_test(&f, squares.as_deref(), v.bound())?;
            out.push(Eigenform {
                ring: b.ring.clone(),
                eigenvalues: b.eigenvalues.iter().map(|(i, x)| (ops[*i].0.clone(), x.clone())).collect(),
                series: f,
                normalized,
                eigenspace_dim: dim,
                verification,
            });
        }
    }
    Ok(out)
}
