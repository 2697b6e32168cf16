use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use rayon::prelude::*;

use super::context::SeriesContext;
use super::weight::{validate_ring_weight_compat, WeightVector};
use crate::coeff_ring::{convert, Ring};
use crate::error::{Error, Result};
use crate::ideals::IdealHNF;
use crate::quad_field::{Element, IntElement};

/// An adelic power series mod `q^B`: one constant per narrow class and one
/// coefficient per integral ideal of norm `< B`, stored in the slot order of
/// the context's ideal table.
#[derive(Clone)]
pub struct AdelicSeries<R: Ring> {
    ctx: Arc<SeriesContext>,
    ring: R,
    weight: WeightVector,
    bound: u64,
    constant: Vec<R::Elem>,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> fmt::Debug for AdelicSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdelicSeries")
            .field("ring", &self.ring.descriptor())
            .field("weight", &self.weight)
            .field("bound", &self.bound)
            .field("constant", &self.constant)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

/// Slot-wise equality; the contexts must index ideals identically.
impl<R: Ring> PartialEq for AdelicSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.table().ideals()[..self.coeffs.len()] == other.ctx.table().ideals()[..other.coeffs.len()]
            && self.weight == other.weight
            && self.bound == other.bound
            && self.constant == other.constant
            && self.coeffs == other.coeffs
    }
}

impl<R: Ring> AdelicSeries<R> {
    fn check_bound(ctx: &SeriesContext, bound: u64) -> Result<()> {
        if bound == 0 || bound > ctx.bound() {
            return Err(Error::OutOfPrecision(format!("bound {bound} exceeds the context precision {}", ctx.bound())));
        }
        Ok(())
    }

    pub fn zero(ctx: &Arc<SeriesContext>, ring: &R, weight: WeightVector, bound: u64) -> Result<Self> {
        Self::check_bound(ctx, bound)?;
        Ok(AdelicSeries {
            ctx: ctx.clone(),
            ring: ring.clone(),
            weight,
            bound,
            constant: vec![ring.zero(); ctx.h_plus()],
            coeffs: vec![ring.zero(); ctx.slots_below(bound)],
        })
    }

    /// Constant series `c` in weight zero.
    pub fn constant(ctx: &Arc<SeriesContext>, ring: &R, c: &R::Elem, bound: u64) -> Result<Self> {
        let mut s = Self::zero(ctx, ring, WeightVector::parallel(0), bound)?;
        s.constant = vec![c.clone(); ctx.h_plus()];
        Ok(s)
    }

    pub fn one(ctx: &Arc<SeriesContext>, ring: &R, bound: u64) -> Result<Self> {
        Self::constant(ctx, ring, &ring.one(), bound)
    }

    pub fn from_parts(ctx: &Arc<SeriesContext>, ring: &R, weight: WeightVector, bound: u64, constant: Vec<R::Elem>, coeffs: Vec<R::Elem>) -> Result<Self> {
        Self::check_bound(ctx, bound)?;
        if constant.len() != ctx.h_plus() {
            return Err(Error::Mismatch(format!("{} constants for {} narrow classes", constant.len(), ctx.h_plus())));
        }
        if coeffs.len() != ctx.slots_below(bound) {
            return Err(Error::Mismatch(format!("{} coefficients for {} ideals of norm < {bound}", coeffs.len(), ctx.slots_below(bound))));
        }
        Ok(AdelicSeries { ctx: ctx.clone(), ring: ring.clone(), weight, bound, constant, coeffs })
    }

    /// Builds a series from sparse `(ideal, value)` pairs; absent ideals are 0.
    pub fn from_ideal_values(
        ctx: &Arc<SeriesContext>,
        ring: &R,
        weight: WeightVector,
        bound: u64,
        constant: Vec<R::Elem>,
        values: impl IntoIterator<Item = (IdealHNF, R::Elem)>,
    ) -> Result<Self> {
        let mut s = Self::zero(ctx, ring, weight, bound)?;
        if constant.len() != ctx.h_plus() {
            return Err(Error::Mismatch(format!("{} constants for {} narrow classes", constant.len(), ctx.h_plus())));
        }
        s.constant = constant;
        for (id, v) in values {
            let i = s.slot(&id)?;
            s.coeffs[i] = v;
        }
        Ok(s)
    }

    /// Forms of non-parallel weight are cuspidal. A nonzero constant there
    /// would make the graded product depend on the representatives, so it
    /// is rejected before multiplying.
    fn check_constants(&self) -> Result<()> {
        if !self.weight.is_parallel() && self.constant.iter().any(|c| !self.ring.is_zero(c)) {
            return Err(Error::Validation(format!("series of non-parallel weight {} must have zero constant terms", self.weight)));
        }
        Ok(())
    }

    /// Random coefficients (constants zero in non-parallel weight), for tests and benchmarks.
    pub fn random(ctx: &Arc<SeriesContext>, ring: &R, weight: WeightVector, bound: u64, rng: &mut dyn RngCore) -> Result<Self> {
        let mut s = Self::zero(ctx, ring, weight, bound)?;
        if weight.is_parallel() {
            for c in s.constant.iter_mut() {
                *c = ring.random_element(rng);
            }
        }
        for c in s.coeffs.iter_mut() {
            *c = ring.random_element(rng);
        }
        Ok(s)
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

    pub fn constants(&self) -> &[R::Elem] {
        &self.constant
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn num_slots(&self) -> usize {
        self.coeffs.len()
    }

    /// Ideal of slot `i`.
    pub fn ideal(&self, i: usize) -> &IdealHNF {
        self.ctx.table().ideal(i)
    }

    fn slot(&self, id: &IdealHNF) -> Result<usize> {
        if !id.is_integral() {
            return Err(Error::Mismatch(format!("{id} is not integral")));
        }
        match self.ctx.slot_of(id) {
            Some(i) if i < self.coeffs.len() => Ok(i),
            _ => Err(Error::OutOfPrecision(format!("{id} has norm >= {}", self.bound))),
        }
    }

    /// Coefficient at a nonzero integral ideal of norm `< B`.
    pub fn coeff(&self, id: &IdealHNF) -> Result<R::Elem> {
        Ok(self.coeffs[self.slot(id)?].clone())
    }

    pub fn set_coeff(&mut self, id: &IdealHNF, v: R::Elem) -> Result<()> {
        let i = self.slot(id)?;
        self.coeffs[i] = v;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.constant.iter().chain(&self.coeffs).all(|c| self.ring.is_zero(c))
    }

    /// Constants followed by coefficients: the vector used by linear algebra.
    pub fn to_vector(&self) -> Vec<R::Elem> {
        self.constant.iter().chain(&self.coeffs).cloned().collect()
    }

    pub fn from_vector(ctx: &Arc<SeriesContext>, ring: &R, weight: WeightVector, bound: u64, v: Vec<R::Elem>) -> Result<Self> {
        let h = ctx.h_plus();
        if v.len() < h {
            return Err(Error::Mismatch("vector shorter than the constant tuple".into()));
        }
        let mut v = v;
        let coeffs = v.split_off(h);
        Self::from_parts(ctx, ring, weight, bound, v, coeffs)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::Mismatch(format!("precision {} vs {}", self.bound, other.bound)));
        }
        if !self.ctx.compatible(&other.ctx) {
            return Err(Error::Mismatch("series use different ideal tables or representatives".into()));
        }
        if self.ring.descriptor() != other.ring.descriptor() {
            return Err(Error::Mismatch(format!("rings {} and {}", self.ring.descriptor(), other.ring.descriptor())));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.check_compatible(other)?;
        if self.weight != other.weight {
            return Err(Error::Mismatch(format!("weights {} and {}", self.weight, other.weight)));
        }
        let mut out = self.clone();
        for (a, b) in out.constant.iter_mut().zip(&other.constant) {
            *a = op(a, b);
        }
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a = op(a, b);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = self.clone();
        for a in out.constant.iter_mut().chain(out.coeffs.iter_mut()) {
            *a = self.ring.mul(c, a);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ring.neg(&self.ring.one()))
    }

    /// Drops coefficients of norm `>= new_bound`.
    pub fn truncate(&self, new_bound: u64) -> Result<Self> {
        if new_bound > self.bound {
            return Err(Error::OutOfPrecision(format!("cannot raise precision from {} to {new_bound}", self.bound)));
        }
        Self::check_bound(&self.ctx, new_bound)?;
        let mut out = self.clone();
        out.bound = new_bound;
        out.coeffs.truncate(self.ctx.slots_below(new_bound));
        Ok(out)
    }

    /// The same series with coefficients in another ring.
    pub fn map_ring<S: Ring>(&self, target: &S) -> Result<AdelicSeries<S>> {
        let conv = |a: &R::Elem| convert(&self.ring, target, a);
        Ok(AdelicSeries {
            ctx: self.ctx.clone(),
            ring: target.clone(),
            weight: self.weight,
            bound: self.bound,
            constant: self.constant.iter().map(conv).collect::<Result<_>>()?,
            coeffs: self.coeffs.iter().map(conv).collect::<Result<_>>()?,
        })
    }

    /// Applies a ring map coefficient-wise.
    pub fn map_with<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<AdelicSeries<S>> {
        Ok(AdelicSeries {
            ctx: self.ctx.clone(),
            ring: target.clone(),
            weight: self.weight,
            bound: self.bound,
            constant: self.constant.iter().map(&f).collect::<Result<_>>()?,
            coeffs: self.coeffs.iter().map(&f).collect::<Result<_>>()?,
        })
    }

    /// Relabels the weight without touching coefficients.
    pub fn with_weight(mut self, weight: WeightVector) -> Self {
        self.weight = weight;
        self
    }

    /// Geometric coefficient `a_{lambda, xi}` for `xi >> 0` in `t_lambda`.
    pub fn phi_coefficient(&self, lambda: usize, xi: &Element) -> Result<R::Elem> {
        let (slot, xi) = self.locate(lambda, xi)?;
        let factor = self.weight.phi_factor(&self.ring, self.ctx.field(), &xi)?;
        Ok(self.ring.mul(&self.coeffs[slot], &factor))
    }

    /// Adelic coefficient carried by the geometric value `value` at
    /// `(lambda, xi)`.
    pub fn psi_coefficient(&self, lambda: usize, xi: &Element, value: &R::Elem) -> Result<(IdealHNF, R::Elem)> {
        let (slot, xi) = self.locate(lambda, xi)?;
        let factor = self.weight.psi_factor(&self.ring, self.ctx.field(), &xi)?;
        Ok((self.ideal(slot).clone(), self.ring.mul(value, &factor)))
    }

    fn locate(&self, lambda: usize, xi: &Element) -> Result<(usize, Element)> {
        let f = self.ctx.field();
        if !self.weight.is_paritious() {
            return Err(Error::Unsupported(format!("weight {} is not paritious", self.weight)));
        }
        if lambda >= self.ctx.h_plus() {
            return Err(Error::Mismatch(format!("class index {lambda} out of range")));
        }
        let t = self.ctx.classes().representative(lambda);
        if !f.is_totally_positive(xi) || !t.contains(xi) {
            return Err(Error::Mismatch(format!("{xi} is not a totally positive element of {t}")));
        }
        let id = IdealHNF::principal(f, xi).expect("nonzero").div(f, t);
        Ok((self.slot(&id)?, xi.clone()))
    }

    /// Geometric coefficients at the chosen generator of every slot.
    pub fn geometric_view(&self) -> Result<GeometricView<R>> {
        validate_ring_weight_compat(&self.ring, self.ctx.field(), &[self.weight])?;
        let entries = &self.ctx.convolution()[..self.coeffs.len()];
        let f = self.ctx.field();
        let values = entries
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| Ok(self.ring.mul(c, &self.weight.phi_factor(&self.ring, f, &e.xi.to_element())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeometricView { constant: self.constant.clone(), entries: entries.iter().map(|e| (e.lambda, e.xi.clone())).collect(), values })
    }

    /// Inverse of [`geometric_view`](Self::geometric_view).
    pub fn from_geometric(ctx: &Arc<SeriesContext>, ring: &R, weight: WeightVector, bound: u64, view: &GeometricView<R>) -> Result<Self> {
        let f = ctx.field();
        let coeffs = view
            .entries
            .iter()
            .zip(&view.values)
            .map(|((_, xi), v)| Ok(ring.mul(v, &weight.psi_factor(ring, f, &xi.to_element())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(ctx, ring, weight, bound, view.constant.clone(), coeffs)
    }

    /// Graded product: multiply geometric expansions class by class and
    /// convert back.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.check_constants()?;
        other.check_constants()?;
        let weight = self.weight + other.weight;
        validate_ring_weight_compat(&self.ring, self.ctx.field(), &[self.weight, other.weight, weight])?;
        let r = &self.ring;
        let n = self.coeffs.len();
        let entries = &self.ctx.convolution()[..n];
        let constant: Vec<R::Elem> = self.constant.iter().zip(&other.constant).map(|(a, b)| r.mul(a, b)).collect();

        if self.weight.is_parallel() && other.weight.is_parallel() {
            let coeffs = entries
                .par_iter()
                .enumerate()
                .map(|(m, e)| {
                    let mut acc = r.add(&r.mul(&self.constant[e.lambda], &other.coeffs[m]), &r.mul(&self.coeffs[m], &other.constant[e.lambda]));
                    for &(s1, s2) in &e.terms {
                        acc = r.add(&acc, &r.mul(&self.coeffs[s1 as usize], &other.coeffs[s2 as usize]));
                    }
                    acc
                })
                .collect();
            return Ok(AdelicSeries { ctx: self.ctx.clone(), ring: r.clone(), weight, bound: self.bound, constant, coeffs });
        }

        let field = self.ctx.field();
        let coeffs = entries
            .par_iter()
            .enumerate()
            .map(|(m, e)| {
                let geo = |s: &Self, slot: usize, xi: &IntElement| -> Result<R::Elem> {
                    Ok(r.mul(&s.coeffs[slot], &s.weight.phi_factor(r, field, &xi.to_element())?))
                };
                let mut acc = r.add(&r.mul(&self.constant[e.lambda], &geo(other, m, &e.xi)?), &r.mul(&geo(self, m, &e.xi)?, &other.constant[e.lambda]));
                for (&(s1, s2), xi1) in e.terms.iter().zip(&e.points) {
                    let rest = e.xi.clone() - xi1.clone();
                    acc = r.add(&acc, &r.mul(&geo(self, s1 as usize, xi1)?, &geo(other, s2 as usize, &rest)?));
                }
                Ok(r.mul(&acc, &weight.psi_factor(r, field, &e.xi.to_element())?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AdelicSeries { ctx: self.ctx.clone(), ring: r.clone(), weight, bound: self.bound, constant, coeffs })
    }

    /// Multiplicative inverse mod `q^B`, by recursion on the norm. Every
    /// constant must be a unit.
    pub fn invert(&self) -> Result<Self> {
        let r = &self.ring;
        validate_ring_weight_compat(r, self.ctx.field(), &[self.weight, -self.weight])?;
        self.check_constants()?;
        let inv_const = self
            .constant
            .iter()
            .enumerate()
            .map(|(l, c)| {
                r.inv(c)
                    .ok_or_else(|| Error::NotInvertible(format!("constant {} at class {} ({})", r.format(c), l, self.ctx.classes().representative(l))))
            })
            .collect::<Result<Vec<_>>>()?;
        let weight = -self.weight;
        let field = self.ctx.field();
        let n = self.coeffs.len();
        let entries = &self.ctx.convolution()[..n];
        let geo = |w: WeightVector, v: &R::Elem, xi: &IntElement| -> Result<R::Elem> {
            if w.is_parallel() {
                Ok(v.clone())
            } else {
                Ok(r.mul(v, &w.phi_factor(r, field, &xi.to_element())?))
            }
        };
        // adelic coefficients of the inverse, slot by slot in norm order;
        // box points have strictly smaller norm, so they are already known
        let mut g: Vec<R::Elem> = Vec::with_capacity(n);
        for (m, e) in entries.iter().enumerate() {
            let lambda = e.lambda;
            // f0 g(xi) + f(xi) g0 + sum f(xi1) g(xi - xi1) = 0
            let mut acc = r.mul(&geo(self.weight, &self.coeffs[m], &e.xi)?, &inv_const[lambda]);
            for (&(s1, s2), xi1) in e.terms.iter().zip(&e.points) {
                let rest = e.xi.clone() - xi1.clone();
                let a = geo(self.weight, &self.coeffs[s1 as usize], xi1)?;
                let b = geo(weight, &g[s2 as usize], &rest)?;
                acc = r.add(&acc, &r.mul(&a, &b));
            }
            let value = r.neg(&r.mul(&acc, &inv_const[lambda]));
            g.push(if weight.is_parallel() { value } else { r.mul(&value, &weight.psi_factor(r, field, &e.xi.to_element())?) });
        }
        Ok(AdelicSeries { ctx: self.ctx.clone(), ring: r.clone(), weight, bound: self.bound, constant: inv_const, coeffs: g })
    }

    /// The same adelic series viewed through the representatives
    /// `xi_lambda * t_lambda`. Adelic coefficients do not depend on the
    /// representatives, so only the context changes. Products computed in
    /// either context agree when the maximal weight component is additive
    /// on the weights involved (e.g. all weights have `k1 >= k2`); otherwise
    /// they differ by a power of `N(xi_lambda)`.
    pub fn rep_change(&self, scalars: &[Element], targets: Option<&[IdealHNF]>) -> Result<Self> {
        let ctx = rescaled_context(&self.ctx, scalars, targets)?;
        let mut out = self.clone();
        out.ctx = ctx;
        Ok(out)
    }

    /// Moves the series into another compatible context.
    pub fn in_context(&self, ctx: &Arc<SeriesContext>) -> Result<Self> {
        if ctx.field() != self.ctx.field() || ctx.bound() < self.bound || ctx.table().ideals()[..self.coeffs.len()] != self.ctx.table().ideals()[..self.coeffs.len()] {
            return Err(Error::Mismatch("target context indexes ideals differently".into()));
        }
        if ctx.classes().representatives().len() != self.constant.len() {
            return Err(Error::Mismatch("narrow class counts differ".into()));
        }
        let mut out = self.clone();
        out.ctx = ctx.clone();
        Ok(out)
    }

    /// Whether the constants and all coefficients of norm `<= gen_bound`
    /// lie in the subring `sub`. When the Hecke algebra is generated by
    /// operators of norm `<= gen_bound`, this certifies every coefficient.
    pub fn verify_subring_coeffs<S: Ring>(&self, sub: &S, gen_bound: u64) -> bool {
        let n = self.ctx.slots_below(gen_bound.saturating_add(1)).min(self.coeffs.len());
        self.constant.iter().chain(&self.coeffs[..n]).all(|a| convert(&self.ring, sub, a).is_ok())
    }
}

/// Per-slot geometric coefficients at the context's chosen generators.
#[derive(Clone, Debug)]
pub struct GeometricView<R: Ring> {
    pub constant: Vec<R::Elem>,
    /// `(lambda, xi)` of each slot.
    pub entries: Vec<(usize, IntElement)>,
    pub values: Vec<R::Elem>,
}

/// A context whose representatives are `xi_lambda * t_lambda`.
pub fn rescaled_context(ctx: &Arc<SeriesContext>, scalars: &[Element], targets: Option<&[IdealHNF]>) -> Result<Arc<SeriesContext>> {
    let f = ctx.field();
    if scalars.len() != ctx.h_plus() {
        return Err(Error::InvalidRepresentative(format!("{} scalars for {} classes", scalars.len(), ctx.h_plus())));
    }
    if let Some(x) = scalars.iter().find(|x| !f.is_totally_positive(x)) {
        return Err(Error::InvalidRepresentative(format!("{x} is not totally positive")));
    }
    let classes = ctx
        .classes()
        .rescaled(scalars)
        .ok_or_else(|| Error::InvalidRepresentative("rescaled representatives must be integral".into()))?;
    if let Some(t) = targets {
        if t != classes.representatives() {
            return Err(Error::InvalidRepresentative("xi_lambda * t_lambda differs from the requested representatives".into()));
        }
    }
    Ok(SeriesContext::with_classes(Arc::new(classes), ctx.bound()))
}
