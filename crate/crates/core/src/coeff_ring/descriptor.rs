//! Runtime-selected rings: the config descriptor grammar and [`AnyRing`],
//! a closed enum over the concrete rings whose extensions nest without
//! growing the type.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::RngCore;

use super::matrix::{LinResult, Matrix, ZeroDivisor};
use super::snf::Snf;
use super::{poly, LocalizedIntegers, PolyQuotient, PrimeField, Rationals, Ring, Solved};
use crate::error::{Error, Result};
use crate::quad_field::{Element, QuadraticField};

/// Parsed form of `q | z | fp:p | fq:p,e | nf:<poly> | loc:<poly>;inv=...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDescriptor {
    Rationals,
    Integers,
    PrimeField(u64),
    FiniteField(u64, u32),
    NumberField(String),
    Localized { min_poly: String, inverted: Vec<u64> },
}

impl RingDescriptor {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad ring descriptor {s:?}"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        if s == "q" {
            return Ok(RingDescriptor::Rationals);
        }
        if s == "z" {
            return Ok(RingDescriptor::Integers);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            return Ok(RingDescriptor::PrimeField(num(p)?));
        }
        if let Some(rest) = s.strip_prefix("fq:") {
            let (p, e) = rest.split_once(',').ok_or_else(bad)?;
            let e = num(e)?;
            if e == 0 || e > 64 {
                return Err(bad());
            }
            return Ok(RingDescriptor::FiniteField(num(p)?, e as u32));
        }
        if let Some(f) = s.strip_prefix("nf:") {
            return Ok(RingDescriptor::NumberField(f.trim().to_string()));
        }
        if let Some(rest) = s.strip_prefix("loc:") {
            let (f, inv) = match rest.split_once(';') {
                Some((f, inv)) => (f, inv.trim().strip_prefix("inv=").ok_or_else(bad)?),
                None => (rest, ""),
            };
            let inverted = inv.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<_>>()?;
            return Ok(RingDescriptor::Localized { min_poly: f.trim().to_string(), inverted });
        }
        Err(bad())
    }

    pub fn build(&self) -> Result<AnyRing> {
        match self {
            RingDescriptor::Rationals => Ok(AnyRing::Q(Rationals)),
            RingDescriptor::Integers => Ok(AnyRing::Loc(LocalizedIntegers::integers())),
            RingDescriptor::PrimeField(p) => Ok(AnyRing::Fp(PrimeField::new(*p)?)),
            RingDescriptor::FiniteField(p, e) => AnyRing::finite_field(*p, *e),
            RingDescriptor::NumberField(f) => AnyRing::number_field(f),
            RingDescriptor::Localized { min_poly, inverted } => {
                let var = poly::detect_variable(min_poly);
                let g = poly::parse_poly(&Rationals, min_poly, &var)?;
                if poly::degree(&Rationals, &g) != 1 {
                    return Err(Error::Unsupported(format!(
                        "localized rings of integers of degree > 1 ({min_poly}); only Z[1/S] is implemented"
                    )));
                }
                Ok(AnyRing::Loc(LocalizedIntegers::inverting(inverted)))
            }
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Rationals => write!(f, "q"),
            RingDescriptor::Integers => write!(f, "z"),
            RingDescriptor::PrimeField(p) => write!(f, "fp:{p}"),
            RingDescriptor::FiniteField(p, e) => write!(f, "fq:{p},{e}"),
            RingDescriptor::NumberField(g) => write!(f, "nf:{g}"),
            RingDescriptor::Localized { min_poly, inverted } => {
                let s: Vec<String> = inverted.iter().map(|p| p.to_string()).collect();
                write!(f, "loc:{min_poly};inv={}", s.join(","))
            }
        }
    }
}

/// Element of an [`AnyRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyElem {
    Rat(BigRational),
    Mod(u64),
    Poly(Vec<AnyElem>),
}

trait Codec: Sized {
    fn wrap(self) -> AnyElem;
    fn un(e: &AnyElem) -> &Self;
}

impl Codec for BigRational {
    fn wrap(self) -> AnyElem {
        AnyElem::Rat(self)
    }
    fn un(e: &AnyElem) -> &Self {
        match e {
            AnyElem::Rat(x) => x,
            other => panic!("expected a rational element, got {other:?}"),
        }
    }
}

impl Codec for u64 {
    fn wrap(self) -> AnyElem {
        AnyElem::Mod(self)
    }
    fn un(e: &AnyElem) -> &Self {
        match e {
            AnyElem::Mod(x) => x,
            other => panic!("expected a residue, got {other:?}"),
        }
    }
}

impl Codec for Vec<AnyElem> {
    fn wrap(self) -> AnyElem {
        AnyElem::Poly(self)
    }
    fn un(e: &AnyElem) -> &Self {
        match e {
            AnyElem::Poly(x) => x,
            other => panic!("expected a polynomial element, got {other:?}"),
        }
    }
}

fn un<T: Codec>(e: &AnyElem) -> &T {
    T::un(e)
}

fn un_vec<T: Codec + Clone>(v: &[AnyElem]) -> Vec<T> {
    v.iter().map(|e| un::<T>(e).clone()).collect()
}

fn wrap_vec<T: Codec>(v: Vec<T>) -> Vec<AnyElem> {
    v.into_iter().map(Codec::wrap).collect()
}

fn un_mat<T: Codec + Clone>(m: &Matrix<AnyElem>) -> Matrix<T> {
    m.map(|e| un::<T>(e).clone())
}

fn wrap_mat<T: Codec + Clone>(m: Matrix<T>) -> Matrix<AnyElem> {
    m.map(|e| e.clone().wrap())
}

fn wrap_solved<T: Codec + Clone>(r: LinResult<Solved<T>, T>) -> LinResult<Solved<AnyElem>, AnyElem> {
    match r {
        Ok(s) => Ok(Solved { basis: wrap_mat(s.basis), pivots: s.pivots }),
        Err(ZeroDivisor(z)) => Err(ZeroDivisor(z.wrap())),
    }
}

/// A coefficient ring chosen at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyRing {
    Q(Rationals),
    Fp(PrimeField),
    Loc(LocalizedIntegers),
    Ext(Box<PolyQuotient<AnyRing>>),
}

macro_rules! on_ring {
    ($self:expr, |$r:ident| $body:expr) => {
        match $self {
            AnyRing::Q($r) => $body,
            AnyRing::Fp($r) => $body,
            AnyRing::Loc($r) => $body,
            AnyRing::Ext(b) => {
                let $r = &**b;
                $body
            }
        }
    };
}

const VARS: [&str; 6] = ["x", "y", "z", "u", "v", "s"];

/// How a ring maps into an extension built by [`AnyRing::extend`].
#[derive(Clone, Debug)]
pub enum Embedding {
    Identity,
    /// Elements become constant polynomials.
    Constant,
    /// `F_p[x]/(m) -> target`, sending `x` to `image`.
    Evaluate { image: AnyElem },
}

/// An extension in which a given polynomial has roots.
#[derive(Clone, Debug)]
pub struct Extension {
    pub ring: AnyRing,
    pub roots: Vec<AnyElem>,
    pub embedding: Embedding,
}

impl Extension {
    pub fn embed(&self, from: &AnyRing, a: &AnyElem) -> AnyElem {
        match &self.embedding {
            Embedding::Identity => a.clone(),
            Embedding::Constant => AnyElem::Poly(poly::trim(from, vec![a.clone()])),
            Embedding::Evaluate { image } => {
                let AnyRing::Ext(src) = from else { panic!("evaluation embedding from a non-extension") };
                let coeffs = un::<Vec<AnyElem>>(a);
                let mut acc = self.ring.zero();
                for c in coeffs.iter().rev() {
                    let c = Extension::constant(&self.ring, src.base(), c);
                    acc = self.ring.add(&self.ring.mul(&acc, image), &c);
                }
                acc
            }
        }
    }

    fn constant(target: &AnyRing, base: &AnyRing, c: &AnyElem) -> AnyElem {
        match target {
            AnyRing::Ext(t) => AnyElem::Poly(poly::trim(t.base(), vec![c.clone()])),
            _ => {
                debug_assert_eq!(target, base);
                c.clone()
            }
        }
    }
}

impl AnyRing {
    pub fn rationals() -> Self {
        AnyRing::Q(Rationals)
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Ok(AnyRing::Fp(PrimeField::new(p)?))
    }

    pub fn from_descriptor(s: &str) -> Result<Self> {
        RingDescriptor::parse(s)?.build()
    }

    /// `F_{p^e}` modulo the first monic irreducible of degree `e` when
    /// coefficient vectors are ordered from the top coefficient down
    /// (`F_9 = F_3[x]/(x^2+1)`).
    pub fn finite_field(p: u64, e: u32) -> Result<Self> {
        let fp = AnyRing::prime_field(p)?;
        if e == 1 {
            return Ok(fp);
        }
        let q = BigUint::from(p);
        let e = e as usize;
        let total = (p as u128).checked_pow(e as u32).filter(|t| *t < 1 << 40).ok_or_else(|| Error::Unsupported(format!("fq:{p},{e} too large")))?;
        for code in 0..total {
            // digits of code, most significant = coefficient of x^{e-1}
            let mut c = code;
            let mut coeffs = vec![AnyElem::Mod(0); e + 1];
            for k in 0..e {
                coeffs[k] = AnyElem::Mod((c % p as u128) as u64);
                c /= p as u128;
            }
            coeffs[e] = AnyElem::Mod(1);
            if poly::is_irreducible_ff(&fp, &coeffs, &q) {
                let ring = PolyQuotient::new(fp.clone(), coeffs, "x")?.with_label(format!("fq:{p},{e}"));
                return Ok(AnyRing::Ext(Box::new(ring)));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn number_field(min_poly: &str) -> Result<Self> {
        let var = poly::detect_variable(min_poly);
        let g = poly::parse_poly(&Rationals, min_poly, &var)?;
        let base = AnyRing::rationals();
        let g = wrap_vec(g);
        Ok(AnyRing::Ext(Box::new(PolyQuotient::new(base, g, &var)?)))
    }

    fn depth(&self) -> usize {
        match self {
            AnyRing::Ext(e) => 1 + e.base().depth(),
            _ => 0,
        }
    }

    /// `(p, e)` when this is a finite field of order `p^e`.
    pub fn finite_field_params(&self) -> Option<(u64, u32)> {
        match self {
            AnyRing::Fp(f) => Some((f.p(), 1)),
            AnyRing::Ext(x) => match x.base() {
                AnyRing::Fp(f) => Some((f.p(), x.degree() as u32)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Adjoins roots of the nonconstant polynomial `g`. Finite fields move to
    /// the canonical model of the larger field and return every root;
    /// otherwise `g` is adjoined formally and its class is the single root.
    pub fn extend(&self, g: &[AnyElem]) -> Result<Extension> {
        let g = poly::monic(self, g);
        let n = poly::degree(self, &g);
        if n == 0 {
            return Err(Error::Parse("cannot extend by a constant".into()));
        }
        if n == 1 {
            return Ok(Extension { ring: self.clone(), roots: vec![self.neg(&g[0])], embedding: Embedding::Identity });
        }
        if let Some((p, e)) = self.finite_field_params() {
            let target = AnyRing::finite_field(p, e * n as u32)?;
            let embedding = match self {
                AnyRing::Fp(_) => Embedding::Constant,
                AnyRing::Ext(src) => {
                    let m: Vec<AnyElem> = src.modulus().iter().map(|c| Extension::constant(&target, src.base(), c)).collect();
                    let image = roots_of(&target, &m).into_iter().next().expect("subfield modulus splits");
                    Embedding::Evaluate { image }
                }
                _ => unreachable!(),
            };
            let tmp = Extension { ring: target.clone(), roots: Vec::new(), embedding };
            let gm: Vec<AnyElem> = g.iter().map(|c| tmp.embed(self, c)).collect();
            let roots = roots_of(&target, &gm);
            return Ok(Extension { roots, ..tmp });
        }
        let var = VARS.get(self.depth()).copied().unwrap_or("t");
        let ring = AnyRing::Ext(Box::new(PolyQuotient::new(self.clone(), g, var)?));
        let root = match &ring {
            AnyRing::Ext(x) => AnyElem::Poly(x.generator()),
            _ => unreachable!(),
        };
        Ok(Extension { ring, roots: vec![root], embedding: Embedding::Constant })
    }

    /// Replaces an extension by the two rings obtained from splitting its
    /// modulus along a zero divisor.
    pub fn split_along(&self, z: &AnyElem) -> Option<(AnyRing, AnyRing)> {
        let AnyRing::Ext(x) = self else { return None };
        let (g, h) = x.split_along(un::<Vec<AnyElem>>(z))?;
        let mk = |m: Vec<AnyElem>| AnyRing::Ext(Box::new(PolyQuotient::new(x.base().clone(), m, x.var()).unwrap()));
        Some((mk(g), mk(h)))
    }

    /// Projects an element of a split extension into one factor ring.
    pub fn project_from(&self, parent: &AnyRing, a: &AnyElem) -> AnyElem {
        match (self, parent) {
            (AnyRing::Ext(t), AnyRing::Ext(_)) => AnyElem::Poly(t.reduce(un::<Vec<AnyElem>>(a).clone())),
            _ => a.clone(),
        }
    }
}

/// Roots in `ring` of a polynomial, from its linear factors.
fn roots_of(ring: &AnyRing, f: &[AnyElem]) -> Vec<AnyElem> {
    ring.factor_poly(f).into_iter().filter(|g| poly::degree(ring, g) == 1).map(|g| ring.neg(&g[0])).collect()
}

impl Ring for AnyRing {
    type Elem = AnyElem;

    fn zero(&self) -> AnyElem {
        on_ring!(self, |r| r.zero().wrap())
    }
    fn one(&self) -> AnyElem {
        on_ring!(self, |r| r.one().wrap())
    }
    fn add(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        on_ring!(self, |r| r.add(un(a), un(b)).wrap())
    }
    fn sub(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        on_ring!(self, |r| r.sub(un(a), un(b)).wrap())
    }
    fn neg(&self, a: &AnyElem) -> AnyElem {
        on_ring!(self, |r| r.neg(un(a)).wrap())
    }
    fn mul(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        on_ring!(self, |r| r.mul(un(a), un(b)).wrap())
    }
    fn is_zero(&self, a: &AnyElem) -> bool {
        on_ring!(self, |r| r.is_zero(un(a)))
    }
    fn from_int(&self, n: &BigInt) -> AnyElem {
        on_ring!(self, |r| r.from_int(n).wrap())
    }
    fn from_rational(&self, q: &BigRational) -> Result<AnyElem> {
        on_ring!(self, |r| r.from_rational(q).map(Codec::wrap))
    }
    fn inv(&self, a: &AnyElem) -> Option<AnyElem> {
        on_ring!(self, |r| r.inv(un(a)).map(Codec::wrap))
    }
    fn characteristic(&self) -> u64 {
        on_ring!(self, |r| r.characteristic())
    }
    fn is_field(&self) -> bool {
        on_ring!(self, |r| r.is_field())
    }
    fn descriptor(&self) -> String {
        on_ring!(self, |r| r.descriptor())
    }
    fn format(&self, a: &AnyElem) -> String {
        on_ring!(self, |r| r.format(un(a)))
    }
    fn parse(&self, s: &str) -> Result<AnyElem> {
        on_ring!(self, |r| r.parse(s).map(Codec::wrap))
    }
    fn random_element(&self, rng: &mut dyn RngCore) -> AnyElem {
        on_ring!(self, |r| r.random_element(rng).wrap())
    }
    fn field_order(&self) -> Option<BigUint> {
        on_ring!(self, |r| r.field_order())
    }
    fn embed_quadratic(&self, field: &QuadraticField, a: &Element) -> Option<AnyElem> {
        on_ring!(self, |r| r.embed_quadratic(field, a).map(Codec::wrap))
    }
    fn is_pid(&self) -> bool {
        on_ring!(self, |r| r.is_pid())
    }
    fn inverted_primes(&self) -> Vec<u64> {
        on_ring!(self, |r| r.inverted_primes())
    }
    fn kernel(&self, m: &Matrix<AnyElem>) -> LinResult<Solved<AnyElem>, AnyElem> {
        match self {
            AnyRing::Loc(r) => wrap_solved(r.kernel(&un_mat(m))),
            AnyRing::Fp(r) => wrap_solved(r.kernel(&un_mat(m))),
            AnyRing::Q(r) => wrap_solved(r.kernel(&un_mat(m))),
            AnyRing::Ext(_) => Ok(Solved { basis: super::matrix::kernel_field(self, m)?, pivots: Vec::new() }),
        }
    }
    fn saturate(&self, m: &Matrix<AnyElem>) -> LinResult<Solved<AnyElem>, AnyElem> {
        match self {
            AnyRing::Loc(r) => wrap_solved(r.saturate(&un_mat(m))),
            AnyRing::Fp(r) => wrap_solved(r.saturate(&un_mat(m))),
            AnyRing::Q(r) => wrap_solved(r.saturate(&un_mat(m))),
            AnyRing::Ext(_) => Ok(Solved { basis: super::matrix::column_basis_field(self, m)?, pivots: Vec::new() }),
        }
    }
    fn snf_pivots(&self, m: &Matrix<AnyElem>) -> Vec<BigInt> {
        match self {
            AnyRing::Loc(r) => r.snf_pivots(&un_mat(m)),
            _ => Vec::new(),
        }
    }
    fn smith_normal_form(&self, m: &Matrix<AnyElem>) -> Result<Snf<AnyElem>> {
        match self {
            AnyRing::Loc(r) => {
                let s = r.smith_normal_form(&un_mat(m))?;
                Ok(Snf { u: wrap_mat(s.u), d: wrap_mat(s.d), v: wrap_mat(s.v) })
            }
            _ => Err(Error::Unsupported(format!("Smith normal form over {}", self.descriptor()))),
        }
    }
    fn factor_poly(&self, f: &[AnyElem]) -> Vec<Vec<AnyElem>> {
        match self {
            AnyRing::Q(r) => r.factor_poly(&un_vec(f)).into_iter().map(wrap_vec).collect(),
            AnyRing::Fp(r) => r.factor_poly(&un_vec(f)).into_iter().map(wrap_vec).collect(),
            AnyRing::Loc(r) => r.factor_poly(&un_vec(f)).into_iter().map(wrap_vec).collect(),
            AnyRing::Ext(_) => poly::default_factor(self, f),
        }
    }
}

impl From<BigRational> for AnyElem {
    fn from(q: BigRational) -> Self {
        AnyElem::Rat(q)
    }
}

impl From<u64> for AnyElem {
    fn from(x: u64) -> Self {
        AnyElem::Mod(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for s in ["q", "z", "fp:3", "fq:3,2", "nf:x^2-6", "loc:x;inv=2,3,331"] {
            let d = RingDescriptor::parse(s).unwrap();
            assert_eq!(d.to_string(), s);
            let r = d.build().unwrap();
            assert_eq!(r.descriptor(), s);
        }
        assert!(RingDescriptor::parse("loc:x^2-6;inv=331").unwrap().build().is_err());
        assert!(RingDescriptor::parse("bogus").is_err());
    }

    #[test]
    fn f9_is_x2_plus_1() {
        let f9 = AnyRing::finite_field(3, 2).unwrap();
        let AnyRing::Ext(x) = &f9 else { panic!() };
        assert_eq!(x.modulus(), &[AnyElem::Mod(1), AnyElem::Mod(0), AnyElem::Mod(1)]);
        assert_eq!(f9.field_order(), Some(BigUint::from(9u32)));
    }

    #[test]
    fn extending_f3_by_x2_plus_1_gives_conjugate_roots() {
        let f3 = AnyRing::prime_field(3).unwrap();
        let g = vec![AnyElem::Mod(1), AnyElem::Mod(0), AnyElem::Mod(1)];
        let ext = f3.extend(&g).unwrap();
        assert_eq!(ext.ring.descriptor(), "fq:3,2");
        assert_eq!(ext.roots.len(), 2);
        for r in &ext.roots {
            assert!(ext.ring.is_zero(&poly::eval(&ext.ring, &g.iter().map(|c| ext.embed(&f3, c)).collect::<Vec<_>>(), r)));
        }
        // tower: F_9 by a quadratic irreducible over F_9 lands in F_81
        let f9 = ext.ring.clone();
        let z = ext.roots[0].clone();
        // y^2 - z is irreducible since z has order 4 and F_9^* has order 8
        let h = vec![f9.neg(&z), f9.zero(), f9.one()];
        let ext2 = f9.extend(&h).unwrap();
        assert_eq!(ext2.ring.descriptor(), "fq:3,4");
        assert_eq!(ext2.roots.len(), 2);
        let hm: Vec<AnyElem> = h.iter().map(|c| ext2.embed(&f9, c)).collect();
        for r in &ext2.roots {
            assert!(ext2.ring.is_zero(&poly::eval(&ext2.ring, &hm, r)));
        }
        // the embedding is a ring map
        let a = f9.parse("x+2").unwrap();
        let b = f9.parse("2*x+2").unwrap();
        assert_eq!(ext2.embed(&f9, &f9.mul(&a, &b)), ext2.ring.mul(&ext2.embed(&f9, &a), &ext2.embed(&f9, &b)));
    }

    #[test]
    fn rational_extension_is_formal() {
        let q = AnyRing::rationals();
        let g = vec![AnyElem::Rat(BigRational::from_integer((-2).into())), AnyElem::Rat(BigRational::from_integer(0.into())), AnyElem::Rat(BigRational::from_integer(1.into()))];
        let ext = q.extend(&g).unwrap();
        assert_eq!(ext.ring.descriptor(), "nf:x^2-2");
        let r = &ext.roots[0];
        assert_eq!(ext.ring.mul(r, r), ext.ring.from_i64(2));
    }
}
