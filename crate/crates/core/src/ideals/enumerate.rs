//! Integral ideals of bounded norm, built from prime powers.

use std::collections::HashMap;

use super::{primes_above, IdealHNF, PrimeKind};
use crate::arith;
use crate::quad_field::QuadraticField;

/// Sparse exponent vector over the prime list of an [`IdealTable`],
/// sorted by prime index.
pub type Factorization = Vec<(u32, u32)>;

#[derive(Clone, Debug)]
pub struct TablePrime {
    pub ideal: IdealHNF,
    pub p: u64,
    pub norm: u64,
    pub kind: PrimeKind,
}

/// All integral ideals of norm `< bound`, sorted by `(norm, a, b, c)`, with
/// their factorizations.
#[derive(Clone, Debug)]
pub struct IdealTable {
    bound: u64,
    ideals: Vec<IdealHNF>,
    norms: Vec<u64>,
    factorizations: Vec<Factorization>,
    index: HashMap<IdealHNF, usize>,
    by_factorization: HashMap<Factorization, usize>,
    primes: Vec<TablePrime>,
    prime_slot: Vec<usize>,
}

impl IdealTable {
    pub fn new(field: &QuadraticField, bound: u64) -> Self {
        let mut primes: Vec<TablePrime> = Vec::new();
        for p in arith::primes_below(bound.max(2)) {
            for pa in primes_above(field, p) {
                let norm = if pa.kind == PrimeKind::Inert { p * p } else { p };
                if norm < bound {
                    primes.push(TablePrime { ideal: pa.ideal, p, norm, kind: pa.kind });
                }
            }
        }
        primes.sort_by(|x, y| x.ideal.cmp(&y.ideal));

        let mut found: Vec<(IdealHNF, u64, Factorization)> = Vec::new();
        let mut fac = Vec::new();
        dfs(field, &primes, bound, 0, IdealHNF::unit(), 1, &mut fac, &mut found);
        found.sort_by(|x, y| x.0.cmp(&y.0));

        let mut t = IdealTable {
            bound,
            ideals: Vec::with_capacity(found.len()),
            norms: Vec::with_capacity(found.len()),
            factorizations: Vec::with_capacity(found.len()),
            index: HashMap::with_capacity(found.len()),
            by_factorization: HashMap::with_capacity(found.len()),
            primes,
            prime_slot: Vec::new(),
        };
        for (i, (id, n, f)) in found.into_iter().enumerate() {
            t.index.insert(id.clone(), i);
            t.by_factorization.insert(f.clone(), i);
            t.ideals.push(id);
            t.norms.push(n);
            t.factorizations.push(f);
        }
        t.prime_slot = t.primes.iter().map(|p| t.index[&p.ideal]).collect();
        t
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Number of ideals with norm `< b`; these form a prefix of the table.
    pub fn count_below(&self, b: u64) -> usize {
        self.norms.partition_point(|&n| n < b)
    }

    pub fn ideals(&self) -> &[IdealHNF] {
        &self.ideals
    }

    pub fn ideal(&self, i: usize) -> &IdealHNF {
        &self.ideals[i]
    }

    pub fn norm(&self, i: usize) -> u64 {
        self.norms[i]
    }

    pub fn factorization(&self, i: usize) -> &Factorization {
        &self.factorizations[i]
    }

    pub fn index_of(&self, id: &IdealHNF) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn index_of_factorization(&self, f: &[(u32, u32)]) -> Option<usize> {
        self.by_factorization.get(f).copied()
    }

    pub fn primes(&self) -> &[TablePrime] {
        &self.primes
    }

    /// Table slot of the `j`-th prime.
    pub fn prime_slot(&self, j: usize) -> usize {
        self.prime_slot[j]
    }

    /// Slots of all integral divisors of the ideal in slot `i`.
    pub fn divisor_slots(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let f = &self.factorizations[i];
        let mut exps = vec![0u32; f.len()];
        loop {
            let d: Factorization = f.iter().zip(&exps).filter(|(_, &e)| e > 0).map(|(&(p, _), &e)| (p, e)).collect();
            out.push(self.by_factorization[&d]);
            let mut k = 0;
            loop {
                if k == f.len() {
                    out.sort_unstable();
                    return out;
                }
                if exps[k] < f[k].1 {
                    exps[k] += 1;
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    field: &QuadraticField,
    primes: &[TablePrime],
    bound: u64,
    start: usize,
    cur: IdealHNF,
    norm: u64,
    fac: &mut Factorization,
    out: &mut Vec<(IdealHNF, u64, Factorization)>,
) {
    out.push((cur.clone(), norm, fac.clone()));
    for (i, pr) in primes.iter().enumerate().skip(start) {
        if norm.saturating_mul(pr.norm) >= bound {
            break;
        }
        let mut id = cur.clone();
        let mut n = norm;
        let mut e = 0;
        loop {
            n = n.saturating_mul(pr.norm);
            if n >= bound {
                break;
            }
            id = id.mul(field, &pr.ideal);
            e += 1;
            fac.push((i as u32, e));
            dfs(field, primes, bound, i + 1, id.clone(), n, fac, out);
            fac.pop();
        }
    }
}

/// Integral ideals of norm `< bound`, each once, sorted.
pub fn ideals_up_to(field: &QuadraticField, bound: u64) -> Vec<IdealHNF> {
    IdealTable::new(field, bound).ideals
}

pub fn mul_factorizations(a: &[(u32, u32)], b: &[(u32, u32)]) -> Factorization {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// `a / b^k` if integral.
pub fn div_factorizations(a: &[(u32, u32)], b: &[(u32, u32)], k: u32) -> Option<Factorization> {
    let mut out: Vec<(u32, u32)> = a.to_vec();
    for &(p, e) in b {
        let pos = out.iter().position(|&(q, _)| q == p)?;
        let need = e * k;
        if out[pos].1 < need {
            return None;
        }
        out[pos].1 -= need;
    }
    out.retain(|&(_, e)| e > 0);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of ideals of norm m equals sum over k | m of the Kronecker symbol (D/k).
    fn kronecker(disc: i64, k: u64) -> i64 {
        let mut r = 1i64;
        for (p, e) in arith::factor_u64(k) {
            let s = if p == 2 {
                if disc % 2 == 0 {
                    0
                } else if disc.rem_euclid(8) == 1 || disc.rem_euclid(8) == 7 {
                    1
                } else {
                    -1
                }
            } else {
                arith::legendre(disc, p) as i64
            };
            r *= s.pow(e);
        }
        r
    }

    fn zeta_count(disc: i64, bound: u64) -> usize {
        let mut total = 0i64;
        for m in 1..bound {
            total += (1..=m).filter(|k| m % k == 0).map(|k| kronecker(disc, k)).sum::<i64>();
        }
        total as usize
    }

    #[test]
    fn small_d6() {
        let k = QuadraticField::new(6).unwrap();
        assert_eq!(ideals_up_to(&k, 2), vec![IdealHNF::unit()]);
        let norms: Vec<u64> = ideals_up_to(&k, 6).iter().map(|i| i.norm_u64().unwrap()).collect();
        assert_eq!(norms, vec![1, 2, 3, 4, 5, 5]);
    }

    #[test]
    fn counts_match_zeta() {
        for d in [2i64, 3, 5, 6, 7, 13, 21] {
            let k = QuadraticField::new(d).unwrap();
            for b in [2u64, 7, 20, 61, 150] {
                assert_eq!(ideals_up_to(&k, b).len(), zeta_count(k.discriminant(), b), "d={d} B={b}");
            }
        }
    }

    #[test]
    fn table_lookups() {
        let k = QuadraticField::new(5).unwrap();
        let t = IdealTable::new(&k, 100);
        for i in 0..t.len() {
            assert_eq!(t.index_of(t.ideal(i)), Some(i));
            assert_eq!(t.norm(i), t.ideal(i).norm_u64().unwrap());
            let divs: Vec<IdealHNF> = t.divisor_slots(i).iter().map(|&j| t.ideal(j).clone()).collect();
            assert_eq!(divs, t.ideal(i).divisors(&k));
        }
        assert_eq!(t.count_below(5), 2);
    }
}
