//! Narrow class group: class number from reduced indefinite forms, class
//! representatives, and totally positive generators.

use std::collections::HashSet;

use super::{primes_above, IdealHNF};
use crate::arith::{self, exact_sqrt_i128, isqrt_i128};
use crate::quad_field::{Element, Embedding, IntElement, QuadraticField, UnitData};

/// Number of cycles of reduced forms `(A, B, C)` of discriminant `disc > 0`
/// (non-square) under the reduction operator; equals the narrow class number
/// for a fundamental discriminant.
pub fn narrow_class_number(disc: i64) -> usize {
    let s = isqrt_i128(disc as i128).unwrap() as i64;
    let mut forms: Vec<(i64, i64, i64)> = Vec::new();
    for b in 1..=s {
        if (b - disc).rem_euclid(2) != 0 {
            continue;
        }
        let num = b * b - disc;
        // s < 2|A| + b  and  2|A| - b <= s
        for a_abs in 1..=((s + b) / 2) {
            if 2 * a_abs + b <= s {
                continue;
            }
            for a in [a_abs, -a_abs] {
                if num % (4 * a) == 0 {
                    forms.push((a, b, num / (4 * a)));
                }
            }
        }
    }
    let rho = |(_, b, c): (i64, i64, i64)| -> (i64, i64, i64) {
        let m = 2 * c.abs();
        // largest b' <= s with b' = -b mod 2|c|
        let r = (-b).rem_euclid(m);
        let bp = s - (s - r).rem_euclid(m);
        (c, bp, (bp * bp - disc) / (4 * c))
    };
    let all: HashSet<(i64, i64, i64)> = forms.iter().copied().collect();
    let mut seen: HashSet<(i64, i64, i64)> = HashSet::new();
    let mut cycles = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            debug_assert!(all.contains(&g), "reduction left the reduced set: {g:?}");
            if !seen.insert(g) {
                break;
            }
            g = rho(g);
        }
    }
    cycles
}

/// A totally positive generator of `ideal`, or `None` if the ideal is not
/// principal with a totally positive generator.
///
/// Short vectors of the primitive part are searched: some generator has both
/// embeddings at most `sqrt(N * eps+)`, which bounds the `w`-coordinate. Among
/// the totally positive generators found, the one with the most balanced
/// embeddings is returned, so the output does not depend on search order.
pub fn totally_positive_generator(field: &QuadraticField, units: &UnitData, ideal: &IdealHNF) -> Option<Element> {
    let (a, b) = (ideal.a() as i128, ideal.b() as i128);
    let t = field.omega_trace() as i128;
    let n = field.omega_norm_coeff() as i128;
    let eps_p = units.tp_unit_int();
    let e1 = field.embed_float(&eps_p, Embedding::First).max(field.embed_float(&eps_p, Embedding::Second));
    let dw = field.omega_float(Embedding::First) - field.omega_float(Embedding::Second);
    let ymax = (2.0 * ((a as f64) * e1).sqrt() / dw).ceil() as i128 + 2;

    let mut best: Option<(f64, IntElement)> = None;
    let mut negative_norm_seen: Option<IntElement> = None;
    for y in -ymax..=ymax {
        for s in [1i128, -1] {
            // x^2 + t y x - n y^2 - s a = 0
            let disc = t * t * y * y + 4 * (n * y * y + s * a);
            let Some(r) = exact_sqrt_i128(disc) else { continue };
            for num in [-t * y + r, -t * y - r] {
                if num.rem_euclid(2) != 0 {
                    continue;
                }
                let x = num / 2;
                if (x - y * b).rem_euclid(a) != 0 {
                    continue;
                }
                let cand = IntElement::new(x as i64, y as i64);
                if s == -1 {
                    negative_norm_seen.get_or_insert(cand);
                    continue;
                }
                let cand = if field.embedding_sign(&cand, Embedding::First) < 0 { -cand } else { cand };
                let bal = balance(field, &cand);
                let better = match &best {
                    None => true,
                    Some((bb, be)) => bal < *bb - 1e-9 || ((bal - *bb).abs() <= 1e-9 && key(&cand) < key(be)),
                };
                if better {
                    best = Some((bal, cand));
                }
            }
        }
    }
    let gen = match best {
        Some((_, g)) => g,
        None => {
            let g = negative_norm_seen?;
            if units.norm_of_unit != -1 {
                return None;
            }
            let g = field.mul(&g, &units.fundamental_int());
            if field.embedding_sign(&g, Embedding::First) < 0 {
                -g
            } else {
                g
            }
        }
    };
    debug_assert!(field.is_totally_positive(&gen));
    Some(gen.to_element().scale(ideal.c()))
}

fn balance(field: &QuadraticField, e: &IntElement) -> f64 {
    let a1 = field.embed_float(e, Embedding::First).abs().ln();
    let a2 = field.embed_float(e, Embedding::Second).abs().ln();
    (a1 - a2).abs()
}

fn key(e: &IntElement) -> (i64, i64) {
    (e.y.abs(), e.x)
}

/// Narrow class group data: representatives `t_lambda`, and the group law on
/// class indices.
#[derive(Clone, Debug)]
pub struct NarrowClassData {
    field: QuadraticField,
    units: UnitData,
    h_plus: usize,
    representatives: Vec<IdealHNF>,
    mul_table: Vec<Vec<usize>>,
    inv_table: Vec<usize>,
}

impl NarrowClassData {
    /// Representatives are the unit ideal followed by the prime ideals of
    /// least norm (ties by label) in each new class.
    pub fn new(field: &QuadraticField) -> Self {
        let units = field.fundamental_unit();
        let h_plus = narrow_class_number(field.discriminant());
        let mut reps = vec![IdealHNF::unit()];
        let mut p = 2u64;
        while reps.len() < h_plus {
            if arith::is_prime(p) {
                for pa in primes_above(field, p) {
                    if reps.len() < h_plus && !reps.iter().any(|r| same_class(field, &units, &pa.ideal, r)) {
                        reps.push(pa.ideal);
                    }
                }
            }
            p += 1;
        }
        Self::with_representatives(field, units, reps).expect("canonical representatives are valid")
    }

    /// Uses a given complete system of representatives; `None` if they are not
    /// pairwise inequivalent or too few.
    pub fn with_representatives(field: &QuadraticField, units: UnitData, reps: Vec<IdealHNF>) -> Option<Self> {
        let h = reps.len();
        for i in 0..h {
            for j in 0..i {
                if same_class(field, &units, &reps[i], &reps[j]) {
                    return None;
                }
            }
        }
        let mut data = NarrowClassData {
            field: field.clone(),
            units,
            h_plus: h,
            representatives: reps,
            mul_table: Vec::new(),
            inv_table: Vec::new(),
        };
        if narrow_class_number(field.discriminant()) != h {
            return None;
        }
        let mut mul = vec![vec![0; h]; h];
        for i in 0..h {
            for j in 0..h {
                let prod = data.representatives[i].mul(field, &data.representatives[j]);
                mul[i][j] = data.class_of(&prod);
            }
        }
        let inv = (0..h).map(|i| data.class_of(&data.representatives[i].conj(field))).collect();
        data.mul_table = mul;
        data.inv_table = inv;
        Some(data)
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    pub fn units(&self) -> &UnitData {
        &self.units
    }

    pub fn h_plus(&self) -> usize {
        self.h_plus
    }

    pub fn representatives(&self) -> &[IdealHNF] {
        &self.representatives
    }

    pub fn representative(&self, lambda: usize) -> &IdealHNF {
        &self.representatives[lambda]
    }

    /// Index of the class of a fractional ideal.
    pub fn class_of(&self, ideal: &IdealHNF) -> usize {
        self.class_with_generator(ideal).0
    }

    /// `(lambda, xi)` with `xi >> 0` and `(xi) = ideal * conj(t_lambda)`.
    pub fn class_with_generator(&self, ideal: &IdealHNF) -> (usize, Element) {
        for (i, r) in self.representatives.iter().enumerate() {
            let prod = ideal.mul(&self.field, &r.conj(&self.field));
            if let Some(g) = totally_positive_generator(&self.field, &self.units, &prod) {
                return (i, g);
            }
        }
        panic!("ideal {ideal} is in no class; representatives are incomplete")
    }

    pub fn class_mul(&self, i: usize, j: usize) -> usize {
        self.mul_table[i][j]
    }

    pub fn class_inv(&self, i: usize) -> usize {
        self.inv_table[i]
    }

    /// Identity class index.
    pub fn identity(&self) -> usize {
        self.class_of(&IdealHNF::unit())
    }

    pub fn class_pow(&self, i: usize, e: i64) -> usize {
        let base = if e < 0 { self.class_inv(i) } else { i };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.class_mul(acc, base);
        }
        acc
    }

    /// Replaces each representative `t` by `xi * t`.
    pub fn rescaled(&self, scalars: &[Element]) -> Option<Self> {
        if scalars.len() != self.h_plus || !scalars.iter().all(|x| self.field.is_totally_positive(x)) {
            return None;
        }
        let reps = self
            .representatives
            .iter()
            .zip(scalars)
            .map(|(t, x)| IdealHNF::principal(&self.field, x).map(|p| p.mul(&self.field, t)))
            .collect::<Option<Vec<_>>>()?;
        if !reps.iter().all(|r| r.is_integral()) {
            return None;
        }
        Self::with_representatives(&self.field, self.units.clone(), reps)
    }
}

fn same_class(field: &QuadraticField, units: &UnitData, a: &IdealHNF, b: &IdealHNF) -> bool {
    let prod = a.mul(field, &b.conj(field));
    totally_positive_generator(field, units, &prod).is_some()
}
