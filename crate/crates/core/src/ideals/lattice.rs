//! Lattice points of an ideal inside the open box spanned by the embeddings
//! of a totally positive element.

use super::IdealHNF;
use crate::quad_field::{Embedding, IntElement, QuadraticField};
use num_traits::ToPrimitive;

/// All `x` in the integral ideal `t` with `0 < x^(i) < xi^(i)` for both
/// embeddings. Coordinate ranges come from floating-point bounds widened by
/// one; membership is decided exactly.
pub fn points_in_box(field: &QuadraticField, t: &IdealHNF, xi: &IntElement) -> Vec<IntElement> {
    let mut out = Vec::new();
    if !field.is_totally_positive(xi) {
        return out;
    }
    assert!(t.is_integral(), "points_in_box needs an integral ideal");
    let c = t.c().to_integer().to_i64().expect("ideal scale exceeds i64");
    let (a, b) = (t.a(), t.b());
    let w1 = field.omega_float(Embedding::First);
    let w2 = field.omega_float(Embedding::Second);
    let u1 = field.embed_float(xi, Embedding::First);
    let u2 = field.embed_float(xi, Embedding::Second);
    let vmax = (u1.max(u2) / (w1 - w2) / c as f64).ceil() as i64 + 1;
    let step = c * a;
    for v in -vmax..=vmax {
        let y = c * v;
        let lo = (-(y as f64) * w1).max(-(y as f64) * w2);
        let hi = (u1 - y as f64 * w1).min(u2 - y as f64 * w2);
        if lo > hi + 1.0 {
            continue;
        }
        let start = lo.floor() as i64 - 1;
        let end = hi.ceil() as i64 + 1;
        // x = c (u a + v b), i.e. x = c v b mod c a
        let r = (c * v * b).rem_euclid(step);
        let mut x = start + (r - start).rem_euclid(step);
        while x <= end {
            let cand = IntElement::new(x, y);
            if field.is_totally_positive(&cand) && field.is_totally_positive(&(xi.clone() - cand.clone())) {
                out.push(cand);
            }
            x += step;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn scan(field: &QuadraticField, t: &IdealHNF, xi: &IntElement, r: i64) -> Vec<IntElement> {
        let mut v = Vec::new();
        for y in -r..=r {
            for x in -4 * r..=4 * r {
                let e = IntElement::new(x, y);
                if t.contains_int(&e) && field.is_totally_positive(&e) && field.is_totally_positive(&(xi.clone() - e.clone())) {
                    v.push(e);
                }
            }
        }
        v.sort_by_key(|e| (e.y, e.x));
        v
    }

    #[test]
    fn matches_rectangle_scan() {
        let k = QuadraticField::new(6).unwrap();
        let o = IdealHNF::unit();
        let xi = IntElement::new(4, 0);
        let mut got = points_in_box(&k, &o, &xi);
        got.sort_by_key(|e| (e.y, e.x));
        assert_eq!(got, scan(&k, &o, &xi, 8));
        assert!(!got.is_empty());
    }

    #[test]
    fn empty_box() {
        let k = QuadraticField::new(6).unwrap();
        assert!(points_in_box(&k, &IdealHNF::unit(), &IntElement::new(-1, 0)).is_empty());
        assert!(points_in_box(&k, &IdealHNF::unit(), &IntElement::new(0, 0)).is_empty());
    }

    #[test]
    fn midpoint() {
        let k = QuadraticField::new(6).unwrap();
        let xi = IntElement::new(10, 4);
        let got = points_in_box(&k, &IdealHNF::unit(), &xi);
        assert!(got.contains(&IntElement::new(5, 2)));
    }

    #[test]
    fn scaled_ideal() {
        let k = QuadraticField::new(5).unwrap();
        let t = IdealHNF::from_parts(&k, 11, 3, BigRational::from_integer(BigInt::from(2))).unwrap();
        for x in [30i64, 57, 101] {
            for y in [0i64, 3, 9] {
                let xi = IntElement::new(x, y);
                let mut got = points_in_box(&k, &t, &xi);
                got.sort_by_key(|e| (e.y, e.x));
                assert_eq!(got, scan(&k, &t, &xi, 80));
            }
        }
    }
}
