//! Univariate polynomials over a field, stored low to high with no trailing
//! zeros (the zero polynomial is empty).

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Ring;
use crate::error::{Error, Result};

pub type Poly<E> = Vec<E>;

pub fn trim<R: Ring>(ring: &R, mut f: Poly<R::Elem>) -> Poly<R::Elem> {
    while f.last().is_some_and(|c| ring.is_zero(c)) {
        f.pop();
    }
    f
}

pub fn is_zero_poly<R: Ring>(ring: &R, f: &[R::Elem]) -> bool {
    f.iter().all(|c| ring.is_zero(c))
}

/// Degree; 0 for constants and for the zero polynomial.
pub fn degree<R: Ring>(ring: &R, f: &[R::Elem]) -> usize {
    f.iter().rposition(|c| !ring.is_zero(c)).unwrap_or(0)
}

pub fn add<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let v = (0..n).map(|i| ring.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(ring, v)
}

pub fn sub<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let v = (0..n).map(|i| ring.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(ring, v)
}

pub fn mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(ring, out)
}

pub fn scale<R: Ring>(ring: &R, a: &[R::Elem], s: &R::Elem) -> Poly<R::Elem> {
    trim(ring, a.iter().map(|x| ring.mul(x, s)).collect())
}

pub fn monic<R: Ring>(ring: &R, f: &[R::Elem]) -> Poly<R::Elem> {
    let f = trim(ring, f.to_vec());
    match f.last() {
        None => f,
        Some(lc) => {
            let inv = ring.inv(lc).expect("leading coefficient must be a unit");
            scale(ring, &f, &inv)
        }
    }
}

/// Quotient and remainder; the divisor's leading coefficient must be a unit.
pub fn divrem<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> (Poly<R::Elem>, Poly<R::Elem>) {
    let b = trim(ring, b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(ring, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = ring.inv(b.last().unwrap()).expect("leading coefficient must be a unit");
    let mut q = vec![ring.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = ring.mul(r.last().unwrap(), &inv);
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = ring.sub(&r[shift + i], &ring.mul(&c, bi));
        }
        q[shift] = c;
        r.pop();
        r = trim(ring, r);
    }
    (trim(ring, q), r)
}

pub fn rem<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    divrem(ring, a, b).1
}

/// Monic gcd.
pub fn gcd<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Poly<R::Elem> {
    let mut x = trim(ring, a.to_vec());
    let mut y = trim(ring, b.to_vec());
    while !y.is_empty() {
        let r = rem(ring, &x, &y);
        x = y;
        y = r;
    }
    monic(ring, &x)
}

/// `(g, s, t)` with `s a + t b = g` monic.
pub fn ext_gcd<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> (Poly<R::Elem>, Poly<R::Elem>, Poly<R::Elem>) {
    let (mut r0, mut r1) = (trim(ring, a.to_vec()), trim(ring, b.to_vec()));
    let (mut s0, mut s1) = (vec![ring.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![ring.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(ring, &r0, &r1);
        let s2 = sub(ring, &s0, &mul(ring, &q, &s1));
        let t2 = sub(ring, &t0, &mul(ring, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = ring.inv(lc).expect("leading coefficient must be a unit");
            (scale(ring, &r0, &inv), scale(ring, &s0, &inv), scale(ring, &t0, &inv))
        }
    }
}

pub fn powmod<R: Ring>(ring: &R, base: &[R::Elem], e: &BigUint, m: &[R::Elem]) -> Poly<R::Elem> {
    let mut acc = rem(ring, &[ring.one()], m);
    let b = rem(ring, base, m);
    for i in (0..e.bits()).rev() {
        acc = rem(ring, &mul(ring, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(ring, &mul(ring, &acc, &b), m);
        }
    }
    acc
}

pub fn derivative<R: Ring>(ring: &R, f: &[R::Elem]) -> Poly<R::Elem> {
    let v = f.iter().enumerate().skip(1).map(|(i, c)| ring.mul(&ring.from_i64(i as i64), c)).collect();
    trim(ring, v)
}

pub fn eval<R: Ring>(ring: &R, f: &[R::Elem], x: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    for c in f.iter().rev() {
        acc = ring.add(&ring.mul(&acc, x), c);
    }
    acc
}

/// `f / gcd(f, f')`, characteristic zero.
pub fn squarefree_part<R: Ring>(ring: &R, f: &[R::Elem]) -> Poly<R::Elem> {
    let f = monic(ring, f);
    let d = derivative(ring, &f);
    if d.is_empty() {
        return f;
    }
    let g = gcd(ring, &f, &d);
    monic(ring, &divrem(ring, &f, &g).0)
}

pub fn default_factor<R: Ring>(ring: &R, f: &[R::Elem]) -> Vec<Poly<R::Elem>> {
    let f = monic(ring, f);
    if degree(ring, &f) == 0 {
        return Vec::new();
    }
    match ring.field_order() {
        Some(q) => finite_field_factor(ring, &f, &q),
        None => vec![squarefree_part(ring, &f)],
    }
}

/// Distinct monic irreducible factors over `F_q`: distinct-degree
/// factorization followed by Cantor-Zassenhaus splitting (trace map in
/// characteristic 2).
pub fn finite_field_factor<R: Ring>(ring: &R, f: &[R::Elem], q: &BigUint) -> Vec<Poly<R::Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rest = monic(ring, f);
    let x = vec![ring.zero(), ring.one()];
    let mut out = Vec::new();
    let mut h = x.clone();
    let mut i = 1usize;
    while rest.len() > 1 && degree(ring, &rest) >= 2 * i {
        h = powmod(ring, &h, q, &rest);
        let mut g = gcd(ring, &sub(ring, &h, &x), &rest);
        if degree(ring, &g) > 0 {
            out.extend(equal_degree_split(ring, &g, i, q, &mut rng));
            while degree(ring, &g) > 0 {
                rest = divrem(ring, &rest, &g).0;
                g = gcd(ring, &g, &rest);
            }
            h = rem(ring, &h, &rest);
        }
        i += 1;
    }
    if degree(ring, &rest) > 0 {
        out.push(monic(ring, &rest));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| format!("{a:?}").cmp(&format!("{b:?}"))));
    out
}

fn equal_degree_split<R: Ring>(ring: &R, g: &[R::Elem], d: usize, q: &BigUint, rng: &mut ChaCha8Rng) -> Vec<Poly<R::Elem>> {
    let n = degree(ring, g);
    if n == d {
        return vec![monic(ring, g)];
    }
    let char2 = ring.characteristic() == 2;
    loop {
        let a: Poly<R::Elem> = trim(ring, (0..n).map(|_| ring.random_element(rng)).collect());
        if degree(ring, &a) == 0 {
            continue;
        }
        let b = if char2 {
            // q = 2^k; trace from F_{q^d} to F_2
            let k = q.bits() as usize - 1;
            let mut acc = Vec::new();
            let mut term = rem(ring, &a, g);
            for _ in 0..k * d {
                acc = add(ring, &acc, &term);
                term = rem(ring, &mul(ring, &term, &term), g);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            sub(ring, &powmod(ring, &a, &e, g), &[ring.one()])
        };
        let h = gcd(ring, &b, g);
        let dh = degree(ring, &h);
        if dh > 0 && dh < n {
            let other = divrem(ring, g, &h).0;
            let mut v = equal_degree_split(ring, &h, d, q, rng);
            v.extend(equal_degree_split(ring, &other, d, q, rng));
            return v;
        }
    }
}

/// Rabin's irreducibility test over `F_q`.
pub fn is_irreducible_ff<R: Ring>(ring: &R, f: &[R::Elem], q: &BigUint) -> bool {
    let f = monic(ring, f);
    let n = degree(ring, &f);
    if n == 0 {
        return false;
    }
    let x = vec![ring.zero(), ring.one()];
    let frob = |k: usize| -> Poly<R::Elem> {
        let mut h = x.clone();
        for _ in 0..k {
            h = powmod(ring, &h, q, &f);
        }
        h
    };
    if !is_zero_poly(ring, &sub(ring, &frob(n), &rem(ring, &x, &f))) {
        return false;
    }
    for (r, _) in crate::arith::factor_u64(n as u64) {
        let g = gcd(ring, &sub(ring, &frob(n / r as usize), &x), &f);
        if degree(ring, &g) > 0 {
            return false;
        }
    }
    true
}

/// Prints `c_n*v^n+...+c_0` using the ring's element format.
pub fn format_poly<R: Ring>(ring: &R, f: &[R::Elem], var: &str) -> String {
    let f = trim(ring, f.to_vec());
    if f.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in f.iter().enumerate().rev() {
        if ring.is_zero(c) {
            continue;
        }
        let mut cs = ring.format(c);
        let compound = cs.chars().skip(1).any(|ch| ch == '+' || ch == '-') || (k > 0 && cs.chars().any(|ch| ch.is_alphabetic()));
        if compound {
            cs = format!("({cs})");
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let term = if k == 0 {
            cs
        } else if cs == "1" {
            mono
        } else if cs == "-1" {
            format!("-{mono}")
        } else {
            format!("{cs}*{mono}")
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    out
}

/// Parses the output of [`format_poly`] (and whitespace-insensitive variants).
pub fn parse_poly<R: Ring>(ring: &R, s: &str, var: &str) -> Result<Poly<R::Elem>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot parse polynomial {s:?} in {var}"));
    if s.is_empty() {
        return Err(bad());
    }
    // split at top-level + and -, keeping signs
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let sign_here = depth == 0 && (ch == '+' || ch == '-') && !matches!(prev, None | Some('^') | Some('*') | Some('/'));
        if sign_here {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if depth == 0 && prev.is_none() && ch == '-' {
            neg = true;
        } else if !(depth == 0 && prev.is_none() && ch == '+') {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    terms.push((neg, cur));
    let mut out: Poly<R::Elem> = Vec::new();
    for (neg, body) in terms {
        if body.is_empty() {
            return Err(bad());
        }
        let (coef_s, mono) = match body.rfind('*') {
            Some(i) if body[i + 1..].starts_with(var) => (body[..i].to_string(), body[i + 1..].to_string()),
            _ if body.starts_with(var) => ("1".to_string(), body.clone()),
            _ => (body.clone(), String::new()),
        };
        let k: usize = if mono.is_empty() {
            0
        } else if mono == var {
            1
        } else if let Some(e) = mono.strip_prefix(var).and_then(|m| m.strip_prefix('^')) {
            e.parse().map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        let coef_s = coef_s.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(&coef_s).to_string();
        let mut c = ring.parse(&coef_s)?;
        if neg {
            c = ring.neg(&c);
        }
        let mut mono_poly = vec![ring.zero(); k + 1];
        mono_poly[k] = c;
        out = add(ring, &out, &mono_poly);
    }
    Ok(out)
}

/// The variable letter of a univariate polynomial string (first alphabetic
/// character), defaulting to `x`.
pub fn detect_variable(s: &str) -> String {
    s.chars().find(|c| c.is_alphabetic()).map(|c| c.to_string()).unwrap_or_else(|| "x".into())
}

pub fn is_monic<R: Ring>(ring: &R, f: &[R::Elem]) -> bool {
    f.last().is_some_and(|c| ring.is_one(c))
}

pub fn zero_count<E: Zero>(v: &[E]) -> usize {
    v.iter().filter(|x| x.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_ring::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn format_parse_round_trip() {
        let r = Rationals;
        let f = vec![q(-6), BigRational::new(1.into(), 2.into()), q(0), q(1)];
        let s = format_poly(&r, &f, "x");
        assert_eq!(s, "x^3+1/2*x-6");
        assert_eq!(parse_poly(&r, &s, "x").unwrap(), f);
        assert_eq!(parse_poly(&r, "x^2 - 6", "x").unwrap(), vec![q(-6), q(0), q(1)]);
        assert_eq!(parse_poly(&r, "-x", "x").unwrap(), vec![q(0), q(-1)]);
    }

    #[test]
    fn factor_over_f3() {
        let f3 = PrimeField::new(3).unwrap();
        // (x^2+1)(x+1)(x+2)^2
        let a = vec![1u64, 0, 1];
        let b = vec![1u64, 1];
        let c = vec![2u64, 1];
        let f = mul(&f3, &mul(&f3, &a, &b), &mul(&f3, &c, &c));
        let mut facs = finite_field_factor(&f3, &f, &BigUint::from(3u32));
        facs.sort();
        let mut want = vec![a, b, c];
        want.sort();
        assert_eq!(facs, want);
    }

    #[test]
    fn factor_over_f2() {
        let f2 = PrimeField::new(2).unwrap();
        // (x^2+x+1)(x^3+x+1)(x^3+x^2+1)
        let a = vec![1u64, 1, 1];
        let b = vec![1u64, 1, 0, 1];
        let c = vec![1u64, 0, 1, 1];
        let f = mul(&f2, &mul(&f2, &a, &b), &c);
        let facs = finite_field_factor(&f2, &f, &BigUint::from(2u32));
        assert_eq!(facs.len(), 3);
        for g in [a, b, c] {
            assert!(facs.contains(&g));
        }
    }

    #[test]
    fn irreducibility() {
        let f3 = PrimeField::new(3).unwrap();
        let three = BigUint::from(3u32);
        assert!(is_irreducible_ff(&f3, &[1, 0, 1], &three));
        assert!(!is_irreducible_ff(&f3, &[2, 0, 1], &three));
    }

    #[test]
    fn rational_factoring() {
        let r = Rationals;
        // (x-1)(x+2)^2 (x^2-3)
        let f = mul(&r, &mul(&r, &[q(-1), q(1)], &mul(&r, &[q(2), q(1)], &[q(2), q(1)])), &[q(-3), q(0), q(1)]);
        let facs = r.factor_poly(&f);
        assert_eq!(facs.len(), 3);
        assert!(facs.contains(&vec![q(-3), q(0), q(1)]));
        assert!(facs.contains(&vec![q(-1), q(1)]));
        assert!(facs.contains(&vec![q(2), q(1)]));
    }
}
