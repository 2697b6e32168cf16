//! Small integer helpers shared by the field, ideal and ring code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub fn isqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    Some(r)
}

/// `Some(r)` with `r*r == n`.
pub fn exact_sqrt_i128(n: i128) -> Option<i128> {
    let r = isqrt_i128(n)?;
    (r * r == n).then_some(r)
}

pub fn primes_below(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i as u64).collect()
}

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Factorization of `n != 0` as sorted `(prime, exponent)` pairs.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    num_prime::nt_funcs::factorize64(n).into_iter().map(|(p, e)| (p, e as u32)).collect()
}

/// Distinct prime divisors of a nonzero big integer (empty for 0 and units).
pub fn prime_divisors_big(n: &BigInt) -> Vec<u64> {
    let m = n.magnitude().clone();
    if m.is_zero() || m.is_one() {
        return Vec::new();
    }
    if let Some(small) = m.to_u64() {
        return factor_u64(small).into_iter().map(|(p, _)| p).collect();
    }
    let (found, rest) = num_prime::nt_funcs::factors(m, None);
    assert!(rest.is_none(), "incomplete factorization of {n}");
    found.into_keys().map(|p| p.to_u64().expect("prime factor exceeds u64")).collect()
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Legendre symbol `(a/p)` for odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod(a: i64, p: u64) -> Option<u64> {
    let a = a.rem_euclid(p as i64) as u64;
    if p == 2 || a == 0 {
        return Some(a % p);
    }
    if legendre(a as i64, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre(z as i64, p) != -1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_brute() {
        for p in primes_below(200) {
            for a in 0..p as i64 {
                let brute = (0..p).find(|x| (x * x) % p == a as u64);
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!((r * r) % p, a as u64),
                    None => assert!(brute.is_none()),
                }
            }
        }
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(331), vec![(331, 1)]);
        assert_eq!(prime_divisors_big(&BigInt::from(-12)), vec![2, 3]);
    }
}
