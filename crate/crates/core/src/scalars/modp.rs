//! Reduction of scalars to a prime field at a chosen point: zeta goes to a
//! primitive N-th root of unity mod p, each parameter to a fixed residue.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cyclo::Cyc;
use super::poly::Poly;
use super::{Field, Scalar};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue (p prime).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A point of the parameter space over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub p: u64,
    /// Image of zeta, of exact multiplicative order N.
    pub zeta: u64,
    pub params: Vec<u64>,
}

impl Specialization {
    /// Deterministic in `seed`: a prime p = 1 mod N below 2^62 and random
    /// nonzero parameter values.
    pub fn random(field: &Field, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, zeta) = prime_with_root(field.cyclotomic_order() as u64, &mut rng);
        let params = (0..field.nvars()).map(|_| rng.gen_range(2..p - 1)).collect();
        Specialization { p, zeta, params }
    }
}

/// A prime p = 1 mod n below 2^62 and an element of exact order n mod p.
pub(crate) fn prime_with_root(n: u64, rng: &mut ChaCha8Rng) -> (u64, u64) {
    let step = if n.is_multiple_of(2) { n } else { 2 * n };
    let top = (1u64 << 62) - rng.gen_range(0..(1u64 << 40));
    let mut p = top - (top % step) + 1;
    while p > top || !is_prime_u64(p) {
        p -= step;
    }
    let factors = prime_factors(n);
    let zeta = loop {
        let g = rng.gen_range(2..p - 1);
        let w = pow_mod(g, (p - 1) / n, p);
        if factors.iter().all(|&l| pow_mod(w, n / l, p) != 1) {
            break w;
        }
    };
    (p, zeta)
}

/// Image of a cyclotomic coefficient, None if a denominator vanishes mod p.
pub(crate) fn cyc_mod(c: &Cyc, p: u64, zeta: u64) -> Option<u64> {
    let mut cv = 0u64;
    let mut zk = 1u64;
    for r in c {
        if !r.is_zero() {
            let d = bigint_mod(r.denom(), p);
            if d == 0 {
                return None;
            }
            let v = mul_mod(bigint_mod(r.numer(), p), inv_mod(d, p), p);
            cv = add_mod(cv, mul_mod(v, zk, p), p);
        }
        zk = mul_mod(zk, zeta, p);
    }
    Some(cv)
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits")
}

fn eval_poly(poly: &Poly, s: &Specialization, inv_params: &[u64]) -> Option<u64> {
    let p = s.p;
    let mut acc = 0u64;
    for (exp, c) in &poly.terms {
        let cv = cyc_mod(c, p, s.zeta)?;
        let mut m = cv;
        for (k, &e) in exp.iter().enumerate() {
            let base = if e >= 0 { s.params[k] } else { inv_params[k] };
            m = mul_mod(m, pow_mod(base, e.unsigned_abs() as u64, p), p);
        }
        acc = add_mod(acc, m, p);
    }
    Some(acc)
}

impl Scalar {
    /// Image in F_p, or None when the point is a pole.
    pub fn specialize(&self, s: &Specialization) -> Option<u64> {
        let inv: Vec<u64> = s.params.iter().map(|&x| inv_mod(x, s.p)).collect();
        let n = eval_poly(&self.num, s, &inv)?;
        let d = eval_poly(&self.den, s, &inv)?;
        if d == 0 {
            return None;
        }
        Some(mul_mod(n, inv_mod(d, s.p), s.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;

    #[test]
    fn primes_and_roots() {
        assert!(is_prime_u64(2_305_843_009_213_693_951));
        assert!(!is_prime_u64(2_305_843_009_213_693_953));
        let f = Field::new(FieldSpec::new(5, &["q"])).unwrap();
        let s = Specialization::random(&f, 7);
        assert!(is_prime_u64(s.p));
        assert_eq!(s.p % 5, 1);
        assert_eq!(pow_mod(s.zeta, 5, s.p), 1);
        assert_ne!(s.zeta, 1);
        assert_eq!(Specialization::random(&f, 7), s);
    }

    #[test]
    fn specialization_is_a_ring_map() {
        let f = Field::new(FieldSpec::new(12, &["q", "p"])).unwrap();
        let s = Specialization::random(&f, 1);
        let a = f.parse("(q^2 - zeta*p)/(3*q + 1/2)").unwrap();
        let b = f.parse("zeta^5 - q^-1*p + 7/3").unwrap();
        let (x, y) = (a.specialize(&s).unwrap(), b.specialize(&s).unwrap());
        assert_eq!((&a * &b).specialize(&s), Some(mul_mod(x, y, s.p)));
        assert_eq!((&a + &b).specialize(&s), Some(add_mod(x, y, s.p)));
        assert_eq!(a.inv().specialize(&s), Some(inv_mod(x, s.p)));
        assert_eq!(f.parse("1 + zeta^6").unwrap().specialize(&s), Some(0));
    }
}
