//! Arithmetic in the cyclotomic field Q(zeta_N), elements stored densely in
//! the power basis 1, zeta, ..., zeta^(phi(N)-1).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Element of Q(zeta_N): coefficients of the reduced representative.
pub(crate) type Cyc = Vec<BigRational>;

/// The N-th cyclotomic field together with its defining polynomial.
#[derive(Debug, Clone)]
pub(crate) struct CycloField {
    pub(crate) order: u32,
    /// Monic Phi_N, low degree first, length phi(N) + 1.
    modulus: Vec<BigRational>,
    /// A prime p = 1 mod N with an image of zeta, for modular shortcuts.
    pub(crate) modp: (u64, u64),
}

/// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
pub(crate) fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // x^n - 1 = prod_{d | n} Phi_d(x)
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b is monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Division with remainder in Q[x]; `b` must be nonzero and trimmed.
fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[k + j] -= t;
        }
        q[k] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

impl CycloField {
    pub(crate) fn new(order: u32) -> Self {
        assert!(order >= 1);
        let modulus = cyclotomic_polynomial(order)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(order as u64);
        let modp = super::modp::prime_with_root(order as u64, &mut rng);
        CycloField { order, modulus, modp }
    }

    /// Euler phi of N, the dimension over Q.
    pub(crate) fn dim(&self) -> usize {
        self.modulus.len() - 1
    }

    pub(crate) fn zero(&self) -> Cyc {
        vec![BigRational::zero(); self.dim()]
    }

    pub(crate) fn from_rational(&self, r: BigRational) -> Cyc {
        let mut v = self.zero();
        v[0] = r;
        v
    }

    pub(crate) fn one(&self) -> Cyc {
        self.from_rational(BigRational::one())
    }

    pub(crate) fn is_zero(a: &Cyc) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub(crate) fn is_one(a: &Cyc) -> bool {
        a[0].is_one() && a[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub(crate) fn as_rational(a: &Cyc) -> Option<&BigRational> {
        if a[1..].iter().all(|c| c.is_zero()) {
            Some(&a[0])
        } else {
            None
        }
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Cyc {
        let d = self.dim();
        if v.len() > d {
            for k in (d..v.len()).rev() {
                let c = std::mem::take(&mut v[k]);
                if c.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let t = &c * &self.modulus[j];
                    v[k - d + j] -= t;
                }
            }
            v.truncate(d);
        }
        v.resize(d, BigRational::zero());
        v
    }

    /// zeta^k for any integer k.
    pub(crate) fn zeta_pow(&self, k: i64) -> Cyc {
        let n = self.order as i64;
        let e = k.mod_floor(&n) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        self.reduce(v)
    }

    pub(crate) fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub(crate) fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub(crate) fn neg(&self, a: &Cyc) -> Cyc {
        a.iter().map(|x| -x).collect()
    }

    pub(crate) fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        if self.dim() == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut out = vec![BigRational::zero(); 2 * self.dim() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub(crate) fn inv(&self, a: &Cyc) -> Cyc {
        assert!(!Self::is_zero(a), "inverse of zero in cyclotomic field");
        if self.dim() == 1 {
            return vec![a[0].recip()];
        }
        // extended Euclid: s*a + t*Phi = g (constant)
        let mut r0: Vec<BigRational> = self.modulus.clone();
        let mut r1: Vec<BigRational> = a.clone();
        trim(&mut r1);
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant
        let c = r1[0].recip();
        let s: Vec<BigRational> = s1.iter().map(|x| x * &c).collect();
        self.reduce(s)
    }

    pub(crate) fn pow(&self, a: &Cyc, mut e: u64) -> Cyc {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// max(|numerator|, |denominator|) when the element is rational.
    pub(crate) fn rational_height(a: &Cyc) -> Option<BigInt> {
        Self::as_rational(a).map(|r| r.numer().abs().max(r.denom().abs()))
    }
}
