//! Sparse multivariate Laurent polynomials with cyclotomic coefficients,
//! plus exact division and a recursive primitive-PRS gcd.

use std::collections::BTreeMap;

use super::cyclo::{Cyc, CycloField};
use super::modp::{add_mod, cyc_mod, inv_mod, mul_mod, pow_mod, sub_mod};

pub(crate) type Exp = Vec<i32>;

/// Map from exponent vector to nonzero coefficient. Keys sort lexicographically;
/// the leading term is the last entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct Poly {
    pub(crate) terms: BTreeMap<Exp, Cyc>,
}

fn add_exp(a: &[i32], b: &[i32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_exp(a: &[i32], b: &[i32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly::default()
    }

    pub(crate) fn constant(c: Cyc, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !CycloField::is_zero(&c) {
            terms.insert(vec![0; nvars], c);
        }
        Poly { terms }
    }

    pub(crate) fn monomial(c: Cyc, exp: Exp) -> Self {
        let mut terms = BTreeMap::new();
        if !CycloField::is_zero(&c) {
            terms.insert(exp, c);
        }
        Poly { terms }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant polynomial (no variable occurs).
    pub(crate) fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().iter().all(|&e| e == 0),
            _ => false,
        }
    }

    pub(crate) fn is_one(&self) -> bool {
        self.is_constant()
            && self
                .terms
                .values()
                .next()
                .is_some_and(CycloField::is_one)
    }

    pub(crate) fn constant_value(&self) -> Option<&Cyc> {
        if self.is_constant() {
            self.terms.values().next()
        } else {
            None
        }
    }

    pub(crate) fn leading(&self) -> Option<(&Exp, &Cyc)> {
        self.terms.iter().next_back()
    }

    fn insert_add(&mut self, f: &CycloField, e: Exp, c: Cyc) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !CycloField::is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = f.add(o.get(), &c);
                if CycloField::is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn add(&self, other: &Poly, f: &CycloField) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(f, e.clone(), c.clone());
        }
        out
    }

    pub(crate) fn neg(&self, f: &CycloField) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub(crate) fn sub(&self, other: &Poly, f: &CycloField) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(f, e.clone(), f.neg(c));
        }
        out
    }

    pub(crate) fn mul(&self, other: &Poly, f: &CycloField) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert_add(f, add_exp(e1, e2), f.mul(c1, c2));
            }
        }
        out
    }

    pub(crate) fn scale(&self, c: &Cyc, f: &CycloField) -> Poly {
        if CycloField::is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), f.mul(x, c)))
                .collect(),
        }
    }

    pub(crate) fn shift(&self, by: &[i32]) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exp(e, by), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent over all terms.
    pub(crate) fn min_exponents(&self, nvars: usize) -> Exp {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; nvars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub(crate) fn max_exponents(&self, nvars: usize) -> Exp {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; nvars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    pub(crate) fn pow(&self, mut e: u64, f: &CycloField, nvars: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(f.one(), nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub(crate) fn make_monic(&self, f: &CycloField) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                if CycloField::is_one(c) {
                    self.clone()
                } else {
                    let inv = f.inv(c);
                    self.scale(&inv, f)
                }
            }
        }
    }

    /// Exact quotient self / d, or None if d does not divide self.
    /// Both operands must have nonnegative exponents.
    pub(crate) fn div_exact(&self, d: &Poly, f: &CycloField) -> Option<Poly> {
        let (de, dc) = d.leading().expect("division by zero polynomial");
        let dinv = f.inv(dc);
        let (de, dinv) = (de.clone(), dinv);
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((re, rc)) = r.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let te = sub_exp(re, &de);
            let tc = f.mul(rc, &dinv);
            let t = Poly::monomial(tc.clone(), te.clone());
            r = r.sub(&t.mul(d, f), f);
            q.insert_add(f, te, tc);
        }
        Some(q)
    }

    pub(crate) fn degree_in(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Coefficients with respect to one variable (that variable's exponent zeroed).
    fn split_var(&self, var: usize) -> BTreeMap<i32, Poly> {
        let mut out: BTreeMap<i32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            out.entry(k).or_default().terms.insert(e2, c.clone());
        }
        out
    }

    fn join_var(var: usize, parts: &BTreeMap<i32, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (k, p) in parts {
            for (e, c) in &p.terms {
                let mut e2 = e.clone();
                e2[var] = *k;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }
}

/// Greatest common divisor of two polynomials with nonnegative exponents,
/// normalized to leading coefficient 1.
pub(crate) fn gcd(a: &Poly, b: &Poly, f: &CycloField, nvars: usize) -> Poly {
    gcd_from(a, b, 0, f, nvars)
}

fn gcd_from(a: &Poly, b: &Poly, var: usize, f: &CycloField, nvars: usize) -> Poly {
    if a.is_zero() {
        return b.make_monic(f);
    }
    if b.is_zero() {
        return a.make_monic(f);
    }
    if a.is_constant() || b.is_constant() || var >= nvars || certainly_coprime(a, b, f, nvars) {
        return Poly::constant(f.one(), nvars);
    }
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    if da == 0 && db == 0 {
        return gcd_from(a, b, var + 1, f, nvars);
    }
    if var + 1 == nvars {
        return univariate_gcd(a, b, var, f, nvars);
    }
    let ca = content(a, var, f, nvars);
    let cb = content(b, var, f, nvars);
    let c = gcd_from(&ca, &cb, var + 1, f, nvars);
    let mut p = a.div_exact(&ca, f).expect("content divides");
    let mut q = b.div_exact(&cb, f).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(var) == 0 {
            // q is a nonzero polynomial free of var and primitive, hence a unit
            p = Poly::constant(f.one(), nvars);
            break;
        }
        let r = pseudo_rem(&p, &q, var, f);
        p = q;
        q = if r.is_zero() {
            Poly::zero()
        } else {
            primitive_part(&r, var, f, nvars)
        };
    }
    let g = if p.degree_in(var) == 0 {
        Poly::constant(f.one(), nvars)
    } else {
        primitive_part(&p, var, f, nvars)
    };
    c.mul(&g, f).make_monic(f)
}

/// Image in F_p[x_var] with the other variables at `point`, low degree first.
fn image(a: &Poly, var: usize, point: &[u64], p: u64, zeta: u64) -> Option<Vec<u64>> {
    let mut out = vec![0u64; a.degree_in(var) as usize + 1];
    for (e, c) in &a.terms {
        let mut v = cyc_mod(c, p, zeta)?;
        for (k, &x) in e.iter().enumerate() {
            if k != var {
                v = mul_mod(v, pow_mod(point[k], x as u64, p), p);
            }
        }
        let slot = &mut out[e[var] as usize];
        *slot = add_mod(*slot, v, p);
    }
    Some(out)
}

fn degree_mod(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&x| x != 0)
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    loop {
        let Some(db) = degree_mod(&b) else {
            return degree_mod(&a).unwrap_or(0);
        };
        let inv = inv_mod(b[db], p);
        while let Some(da) = degree_mod(&a) {
            if da < db {
                break;
            }
            let c = mul_mod(a[da], inv, p);
            for j in 0..=db {
                a[da - db + j] = sub_mod(a[da - db + j], mul_mod(c, b[j], p), p);
            }
        }
        a.truncate(db);
        std::mem::swap(&mut a, &mut b);
    }
}

/// True only if gcd(a, b) is a constant. The image of the gcd under
/// reduction mod p divides the gcd of the images, and keeps its degree when
/// the leading coefficients survive, so a degree-0 image gcd certifies it.
fn certainly_coprime(a: &Poly, b: &Poly, f: &CycloField, nvars: usize) -> bool {
    let (p, zeta) = f.modp;
    if a.terms.keys().chain(b.terms.keys()).any(|e| e.iter().any(|&x| x < 0)) {
        return false;
    }
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    (0..nvars).all(|var| {
        let (da, db) = (a.degree_in(var), b.degree_in(var));
        if da == 0 || db == 0 {
            return true;
        }
        (0..3).any(|_| {
            let point: Vec<u64> = (0..nvars)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    2 + (seed >> 2) % (p - 3)
                })
                .collect();
            let (Some(ia), Some(ib)) = (image(a, var, &point, p, zeta), image(b, var, &point, p, zeta)) else {
                return false;
            };
            degree_mod(&ia) == Some(da as usize)
                && degree_mod(&ib) == Some(db as usize)
                && gcd_degree_mod(ia, ib, p) == 0
        })
    })
}

fn content(a: &Poly, var: usize, f: &CycloField, nvars: usize) -> Poly {
    let parts = a.split_var(var);
    let mut it = parts.values();
    let mut g = it.next().unwrap().make_monic(f);
    for p in it {
        if g.is_constant() {
            break;
        }
        g = gcd_from(&g, p, var + 1, f, nvars);
    }
    if g.is_constant() {
        Poly::constant(f.one(), nvars)
    } else {
        g
    }
}

fn primitive_part(a: &Poly, var: usize, f: &CycloField, nvars: usize) -> Poly {
    let c = content(a, var, f, nvars);
    a.div_exact(&c, f).expect("content divides").make_monic(f)
}

/// Sparse pseudo-remainder of a by b with respect to `var`.
fn pseudo_rem(a: &Poly, b: &Poly, var: usize, f: &CycloField) -> Poly {
    let mut r = a.split_var(var);
    let bparts = b.split_var(var);
    let (&db, lcb) = bparts.iter().next_back().unwrap();
    loop {
        let Some((&dr, lcr)) = r.iter().next_back() else {
            break;
        };
        if dr < db {
            break;
        }
        let lcr = lcr.clone();
        // r := lcb * r - lcr * x^(dr-db) * b
        let mut next: BTreeMap<i32, Poly> = BTreeMap::new();
        for (k, p) in &r {
            let t = p.mul(lcb, f);
            if !t.is_zero() {
                next.insert(*k, t);
            }
        }
        for (k, p) in &bparts {
            let t = p.mul(&lcr, f);
            let key = k + dr - db;
            let e = next.entry(key).or_default();
            *e = e.sub(&t, f);
            if e.is_zero() {
                next.remove(&key);
            }
        }
        r = next;
    }
    Poly::join_var(var, &r)
}

fn univariate_gcd(a: &Poly, b: &Poly, var: usize, f: &CycloField, nvars: usize) -> Poly {
    // Coefficients are constants here: dense Euclid over the field.
    let to_dense = |p: &Poly| -> Vec<Cyc> {
        let d = p.degree_in(var) as usize;
        let mut v = vec![f.zero(); d + 1];
        for (e, c) in &p.terms {
            v[e[var] as usize] = c.clone();
        }
        v
    };
    let trim = |v: &mut Vec<Cyc>| {
        while v.last().is_some_and(CycloField::is_zero) {
            v.pop();
        }
    };
    let mut r0 = to_dense(a);
    let mut r1 = to_dense(b);
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        // r0 mod r1
        let lead_inv = f.inv(r1.last().unwrap());
        let d1 = r1.len() - 1;
        while r0.len() > d1 {
            let k = r0.len() - 1 - d1;
            let c = f.mul(r0.last().unwrap(), &lead_inv);
            for (j, bj) in r1.iter().enumerate() {
                let t = f.mul(&c, bj);
                r0[k + j] = f.sub(&r0[k + j], &t);
            }
            r0.pop();
            trim(&mut r0);
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    let mut out = Poly::zero();
    for (k, c) in r0.into_iter().enumerate() {
        if !CycloField::is_zero(&c) {
            let mut e = vec![0; nvars];
            e[var] = k as i32;
            out.terms.insert(e, c);
        }
    }
    out.make_monic(f)
}

impl Poly {
    /// Whether the rational coefficient part is zero-free; convenience for tests.
    #[cfg(test)]
    pub(crate) fn from_int_terms(f: &CycloField, terms: &[(i64, &[i32])]) -> Poly {
        let mut p = Poly::zero();
        for (c, e) in terms {
            p.insert_add(f, e.to_vec(), f.from_rational(num_rational::BigRational::from_integer((*c).into())));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_univariate() {
        let f = CycloField::new(1);
        // (x-1)(x+2) and (x-1)(x-3)
        let a = Poly::from_int_terms(&f, &[(1, &[2]), (1, &[1]), (-2, &[0])]);
        let b = Poly::from_int_terms(&f, &[(1, &[2]), (-4, &[1]), (3, &[0])]);
        let g = gcd(&a, &b, &f, 1);
        assert_eq!(g, Poly::from_int_terms(&f, &[(1, &[1]), (-1, &[0])]));
    }

    #[test]
    fn gcd_bivariate() {
        let f = CycloField::new(1);
        // (x + y)(x - y + 1) and (x + y)(x*y + 2)
        let common = Poly::from_int_terms(&f, &[(1, &[1, 0]), (1, &[0, 1])]);
        let u = Poly::from_int_terms(&f, &[(1, &[1, 0]), (-1, &[0, 1]), (1, &[0, 0])]);
        let v = Poly::from_int_terms(&f, &[(1, &[1, 1]), (2, &[0, 0])]);
        let a = common.mul(&u, &f);
        let b = common.mul(&v, &f);
        let g = gcd(&a, &b, &f, 2);
        assert_eq!(g, common.make_monic(&f));
        let one = gcd(&u, &v, &f, 2);
        assert!(one.is_one());
        assert!(certainly_coprime(&u, &v, &f, 2));
        assert!(!certainly_coprime(&a, &b, &f, 2));
        // x^2 + 1 and x - zeta share a factor over Q(zeta_4)
        let f4 = CycloField::new(4);
        let x2 = Poly::from_int_terms(&f4, &[(1, &[2]), (1, &[0])]);
        let lin = Poly::monomial(f4.one(), vec![1]).sub(&Poly::monomial(f4.zeta_pow(1), vec![0]), &f4);
        assert!(!certainly_coprime(&x2, &lin, &f4, 1));
        assert_eq!(gcd(&x2, &lin, &f4, 1), lin);
    }

    #[test]
    fn exact_division_detects_remainder() {
        let f = CycloField::new(1);
        let a = Poly::from_int_terms(&f, &[(1, &[2, 0]), (-1, &[0, 2])]);
        let b = Poly::from_int_terms(&f, &[(1, &[1, 0]), (1, &[0, 1])]);
        let q = a.div_exact(&b, &f).unwrap();
        assert_eq!(q, Poly::from_int_terms(&f, &[(1, &[1, 0]), (-1, &[0, 1])]));
        let c = Poly::from_int_terms(&f, &[(1, &[1, 0]), (2, &[0, 1])]);
        assert!(a.div_exact(&c, &f).is_none());
    }
}
