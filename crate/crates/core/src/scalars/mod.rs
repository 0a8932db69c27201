//! Exact coefficient field Q(zeta_N)(q_1, ..., q_m).
//!
//! A [`Field`] fixes the cyclotomic order `N` and the names of the formal
//! parameters; every [`Scalar`] carries a handle to its field. Parameters are
//! treated as algebraically independent transcendentals, so a scalar is a
//! reduced fraction of Laurent polynomials in the parameters with
//! coefficients in Q(zeta_N).
//!
//! Representation is canonical: numerator and denominator are coprime, the
//! denominator has nonnegative exponents, no parameter divides it, and its
//! leading coefficient (lexicographic order on exponent vectors) is 1. Two
//! scalars are equal exactly when their representations are.

mod cyclo;
pub mod modp;
mod parse;
mod poly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use cyclo::{Cyc, CycloField};
use poly::Poly;

pub use modp::Specialization;
pub use parse::ParseError;

/// User-facing description of a coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    /// `N` in Q(zeta_N); 1 means plain rationals.
    pub cyclotomic_order: u32,
    /// Ordered, distinct identifiers of the formal parameters.
    #[serde(default)]
    pub parameter_names: Vec<String>,
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec {
            cyclotomic_order: 1,
            parameter_names: Vec::new(),
        }
    }

    pub fn new(cyclotomic_order: u32, names: &[&str]) -> Self {
        FieldSpec {
            cyclotomic_order,
            parameter_names: names.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("cyclotomic order must be at least 1")]
    ZeroOrder,
    #[error("parameter name `{0}` is not a valid identifier")]
    BadName(String),
    #[error("parameter name `{0}` is declared twice")]
    DuplicateName(String),
    #[error("`zeta` is reserved for the root of unity")]
    ReservedName,
}

#[derive(Debug)]
struct FieldInner {
    spec: FieldSpec,
    cyclo: CycloField,
}

/// Shared handle to a coefficient field.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Field(Q(zeta_{})({}))",
            self.0.spec.cyclotomic_order,
            self.0.spec.parameter_names.join(",")
        )
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        if spec.cyclotomic_order == 0 {
            return Err(FieldError::ZeroOrder);
        }
        for (i, name) in spec.parameter_names.iter().enumerate() {
            if !valid_ident(name) {
                return Err(FieldError::BadName(name.clone()));
            }
            if name == "zeta" {
                return Err(FieldError::ReservedName);
            }
            if spec.parameter_names[..i].contains(name) {
                return Err(FieldError::DuplicateName(name.clone()));
            }
        }
        let cyclo = CycloField::new(spec.cyclotomic_order);
        Ok(Field(Arc::new(FieldInner { spec, cyclo })))
    }

    /// Q(q) with a single parameter named `q`.
    pub fn generic_q() -> Self {
        Field::new(FieldSpec::new(1, &["q"])).expect("valid field")
    }

    pub fn rationals() -> Self {
        Field::new(FieldSpec::rational()).expect("valid field")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn cyclotomic_order(&self) -> u32 {
        self.0.spec.cyclotomic_order
    }

    pub fn nvars(&self) -> usize {
        self.0.spec.parameter_names.len()
    }

    pub fn parameter_names(&self) -> &[String] {
        &self.0.spec.parameter_names
    }

    fn cyc(&self) -> &CycloField {
        &self.0.cyclo
    }

    pub fn zero(&self) -> Scalar {
        Scalar {
            field: self.clone(),
            num: Poly::zero(),
            den: Poly::constant(self.cyc().one(), self.nvars()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator");
        self.from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(&self, r: BigRational) -> Scalar {
        let c = self.cyc().from_rational(r);
        Scalar {
            field: self.clone(),
            num: Poly::constant(c, self.nvars()),
            den: Poly::constant(self.cyc().one(), self.nvars()),
        }
    }

    /// zeta_N^k.
    pub fn zeta_pow(&self, k: i64) -> Scalar {
        Scalar {
            field: self.clone(),
            num: Poly::constant(self.cyc().zeta_pow(k), self.nvars()),
            den: Poly::constant(self.cyc().one(), self.nvars()),
        }
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.0.spec.parameter_names.iter().position(|n| n == name)
    }

    /// The parameter with the given index raised to `exp`.
    pub fn param_pow(&self, index: usize, exp: i32) -> Scalar {
        assert!(index < self.nvars(), "parameter index out of range");
        let mut e = vec![0; self.nvars()];
        e[index] = exp;
        Scalar {
            field: self.clone(),
            num: Poly::monomial(self.cyc().one(), e),
            den: Poly::constant(self.cyc().one(), self.nvars()),
        }
    }

    /// Parameter by name.
    pub fn param(&self, name: &str) -> Option<Scalar> {
        self.param_index(name).map(|i| self.param_pow(i, 1))
    }

    /// Parse a scalar expression in this field.
    pub fn parse(&self, text: &str) -> Result<Scalar, ParseError> {
        parse::parse_scalar(text, self)
    }

    /// (x / g, y / g) for g = gcd(x, y), up to monomial factors.
    fn cancel(&self, x: &Poly, y: &Poly) -> (Poly, Poly) {
        let f = self.cyc();
        let n = self.nvars();
        if x.is_constant() || y.is_constant() {
            return (x.clone(), y.clone());
        }
        let (mx, my) = (x.min_exponents(n), y.min_exponents(n));
        let x0 = x.shift(&mx.iter().map(|e| -e).collect::<Vec<_>>());
        let y0 = y.shift(&my.iter().map(|e| -e).collect::<Vec<_>>());
        let g = poly::gcd(&x0, &y0, f, n);
        if g.is_constant() {
            return (x.clone(), y.clone());
        }
        (
            x0.div_exact(&g, f).expect("gcd divides").shift(&mx),
            y0.div_exact(&g, f).expect("gcd divides").shift(&my),
        )
    }

    fn make(&self, num: Poly, den: Poly) -> Scalar {
        Scalar::normalized(self.clone(), num, den)
    }
}

/// Element of a [`Field`].
#[derive(Clone)]
pub struct Scalar {
    field: Field,
    num: Poly,
    den: Poly,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

/// Multiplicative order of a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitOrder {
    Finite(u64),
    Infinite,
    /// Not a monomial of the Laurent ring, so in particular not a root of unity.
    NotAUnit,
}

impl UnitOrder {
    pub fn is_root_of_unity(self) -> bool {
        matches!(self, UnitOrder::Finite(_))
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("the order of zero is undefined")]
pub struct ZeroOrderError;

/// Outcome of searching for the least `k >= 0` with `base^k = target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSearch {
    Found(u64),
    /// Proven that no such exponent exists.
    Impossible,
    /// Nothing found below the scan cap and no proof of impossibility.
    NotFoundUpTo(u64),
}

impl Scalar {
    fn normalized(field: Field, num: Poly, den: Poly) -> Scalar {
        let f = field.cyc();
        let n = field.nvars();
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return field.zero();
        }
        if let Some(c) = den.constant_value() {
            if CycloField::is_one(c) {
                return Scalar { field, num, den };
            }
            let inv = f.inv(c);
            return Scalar {
                num: num.scale(&inv, f),
                den: Poly::constant(f.one(), n),
                field,
            };
        }
        let mn = num.min_exponents(n);
        let md = den.min_exponents(n);
        let neg_mn: Vec<i32> = mn.iter().map(|x| -x).collect();
        let neg_md: Vec<i32> = md.iter().map(|x| -x).collect();
        let mut num0 = num.shift(&neg_mn);
        let mut den0 = den.shift(&neg_md);
        if !den0.is_constant() {
            let g = poly::gcd(&num0, &den0, f, n);
            if !g.is_constant() {
                num0 = num0.div_exact(&g, f).expect("gcd divides numerator");
                den0 = den0.div_exact(&g, f).expect("gcd divides denominator");
            }
        }
        let lc = den0.leading().unwrap().1.clone();
        if !CycloField::is_one(&lc) {
            let inv = f.inv(&lc);
            num0 = num0.scale(&inv, f);
            den0 = den0.scale(&inv, f);
        }
        let mono: Vec<i32> = mn.iter().zip(&md).map(|(a, b)| a - b).collect();
        Scalar {
            field,
            num: num0.shift(&mono),
            den: den0,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn check_field(&self, other: &Scalar) {
        assert!(
            self.field == other.field,
            "scalars from different fields: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn zero_like(&self) -> Scalar {
        self.field.zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.field.one()
    }

    /// Whether this is a Laurent polynomial (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Coefficient and exponent vector when the scalar is c * q^e.
    fn as_monomial(&self) -> Option<(&Cyc, &Vec<i32>)> {
        if !self.den.is_one() || self.num.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.num.terms.iter().next().unwrap();
        Some((c, e))
    }

    /// The value as a rational number when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let (c, e) = self.as_monomial()?;
        if e.iter().any(|&x| x != 0) {
            return None;
        }
        CycloField::as_rational(c).cloned()
    }

    /// Multiplicative inverse, or None for zero.
    pub fn checked_inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let f = self.field.cyc();
        let n = self.field.nvars();
        // num = x^m * P with P free of variable factors; 1/num = den / num
        if let Some((c, e)) = self.as_monomial() {
            let neg: Vec<i32> = e.iter().map(|x| -x).collect();
            return Some(Scalar {
                field: self.field.clone(),
                num: Poly::monomial(f.inv(c), neg),
                den: Poly::constant(f.one(), n),
            });
        }
        let mn = self.num.min_exponents(n);
        let neg: Vec<i32> = mn.iter().map(|x| -x).collect();
        let p = self.num.shift(&neg);
        let new_num = self.den.shift(&neg);
        // p and den are already coprime; only normalization of the new denominator
        let lc = p.leading().unwrap().1.clone();
        let inv = f.inv(&lc);
        if p.is_constant() {
            return Some(Scalar {
                field: self.field.clone(),
                num: new_num.scale(&inv, f),
                den: Poly::constant(f.one(), n),
            });
        }
        Some(Scalar {
            field: self.field.clone(),
            num: new_num.scale(&inv, f),
            den: p.scale(&inv, f),
        })
    }

    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("inverse of zero scalar")
    }

    /// Integer power; negative exponents invert (panics on zero base).
    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.inv().pow(-e);
        }
        if e == 0 {
            return self.one_like();
        }
        let f = self.field.cyc();
        let n = self.field.nvars();
        if let Some((c, ex)) = self.as_monomial() {
            let ex2: Vec<i32> = ex.iter().map(|x| x * e as i32).collect();
            return Scalar {
                field: self.field.clone(),
                num: Poly::monomial(f.pow(c, e as u64), ex2),
                den: Poly::constant(f.one(), n),
            };
        }
        // powers of coprime num/den stay coprime; only the monic leading normalization matters
        let num = self.num.pow(e as u64, f, n);
        let den = self.den.pow(e as u64, f, n);
        Scalar {
            field: self.field.clone(),
            num,
            den,
        }
    }

    /// Multiplicative order (root-of-unity test).
    pub fn unit_order(&self) -> Result<UnitOrder, ZeroOrderError> {
        if self.is_zero() {
            return Err(ZeroOrderError);
        }
        let Some((c, e)) = self.as_monomial() else {
            return Ok(UnitOrder::NotAUnit);
        };
        if e.iter().any(|&x| x != 0) {
            return Ok(UnitOrder::Infinite);
        }
        // roots of unity in Q(zeta_N) are the lcm(2, N)-th roots
        let f = self.field.cyc();
        let l = (f.order as u64).lcm(&2);
        if !CycloField::is_one(&f.pow(c, l)) {
            return Ok(UnitOrder::Infinite);
        }
        let mut divisors: Vec<u64> = (1..=l).filter(|d| l.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            if CycloField::is_one(&f.pow(c, d)) {
                return Ok(UnitOrder::Finite(d));
            }
        }
        unreachable!("order divides lcm(2, N)")
    }

    /// Whether the scalar is a root of unity (of any order, including 1).
    pub fn is_root_of_unity(&self) -> bool {
        matches!(self.unit_order(), Ok(UnitOrder::Finite(_)))
    }

    /// Least `k >= 0` with `self^k == target`, certified where possible.
    pub fn solve_power(&self, target: &Scalar, cap: u64) -> PowerSearch {
        self.check_field(target);
        if target.is_one() {
            return PowerSearch::Found(0);
        }
        if self.is_zero() {
            return if target.is_zero() {
                PowerSearch::Found(1)
            } else {
                PowerSearch::Impossible
            };
        }
        if target.is_zero() {
            return PowerSearch::Impossible;
        }
        let order = self.unit_order().expect("nonzero");
        match order {
            UnitOrder::Finite(h) => {
                let mut acc = self.clone();
                for k in 1..h {
                    if &acc == target {
                        return PowerSearch::Found(k);
                    }
                    acc = &acc * self;
                }
                PowerSearch::Impossible
            }
            UnitOrder::Infinite => {
                let (c, e) = self.as_monomial().unwrap();
                let Some((tc, te)) = target.as_monomial() else {
                    return PowerSearch::Impossible;
                };
                if e.iter().any(|&x| x != 0) {
                    // exponent vectors must be proportional with a nonnegative integer factor
                    let mut k: Option<i64> = None;
                    for (a, b) in e.iter().zip(te) {
                        if *a == 0 {
                            if *b != 0 {
                                return PowerSearch::Impossible;
                            }
                            continue;
                        }
                        if b % a != 0 {
                            return PowerSearch::Impossible;
                        }
                        let r = (b / a) as i64;
                        if k.is_some_and(|k0| k0 != r) {
                            return PowerSearch::Impossible;
                        }
                        k = Some(r);
                    }
                    let k = k.unwrap();
                    if k < 0 {
                        return PowerSearch::Impossible;
                    }
                    let f = self.field.cyc();
                    return if f.pow(c, k as u64) == *tc {
                        PowerSearch::Found(k as u64)
                    } else {
                        PowerSearch::Impossible
                    };
                }
                if te.iter().any(|&x| x != 0) {
                    return PowerSearch::Impossible;
                }
                // constant base of infinite order
                let f = self.field.cyc();
                if let (Some(hb), Some(ht)) =
                    (CycloField::rational_height(c), CycloField::rational_height(tc))
                {
                    // height of a reduced rational is multiplicative under powers
                    let mut acc = c.clone();
                    let mut h = hb.clone();
                    let mut k = 1u64;
                    while h <= ht {
                        if acc == *tc {
                            return PowerSearch::Found(k);
                        }
                        acc = f.mul(&acc, c);
                        h *= &hb;
                        k += 1;
                    }
                    return PowerSearch::Impossible;
                }
                let mut acc = c.clone();
                for k in 1..=cap {
                    if acc == *tc {
                        return PowerSearch::Found(k);
                    }
                    acc = f.mul(&acc, c);
                }
                PowerSearch::NotFoundUpTo(cap)
            }
            UnitOrder::NotAUnit => {
                // span of exponents in each variable is additive under powers
                let n = self.field.nvars();
                let span = |p: &Poly| -> Vec<i32> {
                    let lo = p.min_exponents(n);
                    let hi = p.max_exponents(n);
                    hi.iter().zip(&lo).map(|(a, b)| a - b).collect()
                };
                let sb: Vec<i32> = span(&self.num).into_iter().chain(span(&self.den)).collect();
                let st: Vec<i32> = span(&target.num)
                    .into_iter()
                    .chain(span(&target.den))
                    .collect();
                let (idx, base_span) = sb
                    .iter()
                    .enumerate()
                    .find(|(_, s)| **s > 0)
                    .map(|(i, s)| (i, *s))
                    .expect("non-monomial has positive span");
                if st[idx] % base_span != 0 {
                    return PowerSearch::Impossible;
                }
                let k = (st[idx] / base_span) as i64;
                if self.pow(k) == *target {
                    PowerSearch::Found(k as u64)
                } else {
                    PowerSearch::Impossible
                }
            }
        }
    }

    /// Number of parameter-monomial terms in the numerator.
    pub fn numerator_terms(&self) -> usize {
        self.num.terms.len()
    }

    /// Render in the input grammar.
    pub fn to_expr(&self) -> String {
        self.to_string()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Terms of a cyclotomic coefficient as (rational, zeta exponent).
fn cyc_terms(c: &Cyc) -> Vec<(BigRational, usize)> {
    c.iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(k, r)| (r.clone(), k))
        .collect()
}

fn fmt_monomial(names: &[String], e: &[i32]) -> Vec<String> {
    names
        .iter()
        .zip(e)
        .filter(|(_, &x)| x != 0)
        .map(|(n, &x)| if x == 1 { n.clone() } else { format!("{n}^{x}") })
        .collect()
}

fn fmt_zeta(k: usize) -> Option<String> {
    match k {
        0 => None,
        1 => Some("zeta".to_string()),
        _ => Some(format!("zeta^{k}")),
    }
}

/// Signed term strings: each entry is (negative, body).
fn poly_terms(p: &Poly, names: &[String]) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    for (e, c) in p.terms.iter().rev() {
        let mono = fmt_monomial(names, e);
        let ct = cyc_terms(c);
        if ct.len() == 1 {
            let (r, k) = &ct[0];
            let neg = r.is_negative();
            let a = r.abs();
            let mut factors: Vec<String> = Vec::new();
            let zeta = fmt_zeta(*k);
            if !a.is_one() || (zeta.is_none() && mono.is_empty()) {
                factors.push(fmt_rational(&a));
            }
            factors.extend(zeta);
            factors.extend(mono);
            out.push((neg, factors.join("*")));
        } else {
            // parenthesized cyclotomic coefficient
            let mut inner = String::new();
            for (i, (r, k)) in ct.iter().enumerate() {
                let neg = r.is_negative();
                let a = r.abs();
                let mut factors = Vec::new();
                let zeta = fmt_zeta(*k);
                if !a.is_one() || zeta.is_none() {
                    factors.push(fmt_rational(&a));
                }
                factors.extend(zeta);
                let body = factors.join("*");
                if i == 0 {
                    if neg {
                        inner.push('-');
                    }
                } else {
                    inner.push_str(if neg { " - " } else { " + " });
                }
                inner.push_str(&body);
            }
            let mut factors = vec![format!("({inner})")];
            factors.extend(mono);
            out.push((false, factors.join("*")));
        }
    }
    out
}

fn fmt_poly(p: &Poly, names: &[String]) -> String {
    let terms = poly_terms(p, names);
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                s.push('-');
            }
        } else {
            s.push_str(if *neg { " - " } else { " + " });
        }
        s.push_str(body);
    }
    s
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.field.parameter_names();
        if self.den.is_one() {
            write!(f, "{}", fmt_poly(&self.num, names))
        } else {
            write!(
                f,
                "({})/({})",
                fmt_poly(&self.num, names),
                fmt_poly(&self.den, names)
            )
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.check_field(rhs);
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let f = self.field.cyc();
        if self.den == rhs.den {
            if self.den.is_one() {
                return Scalar {
                    field: self.field.clone(),
                    num: self.num.add(&rhs.num, f),
                    den: self.den.clone(),
                };
            }
            return self.field.make(self.num.add(&rhs.num, f), self.den.clone());
        }
        // a/b + c/d = (a (d/g) + c (b/g)) / (b d / g) with g = gcd(b, d)
        let (b1, d1) = self.field.cancel(&self.den, &rhs.den);
        let num = self.num.mul(&d1, f).add(&rhs.num.mul(&b1, f), f);
        let den = self.den.mul(&d1, f);
        self.field.make(num, den)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            num: self.num.neg(self.field.cyc()),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        let f = self.field.cyc();
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar {
                field: self.field.clone(),
                num: self.num.mul(&rhs.num, f),
                den: self.den.clone(),
            };
        }
        // cancel across before multiplying
        let (a, d) = self.field.cancel(&self.num, &rhs.den);
        let (c, b) = self.field.cancel(&rhs.num, &self.den);
        self.field.make(a.mul(&c, f), b.mul(&d, f))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Serialize any displayable value as its string form.
pub fn serialize_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The q-number (n)_s = 1 + s + ... + s^(n-1).
pub fn q_number(n: u64, s: &Scalar) -> Scalar {
    let mut acc = s.zero_like();
    let mut p = s.one_like();
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * s;
    }
    acc
}

/// (n)!_s = (1)_s (2)_s ... (n)_s.
pub fn q_factorial(n: u64, s: &Scalar) -> Scalar {
    (1..=n).fold(s.one_like(), |acc, k| &acc * &q_number(k, s))
}

/// Gaussian binomial coefficient, computed by the recursion
/// binom(n,k) = s^(n-k) binom(n-1,k-1) + binom(n-1,k), valid at roots of unity.
pub fn q_binomial(n: u64, k: u64, s: &Scalar) -> Scalar {
    if k > n {
        return s.zero_like();
    }
    // row[j] = binom(m, j)_s
    let mut row: Vec<Scalar> = vec![s.one_like()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let a = if j >= 1 {
                &s.pow((m - j) as i64) * &row[(j - 1) as usize]
            } else {
                s.zero_like()
            };
            let b = if j < m {
                row[j as usize].clone()
            } else {
                s.zero_like()
            };
            next.push(&a + &b);
        }
        row = next;
    }
    row[k as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq() -> Field {
        Field::new(FieldSpec::new(1, &["q", "p"])).unwrap()
    }

    #[test]
    fn canonical_fraction() {
        let f = fq();
        let q = f.param("q").unwrap();
        let one = f.one();
        // (q^2 - 1)/(q - 1) = q + 1
        let a = &(&q * &q) - &one;
        let b = &q - &one;
        assert_eq!(&a / &b, &q + &one);
        // (1/q) * q = 1
        assert!((&q.inv() * &q).is_one());
        let x = &one / &(&one - &q);
        let y = &(-&one) / &(&q - &one);
        assert_eq!(x, y);
    }

    #[test]
    fn unit_orders() {
        let f = Field::new(FieldSpec::new(6, &["q"])).unwrap();
        assert_eq!(f.zeta_pow(2).unit_order(), Ok(UnitOrder::Finite(3)));
        assert_eq!(f.zeta_pow(1).unit_order(), Ok(UnitOrder::Finite(6)));
        assert_eq!(f.from_int(-1).unit_order(), Ok(UnitOrder::Finite(2)));
        assert_eq!(f.one().unit_order(), Ok(UnitOrder::Finite(1)));
        assert_eq!(f.param("q").unwrap().unit_order(), Ok(UnitOrder::Infinite));
        assert_eq!(f.from_int(2).unit_order(), Ok(UnitOrder::Infinite));
        let s = &f.one() + &f.param("q").unwrap();
        assert_eq!(s.unit_order(), Ok(UnitOrder::NotAUnit));
        assert_eq!(f.zero().unit_order(), Err(ZeroOrderError));
        // -zeta_5 has order 10 in Q(zeta_5)
        let f5 = Field::new(FieldSpec::new(5, &[])).unwrap();
        assert_eq!((-f5.zeta_pow(1)).unit_order(), Ok(UnitOrder::Finite(10)));
    }

    #[test]
    fn q_numbers() {
        let f = Field::generic_q();
        let q = f.param("q").unwrap();
        assert_eq!(q_number(2, &q), &f.one() + &q);
        assert_eq!(q_binomial(2, 1, &q), &f.one() + &q);
        assert_eq!(q_factorial(3, &f.one()), f.from_int(6));
        assert_eq!(q_number(0, &q), f.zero());
        assert_eq!(q_binomial(4, 5, &q), f.zero());
    }

    #[test]
    fn power_search() {
        let f = fq();
        let q = f.param("q").unwrap();
        let p = f.param("p").unwrap();
        assert_eq!(q.solve_power(&q.pow(3), 50), PowerSearch::Found(3));
        assert_eq!(q.solve_power(&q.pow(-1), 50), PowerSearch::Impossible);
        assert_eq!(q.solve_power(&p, 50), PowerSearch::Impossible);
        let two = f.from_int(2);
        assert_eq!(two.solve_power(&f.from_int(8), 50), PowerSearch::Found(3));
        assert_eq!(two.solve_power(&f.from_int(6), 50), PowerSearch::Impossible);
        let s = &f.one() + &q;
        assert_eq!(s.solve_power(&s.pow(4), 50), PowerSearch::Found(4));
        assert_eq!(s.solve_power(&q, 50), PowerSearch::Impossible);
        let f5 = Field::new(FieldSpec::new(5, &[])).unwrap();
        let z = f5.zeta_pow(1);
        assert_eq!(z.solve_power(&f5.zeta_pow(3), 50), PowerSearch::Found(3));
        assert_eq!(z.solve_power(&f5.from_int(-1), 50), PowerSearch::Impossible);
    }

    #[test]
    fn display_roundtrips() {
        let f = Field::new(FieldSpec::new(4, &["q"])).unwrap();
        for text in ["q^-1*zeta", "1/2 + q", "(1 + zeta)*q^2 - 3", "(q)/(1 - q)", "-zeta", "0"] {
            let s = f.parse(text).unwrap();
            let again = f.parse(&s.to_string()).unwrap();
            assert_eq!(s, again, "{text} -> {s}");
        }
    }
}
