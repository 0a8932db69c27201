//! The tensor algebra T(V) of a braided vector space of diagonal type,
//! identified with the free algebra on x_1, ..., x_theta.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::scalars::{Field, ParseError, Scalar};
use crate::words::{is_lyndon, lyndon_factorize, shirshov_split, Word, WordError};

pub const DEFAULT_MAX_DEGREE: usize = 12;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("braiding matrix must be square and nonempty")]
    NotSquare,
    #[error("braiding entry q{i}{j} is zero", i = .0 + 1, j = .1 + 1)]
    ZeroEntry(usize, usize),
    #[error("braiding entry q{i}{j}: {err}", i = .0 + 1, j = .1 + 1, err = .2)]
    Entry(usize, usize, ParseError),
    #[error("entries belong to different coefficient fields")]
    FieldMismatch,
    #[error("elements built over different braidings")]
    SpecMismatch,
    #[error("total degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("ad-power needs distinct indices, got {i} twice", i = .0 + 1)]
    SameIndex(usize),
    #[error("index {index} out of range for rank {theta}")]
    IndexOutOfRange { index: usize, theta: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug)]
struct BraidingInner {
    field: Field,
    q: Vec<Vec<Scalar>>,
    max_degree: usize,
}

/// A theta x theta matrix of nonzero scalars, realizing
/// chi(alpha, beta) = prod q_ij^(alpha_i beta_j). Cheap to clone.
#[derive(Clone, Debug)]
pub struct BraidingSpec(Arc<BraidingInner>);

impl PartialEq for BraidingSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.field == other.0.field && self.0.q == other.0.q)
    }
}

impl Eq for BraidingSpec {}

impl BraidingSpec {
    pub fn new(field: &Field, q: Vec<Vec<Scalar>>) -> Result<Self, FreeAlgError> {
        let n = q.len();
        if n == 0 || q.iter().any(|r| r.len() != n) {
            return Err(FreeAlgError::NotSquare);
        }
        for (i, row) in q.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.field() != field {
                    return Err(FreeAlgError::FieldMismatch);
                }
                if x.is_zero() {
                    return Err(FreeAlgError::ZeroEntry(i, j));
                }
            }
        }
        Ok(BraidingSpec(Arc::new(BraidingInner {
            field: field.clone(),
            q,
            max_degree: DEFAULT_MAX_DEGREE,
        })))
    }

    /// Build from scalar expressions, row by row.
    pub fn parse<S: AsRef<str>>(field: &Field, rows: &[Vec<S>]) -> Result<Self, FreeAlgError> {
        let mut q = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, s) in row.iter().enumerate() {
                r.push(
                    field
                        .parse(s.as_ref())
                        .map_err(|e| FreeAlgError::Entry(i, j, e))?,
                );
            }
            q.push(r);
        }
        BraidingSpec::new(field, q)
    }

    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        BraidingSpec(Arc::new(BraidingInner {
            field: self.0.field.clone(),
            q: self.0.q.clone(),
            max_degree,
        }))
    }

    pub fn theta(&self) -> usize {
        self.0.q.len()
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn max_degree(&self) -> usize {
        self.0.max_degree
    }

    /// q_ij, 0-based.
    pub fn q(&self, i: usize, j: usize) -> &Scalar {
        &self.0.q[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.0.q
    }

    /// chi(alpha, beta) = prod_{i,j} q_ij^(alpha_i beta_j).
    pub fn chi(&self, alpha: &[i64], beta: &[i64]) -> Scalar {
        let mut acc = self.0.field.one();
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in beta.iter().enumerate() {
                if b != 0 {
                    acc = &acc * &self.0.q[i][j].pow(a * b);
                }
            }
        }
        acc
    }

    /// q_{u,v} = chi(deg u, deg v) for words.
    pub fn chi_words(&self, u: &Word, v: &Word) -> Scalar {
        let mut acc = self.0.field.one();
        for &a in u.letters() {
            for &b in v.letters() {
                acc = &acc * &self.0.q[a][b];
            }
        }
        acc
    }

    fn check_index(&self, i: usize) -> Result<(), FreeAlgError> {
        if i >= self.theta() {
            return Err(FreeAlgError::IndexOutOfRange {
                index: i + 1,
                theta: self.theta(),
            });
        }
        Ok(())
    }
}

/// Element of T(V): finitely many words with nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct FreeElement {
    spec: BraidingSpec,
    terms: BTreeMap<Word, Scalar>,
}

fn add_into(map: &mut BTreeMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(w) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl FreeElement {
    pub fn zero(spec: &BraidingSpec) -> Self {
        FreeElement {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &BraidingSpec) -> Self {
        FreeElement::word(spec, Word::empty())
    }

    pub fn word(spec: &BraidingSpec, w: Word) -> Self {
        FreeElement::term(spec, w, spec.field().one())
    }

    pub fn term(spec: &BraidingSpec, w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        add_into(&mut terms, w, c);
        FreeElement {
            spec: spec.clone(),
            terms,
        }
    }

    pub fn letter(spec: &BraidingSpec, i: usize) -> Self {
        FreeElement::word(spec, Word::letter(i))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(spec: &BraidingSpec, it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (w, c) in it {
            add_into(&mut terms, w, c);
        }
        FreeElement {
            spec: spec.clone(),
            terms,
        }
    }

    pub fn spec(&self) -> &BraidingSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.spec.field().zero())
    }

    /// Largest word length occurring (0 for zero).
    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// The common multidegree when the element is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<Vec<i64>> {
        let theta = self.spec.theta();
        let mut it = self.terms.keys().map(|w| w.degree(theta));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Split into Z^theta-homogeneous components.
    pub fn components(&self) -> BTreeMap<Vec<i64>, FreeElement> {
        let theta = self.spec.theta();
        let mut out: BTreeMap<Vec<i64>, FreeElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.degree(theta))
                .or_insert_with(|| FreeElement::zero(&self.spec))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero(&self.spec);
        }
        FreeElement {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x * c))
                .collect(),
        }
    }

    fn check_spec(&self, other: &FreeElement) -> Result<(), FreeAlgError> {
        if self.spec != other.spec {
            return Err(FreeAlgError::SpecMismatch);
        }
        Ok(())
    }

    fn check_cap(&self, degree: usize) -> Result<(), FreeAlgError> {
        let cap = self.spec.max_degree();
        if degree > cap {
            return Err(FreeAlgError::DegreeCap { degree, cap });
        }
        Ok(())
    }

    /// Concatenation product.
    pub fn multiply(&self, other: &FreeElement) -> Result<FreeElement, FreeAlgError> {
        self.check_spec(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(FreeElement::zero(&self.spec));
        }
        self.check_cap(self.total_degree() + other.total_degree())?;
        let mut terms = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                add_into(&mut terms, u.concat(v), a * b);
            }
        }
        Ok(FreeElement {
            spec: self.spec.clone(),
            terms,
        })
    }

    /// [a, b]_c = ab - chi(deg a, deg b) ba, extended bilinearly over
    /// homogeneous components.
    pub fn braided_bracket(&self, other: &FreeElement) -> Result<FreeElement, FreeAlgError> {
        self.check_spec(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(FreeElement::zero(&self.spec));
        }
        self.check_cap(self.total_degree() + other.total_degree())?;
        let mut terms = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                let chi = self.spec.chi_words(u, v);
                add_into(&mut terms, v.concat(u), -(&ab * &chi));
                add_into(&mut terms, u.concat(v), ab);
            }
        }
        Ok(FreeElement {
            spec: self.spec.clone(),
            terms,
        })
    }

    /// Braided coproduct, as an algebra map into the braided tensor square.
    pub fn coproduct(&self) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero(&self.spec);
        for (w, c) in &self.terms {
            for ((l, r), k) in word_coproduct(&self.spec, w) {
                out.add_term(l, r, c * &k);
            }
        }
        out
    }

    /// Right skew-derivation: coefficient of (- ⊗ x_i) in the coproduct.
    pub fn skew_derivative_right(&self, i: usize) -> FreeElement {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            for (u, k) in word_derivative_right(&self.spec, i, w) {
                add_into(&mut terms, u, c * &k);
            }
        }
        FreeElement {
            spec: self.spec.clone(),
            terms,
        }
    }

    /// Left skew-derivation: coefficient of (x_i ⊗ -) in the coproduct.
    pub fn skew_derivative_left(&self, i: usize) -> FreeElement {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let letters = w.letters();
            let mut factor = self.spec.field().one();
            for (k, &l) in letters.iter().enumerate() {
                if l == i {
                    add_into(&mut terms, w.remove_at(k), c * &factor);
                }
                factor = &factor * self.spec.q(l, i);
            }
        }
        FreeElement {
            spec: self.spec.clone(),
            terms,
        }
    }

    /// Re-expand a homogeneous element in the basis of monotone hyperwords;
    /// keys are the words u standing for [u]_c.
    pub fn to_hyperword_basis(&self) -> Result<BTreeMap<Word, Scalar>, FreeAlgError> {
        let mut rest = self.clone();
        let mut out = BTreeMap::new();
        let mut cache = BTreeMap::new();
        while let Some((u, c)) = rest.terms.iter().next().map(|(u, c)| (u.clone(), c.clone())) {
            let h = hyperword_cached(&self.spec, &u, &mut cache)?;
            rest = &rest - &h.scale(&c);
            out.insert(u, c);
        }
        Ok(out)
    }

    /// Render with custom letter names, e.g. `x1*x2 - q*x2*x1`.
    pub fn render_with(&self, letter: &dyn Fn(usize) -> String) -> String {
        render_terms(
            self.terms.iter().map(|(w, c)| {
                let word = if w.is_empty() {
                    String::new()
                } else {
                    w.letters()
                        .iter()
                        .map(|&l| letter(l))
                        .collect::<Vec<_>>()
                        .join("*")
                };
                (word, c.clone())
            }),
        )
    }
}

/// Render signed scalar-weighted monomials; empty monomial strings are units.
pub(crate) fn render_terms<I: IntoIterator<Item = (String, Scalar)>>(terms: I) -> String {
    let mut s = String::new();
    for (mono, c) in terms {
        let text = c.to_string();
        let single = !text.contains(" + ") && !text.contains(" - ") && !text.starts_with('(');
        let (neg, mag) = if single && text.starts_with('-') {
            (true, text[1..].to_string())
        } else {
            (false, text)
        };
        let body = match (mono.is_empty(), mag.as_str()) {
            (true, m) if single => m.to_string(),
            (true, m) => format!("({m})"),
            (false, "1") => mono,
            (false, m) if single => format!("{m}*{mono}"),
            (false, m) => format!("({m})*{mono}"),
        };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(&|l| format!("x{}", l + 1)))
    }
}

impl fmt::Debug for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeElement({self})")
    }
}

impl Add for &FreeElement {
    type Output = FreeElement;
    fn add(self, rhs: &FreeElement) -> FreeElement {
        assert!(self.spec == rhs.spec, "elements over different braidings");
        let mut terms = self.terms.clone();
        for (w, c) in &rhs.terms {
            add_into(&mut terms, w.clone(), c.clone());
        }
        FreeElement {
            spec: self.spec.clone(),
            terms,
        }
    }
}

impl Sub for &FreeElement {
    type Output = FreeElement;
    fn sub(self, rhs: &FreeElement) -> FreeElement {
        self + &(-rhs)
    }
}

impl Neg for &FreeElement {
    type Output = FreeElement;
    fn neg(self) -> FreeElement {
        FreeElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &FreeElement {
    type Output = FreeElement;
    /// Panics on spec mismatch or degree-cap overflow; see [`FreeElement::multiply`].
    fn mul(self, rhs: &FreeElement) -> FreeElement {
        self.multiply(rhs).expect("product within degree cap")
    }
}

/// Coproduct of a single word: every subset S of positions goes to the right
/// factor, weighted by q_{j_a j_b} over pairs a in S, b not in S, a < b.
pub fn word_coproduct(spec: &BraidingSpec, w: &Word) -> Vec<((Word, Word), Scalar)> {
    let letters = w.letters();
    let n = letters.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1u32 << n) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut coef = spec.field().one();
        for (a, &la) in letters.iter().enumerate() {
            if mask >> a & 1 == 1 {
                right.push(la);
                for (b, &lb) in letters.iter().enumerate().skip(a + 1) {
                    if mask >> b & 1 == 0 {
                        coef = &coef * spec.q(la, lb);
                    }
                }
            } else {
                left.push(la);
            }
        }
        out.push(((Word::new(left), Word::new(right)), coef));
    }
    out
}

/// Right skew-derivative of a word: sum over occurrences k of x_i of
/// (prod_{l > k} q_{i, j_l}) times the word with letter k removed.
pub fn word_derivative_right(spec: &BraidingSpec, i: usize, w: &Word) -> Vec<(Word, Scalar)> {
    let letters = w.letters();
    let mut out = Vec::new();
    let mut factor = spec.field().one();
    for k in (0..letters.len()).rev() {
        if letters[k] == i {
            out.push((w.remove_at(k), factor.clone()));
        }
        factor = &factor * spec.q(i, letters[k]);
    }
    out
}

/// Hyperletter [l]_c of a Lyndon word.
pub fn hyperletter(spec: &BraidingSpec, l: &Word) -> Result<FreeElement, FreeAlgError> {
    if !is_lyndon(l)? {
        return Err(WordError::NotLyndon(l.to_string()).into());
    }
    hyperword_cached(spec, l, &mut BTreeMap::new())
}

/// Hyperword [u]_c: the product of the hyperletters of the Lyndon factors.
pub fn hyperword(spec: &BraidingSpec, u: &Word) -> Result<FreeElement, FreeAlgError> {
    hyperword_cached(spec, u, &mut BTreeMap::new())
}

fn hyperword_cached(
    spec: &BraidingSpec,
    u: &Word,
    cache: &mut BTreeMap<Word, FreeElement>,
) -> Result<FreeElement, FreeAlgError> {
    if let Some(h) = cache.get(u) {
        return Ok(h.clone());
    }
    u.check_alphabet(spec.theta())?;
    if u.len() > spec.max_degree() {
        return Err(FreeAlgError::DegreeCap {
            degree: u.len(),
            cap: spec.max_degree(),
        });
    }
    let h = if u.len() <= 1 {
        FreeElement::word(spec, u.clone())
    } else if is_lyndon(u)? {
        let (a, b) = shirshov_split(u)?;
        let ha = hyperword_cached(spec, &a, cache)?;
        let hb = hyperword_cached(spec, &b, cache)?;
        ha.braided_bracket(&hb)?
    } else {
        let mut acc = FreeElement::one(spec);
        for f in lyndon_factorize(u)? {
            let hf = hyperword_cached(spec, &f, cache)?;
            acc = acc.multiply(&hf)?;
        }
        acc
    };
    cache.insert(u.clone(), h.clone());
    Ok(h)
}

/// (ad_c x_i)^r (x_j), by iterated brackets [x_i, -]_c.
pub fn ad_power(spec: &BraidingSpec, i: usize, j: usize, r: usize) -> Result<FreeElement, FreeAlgError> {
    spec.check_index(i)?;
    spec.check_index(j)?;
    if i == j {
        return Err(FreeAlgError::SameIndex(i));
    }
    let xi = FreeElement::letter(spec, i);
    let mut acc = FreeElement::letter(spec, j);
    for _ in 0..r {
        acc = xi.braided_bracket(&acc)?;
    }
    Ok(acc)
}

/// Element of T(V) ⊗ T(V).
#[derive(Clone, PartialEq, Eq)]
pub struct TensorSquareElement {
    spec: BraidingSpec,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorSquareElement {
    pub fn zero(spec: &BraidingSpec) -> Self {
        TensorSquareElement {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn pure(a: &FreeElement, b: &FreeElement) -> Self {
        let mut out = TensorSquareElement::zero(&a.spec);
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                out.add_term(u.clone(), v.clone(), x * y);
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, l: &Word, r: &Word) -> Scalar {
        self.terms
            .get(&(l.clone(), r.clone()))
            .cloned()
            .unwrap_or_else(|| self.spec.field().zero())
    }

    fn add_term(&mut self, l: Word, r: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((l, r)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn sum(&self, other: &TensorSquareElement) -> TensorSquareElement {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    /// Braided tensor product: (a ⊗ b)(c ⊗ d) = chi(deg b, deg c) ac ⊗ bd.
    pub fn braided_mul(&self, other: &TensorSquareElement) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero(&self.spec);
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let k = self.spec.chi_words(b, c);
                out.add_term(a.concat(c), b.concat(d), &(x * y) * &k);
            }
        }
        out
    }

    /// (ε ⊗ id): keep terms whose left factor is empty.
    pub fn counit_left(&self) -> FreeElement {
        FreeElement::from_terms(
            &self.spec,
            self.terms
                .iter()
                .filter(|((l, _), _)| l.is_empty())
                .map(|((_, r), c)| (r.clone(), c.clone())),
        )
    }

    /// (id ⊗ ε): keep terms whose right factor is empty.
    pub fn counit_right(&self) -> FreeElement {
        FreeElement::from_terms(
            &self.spec,
            self.terms
                .iter()
                .filter(|((_, r), _)| r.is_empty())
                .map(|((l, _), c)| (l.clone(), c.clone())),
        )
    }
}

impl fmt::Debug for TensorSquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, r), c)| format!("({c}) {l} ⊗ {r}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;

    fn generic2() -> (Field, BraidingSpec) {
        let f = Field::new(FieldSpec::new(1, &["a", "b", "c", "d"])).unwrap();
        let spec = BraidingSpec::parse(&f, &[vec!["a", "b"], vec!["c", "d"]]).unwrap();
        (f, spec)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn chi_examples() {
        let (f, b) = generic2();
        assert_eq!(b.chi(&[1, 0], &[0, 1]), f.parse("b").unwrap());
        assert!(b.chi(&[0, 0], &[3, 1]).is_one());
        assert_eq!(b.chi(&[2, 0], &[0, 1]), f.parse("b^2").unwrap());
    }

    #[test]
    fn brackets_and_ad() {
        let (f, b) = generic2();
        let x1 = FreeElement::letter(&b, 0);
        let x2 = FreeElement::letter(&b, 1);
        let br = x1.braided_bracket(&x2).unwrap();
        assert_eq!(br.to_string(), "x1*x2 - b*x2*x1");
        let sq = x1.braided_bracket(&x1).unwrap();
        assert_eq!(sq.coefficient(&w("x1*x1")), f.parse("1 - a").unwrap());
        assert_eq!(ad_power(&b, 0, 1, 0).unwrap(), x2);
        let r2 = ad_power(&b, 0, 1, 2).unwrap();
        assert_eq!(r2.coefficient(&w("x1*x1*x2")), f.one());
        assert_eq!(r2.coefficient(&w("x1*x2*x1")), f.parse("-b*(1 + a)").unwrap());
        assert_eq!(r2.coefficient(&w("x2*x1*x1")), f.parse("b^2*a").unwrap());
        assert_eq!(ad_power(&b, 1, 1, 1), Err(FreeAlgError::SameIndex(1)));
        let h = hyperletter(&b, &w("x1*x1*x2")).unwrap();
        assert_eq!(h, r2);
        assert!(hyperletter(&b, &w("x2*x1")).is_err());
    }

    #[test]
    fn coproduct_of_x1x2() {
        let (f, b) = generic2();
        let d = FreeElement::word(&b, w("x1*x2")).coproduct();
        let one = Word::empty();
        assert_eq!(d.terms().len(), 4);
        assert!(d.coefficient(&w("x1*x2"), &one).is_one());
        assert!(d.coefficient(&w("x1"), &w("x2")).is_one());
        assert_eq!(d.coefficient(&w("x2"), &w("x1")), f.parse("b").unwrap());
        assert!(d.coefficient(&one, &w("x1*x2")).is_one());
        let x1 = FreeElement::letter(&b, 0);
        assert_eq!(x1.coproduct().terms().len(), 2);
    }

    #[test]
    fn derivatives() {
        let (f, b) = generic2();
        let x12 = FreeElement::word(&b, w("x1*x2"));
        assert_eq!(x12.skew_derivative_right(1), FreeElement::letter(&b, 0));
        assert_eq!(
            x12.skew_derivative_right(0),
            FreeElement::letter(&b, 1).scale(&f.parse("b").unwrap())
        );
        assert_eq!(
            FreeElement::letter(&b, 0).skew_derivative_right(0),
            FreeElement::one(&b)
        );
        assert!(FreeElement::letter(&b, 1).skew_derivative_right(0).is_zero());
        // left derivative agrees with the (x_i ⊗ -) coproduct component
        let e = FreeElement::word(&b, w("x2*x1*x2*x1"));
        let d = e.coproduct();
        for i in 0..2 {
            let from_cop = FreeElement::from_terms(
                &b,
                d.terms()
                    .iter()
                    .filter(|((l, _), _)| *l == Word::letter(i))
                    .map(|((_, r), c)| (r.clone(), c.clone())),
            );
            assert_eq!(e.skew_derivative_left(i), from_cop);
            let from_cop = FreeElement::from_terms(
                &b,
                d.terms()
                    .iter()
                    .filter(|((_, r), _)| *r == Word::letter(i))
                    .map(|((l, _), c)| (l.clone(), c.clone())),
            );
            assert_eq!(e.skew_derivative_right(i), from_cop);
        }
    }

    #[test]
    fn degree_cap_refuses() {
        let (_, b) = generic2();
        let b = b.with_max_degree(3);
        let x = FreeElement::word(&b, w("x1*x2"));
        assert!(matches!(
            x.multiply(&x),
            Err(FreeAlgError::DegreeCap { degree: 4, cap: 3 })
        ));
    }

    #[test]
    fn hyperword_expansion_roundtrip() {
        let (_, b) = generic2();
        let e = FreeElement::word(&b, w("x2*x1*x1"));
        let exp = e.to_hyperword_basis().unwrap();
        let mut back = FreeElement::zero(&b);
        for (u, c) in exp {
            back = &back + &hyperword(&b, &u).unwrap().scale(&c);
        }
        assert_eq!(back, e);
    }
}
