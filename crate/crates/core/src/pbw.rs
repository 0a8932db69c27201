//! Degree-truncated Nichols algebras: the basis words G_I, PBW generators
//! S_I = G_I ∩ L, heights and the root multiset.
//!
//! Degree n of the Nichols ideal is the common kernel of the right
//! skew-derivations composed with the projection to degree n - 1, so the
//! quotient is built block by block over multidegrees. Inside a block the
//! words are scanned from the lexicographically largest down; a word joins
//! the basis exactly when its image is independent of the images of the
//! larger words already seen.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::freealg::{BraidingSpec, FreeAlgError, FreeElement};
use crate::scalars::modp::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::scalars::{Field, Scalar, Specialization, UnitOrder};
use crate::series::{expand_product, Height, RootFactor};
use crate::weyl::{m_entry, MEntry};
use crate::words::{is_lyndon, words_of_degree, Word};

/// Default bound on the number of words in a single total degree.
pub const DEFAULT_WORD_LIMIT: usize = 1 << 20;

/// Specializations tried before giving up on agreement.
const MAX_TRIALS: u64 = 8;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PbwError {
    #[error("max degree must be at least 1")]
    ZeroDegree,
    #[error("degree {degree} has {words} words, over the limit of {limit}")]
    WordLimit {
        degree: usize,
        words: usize,
        limit: usize,
    },
    #[error("element has degree {degree}, beyond the truncation at {max}")]
    BeyondTruncation { degree: usize, max: usize },
    #[error("growth witness needs rank at least 2")]
    RankTooSmall,
    #[error("no pair (i, j) with certified unbounded ad-strings; every m_ij is finite or uncertified")]
    WitnessInapplicable,
    #[error("no two of {0} prime-field specializations agreed on the basis")]
    NoAgreement(u64),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
}

/// How block ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Elimination over the scalar field itself.
    Exact,
    /// Elimination over F_p at random points; a basis found this way is
    /// independent over the scalar field, and two points must agree.
    Modular,
}

/// One multidegree of the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub degree: Vec<i64>,
    /// Basis words in decreasing lexicographic order.
    pub basis: Vec<Word>,
    members: BTreeSet<Word>,
}

impl Block {
    fn new(degree: Vec<i64>, basis: Vec<Word>) -> Self {
        let members = basis.iter().cloned().collect();
        Block {
            degree,
            basis,
            members,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.contains(w)
    }
}

/// T(V)/I(V) through total degree `max_degree`.
#[derive(Debug, Clone)]
pub struct TruncatedQuotient {
    spec: BraidingSpec,
    max_degree: usize,
    blocks: BTreeMap<Vec<i64>, Block>,
    engine: Engine,
    primes: Vec<u64>,
}

trait Arith: Sync {
    type E: Clone + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct Exact(Field);

impl Arith for Exact {
    type E = Scalar;
    fn zero(&self) -> Scalar {
        self.0.zero()
    }
    fn one(&self) -> Scalar {
        self.0.one()
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a - b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn inv(&self, a: &Scalar) -> Scalar {
        a.inv()
    }
}

struct Modular(u64);

impl Arith for Modular {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.0)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.0)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
}

/// Gaussian elimination that remembers how each reduced row was formed.
struct Eliminator<'a, A: Arith> {
    ar: &'a A,
    rows: Vec<(usize, Vec<A::E>, Vec<(usize, A::E)>)>,
    nbasis: usize,
}

impl<'a, A: Arith> Eliminator<'a, A> {
    fn new(ar: &'a A) -> Self {
        Eliminator {
            ar,
            rows: Vec::new(),
            nbasis: 0,
        }
    }

    /// Ok(index) for a new basis element, or Err(coordinates) in the basis so far.
    fn insert(&mut self, mut v: Vec<A::E>) -> Result<usize, Vec<A::E>> {
        let ar = self.ar;
        let mut comb = vec![ar.zero(); self.nbasis];
        for (p, row, rc) in &self.rows {
            if ar.is_zero(&v[*p]) {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !ar.is_zero(r) {
                    *x = ar.sub(x, &ar.mul(&f, r));
                }
            }
            for (k, c) in rc {
                comb[*k] = ar.add(&comb[*k], &ar.mul(&f, c));
            }
        }
        let Some(p) = v.iter().position(|x| !ar.is_zero(x)) else {
            return Err(comb);
        };
        let inv = ar.inv(&v[p]);
        let n = self.nbasis;
        self.nbasis += 1;
        let row: Vec<A::E> = v.iter().map(|x| ar.mul(x, &inv)).collect();
        let minus_inv = ar.sub(&ar.zero(), &inv);
        let mut rc: Vec<(usize, A::E)> = comb
            .iter()
            .enumerate()
            .filter(|(_, c)| !ar.is_zero(c))
            .map(|(k, c)| (k, ar.mul(c, &minus_inv)))
            .collect();
        rc.push((n, inv));
        self.rows.push((p, row, rc));
        Ok(n)
    }
}

/// Multidegrees of total degree n in N_0^theta, lexicographically.
fn multidegrees(theta: usize, n: usize) -> Vec<Vec<i64>> {
    fn rec(theta: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() + 1 == theta {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(theta, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(theta, n as i64, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A block during construction: basis and coordinates of every word.
struct WorkBlock<E> {
    basis: Vec<Word>,
    reduction: HashMap<Word, Vec<E>>,
}

fn build_block<A: Arith>(
    ar: &A,
    q: &[Vec<A::E>],
    deg: &[i64],
    blocks: &HashMap<Vec<i64>, WorkBlock<A::E>>,
) -> WorkBlock<A::E> {
    let theta = q.len();
    let mut offsets = Vec::with_capacity(theta);
    let mut below = Vec::with_capacity(theta);
    let mut len = 0;
    for i in 0..theta {
        offsets.push(len);
        if deg[i] > 0 {
            let mut d = deg.to_vec();
            d[i] -= 1;
            let b = &blocks[&d];
            len += b.basis.len();
            below.push(Some(b));
        } else {
            below.push(None);
        }
    }
    let mut words = words_of_degree(deg);
    words.reverse();
    let mut elim = Eliminator::new(ar);
    let mut basis = Vec::new();
    let mut raw = Vec::with_capacity(words.len());
    for w in words {
        let mut v = vec![ar.zero(); len];
        let letters = w.letters();
        for i in 0..theta {
            let Some(b) = below[i] else { continue };
            // right derivative: remove an occurrence of x_i, weight by the
            // braiding with the letters to its right
            let mut weight = ar.one();
            for k in (0..letters.len()).rev() {
                if letters[k] == i {
                    let coords = &b.reduction[&w.remove_at(k)];
                    for (t, c) in coords.iter().enumerate() {
                        if !ar.is_zero(c) {
                            let slot = &mut v[offsets[i] + t];
                            *slot = ar.add(slot, &ar.mul(&weight, c));
                        }
                    }
                }
                weight = ar.mul(&weight, &q[i][letters[k]]);
            }
        }
        let r = elim.insert(v);
        if r.is_ok() {
            basis.push(w.clone());
        }
        raw.push((w, r));
    }
    let dim = basis.len();
    let reduction = raw
        .into_iter()
        .map(|(w, r)| {
            let coords = match r {
                Ok(k) => {
                    let mut c = vec![ar.zero(); dim];
                    c[k] = ar.one();
                    c
                }
                Err(mut comb) => {
                    comb.resize(dim, ar.zero());
                    comb
                }
            };
            (w, coords)
        })
        .collect();
    WorkBlock { basis, reduction }
}

fn build_tower<A: Arith>(ar: &A, q: &[Vec<A::E>], max_degree: usize) -> BTreeMap<Vec<i64>, Vec<Word>> {
    let theta = q.len();
    let zero = vec![0; theta];
    let mut bases = BTreeMap::new();
    bases.insert(zero.clone(), vec![Word::empty()]);
    let mut red = HashMap::new();
    red.insert(Word::empty(), vec![ar.one()]);
    let mut prev: HashMap<Vec<i64>, WorkBlock<A::E>> = HashMap::new();
    prev.insert(
        zero,
        WorkBlock {
            basis: vec![Word::empty()],
            reduction: red,
        },
    );
    for n in 1..=max_degree {
        // a block is only read by the next total degree
        prev = multidegrees(theta, n)
            .into_par_iter()
            .map(|d| {
                let b = build_block(ar, q, &d, &prev);
                (d, b)
            })
            .collect();
        for (d, b) in &prev {
            bases.insert(d.clone(), b.basis.clone());
        }
    }
    bases
}

fn check_limit(theta: usize, max_degree: usize, word_limit: usize) -> Result<(), PbwError> {
    if max_degree == 0 {
        return Err(PbwError::ZeroDegree);
    }
    let words = (theta as f64).powi(max_degree as i32);
    if words > word_limit as f64 {
        return Err(PbwError::WordLimit {
            degree: max_degree,
            words: words.min(usize::MAX as f64) as usize,
            limit: word_limit,
        });
    }
    Ok(())
}

/// Compute the Nichols algebra of `spec` through total degree `max_degree`.
pub fn nichols_truncate(spec: &BraidingSpec, max_degree: usize) -> Result<TruncatedQuotient, PbwError> {
    nichols_truncate_with(spec, max_degree, DEFAULT_WORD_LIMIT, Engine::Modular)
}

/// Same, eliminating over the scalar field (slow for parameters).
pub fn nichols_truncate_exact(spec: &BraidingSpec, max_degree: usize) -> Result<TruncatedQuotient, PbwError> {
    nichols_truncate_with(spec, max_degree, DEFAULT_WORD_LIMIT, Engine::Exact)
}

pub fn nichols_truncate_with_limit(
    spec: &BraidingSpec,
    max_degree: usize,
    word_limit: usize,
) -> Result<TruncatedQuotient, PbwError> {
    nichols_truncate_with(spec, max_degree, word_limit, Engine::Modular)
}

fn dominates(a: &BTreeMap<Vec<i64>, Vec<Word>>, b: &BTreeMap<Vec<i64>, Vec<Word>>) -> bool {
    a.iter().all(|(d, x)| x.len() >= b[d].len())
}

pub fn nichols_truncate_with(
    spec: &BraidingSpec,
    max_degree: usize,
    word_limit: usize,
    engine: Engine,
) -> Result<TruncatedQuotient, PbwError> {
    check_limit(spec.theta(), max_degree, word_limit)?;
    let (bases, primes) = match engine {
        Engine::Exact => {
            let ar = Exact(spec.field().clone());
            (build_tower(&ar, spec.matrix(), max_degree), Vec::new())
        }
        Engine::Modular => modular_bases(spec, max_degree)?,
    };
    let blocks = bases
        .into_iter()
        .map(|(d, b)| (d.clone(), Block::new(d, b)))
        .collect();
    Ok(TruncatedQuotient {
        spec: spec.clone(),
        max_degree,
        blocks,
        engine,
        primes,
    })
}

type Bases = BTreeMap<Vec<i64>, Vec<Word>>;

fn modular_bases(spec: &BraidingSpec, max_degree: usize) -> Result<(Bases, Vec<u64>), PbwError> {
    // ranks at a point never exceed the generic ranks, so a run that
    // dominates blockwise and is confirmed by a second point is kept
    let mut runs: Vec<(u64, Bases)> = Vec::new();
    for seed in 1..=MAX_TRIALS {
        let s = Specialization::random(spec.field(), seed);
        let q: Option<Vec<Vec<u64>>> = spec
            .matrix()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.specialize(&s).filter(|&v| v != 0))
                    .collect()
            })
            .collect();
        let Some(q) = q else { continue };
        let bases = build_tower(&Modular(s.p), &q, max_degree);
        if let Some((p, _)) = runs.iter().find(|(_, b)| *b == bases) {
            return Ok((bases, vec![*p, s.p]));
        }
        runs.push((s.p, bases));
    }
    let best = runs
        .iter()
        .position(|(_, a)| runs.iter().all(|(_, b)| dominates(a, b)));
    match best {
        Some(k) if runs.len() >= 2 => {
            let (p, b) = runs.swap_remove(k);
            Ok((b, vec![p]))
        }
        _ => Err(PbwError::NoAgreement(MAX_TRIALS)),
    }
}

/// Whether a lies in the Nichols ideal: a homogeneous element of positive
/// degree vanishes exactly when all its right skew-derivatives do.
pub fn vanishes_in_nichols(a: &FreeElement) -> bool {
    a.components().values().all(|c| {
        if c.is_zero() {
            return true;
        }
        if c.total_degree() == 0 {
            return false;
        }
        (0..c.spec().theta()).all(|i| vanishes_in_nichols(&c.skew_derivative_right(i)))
    })
}

impl TruncatedQuotient {
    pub fn spec(&self) -> &BraidingSpec {
        &self.spec
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// Primes of the agreeing specializations (empty for the exact engine).
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.values()
    }

    pub fn block(&self, degree: &[i64]) -> Option<&Block> {
        self.blocks.get(degree)
    }

    /// dim of the quotient in each multidegree.
    pub fn dims_by_multidegree(&self) -> BTreeMap<Vec<i64>, usize> {
        self.blocks
            .iter()
            .map(|(d, b)| (d.clone(), b.dim()))
            .collect()
    }

    /// dim in each total degree 0..=max_degree.
    pub fn dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_degree + 1];
        for (d, b) in &self.blocks {
            out[d.iter().sum::<i64>() as usize] += b.dim();
        }
        out
    }

    /// Whether `w` lies in G_I (only meaningful for lengths up to the cap).
    pub fn is_basis_word(&self, w: &Word) -> bool {
        let d = w.degree(self.spec.theta());
        self.blocks.get(&d).is_some_and(|b| b.contains(w))
    }

    /// Whether `a` maps to zero in the quotient; exact for any engine.
    pub fn reduces_to_zero(&self, a: &FreeElement) -> Result<bool, PbwError> {
        if a.total_degree() > self.max_degree {
            return Err(PbwError::BeyondTruncation {
                degree: a.total_degree(),
                max: self.max_degree,
            });
        }
        Ok(vanishes_in_nichols(a))
    }
}

/// Height predicted from q_uu alone: finite iff 2 <= ord(q_uu) < inf.
pub fn star_height(q_uu: &Scalar) -> Height {
    match q_uu.unit_order() {
        Ok(UnitOrder::Finite(h)) if h >= 2 => Height::Finite(h),
        _ => Height::Infinite,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PbwGenerator {
    pub word: Word,
    pub degree: Vec<i64>,
    #[serde(serialize_with = "crate::scalars::serialize_display")]
    pub q_uu: Scalar,
    /// Height assigned from the order of q_uu.
    pub height: Height,
    /// Least t with u^t outside G_I, if some t |u| <= max degree has it.
    pub observed_height: Option<u64>,
    /// The height could not be confirmed inside the truncation.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootEntry {
    pub vector: Vec<i64>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PbwReport {
    pub max_degree: usize,
    pub dims: Vec<usize>,
    pub generators: Vec<PbwGenerator>,
    pub roots: Vec<RootEntry>,
    /// Some generator is unresolved, the count check failed, or generators
    /// still appear in the top degree.
    pub truncated: bool,
    pub notes: Vec<String>,
}

impl PbwReport {
    pub fn root_count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Factors with the observed heights (infinite when unobserved).
    pub fn observed_factors(&self) -> Vec<RootFactor> {
        self.generators
            .iter()
            .map(|g| {
                RootFactor::new(
                    g.degree.clone(),
                    g.observed_height.map_or(Height::Infinite, Height::Finite),
                )
            })
            .collect()
    }
}

/// Read off S_I, heights and the root multiset.
pub fn pbw_extract(t: &TruncatedQuotient) -> PbwReport {
    let spec = &t.spec;
    let theta = spec.theta();
    let mut generators = Vec::new();
    let mut notes = Vec::new();
    let mut all_words: Vec<&Word> = t.blocks.values().flat_map(|b| b.basis.iter()).collect();
    all_words.sort();
    for u in all_words {
        if u.is_empty() || !is_lyndon(u).unwrap_or(false) {
            continue;
        }
        let degree = u.degree(theta);
        let q_uu = spec.chi(&degree, &degree);
        let height = star_height(&q_uu);
        let mut observed = None;
        let mut k = 2u64;
        if t.is_basis_word(u) {
            while (k as usize) * u.len() <= t.max_degree {
                if !t.is_basis_word(&u.pow(k as usize)) {
                    observed = Some(k);
                    break;
                }
                k += 1;
            }
        }
        let truncated = height.is_finite() && observed.is_none();
        match (height, observed) {
            (Height::Finite(h), Some(o)) if o != h => notes.push(format!(
                "{u}: observed height {o} differs from ord(q_uu) = {h}"
            )),
            (Height::Infinite, Some(o)) => notes.push(format!(
                "{u}: observed height {o} although ord(q_uu) gives infinite height"
            )),
            _ => {}
        }
        generators.push(PbwGenerator {
            word: u.clone(),
            degree,
            q_uu,
            height,
            observed_height: observed,
            truncated,
        });
    }
    let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for g in &generators {
        *counts.entry(g.degree.clone()).or_insert(0) += 1;
    }
    let roots: Vec<RootEntry> = counts
        .into_iter()
        .map(|(vector, multiplicity)| RootEntry {
            vector,
            multiplicity,
        })
        .collect();
    let top = generators.iter().any(|g| g.word.len() == t.max_degree);
    let mut report = PbwReport {
        max_degree: t.max_degree,
        dims: t.dims(),
        generators,
        roots,
        truncated: false,
        notes,
    };
    let check = pbw_count_check(t, &report);
    if top {
        report
            .notes
            .push(format!("PBW generators still appear in degree {}", t.max_degree));
    }
    if let Some(n) = check.first_mismatch {
        report.notes.push(format!("PBW count mismatch in degree {n}"));
    }
    report.truncated =
        top || check.first_mismatch.is_some() || report.generators.iter().any(|g| g.truncated);
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCount {
    pub degree: usize,
    pub predicted: i64,
    pub actual: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountCheck {
    pub rows: Vec<DegreeCount>,
    /// Lowest total degree where some multidegree disagrees.
    pub first_mismatch: Option<usize>,
}

impl CountCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compare the PBW monomial count with the actual block dimensions.
pub fn pbw_count_check(t: &TruncatedQuotient, r: &PbwReport) -> CountCheck {
    let theta = t.spec.theta();
    let predicted = expand_product(&r.observed_factors(), theta, t.max_degree)
        .expect("generator degrees are nonzero");
    let mut first_mismatch = None;
    for (d, b) in &t.blocks {
        if predicted.coefficient(d) != b.dim() as i64 {
            let n = d.iter().sum::<i64>() as usize;
            first_mismatch = Some(first_mismatch.map_or(n, |m: usize| m.min(n)));
        }
    }
    let pt = predicted.by_total_degree();
    let rows = t
        .dims()
        .into_iter()
        .enumerate()
        .map(|(n, a)| DegreeCount {
            degree: n,
            predicted: pt[n],
            actual: a as i64,
        })
        .collect();
    CountCheck {
        rows,
        first_mismatch,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthWitness {
    /// The pair (i, j), 0-based, with (ad x_i)^m (x_j) never vanishing.
    pub pair: (usize, usize),
    pub degree: usize,
    /// Number of hyperwords [x_i^{n_1} x_j]...[x_i^{n_r} x_j] of degree n.
    pub lower_bound: u64,
}

/// Certify dim B^n(V) >= 2^(n-1) from a pair with certified-undefined m_ij.
pub fn growth_witness(spec: &BraidingSpec, n: usize, m_cap: u64) -> Result<GrowthWitness, PbwError> {
    let theta = spec.theta();
    if theta < 2 {
        return Err(PbwError::RankTooSmall);
    }
    for i in 0..theta {
        for j in 0..theta {
            if i == j {
                continue;
            }
            let p = spec.q(i, j) * spec.q(j, i);
            if m_entry(spec.q(i, i), &p, m_cap) == (MEntry::Undefined { certified: true }) {
                return Ok(GrowthWitness {
                    pair: (i, j),
                    degree: n,
                    lower_bound: if n == 0 { 1 } else { 1u64 << (n - 1) },
                });
            }
        }
    }
    Err(PbwError::WitnessInapplicable)
}

/// The words of the growth family: length n, letters x_i, x_j, ending in x_j.
pub fn growth_family(pair: (usize, usize), n: usize) -> Vec<Word> {
    let (i, j) = pair;
    if n == 0 {
        return vec![Word::empty()];
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut v: Vec<usize> = (0..n - 1).map(|k| if mask >> k & 1 == 1 { j } else { i }).collect();
        v.push(j);
        out.push(Word::new(v));
    }
    out
}
