//! The Weyl groupoid of a bilinear form: m_ij tables, reflections of ordered
//! bases with their transformed braiding matrices, and breadth-first
//! exploration from the canonical basis.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::freealg::BraidingSpec;
use crate::scalars::{q_number, PowerSearch, Scalar};

pub const DEFAULT_M_CAP: u64 = 50;
pub const DEFAULT_STATE_CAP: usize = 10_000;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("s_{i} is undefined at this basis: m_{i}{j} has no value", i = .0 + 1, j = .1 + 1)]
    ReflectionUndefined(usize, usize),
    #[error("index {index} out of range for rank {theta}")]
    IndexOutOfRange { index: usize, theta: usize },
    #[error("group closure exceeded {0} elements")]
    GroupCap(usize),
    #[error("matrices have different sizes")]
    RankMismatch,
}

/// Entry of an m-table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MEntry {
    Defined(i64),
    /// No m exists; `certified` is false when only a bounded scan failed.
    Undefined { certified: bool },
}

impl MEntry {
    pub fn value(self) -> Option<i64> {
        match self {
            MEntry::Defined(m) => Some(m),
            MEntry::Undefined { .. } => None,
        }
    }
}

impl fmt::Display for MEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MEntry::Defined(m) => write!(f, "{m}"),
            MEntry::Undefined { certified: true } => write!(f, "undefined"),
            MEntry::Undefined { certified: false } => write!(f, "undefined-up-to-cap"),
        }
    }
}

impl Serialize for MEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MEntry::Defined(m) => s.serialize_i64(*m),
            other => s.collect_str(other),
        }
    }
}

/// min { m >= 0 : (m+1)_{q_ii} (q_ii^m p - 1) = 0 } with p = q_ij q_ji.
pub fn m_entry(q_ii: &Scalar, p: &Scalar, cap: u64) -> MEntry {
    // (m+1)_{q_ii} vanishes first at m = ord(q_ii) - 1 when that order is >= 2
    let from_number = match q_ii.unit_order() {
        Ok(crate::scalars::UnitOrder::Finite(h)) if h >= 2 => Some(h as i64 - 1),
        _ => None,
    };
    let from_product = match q_ii.inv().solve_power(p, cap) {
        PowerSearch::Found(k) => Some(Ok(k as i64)),
        PowerSearch::Impossible => None,
        PowerSearch::NotFoundUpTo(_) => Some(Err(())),
    };
    match (from_number, from_product) {
        (Some(a), Some(Ok(b))) => MEntry::Defined(a.min(b)),
        (Some(a), _) => MEntry::Defined(a),
        (None, Some(Ok(b))) => MEntry::Defined(b),
        (None, None) => MEntry::Undefined { certified: true },
        (None, Some(Err(()))) => MEntry::Undefined { certified: false },
    }
}

/// Direct evaluation of the defining condition at a given m.
pub fn m_condition_holds(q_ii: &Scalar, p: &Scalar, m: u64) -> bool {
    let a = q_number(m + 1, q_ii);
    let b = &(&q_ii.pow(m as i64) * p) - &q_ii.one_like();
    (&a * &b).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MTable(pub Vec<Vec<MEntry>>);

impl MTable {
    pub fn get(&self, i: usize, j: usize) -> MEntry {
        self.0[i][j]
    }

    pub fn row_defined(&self, i: usize) -> Option<Vec<i64>> {
        self.0[i].iter().map(|e| e.value()).collect()
    }

    pub fn fully_defined(&self) -> bool {
        self.0.iter().flatten().all(|e| e.value().is_some())
    }
}

/// m-table of a braiding matrix; the diagonal is -2.
pub fn m_table(q: &[Vec<Scalar>], cap: u64) -> MTable {
    let n = q.len();
    MTable(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            MEntry::Defined(-2)
                        } else {
                            m_entry(&q[i][i], &(&q[i][j] * &q[j][i]), cap)
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// A point of the groupoid: an ordered basis with its braiding matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupoidState {
    /// Columns are the basis vectors in E-coordinates: `basis[r][c]` is
    /// coordinate r of f_c.
    pub basis: IntMatrix,
    #[serde(serialize_with = "serialize_matrix")]
    pub q: Vec<Vec<Scalar>>,
    pub m: MTable,
}

fn serialize_matrix<S: Serializer>(q: &[Vec<Scalar>], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = q
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    strs.serialize(s)
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|r| (0..m).map(|c| (0..k).map(|t| a[r][t] * b[t][c]).sum()).collect())
        .collect()
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            v.extend((0..n).map(|c| if c == r { BigRational::one() } else { BigRational::zero() }));
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        }
    }
    m.into_iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        x.to_integer().to_i64()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// The reflection s_{i,F} in F-coordinates: column j is e_j + m_ij e_i.
pub fn reflection_in_basis(m_row: &[i64], i: usize) -> IntMatrix {
    let n = m_row.len();
    let mut r = identity(n);
    for j in 0..n {
        r[i][j] += if j == i { -2 } else { m_row[j] };
    }
    r
}

impl GroupoidState {
    /// The canonical basis E with the given braiding.
    pub fn initial(spec: &BraidingSpec, m_cap: u64) -> Self {
        let q = spec.matrix().to_vec();
        GroupoidState {
            basis: identity(spec.theta()),
            m: m_table(&q, m_cap),
            q,
        }
    }

    pub fn theta(&self) -> usize {
        self.q.len()
    }

    /// Basis vectors f_c in E-coordinates.
    pub fn basis_vectors(&self) -> Vec<Vec<i64>> {
        let n = self.theta();
        (0..n).map(|c| (0..n).map(|r| self.basis[r][c]).collect()).collect()
    }

    /// s_{i,F} as a matrix in E-coordinates, when row i of m is defined.
    pub fn reflection_matrix(&self, i: usize) -> Option<IntMatrix> {
        let row = self.m.row_defined(i)?;
        let r = reflection_in_basis(&row, i);
        let inv = unimodular_inverse(&self.basis).expect("bases are unimodular");
        Some(mat_mul(&mat_mul(&self.basis, &r), &inv))
    }
}

/// Reflect at index i: u_j = f_j + m_ij f_i and
/// q'_rs = q_ii^(m_ir m_is) q_ri^(m_is) q_is^(m_ir) q_rs.
pub fn reflect(state: &GroupoidState, i: usize, m_cap: u64) -> Result<GroupoidState, WeylError> {
    let n = state.theta();
    if i >= n {
        return Err(WeylError::IndexOutOfRange {
            index: i + 1,
            theta: n,
        });
    }
    let Some(row) = state.m.row_defined(i) else {
        let j = (0..n).find(|&j| state.m.get(i, j).value().is_none()).unwrap();
        return Err(WeylError::ReflectionUndefined(i, j));
    };
    let q = &state.q;
    let mut nq = Vec::with_capacity(n);
    for r in 0..n {
        let mut nrow = Vec::with_capacity(n);
        for s in 0..n {
            let (mr, ms) = (row[r], row[s]);
            let v = &(&(&q[i][i].pow(mr * ms) * &q[r][i].pow(ms)) * &q[i][s].pow(mr)) * &q[r][s];
            nrow.push(v);
        }
        nq.push(nrow);
    }
    let mut basis = state.basis.clone();
    for j in 0..n {
        for r in 0..n {
            basis[r][j] = if j == i {
                -state.basis[r][i]
            } else {
                state.basis[r][j] + row[j] * state.basis[r][i]
            };
        }
    }
    Ok(GroupoidState {
        basis,
        m: m_table(&nq, m_cap),
        q: nq,
    })
}

/// chi evaluated on the columns of `basis`.
pub fn braiding_at_basis(spec: &BraidingSpec, basis: &IntMatrix) -> Vec<Vec<Scalar>> {
    let n = spec.theta();
    let cols: Vec<Vec<i64>> = (0..n).map(|c| (0..n).map(|r| basis[r][c]).collect()).collect();
    (0..n)
        .map(|r| (0..n).map(|s| spec.chi(&cols[r], &cols[s])).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Finite,
    ExceededCap(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub from: usize,
    pub index: usize,
    pub to: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupoidReport {
    pub states: Vec<GroupoidState>,
    pub arrows: Vec<Arrow>,
    pub verdict: Verdict,
    /// Union of all explored bases, the set Delta(chi).
    pub roots: BTreeSet<Vec<i64>>,
    pub standard: bool,
    pub w0_order: Option<u64>,
    /// Failed consistency checks; empty on a correct run.
    pub violations: Vec<String>,
}

impl GroupoidReport {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }
}

/// Breadth-first closure from E under every available reflection.
pub fn explore(spec: &BraidingSpec, state_cap: usize, m_cap: u64) -> GroupoidReport {
    let start = GroupoidState::initial(spec, m_cap);
    let mut states = vec![start.clone()];
    let mut index: HashMap<IntMatrix, usize> = HashMap::new();
    index.insert(start.basis.clone(), 0);
    let mut arrows = Vec::new();
    let mut violations = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut exceeded = false;
    let theta = spec.theta();
    while let Some(s) = queue.pop_front() {
        for i in 0..theta {
            let Ok(next) = reflect(&states[s], i, m_cap) else {
                continue;
            };
            // reflecting twice returns to the source
            match reflect(&next, i, m_cap) {
                Ok(back) if back == states[s] => {}
                _ => violations.push(format!("double reflection at {} from state {s}", i + 1)),
            }
            for j in 0..theta {
                if states[s].m.get(i, j) != next.m.get(i, j) {
                    violations.push(format!("m_{}{} changes under s_{} at state {s}", i + 1, j + 1, i + 1));
                }
            }
            if next.q != braiding_at_basis(spec, &next.basis) {
                violations.push(format!("reflected matrix disagrees with chi at state {s}, index {}", i + 1));
            }
            let to = match index.get(&next.basis) {
                Some(&t) => {
                    if states[t].q != next.q {
                        violations.push(format!("state {t} reached with two braiding matrices"));
                    }
                    t
                }
                None => {
                    if states.len() >= state_cap {
                        exceeded = true;
                        continue;
                    }
                    let t = states.len();
                    index.insert(next.basis.clone(), t);
                    states.push(next);
                    queue.push_back(t);
                    t
                }
            };
            arrows.push(Arrow { from: s, index: i, to });
        }
    }
    let roots = states.iter().flat_map(|s| s.basis_vectors()).collect();
    let mut report = GroupoidReport {
        states,
        arrows,
        verdict: if exceeded {
            Verdict::ExceededCap(state_cap)
        } else {
            Verdict::Finite
        },
        roots,
        standard: false,
        w0_order: None,
        violations,
    };
    report.standard = is_standard(&report);
    if report.standard {
        check_standard_relations(&mut report);
    }
    if report.verdict == Verdict::Finite {
        report.w0_order = w0_order(&report, state_cap.max(1)).ok();
    }
    report
}

/// s_{j, s_i(F)} = s_{i,F} s_{j,F} s_{i,F} on every arrow.
fn check_standard_relations(report: &mut GroupoidReport) {
    let mut bad = Vec::new();
    for a in &report.arrows {
        let src = &report.states[a.from];
        let dst = &report.states[a.to];
        let si = src.reflection_matrix(a.index).unwrap();
        for j in 0..src.theta() {
            let (Some(sj), Some(sj_new)) = (src.reflection_matrix(j), dst.reflection_matrix(j)) else {
                continue;
            };
            if sj_new != mat_mul(&mat_mul(&si, &sj), &si) {
                bad.push(format!(
                    "s_{} at state {} is not the conjugate by s_{}",
                    j + 1,
                    a.to,
                    a.index + 1
                ));
            }
        }
    }
    report.violations.extend(bad);
}

/// Every explored state has a fully defined m-table equal to the one at E.
pub fn is_standard(report: &GroupoidReport) -> bool {
    let m0 = &report.states[0].m;
    m0.fully_defined() && report.states.iter().all(|s| s.m == *m0)
}

/// |W_0(chi)|: the state count for standard chi, otherwise the order of the
/// group generated by all reflections in E-coordinates.
pub fn w0_order(report: &GroupoidReport, cap: usize) -> Result<u64, WeylError> {
    if report.standard && report.verdict == Verdict::Finite {
        return Ok(report.states.len() as u64);
    }
    let theta = report.states[0].theta();
    let mut gens: BTreeSet<IntMatrix> = BTreeSet::new();
    for a in &report.arrows {
        if let Some(m) = report.states[a.from].reflection_matrix(a.index) {
            gens.insert(m);
        }
    }
    let id = identity(theta);
    let mut seen: BTreeSet<IntMatrix> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = mat_mul(&g, s);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(WeylError::GroupCap(cap));
                }
                seen.insert(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Same diagonal and same products q_ij q_ji.
pub fn twist_equivalent(q: &[Vec<Scalar>], r: &[Vec<Scalar>]) -> bool {
    let n = q.len();
    if r.len() != n {
        return false;
    }
    (0..n).all(|i| {
        q[i][i] == r[i][i] && (0..n).all(|j| &q[i][j] * &q[j][i] == &r[i][j] * &r[j][i])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Equivalence {
    Equivalent,
    NotEquivalent,
    Inconclusive(usize),
}

fn search(
    a: &BraidingSpec,
    b: &BraidingSpec,
    cap: usize,
    m_cap: u64,
    matches: &dyn Fn(&[Vec<Scalar>], &[Vec<Scalar>]) -> bool,
) -> Equivalence {
    if a.theta() != b.theta() {
        return Equivalence::NotEquivalent;
    }
    let ra = explore(a, cap, m_cap);
    if ra.states.iter().any(|s| matches(&s.q, b.matrix())) {
        return Equivalence::Equivalent;
    }
    if ra.verdict == Verdict::Finite {
        return Equivalence::NotEquivalent;
    }
    let rb = explore(b, cap, m_cap);
    if rb.states.iter().any(|s| matches(&s.q, a.matrix())) {
        return Equivalence::Equivalent;
    }
    if rb.verdict == Verdict::Finite {
        return Equivalence::NotEquivalent;
    }
    Equivalence::Inconclusive(cap)
}

/// Some point of the groupoid of `a` carries exactly the matrix of `b`.
pub fn weyl_equivalent(a: &BraidingSpec, b: &BraidingSpec, cap: usize, m_cap: u64) -> Equivalence {
    search(a, b, cap, m_cap, &|x, y| x == y)
}

/// Some point of the groupoid of `a` is twist equivalent to `b`.
pub fn weyl_heckenberger_equivalent(
    a: &BraidingSpec,
    b: &BraidingSpec,
    cap: usize,
    m_cap: u64,
) -> Equivalence {
    search(a, b, cap, m_cap, &twist_equivalent)
}

/// Determinant of a small integer matrix (Laplace expansion).
pub fn determinant(a: &IntMatrix) -> i64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: IntMatrix = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| *x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * a[0][c] * determinant(&minor)
        })
        .sum()
}
