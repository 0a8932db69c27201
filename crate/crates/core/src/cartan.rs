//! Cartan-type braidings: exponent detection, finite-type classification,
//! the finite/infinite Gelfand-Kirillov decision and DJ normal forms.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::freealg::{ad_power, BraidingSpec, FreeAlgError, FreeElement};
use crate::scalars::{PowerSearch, Scalar, UnitOrder};
use crate::weyl::{m_entry, IntMatrix, MEntry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanData {
    pub a: IntMatrix,
    /// Connected components of the Dynkin diagram, 0-based, each sorted.
    pub components: Vec<Vec<usize>>,
    /// Minimal symmetrizer, when one exists.
    pub symmetrizer: Option<Vec<i64>>,
    pub finite_type: bool,
    /// One label per component, e.g. "A2" or "G2"; empty when not finite.
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NotCartanReason {
    DiagonalIsOne,
    NoExponent,
    /// The scan for an exponent hit its cap without a certificate.
    ExponentScanCapped,
    AsymmetricZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotCartan {
    /// The offending pair (i, j), 0-based.
    pub pair: (usize, usize),
    pub reason: NotCartanReason,
}

impl std::fmt::Display for NotCartan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (i, j) = (self.pair.0 + 1, self.pair.1 + 1);
        match self.reason {
            NotCartanReason::DiagonalIsOne => write!(f, "q_{i}{i} = 1"),
            NotCartanReason::NoExponent => write!(f, "q_{i}{j} q_{j}{i} is not a power q_{i}{i}^a with a <= 0"),
            NotCartanReason::ExponentScanCapped => write!(f, "no exponent found for ({i},{j}) within the scan cap"),
            NotCartanReason::AsymmetricZero => write!(f, "a_{i}{j} = 0 but a_{j}{i} != 0"),
        }
    }
}

/// Solve q_ij q_ji = q_ii^(a_ij) with 0 <= -a_ij < ord(q_ii).
pub fn detect_cartan(spec: &BraidingSpec, cap: u64) -> Result<CartanData, NotCartan> {
    let n = spec.theta();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        let qii = spec.q(i, i);
        if qii.is_one() {
            return Err(NotCartan {
                pair: (i, i),
                reason: NotCartanReason::DiagonalIsOne,
            });
        }
        a[i][i] = 2;
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = spec.q(i, j) * spec.q(j, i);
            match qii.inv().solve_power(&p, cap) {
                PowerSearch::Found(k) => a[i][j] = -(k as i64),
                PowerSearch::Impossible => {
                    return Err(NotCartan {
                        pair: (i, j),
                        reason: NotCartanReason::NoExponent,
                    })
                }
                PowerSearch::NotFoundUpTo(_) => {
                    return Err(NotCartan {
                        pair: (i, j),
                        reason: NotCartanReason::ExponentScanCapped,
                    })
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if (a[i][j] == 0) != (a[j][i] == 0) {
                return Err(NotCartan {
                    pair: (i, j),
                    reason: NotCartanReason::AsymmetricZero,
                });
            }
        }
    }
    Ok(classify_finite_type(&a))
}

pub fn dynkin_components(a: &IntMatrix) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && (a[i][j] != 0 || a[j][i] != 0) {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Minimal positive d with d_i a_ij = d_j a_ji, componentwise.
pub fn symmetrizer(a: &IntMatrix) -> Option<Vec<i64>> {
    let n = a.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    for comp in dynkin_components(a) {
        d[comp[0]] = Some(BigRational::from_integer(1.into()));
        let mut stack = vec![comp[0]];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().unwrap();
            for &j in &comp {
                if j == i || a[i][j] == 0 {
                    continue;
                }
                let dj = &di * BigRational::new(a[i][j].into(), a[j][i].into());
                match &d[j] {
                    Some(old) if *old != dj => return None,
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                }
            }
        }
        // clear denominators, then make the component minimal
        let lcm = comp
            .iter()
            .fold(num_bigint::BigInt::from(1), |l, &i| l.lcm(d[i].as_ref().unwrap().denom()));
        let scaled: Vec<num_bigint::BigInt> = comp
            .iter()
            .map(|&i| (d[i].as_ref().unwrap() * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = scaled.iter().fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
        for (&i, x) in comp.iter().zip(&scaled) {
            d[i] = Some(BigRational::from_integer(x / &g));
        }
    }
    d.into_iter()
        .map(|x| {
            let x = x?;
            if !x.is_positive() {
                return None;
            }
            i64::try_from(x.to_integer()).ok()
        })
        .collect()
}

/// Positive definiteness of a symmetric rational matrix via pivots.
fn positive_definite(b: &[Vec<BigRational>]) -> bool {
    let n = b.len();
    let mut m = b.to_vec();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for r in k + 1..n {
            let f = &m[r][k] / &m[k][k];
            for c in k..n {
                let t = &f * &m[k][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    true
}

pub fn classify_finite_type(a: &IntMatrix) -> CartanData {
    let components = dynkin_components(a);
    let sym = symmetrizer(a);
    let finite_type = match &sym {
        Some(d) => {
            let b: Vec<Vec<BigRational>> = a
                .iter()
                .enumerate()
                .map(|(i, row)| row.iter().map(|&x| BigRational::from_integer((d[i] * x).into())).collect())
                .collect();
            positive_definite(&b)
        }
        None => false,
    };
    let labels = if finite_type {
        components.iter().map(|c| component_label(a, c)).collect()
    } else {
        Vec::new()
    };
    CartanData {
        a: a.clone(),
        components,
        symmetrizer: sym,
        finite_type,
        labels,
    }
}

/// Name of a connected finite-type diagram.
fn component_label(a: &IntMatrix, comp: &[usize]) -> String {
    let n = comp.len();
    let mut degree = vec![0usize; n];
    let mut multiple: Option<(usize, usize, i64)> = None;
    for x in 0..n {
        for y in 0..n {
            let (i, j) = (comp[x], comp[y]);
            if x != y && a[i][j] != 0 {
                degree[x] += 1;
                let prod = a[i][j] * a[j][i];
                if prod > 1 && a[i][j] < -1 {
                    // row i holds the long entry: vertex i is short
                    multiple = Some((x, y, prod));
                }
            }
        }
    }
    match multiple {
        Some((_, _, 3)) => "G2".into(),
        Some((short, long, _)) => {
            if n == 2 {
                "B2".into()
            } else if degree[short] == 1 {
                format!("B{n}")
            } else if degree[long] == 1 {
                format!("C{n}")
            } else {
                "F4".into()
            }
        }
        None => {
            let Some(branch) = (0..n).find(|&x| degree[x] == 3) else {
                return format!("A{n}");
            };
            // arm lengths from the branch vertex
            let mut arms = Vec::new();
            for y in 0..n {
                if y == branch || a[comp[branch]][comp[y]] == 0 {
                    continue;
                }
                let (mut prev, mut cur, mut len) = (branch, y, 1);
                loop {
                    let next = (0..n).find(|&z| z != prev && z != cur && a[comp[cur]][comp[z]] != 0);
                    match next {
                        Some(z) => {
                            prev = cur;
                            cur = z;
                            len += 1;
                        }
                        None => break,
                    }
                }
                arms.push(len);
            }
            arms.sort_unstable();
            if arms[0] == 1 && arms[1] == 1 {
                format!("D{n}")
            } else {
                format!("E{n}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthWitnessKind {
    /// (ad x_i)^m (x_j) is nonzero for every m; 0-based pair.
    AdString { pair: (usize, usize) },
    /// A component whose Cartan matrix is not of finite type.
    NonFiniteType { component: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    FiniteGk {
        cartan: CartanData,
        #[serde(serialize_with = "serialize_relations")]
        serre_relations: Vec<SerreRelation>,
    },
    InfiniteGk { witness: GrowthWitnessKind },
    NotCartan { witness: NotCartan },
    Undecided { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerreRelation {
    pub i: usize,
    pub j: usize,
    pub power: usize,
    pub element: FreeElement,
}

fn serialize_relations<S: serde::Serializer>(rels: &[SerreRelation], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Rendered {
        i: usize,
        j: usize,
        power: usize,
        relation: String,
    }
    let out: Vec<Rendered> = rels
        .iter()
        .map(|r| Rendered {
            i: r.i + 1,
            j: r.j + 1,
            power: r.power,
            relation: r.element.to_string(),
        })
        .collect();
    out.serialize(s)
}

/// (ad x_i)^(1 - a_ij) (x_j) for every ordered pair i != j.
pub fn serre_relations(spec: &BraidingSpec, a: &IntMatrix) -> Result<Vec<SerreRelation>, FreeAlgError> {
    let n = spec.theta();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let power = (1 - a[i][j]) as usize;
            out.push(SerreRelation {
                i,
                j,
                power,
                element: ad_power(spec, i, j, power)?,
            });
        }
    }
    Ok(out)
}

fn is_root_of_unity(s: &Scalar) -> bool {
    matches!(s.unit_order(), Ok(UnitOrder::Finite(_)))
}

/// Finite or infinite GK dimension for a diagonal braiding.
pub fn decide_gk(spec: &BraidingSpec, generic_required: bool, cap: u64) -> Verdict {
    let n = spec.theta();
    let rou = (0..n).find(|&i| is_root_of_unity(spec.q(i, i)));
    if generic_required {
        if let Some(i) = rou {
            return Verdict::Undecided {
                reason: format!("q_{0}{0} is a root of unity", i + 1),
            };
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = spec.q(i, j) * spec.q(j, i);
            if m_entry(spec.q(i, i), &p, cap) == (MEntry::Undefined { certified: true }) {
                return Verdict::InfiniteGk {
                    witness: GrowthWitnessKind::AdString { pair: (i, j) },
                };
            }
        }
    }
    let cartan = match detect_cartan(spec, cap) {
        Ok(c) => c,
        Err(witness) => return Verdict::NotCartan { witness },
    };
    if let Some(i) = rou {
        return Verdict::Undecided {
            reason: format!("q_{0}{0} is a root of unity", i + 1),
        };
    }
    if !cartan.finite_type {
        let component = match &cartan.symmetrizer {
            Some(_) => cartan
                .components
                .iter()
                .find(|c| {
                    let sub: IntMatrix = c.iter().map(|&i| c.iter().map(|&j| cartan.a[i][j]).collect()).collect();
                    !classify_finite_type(&sub).finite_type
                })
                .cloned()
                .unwrap_or_else(|| (0..n).collect()),
            None => (0..n).collect(),
        };
        return Verdict::InfiniteGk {
            witness: GrowthWitnessKind::NonFiniteType { component },
        };
    }
    match serre_relations(spec, &cartan.a) {
        Ok(serre_relations) => Verdict::FiniteGk {
            cartan,
            serre_relations,
        },
        Err(e) => Verdict::Undecided {
            reason: e.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ComponentForm {
    /// q_ii = q_I^(d_i) and q_ij q_ji = q_I^(d_i a_ij) hold for this q_I.
    Solved {
        component: Vec<usize>,
        d: Vec<i64>,
        #[serde(serialize_with = "crate::scalars::serialize_display")]
        q_component: Scalar,
    },
    /// Cross-ratios are consistent but q_I^g is the best the field offers.
    ConstraintOnly {
        component: Vec<usize>,
        d: Vec<i64>,
        g: i64,
        #[serde(serialize_with = "crate::scalars::serialize_display")]
        q_component_power: Scalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum DjObstruction {
    #[error("Cartan matrix is not of finite type")]
    NotFinite,
    #[error("no symmetrizer")]
    NoSymmetrizer,
    #[error("q_{i}{i}^d_{j} != q_{j}{j}^d_{i}", i = .0 + 1, j = .1 + 1)]
    CrossRatio(usize, usize),
    #[error("q_{i}{j} q_{j}{i} != q_I^(d_{i} a_{i}{j})", i = .0 + 1, j = .1 + 1)]
    OffDiagonal(usize, usize),
}

/// Extended gcd on a list: returns g and c with sum c_k x_k = g.
fn bezout(xs: &[i64]) -> (i64, Vec<i64>) {
    let mut g = xs[0];
    let mut c = vec![0i64; xs.len()];
    c[0] = 1;
    for k in 1..xs.len() {
        let e = g.extended_gcd(&xs[k]);
        for ck in c.iter_mut().take(k) {
            *ck *= e.x;
        }
        c[k] = e.y;
        g = e.gcd;
    }
    (g, c)
}

pub fn dj_normal_form(spec: &BraidingSpec, cartan: &CartanData) -> Result<Vec<ComponentForm>, DjObstruction> {
    if !cartan.finite_type {
        return Err(DjObstruction::NotFinite);
    }
    let d = cartan.symmetrizer.as_ref().ok_or(DjObstruction::NoSymmetrizer)?;
    let mut out = Vec::new();
    for comp in &cartan.components {
        for &i in comp {
            for &j in comp {
                if i < j && spec.q(i, i).pow(d[j]) != spec.q(j, j).pow(d[i]) {
                    return Err(DjObstruction::CrossRatio(i, j));
                }
            }
        }
        let dc: Vec<i64> = comp.iter().map(|&i| d[i]).collect();
        let (g, c) = bezout(&dc);
        let mut base = spec.field().one();
        for (&i, &ci) in comp.iter().zip(&c) {
            base = &base * &spec.q(i, i).pow(ci);
        }
        if g != 1 {
            out.push(ComponentForm::ConstraintOnly {
                component: comp.clone(),
                d: dc,
                g,
                q_component_power: base,
            });
            continue;
        }
        for &i in comp {
            for &j in comp {
                if i != j && spec.q(i, j) * spec.q(j, i) != base.pow(d[i] * cartan.a[i][j]) {
                    return Err(DjObstruction::OffDiagonal(i, j));
                }
            }
        }
        out.push(ComponentForm::Solved {
            component: comp.clone(),
            d: dc,
            q_component: base,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Field, FieldSpec};

    fn spec(f: &Field, rows: &[&[&str]]) -> BraidingSpec {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        BraidingSpec::parse(f, &rows).unwrap()
    }

    #[test]
    fn detection() {
        let f = Field::generic_q();
        let a2 = detect_cartan(&spec(&f, &[&["q", "q^-1"], &["1", "q"]]), 50).unwrap();
        assert_eq!(a2.a, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(a2.labels, vec!["A2"]);
        let g2 = detect_cartan(&spec(&f, &[&["q", "q^-3"], &["1", "q^3"]]), 50).unwrap();
        assert_eq!(g2.a, vec![vec![2, -3], vec![-1, 2]]);
        assert_eq!(g2.symmetrizer, Some(vec![1, 3]));
        assert_eq!(g2.labels, vec!["G2"]);
        let fp = Field::new(FieldSpec::new(1, &["q", "p"])).unwrap();
        let e = detect_cartan(&spec(&fp, &[&["q", "p"], &["1", "q"]]), 50).unwrap_err();
        assert_eq!(e.pair, (0, 1));
    }

    #[test]
    fn classification() {
        let c = classify_finite_type(&vec![vec![2, -2], vec![-2, 2]]);
        assert!(!c.finite_type);
        let g = classify_finite_type(&vec![vec![2, -1], vec![-3, 2]]);
        assert!(g.finite_type);
        assert_eq!(g.symmetrizer, Some(vec![3, 1]));
        let cases: Vec<(IntMatrix, &str)> = vec![
            (vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]], "B3"),
            (vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]], "C3"),
            (
                vec![vec![2, -1, 0, 0], vec![-1, 2, -2, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]],
                "F4",
            ),
            (
                vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]],
                "D4",
            ),
        ];
        for (a, label) in cases {
            let c = classify_finite_type(&a);
            assert!(c.finite_type, "{label}");
            assert_eq!(c.labels, vec![label]);
        }
        let mut e6 = vec![vec![0i64; 6]; 6];
        for i in 0..6 {
            e6[i][i] = 2;
        }
        for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)] {
            e6[i][j] = -1;
            e6[j][i] = -1;
        }
        assert_eq!(classify_finite_type(&e6).labels, vec!["E6"]);
        let a1a1 = classify_finite_type(&vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(a1a1.labels, vec!["A1", "A1"]);
        assert_eq!(a1a1.components, vec![vec![0], vec![1]]);
    }

    #[test]
    fn verdicts() {
        let f = Field::generic_q();
        match decide_gk(&spec(&f, &[&["q", "q^-1"], &["1", "q"]]), true, 50) {
            Verdict::FiniteGk { serre_relations, .. } => {
                assert_eq!(serre_relations.len(), 2);
                assert!(serre_relations.iter().all(|r| r.power == 2));
            }
            v => panic!("{v:?}"),
        }
        let fp = Field::new(FieldSpec::new(1, &["q", "p"])).unwrap();
        assert_eq!(
            decide_gk(&spec(&fp, &[&["q", "p"], &["1", "q"]]), true, 50),
            Verdict::InfiniteGk {
                witness: GrowthWitnessKind::AdString { pair: (0, 1) }
            }
        );
        assert!(matches!(
            decide_gk(&spec(&f, &[&["q", "q^-2"], &["1", "q"]]), true, 50),
            Verdict::InfiniteGk {
                witness: GrowthWitnessKind::NonFiniteType { .. }
            }
        ));
        let f5 = Field::new(FieldSpec::new(5, &[])).unwrap();
        assert!(matches!(
            decide_gk(&spec(&f5, &[&["zeta", "1"], &["1", "zeta"]]), true, 50),
            Verdict::Undecided { .. }
        ));
    }

    #[test]
    fn dj_forms() {
        let f = Field::generic_q();
        let a2 = spec(&f, &[&["q", "q^-1"], &["1", "q"]]);
        let c = detect_cartan(&a2, 50).unwrap();
        assert_eq!(
            dj_normal_form(&a2, &c).unwrap(),
            vec![ComponentForm::Solved {
                component: vec![0, 1],
                d: vec![1, 1],
                q_component: f.param("q").unwrap()
            }]
        );
        let b2 = spec(&f, &[&["q^2", "q^-2"], &["1", "q"]]);
        let c = detect_cartan(&b2, 50).unwrap();
        assert_eq!(c.symmetrizer, Some(vec![2, 1]));
        match &dj_normal_form(&b2, &c).unwrap()[0] {
            ComponentForm::Solved { q_component, .. } => assert_eq!(*q_component, f.param("q").unwrap()),
            other => panic!("{other:?}"),
        }
        let flat = spec(&f, &[&["q", "q^-2"], &["1", "q"]]);
        let forced = CartanData {
            a: vec![vec![2, -1], vec![-2, 2]],
            components: vec![vec![0, 1]],
            symmetrizer: Some(vec![2, 1]),
            finite_type: true,
            labels: vec!["B2".into()],
        };
        assert_eq!(dj_normal_form(&flat, &forced), Err(DjObstruction::CrossRatio(0, 1)));
        let scaled = CartanData {
            symmetrizer: Some(vec![4, 2]),
            ..c.clone()
        };
        assert!(matches!(
            dj_normal_form(&b2, &scaled).unwrap()[0],
            ComponentForm::ConstraintOnly { g: 2, .. }
        ));
    }
}
