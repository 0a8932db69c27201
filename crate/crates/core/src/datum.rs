//! Generic data of finite Cartan type over a free abelian group, linking
//! data, and the presentation of the associated pointed Hopf algebra.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cartan::{classify_finite_type, CartanData};
use crate::freealg::{ad_power, BraidingSpec, FreeAlgError};
use crate::scalars::{Field, ParseError, Scalar, UnitOrder};
use crate::weyl::IntMatrix;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DatumError {
    #[error("expected {expected} {what}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("Cartan matrix is not of finite type")]
    NotFiniteType,
    #[error("given symmetrizer {given:?} differs from the minimal one {minimal:?}")]
    Symmetrizer { given: Vec<i64>, minimal: Vec<i64> },
    #[error("q_I for component {component} is a root of unity", component = .0 + 1)]
    RootOfUnity(usize),
    #[error("<chi_{i}, g_{i}> != q_I^d_{i} (component {c})", i = .0 + 1, c = .1 + 1)]
    Diagonal(usize, usize),
    #[error("<chi_{j}, g_{i}> <chi_{i}, g_{j}> != q_I^(d_{i} a_{i}{j}) (component {c})", i = .0 + 1, j = .1 + 1, c = .2 + 1)]
    OffDiagonal(usize, usize, usize),
    #[error("linking index ({i}, {j}) must satisfy i < j and i, j not connected", i = .0 + 1, j = .1 + 1)]
    LinkIndex(usize, usize),
    #[error("lambda_{i}{j} = {v} is not in {{0, 1}}", i = .0 + 1, j = .1 + 1, v = .2)]
    LinkValue(usize, usize, i64),
    #[error("lambda_{i}{j} = 1 but vertices {i} and {j} are not linkable", i = .0 + 1, j = .1 + 1)]
    NotLinkable(usize, usize),
    #[error("character entry ({i}, {h}): {err}", i = .0 + 1, h = .1 + 1, err = .2)]
    Character(usize, usize, ParseError),
    #[error("q_I for component {c}: {err}", c = .0 + 1, err = .1)]
    Component(usize, ParseError),
    #[error("character value ({i}, {h}) is zero", i = .0 + 1, h = .1 + 1)]
    ZeroCharacter(usize, usize),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
}

/// Linking value for a pair, 1-based as written in input files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub i: usize,
    pub j: usize,
    pub value: i64,
}

/// Datum as authored: expressions unparsed, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumInput {
    pub rank: usize,
    pub a: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<i64>>,
    /// One expression per Dynkin component, components ordered by least vertex.
    pub q: Vec<String>,
    pub g: Vec<Vec<i64>>,
    /// chi[i][h] is the value of chi_i on the h-th generator.
    pub chi: Vec<Vec<String>>,
    #[serde(default)]
    pub lambda: Vec<Link>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericDatum {
    pub field: Field,
    pub rank: usize,
    pub cartan: CartanData,
    pub d: Vec<i64>,
    pub q_components: Vec<Scalar>,
    pub g: Vec<Vec<i64>>,
    pub chi: Vec<Vec<Scalar>>,
    /// Keys (i, j) with i < j, 0-based.
    pub lambda: BTreeMap<(usize, usize), u8>,
}

fn shape(what: &'static str, expected: usize, found: usize) -> Result<(), DatumError> {
    if expected == found {
        Ok(())
    } else {
        Err(DatumError::Shape { what, expected, found })
    }
}

/// <chi, g> = prod_h chi(y_h)^(g_h).
pub fn pairing(field: &Field, chi: &[Scalar], g: &[i64]) -> Scalar {
    let mut acc = field.one();
    for (c, &e) in chi.iter().zip(g) {
        acc = &acc * &c.pow(e);
    }
    acc
}

pub fn validate_datum(field: &Field, raw: &DatumInput) -> Result<GenericDatum, DatumError> {
    let theta = raw.a.len();
    for row in &raw.a {
        shape("Cartan matrix columns", theta, row.len())?;
    }
    shape("group elements", theta, raw.g.len())?;
    shape("characters", theta, raw.chi.len())?;
    for g in &raw.g {
        shape("group element coordinates", raw.rank, g.len())?;
    }
    for c in &raw.chi {
        shape("character values", raw.rank, c.len())?;
    }
    let cartan = classify_finite_type(&raw.a);
    if !cartan.finite_type {
        return Err(DatumError::NotFiniteType);
    }
    let minimal = cartan.symmetrizer.clone().ok_or(DatumError::NotFiniteType)?;
    if let Some(given) = &raw.d {
        if *given != minimal {
            return Err(DatumError::Symmetrizer {
                given: given.clone(),
                minimal,
            });
        }
    }
    shape("component parameters", cartan.components.len(), raw.q.len())?;
    let mut q_components = Vec::new();
    for (c, text) in raw.q.iter().enumerate() {
        let v = field.parse(text).map_err(|e| DatumError::Component(c, e))?;
        if !matches!(v.unit_order(), Ok(UnitOrder::Infinite)) {
            return Err(DatumError::RootOfUnity(c));
        }
        q_components.push(v);
    }
    let mut chi = Vec::new();
    for (i, row) in raw.chi.iter().enumerate() {
        let mut out = Vec::new();
        for (h, text) in row.iter().enumerate() {
            let v = field.parse(text).map_err(|e| DatumError::Character(i, h, e))?;
            if v.is_zero() {
                return Err(DatumError::ZeroCharacter(i, h));
            }
            out.push(v);
        }
        chi.push(out);
    }
    let mut datum = GenericDatum {
        field: field.clone(),
        rank: raw.rank,
        cartan,
        d: minimal,
        q_components,
        g: raw.g.clone(),
        chi,
        lambda: BTreeMap::new(),
    };
    for (c, comp) in datum.cartan.components.iter().enumerate() {
        let qc = &datum.q_components[c];
        for &i in comp {
            if datum.pair(i, i) != qc.pow(datum.d[i]) {
                return Err(DatumError::Diagonal(i, c));
            }
            for j in 0..theta {
                if j != i && &datum.pair(j, i) * &datum.pair(i, j) != qc.pow(datum.d[i] * raw.a[i][j]) {
                    return Err(DatumError::OffDiagonal(i, j, c));
                }
            }
        }
    }
    for link in &raw.lambda {
        let (i, j) = (link.i.wrapping_sub(1), link.j.wrapping_sub(1));
        if i >= j || j >= theta || datum.connected(i, j) {
            return Err(DatumError::LinkIndex(i, j));
        }
        let v = match link.value {
            0 => 0u8,
            1 => 1u8,
            v => return Err(DatumError::LinkValue(i, j, v)),
        };
        if v == 1 && !check_linkable(&datum, i, j) {
            return Err(DatumError::NotLinkable(i, j));
        }
        datum.lambda.insert((i, j), v);
    }
    Ok(datum)
}

impl GenericDatum {
    pub fn theta(&self) -> usize {
        self.g.len()
    }

    /// <chi_k, g_i>.
    pub fn pair(&self, k: usize, i: usize) -> Scalar {
        pairing(&self.field, &self.chi[k], &self.g[i])
    }

    pub fn connected(&self, i: usize, j: usize) -> bool {
        self.cartan.components.iter().any(|c| c.contains(&i) && c.contains(&j))
    }

    pub fn lambda(&self, i: usize, j: usize) -> u8 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.lambda.get(&key).copied().unwrap_or(0)
    }

    /// The infinitesimal braiding q_ij = <chi_j, g_i>.
    pub fn braiding(&self) -> Result<BraidingSpec, DatumError> {
        let n = self.theta();
        let q = (0..n).map(|i| (0..n).map(|j| self.pair(j, i)).collect()).collect();
        Ok(BraidingSpec::new(&self.field, q)?)
    }

    pub fn to_input(&self) -> DatumInput {
        DatumInput {
            rank: self.rank,
            a: self.cartan.a.clone(),
            d: Some(self.d.clone()),
            q: self.q_components.iter().map(|s| s.to_string()).collect(),
            g: self.g.clone(),
            chi: self
                .chi
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
            lambda: self
                .lambda
                .iter()
                .map(|(&(i, j), &v)| Link {
                    i: i + 1,
                    j: j + 1,
                    value: v as i64,
                })
                .collect(),
        }
    }
}

/// i and j in different components, g_i g_j != 1 and chi_i chi_j = epsilon.
pub fn check_linkable(datum: &GenericDatum, i: usize, j: usize) -> bool {
    if i == j || datum.connected(i, j) {
        return false;
    }
    let nontrivial = datum.g[i].iter().zip(&datum.g[j]).any(|(a, b)| a + b != 0);
    let trivial_char = datum.chi[i]
        .iter()
        .zip(&datum.chi[j])
        .all(|(a, b)| (a * b).is_one());
    nontrivial && trivial_char
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Group,
    Commutation,
    Serre,
    Linking,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub kind: RelationKind,
    /// 1-based indices the relation is attached to.
    pub indices: Vec<usize>,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub group: usize,
    pub commutation: usize,
    pub serre: usize,
    pub linking: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
    pub coproducts: Vec<String>,
    pub census: Census,
}

impl Presentation {
    pub fn of_kind(&self, kind: RelationKind) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(move |r| r.kind == kind)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("generators: {}\n", self.generators.join(", "));
        for r in &self.relations {
            s.push_str(&r.text);
            s.push('\n');
        }
        for c in &self.coproducts {
            s.push_str(c);
            s.push('\n');
        }
        s
    }
}

/// Group element g in multiplicative notation: y1*y3^-1; "1" when trivial.
pub fn render_group_element(g: &[i64]) -> String {
    let parts: Vec<String> = g
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(h, &e)| {
            if e == 1 {
                format!("y{}", h + 1)
            } else {
                format!("y{}^{e}", h + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn letter(l: usize) -> String {
    format!("a{}", l + 1)
}

fn parenthesize(s: &Scalar) -> String {
    let t = s.to_string();
    if t.contains(' ') {
        format!("({t})")
    } else {
        t
    }
}

pub fn emit_presentation(datum: &GenericDatum) -> Result<Presentation, DatumError> {
    let theta = datum.theta();
    let s = datum.rank;
    let spec = datum.braiding()?;
    let mut generators: Vec<String> = (0..theta).map(letter).collect();
    for h in 1..=s {
        generators.push(format!("y{h}"));
        generators.push(format!("y{h}^-1"));
    }
    let mut relations = Vec::new();
    for m in 1..=s {
        for h in m + 1..=s {
            relations.push(Relation {
                kind: RelationKind::Group,
                indices: vec![m, h],
                text: format!("y{m}*y{h} = y{h}*y{m}"),
            });
        }
        relations.push(Relation {
            kind: RelationKind::Group,
            indices: vec![m],
            text: format!("y{m}*y{m}^-1 = y{m}^-1*y{m} = 1"),
        });
    }
    for h in 0..s {
        for j in 0..theta {
            let c = &datum.chi[j][h];
            let coeff = if c.is_one() {
                String::new()
            } else {
                format!("{}*", parenthesize(c))
            };
            relations.push(Relation {
                kind: RelationKind::Commutation,
                indices: vec![h + 1, j + 1],
                text: format!("y{}*a{} = {coeff}a{}*y{}", h + 1, j + 1, j + 1, h + 1),
            });
        }
    }
    for i in 0..theta {
        for j in 0..theta {
            if i == j || !datum.connected(i, j) {
                continue;
            }
            let r = (1 - datum.cartan.a[i][j]) as usize;
            let e = ad_power(&spec, i, j, r)?;
            relations.push(Relation {
                kind: RelationKind::Serre,
                indices: vec![i + 1, j + 1],
                text: format!("{} = 0", e.render_with(&letter)),
            });
        }
    }
    for i in 0..theta {
        for j in i + 1..theta {
            if datum.connected(i, j) {
                continue;
            }
            let e = ad_power(&spec, i, j, 1)?;
            let rhs = if datum.lambda(i, j) == 1 {
                let gg: Vec<i64> = datum.g[i].iter().zip(&datum.g[j]).map(|(a, b)| a + b).collect();
                format!("1 - {}", render_group_element(&gg))
            } else {
                "0".into()
            };
            relations.push(Relation {
                kind: RelationKind::Linking,
                indices: vec![i + 1, j + 1],
                text: format!("{} = {rhs}", e.render_with(&letter)),
            });
        }
    }
    let mut coproducts: Vec<String> = (1..=s).map(|h| format!("D(y{h}) = y{h} (x) y{h}")).collect();
    for i in 0..theta {
        coproducts.push(format!(
            "D(a{n}) = a{n} (x) 1 + {} (x) a{n}",
            render_group_element(&datum.g[i]),
            n = i + 1
        ));
    }
    let count = |k| relations.iter().filter(|r: &&Relation| r.kind == k).count();
    let census = Census {
        group: count(RelationKind::Group),
        commutation: count(RelationKind::Commutation),
        serre: count(RelationKind::Serre),
        linking: count(RelationKind::Linking),
    };
    Ok(Presentation {
        generators,
        relations,
        coproducts,
        census,
    })
}

/// Expected relation counts for rank s and the datum's diagram.
pub fn expected_census(datum: &GenericDatum) -> Census {
    let theta = datum.theta();
    let s = datum.rank;
    let mut serre = 0;
    let mut linking = 0;
    for i in 0..theta {
        for j in 0..theta {
            if i != j && datum.connected(i, j) {
                serre += 1;
            }
            if i < j && !datum.connected(i, j) {
                linking += 1;
            }
        }
    }
    Census {
        group: s * (s + 1) / 2,
        commutation: theta * s,
        serre,
        linking,
    }
}
