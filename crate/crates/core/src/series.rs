//! Truncated Z^theta-graded Hilbert series and their factorization into
//! q_h factors, q_h(t) = 1 + t + ... + t^(h-1) and q_inf(t) = 1/(1-t).

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// Height of a PBW generator or exponent bound of a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Height {
    Finite(u64),
    Infinite,
}

impl Height {
    pub fn is_finite(self) -> bool {
        matches!(self, Height::Finite(_))
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Height::Finite(h) => s.serialize_u64(*h),
            Height::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Height {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Height;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a positive integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Height, E> {
                if v == 0 {
                    return Err(E::custom("height must be positive"));
                }
                Ok(Height::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Height, E> {
                if v <= 0 {
                    return Err(E::custom("height must be positive"));
                }
                Ok(Height::Finite(v as u64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Height, E> {
                match v {
                    "inf" | "infinity" | "∞" => Ok(Height::Infinite),
                    _ => v
                        .parse::<u64>()
                        .map_err(|_| E::custom(format!("bad height `{v}`")))
                        .and_then(|h| self.visit_u64(h)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootFactor {
    pub alpha: Vec<i64>,
    pub height: Height,
}

impl RootFactor {
    pub fn new(alpha: Vec<i64>, height: Height) -> Self {
        RootFactor { alpha, height }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("factor degree must be a nonzero vector in N_0^theta, got {0:?}")]
    BadAlpha(Vec<i64>),
    #[error("series has constant term {0}, expected 1")]
    ConstantTerm(i64),
    #[error("series does not factor: coefficient {coefficient} at degree {degree:?}")]
    NotFactorizable { degree: Vec<i64>, coefficient: i64 },
    #[error("reflection s_{i} is undefined", i = .0 + 1)]
    ReflectionUndefined(usize),
    #[error("no factor of degree e_{i} to swap", i = .0 + 1)]
    MissingSimple(usize),
    #[error("reflected degree {0:?} is not in N_0^theta")]
    NotPositive(Vec<i64>),
    #[error("vector {0:?} has the wrong length")]
    Rank(Vec<i64>),
}

/// Coefficients of a series truncated at total degree `cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSeries {
    pub theta: usize,
    pub cap: usize,
    /// Nonzero coefficients, keyed by multidegree.
    pub coeffs: BTreeMap<Vec<i64>, i64>,
}

fn total(v: &[i64]) -> i64 {
    v.iter().sum()
}

impl GradedSeries {
    pub fn one(theta: usize, cap: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0; theta], 1);
        GradedSeries { theta, cap, coeffs }
    }

    pub fn coefficient(&self, gamma: &[i64]) -> i64 {
        self.coeffs.get(gamma).copied().unwrap_or(0)
    }

    /// Sum of coefficients of each total degree 0..=cap.
    pub fn by_total_degree(&self) -> Vec<i64> {
        let mut out = vec![0; self.cap + 1];
        for (g, c) in &self.coeffs {
            out[total(g) as usize] += c;
        }
        out
    }

    /// Multiply by sum_{s in 0..h} X^(s alpha); h = None means unbounded.
    fn mul_geometric(&mut self, alpha: &[i64], h: Option<u64>) {
        let step = total(alpha);
        let mut out: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (g, &c) in &self.coeffs {
            let mut cur = g.clone();
            let mut s = 0u64;
            while total(&cur) <= self.cap as i64 && h.is_none_or(|h| s < h) {
                *out.entry(cur.clone()).or_insert(0) += c;
                for (x, a) in cur.iter_mut().zip(alpha) {
                    *x += a;
                }
                s += 1;
                if step == 0 {
                    break;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        self.coeffs = out;
    }

    /// Multiply by (1 - X^alpha).
    fn mul_one_minus(&mut self, alpha: &[i64]) {
        let mut out = self.coeffs.clone();
        for (g, &c) in &self.coeffs {
            let shifted: Vec<i64> = g.iter().zip(alpha).map(|(a, b)| a + b).collect();
            if total(&shifted) <= self.cap as i64 {
                *out.entry(shifted).or_insert(0) -= c;
            }
        }
        out.retain(|_, c| *c != 0);
        self.coeffs = out;
    }

    fn mul_factor(&mut self, f: &RootFactor) {
        match f.height {
            Height::Finite(h) => self.mul_geometric(&f.alpha, Some(h)),
            Height::Infinite => self.mul_geometric(&f.alpha, None),
        }
    }

    fn div_factor(&mut self, f: &RootFactor) {
        self.mul_one_minus(&f.alpha);
        if let Height::Finite(h) = f.height {
            let ha: Vec<i64> = f.alpha.iter().map(|a| a * h as i64).collect();
            self.mul_geometric(&ha, None);
        }
    }
}

fn check_alpha(alpha: &[i64], theta: usize) -> Result<(), SeriesError> {
    if alpha.len() != theta {
        return Err(SeriesError::Rank(alpha.to_vec()));
    }
    if alpha.iter().any(|&a| a < 0) || alpha.iter().all(|&a| a == 0) {
        return Err(SeriesError::BadAlpha(alpha.to_vec()));
    }
    Ok(())
}

/// prod q_{h_i}(X^{alpha_i}), truncated at total degree `cap`.
pub fn expand_product(
    factors: &[RootFactor],
    theta: usize,
    cap: usize,
) -> Result<GradedSeries, SeriesError> {
    let mut s = GradedSeries::one(theta, cap);
    for f in factors {
        check_alpha(&f.alpha, theta)?;
        s.mul_factor(f);
    }
    Ok(s)
}

/// Result of [`factor_series`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<RootFactor>,
    /// Factors of total degree above the cap are invisible, so uniqueness is
    /// only established through the cap.
    pub certified_through: usize,
}

/// Recover the factor multiset of a series, given the height attached to
/// each degree (h_alpha = ord chi(alpha, alpha) in the Nichols setting).
///
/// Greedy: take the smallest remaining degree (lexicographically first among
/// equal total degree), its coefficient is the multiplicity, divide it out.
pub fn factor_series(
    s: &GradedSeries,
    height_of: &dyn Fn(&[i64]) -> Height,
) -> Result<Factorization, SeriesError> {
    let zero = vec![0; s.theta];
    let c0 = s.coefficient(&zero);
    if c0 != 1 {
        return Err(SeriesError::ConstantTerm(c0));
    }
    let mut rest = s.clone();
    let mut factors = Vec::new();
    loop {
        let next = rest
            .coeffs
            .iter()
            .filter(|(g, _)| **g != zero)
            .min_by(|(a, _), (b, _)| total(a).cmp(&total(b)).then(a.cmp(b)))
            .map(|(g, c)| (g.clone(), *c));
        let Some((gamma, c)) = next else { break };
        if c < 0 {
            return Err(SeriesError::NotFactorizable {
                degree: gamma,
                coefficient: c,
            });
        }
        let f = RootFactor::new(gamma.clone(), height_of(&gamma));
        for _ in 0..c {
            rest.div_factor(&f);
            factors.push(f.clone());
        }
    }
    factors.sort();
    Ok(Factorization {
        factors,
        certified_through: s.cap,
    })
}

/// s_i(alpha) = alpha + (sum_j m_ij alpha_j) e_i, with m_ii = -2.
pub fn reflect_vector(alpha: &[i64], i: usize, m_row: &[i64]) -> Vec<i64> {
    let mut out = alpha.to_vec();
    let shift: i64 = alpha
        .iter()
        .enumerate()
        .map(|(j, a)| if j == i { -2 * a } else { m_row[j] * a })
        .sum();
    out[i] += shift;
    out
}

/// Apply s_i to every factor degree, replacing the image -e_i by e_i with
/// the same height.
pub fn reflect_series(
    factors: &[RootFactor],
    i: usize,
    m_row: &[Option<i64>],
) -> Result<Vec<RootFactor>, SeriesError> {
    let row: Vec<i64> = m_row
        .iter()
        .enumerate()
        .map(|(j, m)| if j == i { Some(-2) } else { *m })
        .collect::<Option<Vec<_>>>()
        .ok_or(SeriesError::ReflectionUndefined(i))?;
    let theta = row.len();
    let mut ei = vec![0; theta];
    ei[i] = 1;
    let mut found = false;
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        if f.alpha.len() != theta {
            return Err(SeriesError::Rank(f.alpha.clone()));
        }
        if !found && f.alpha == ei {
            found = true;
            out.push(f.clone());
            continue;
        }
        let r = reflect_vector(&f.alpha, i, &row);
        if r.iter().any(|&x| x < 0) {
            return Err(SeriesError::NotPositive(r));
        }
        out.push(RootFactor::new(r, f.height));
    }
    if !found {
        return Err(SeriesError::MissingSimple(i));
    }
    out.sort();
    Ok(out)
}
