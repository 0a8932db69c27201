//! Words over the ordered alphabet x_1 < x_2 < ... < x_theta.
//!
//! Letters are stored 0-based; `x1` is letter 0. The derived `Ord` on
//! [`Word`] is the lexicographic order with the prefix rule (u < uv).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("empty word has no Lyndon structure")]
    Empty,
    #[error("word `{0}` is not Lyndon")]
    NotLyndon(String),
    #[error("a single letter has no Shirshov decomposition")]
    SingleLetter,
    #[error("cannot parse word `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("letter x{letter} out of range for an alphabet of size {theta}")]
    OutOfRange { letter: usize, theta: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Multidegree in N_0^theta.
    pub fn degree(&self, theta: usize) -> Vec<i64> {
        let mut d = vec![0; theta];
        for &l in &self.0 {
            d[l] += 1;
        }
        d
    }

    pub fn check_alphabet(&self, theta: usize) -> Result<(), WordError> {
        match self.0.iter().find(|&&l| l >= theta) {
            Some(&l) => Err(WordError::OutOfRange {
                letter: l + 1,
                theta,
            }),
            None => Ok(()),
        }
    }

    /// The word with the letter at `pos` removed.
    pub fn remove_at(&self, pos: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(pos);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("x{}", l + 1)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses `x1*x2*x1`, with `x1^3` as shorthand and `1` for the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| WordError::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if t == "1" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for part in t.split('*') {
            let part = part.trim();
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (
                    b.trim(),
                    e.trim().parse::<usize>().map_err(|_| err("bad exponent"))?,
                ),
                None => (part, 1),
            };
            let idx = base
                .strip_prefix('x')
                .ok_or_else(|| err("letters look like x1, x2, ..."))?
                .parse::<usize>()
                .map_err(|_| err("bad letter index"))?;
            if idx == 0 {
                return Err(err("letters are numbered from 1"));
            }
            out.extend(std::iter::repeat_n(idx - 1, exp));
        }
        Ok(Word(out))
    }
}

/// Strict lexicographic order, u < uv for nonempty v.
pub fn lex_less(u: &Word, v: &Word) -> bool {
    u < v
}

/// `u ≺ v` in deg-lex, i.e. `v ≻ u`: shorter words are greater, and among
/// words of equal length the lexicographically larger one is greater. The
/// empty word is the maximum.
pub fn deglex_less(u: &Word, v: &Word) -> bool {
    if u.len() != v.len() {
        return v.len() < u.len();
    }
    u < v
}

/// Whether `u` is strictly smaller than each of its proper nonempty ends.
pub fn is_lyndon(u: &Word) -> Result<bool, WordError> {
    if u.is_empty() {
        return Err(WordError::Empty);
    }
    Ok(is_lyndon_slice(u.letters()))
}

fn is_lyndon_slice(u: &[usize]) -> bool {
    !u.is_empty() && (1..u.len()).all(|k| u < &u[k..])
}

/// Unique factorization into non-increasing Lyndon words (Duval's algorithm).
pub fn lyndon_factorize(u: &Word) -> Result<Vec<Word>, WordError> {
    if u.is_empty() {
        return Err(WordError::Empty);
    }
    let s = u.letters();
    let n = s.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(Word(s[i..i + j - k].to_vec()));
            i += j - k;
        }
    }
    Ok(out)
}

/// Shirshov decomposition u = u1 u2 with u2 the smallest proper end.
pub fn shirshov_split(u: &Word) -> Result<(Word, Word), WordError> {
    if !is_lyndon(u)? {
        return Err(WordError::NotLyndon(u.to_string()));
    }
    if u.len() == 1 {
        return Err(WordError::SingleLetter);
    }
    let s = u.letters();
    let k = (1..s.len())
        .min_by(|&a, &b| s[a..].cmp(&s[b..]))
        .expect("length at least 2");
    Ok((Word(s[..k].to_vec()), Word(s[k..].to_vec())))
}

/// All words of length `n` over `theta` letters, in lexicographic order.
pub fn words_of_length(theta: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * theta);
        for w in &out {
            for l in 0..theta {
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out = next;
    }
    out
}

/// All words with the given multidegree, in lexicographic order.
pub fn words_of_degree(deg: &[i64]) -> Vec<Word> {
    fn rec(rem: &mut Vec<i64>, cur: &mut Vec<usize>, left: i64, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(Word(cur.clone()));
            return;
        }
        for l in 0..rem.len() {
            if rem[l] > 0 {
                rem[l] -= 1;
                cur.push(l);
                rec(rem, cur, left - 1, out);
                cur.pop();
                rem[l] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let total = deg.iter().sum();
    rec(&mut deg.to_vec(), &mut Vec::new(), total, &mut out);
    out
}

/// Lyndon words of length 1..=max_len, lexicographically sorted.
pub fn lyndon_words(theta: usize, max_len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = (1..=max_len)
        .flat_map(|n| words_of_length(theta, n))
        .filter(|w| is_lyndon_slice(w.letters()))
        .collect();
    out.sort();
    out
}
