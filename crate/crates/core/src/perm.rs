//! Permutations in one-line notation.
//!
//! Matrix convention: the permutation matrix of `w` has a 1 in row `w(j)`,
//! column `j`, with rows counted from the top.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Inverse,
    ReverseComplement,
    InverseReverseComplement,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::Parse("empty permutation".into()));
        }
        if n > 255 {
            return Err(Error::Parse(format!("size {n} exceeds 255")));
        }
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Parse(format!(
                    "{word:?} is not a bijection of 1..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation {
            word: word.into_iter().map(|v| v as u8).collect(),
        })
    }

    pub(crate) fn from_bytes_unchecked(word: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(word.iter().map(|&v| v as usize).collect()).is_ok());
        Permutation { word }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u8).collect(),
        }
    }

    /// The longest element `w0 = n … 1`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            word: (1..=n as u8).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// `w(i)` for 1-based `i`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    pub fn word(&self) -> Vec<usize> {
        self.word.iter().map(|&v| v as usize).collect()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.word.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation { word: inv }
    }

    /// `w0 · w · w0`, entry `i ↦ n+1−w(n+1−i)`.
    pub fn reverse_complement(&self) -> Self {
        let n = self.n() as u8;
        Permutation {
            word: self.word.iter().rev().map(|&v| n + 1 - v).collect(),
        }
    }

    /// `w0 · w`, i.e. values complemented.
    pub fn complement(&self) -> Self {
        let n = self.n() as u8;
        Permutation {
            word: self.word.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    /// `w · w0`, i.e. the word reversed.
    pub fn reverse(&self) -> Self {
        Permutation {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn symmetry(&self, kind: Symmetry) -> Self {
        match kind {
            Symmetry::Inverse => self.inverse(),
            Symmetry::ReverseComplement => self.reverse_complement(),
            Symmetry::InverseReverseComplement => self.inverse().reverse_complement(),
        }
    }

    /// Composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Ok(Permutation {
            word: other
                .word
                .iter()
                .map(|&j| self.word[j as usize - 1])
                .collect(),
        })
    }

    /// Swap the entries in positions `i` and `j` (right multiplication by a transposition).
    pub fn swap_positions(&self, i: usize, j: usize) -> Self {
        let mut word = self.word.clone();
        word.swap(i - 1, j - 1);
        Permutation { word }
    }

    /// Swap the values `a` and `b` (left multiplication by a transposition).
    pub fn swap_values(&self, a: usize, b: usize) -> Self {
        let inv = self.inverse();
        self.swap_positions(inv.at(a), inv.at(b))
    }

    /// Number of inversions.
    pub fn coxeter_length(&self) -> usize {
        let w = &self.word;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `r_w(p,q) = #{k ≤ q : w(k) ≥ p}`.
    pub fn rank(&self, p: usize, q: usize) -> Result<usize> {
        let n = self.n();
        if p == 0 || q == 0 || p > n || q > n {
            return Err(Error::IndexOutOfRange { p, q, n });
        }
        Ok(self.word[..q].iter().filter(|&&v| v as usize >= p).count())
    }

    /// All ranks at once, see [`RankTable`].
    pub fn rank_table(&self) -> RankTable {
        RankTable::new(self)
    }

    /// Relative order of the entries at the given 1-based positions.
    pub fn pattern_at(&self, positions: &[usize]) -> Permutation {
        let vals: Vec<u8> = positions.iter().map(|&i| self.word[i - 1]).collect();
        Permutation {
            word: flatten(&vals),
        }
    }

    /// Compact digit form, available for n ≤ 9.
    pub fn compact(&self) -> Option<String> {
        (self.n() <= 9).then(|| self.word.iter().map(|v| char::from(b'0' + v)).collect())
    }

    /// Compact digits when n ≤ 9, comma form otherwise.
    pub fn label(&self) -> String {
        self.compact().unwrap_or_else(|| self.to_string())
    }
}

/// Standardize a sequence of distinct values to a word on 1..m.
pub(crate) fn flatten(vals: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; vals.len()];
    for (i, &v) in vals.iter().enumerate() {
        out[i] = 1 + vals.iter().filter(|&&x| x < v).count() as u8;
    }
    out
}

/// Dense table of `r_w(p,q)` for `0 ≤ p,q ≤ n+1`, with `r(p,0) = 0` and `r(n+1,q) = 0`.
#[derive(Debug, Clone)]
pub struct RankTable {
    n: usize,
    data: Vec<u8>,
}

impl RankTable {
    fn new(w: &Permutation) -> Self {
        let n = w.n();
        let stride = n + 2;
        let mut data = vec![0u8; stride * stride];
        for p in (1..=n).rev() {
            for q in 1..=n {
                let here = (w.at(q) >= p) as u8;
                // r(p,q) = r(p,q-1) + [w(q) ≥ p]
                data[p * stride + q] = data[p * stride + q - 1] + here;
            }
        }
        RankTable { n, data }
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> usize {
        if p > self.n + 1 || q > self.n + 1 {
            return 0;
        }
        let q = q.min(self.n);
        self.data[p * (self.n + 2) + q] as usize
    }
}

/// Bruhat order by rank dominance.
pub fn bruhat_leq(u: &Permutation, w: &Permutation) -> Result<bool> {
    if u.n() != w.n() {
        return Err(Error::SizeMismatch(u.n(), w.n()));
    }
    let n = u.n();
    for p in 1..=n {
        let (mut ru, mut rw) = (0usize, 0usize);
        for q in 1..=n {
            ru += (u.at(q) >= p) as usize;
            rw += (w.at(q) >= p) as usize;
            if ru > rw {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn coxeter_length(w: &Permutation) -> usize {
    w.coxeter_length()
}

/// All permutations of size `n` in lexicographic order.
pub fn enumerate(n: usize) -> Enumerate {
    Enumerate {
        next: Some(Permutation::identity(n)),
    }
}

pub struct Enumerate {
    next: Option<Permutation>,
}

impl Iterator for Enumerate {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut w = current.word.clone();
        if next_permutation(&mut w) {
            self.next = Some(Permutation { word: w });
        }
        Some(current)
    }
}

fn next_permutation(w: &mut [u8]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts "8,1,9,3" or, for n ≤ 9, compact digits "8193".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let word: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad entry {t:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            if !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!(
                    "{s:?} is neither comma nor compact form"
                )));
            }
            if s.len() > 9 {
                return Err(Error::Parse(format!(
                    "compact form {s:?} is only accepted for n ≤ 9"
                )));
            }
            s.bytes().map(|b| (b - b'0') as usize).collect()
        };
        Permutation::new(word)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Word(Vec<usize>),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Word(w) => Permutation::new(w).map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
pub(crate) fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}
