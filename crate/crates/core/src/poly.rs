//! Exact multivariate Laurent polynomials with big-integer coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T(u16),
    X(u16),
    Y(u16),
    Z(u16, u16),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T(i) => write!(f, "t{i}"),
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
            Var::Z(p, q) => write!(f, "z[{p},{q}]"),
        }
    }
}

pub fn t(i: usize) -> Var {
    Var::T(i as u16)
}

pub fn x(i: usize) -> Var {
    Var::X(i as u16)
}

pub fn y(i: usize) -> Var {
    Var::Y(i as u16)
}

pub fn z(p: usize, q: usize) -> Var {
    Var::Z(p as u16, q as u16)
}

/// Sorted `(variable, nonzero exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m.bump(v, e);
        }
        m
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |i| self.0[i].1)
    }

    /// Sum of exponents.
    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    fn bump(&mut self, v: Var, e: i32) {
        if e == 0 {
            return;
        }
        match self.0.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => {
                self.0[i].1 += e;
                if self.0[i].1 == 0 {
                    self.0.remove(i);
                }
            }
            Err(i) => self.0.insert(i, (v, e)),
        }
    }

    fn with(&self, v: Var, e: i32) -> Monomial {
        let mut m = self.clone();
        m.bump(v, e);
        m
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    fn without(&self, a: Var, b: Var) -> Monomial {
        Monomial(
            self.0
                .iter()
                .copied()
                .filter(|&(v, _)| v != a && v != b)
                .collect(),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        MultiPoly::term(BigInt::from(c), Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::term(BigInt::one(), Monomial(vec![(v, 1)]))
    }

    pub fn term(c: BigInt, m: Monomial) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        MultiPoly::term(BigInt::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant value, if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.times(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Total degrees of the terms, lowest first.
    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.keys().map(Monomial::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn homogeneous_part(&self, degree: i32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn lowest_degree_part(&self) -> MultiPoly {
        match self.degrees().first() {
            Some(&d) => self.homogeneous_part(d),
            None => MultiPoly::zero(),
        }
    }

    /// The monomial whose exponents are the minimum of all terms' exponents
    /// in negative directions, so that multiplying by its inverse clears
    /// every negative exponent.
    pub fn denominator(&self) -> Monomial {
        let mut worst: BTreeMap<Var, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for &(v, e) in &m.0 {
                if e < 0 {
                    let slot = worst.entry(v).or_insert(0);
                    *slot = (*slot).min(e);
                }
            }
        }
        Monomial(worst.into_iter().map(|(v, e)| (v, -e)).collect())
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(
                Monomial::from_pairs(m.0.iter().map(|&(v, e)| (f(v), e))),
                c.clone(),
            );
        }
        out
    }

    /// Replace each variable `v` for which `f(v)` is `Some` by that
    /// polynomial. A negative power can only be replaced by a unit monomial.
    pub fn substitute(&self, f: impl Fn(Var) -> Option<MultiPoly>) -> Result<MultiPoly> {
        let mut cache: HashMap<(Var, i32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = MultiPoly::term(c.clone(), Monomial::one());
            for &(v, e) in &m.0 {
                let factor = match cache.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = match f(v) {
                            None => MultiPoly::monomial(Monomial(vec![(v, e)])),
                            Some(image) if e > 0 => image.pow(e as u32),
                            Some(image) => unit_inverse(&image)
                                .ok_or_else(|| {
                                    Error::NotDivisible(format!(
                                        "cannot invert {image} for {v}^{e}"
                                    ))
                                })?
                                .pow((-e) as u32),
                        };
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                acc = &acc * &factor;
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Terms ordered by descending total degree, then descending monomial.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| b.0.cmp(a.0)));
        v
    }

    /// JSON term-map form: `{"terms":[{"c":"-1","m":{"z[6,5]":1}}]}`.
    pub fn to_term_map(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                let mon: serde_json::Map<String, serde_json::Value> =
                    m.0.iter()
                        .map(|(v, e)| (v.to_string(), serde_json::Value::from(*e)))
                        .collect();
                serde_json::json!({"c": c.to_string(), "m": mon})
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_term_map(value: &serde_json::Value) -> Result<MultiPoly> {
        let bad = || Error::PolyParse(format!("not a term map: {value}"));
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(bad)?;
        let mut out = MultiPoly::zero();
        for term in terms {
            let c: BigInt = term
                .get("c")
                .and_then(|c| c.as_str())
                .and_then(|c| c.parse().ok())
                .ok_or_else(bad)?;
            let mon = term.get("m").and_then(|m| m.as_object()).ok_or_else(bad)?;
            let mut m = Monomial::one();
            for (name, e) in mon {
                let e = e
                    .as_i64()
                    .and_then(|e| i32::try_from(e).ok())
                    .ok_or_else(bad)?;
                m.bump(parse_var(name)?, e);
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// Reduce coefficients mod `q` and compile variables to slots in `vars`.
    pub fn compile_mod(&self, vars: &[Var], q: u64) -> Result<CompiledPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let r = c.mod_floor_u64(q);
            if r == 0 {
                continue;
            }
            let mut factors = Vec::with_capacity(m.0.len());
            for &(v, e) in &m.0 {
                if e < 0 {
                    return Err(Error::Precondition(format!(
                        "cannot evaluate Laurent monomial {m} mod {q}"
                    )));
                }
                let slot = vars.iter().position(|&w| w == v).ok_or_else(|| {
                    Error::Precondition(format!("variable {v} is not a coordinate"))
                })?;
                factors.push((slot, e as u32));
            }
            terms.push((r, factors));
        }
        Ok(CompiledPoly { q, terms })
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, q: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, q: u64) -> u64 {
        let q = BigInt::from(q);
        let r = ((self % &q) + &q) % &q;
        r.to_u64().expect("residue fits")
    }
}

/// Coefficients in `[0, q)` and variable slots, for fast evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    q: u64,
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, point: &[u8]) -> u64 {
        let q = self.q;
        let mut acc = 0u64;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(slot, e) in factors {
                let v = point[slot] as u64;
                for _ in 0..e {
                    t = t * v % q;
                }
                if t == 0 {
                    break;
                }
            }
            acc = (acc + t) % q;
        }
        acc
    }
}

fn unit_inverse(p: &MultiPoly) -> Option<MultiPoly> {
    if p.terms.len() != 1 {
        return None;
    }
    let (m, c) = p.terms.iter().next()?;
    (c.abs().is_one()).then(|| MultiPoly::term(c.clone(), m.inverse()))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.0.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

fn parse_var(s: &str) -> Result<Var> {
    let bad = || Error::PolyParse(format!("bad variable {s:?}"));
    let num = |t: &str| t.trim().parse::<u16>().map_err(|_| bad());
    let mut chars = s.chars();
    match chars.next() {
        Some('t') => Ok(Var::T(num(chars.as_str())?)),
        Some('x') => Ok(Var::X(num(chars.as_str())?)),
        Some('y') => Ok(Var::Y(num(chars.as_str())?)),
        Some('z') => {
            let inner = chars
                .as_str()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?;
            let (p, q) = inner.split_once(',').ok_or_else(bad)?;
            Ok(Var::Z(num(p)?, num(q)?))
        }
        _ => Err(bad()),
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    /// Parses the emitted grammar: signed terms `c*v^e*…` joined by `+`/`-`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::PolyParse("empty polynomial".into()));
        }
        // Split into signed terms, ignoring '-' that follows '^' or '['/','.
        let bytes = compact.as_bytes();
        let mut pieces: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut neg = false;
        let mut depth = 0;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'[' => depth += 1,
                b']' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > 0 && bytes[i - 1] != b'^' => {
                    pieces.push((neg, &compact[start..i]));
                    neg = b == b'-';
                    start = i + 1;
                }
                b'-' if i == 0 => {
                    neg = true;
                    start = 1;
                }
                _ => {}
            }
        }
        pieces.push((neg, &compact[start..]));
        let mut out = MultiPoly::zero();
        for (neg, piece) in pieces {
            if piece.is_empty() {
                return Err(Error::PolyParse(format!("empty term in {s:?}")));
            }
            let mut coeff = BigInt::one();
            let mut mon = Monomial::one();
            for factor in split_top_level(piece, '*') {
                if factor.bytes().all(|b| b.is_ascii_digit()) {
                    coeff *= factor
                        .parse::<BigInt>()
                        .map_err(|_| Error::PolyParse(factor.to_string()))?;
                    continue;
                }
                let (name, e) = match factor.rsplit_once('^') {
                    Some((name, e)) if !name.ends_with('[') => (
                        name,
                        e.parse::<i32>()
                            .map_err(|_| Error::PolyParse(format!("bad exponent in {factor:?}")))?,
                    ),
                    _ => (factor, 1),
                };
                mon.bump(parse_var(name)?, e);
            }
            out.add_term(mon, if neg { -coeff } else { coeff });
        }
        Ok(out)
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        match &value {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            _ => MultiPoly::from_term_map(&value).map_err(serde::de::Error::custom),
        }
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.times(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

impl std::iter::Product for MultiPoly {
    fn product<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        let mut out = MultiPoly::one();
        for p in iter {
            out = &out * &p;
        }
        out
    }
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// columns still available.
pub fn det(matrix: &[Vec<MultiPoly>]) -> MultiPoly {
    let k = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == k), "square matrix");
    assert!(k <= 64, "determinant of size {k}");
    let mut memo: HashMap<u64, MultiPoly> = HashMap::new();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    det_rec(matrix, 0, full, &mut memo)
}

fn det_rec(
    m: &[Vec<MultiPoly>],
    row: usize,
    cols: u64,
    memo: &mut HashMap<u64, MultiPoly>,
) -> MultiPoly {
    if row == m.len() {
        return MultiPoly::one();
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut out = MultiPoly::zero();
    let mut sign_neg = false;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let minor = det_rec(m, row + 1, cols & !(1 << c), memo);
            if !minor.is_zero() {
                let prod = entry * &minor;
                if sign_neg {
                    out -= &prod;
                } else {
                    out += &prod;
                }
            }
        }
        sign_neg = !sign_neg;
    }
    memo.insert(cols, out.clone());
    out
}

/// Divided difference in `x_i, x_{i+1}`; with `isobaric`, the operator
/// `f ↦ ∂_i((1 − x_{i+1}) f)`.
pub fn divided_difference(f: &MultiPoly, i: usize, isobaric: bool) -> Result<MultiPoly> {
    if i == 0 {
        return Err(Error::Precondition(
            "divided difference index starts at 1".into(),
        ));
    }
    let (a, b) = (x(i), x(i + 1));
    let input = if isobaric {
        &(&MultiPoly::one() - &MultiPoly::var(b)) * f
    } else {
        f.clone()
    };
    let mut out = MultiPoly::zero();
    for (m, c) in &input.terms {
        let (ea, eb) = (m.exponent(a), m.exponent(b));
        if ea < 0 || eb < 0 {
            return Err(Error::NotDivisible(format!(
                "Laurent monomial {m} in {a}, {b}"
            )));
        }
        if ea == eb {
            continue;
        }
        // (x_a^p x_b^q − x_a^q x_b^p)/(x_a − x_b) = ±(x_a x_b)^min · h_{|p−q|−1}(x_a, x_b)
        let (lo, hi, coeff) = if ea > eb {
            (eb, ea, c.clone())
        } else {
            (ea, eb, -c)
        };
        let rest = m.without(a, b);
        for k in 0..(hi - lo) {
            let mono = rest.with(a, lo + k).with(b, hi - 1 - k);
            out.add_term(mono, coeff.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(var: Var) -> MultiPoly {
        MultiPoly::var(var)
    }

    fn s(text: &str) -> MultiPoly {
        text.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        let p = &(&v(x(1)) * &v(y(3))) - &MultiPoly::constant(2);
        assert_eq!(p.to_string(), "x1*y3 - 2");
        assert_eq!(s("x1*y3 - 2"), p);
        assert_eq!(s("-z[6,5]"), -v(z(6, 5)));
        assert_eq!(s("3*t1^-2*t2 + t1"), s("t1 + 3*t2*t1^-2"));
        assert_eq!(MultiPoly::zero().to_string(), "0");
        assert!("x1 +".parse::<MultiPoly>().is_err());
        assert!("q3".parse::<MultiPoly>().is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<MultiPoly>(&json).unwrap(), p);
        let map = p.to_term_map();
        assert_eq!(MultiPoly::from_term_map(&map).unwrap(), p);
        assert_eq!(serde_json::from_value::<MultiPoly>(map).unwrap(), p);
    }

    #[test]
    fn divided_difference_examples() {
        assert_eq!(
            divided_difference(&v(x(1)), 1, false).unwrap(),
            MultiPoly::one()
        );
        assert_eq!(
            divided_difference(&v(x(1)).pow(2), 1, false).unwrap(),
            s("x1 + x2")
        );
        let sym = &v(x(1)) * &v(x(2));
        assert!(divided_difference(&sym, 1, false).unwrap().is_zero());
        assert_eq!(
            divided_difference(&v(x(2)), 1, false).unwrap(),
            MultiPoly::constant(-1)
        );
        assert!(divided_difference(&s("x1^-1"), 1, false).is_err());
        // π_1(x_1) = ∂_1(x_1 − x_1 x_2) = 1
        assert_eq!(
            divided_difference(&v(x(1)), 1, true).unwrap(),
            MultiPoly::one()
        );
    }

    #[test]
    fn determinants() {
        let m = vec![vec![s("x1"), s("x2")], vec![s("y1"), s("y2")]];
        assert_eq!(det(&m), s("x1*y2 - x2*y1"));
        let id3: Vec<Vec<MultiPoly>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| MultiPoly::constant((i == j) as i64))
                    .collect()
            })
            .collect();
        assert_eq!(det(&id3), MultiPoly::one());
        assert_eq!(det(&[]), MultiPoly::one());
    }

    #[test]
    fn substitution() {
        let p = s("x1^2*y1 + t1^-1");
        let q = p.substitute(|var| match var {
            Var::X(1) => Some(s("1 - t1")),
            Var::Y(1) => Some(s("t2")),
            Var::T(1) => Some(s("t3")),
            _ => None,
        });
        assert_eq!(q.unwrap(), s("t2 - 2*t1*t2 + t1^2*t2 + t3^-1"));
        assert!(s("x1^-1").substitute(|_| Some(s("1 + t1"))).is_err());
        assert_eq!(
            s("t1^-1*t2 + t1").denominator(),
            Monomial::from_pairs([(t(1), 1)])
        );
        assert_eq!(s("t1^2 + t1*t2 - 1").lowest_degree_part(), s("-1"));
    }

    #[test]
    fn compiled_evaluation() {
        let vars = [z(2, 1), z(3, 1)];
        let p = s("2*z[2,1]^2 - z[3,1] + 5");
        let c = p.compile_mod(&vars, 3).unwrap();
        // 2·4 − 1 + 5 = 12 ≡ 0 mod 3
        assert_eq!(c.eval(&[2, 1]), 0);
        assert_eq!(c.eval(&[0, 0]), 2);
        assert!(s("z[9,9]").compile_mod(&vars, 3).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let var = prop_oneof![
            (1usize..4).prop_map(x),
            (1usize..3).prop_map(y),
            (1usize..3).prop_map(t)
        ];
        let mono = proptest::collection::vec((var, 0i32..3), 0..3);
        proptest::collection::vec((mono, -3i64..4), 0..5).prop_map(|terms| {
            let mut p = MultiPoly::zero();
            for (m, c) in terms {
                p.add_term(Monomial::from_pairs(m), BigInt::from(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn text_forms_round_trip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<MultiPoly>().unwrap(), a.clone());
            prop_assert_eq!(MultiPoly::from_term_map(&a.to_term_map()).unwrap(), a);
        }

        #[test]
        fn divided_difference_is_exact_quotient(f in arb_poly(), i in 1usize..3) {
            // (x_i − x_{i+1}) ∂_i f = f − s_i f
            let swapped = f.map_vars(|var| match var {
                Var::X(k) if k as usize == i => x(i + 1),
                Var::X(k) if k as usize == i + 1 => x(i),
                other => other,
            });
            let d = divided_difference(&f, i, false).unwrap();
            prop_assert_eq!(&(&v(x(i)) - &v(x(i + 1))) * &d, &f - &swapped);
        }
    }
}
