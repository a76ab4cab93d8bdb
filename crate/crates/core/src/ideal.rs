//! Generic matrices, minors, Kazhdan–Lusztig ideals and their minimal
//! generating sets, with a finite-field vanishing-set oracle.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::diagram::{associated_dbi, Cell, Diagram, Region, Stratum};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::{det, z, CompiledPoly, MultiPoly, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    Zero,
    One,
    Var(usize, usize),
}

/// `M_v`: a 1 at `(v(i), i)`, a variable `z[p,q]` at each `(p,q) ∈ D(v)`.
#[derive(Debug, Clone)]
pub struct GenericMatrix {
    pub v: Permutation,
    entries: Vec<Entry>,
}

impl GenericMatrix {
    pub fn new(v: &Permutation) -> Self {
        let n = v.n();
        let d = Diagram::new(v);
        let mut entries = vec![Entry::Zero; n * n];
        for p in 1..=n {
            for q in 1..=n {
                entries[(p - 1) * n + q - 1] = if v.at(q) == p {
                    Entry::One
                } else if d.contains(p, q) {
                    Entry::Var(p, q)
                } else {
                    Entry::Zero
                };
            }
        }
        GenericMatrix {
            v: v.clone(),
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    pub fn entry(&self, p: usize, q: usize) -> Entry {
        self.entries[(p - 1) * self.n() + q - 1]
    }

    /// Coordinates of the affine space, `D(v)` in lexicographic order.
    pub fn variables(&self) -> Vec<Var> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                Entry::Var(p, q) => Some(z(*p, *q)),
                _ => None,
            })
            .collect()
    }

    fn poly(&self, p: usize, q: usize) -> MultiPoly {
        match self.entry(p, q) {
            Entry::Zero => MultiPoly::zero(),
            Entry::One => MultiPoly::one(),
            Entry::Var(a, b) => MultiPoly::var(z(a, b)),
        }
    }
}

pub fn generic_matrix(v: &Permutation) -> GenericMatrix {
    GenericMatrix::new(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        cols.sort_unstable();
        let distinct = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        if rows.len() != cols.len() || !distinct(&rows) || !distinct(&cols) {
            return Err(Error::Minor(format!(
                "rows {rows:?} and cols {cols:?} are not equal-size sets"
            )));
        }
        Ok(MinorSpec { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Coefficients of `a_1, …, a_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    pub coeffs: Vec<i64>,
}

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        WeightVector { coeffs: vec![0; n] }
    }

    pub fn add(&mut self, j: usize, c: i64) {
        self.coeffs[j - 1] += c;
    }

    /// The ℤ-grading `a_j ↦ −j`, under which `deg z[p,q] = p − v(q)`.
    pub fn specialize(&self) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| -c * (i as i64 + 1))
            .sum()
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (i, c) in self.coeffs.iter().enumerate() {
            map.serialize_entry(&format!("a{}", i + 1), c)?;
        }
        map.end()
    }
}

/// Determinant of the submatrix of `M_v` on `spec`, with its weight
/// `Σ_{q∈B} a_{v(q)} − Σ_{p∈A} a_p`.
pub fn minor(v: &Permutation, spec: &MinorSpec) -> Result<(MultiPoly, WeightVector)> {
    minor_of(&GenericMatrix::new(v), spec)
}

pub fn minor_of(m: &GenericMatrix, spec: &MinorSpec) -> Result<(MultiPoly, WeightVector)> {
    let n = m.n();
    if spec.rows.iter().chain(&spec.cols).any(|&i| i == 0 || i > n) {
        return Err(Error::Minor(format!("{spec:?} out of range for n = {n}")));
    }
    let sub: Vec<Vec<MultiPoly>> = spec
        .rows
        .iter()
        .map(|&p| spec.cols.iter().map(|&q| m.poly(p, q)).collect())
        .collect();
    let poly = det(&sub);
    let mut weight = WeightVector::zero(n);
    for &q in &spec.cols {
        weight.add(m.v.at(q), 1);
    }
    for &p in &spec.rows {
        weight.add(p, -1);
    }
    let degree = weight.specialize();
    for (mono, _) in poly.terms() {
        let d: i64 = mono
            .factors()
            .iter()
            .map(|&(var, e)| match var {
                Var::Z(p, q) => (p as i64 - m.v.at(q as usize) as i64) * e as i64,
                _ => 0,
            })
            .sum();
        if d != degree {
            return Err(Error::Degree(format!(
                "{spec:?}: monomial {mono} has degree {d}, expected {degree}"
            )));
        }
    }
    if degree < 0 && !poly.is_zero() {
        return Err(Error::Degree(format!(
            "{spec:?} has negative degree but is nonzero"
        )));
    }
    if degree == 0
        && poly
            .as_constant()
            .is_none_or(|c| *c.magnitude() > num_bigint::BigUint::from(1u8))
    {
        return Err(Error::Degree(format!(
            "{spec:?} has degree 0 but is {poly}"
        )));
    }
    Ok((poly, weight))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// A minor attached to an essential box of `w`.
    Essential { p: usize, q: usize, rank: usize },
    /// `f_(x,y)` for a diagram box of the associated dbi permutation.
    DiagramBox { x: usize, y: usize, rank: usize },
    /// `f_(p,q)` for a box of E″(w).
    DoublePrime { p: usize, q: usize, rank: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    #[serde(flatten)]
    pub spec: MinorSpec,
    pub poly: MultiPoly,
    pub weight: WeightVector,
    pub origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "full_I")]
    FullI,
    #[serde(rename = "reduced_Iprime")]
    ReducedIPrime,
    #[serde(rename = "minimal_J")]
    MinimalJ,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSet {
    pub v: Permutation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub associated_dbi: Option<Permutation>,
    pub generators: Vec<Generator>,
    pub provenance: Provenance,
}

impl GeneratorSet {
    pub fn polys(&self) -> Vec<MultiPoly> {
        self.generators.iter().map(|g| g.poly.clone()).collect()
    }

    pub fn specs(&self) -> Vec<MinorSpec> {
        self.generators.iter().map(|g| g.spec.clone()).collect()
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

fn build(m: &GenericMatrix, specs: Vec<(MinorSpec, Origin)>) -> Result<Vec<Generator>> {
    specs
        .into_iter()
        .map(|(spec, origin)| {
            let (poly, weight) = minor_of(m, &spec)?;
            Ok(Generator {
                spec,
                poly,
                weight,
                origin,
            })
        })
        .collect()
}

/// All `(r+1)`-minors of `M_v` weakly SW of a box `(p,q)` of rank `r`.
fn box_specs(n: usize, p: usize, q: usize, r: usize) -> Vec<MinorSpec> {
    let rows: Vec<usize> = (p..=n).collect();
    let cols: Vec<usize> = (1..=q).collect();
    let mut out = Vec::new();
    for a in subsets(&rows, r + 1) {
        for b in subsets(&cols, r + 1) {
            out.push(MinorSpec {
                rows: a.clone(),
                cols: b,
            });
        }
    }
    out
}

/// Generators of `I_{v,w}`: for each `(p,q) ∈ E(w)`, every minor of size
/// `r_w(p,q)+1` with rows in `[p,n]` and columns in `[1,q]`.
pub fn kl_ideal_generators(v: &Permutation, w: &Permutation) -> Result<GeneratorSet> {
    if v.n() != w.n() {
        return Err(Error::SizeMismatch(v.n(), w.n()));
    }
    let n = w.n();
    let mut seen = BTreeSet::new();
    let mut specs = Vec::new();
    for e in Diagram::new(w).essential_set() {
        let (p, q, rank) = (e.cell.p, e.cell.q, e.rank);
        for spec in box_specs(n, p, q, rank) {
            if seen.insert(spec.clone()) {
                specs.push((spec, Origin::Essential { p, q, rank }));
            }
        }
    }
    let m = GenericMatrix::new(v);
    Ok(GeneratorSet {
        v: v.clone(),
        associated_dbi: None,
        generators: build(&m, specs)?,
        provenance: Provenance::FullI,
    })
}

/// Generators of `I_{(p,q,r)}` at one essential box of `w` (with `v = id`):
/// either every minor, or only the restricted family
/// `d_{[p,p+r−1]∪{x+r}, {y−r}∪[q−r+1,q]}` for `x ∈ [p,n−r]`, `y ∈ [1+r,q]`.
pub fn box_generators(w: &Permutation, cell: Cell, restricted: bool) -> Result<GeneratorSet> {
    let d = Diagram::new(w);
    if !d.is_essential(cell.p, cell.q) {
        return Err(Error::NotEssential(cell.p, cell.q));
    }
    let n = w.n();
    let (p, q) = (cell.p, cell.q);
    let r = d.rank(p, q);
    let origin = Origin::Essential { p, q, rank: r };
    let specs: Vec<(MinorSpec, Origin)> = if restricted {
        let mut out = Vec::new();
        for x in p..=n.saturating_sub(r) {
            for y in 1 + r..=q {
                let mut rows: Vec<usize> = (p..p + r).collect();
                rows.push(x + r);
                let mut cols = vec![y - r];
                cols.extend(q + 1 - r..=q);
                out.push((MinorSpec::new(rows, cols)?, origin));
            }
        }
        out
    } else {
        box_specs(n, p, q, r)
            .into_iter()
            .map(|s| (s, origin))
            .collect()
    };
    let id = Permutation::identity(n);
    let provenance = if restricted {
        Provenance::ReducedIPrime
    } else {
        Provenance::FullI
    };
    Ok(GeneratorSet {
        v: id.clone(),
        associated_dbi: None,
        generators: build(&GenericMatrix::new(&id), specs)?,
        provenance,
    })
}

/// `I′_w`: the restricted families at every essential box of `w`.
pub fn restricted_generators(w: &Permutation) -> Result<GeneratorSet> {
    let mut seen = BTreeSet::new();
    let mut generators = Vec::new();
    for cell in Diagram::new(w).essential_cells() {
        for g in box_generators(w, cell, true)?.generators {
            if seen.insert(g.spec.clone()) {
                generators.push(g);
            }
        }
    }
    Ok(GeneratorSet {
        v: Permutation::identity(w.n()),
        associated_dbi: None,
        generators,
        provenance: Provenance::ReducedIPrime,
    })
}

/// `J_w`, one minor per box of `D(v)` for `v = associated_dbi(w)` and one
/// per box of `E″(w)`, as generators of `I_w = I_{id,w}`.
pub fn minimal_generators(w: &Permutation) -> Result<GeneratorSet> {
    if Diagram::new(w).inclusion_level() == crate::diagram::InclusionLevel::Neither {
        return Err(Error::NotLci(w.to_string()));
    }
    let v = associated_dbi(w)?;
    let n = w.n();
    let dv = Diagram::new(&v);
    let regions: Vec<Region> = dv.region_partition()?;
    let mut specs = Vec::new();
    for cell in dv.cells() {
        let (x, y) = (cell.p, cell.q);
        let rank = dv.rank(x, y);
        let spec = if rank == 0 {
            MinorSpec::new(vec![x], vec![y])?
        } else {
            let m = regions
                .iter()
                .find(|m| m.boxes.contains(&cell))
                .ok_or_else(|| {
                    Error::Precondition(format!("box {cell} of {v} lies in no region"))
                })?;
            let (pm, qm, r) = (m.corner.p, m.corner.q, m.rank);
            if x + r > n || y <= r {
                return Err(Error::Precondition(format!(
                    "box {cell} of {v} leaves the matrix"
                )));
            }
            let mut rows: Vec<usize> = (pm..pm + r).collect();
            rows.push(x + r);
            let mut cols = vec![y - r];
            cols.extend(qm + 1 - r..=qm);
            MinorSpec::new(rows, cols)?
        };
        specs.push((spec, Origin::DiagramBox { x, y, rank }));
    }
    for e in Diagram::new(w).essential_set() {
        if e.stratum != Stratum::DoublePrime {
            continue;
        }
        let (p, q, r) = (e.cell.p, e.cell.q, e.rank);
        let spec = MinorSpec::new((p..=p + r).collect(), (q - r..=q).collect())?;
        specs.push((spec, Origin::DoublePrime { p, q, rank: r }));
    }
    let id = Permutation::identity(n);
    Ok(GeneratorSet {
        v: id.clone(),
        associated_dbi: Some(v),
        generators: build(&GenericMatrix::new(&id), specs)?,
        provenance: Provenance::MinimalJ,
    })
}

/// Closed-form weights of `J_w`, each checked against the expanded minor.
pub fn generator_degrees(gens: &GeneratorSet) -> Result<Vec<WeightVector>> {
    let n = gens.v.n();
    gens.generators
        .iter()
        .map(|g| {
            let mut w = WeightVector::zero(n);
            match g.origin {
                Origin::DiagramBox { x, y, rank } => {
                    w.add(y - rank, 1);
                    w.add(x + rank, -1);
                }
                Origin::DoublePrime { p, q, rank } => {
                    for i in 0..=rank {
                        w.add(q - i, 1);
                        w.add(p + i, -1);
                    }
                }
                Origin::Essential { .. } => return Ok(g.weight.clone()),
            }
            if w != g.weight {
                return Err(Error::Degree(format!(
                    "{:?}: closed form {:?} disagrees with minor weight {:?}",
                    g.spec, w.coeffs, g.weight.coeffs
                )));
            }
            Ok(w)
        })
        .collect()
}

/// Enumeration cap for [`vanishing_points`].
pub const POINT_BUDGET: u64 = 100_000_000;

fn point_count(nvars: usize, q: u64) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..nvars {
        total = total
            .checked_mul(q)
            .filter(|&t| t <= POINT_BUDGET)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "{q}^{nvars} points exceeds the budget of {POINT_BUDGET}"
                ))
            })?;
    }
    Ok(total)
}

fn decode(mut index: u64, q: u64, point: &mut [u8]) {
    for slot in point.iter_mut() {
        *slot = (index % q) as u8;
        index /= q;
    }
}

fn compile(polys: &[MultiPoly], vars: &[Var], q: u64) -> Result<Vec<CompiledPoly>> {
    if !(2..=251).contains(&q) || (2..q).any(|d| d * d <= q && q.is_multiple_of(d)) {
        return Err(Error::Precondition(format!(
            "field order {q} is not a prime below 256"
        )));
    }
    polys.iter().map(|p| p.compile_mod(vars, q)).collect()
}

/// Points of `F_q^{vars}` where every polynomial vanishes, in the order of
/// the base-`q` index with the first variable least significant.
pub fn vanishing_points_in(polys: &[MultiPoly], vars: &[Var], q: u64) -> Result<Vec<Vec<u8>>> {
    let total = point_count(vars.len(), q)?;
    let compiled = compile(polys, vars, q)?;
    let chunks = chunk_ranges(total);
    let parts: Vec<Vec<Vec<u8>>> = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut point = vec![0u8; vars.len()];
            let mut out = Vec::new();
            for i in lo..hi {
                decode(i, q, &mut point);
                if compiled.iter().all(|c| c.eval(&point) == 0) {
                    out.push(point.clone());
                }
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// First point where exactly one of the two systems vanishes, if any.
pub fn vanishing_difference(
    a: &[MultiPoly],
    b: &[MultiPoly],
    vars: &[Var],
    q: u64,
) -> Result<Option<Vec<u8>>> {
    let total = point_count(vars.len(), q)?;
    let (ca, cb) = (compile(a, vars, q)?, compile(b, vars, q)?);
    let found: Option<u64> = chunk_ranges(total)
        .into_par_iter()
        .find_map_first(|(lo, hi)| {
            let mut point = vec![0u8; vars.len()];
            (lo..hi).find(|&i| {
                decode(i, q, &mut point);
                let za = ca.iter().all(|c| c.eval(&point) == 0);
                let zb = cb.iter().all(|c| c.eval(&point) == 0);
                za != zb
            })
        });
    Ok(found.map(|i| {
        let mut point = vec![0u8; vars.len()];
        decode(i, q, &mut point);
        point
    }))
}

fn chunk_ranges(total: u64) -> Vec<(u64, u64)> {
    const CHUNK: u64 = 1 << 14;
    (0..total.div_ceil(CHUNK))
        .map(|k| (k * CHUNK, ((k + 1) * CHUNK).min(total)))
        .collect()
}

/// Vanishing set of a generator set over `F_q`, coordinates `D(v)`.
pub fn vanishing_points(gens: &GeneratorSet, q: u64) -> Result<Vec<Vec<u8>>> {
    vanishing_points_in(&gens.polys(), &GenericMatrix::new(&gens.v).variables(), q)
}

pub fn vanishing_equal(a: &GeneratorSet, b: &GeneratorSet, q: u64) -> Result<bool> {
    if a.v != b.v {
        return Err(Error::Precondition(format!(
            "coordinate spaces differ: {} vs {}",
            a.v, b.v
        )));
    }
    let vars = GenericMatrix::new(&a.v).variables();
    Ok(vanishing_difference(&a.polys(), &b.polys(), &vars, q)?.is_none())
}

/// Counts of generators per origin kind, for reports.
pub fn origin_summary(gens: &GeneratorSet) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::new();
    for g in &gens.generators {
        let key = match g.origin {
            Origin::Essential { .. } => "essential",
            Origin::DiagramBox { .. } => "diagram_box",
            Origin::DoublePrime { .. } => "double_prime",
        };
        *out.entry(key).or_insert(0) += 1;
    }
    out
}
