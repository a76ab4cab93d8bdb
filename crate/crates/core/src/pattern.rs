//! Classical, mesh, marked mesh and interval pattern containment.
//!
//! Pattern cells use Cartesian coordinates: `x` is position, `y` is value,
//! origin at the bottom left. Cell `(i, j)` of a pattern of size `m`
//! embedded at positions `α(1) < … < α(m)` with values `β(1) < … < β(m)` is
//! the open rectangle between `α(i), α(i+1)` horizontally and `β(j), β(j+1)`
//! vertically, where `α(0) = β(0) = 0` and `α(m+1) = β(m+1) = n+1`. This is
//! the transpose of the matrix convention used by [`crate::diagram`].

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{bruhat_leq, Permutation};

/// Strictly increasing 1-based host positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding {
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub cells: Vec<(usize, usize)>,
    #[serde(default)]
    pub min: usize,
    /// `None` is unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<usize>,
}

impl Constraint {
    pub fn shaded(cells: Vec<(usize, usize)>) -> Self {
        Constraint {
            cells,
            min: 0,
            max: Some(0),
        }
    }

    pub fn at_least(cells: Vec<(usize, usize)>, k: usize) -> Self {
        Constraint {
            cells,
            min: k,
            max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedMeshPattern {
    pub perm: Permutation,
    pub constraints: Vec<Constraint>,
}

#[derive(Deserialize)]
struct RawMesh {
    perm: Vec<usize>,
    #[serde(default)]
    constraints: Vec<Constraint>,
}

impl<'de> Deserialize<'de> for MarkedMeshPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMesh::deserialize(d)?;
        let perm = Permutation::new(raw.perm).map_err(serde::de::Error::custom)?;
        MarkedMeshPattern::new(perm, raw.constraints).map_err(serde::de::Error::custom)
    }
}

impl MarkedMeshPattern {
    pub fn new(perm: Permutation, constraints: Vec<Constraint>) -> Result<Self> {
        let m = perm.n();
        for c in &constraints {
            if let Some(&(i, j)) = c.cells.iter().find(|&&(i, j)| i > m || j > m) {
                return Err(Error::Pattern(format!("cell ({i},{j}) outside [0,{m}]²")));
            }
            if c.max.is_some_and(|mx| mx < c.min) {
                return Err(Error::Pattern(format!(
                    "constraint with min {} > max {:?}",
                    c.min, c.max
                )));
            }
        }
        Ok(MarkedMeshPattern { perm, constraints })
    }

    pub fn classical(perm: Permutation) -> Self {
        MarkedMeshPattern {
            perm,
            constraints: vec![],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Pattern(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntervalPattern {
    pub u: Permutation,
    pub v: Permutation,
}

impl<'de> Deserialize<'de> for IntervalPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            u: Permutation,
            v: Permutation,
        }
        let raw = Raw::deserialize(d)?;
        IntervalPattern::new(raw.u, raw.v).map_err(serde::de::Error::custom)
    }
}

impl IntervalPattern {
    pub fn new(u: Permutation, v: Permutation) -> Result<Self> {
        if !bruhat_leq(&u, &v)? || u == v {
            return Err(Error::Pattern(format!(
                "[{u}, {v}] is not a nontrivial Bruhat interval"
            )));
        }
        Ok(IntervalPattern { u, v })
    }

    pub fn length_gap(&self) -> usize {
        self.v.coxeter_length() - self.u.coxeter_length()
    }
}

/// Backtracking search over classical occurrences. `accept` sees each
/// complete occurrence; `prune` sees each prefix and may reject it.
struct Search<'a> {
    host: &'a [u8],
    pat: &'a [u8],
    chosen: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(host: &'a Permutation, pat: &'a Permutation) -> Self {
        Search {
            host: host.bytes(),
            pat: pat.bytes(),
            chosen: Vec::with_capacity(pat.n()),
        }
    }

    fn run(
        &mut self,
        prune: &mut dyn FnMut(&[usize]) -> bool,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let t = self.chosen.len();
        let m = self.pat.len();
        if t == m {
            return accept(&self.chosen);
        }
        let start = self.chosen.last().map_or(0, |&k| k + 1);
        let end = self.host.len() - (m - t - 1);
        for k in start..end {
            let hv = self.host[k];
            let pv = self.pat[t];
            let consistent = self
                .chosen
                .iter()
                .enumerate()
                .all(|(s, &c)| (self.host[c] < hv) == (self.pat[s] < pv));
            if !consistent {
                continue;
            }
            self.chosen.push(k);
            let stop = !prune(&self.chosen) && self.run(prune, accept);
            self.chosen.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

fn to_embedding(chosen: &[usize]) -> Embedding {
    Embedding {
        indices: chosen.iter().map(|&k| k + 1).collect(),
    }
}

/// All occurrences of `p` in `w`, in lexicographic order of positions.
pub fn embeddings_classical(w: &Permutation, p: &Permutation) -> Vec<Embedding> {
    let mut out = Vec::new();
    if p.n() > w.n() {
        return out;
    }
    Search::new(w, p).run(&mut |_| false, &mut |c| {
        out.push(to_embedding(c));
        false
    });
    out
}

pub fn contains_classical(w: &Permutation, p: &Permutation) -> Option<Embedding> {
    if p.n() > w.n() {
        return None;
    }
    let mut found = None;
    Search::new(w, p).run(&mut |_| false, &mut |c| {
        found = Some(to_embedding(c));
        true
    });
    found
}

/// Grid location of host points relative to a (partial) occurrence.
struct CellLocator<'a> {
    host: &'a [u8],
    pat: &'a [u8],
}

impl CellLocator<'_> {
    /// Per-constraint counts of host points inside cells that the chosen
    /// prefix already determines. For a full occurrence these are exact.
    fn counts(&self, chosen: &[usize], constraints: &[Constraint]) -> Vec<usize> {
        let m = self.pat.len();
        let n = self.host.len();
        let t = chosen.len();
        // Known (pattern value, host value) pairs, sorted by value.
        let mut known: Vec<(usize, usize)> = Vec::with_capacity(t + 2);
        known.push((0, 0));
        known.extend(
            chosen
                .iter()
                .enumerate()
                .map(|(s, &c)| (self.pat[s] as usize, self.host[c] as usize)),
        );
        known.push((m + 1, n + 1));
        known.sort_unstable();
        let limit = if t == m { n } else { chosen[t - 1] };
        let mut counts = vec![0usize; constraints.len()];
        let mut gap = 0;
        for k in 0..limit {
            if gap < t && chosen[gap] == k {
                gap += 1;
                continue;
            }
            let x = self.host[k] as usize;
            let hi = known.partition_point(|&(_, hv)| hv < x);
            let (lo_pv, hi_pv) = (known[hi - 1].0, known[hi].0);
            if hi_pv != lo_pv + 1 {
                continue;
            }
            for (c, constraint) in constraints.iter().enumerate() {
                if constraint.cells.contains(&(gap, lo_pv)) {
                    counts[c] += 1;
                }
            }
        }
        counts
    }
}

fn mesh_search(w: &Permutation, mmp: &MarkedMeshPattern, mut visit: impl FnMut(Embedding) -> bool) {
    if mmp.perm.n() > w.n() {
        return;
    }
    let locator = CellLocator {
        host: w.bytes(),
        pat: mmp.perm.bytes(),
    };
    let m = mmp.perm.n();
    let has_max = mmp.constraints.iter().any(|c| c.max.is_some());
    let mut prune = |chosen: &[usize]| {
        if !has_max || chosen.len() == m {
            return false;
        }
        let counts = locator.counts(chosen, &mmp.constraints);
        mmp.constraints
            .iter()
            .zip(counts)
            .any(|(c, k)| c.max.is_some_and(|mx| k > mx))
    };
    let mut accept = |chosen: &[usize]| {
        let counts = locator.counts(chosen, &mmp.constraints);
        let ok = mmp
            .constraints
            .iter()
            .zip(counts)
            .all(|(c, k)| k >= c.min && c.max.is_none_or(|mx| k <= mx));
        ok && visit(to_embedding(chosen))
    };
    Search::new(w, &mmp.perm).run(&mut prune, &mut accept);
}

/// First occurrence of `mmp` in `w` satisfying every constraint.
pub fn contains_marked_mesh(w: &Permutation, mmp: &MarkedMeshPattern) -> Option<Embedding> {
    let mut found = None;
    mesh_search(w, mmp, |e| {
        found = Some(e);
        true
    });
    found
}

pub fn marked_mesh_embeddings(w: &Permutation, mmp: &MarkedMeshPattern) -> Vec<Embedding> {
    let mut out = Vec::new();
    mesh_search(w, mmp, |e| {
        out.push(e);
        false
    });
    out
}

/// `w` with the entries at `e` rearranged into the relative order of `u`.
pub fn rearrange(w: &Permutation, e: &Embedding, u: &Permutation) -> Permutation {
    let mut vals: Vec<u8> = e.indices.iter().map(|&i| w.bytes()[i - 1]).collect();
    vals.sort_unstable();
    let mut word = w.bytes().to_vec();
    for (t, &i) in e.indices.iter().enumerate() {
        word[i - 1] = vals[u.at(t + 1) - 1];
    }
    Permutation::from_bytes_unchecked(word)
}

/// First occurrence of `ip.v` in `w` at which the rearranged permutation
/// `x` satisfies `ℓ(w) − ℓ(x) = ℓ(v) − ℓ(u)`.
pub fn interval_embeds(w: &Permutation, ip: &IntervalPattern) -> Option<Embedding> {
    if ip.v.n() > w.n() {
        return None;
    }
    let lw = w.coxeter_length();
    let gap = ip.length_gap();
    let mut found = None;
    Search::new(w, &ip.v).run(&mut |_| false, &mut |c| {
        let e = to_embedding(c);
        let x = rearrange(w, &e, &ip.u);
        if lw - x.coxeter_length() == gap {
            found = Some(e);
            true
        } else {
            false
        }
    });
    found
}

/// A Bruhat interval with its covering relation.
#[derive(Debug, Clone)]
pub struct Poset {
    /// Sorted by length, then lexicographically.
    pub elements: Vec<Permutation>,
    /// Pairs `(a, b)` of element indices with `a ⋖ b`.
    pub covers: Vec<(usize, usize)>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        bruhat_leq(&self.elements[a], &self.elements[b]).unwrap_or(false)
    }
}

/// `[u, v]` in Bruhat order, built by walking down covers from `v`.
pub fn bruhat_interval(u: &Permutation, v: &Permutation) -> Result<Poset> {
    if !bruhat_leq(u, v)? {
        return Err(Error::Precondition(format!("{u} is not below {v}")));
    }
    let n = v.n();
    let mut seen: HashSet<Permutation> = HashSet::from([v.clone()]);
    let mut queue = VecDeque::from([v.clone()]);
    let mut edges = Vec::new();
    while let Some(z) = queue.pop_front() {
        let lz = z.coxeter_length();
        for i in 1..=n {
            for j in i + 1..=n {
                if z.at(i) < z.at(j) {
                    continue;
                }
                let y = z.swap_positions(i, j);
                if y.coxeter_length() + 1 != lz || !bruhat_leq(u, &y)? {
                    continue;
                }
                edges.push((y.clone(), z.clone()));
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort_by_key(|z| (z.coxeter_length(), z.clone()));
    let index = |z: &Permutation| {
        elements
            .binary_search_by_key(&(z.coxeter_length(), z.clone()), |e| {
                (e.coxeter_length(), e.clone())
            })
            .unwrap()
    };
    let mut covers: Vec<(usize, usize)> = edges.iter().map(|(a, b)| (index(a), index(b))).collect();
    covers.sort_unstable();
    covers.dedup();
    Ok(Poset { elements, covers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{enumerate, p};
    use proptest::prelude::*;

    fn positions(e: &Embedding) -> Vec<usize> {
        e.indices.clone()
    }

    fn lci_pattern_1() -> MarkedMeshPattern {
        MarkedMeshPattern::new(
            p("4231"),
            vec![Constraint::at_least(vec![(1, 2), (2, 2), (3, 2)], 1)],
        )
        .unwrap()
    }

    #[test]
    fn classical_examples() {
        let all = embeddings_classical(&p("526413"), &p("132"));
        assert_eq!(all.len(), 3);
        assert!(embeddings_classical(&Permutation::identity(6), &p("21")).is_empty());
        assert!(embeddings_classical(&p("351624"), &p("35142")).is_empty());
        assert_eq!(
            contains_classical(&p("53241"), &p("53241"))
                .unwrap()
                .indices,
            vec![1, 2, 3, 4, 5]
        );
        assert!(contains_classical(&p("12"), &p("123")).is_none());
    }

    #[test]
    fn marked_mesh_examples() {
        let mmp = MarkedMeshPattern::new(
            p("132"),
            vec![
                Constraint::shaded(vec![(1, 0), (1, 1), (1, 2), (1, 3)]),
                Constraint::at_least(vec![(2, 2), (3, 2)], 1),
            ],
        )
        .unwrap();
        let found = marked_mesh_embeddings(&p("526413"), &mmp);
        assert_eq!(
            found.iter().map(positions).collect::<Vec<_>>(),
            vec![vec![2, 3, 6]]
        );
        assert!(contains_marked_mesh(&p("4231"), &lci_pattern_1()).is_none());
        let e = contains_marked_mesh(&p("53241"), &lci_pattern_1()).unwrap();
        assert_eq!(e.indices, vec![1, 3, 4, 5]);
    }

    #[test]
    fn malformed_constraints() {
        assert!(MarkedMeshPattern::new(p("12"), vec![Constraint::shaded(vec![(3, 0)])]).is_err());
        let bad = Constraint {
            cells: vec![(0, 0)],
            min: 2,
            max: Some(1),
        };
        assert!(MarkedMeshPattern::new(p("12"), vec![bad]).is_err());
        assert!(MarkedMeshPattern::from_json(r#"{"perm":[1,1]}"#).is_err());
        let ok = MarkedMeshPattern::from_json(
            r#"{"perm":[4,2,3,1],"constraints":[{"cells":[[1,2],[2,2],[3,2]],"min":1},{"cells":[[0,3]],"max":0}]}"#,
        )
        .unwrap();
        assert_eq!(
            ok.constraints[0],
            Constraint::at_least(vec![(1, 2), (2, 2), (3, 2)], 1)
        );
        assert_eq!(ok.constraints[1], Constraint::shaded(vec![(0, 3)]));
    }

    #[test]
    fn interval_examples() {
        let ip = IntervalPattern::new(p("21543"), p("52431")).unwrap();
        assert_eq!(
            interval_embeds(&p("52431"), &ip).unwrap().indices,
            vec![1, 2, 3, 4, 5]
        );
        let b = IntervalPattern::new(p("214365"), p("426153")).unwrap();
        assert_eq!(
            interval_embeds(&p("426153"), &b).unwrap().indices,
            (1..=6).collect::<Vec<_>>()
        );
        let c = IntervalPattern::new(p("21354"), p("52341")).unwrap();
        assert!(interval_embeds(&p("526413"), &c).is_none());
        assert!(IntervalPattern::new(p("4231"), p("3412")).is_err());
        assert!(IntervalPattern::new(p("123"), p("123")).is_err());
    }

    #[test]
    fn interval_posets() {
        let w = p("3142");
        assert_eq!(bruhat_interval(&w, &w).unwrap().len(), 1);
        let chain = bruhat_interval(&p("12"), &p("21")).unwrap();
        assert_eq!((chain.len(), chain.covers.clone()), (2, vec![(0, 1)]));
        assert_eq!(bruhat_interval(&p("123"), &p("321")).unwrap().len(), 6);
        assert!(bruhat_interval(&p("321"), &p("123")).is_err());
        for u in enumerate(4) {
            for v in enumerate(4) {
                if !bruhat_leq(&u, &v).unwrap() {
                    continue;
                }
                let poset = bruhat_interval(&u, &v).unwrap();
                let direct = enumerate(4)
                    .filter(|z| bruhat_leq(&u, z).unwrap() && bruhat_leq(z, &v).unwrap())
                    .count();
                assert_eq!(poset.len(), direct, "[{u},{v}]");
            }
        }
    }

    #[test]
    fn lci_pattern_1_matches_its_projections() {
        let mmp = lci_pattern_1();
        let three = [p("53241"), p("52341"), p("52431")];
        for n in 1..=7 {
            for w in enumerate(n) {
                let classical = three.iter().any(|q| contains_classical(&w, q).is_some());
                assert_eq!(classical, contains_marked_mesh(&w, &mmp).is_some(), "{w}");
            }
        }
    }

    #[test]
    fn adjacent_ascent_mesh() {
        let mmp = MarkedMeshPattern::new(
            p("12"),
            vec![Constraint::shaded(vec![(1, 0), (1, 1), (1, 2)])],
        )
        .unwrap();
        for n in 1..=7 {
            for w in enumerate(n) {
                let direct = (1..n).any(|i| w.at(i) < w.at(i + 1));
                assert_eq!(contains_marked_mesh(&w, &mmp).is_some(), direct, "{w}");
            }
        }
    }

    #[test]
    fn symmetry_transport() {
        let pats = ["53241", "52341", "52431", "35142", "42513", "351624"].map(p);
        for n in 5..=7 {
            for w in enumerate(n) {
                for q in &pats {
                    let here = contains_classical(&w, q).is_some();
                    assert_eq!(
                        here,
                        contains_classical(&w.inverse(), &q.inverse()).is_some()
                    );
                    assert_eq!(
                        here,
                        contains_classical(&w.reverse_complement(), &q.reverse_complement())
                            .is_some()
                    );
                }
            }
        }
    }

    /// Mesh counting by direct geometry, independent of the pruning search.
    fn brute_mesh(w: &Permutation, mmp: &MarkedMeshPattern) -> Vec<Vec<usize>> {
        let (n, m) = (w.n(), mmp.perm.n());
        let mut out = vec![];
        for e in embeddings_classical(w, &mmp.perm) {
            let mut alpha = vec![0];
            alpha.extend(e.indices.iter().copied());
            alpha.push(n + 1);
            let mut beta: Vec<usize> = e.indices.iter().map(|&i| w.at(i)).collect();
            beta.sort();
            beta.insert(0, 0);
            beta.push(n + 1);
            let ok = mmp.constraints.iter().all(|c| {
                let k = (1..=n)
                    .filter(|&x| {
                        let y = w.at(x);
                        c.cells.iter().any(|&(i, j)| {
                            alpha[i] < x && x < alpha[i + 1] && beta[j] < y && y < beta[j + 1]
                        })
                    })
                    .count();
                k >= c.min && c.max.is_none_or(|mx| k <= mx)
            });
            if ok {
                out.push(e.indices);
            }
            let _ = m;
        }
        out
    }

    fn arb_case() -> impl Strategy<Value = (Permutation, MarkedMeshPattern)> {
        (1usize..=7, 1usize..=3).prop_flat_map(|(n, m)| {
            let m = m.min(n);
            let host = Just((1..=n).collect::<Vec<_>>()).prop_shuffle();
            let pat = Just((1..=m).collect::<Vec<_>>()).prop_shuffle();
            let cell = (0..=m, 0..=m);
            let constraint = (
                proptest::collection::vec(cell, 1..4),
                0usize..2,
                proptest::option::of(0usize..3),
            );
            (host, pat, proptest::collection::vec(constraint, 0..3)).prop_map(|(h, q, cs)| {
                let constraints = cs
                    .into_iter()
                    .map(|(cells, min, max)| Constraint {
                        cells,
                        min,
                        max: max.map(|x| x.max(min)),
                    })
                    .collect();
                (
                    Permutation::new(h).unwrap(),
                    MarkedMeshPattern::new(Permutation::new(q).unwrap(), constraints).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn mesh_search_matches_geometry((w, mmp) in arb_case()) {
            let fast: Vec<Vec<usize>> = marked_mesh_embeddings(&w, &mmp).iter().map(positions).collect();
            prop_assert_eq!(fast, brute_mesh(&w, &mmp));
        }

        #[test]
        fn unconstrained_mesh_is_classical((w, mmp) in arb_case()) {
            let plain = MarkedMeshPattern::classical(mmp.perm.clone());
            prop_assert_eq!(
                contains_marked_mesh(&w, &plain).is_some(),
                !embeddings_classical(&w, &mmp.perm).is_empty()
            );
        }
    }
}
