//! The length criterion in `interval_embeds` against the definition: an
//! occurrence of `v` whose rearrangement `x` gives `[x, w] ≅ [u, v]`.

use std::collections::HashSet;

use schublci::classify::{exceptional_intervals, witness_candidates};
use schublci::pattern::{
    bruhat_interval, embeddings_classical, interval_embeds, rearrange, IntervalPattern, Poset,
};
use schublci::perm::{bruhat_leq, enumerate};
use schublci::Permutation;

struct Graded {
    levels: Vec<usize>,
    up: Vec<Vec<usize>>,
    covers: HashSet<(usize, usize)>,
}

impl Graded {
    fn new(p: &Poset) -> Self {
        let base = p
            .elements
            .iter()
            .map(|e| e.coxeter_length())
            .min()
            .unwrap_or(0);
        let levels = p
            .elements
            .iter()
            .map(|e| e.coxeter_length() - base)
            .collect();
        let mut up = vec![Vec::new(); p.len()];
        for &(a, b) in &p.covers {
            up[a].push(b);
        }
        Graded {
            levels,
            up,
            covers: p.covers.iter().copied().collect(),
        }
    }

    fn signature(&self, i: usize) -> (usize, usize, usize) {
        let down = self.covers.iter().filter(|c| c.1 == i).count();
        (self.levels[i], self.up[i].len(), down)
    }
}

/// Backtracking isomorphism test on cover graphs, matching level by level.
fn isomorphic(a: &Poset, b: &Poset) -> bool {
    if a.len() != b.len() || a.covers.len() != b.covers.len() {
        return false;
    }
    let (ga, gb) = (Graded::new(a), Graded::new(b));
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&i| ga.levels[i]);
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];

    fn extend(
        k: usize,
        order: &[usize],
        ga: &Graded,
        gb: &Graded,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&i) = order.get(k) else { return true };
        for j in 0..used.len() {
            if used[j] || ga.signature(i) != gb.signature(j) {
                continue;
            }
            // Every mapped neighbour below i must stay a cover below j.
            let consistent = order[..k]
                .iter()
                .all(|&h| ga.covers.contains(&(h, i)) == gb.covers.contains(&(map[h], j)));
            if !consistent {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if extend(k + 1, order, ga, gb, map, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    extend(0, &order, &ga, &gb, &mut map, &mut used)
}

fn by_definition(w: &Permutation, ip: &IntervalPattern, target: &Poset) -> Vec<bool> {
    embeddings_classical(w, &ip.v)
        .iter()
        .map(|e| {
            let x = rearrange(w, e, &ip.u);
            bruhat_leq(&x, w).unwrap() && isomorphic(&bruhat_interval(&x, w).unwrap(), target)
        })
        .collect()
}

fn by_length(w: &Permutation, ip: &IntervalPattern) -> Vec<bool> {
    let gap = ip.length_gap();
    embeddings_classical(w, &ip.v)
        .iter()
        .map(|e| w.coxeter_length() - rearrange(w, e, &ip.u).coxeter_length() == gap)
        .collect()
}

#[test]
fn isomorphism_oracle_is_sane() {
    let p = |s: &str| s.parse::<Permutation>().unwrap();
    let edge = bruhat_interval(&p("123"), &p("213")).unwrap();
    let chain = bruhat_interval(&p("1234"), &p("2134")).unwrap();
    assert!(isomorphic(&edge, &chain));
    let s3 = bruhat_interval(&p("123"), &p("321")).unwrap();
    let b = bruhat_interval(&p("1234"), &p("3214")).unwrap();
    assert!(isomorphic(&s3, &b));
    let diamond = bruhat_interval(&p("1234"), &p("2143")).unwrap();
    assert_eq!(diamond.len(), 4);
    assert!(!isomorphic(&s3, &diamond));
    // Same sizes and cover counts, different shapes.
    let elements: Vec<Permutation> = ["1234", "2134", "1324", "2314", "3124"].map(p).into();
    let two_chains = Poset {
        elements: elements.clone(),
        covers: vec![(0, 1), (0, 2), (1, 3), (2, 4)],
    };
    let fork = Poset {
        elements,
        covers: vec![(0, 1), (0, 2), (1, 3), (1, 4)],
    };
    assert!(isomorphic(&two_chains, &two_chains.clone()));
    assert!(!isomorphic(&two_chains, &fork));
}

#[test]
fn length_criterion_matches_isomorphism() {
    let mut patterns: Vec<IntervalPattern> = witness_candidates(6)
        .into_iter()
        .map(|(_, ip)| ip)
        .collect();
    patterns.extend(exceptional_intervals().into_iter().map(|(_, ip)| ip));
    patterns.retain(|ip| ip.v.n() <= 6);
    patterns.sort_by_key(|ip| (ip.v.n(), ip.v.to_string(), ip.u.to_string()));
    patterns.dedup();
    assert!(patterns.len() >= 5);

    let mut occurrences = 0;
    for ip in &patterns {
        let target = bruhat_interval(&ip.u, &ip.v).unwrap();
        for n in ip.v.n()..=7 {
            for w in enumerate(n) {
                let def = by_definition(&w, ip, &target);
                assert_eq!(by_length(&w, ip), def, "[{}, {}] in {w}", ip.u, ip.v);
                assert_eq!(
                    interval_embeds(&w, ip).is_some(),
                    def.contains(&true),
                    "[{}, {}] in {w}",
                    ip.u,
                    ip.v
                );
                occurrences += def.len();
            }
        }
    }
    eprintln!("{} patterns, {occurrences} occurrences", patterns.len());
    assert!(occurrences > 1000);
}
