//! Double Schubert and Grothendieck polynomials by descending divided
//! differences from the longest permutation.

use std::collections::HashMap;

use crate::error::Result;
use crate::perm::Permutation;
use crate::poly::{divided_difference, x, y, MultiPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    Cohomology,
    K,
}

/// Which ascent of `w` to step up through; different choices walk
/// different reduced words for `w⁻¹w₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AscentChoice {
    First,
    Last,
    Middle,
}

/// Memoized descent for one `n` and theory. The top polynomial may be
/// pre-specialized in `y`, which commutes with the operators.
pub struct SchubertCache {
    n: usize,
    theory: Theory,
    choice: AscentChoice,
    memo: HashMap<Vec<u8>, MultiPoly>,
}

impl SchubertCache {
    pub fn new(n: usize, theory: Theory) -> Self {
        Self::with_top(
            n,
            theory,
            AscentChoice::First,
            top(n, theory, &|j| MultiPoly::var(y(j))),
        )
    }

    pub fn with_choice(n: usize, theory: Theory, choice: AscentChoice) -> Self {
        Self::with_top(n, theory, choice, top(n, theory, &|j| MultiPoly::var(y(j))))
    }

    /// Cache whose top polynomial uses `y_j ↦ ys(j)`.
    pub fn with_top(n: usize, theory: Theory, choice: AscentChoice, top: MultiPoly) -> Self {
        let mut memo = HashMap::new();
        memo.insert(Permutation::longest(n).bytes().to_vec(), top);
        SchubertCache {
            n,
            theory,
            choice,
            memo,
        }
    }

    pub fn get(&mut self, w: &Permutation) -> Result<MultiPoly> {
        assert_eq!(w.n(), self.n, "permutation size");
        // Climb to w₀ recording the ascents, then descend filling the memo.
        let mut path = Vec::new();
        let mut cur = w.clone();
        while !self.memo.contains_key(cur.bytes()) {
            let i = self.pick_ascent(&cur);
            path.push((cur.clone(), i));
            cur = cur.swap_positions(i, i + 1);
        }
        let mut poly = self.memo[cur.bytes()].clone();
        for (u, i) in path.into_iter().rev() {
            poly = divided_difference(&poly, i, self.theory == Theory::K)?;
            self.memo.insert(u.bytes().to_vec(), poly.clone());
        }
        Ok(poly)
    }

    fn pick_ascent(&self, w: &Permutation) -> usize {
        let ascents: Vec<usize> = (1..self.n).filter(|&i| w.at(i) < w.at(i + 1)).collect();
        match self.choice {
            AscentChoice::First => ascents[0],
            AscentChoice::Last => ascents[ascents.len() - 1],
            AscentChoice::Middle => ascents[ascents.len() / 2],
        }
    }
}

/// `Π_{i+j≤n}(x_i − y_j)`, or `Π_{i+j≤n}(x_i + y_j − x_i y_j)` in K-theory.
pub fn top(n: usize, theory: Theory, ys: &dyn Fn(usize) -> MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::one();
    for i in 1..n {
        for j in 1..=n - i {
            let (xi, yj) = (MultiPoly::var(x(i)), ys(j));
            let factor = match theory {
                Theory::Cohomology => &xi - &yj,
                Theory::K => &(&xi + &yj) - &(&xi * &yj),
            };
            out = &out * &factor;
        }
    }
    out
}

pub fn double_schubert(w: &Permutation) -> Result<MultiPoly> {
    SchubertCache::new(w.n(), Theory::Cohomology).get(w)
}

pub fn double_grothendieck(w: &Permutation) -> Result<MultiPoly> {
    SchubertCache::new(w.n(), Theory::K).get(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{enumerate, p};
    use crate::poly::Var;

    fn poly(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(double_schubert(&p("21")).unwrap(), poly("x1 - y1"));
        assert_eq!(double_schubert(&p("12")).unwrap(), MultiPoly::one());
        assert_eq!(
            double_grothendieck(&p("21")).unwrap(),
            poly("x1 + y1 - x1*y1")
        );
        assert_eq!(double_grothendieck(&p("123")).unwrap(), MultiPoly::one());
        assert_eq!(
            double_schubert(&p("132")).unwrap(),
            poly("x1 + x2 - y1 - y2")
        );
        assert_eq!(double_schubert(&p("213")).unwrap(), poly("x1 - y1"));
        assert_eq!(
            double_schubert(&p("321")).unwrap(),
            poly("x1 - y1") * poly("x1 - y2") * poly("x2 - y1")
        );
    }

    #[test]
    fn single_schubert_specialization() {
        // Setting y = 0 gives the single Schubert polynomials; spot values
        // from the divided-difference table for S_3.
        let zero_y = |f: MultiPoly| {
            f.substitute(|v| matches!(v, Var::Y(_)).then(MultiPoly::zero))
                .unwrap()
        };
        assert_eq!(zero_y(double_schubert(&p("231")).unwrap()), poly("x1*x2"));
        assert_eq!(zero_y(double_schubert(&p("312")).unwrap()), poly("x1^2"));
        assert_eq!(zero_y(double_schubert(&p("321")).unwrap()), poly("x1^2*x2"));
    }

    #[test]
    fn reduced_word_independence() {
        for n in 2..=5 {
            for theory in [Theory::Cohomology, Theory::K] {
                let mut caches = [
                    AscentChoice::First,
                    AscentChoice::Last,
                    AscentChoice::Middle,
                ]
                .map(|c| SchubertCache::with_choice(n, theory, c));
                for w in enumerate(n) {
                    let a = caches[0].get(&w).unwrap();
                    assert_eq!(a, caches[1].get(&w).unwrap(), "{w} {theory:?}");
                    assert_eq!(a, caches[2].get(&w).unwrap(), "{w} {theory:?}");
                }
            }
        }
    }

    #[test]
    fn grothendieck_lowest_terms_are_schubert() {
        // x ⊕ y = x + y − xy has lowest part x − (−y), and π_i lowers to ∂_i.
        for n in 2..=4 {
            let mut g = SchubertCache::new(n, Theory::K);
            let mut s = SchubertCache::new(n, Theory::Cohomology);
            for w in enumerate(n) {
                let low = g.get(&w).unwrap().lowest_degree_part();
                let neg_y = s
                    .get(&w)
                    .unwrap()
                    .substitute(|v| matches!(v, Var::Y(_)).then(|| -MultiPoly::var(v)))
                    .unwrap();
                assert_eq!(low, neg_y, "{w}");
            }
        }
    }
}
