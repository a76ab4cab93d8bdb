//! Local cohomology and K-theory classes of lci Schubert varieties at the
//! identity, as explicit products over the minimal generators.
//!
//! Both sides of the comparison use one frozen convention:
//! `x_i ↦ t_i, y_j ↦ t_{n+1−j}` in cohomology and
//! `x_i ↦ 1 − t_i, y_j ↦ 1 − 1/t_{n+1−j}` in K-theory, so that for
//! `w = id` both equal `Π_{q<p}(t_q − t_p)` (resp. `Π_{q<p}(1 − t_q/t_p)`)
//! with no extra sign.

use serde::Serialize;

use crate::diagram::{associated_dbi, inclusion_level, Diagram, InclusionLevel, Stratum};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::{t, Monomial, MultiPoly, Var};
use crate::schubert::{top, AscentChoice, SchubertCache, Theory};

/// `numerator / denominator`; the denominator is a monomial in `t`.
#[derive(Debug, Clone, Serialize)]
pub struct LocalClass {
    pub theory: TheoryName,
    pub numerator: MultiPoly,
    pub denominator: MultiPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoryName {
    Cohomology,
    K,
}

impl From<Theory> for TheoryName {
    fn from(t: Theory) -> Self {
        match t {
            Theory::Cohomology => TheoryName::Cohomology,
            Theory::K => TheoryName::K,
        }
    }
}

impl LocalClass {
    fn from_laurent(theory: Theory, f: MultiPoly) -> Self {
        let den = f.denominator();
        LocalClass {
            theory: theory.into(),
            numerator: f.mul_monomial(&den),
            denominator: MultiPoly::monomial(den),
        }
    }

    /// Cross-multiplied equality.
    pub fn same_class(&self, other: &LocalClass) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }

    /// Lowest-degree part after `t_i ↦ 1 − t_i`. The denominator becomes a
    /// power series with constant term 1, so only the numerator matters.
    pub fn degenerate(&self) -> Result<MultiPoly> {
        Ok(self
            .numerator
            .substitute(|v| match v {
                Var::T(_) => Some(&MultiPoly::one() - &MultiPoly::var(v)),
                _ => None,
            })?
            .lowest_degree_part())
    }
}

fn require_lci(w: &Permutation) -> Result<()> {
    if inclusion_level(w) == InclusionLevel::Neither {
        return Err(Error::NotLci(w.to_string()));
    }
    Ok(())
}

fn tv(i: usize) -> MultiPoly {
    MultiPoly::var(t(i))
}

/// `t_a / t_b` as a Laurent monomial.
fn ratio(num: &[usize], den: &[usize]) -> MultiPoly {
    let pairs = num
        .iter()
        .map(|&i| (t(i), 1))
        .chain(den.iter().map(|&i| (t(i), -1)));
    MultiPoly::monomial(Monomial::from_pairs(pairs))
}

/// The product over `D(v)` for `v = associated_dbi(w)` and over `E″(w)`.
pub fn local_class_product(w: &Permutation, theory: Theory) -> Result<LocalClass> {
    require_lci(w)?;
    let v = associated_dbi(w)?;
    let dv = Diagram::new(&v);
    let one = MultiPoly::one();
    let mut out = MultiPoly::one();
    for cell in dv.cells() {
        let r = dv.rank(cell.p, cell.q);
        let (a, b) = (cell.q - r, cell.p + r);
        let factor = match theory {
            Theory::Cohomology => &tv(a) - &tv(b),
            Theory::K => &one - &ratio(&[a], &[b]),
        };
        out = &out * &factor;
    }
    for e in Diagram::new(w).essential_set() {
        if e.stratum != Stratum::DoublePrime {
            continue;
        }
        let (p, q, r) = (e.cell.p, e.cell.q, e.rank);
        let factor = match theory {
            Theory::Cohomology => (0..=r).map(|i| &tv(q - i) - &tv(p + i)).sum(),
            Theory::K => {
                let num: Vec<usize> = (0..=r).map(|i| q - i).collect();
                let den: Vec<usize> = (0..=r).map(|i| p + i).collect();
                &one - &ratio(&num, &den)
            }
        };
        out = &out * &factor;
    }
    Ok(LocalClass::from_laurent(theory, out))
}

/// `𝔖_{w₀w}` or `𝔊_{w₀w}` under the frozen specialization, memoized per `n`.
pub struct FolkloreOracle {
    n: usize,
    theory: Theory,
    cache: SchubertCache,
}

impl FolkloreOracle {
    pub fn new(n: usize, theory: Theory) -> Self {
        // y is specialized in the top polynomial; divided differences only
        // touch x, so this commutes with the descent.
        let ys = |j: usize| match theory {
            Theory::Cohomology => tv(n + 1 - j),
            Theory::K => &MultiPoly::one() - &ratio(&[], &[n + 1 - j]),
        };
        let top = top(n, theory, &ys);
        FolkloreOracle {
            n,
            theory,
            cache: SchubertCache::with_top(n, theory, AscentChoice::First, top),
        }
    }

    pub fn class(&mut self, w: &Permutation) -> Result<LocalClass> {
        if w.n() != self.n {
            return Err(Error::SizeMismatch(w.n(), self.n));
        }
        let f = self.cache.get(&w.complement())?;
        let theory = self.theory;
        let g = f.substitute(|v| match v {
            Var::X(i) => Some(match theory {
                Theory::Cohomology => tv(i as usize),
                Theory::K => &MultiPoly::one() - &tv(i as usize),
            }),
            _ => None,
        })?;
        Ok(LocalClass::from_laurent(theory, g))
    }
}

pub fn folklore_class(w: &Permutation, theory: Theory) -> Result<LocalClass> {
    FolkloreOracle::new(w.n(), theory).class(w)
}

/// `Π_{q<p}(t_q − t_p)`, the class at the identity of `X_id`.
pub fn identity_class(n: usize) -> MultiPoly {
    let mut out = MultiPoly::one();
    for p in 1..=n {
        for q in 1..p {
            out = &out * &(&tv(q) - &tv(p));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_flags;
    use crate::perm::{bruhat_leq, enumerate, p};

    fn poly(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn identity_anchor() {
        for n in 1..=5 {
            let id = Permutation::identity(n);
            let c = local_class_product(&id, Theory::Cohomology).unwrap();
            assert_eq!(c.numerator, identity_class(n));
            assert_eq!(c.denominator, MultiPoly::one());
            assert_eq!(
                folklore_class(&id, Theory::Cohomology).unwrap().numerator,
                identity_class(n)
            );
        }
        let k = local_class_product(&p("12"), Theory::K).unwrap();
        assert_eq!(k.numerator, poly("t2 - t1"));
        assert_eq!(k.denominator, poly("t2"));
        assert!(k.same_class(&folklore_class(&p("12"), Theory::K).unwrap()));
    }

    #[test]
    fn product_examples() {
        let w0 = Permutation::longest(4);
        assert_eq!(
            local_class_product(&w0, Theory::Cohomology)
                .unwrap()
                .numerator,
            MultiPoly::one()
        );
        assert_eq!(
            local_class_product(&w0, Theory::K).unwrap().numerator,
            MultiPoly::one()
        );
        let w = local_class_product(&p("819372564"), Theory::Cohomology)
            .unwrap()
            .numerator;
        let v = local_class_product(&p("819732654"), Theory::Cohomology)
            .unwrap()
            .numerator;
        assert_eq!(w, v * poly("t2 + t3 - t5 - t6") * poly("t4 + t5 - t8 - t9"));
        let wk = local_class_product(&p("819372564"), Theory::K).unwrap();
        let vk = local_class_product(&p("819732654"), Theory::K).unwrap();
        let extra = LocalClass::from_laurent(
            Theory::K,
            (MultiPoly::one() - ratio(&[2, 3, 4], &[4, 5, 6]))
                * (MultiPoly::one() - ratio(&[4, 5, 6, 7], &[6, 7, 8, 9])),
        );
        let prod = LocalClass {
            theory: TheoryName::K,
            numerator: &vk.numerator * &extra.numerator,
            denominator: &vk.denominator * &extra.denominator,
        };
        assert!(wk.same_class(&prod));
        assert!(matches!(
            local_class_product(&p("53241"), Theory::K),
            Err(Error::NotLci(_))
        ));
    }

    #[test]
    fn folklore_identity_holds() {
        for n in 1..=5 {
            let mut coh = FolkloreOracle::new(n, Theory::Cohomology);
            let mut k = FolkloreOracle::new(n, Theory::K);
            for w in enumerate(n) {
                if !classify_flags(&w).lci {
                    continue;
                }
                let lhs = local_class_product(&w, Theory::Cohomology).unwrap();
                assert!(lhs.same_class(&coh.class(&w).unwrap()), "cohomology {w}");
                if n <= 4 {
                    let lhs = local_class_product(&w, Theory::K).unwrap();
                    assert!(lhs.same_class(&k.class(&w).unwrap()), "K {w}");
                }
            }
        }
    }

    #[test]
    fn k_degenerates_to_cohomology() {
        for w in enumerate(5) {
            if !classify_flags(&w).lci {
                continue;
            }
            let k = local_class_product(&w, Theory::K)
                .unwrap()
                .degenerate()
                .unwrap();
            let c = local_class_product(&w, Theory::Cohomology)
                .unwrap()
                .numerator;
            assert_eq!(k, c, "{w}");
        }
    }

    #[test]
    fn smooth_classes_are_root_products() {
        // For smooth v the class is Π over transpositions s_{ji} ≰ v of (t_j − t_i).
        for n in 2..=5 {
            for v in enumerate(n) {
                if !classify_flags(&v).smooth {
                    continue;
                }
                let mut expected = MultiPoly::one();
                for i in 1..=n {
                    for j in 1..i {
                        let s = Permutation::identity(n).swap_positions(j, i);
                        if !bruhat_leq(&s, &v).unwrap() {
                            expected = &expected * &(&tv(j) - &tv(i));
                        }
                    }
                }
                assert_eq!(
                    local_class_product(&v, Theory::Cohomology)
                        .unwrap()
                        .numerator,
                    expected,
                    "{v}"
                );
            }
        }
    }
}
