//! Presentation of the cohomology ring of an lci Schubert variety as a
//! quotient of the flag-variety cohomology ring.

use serde::Serialize;

use crate::diagram::{associated_dbi, inclusion_level, Diagram, InclusionLevel, Stratum};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::{x, MultiPoly};
use crate::symfunc::{schur_rect, symmetric, SymKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PresentationOrigin {
    /// `e_k(x_{q+1}..x_n)` from a rank-0 essential box of the dbi permutation.
    Rank0 { p: usize, q: usize, k: usize },
    /// `e_k(x_1..x_q)` from a box of E′ of the dbi permutation.
    Prime { p: usize, q: usize, k: usize },
    /// A rectangular Schur polynomial from a box of E″(w).
    DoublePrime { p: usize, q: usize, rank: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationGenerator {
    pub poly: MultiPoly,
    pub origin: PresentationOrigin,
}

pub fn cohomology_presentation(w: &Permutation) -> Result<Vec<PresentationGenerator>> {
    if inclusion_level(w) == InclusionLevel::Neither {
        return Err(Error::NotLci(w.to_string()));
    }
    let n = w.n();
    let v = associated_dbi(w)?;
    let mut out = Vec::new();
    for e in Diagram::new(&v).essential_set() {
        let (p, q) = (e.cell.p, e.cell.q);
        match e.stratum {
            Stratum::Rank0 => {
                let vars: Vec<_> = (q + 1..=n).map(x).collect();
                for k in p - q..=n - q {
                    out.push(PresentationGenerator {
                        poly: symmetric(SymKind::E, k, &vars),
                        origin: PresentationOrigin::Rank0 { p, q, k },
                    });
                }
            }
            Stratum::Prime => {
                let vars: Vec<_> = (1..=q).map(x).collect();
                for k in q + 2 - p..=(n - q).min(q) {
                    out.push(PresentationGenerator {
                        poly: symmetric(SymKind::E, k, &vars),
                        origin: PresentationOrigin::Prime { p, q, k },
                    });
                }
            }
            Stratum::DoublePrime => unreachable!("{v} is defined by inclusions"),
        }
    }
    for e in Diagram::new(w).essential_set() {
        if e.stratum != Stratum::DoublePrime {
            continue;
        }
        let (p, q, r) = (e.cell.p, e.cell.q, e.rank);
        out.push(PresentationGenerator {
            poly: schur_rect(p + r - q, r + 1, q),
            origin: PresentationOrigin::DoublePrime { p, q, rank: r },
        });
    }
    Ok(out)
}
