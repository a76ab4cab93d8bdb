//! Pattern catalogs, the singularity classifier, and non-lci witnesses.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pattern::{
    contains_classical, contains_marked_mesh, interval_embeds, Constraint, Embedding,
    IntervalPattern, MarkedMeshPattern,
};
use crate::perm::Permutation;

fn perm(s: &str) -> Permutation {
    s.parse().expect("catalog permutation")
}

fn perms(list: &[&str]) -> Vec<Permutation> {
    list.iter().map(|s| perm(s)).collect()
}

pub const SMOOTH: [&str; 2] = ["3412", "4231"];
pub const DBI: [&str; 4] = ["4231", "35142", "42513", "351624"];
pub const LCI: [&str; 6] = ["53241", "52341", "52431", "35142", "42513", "351624"];
pub const MATRIX_SCHUBERT_LCI: [&str; 6] = ["1342", "1432", "1423", "31524", "24153", "426153"];
/// The dbi and lci sets as printed in the introduction, with 426153 in
/// place of 351624. Kept for comparison only.
pub const DBI_ALT: [&str; 4] = ["4231", "35142", "42513", "426153"];
pub const LCI_ALT: [&str; 6] = ["53241", "52341", "52431", "35142", "42513", "426153"];
pub const SLAB: [&str; 3] = ["213", "123", "132"];

#[derive(Debug, Clone)]
pub struct PatternCatalog {
    pub name: &'static str,
    pub classical: Vec<Permutation>,
    pub mesh: Vec<(&'static str, MarkedMeshPattern)>,
}

impl PatternCatalog {
    pub fn classical(name: &'static str, list: &[&str]) -> Self {
        PatternCatalog {
            name,
            classical: perms(list),
            mesh: vec![],
        }
    }

    /// First contained pattern, classical patterns first.
    pub fn find(&self, w: &Permutation) -> Option<Certificate> {
        for p in &self.classical {
            if let Some(e) = contains_classical(w, p) {
                return Some(Certificate {
                    pattern: p.label(),
                    mesh: None,
                    positions: e.indices,
                });
            }
        }
        for (name, m) in &self.mesh {
            if let Some(e) = contains_marked_mesh(w, m) {
                return Some(Certificate {
                    pattern: m.perm.label(),
                    mesh: Some(name),
                    positions: e.indices,
                });
            }
        }
        None
    }

    pub fn avoids(&self, w: &Permutation) -> bool {
        self.find(w).is_none()
    }
}

fn column(i: usize, m: usize) -> Vec<(usize, usize)> {
    (0..=m).map(|j| (i, j)).collect()
}

fn row(j: usize, m: usize) -> Vec<(usize, usize)> {
    (0..=m).map(|i| (i, j)).collect()
}

/// 3412 with the whole middle column shaded.
pub fn factorial_mesh() -> MarkedMeshPattern {
    MarkedMeshPattern::new(perm("3412"), vec![Constraint::shaded(column(2, 4))])
        .expect("valid mesh")
}

/// `g1`: 35142 with column 2 and row 3 shaded.
pub fn gorenstein_g1() -> MarkedMeshPattern {
    let mut cells = column(2, 5);
    cells.extend(row(3, 5));
    MarkedMeshPattern::new(perm("35142"), vec![Constraint::shaded(cells)]).expect("valid mesh")
}

/// `g2`: 42513 with column 3 and row 2 shaded.
pub fn gorenstein_g2() -> MarkedMeshPattern {
    let mut cells = column(3, 5);
    cells.extend(row(2, 5));
    MarkedMeshPattern::new(perm("42513"), vec![Constraint::shaded(cells)]).expect("valid mesh")
}

/// 4231 with at least one point in the strip between its middle values.
/// Contained exactly when one of 53241, 52341, 52431 is.
pub fn lci_strip_mesh() -> MarkedMeshPattern {
    MarkedMeshPattern::new(
        perm("4231"),
        vec![Constraint::at_least(vec![(1, 2), (2, 2), (3, 2)], 1)],
    )
    .expect("valid mesh")
}

/// 12 with a point somewhere in the row between its two values.
/// Avoided exactly by the slab permutations.
pub fn slab_mesh() -> MarkedMeshPattern {
    MarkedMeshPattern::new(perm("12"), vec![Constraint::at_least(row(1, 2), 1)])
        .expect("valid mesh")
}

pub fn smooth_catalog() -> PatternCatalog {
    PatternCatalog::classical("smooth", &SMOOTH)
}

pub fn factorial_catalog() -> PatternCatalog {
    PatternCatalog {
        name: "factorial",
        classical: perms(&["4231"]),
        mesh: vec![("f", factorial_mesh())],
    }
}

pub fn dbi_catalog() -> PatternCatalog {
    PatternCatalog::classical("dbi", &DBI)
}

pub fn lci_catalog() -> PatternCatalog {
    PatternCatalog::classical("lci", &LCI)
}

pub fn matrix_schubert_catalog() -> PatternCatalog {
    PatternCatalog::classical("matrix_schubert_lci", &MATRIX_SCHUBERT_LCI)
}

/// Catalog data only; see the crate README for why no Gorenstein flag is reported.
pub fn gorenstein_catalog() -> PatternCatalog {
    PatternCatalog {
        name: "gorenstein",
        classical: vec![],
        mesh: vec![("g1", gorenstein_g1()), ("g2", gorenstein_g2())],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
}

pub fn family_interval(family: Family, a: usize, b: usize) -> Result<IntervalPattern> {
    let (u, v): (Vec<usize>, Vec<usize>) = match family {
        Family::A => {
            if a == 0 || b == 0 || (a == 1 && b == 1) {
                return Err(Error::Family(format!(
                    "A({a},{b}) needs a,b > 0 and a > 1 or b > 1"
                )));
            }
            let mut u: Vec<usize> = (1..=a + 1).rev().collect();
            u.extend((a + 2..=a + b + 2).rev());
            let mut v = vec![a + b + 2];
            v.extend((2..=a + 1).rev());
            v.extend((a + 2..=a + b + 1).rev());
            v.push(1);
            (u, v)
        }
        Family::B => {
            if a + b == 0 {
                return Err(Error::Family("B(0,0) is not a family member".into()));
            }
            let mut u: Vec<usize> = (1..=a + 1).rev().collect();
            u.extend([a + 3, a + 2]);
            u.extend((a + 4..=a + b + 4).rev());
            let mut v = vec![a + 3];
            v.extend((2..=a + 1).rev());
            v.extend([a + b + 4, 1]);
            v.extend((a + 4..=a + b + 3).rev());
            v.push(a + 2);
            (u, v)
        }
    };
    IntervalPattern::new(Permutation::new(u)?, Permutation::new(v)?)
}

pub const EXCEPTIONAL_NAMES: [&str; 11] = [
    "C", "D", "E", "Ei", "F", "Fi", "Frc", "Firc", "G", "Grc", "H",
];

const EXCEPTIONALS: [(&str, &str, &str); 11] = [
    ("C", "21354", "52341"),
    ("D", "132546", "351624"),
    ("E", "421653", "642531"),
    ("Ei", "326154", "635241"),
    ("F", "215436", "526314"),
    ("Fi", "215436", "524613"),
    ("Frc", "143265", "364152"),
    ("Firc", "143265", "461352"),
    ("G", "215436", "526413"),
    ("Grc", "143265", "463152"),
    ("H", "2154376", "5274163"),
];

pub fn exceptional_intervals() -> Vec<(&'static str, IntervalPattern)> {
    EXCEPTIONALS
        .iter()
        .map(|&(name, u, v)| {
            (
                name,
                IntervalPattern::new(perm(u), perm(v)).expect("catalog interval"),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSource {
    FamilyA(usize, usize),
    FamilyB(usize, usize),
    Exceptional(&'static str),
}

impl fmt::Display for WitnessSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSource::FamilyA(a, b) => write!(f, "FamilyA({a},{b})"),
            WitnessSource::FamilyB(a, b) => write!(f, "FamilyB({a},{b})"),
            WitnessSource::Exceptional(name) => write!(f, "Exceptional({name})"),
        }
    }
}

impl Serialize for WitnessSource {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Every catalog interval that fits in size `n`, in witness search order.
pub fn witness_candidates(n: usize) -> Vec<(WitnessSource, IntervalPattern)> {
    let mut out: Vec<(WitnessSource, IntervalPattern)> = exceptional_intervals()
        .into_iter()
        .filter(|(_, ip)| ip.v.n() <= n)
        .map(|(name, ip)| (WitnessSource::Exceptional(name), ip))
        .collect();
    for (family, extra) in [(Family::A, 2), (Family::B, 4)] {
        for s in 1..=n.saturating_sub(extra) {
            for a in 0..=s {
                if let Ok(ip) = family_interval(family, a, s - a) {
                    let source = match family {
                        Family::A => WitnessSource::FamilyA(a, s - a),
                        Family::B => WitnessSource::FamilyB(a, s - a),
                    };
                    out.push((source, ip));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonLciWitness {
    pub source: WitnessSource,
    pub interval: IntervalPattern,
    pub embedding: Embedding,
}

impl Serialize for NonLciWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("source", &self.source)?;
        map.serialize_entry("u", &self.interval.u)?;
        map.serialize_entry("v", &self.interval.v)?;
        map.serialize_entry("positions", &self.embedding.indices)?;
        map.end()
    }
}

/// First catalog interval embedding in `w`, restricted to `allowed` sources.
pub fn witness_among(
    w: &Permutation,
    allowed: impl Fn(&WitnessSource) -> bool,
) -> Option<NonLciWitness> {
    witness_candidates(w.n())
        .into_iter()
        .filter(|(s, _)| allowed(s))
        .find_map(|(source, interval)| {
            interval_embeds(w, &interval).map(|embedding| NonLciWitness {
                source,
                interval,
                embedding,
            })
        })
}

pub fn witness_nonlci(w: &Permutation) -> Option<NonLciWitness> {
    witness_among(w, |_| true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub pattern: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<&'static str>,
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorial: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dbi: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lci: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_schubert_lci: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub perm: Permutation,
    pub smooth: bool,
    pub factorial: bool,
    pub dbi: bool,
    pub lci: bool,
    pub matrix_schubert_lci: bool,
    pub certificates: Certificates,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonlci_witness: Option<NonLciWitness>,
}

/// Pattern-based classification only; no witness search.
pub fn classify_flags(w: &Permutation) -> SingularityReport {
    let certificates = Certificates {
        smooth: smooth_catalog().find(w),
        factorial: factorial_catalog().find(w),
        dbi: dbi_catalog().find(w),
        lci: lci_catalog().find(w),
        matrix_schubert_lci: matrix_schubert_catalog().find(w),
    };
    SingularityReport {
        perm: w.clone(),
        smooth: certificates.smooth.is_none(),
        factorial: certificates.factorial.is_none(),
        dbi: certificates.dbi.is_none(),
        lci: certificates.lci.is_none(),
        matrix_schubert_lci: certificates.matrix_schubert_lci.is_none(),
        certificates,
        nonlci_witness: None,
    }
}

pub fn classify(w: &Permutation) -> SingularityReport {
    let mut report = classify_flags(w);
    if !report.lci {
        report.nonlci_witness = witness_nonlci(w);
    }
    report
}

/// `(w̃, v_n)` in S_2n, with `N_{v_n, w̃}` the matrix Schubert variety of `w`.
pub fn matrix_schubert_tilde(w: &Permutation) -> (Permutation, Permutation) {
    let n = w.n();
    let w0w = w.complement();
    let tilde = (1..=2 * n)
        .map(|i| if i <= n { n + w0w.at(i) } else { 2 * n + 1 - i })
        .collect();
    let vn = (1..=2 * n)
        .map(|i| {
            if i <= n {
                n + 1 - i
            } else {
                n + (2 * n + 1 - i)
            }
        })
        .collect();
    (
        Permutation::new(tilde).expect("bijection"),
        Permutation::new(vn).expect("bijection"),
    )
}

pub fn is_slab(w: &Permutation) -> bool {
    SLAB.iter()
        .all(|p| contains_classical(w, &perm(p)).is_none())
}
