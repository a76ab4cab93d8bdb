//! Rothe diagrams, essential sets, the A/B/W/X/Y/Z box conditions, and the
//! passage from an lci permutation to its associated defined-by-inclusions
//! permutation.
//!
//! Everything here uses matrix coordinates: `(p, q)` is row `p` from the
//! top and column `q` from the left.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{Permutation, RankTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub p: usize,
    pub q: usize,
}

impl Cell {
    pub const fn new(p: usize, q: usize) -> Self {
        Cell { p, q }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.p, self.q].serialize(s)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// A subset of the six box conditions.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Conditions(u8);

impl Conditions {
    pub const A: Conditions = Conditions(1);
    pub const B: Conditions = Conditions(2);
    pub const W: Conditions = Conditions(4);
    pub const X: Conditions = Conditions(8);
    pub const Y: Conditions = Conditions(16);
    pub const Z: Conditions = Conditions(32);
    const NAMES: [(&'static str, Conditions); 6] = [
        ("A", Self::A),
        ("B", Self::B),
        ("W", Self::W),
        ("X", Self::X),
        ("Y", Self::Y),
        ("Z", Self::Z),
    ];

    pub fn empty() -> Self {
        Conditions(0)
    }

    pub fn contains(self, other: Conditions) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Conditions) {
        self.0 |= other.0;
    }

    pub fn names(self) -> Vec<&'static str> {
        Self::NAMES
            .iter()
            .filter(|(_, c)| self.contains(*c))
            .map(|(n, _)| *n)
            .collect()
    }

    /// `(A or B) or ((W or X) and (Y or Z))`.
    pub fn is_admissible(self) -> bool {
        let any = |a: Conditions, b: Conditions| self.contains(a) || self.contains(b);
        any(Self::A, Self::B) || (any(Self::W, Self::X) && any(Self::Y, Self::Z))
    }
}

impl std::ops::BitOr for Conditions {
    type Output = Conditions;
    fn bitor(self, rhs: Conditions) -> Conditions {
        Conditions(self.0 | rhs.0)
    }
}

impl fmt::Debug for Conditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}

impl Serialize for Conditions {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.names().serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stratum {
    #[serde(rename = "E_rank0")]
    Rank0,
    #[serde(rename = "E_prime")]
    Prime,
    #[serde(rename = "E_double_prime")]
    DoublePrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EssentialBox {
    #[serde(flatten)]
    pub cell: CellPQ,
    pub rank: usize,
    pub conditions: Conditions,
    pub stratum: Stratum,
}

/// `Cell` with named JSON fields, used inside essential-box records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CellPQ {
    pub p: usize,
    pub q: usize,
}

impl EssentialBox {
    pub fn at(&self) -> Cell {
        Cell::new(self.cell.p, self.cell.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InclusionLevel {
    Dbi,
    AdbiOnly,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub index: usize,
    pub corner: Cell,
    pub rank: usize,
    pub boxes: Vec<Cell>,
    pub wpred: Option<usize>,
    pub spred: Option<usize>,
}

/// Order in which [`associated_dbi_with_order`] removes boxes of E″.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationOrder {
    Lexicographic,
    ReverseLexicographic,
}

/// Precomputed diagram data for one permutation.
#[derive(Debug, Clone)]
pub struct Diagram {
    w: Permutation,
    winv: Permutation,
    ranks: RankTable,
    stride: usize,
    member: Vec<bool>,
    essential: Vec<bool>,
}

impl Diagram {
    pub fn new(w: &Permutation) -> Self {
        let n = w.n();
        let stride = n + 2;
        let winv = w.inverse();
        let mut member = vec![false; stride * stride];
        for p in 1..=n {
            for q in 1..=n {
                member[p * stride + q] = w.at(q) < p && winv.at(p) > q;
            }
        }
        let mut essential = vec![false; stride * stride];
        for p in 1..=n {
            for q in 1..=n {
                let i = p * stride + q;
                essential[i] = member[i] && !member[i + 1] && !member[i - stride];
            }
        }
        Diagram {
            ranks: w.rank_table(),
            w: w.clone(),
            winv,
            stride,
            member,
            essential,
        }
    }

    pub fn permutation(&self) -> &Permutation {
        &self.w
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    /// Membership in D(w); false outside the grid.
    #[inline]
    pub fn contains(&self, p: usize, q: usize) -> bool {
        p <= self.n() + 1 && q <= self.n() + 1 && self.member[p * self.stride + q]
    }

    #[inline]
    pub fn is_essential(&self, p: usize, q: usize) -> bool {
        p <= self.n() + 1 && q <= self.n() + 1 && self.essential[p * self.stride + q]
    }

    #[inline]
    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.ranks.get(p, q)
    }

    /// D(w), sorted lexicographically.
    pub fn cells(&self) -> Vec<Cell> {
        let n = self.n();
        (1..=n)
            .flat_map(|p| (1..=n).map(move |q| Cell::new(p, q)))
            .filter(|c| self.contains(c.p, c.q))
            .collect()
    }

    pub fn essential_cells(&self) -> Vec<Cell> {
        let n = self.n();
        (1..=n)
            .flat_map(|p| (1..=n).map(move |q| Cell::new(p, q)))
            .filter(|c| self.is_essential(c.p, c.q))
            .collect()
    }

    pub fn essential_set(&self) -> Vec<EssentialBox> {
        self.essential_cells()
            .into_iter()
            .map(|c| {
                let conditions = self.conditions_unchecked(c.p, c.q);
                let rank = self.rank(c.p, c.q);
                let stratum = if conditions.contains(Conditions::A) {
                    Stratum::Rank0
                } else if conditions.contains(Conditions::B) {
                    Stratum::Prime
                } else {
                    Stratum::DoublePrime
                };
                EssentialBox {
                    cell: CellPQ { p: c.p, q: c.q },
                    rank,
                    conditions,
                    stratum,
                }
            })
            .collect()
    }

    /// Condition A: no 1's weakly SW, i.e. no `k ≤ q` with `w(k) ≥ p`.
    pub fn condition_a(&self, p: usize, q: usize) -> bool {
        (1..=q).all(|k| self.w.at(k) < p)
    }

    /// Condition B: no 1's strictly NE, i.e. no `k > q` with `w(k) < p`.
    pub fn condition_b(&self, p: usize, q: usize) -> bool {
        (q + 1..=self.n()).all(|k| self.w.at(k) >= p)
    }

    fn condition_w(&self, p: usize, q: usize) -> bool {
        if (1..p).any(|a| self.is_essential(a, q)) {
            return false;
        }
        if q < 2 || !self.contains(p, q - 1) {
            return true;
        }
        let r = self.rank(p, q);
        (1..p).any(|a| {
            self.is_essential(a, q - 1) && self.condition_b(a, q - 1) && self.rank(a, q - 1) == r
        })
    }

    fn condition_x(&self, p: usize, q: usize) -> bool {
        let above: Vec<usize> = (1..p).filter(|&a| self.is_essential(a, q)).collect();
        let [a] = above[..] else { return false };
        if !self.condition_b(a, q) || self.rank(a, q) != self.rank(p, q) + 1 {
            return false;
        }
        let mut left = q;
        while left > 1 && self.contains(a, left - 1) {
            left -= 1;
        }
        left >= 2 && self.contains(p, left - 1)
    }

    fn condition_y(&self, p: usize, q: usize) -> bool {
        let n = self.n();
        if (q + 1..=n).any(|b| self.is_essential(p, b)) {
            return false;
        }
        if !self.contains(p + 1, q) {
            return true;
        }
        let r = self.rank(p, q);
        (q + 1..=n).any(|b| {
            self.is_essential(p + 1, b) && self.condition_b(p + 1, b) && self.rank(p + 1, b) == r
        })
    }

    fn condition_z(&self, p: usize, q: usize) -> bool {
        let n = self.n();
        let right: Vec<usize> = (q + 1..=n).filter(|&b| self.is_essential(p, b)).collect();
        let [b] = right[..] else { return false };
        if !self.condition_b(p, b) || self.rank(p, b) != self.rank(p, q) + 1 {
            return false;
        }
        let mut bottom = p;
        while self.contains(bottom + 1, b) {
            bottom += 1;
        }
        self.contains(bottom + 1, q)
    }

    fn conditions_unchecked(&self, p: usize, q: usize) -> Conditions {
        let mut c = Conditions::empty();
        let checks: [(Conditions, fn(&Self, usize, usize) -> bool); 6] = [
            (Conditions::A, Self::condition_a),
            (Conditions::B, Self::condition_b),
            (Conditions::W, Self::condition_w),
            (Conditions::X, Self::condition_x),
            (Conditions::Y, Self::condition_y),
            (Conditions::Z, Self::condition_z),
        ];
        for (flag, check) in checks {
            if check(self, p, q) {
                c.insert(flag);
            }
        }
        c
    }

    pub fn box_conditions(&self, cell: Cell) -> Result<Conditions> {
        if !self.is_essential(cell.p, cell.q) {
            return Err(Error::NotEssential(cell.p, cell.q));
        }
        Ok(self.conditions_unchecked(cell.p, cell.q))
    }

    pub fn inclusion_level(&self) -> InclusionLevel {
        let ess = self.essential_cells();
        let dbi = ess
            .iter()
            .all(|c| c.q - self.rank(c.p, c.q) == (c.p - 1).min(c.q));
        if dbi {
            return InclusionLevel::Dbi;
        }
        if ess
            .iter()
            .all(|c| self.conditions_unchecked(c.p, c.q).is_admissible())
        {
            InclusionLevel::AdbiOnly
        } else {
            InclusionLevel::Neither
        }
    }

    pub fn region_partition(&self) -> Result<Vec<Region>> {
        if self.inclusion_level() == InclusionLevel::Neither {
            return Err(Error::Precondition(format!(
                "{} is not almost defined by inclusions",
                self.w
            )));
        }
        let mut corners: Vec<(usize, Cell)> = self
            .essential_set()
            .into_iter()
            .filter(|e| e.stratum == Stratum::Prime)
            .map(|e| (e.rank, e.at()))
            .collect();
        corners.sort();
        let mut regions: Vec<Region> = corners
            .iter()
            .enumerate()
            .map(|(i, &(rank, corner))| Region {
                index: i + 1,
                corner,
                rank,
                boxes: vec![],
                wpred: None,
                spred: None,
            })
            .collect();
        let mut owner = vec![0usize; self.stride * self.stride];
        for cell in self.cells() {
            let r = self.rank(cell.p, cell.q);
            if r == 0 {
                continue;
            }
            let Some(region) = regions
                .iter_mut()
                .find(|m| cell.p >= m.corner.p && cell.q <= m.corner.q)
            else {
                return Err(Error::Precondition(format!(
                    "diagram box {cell} of {} lies in no region",
                    self.w
                )));
            };
            if region.rank != r {
                return Err(Error::Precondition(format!(
                    "diagram box {cell} of {} has rank {r}, region {} has rank {}",
                    self.w, region.index, region.rank
                )));
            }
            region.boxes.push(cell);
            owner[cell.p * self.stride + cell.q] = region.index;
        }
        for region in regions.iter_mut() {
            let Cell { p, q } = region.corner;
            let west_edge = region
                .boxes
                .iter()
                .filter(|c| c.p == p)
                .map(|c| c.q)
                .min()
                .unwrap_or(q);
            let south_edge = region
                .boxes
                .iter()
                .filter(|c| c.q == q)
                .map(|c| c.p)
                .max()
                .unwrap_or(p);
            region.wpred = (1..west_edge)
                .rev()
                .find(|&b| self.contains(p, b))
                .and_then(|b| {
                    let m = owner[p * self.stride + b];
                    (m != 0).then_some(m)
                });
            region.spred = (south_edge + 1..=self.n())
                .find(|&a| self.contains(a, q))
                .and_then(|a| {
                    let m = owner[a * self.stride + q];
                    (m != 0).then_some(m)
                });
        }
        Ok(regions)
    }

    /// ASCII drawing in matrix orientation: `.` marks a 1, `[ ]` a diagram
    /// box, `[E]` an essential box; hook cells are blank.
    pub fn ascii(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for p in 1..=n {
            for q in 1..=n {
                out.push_str(if self.w.at(q) == p {
                    " . "
                } else if self.is_essential(p, q) {
                    "[E]"
                } else if self.contains(p, q) {
                    "[ ]"
                } else {
                    "   "
                });
            }
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        }
        out
    }
}

pub fn rothe_diagram(w: &Permutation) -> Vec<Cell> {
    Diagram::new(w).cells()
}

pub fn essential_set(w: &Permutation) -> Vec<EssentialBox> {
    Diagram::new(w).essential_set()
}

pub fn box_conditions(w: &Permutation, cell: Cell) -> Result<Conditions> {
    Diagram::new(w).box_conditions(cell)
}

pub fn inclusion_level(w: &Permutation) -> InclusionLevel {
    Diagram::new(w).inclusion_level()
}

pub fn region_partition(w: &Permutation) -> Result<Vec<Region>> {
    Diagram::new(w).region_partition()
}

pub fn associated_dbi(w: &Permutation) -> Result<Permutation> {
    associated_dbi_with_order(w, EliminationOrder::Lexicographic)
}

/// Removes the boxes of E″ one at a time, each by one length-raising
/// transposition chosen from the box's type (WY, WZ, XY or XZ).
pub fn associated_dbi_with_order(w: &Permutation, order: EliminationOrder) -> Result<Permutation> {
    let mut current = w.clone();
    loop {
        let d = Diagram::new(&current);
        match d.inclusion_level() {
            InclusionLevel::Dbi => return Ok(current),
            InclusionLevel::Neither => {
                return Err(Error::Precondition(format!(
                    "{w} is not almost defined by inclusions"
                )))
            }
            InclusionLevel::AdbiOnly => {}
        }
        let doubles: Vec<EssentialBox> = d
            .essential_set()
            .into_iter()
            .filter(|e| e.stratum == Stratum::DoublePrime)
            .collect();
        let target = match order {
            EliminationOrder::Lexicographic => doubles.first(),
            EliminationOrder::ReverseLexicographic => doubles.last(),
        };
        let Some(e) = target else {
            // Not DBI by the rank test, yet every box satisfies A or B.
            return Err(Error::Precondition(format!(
                "{current} has no E'' box but is not DBI"
            )));
        };
        current = eliminate(&d, e)?;
    }
}

fn eliminate(d: &Diagram, e: &EssentialBox) -> Result<Permutation> {
    let (p, q) = (e.cell.p, e.cell.q);
    let w = d.permutation();
    let c = e.conditions;
    let next = if c.contains(Conditions::W) && c.contains(Conditions::Y) {
        w.swap_positions(q, d.winv.at(p))
    } else if c.contains(Conditions::W) && c.contains(Conditions::Z) {
        w.swap_positions(q, q + 1)
    } else if c.contains(Conditions::X) && c.contains(Conditions::Y) {
        w.swap_values(p - 1, p)
    } else if c.contains(Conditions::X) && c.contains(Conditions::Z) {
        // q_X is the left end of the row segment of the box above (p,q).
        let a = (1..p)
            .find(|&a| d.is_essential(a, q))
            .expect("condition X names a box above");
        let mut left = q;
        while left > 1 && d.contains(a, left - 1) {
            left -= 1;
        }
        w.swap_positions(left - 1, q + 1)
    } else {
        return Err(Error::Precondition(format!(
            "box ({p},{q}) of {w} has no admissible type"
        )));
    };
    debug_assert_eq!(next.coxeter_length(), w.coxeter_length() + 1);
    Ok(next)
}
