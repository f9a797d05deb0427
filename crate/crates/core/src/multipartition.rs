//! Partitions, multipartitions, boxes and shifted contents.
//!
//! Rows and columns are 1-based as in the usual Young diagram picture.
//! Component indices are 0-based internally; the i-th component of the
//! mathematical convention is `comp = i - 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};

/// The pair `(e, (s_1, ..., s_l))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multicharge {
    e: i64,
    s: Vec<i64>,
}

impl Multicharge {
    pub fn new(e: i64, s: Vec<i64>) -> Result<Self> {
        if e < 2 {
            return Err(FockError::InvalidMulticharge(format!("e must be at least 2, got {e}")));
        }
        if s.is_empty() {
            return Err(FockError::InvalidMulticharge("level must be at least 1".into()));
        }
        Ok(Multicharge { e, s })
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn charges(&self) -> &[i64] {
        &self.s
    }

    pub fn level(&self) -> usize {
        self.s.len()
    }

    /// Normalizes an integer to a residue in `0..e`.
    pub fn residue(&self, x: i64) -> i64 {
        x.rem_euclid(self.e)
    }

    /// `s† = (-s_l, ..., -s_1)`.
    pub fn dagger(&self) -> Multicharge {
        Multicharge {
            e: self.e,
            s: self.s.iter().rev().map(|x| -x).collect(),
        }
    }
}

/// A cell of a (possibly virtual) Young diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: i64,
    pub col: i64,
    pub comp: usize,
}

impl Cell {
    pub fn new(row: i64, col: i64, comp: usize) -> Self {
        Cell { row, col, comp }
    }

    /// Shifted content `col - row + s_comp`.
    pub fn content(&self, ctx: &Multicharge) -> i64 {
        self.col - self.row + ctx.s[self.comp]
    }

    pub fn residue(&self, ctx: &Multicharge) -> i64 {
        ctx.residue(self.content(ctx))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.row, self.col, self.comp + 1)
    }
}

/// `b ⪯ b'`: same residue class and `(cont, comp)` weakly increases.
pub fn box_leq(b: &Cell, b2: &Cell, ctx: &Multicharge) -> bool {
    let (c1, c2) = (b.content(ctx), b2.content(ctx));
    if (c2 - c1).rem_euclid(ctx.e) != 0 {
        return false;
    }
    c2 > c1 || (c1 == c2 && b.comp <= b2.comp)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = FockError;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(FockError::InvalidPartition { parts });
        }
        Ok(Partition { parts })
    }

    /// Drops zero parts and sorts; used for componentwise sums and the like.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `r` (1-based); zero beyond the last row.
    pub fn row(&self, r: usize) -> u32 {
        if r == 0 {
            return 0;
        }
        self.parts.get(r - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, row: i64, col: i64) -> bool {
        row >= 1 && col >= 1 && (row as usize) <= self.parts.len() && col <= self.parts[row as usize - 1] as i64
    }

    pub fn transpose(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|c| self.parts.iter().take_while(|&&p| p >= c).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Componentwise sum `(λ_1 + μ_1, λ_2 + μ_2, ...)`.
    pub fn add(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        let parts = (1..=n).map(|r| self.row(r) + other.row(r)).collect();
        Partition { parts }
    }

    /// Cells `(row, col)` of the diagram, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (1..=p as i64).map(move |c| (r as i64 + 1, c)))
    }

    /// Addable cells, top row first.
    pub fn addable(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for r in 1..=self.len() + 1 {
            let here = self.row(r);
            if r == 1 || self.row(r - 1) > here {
                out.push((r as i64, here as i64 + 1));
            }
        }
        out
    }

    /// Removable cells, top row first.
    pub fn removable(&self) -> Vec<(i64, i64)> {
        (1..=self.len())
            .filter(|&r| self.row(r) > self.row(r + 1))
            .map(|r| (r as i64, self.row(r) as i64))
            .collect()
    }

    pub(crate) fn with_cell_added(&self, row: i64, col: i64) -> Option<Partition> {
        let r = row as usize;
        if row < 1 || col != self.row(r) as i64 + 1 || (r > 1 && self.row(r - 1) < col as u32) {
            return None;
        }
        let mut parts = self.parts.clone();
        if r == parts.len() + 1 {
            parts.push(1);
        } else {
            parts[r - 1] += 1;
        }
        Some(Partition { parts })
    }

    pub(crate) fn with_cell_removed(&self, row: i64, col: i64) -> Option<Partition> {
        let r = row as usize;
        if row < 1 || r > self.len() || col != self.row(r) as i64 || self.row(r + 1) >= col as u32 {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[r - 1] -= 1;
        if parts[r - 1] == 0 {
            parts.pop();
        }
        Some(Partition { parts })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("."))
    }
}

impl FromStr for Partition {
    type Err = FockError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(['.', ','])
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| FockError::Parse(format!("bad part '{p}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// An ℓ-tuple of partitions. Carries no multicharge; operations take one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multipartition {
    comps: Vec<Partition>,
}

impl Multipartition {
    pub fn new(comps: Vec<Partition>) -> Self {
        Multipartition { comps }
    }

    pub fn empty(level: usize) -> Self {
        Multipartition {
            comps: vec![Partition::empty(); level],
        }
    }

    pub fn from_parts(parts: Vec<Vec<u32>>) -> Result<Self> {
        let comps = parts.into_iter().map(Partition::new).collect::<Result<Vec<_>>>()?;
        Ok(Multipartition { comps })
    }

    pub fn level(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Partition] {
        &self.comps
    }

    pub fn component(&self, k: usize) -> &Partition {
        &self.comps[k]
    }

    pub fn size(&self) -> usize {
        self.comps.iter().map(Partition::size).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.iter().all(Partition::is_empty)
    }

    pub fn check_level(&self, ctx: &Multicharge) -> Result<()> {
        if self.level() != ctx.level() {
            return Err(FockError::LevelMismatch {
                expected: ctx.level(),
                got: self.level(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.comps.get(cell.comp).is_some_and(|p| p.contains(cell.row, cell.col))
    }

    /// All cells, one per box; `|boxes| = |λ|`.
    pub fn boxes(&self) -> Vec<Cell> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.cells().map(move |(r, c)| Cell::new(r, c, k)))
            .collect()
    }

    pub fn addable(&self) -> Vec<Cell> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.addable().into_iter().map(move |(r, c)| Cell::new(r, c, k)))
            .collect()
    }

    pub fn removable(&self) -> Vec<Cell> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.removable().into_iter().map(move |(r, c)| Cell::new(r, c, k)))
            .collect()
    }

    pub fn add_cell(&self, cell: &Cell) -> Option<Multipartition> {
        let p = self.comps.get(cell.comp)?.with_cell_added(cell.row, cell.col)?;
        let mut comps = self.comps.clone();
        comps[cell.comp] = p;
        Some(Multipartition { comps })
    }

    pub fn remove_cell(&self, cell: &Cell) -> Option<Multipartition> {
        let p = self.comps.get(cell.comp)?.with_cell_removed(cell.row, cell.col)?;
        let mut comps = self.comps.clone();
        comps[cell.comp] = p;
        Some(Multipartition { comps })
    }

    /// `λ† = (λ^(ℓ)t, ..., λ^(1)t)` together with `s†`.
    pub fn dagger(&self, ctx: &Multicharge) -> (Multipartition, Multicharge) {
        (self.dagger_shape(), ctx.dagger())
    }

    pub fn dagger_shape(&self) -> Multipartition {
        Multipartition {
            comps: self.comps.iter().rev().map(Partition::transpose).collect(),
        }
    }

    /// Number of boxes of each residue `0..e`.
    pub fn residue_counts(&self, ctx: &Multicharge) -> Vec<usize> {
        let mut counts = vec![0; ctx.e as usize];
        for b in self.boxes() {
            counts[b.residue(ctx) as usize] += 1;
        }
        counts
    }

    pub fn to_json(&self, ctx: &Multicharge) -> MultipartitionJson {
        MultipartitionJson {
            e: ctx.e,
            s: ctx.s.clone(),
            components: self.comps.iter().map(|p| p.parts.clone()).collect(),
        }
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.comps.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("|"))
    }
}

impl FromStr for Multipartition {
    type Err = FockError;
    fn from_str(s: &str) -> Result<Self> {
        let comps = s.split('|').map(str::parse).collect::<Result<Vec<Partition>>>()?;
        Ok(Multipartition { comps })
    }
}

/// Wire form: `{"e":2,"s":[0,1],"components":[[3,1],[2]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipartitionJson {
    pub e: i64,
    pub s: Vec<i64>,
    pub components: Vec<Vec<u32>>,
}

impl MultipartitionJson {
    pub fn decode(self) -> Result<(Multipartition, Multicharge)> {
        let ctx = Multicharge::new(self.e, self.s)?;
        let mp = Multipartition::from_parts(self.components)?;
        mp.check_level(&ctx)?;
        Ok((mp, ctx))
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n as u32, n as u32, &mut Vec::new(), &mut out);
    out
}

/// All ℓ-multipartitions of `n`.
pub fn multipartitions_of(level: usize, n: usize) -> Vec<Multipartition> {
    let tables: Vec<Vec<Partition>> = (0..=n).map(partitions_of).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Partition> = Vec::with_capacity(level);
    fn rec(level: usize, rem: usize, tables: &[Vec<Partition>], cur: &mut Vec<Partition>, out: &mut Vec<Multipartition>) {
        if cur.len() + 1 == level {
            for p in &tables[rem] {
                cur.push(p.clone());
                out.push(Multipartition { comps: cur.clone() });
                cur.pop();
            }
            return;
        }
        for k in (0..=rem).rev() {
            for p in &tables[k] {
                cur.push(p.clone());
                rec(level, rem - k, tables, cur, out);
                cur.pop();
            }
        }
    }
    if level == 0 {
        return out;
    }
    rec(level, n, &tables, &mut cur, &mut out);
    out
}

/// `P_ℓ(≤ n)` ordered by degree.
pub fn multipartitions_up_to(level: usize, n: usize) -> Vec<Multipartition> {
    (0..=n).flat_map(|k| multipartitions_of(level, k)).collect()
}
