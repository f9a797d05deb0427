//! Families, splittings and the axioms (S0)-(S4) on a truncated poset of
//! multipartitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crystal::{format_signs, reduce, signature, Sign};
use crate::error::{FockError, Result};
use crate::multipartition::{multipartitions_up_to, Cell, Multicharge, Multipartition};
use crate::order::mp_lt;

/// A word in `{+,-}^n` ordered by prefix counts of `-`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlusMinusWord {
    pub signs: Vec<Sign>,
}

impl PlusMinusWord {
    pub fn new(signs: Vec<Sign>) -> Self {
        PlusMinusWord { signs }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == Sign::Minus).count()
    }

    pub fn last(&self) -> Option<Sign> {
        self.signs.last().copied()
    }

    /// `self ⪯ other`.
    pub fn preceq(&self, other: &PlusMinusWord) -> bool {
        if self.len() != other.len() || self.minus_count() != other.minus_count() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for (x, y) in self.signs.iter().zip(&other.signs) {
            a += usize::from(*x == Sign::Minus);
            b += usize::from(*y == Sign::Minus);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for PlusMinusWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_signs(&self.signs))
    }
}

/// Everything obtained from `skeleton` by adding some of its addable i-boxes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Family {
    pub residue: i64,
    pub skeleton: Multipartition,
    /// Slots in signature order; the last one is the smallest box.
    pub slots: Vec<Cell>,
}

impl Family {
    pub fn n(&self) -> usize {
        self.slots.len()
    }

    /// `σ_a(t)`.
    pub fn sigma(&self, t: &PlusMinusWord) -> Result<Multipartition> {
        if t.len() != self.n() {
            return Err(FockError::Precondition(format!(
                "word {t} has length {}, family has {} slots",
                t.len(),
                self.n()
            )));
        }
        let mut out = self.skeleton.clone();
        for (cell, s) in self.slots.iter().zip(&t.signs) {
            if *s == Sign::Minus {
                out = out.add_cell(cell).expect("slots are independent");
            }
        }
        Ok(out)
    }

    /// Members of size at most `max_degree`.
    pub fn members(&self, max_degree: usize) -> Vec<Multipartition> {
        let base = self.skeleton.size();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << self.n()) {
            if base + mask.count_ones() as usize > max_degree {
                continue;
            }
            let mut m = self.skeleton.clone();
            for (k, cell) in self.slots.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    m = m.add_cell(cell).expect("slots are independent");
                }
            }
            out.push(m);
        }
        out
    }
}

/// Strips every removable i-box at once.
pub fn family_of(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> Family {
    let i = ctx.residue(i);
    let mut skeleton = lambda.clone();
    for cell in lambda.removable().into_iter().filter(|b| b.residue(ctx) == i) {
        skeleton = skeleton
            .remove_cell(&cell)
            .expect("removable boxes of distinct residue-i diagonals are independent");
    }
    let slots = signature(&skeleton, ctx, i).entries.into_iter().map(|e| e.cell).collect();
    Family {
        residue: i,
        skeleton,
        slots,
    }
}

/// `σ_a^{-1}(λ)`: the i-signature of λ.
pub fn sigma_a_inv(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> PlusMinusWord {
    PlusMinusWord::new(signature(lambda, ctx, i).signs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitClass {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "<")]
    Less,
}

impl SplitClass {
    pub fn symbol(self) -> &'static str {
        match self {
            SplitClass::Greater => ">",
            SplitClass::Plus => "+",
            SplitClass::Minus => "-",
            SplitClass::Less => "<",
        }
    }

    pub fn is_equal_part(self) -> bool {
        matches!(self, SplitClass::Plus | SplitClass::Minus)
    }
}

/// Total order on diagonals used by the splitting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelOrder {
    /// `(⌊(c-i)/e⌋, component, (c-i) mod e)`.
    #[default]
    Blocks,
    /// `d = -(ℓ/e)cont - component`, ties by larger component first.
    Diagonal,
}

/// Diagonal `(content, component)`.
type Diagonal = (i64, usize);

fn diagonal_counts(lambda: &Multipartition, ctx: &Multicharge) -> BTreeMap<Diagonal, usize> {
    let mut out = BTreeMap::new();
    for b in lambda.boxes() {
        *out.entry((b.content(ctx), b.comp)).or_insert(0) += 1;
    }
    out
}

/// Increasing key means a larger `d` inside each residue class.
fn level_key(d: Diagonal, ctx: &Multicharge, i: i64, order: LevelOrder) -> (i64, i64, i64) {
    let (l, e, k) = (ctx.level() as i64, ctx.e(), d.1 as i64);
    match order {
        LevelOrder::Blocks => {
            let c = d.0 - i;
            (c.div_euclid(e), k, c.rem_euclid(e))
        }
        LevelOrder::Diagonal => (l * d.0 + e * (k + 1), -k, 0),
    }
}

fn first_difference<I>(diagonals: I, lam: &BTreeMap<Diagonal, usize>, mu: &BTreeMap<Diagonal, usize>) -> Option<std::cmp::Ordering>
where
    I: IntoIterator<Item = Diagonal>,
{
    diagonals.into_iter().find_map(|d| {
        let (x, y) = (lam.get(&d).copied().unwrap_or(0), mu.get(&d).copied().unwrap_or(0));
        (x != y).then(|| x.cmp(&y))
    })
}

fn union_diagonals(lam: &BTreeMap<Diagonal, usize>, mu: &BTreeMap<Diagonal, usize>) -> BTreeSet<Diagonal> {
    lam.keys().chain(mu.keys()).copied().collect()
}

/// Class of `mu` in the splitting attached to `family`.
pub fn splitting_classify(family: &Family, mu: &Multipartition, ctx: &Multicharge, order: LevelOrder) -> SplitClass {
    use std::cmp::Ordering::*;
    let lam = diagonal_counts(&family.skeleton, ctx);
    let mc = diagonal_counts(mu, ctx);
    let mut all: Vec<Diagonal> = union_diagonals(&lam, &mc).into_iter().collect();
    let key = |d: Diagonal| level_key(d, ctx, family.residue, order);
    all.sort_by_key(|&d| key(d));

    let Some(b) = family.slots.last() else {
        return match first_difference(all, &lam, &mc) {
            Some(Greater) => SplitClass::Greater,
            _ => SplitClass::Less,
        };
    };
    let bd = (b.content(ctx), b.comp);
    let kb = key(bd);
    match first_difference(all.iter().copied().filter(|&d| key(d) < kb), &lam, &mc) {
        Some(Greater) => return SplitClass::Greater,
        Some(_) => return SplitClass::Less,
        None => {}
    }
    let s = lam.get(&bd).copied().unwrap_or(0);
    let m = mc.get(&bd).copied().unwrap_or(0);
    if m < s {
        return SplitClass::Greater;
    }
    if m > s + 1 {
        return SplitClass::Less;
    }
    let below = (bd.0 + 1, bd.1);
    let r = ctx.residue(below.0);
    let lower = union_diagonals(&lam, &mc)
        .into_iter()
        .filter(|&d| ctx.residue(d.0) == r && d <= below);
    match first_difference(lower, &lam, &mc) {
        Some(Greater) if m == s => SplitClass::Greater,
        Some(_) => SplitClass::Less,
        None if m == s => SplitClass::Plus,
        None => SplitClass::Minus,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub passed: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub e: i64,
    pub s: Vec<i64>,
    pub residue: i64,
    pub max_degree: usize,
    pub families: usize,
    pub axioms: Vec<AxiomResult>,
}

impl SplittingReport {
    pub fn all_passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.axiom == name)
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(why());
        }
    }

    fn finish(self) -> AxiomResult {
        AxiomResult {
            axiom: self.name.to_string(),
            passed: self.counterexample.is_none(),
            checked: self.checked,
            counterexample: self.counterexample,
        }
    }
}

/// Checks (S0)-(S4) for the built-in splitting.
pub fn verify_splitting_axioms(ctx: &Multicharge, i: i64, max_degree: usize, order: LevelOrder) -> SplittingReport {
    verify_with_classifier(ctx, i, max_degree, &|a, mu| splitting_classify(a, mu, ctx, order))
}

/// Checks (S0)-(S4) for an arbitrary classifier on `P_ℓ(≤ max_degree)`.
pub fn verify_with_classifier(
    ctx: &Multicharge,
    i: i64,
    max_degree: usize,
    classify: &(dyn Fn(&Family, &Multipartition) -> SplitClass + Sync),
) -> SplittingReport {
    let i = ctx.residue(i);
    let universe = multipartitions_up_to(ctx.level(), max_degree);
    let index: BTreeMap<&Multipartition, usize> = universe.iter().enumerate().map(|(k, m)| (m, k)).collect();

    let mut by_skeleton: BTreeMap<Multipartition, (Family, Vec<usize>)> = BTreeMap::new();
    let mut family_of_elem = vec![0usize; universe.len()];
    for (k, m) in universe.iter().enumerate() {
        let f = family_of(m, ctx, i);
        by_skeleton.entry(f.skeleton.clone()).or_insert_with(|| (f, Vec::new())).1.push(k);
    }
    let families: Vec<(Family, Vec<usize>)> = by_skeleton.into_values().collect();
    for (a, (_, members)) in families.iter().enumerate() {
        for &k in members {
            family_of_elem[k] = a;
        }
    }

    let table: Vec<Vec<SplitClass>> = families
        .par_iter()
        .map(|(f, _)| universe.iter().map(|mu| classify(f, mu)).collect())
        .collect();

    let strict_pairs: Vec<(usize, usize)> = (0..universe.len())
        .into_par_iter()
        .flat_map_iter(|x| {
            let universe = &universe;
            (0..universe.len())
                .filter(move |&y| mp_lt(&universe[x], &universe[y], ctx))
                .map(move |y| (x, y))
        })
        .collect();

    let show = |k: usize| universe[k].to_string();
    let fam = |a: usize| families[a].0.skeleton.to_string();

    let mut s0 = Tally::new("S0");
    let ideals: [&[SplitClass]; 3] = [
        &[SplitClass::Less],
        &[SplitClass::Less, SplitClass::Minus],
        &[SplitClass::Less, SplitClass::Minus, SplitClass::Plus],
    ];
    for (a, row) in table.iter().enumerate() {
        for set in ideals {
            let bad = strict_pairs.iter().find(|&&(x, y)| set.contains(&row[y]) && !set.contains(&row[x]));
            s0.check(bad.is_none(), || {
                let (x, y) = bad.unwrap();
                format!(
                    "family {}: {} ⪯ {} but only the latter lies in {:?}",
                    fam(a),
                    show(*x),
                    show(*y),
                    set
                )
            });
        }
    }

    let mut s1 = Tally::new("S1");
    for (a, row) in table.iter().enumerate() {
        let has_eq = row.iter().any(|c| c.is_equal_part());
        let n0 = families[a].0.n() == 0;
        s1.check(n0 != has_eq, || {
            format!(
                "family {} has n_a = {} but equal part nonempty = {has_eq}",
                fam(a),
                families[a].0.n()
            )
        });
    }

    let mut s2 = Tally::new("S2");
    let mut s3 = Tally::new("S3");
    // placement[a][b]: where family b sits relative to a
    let mut placement = vec![vec![None; families.len()]; families.len()];
    for (a, row) in table.iter().enumerate() {
        for (b, (_, members)) in families.iter().enumerate() {
            let classes: BTreeSet<SplitClass> = members.iter().map(|&k| row[k]).collect();
            let place = if classes.iter().all(|c| c.is_equal_part()) {
                Some(SplitClass::Plus)
            } else if classes.len() == 1 {
                classes.first().copied()
            } else {
                None
            };
            s2.check(place.is_some(), || {
                format!("family {} splits across {:?} for family {}", fam(b), classes, fam(a))
            });
            if place == Some(SplitClass::Plus) {
                for &k in members {
                    let last = sigma_a_inv(&universe[k], ctx, i).last();
                    let expected = match last {
                        Some(Sign::Plus) => SplitClass::Plus,
                        Some(Sign::Minus) => SplitClass::Minus,
                        None => SplitClass::Less,
                    };
                    s2.check(row[k] == expected, || {
                        format!(
                            "{} in family {} classed {} for family {}, rightmost sign {:?}",
                            show(k),
                            fam(b),
                            row[k].symbol(),
                            fam(a),
                            last
                        )
                    });
                }
            }
            placement[a][b] = place;
        }
    }
    for a in 0..families.len() {
        for b in 0..families.len() {
            if a == b {
                continue;
            }
            if placement[a][b] == Some(SplitClass::Plus) {
                let same = table[a]
                    .iter()
                    .zip(&table[b])
                    .position(|(x, y)| x.is_equal_part() != y.is_equal_part() || (x.is_equal_part() && x != y));
                s3.check(same.is_none(), || {
                    let k = same.unwrap();
                    format!(
                        "family {} ⊂ equal part of {} but {} is {} vs {}",
                        fam(b),
                        fam(a),
                        show(k),
                        table[b][k].symbol(),
                        table[a][k].symbol()
                    )
                });
            }
            let lhs = placement[a][b] == Some(SplitClass::Greater);
            let rhs = placement[b][a] == Some(SplitClass::Less);
            s3.check(lhs == rhs, || {
                format!(
                    "family {} in > of {} is {lhs}, family {} in < of {} is {rhs}",
                    fam(b),
                    fam(a),
                    fam(a),
                    fam(b)
                )
            });
        }
    }

    let mut s4 = Tally::new("S4");
    for (a, row) in table.iter().enumerate() {
        let iota = |k: usize| -> Option<usize> {
            let f = &families[family_of_elem[k]].0;
            let cell = f.slots.last()?;
            universe[k].remove_cell(cell).and_then(|m| index.get(&m).copied())
        };
        let minus: Vec<usize> = (0..universe.len()).filter(|&k| row[k] == SplitClass::Minus).collect();
        let mut images = BTreeSet::new();
        for &k in &minus {
            let img = iota(k);
            let ok = img.is_some_and(|j| row[j] == SplitClass::Plus && family_of_elem[j] == family_of_elem[k]);
            s4.check(ok, || {
                format!("family {}: ι({}) is not in the + part of the same family", fam(a), show(k))
            });
            if let Some(j) = img {
                images.insert(j);
            }
        }
        for k in (0..universe.len()).filter(|&k| row[k] == SplitClass::Plus && universe[k].size() < max_degree) {
            s4.check(images.contains(&k), || format!("family {}: {} has no ι-preimage", fam(a), show(k)));
        }
        for &x in &minus {
            for &y in &minus {
                if x == y || universe[x].size() != universe[y].size() {
                    continue;
                }
                let (Some(ix), Some(iy)) = (iota(x), iota(y)) else { continue };
                let before = mp_lt(&universe[x], &universe[y], ctx);
                let after = mp_lt(&universe[ix], &universe[iy], ctx);
                s4.check(before == after, || {
                    format!("family {}: ι does not preserve {} vs {}", fam(a), show(x), show(y))
                });
            }
        }
    }

    SplittingReport {
        e: ctx.e(),
        s: ctx.charges().to_vec(),
        residue: i,
        max_degree,
        families: families.len(),
        axioms: vec![s0.finish(), s1.finish(), s2.finish(), s3.finish(), s4.finish()],
    }
}

/// The sub-poset `Λ̲^a_-` with the smallest slot of `a` frozen filled.
#[derive(Clone, Debug, Serialize)]
pub struct FrozenPoset {
    pub frozen: Option<Cell>,
    pub elements: Vec<Multipartition>,
}

pub fn freeze(family: &Family, ctx: &Multicharge, max_degree: usize, order: LevelOrder) -> FrozenPoset {
    let elements = multipartitions_up_to(ctx.level(), max_degree)
        .into_iter()
        .filter(|m| splitting_classify(family, m, ctx, order) == SplitClass::Minus)
        .collect();
    FrozenPoset {
        frozen: family.slots.last().copied(),
        elements,
    }
}

/// `s` is `t` with the entries of one marked pair of `t` switched.
pub fn ext_adjacent(t: &PlusMinusWord, s: &PlusMinusWord) -> bool {
    if t.len() != s.len() {
        return false;
    }
    reduce(&t.signs).marked_pairs.iter().any(|&(j, k)| {
        let mut u = t.signs.clone();
        u.swap(j, k);
        u == s.signs
    })
}
