//! Reference implementations used as oracles. They work on raw row vectors
//! and share no code with the library beyond parsing.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fock::{Multicharge, Multipartition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rows = Vec<Vec<u32>>;

/// `(row, col, comp)` with 1-based row and column, 0-based component.
pub type RawBox = (i64, i64, usize);

pub fn rows_of(m: &Multipartition) -> Rows {
    m.components().iter().map(|p| p.parts().to_vec()).collect()
}

pub fn from_rows(r: &Rows) -> Multipartition {
    Multipartition::from_parts(r.clone()).expect("oracle produced a valid multipartition")
}

pub fn content(b: RawBox, s: &[i64]) -> i64 {
    b.1 - b.0 + s[b.2]
}

pub fn boxes(r: &Rows) -> Vec<RawBox> {
    let mut out = Vec::new();
    for (k, comp) in r.iter().enumerate() {
        for (x, &len) in comp.iter().enumerate() {
            for y in 1..=len as i64 {
                out.push((x as i64 + 1, y, k));
            }
        }
    }
    out
}

fn row_len(comp: &[u32], x: i64) -> i64 {
    if x < 1 {
        return i64::MAX;
    }
    comp.get(x as usize - 1).map_or(0, |&v| v as i64)
}

pub fn addable(r: &Rows) -> Vec<RawBox> {
    let mut out = Vec::new();
    for (k, comp) in r.iter().enumerate() {
        for x in 1..=comp.len() as i64 + 1 {
            let y = row_len(comp, x) + 1;
            if row_len(comp, x - 1) >= y {
                out.push((x, y, k));
            }
        }
    }
    out
}

pub fn removable(r: &Rows) -> Vec<RawBox> {
    let mut out = Vec::new();
    for (k, comp) in r.iter().enumerate() {
        for x in 1..=comp.len() as i64 {
            let y = row_len(comp, x);
            if row_len(comp, x + 1) < y {
                out.push((x, y, k));
            }
        }
    }
    out
}

pub fn with_box(r: &Rows, b: RawBox) -> Rows {
    let mut out = r.clone();
    let comp = &mut out[b.2];
    if comp.len() < b.0 as usize {
        comp.push(0);
    }
    comp[b.0 as usize - 1] += 1;
    out
}

pub fn without_box(r: &Rows, b: RawBox) -> Rows {
    let mut out = r.clone();
    let comp = &mut out[b.2];
    comp[b.0 as usize - 1] -= 1;
    if comp.last() == Some(&0) {
        comp.pop();
    }
    out
}

pub fn residue(c: i64, e: i64) -> i64 {
    c.rem_euclid(e)
}

/// Signature entries `(sign, box)` ordered by decreasing content, then
/// decreasing component.
pub fn signature(r: &Rows, s: &[i64], e: i64, i: i64) -> Vec<(char, RawBox)> {
    let mut v: Vec<(char, RawBox)> = addable(r)
        .into_iter()
        .map(|b| ('+', b))
        .chain(removable(r).into_iter().map(|b| ('-', b)))
        .filter(|(_, b)| residue(content(*b, s), e) == residue(i, e))
        .collect();
    v.sort_by_key(|(_, b)| (std::cmp::Reverse(content(*b, s)), std::cmp::Reverse(b.2)));
    v
}

/// Surviving positions after repeatedly deleting an adjacent `pair`.
pub fn survivors(word: &[char], pair: [char; 2]) -> Vec<usize> {
    let mut alive: Vec<usize> = (0..word.len()).collect();
    loop {
        let hit = alive.windows(2).position(|w| word[w[0]] == pair[0] && word[w[1]] == pair[1]);
        match hit {
            Some(p) => {
                alive.remove(p + 1);
                alive.remove(p);
            }
            None => return alive,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Usual,
    Dual,
}

fn reduced(r: &Rows, s: &[i64], e: i64, i: i64, kind: Kind) -> (Vec<(char, RawBox)>, Vec<usize>, Vec<usize>) {
    let sig = signature(r, s, e, i);
    let word: Vec<char> = sig.iter().map(|x| x.0).collect();
    let pair = match kind {
        Kind::Usual => ['-', '+'],
        Kind::Dual => ['+', '-'],
    };
    let alive = survivors(&word, pair);
    let plus = alive.iter().copied().filter(|&k| word[k] == '+').collect();
    let minus = alive.iter().copied().filter(|&k| word[k] == '-').collect();
    (sig, plus, minus)
}

pub fn h_pm(r: &Rows, s: &[i64], e: i64, i: i64, kind: Kind) -> (usize, usize) {
    let (_, p, m) = reduced(r, s, e, i, kind);
    (p.len(), m.len())
}

/// Usual: add at the last surviving `+`. Dual: add at the first.
pub fn f(r: &Rows, s: &[i64], e: i64, i: i64, kind: Kind) -> Option<Rows> {
    let (sig, p, _) = reduced(r, s, e, i, kind);
    let k = match kind {
        Kind::Usual => p.last(),
        Kind::Dual => p.first(),
    }?;
    Some(with_box(r, sig[*k].1))
}

/// Usual: remove at the first surviving `-`. Dual: remove at the last.
pub fn e_op(r: &Rows, s: &[i64], e: i64, i: i64, kind: Kind) -> Option<Rows> {
    let (sig, _, m) = reduced(r, s, e, i, kind);
    let k = match kind {
        Kind::Usual => m.first(),
        Kind::Dual => m.last(),
    }?;
    Some(without_box(r, sig[*k].1))
}

pub fn is_singular(r: &Rows, s: &[i64], e: i64) -> bool {
    (0..e).all(|i| e_op(r, s, e, i, Kind::Usual).is_none())
}

pub fn is_cosingular(r: &Rows, s: &[i64], e: i64) -> bool {
    (0..e).all(|i| e_op(r, s, e, i, Kind::Dual).is_none())
}

/// `σ_i = f̃_i^{h_+}` when `h_- = 0`.
pub fn sigma(r: &Rows, s: &[i64], e: i64, i: i64, kind: Kind) -> Option<Rows> {
    let (p, m) = h_pm(r, s, e, i, kind);
    if m != 0 {
        return None;
    }
    let mut cur = r.clone();
    for _ in 0..p {
        cur = f(&cur, s, e, i, kind)?;
    }
    Some(cur)
}

/// Applies letters right to left.
pub fn apply_letters(letters: &[i64], r: &Rows, s: &[i64], e: i64, kind: Kind) -> Option<Rows> {
    let mut cur = r.clone();
    for &i in letters.iter().rev() {
        cur = sigma(&cur, s, e, i, kind)?;
    }
    Some(cur)
}

/// `b ⪯ b'` on boxes given by `(content, comp)`.
pub fn box_leq(a: (i64, usize), b: (i64, usize), e: i64) -> bool {
    (b.0 - a.0).rem_euclid(e) == 0 && (a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1))
}

/// Perfect matching with `lhs[k] ⪯ rhs[φ(k)]`, by augmenting paths.
pub fn matching_leq(lhs: &[(i64, usize)], rhs: &[(i64, usize)], e: i64) -> bool {
    if lhs.len() != rhs.len() {
        return false;
    }
    let adj: Vec<Vec<usize>> = lhs
        .iter()
        .map(|&a| (0..rhs.len()).filter(|&j| box_leq(a, rhs[j], e)).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; rhs.len()];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    (0..lhs.len()).all(|u| augment(u, &adj, &mut vec![false; rhs.len()], &mut owner))
}

pub fn box_keys(r: &Rows, s: &[i64]) -> Vec<(i64, usize)> {
    boxes(r).into_iter().map(|b| (content(b, s), b.2)).collect()
}

pub fn preceq(a: &Rows, b: &Rows, s: &[i64], e: i64) -> bool {
    matching_leq(&box_keys(a, s), &box_keys(b, s), e)
}

/// Boxes of the virtual diagram `v` missing from `w`, as `(content, comp)`.
/// Rows are given by their right ends.
pub fn virtual_excess(v: &[Vec<i64>], w: &[Vec<i64>], s: &[i64]) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    for (k, (rv, rw)) in v.iter().zip(w).enumerate() {
        for (x, (&a, &b)) in rv.iter().zip(rw).enumerate() {
            for y in b + 1..=a {
                out.push((y - (x as i64 + 1) + s[k], k));
            }
        }
    }
    out
}

pub fn virtual_preceq(v: &[Vec<i64>], w: &[Vec<i64>], s: &[i64], e: i64) -> bool {
    matching_leq(&virtual_excess(v, w, s), &virtual_excess(w, v, s), e)
}

/// All multipartitions with `ℓ` components and `n` boxes, built from
/// scratch by adding boxes.
pub fn all_of_size(level: usize, n: usize) -> BTreeSet<Rows> {
    let mut layer: BTreeSet<Rows> = BTreeSet::from([vec![Vec::new(); level]]);
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|r| addable(r).into_iter().map(move |b| with_box(r, b)))
            .collect();
    }
    layer
}

pub fn all_up_to(level: usize, n: usize) -> Vec<Rows> {
    (0..=n).flat_map(|k| all_of_size(level, k)).collect()
}

/// Sparse vector in the Fock space.
pub type Vector = BTreeMap<Rows, i64>;

pub fn add_into(v: &mut Vector, r: Rows, c: i64) {
    let slot = v.entry(r.clone()).or_insert(0);
    *slot += c;
    if *slot == 0 {
        v.remove(&r);
    }
}

pub fn chevalley_f(v: &Vector, s: &[i64], e: i64, i: i64) -> Vector {
    let mut out = Vector::new();
    for (r, &c) in v {
        for b in addable(r).into_iter().filter(|&b| residue(content(b, s), e) == residue(i, e)) {
            add_into(&mut out, with_box(r, b), c);
        }
    }
    out
}

pub fn chevalley_e(v: &Vector, s: &[i64], e: i64, i: i64) -> Vector {
    let mut out = Vector::new();
    for (r, &c) in v {
        for b in removable(r).into_iter().filter(|&b| residue(content(b, s), e) == residue(i, e)) {
            add_into(&mut out, without_box(r, b), c);
        }
    }
    out
}

pub fn transpose(p: &[u32]) -> Vec<u32> {
    let w = p.first().copied().unwrap_or(0);
    (1..=w).map(|c| p.iter().filter(|&&x| x >= c).count() as u32).collect()
}

pub fn add_parts(a: &[u32], b: &[u32]) -> Vec<u32> {
    (0..a.len().max(b.len()))
        .map(|k| a.get(k).copied().unwrap_or(0) + b.get(k).copied().unwrap_or(0))
        .collect()
}

/// `ν_n = (n, n-(e-1), n-2(e-1), ...)^t`.
pub fn nu(n: i64, e: i64) -> Vec<u32> {
    let cols: Vec<u32> = (0..).map(|k| n - k * (e - 1)).take_while(|&p| p > 0).map(|p| p as u32).collect();
    transpose(&cols)
}

pub fn ctx(e: i64, s: &[i64]) -> Multicharge {
    Multicharge::new(e, s.to_vec()).expect("valid multicharge")
}

/// `count` multicharges of each level in `levels`, entries in `[-3, 3]`.
pub fn random_multicharges(seed: u64, levels: std::ops::RangeInclusive<usize>, count: usize) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for l in levels {
        for _ in 0..count {
            out.push((0..l).map(|_| rng.gen_range(-3..=3)).collect());
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
