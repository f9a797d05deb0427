//! i-signatures, the two reduction rules and the usual and dual crystal
//! operators on multipartitions.
//!
//! The i-signature lists the addable (`+`) and removable (`-`) i-boxes by
//! decreasing content, ties broken by decreasing component index. The usual
//! reduction cancels adjacent `-+` pairs, the dual one cancels `+-`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::multipartition::{Cell, Multicharge, Multipartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Parses a word like `"+-+"`.
pub fn parse_signs(s: &str) -> Option<Vec<Sign>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' => Some(Sign::Plus),
            '-' | '−' => Some(Sign::Minus),
            _ => None,
        })
        .collect()
}

pub fn format_signs(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureEntry {
    pub sign: Sign,
    pub cell: Cell,
    pub content: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub residue: i64,
    pub entries: Vec<SignatureEntry>,
}

impl Signature {
    pub fn signs(&self) -> Vec<Sign> {
        self.entries.iter().map(|e| e.sign).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The i-signature of `λ`.
pub fn signature(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> Signature {
    let i = ctx.residue(i);
    let mut entries: Vec<SignatureEntry> = lambda
        .addable()
        .into_iter()
        .map(|c| (Sign::Plus, c))
        .chain(lambda.removable().into_iter().map(|c| (Sign::Minus, c)))
        .filter(|(_, c)| c.residue(ctx) == i)
        .map(|(sign, cell)| SignatureEntry {
            sign,
            cell,
            content: cell.content(ctx),
        })
        .collect();
    entries.sort_by(|a, b| b.content.cmp(&a.content).then(b.cell.comp.cmp(&a.cell.comp)));
    Signature { residue: i, entries }
}

/// Result of a reduction. Indices are 0-based positions in the word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedSignature {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    /// Cancelled pairs `(j, j')` with `j < j'`.
    pub marked_pairs: Vec<(usize, usize)>,
}

/// Usual reduction: repeatedly delete adjacent `-+`.
pub fn reduce(t: &[Sign]) -> ReducedSignature {
    let mut open_minus = Vec::new();
    let mut out = ReducedSignature::default();
    for (k, &s) in t.iter().enumerate() {
        match s {
            Sign::Minus => open_minus.push(k),
            Sign::Plus => match open_minus.pop() {
                Some(j) => out.marked_pairs.push((j, k)),
                None => out.plus.push(k),
            },
        }
    }
    out.minus = open_minus;
    out
}

/// Dual reduction: repeatedly delete adjacent `+-`.
pub fn reduce_dual(t: &[Sign]) -> ReducedSignature {
    let mut open_plus = Vec::new();
    let mut out = ReducedSignature::default();
    for (k, &s) in t.iter().enumerate() {
        match s {
            Sign::Plus => open_plus.push(k),
            Sign::Minus => match open_plus.pop() {
                Some(j) => out.marked_pairs.push((j, k)),
                None => out.minus.push(k),
            },
        }
    }
    out.plus = open_plus;
    out
}

/// Which of the two crystal structures to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Usual,
    Dual,
}

fn reduced(lambda: &Multipartition, ctx: &Multicharge, i: i64, which: Structure) -> (Signature, ReducedSignature) {
    let sig = signature(lambda, ctx, i);
    let red = match which {
        Structure::Usual => reduce(&sig.signs()),
        Structure::Dual => reduce_dual(&sig.signs()),
    };
    (sig, red)
}

/// `f̃_i λ`; `None` stands for 0.
pub fn f_tilde(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> Option<Multipartition> {
    let (sig, red) = reduced(lambda, ctx, i, Structure::Usual);
    let k = *red.plus.last()?;
    lambda.add_cell(&sig.entries[k].cell)
}

/// `ẽ_i λ`; `None` stands for 0.
pub fn e_tilde(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> Option<Multipartition> {
    let (sig, red) = reduced(lambda, ctx, i, Structure::Usual);
    let k = *red.minus.first()?;
    lambda.remove_cell(&sig.entries[k].cell)
}

pub fn f_star(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> Option<Multipartition> {
    let (sig, red) = reduced(lambda, ctx, i, Structure::Dual);
    let k = *red.plus.first()?;
    lambda.add_cell(&sig.entries[k].cell)
}

pub fn e_star(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> Option<Multipartition> {
    let (sig, red) = reduced(lambda, ctx, i, Structure::Dual);
    let k = *red.minus.last()?;
    lambda.remove_cell(&sig.entries[k].cell)
}

pub fn f_op(lambda: &Multipartition, ctx: &Multicharge, i: i64, which: Structure) -> Option<Multipartition> {
    match which {
        Structure::Usual => f_tilde(lambda, ctx, i),
        Structure::Dual => f_star(lambda, ctx, i),
    }
}

pub fn e_op(lambda: &Multipartition, ctx: &Multicharge, i: i64, which: Structure) -> Option<Multipartition> {
    match which {
        Structure::Usual => e_tilde(lambda, ctx, i),
        Structure::Dual => e_star(lambda, ctx, i),
    }
}

/// `(h_{i,+}, h_{i,-})` for the chosen structure.
pub fn string_lengths(lambda: &Multipartition, ctx: &Multicharge, i: i64, which: Structure) -> (usize, usize) {
    let (_, red) = reduced(lambda, ctx, i, which);
    (red.plus.len(), red.minus.len())
}

pub fn h_plus(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> usize {
    string_lengths(lambda, ctx, i, Structure::Usual).0
}

pub fn h_minus(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> usize {
    string_lengths(lambda, ctx, i, Structure::Usual).1
}

/// `wt = h_+ - h_-`; equal to #addable minus #removable i-boxes.
pub fn wt(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> i64 {
    let (p, m) = string_lengths(lambda, ctx, i, Structure::Usual);
    p as i64 - m as i64
}

pub fn is_singular(lambda: &Multipartition, ctx: &Multicharge) -> bool {
    (0..ctx.e()).all(|i| e_tilde(lambda, ctx, i).is_none())
}

pub fn is_cosingular(lambda: &Multipartition, ctx: &Multicharge) -> bool {
    (0..ctx.e()).all(|i| e_star(lambda, ctx, i).is_none())
}

/// Same size and the same number of i-boxes for every residue.
pub fn same_block(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge) -> bool {
    lambda.size() == mu.size() && lambda.residue_counts(ctx) == mu.residue_counts(ctx)
}

/// The singular vertex of the component of `λ`, reached by applying `ẽ_i`
/// until every one of them vanishes.
pub fn highest_weight(lambda: &Multipartition, ctx: &Multicharge) -> Multipartition {
    let mut cur = lambda.clone();
    'outer: loop {
        for i in 0..ctx.e() {
            if let Some(next) = e_tilde(&cur, ctx, i) {
                cur = next;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Closure of `{λ}` under all `ẽ_i`, `f̃_i` inside `P_ℓ(≤ max_degree)`.
pub fn crystal_component(lambda: &Multipartition, ctx: &Multicharge, max_degree: usize) -> BTreeSet<Multipartition> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(lambda.clone());
    queue.push_back(lambda.clone());
    while let Some(cur) = queue.pop_front() {
        for i in 0..ctx.e() {
            let up = if cur.size() < max_degree { f_tilde(&cur, ctx, i) } else { None };
            for next in [e_tilde(&cur, ctx, i), up].into_iter().flatten() {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Membership in `P_ℓ^(r)`: the component of `λ` meets degree `≤ r`.
pub fn par_r_membership(lambda: &Multipartition, ctx: &Multicharge, r: usize) -> bool {
    highest_weight(lambda, ctx).size() <= r
}
