//! The preorder ⪯ on multipartitions.
//!
//! Inside one residue class the box order is the total preorder on
//! `(content, component)`, so a matching `b_k ⪯ b'_k` exists exactly when the
//! two sorted key lists dominate pointwise. No matching search is needed.

use crate::multipartition::{Cell, Multicharge, Multipartition};

/// Sort key of a box: residue class first, then `(content, component)`.
pub type BoxKey = (i64, i64, usize);

pub fn box_key(cell: &Cell, ctx: &Multicharge) -> BoxKey {
    let c = cell.content(ctx);
    (ctx.residue(c), c, cell.comp)
}

/// Decides whether the box multiset `lhs` can be matched below `rhs`.
pub fn keys_preceq(mut lhs: Vec<BoxKey>, mut rhs: Vec<BoxKey>) -> bool {
    if lhs.len() != rhs.len() {
        return false;
    }
    lhs.sort_unstable();
    rhs.sort_unstable();
    lhs.iter().zip(&rhs).all(|(a, b)| a.0 == b.0 && (a.1, a.2) <= (b.1, b.2))
}

/// `λ ⪯ μ`.
pub fn mp_preceq(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge) -> bool {
    if lambda.size() != mu.size() {
        return false;
    }
    let keys = |m: &Multipartition| m.boxes().iter().map(|b| box_key(b, ctx)).collect::<Vec<_>>();
    keys_preceq(keys(lambda), keys(mu))
}

/// `λ ⪯ μ` and `λ ≠ μ`.
pub fn mp_lt(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge) -> bool {
    lambda != mu && mp_preceq(lambda, mu, ctx)
}
