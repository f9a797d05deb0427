//! Straightening by simple reflections: `σ_i λ = f̃_i^{h_{i,+}} λ`, words of
//! reflections, cycles, and the level-one closed forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::crystal::{self, string_lengths, Structure};
use crate::error::{FockError, Result};
use crate::multipartition::{Cell, Multicharge, Multipartition, Partition};

/// A word `σ_{i_k} ... σ_{i_1}`, stored in written order and applied
/// right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedWord {
    letters: Vec<i64>,
}

impl ReducedWord {
    pub fn new(letters: Vec<i64>, e: i64) -> Self {
        ReducedWord {
            letters: letters.into_iter().map(|l| l.rem_euclid(e)).collect(),
        }
    }

    pub fn identity() -> Self {
        ReducedWord { letters: Vec::new() }
    }

    /// `C_{j,n} = σ_{j-n+1} ... σ_{j-1} σ_j`.
    pub fn cycle(j: i64, n: usize, e: i64) -> Self {
        let letters = (0..n as i64).rev().map(|k| (j - k).rem_euclid(e)).collect();
        ReducedWord { letters }
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters in the order they act.
    pub fn application_order(&self) -> impl Iterator<Item = i64> + '_ {
        self.letters.iter().rev().copied()
    }

    /// Word with every letter negated; conjugating by † turns `w*` into this.
    pub fn negated(&self, e: i64) -> Self {
        ReducedWord {
            letters: self.letters.iter().map(|l| (-l).rem_euclid(e)).collect(),
        }
    }

    /// Prepends `σ_i`, i.e. `σ_i w`.
    pub fn then(&self, i: i64, e: i64) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(i.rem_euclid(e));
        letters.extend_from_slice(&self.letters);
        ReducedWord { letters }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let s: Vec<String> = self.letters.iter().map(|l| format!("s{l}")).collect();
        write!(f, "{}", s.join(" "))
    }
}

impl FromStr for ReducedWord {
    type Err = FockError;
    /// Accepts `id` or residues separated by spaces or commas, written order.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(ReducedWord::identity());
        }
        let letters = s
            .split([' ', ','])
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.trim_start_matches('s')
                    .parse::<i64>()
                    .map_err(|_| FockError::Parse(format!("bad letter '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReducedWord { letters })
    }
}

/// `σ_i λ` (usual) or `σ*_i λ` (dual). `Ok(None)` when `h_{i,-}(λ) ≠ 0`.
pub fn sigma_with(lambda: &Multipartition, ctx: &Multicharge, i: i64, which: Structure, cap: usize) -> Result<Option<Multipartition>> {
    let (hp, hm) = string_lengths(lambda, ctx, i, which);
    if hm != 0 {
        return Ok(None);
    }
    let target = lambda.size() + hp;
    if target > cap {
        return Err(FockError::DegreeCapExceeded { cap, reached: target });
    }
    let mut cur = lambda.clone();
    for _ in 0..hp {
        cur = crystal::f_op(&cur, ctx, i, which).expect("h_+ counts available f steps");
    }
    Ok(Some(cur))
}

pub fn sigma(lambda: &Multipartition, ctx: &Multicharge, i: i64, cap: usize) -> Result<Option<Multipartition>> {
    sigma_with(lambda, ctx, i, Structure::Usual, cap)
}

pub fn sigma_star(lambda: &Multipartition, ctx: &Multicharge, i: i64, cap: usize) -> Result<Option<Multipartition>> {
    sigma_with(lambda, ctx, i, Structure::Dual, cap)
}

/// The sequence `λ, σ_{i_1}λ, σ_{i_2}σ_{i_1}λ, ...`, stopping at the first
/// undefined step. For (co)singular input every step must be defined; a
/// failure there is reported as [`FockError::WellDefinedness`].
pub fn word_track(
    w: &ReducedWord,
    lambda: &Multipartition,
    ctx: &Multicharge,
    which: Structure,
    cap: usize,
) -> Result<Vec<Multipartition>> {
    let extremal = match which {
        Structure::Usual => crystal::is_singular(lambda, ctx),
        Structure::Dual => crystal::is_cosingular(lambda, ctx),
    };
    let mut track = vec![lambda.clone()];
    for (step, i) in w.application_order().enumerate() {
        let cur = track.last().expect("nonempty");
        match sigma_with(cur, ctx, i, which, cap)? {
            Some(next) => track.push(next),
            None if extremal => return Err(FockError::WellDefinedness { residue: i, step }),
            None => break,
        }
    }
    Ok(track)
}

/// `w λ` (or `w* λ` when `dual`).
pub fn apply_word(w: &ReducedWord, lambda: &Multipartition, ctx: &Multicharge, dual: bool, cap: usize) -> Result<Option<Multipartition>> {
    let which = if dual { Structure::Dual } else { Structure::Usual };
    let track = word_track(w, lambda, ctx, which, cap)?;
    Ok((track.len() == w.len() + 1).then(|| track.into_iter().last().expect("nonempty")))
}

/// `ν_n = (n, n-(e-1), n-2(e-1), ...)^t`, positive terms only.
pub fn nu_n(n: usize, e: i64) -> Partition {
    let step = (e - 1) as usize;
    let parts: Vec<u32> = (0..)
        .map(|k| n as i64 - (k * step) as i64)
        .take_while(|&p| p > 0)
        .map(|p| p as u32)
        .collect();
    Partition::from_unsorted(parts).transpose()
}

fn require_level_one(ctx: &Multicharge) -> Result<()> {
    if ctx.level() != 1 {
        return Err(FockError::Precondition(format!(
            "level-one formula needs ℓ = 1, got ℓ = {}",
            ctx.level()
        )));
    }
    Ok(())
}

/// `λ + ν_n`, the value of the cycle anchored at the charge, `C_{s_1,n} λ`,
/// for singular level-one `λ`.
pub fn level1_cycle_closed_form(lambda: &Multipartition, ctx: &Multicharge, n: usize) -> Result<Multipartition> {
    require_level_one(ctx)?;
    Ok(Multipartition::new(vec![lambda.component(0).add(&nu_n(n, ctx.e()))]))
}

/// `(μ^t + ν_n^t)^t`, the value of `C*_{s_1,n} μ` for cosingular `μ`.
pub fn level1_dual_cycle_closed_form(mu: &Multipartition, ctx: &Multicharge, n: usize) -> Result<Multipartition> {
    require_level_one(ctx)?;
    let p = mu.component(0).transpose().add(&nu_n(n, ctx.e()).transpose()).transpose();
    Ok(Multipartition::new(vec![p]))
}

/// The singular multipartition of 2 adjoined to `Par¹_ℓ` when `e = 2`.
pub fn special_nu(ctx: &Multicharge) -> Result<Multipartition> {
    if ctx.e() != 2 {
        return Err(FockError::Precondition(format!(
            "special ν is defined for e = 2, got e = {}",
            ctx.e()
        )));
    }
    let s = ctx.charges();
    let min = *s.iter().min().expect("level ≥ 1");
    let a = s.iter().position(|&x| x == min).expect("min exists");
    let first = Cell::new(1, 1, a);
    let second = match s[..a].iter().position(|&x| x == min + 1) {
        Some(b) => Cell::new(1, 1, b),
        None => Cell::new(1, 2, a),
    };
    let nu = Multipartition::empty(ctx.level())
        .add_cell(&first)
        .and_then(|m| m.add_cell(&second))
        .expect("both cells are addable in order");
    Ok(nu)
}

/// Membership in `Par¹_ℓ`: components meeting degree ≤ 1, plus the
/// component of the special ν when `e = 2`.
pub fn par1_membership(lambda: &Multipartition, ctx: &Multicharge) -> bool {
    let top = crystal::highest_weight(lambda, ctx);
    if top.size() <= 1 {
        return true;
    }
    ctx.e() == 2 && special_nu(ctx).is_ok_and(|nu| nu == top)
}
