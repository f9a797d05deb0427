//! Companions and semi-decision procedures for the conditions 𝔠 and 𝔠̃.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::crystal::{h_minus, is_cosingular, is_singular, reduce, reduce_dual, same_block, signature};
use crate::error::{FockError, Result};
use crate::multipartition::{multipartitions_of, Cell, Multicharge, Multipartition};
use crate::order::mp_preceq;
use crate::weyl::{apply_word, sigma, sigma_star, ReducedWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Box moved across a marked pair of the current track element.
    MarkedPair {
        stage: usize,
        residue: i64,
        removed: String,
        added: String,
    },
    /// `σ_i` of a companion from the previous stage.
    Propagated { stage: usize, residue: i64, from: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Companion {
    pub mp: Multipartition,
    pub provenance: Provenance,
}

/// Companions of `wλ` for the word `w` applied so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompanionSet {
    pub word: ReducedWord,
    pub elements: Vec<Companion>,
}

impl CompanionSet {
    pub fn multipartitions(&self) -> impl Iterator<Item = &Multipartition> {
        self.elements.iter().map(|c| &c.mp)
    }

    fn push(&mut self, c: Companion) {
        if !self.elements.iter().any(|x| x.mp == c.mp) {
            self.elements.push(c);
        }
    }
}

/// `ν[p]` for every marked pair `p` of the i-signature of `ν`.
pub fn marked_pair_moves(nu: &Multipartition, ctx: &Multicharge, i: i64) -> Vec<(Multipartition, Cell, Cell)> {
    let sig = signature(nu, ctx, i);
    reduce(&sig.signs())
        .marked_pairs
        .iter()
        .map(|&(j, k)| {
            let (b, b2) = (sig.entries[j].cell, sig.entries[k].cell);
            let moved = nu
                .remove_cell(&b)
                .and_then(|m| m.add_cell(&b2))
                .expect("a marked pair is a removable box and a distinct addable box");
            (moved, b, b2)
        })
        .collect()
}

/// Companions of a singular `λ` before any reflection.
pub fn companions_initial(lambda: &Multipartition, ctx: &Multicharge) -> Result<CompanionSet> {
    if !is_singular(lambda, ctx) {
        return Err(FockError::Precondition(format!("{lambda} is not singular")));
    }
    let mut out = CompanionSet::default();
    for i in 0..ctx.e() {
        for (moved, b, b2) in marked_pair_moves(lambda, ctx, i) {
            if !is_singular(&moved, ctx) {
                out.push(Companion {
                    mp: moved,
                    provenance: Provenance::MarkedPair {
                        stage: 0,
                        residue: i,
                        removed: b.to_string(),
                        added: b2.to_string(),
                    },
                });
            }
        }
    }
    Ok(out)
}

fn differs_by_residue_only(a: &Multipartition, b: &Multipartition, ctx: &Multicharge, i: i64) -> bool {
    let (x, y): (BTreeSet<Cell>, BTreeSet<Cell>) = (a.boxes().into_iter().collect(), b.boxes().into_iter().collect());
    x.symmetric_difference(&y).all(|c| c.residue(ctx) == ctx.residue(i))
}

/// Companions of `σ_i ν` from those of `ν`. `excluded` holds `σ_i w λ'` for
/// every singular `λ'` of the block.
pub fn companions_step(
    nu: &Multipartition,
    companions: &CompanionSet,
    i: i64,
    ctx: &Multicharge,
    excluded: &BTreeSet<Multipartition>,
    cap: usize,
) -> Result<CompanionSet> {
    let i = ctx.residue(i);
    let next = sigma(nu, ctx, i, cap)?.ok_or_else(|| FockError::Precondition(format!("σ_{i} undefined on {nu}")))?;
    let stage = companions.word.len() + 1;
    let mut out = CompanionSet {
        word: companions.word.then(i, ctx.e()),
        elements: Vec::new(),
    };
    for c in &companions.elements {
        if h_minus(&c.mp, ctx, i) == 0 && !differs_by_residue_only(&c.mp, nu, ctx, i) {
            let moved = sigma(&c.mp, ctx, i, cap)?.expect("h_- = 0");
            out.push(Companion {
                mp: moved,
                provenance: Provenance::Propagated {
                    stage,
                    residue: i,
                    from: c.mp.to_string(),
                },
            });
        }
    }
    for (moved, b, b2) in marked_pair_moves(&next, ctx, i) {
        if !excluded.contains(&moved) {
            out.push(Companion {
                mp: moved,
                provenance: Provenance::MarkedPair {
                    stage,
                    residue: i,
                    removed: b.to_string(),
                    added: b2.to_string(),
                },
            });
        }
    }
    Ok(out)
}

/// Singular multipartitions in the block of `λ`.
pub fn singulars_in_block(lambda: &Multipartition, ctx: &Multicharge) -> Vec<Multipartition> {
    multipartitions_of(ctx.level(), lambda.size())
        .into_iter()
        .filter(|m| same_block(m, lambda, ctx) && is_singular(m, ctx))
        .collect()
}

/// Search budgets. Cycles `C_{c,n}` are tried for every residue `c` and
/// `n ≤ max_cycle`; BFS covers words of length `≤ bfs_len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub max_cycle: usize,
    pub bfs_len: usize,
    pub allow_bfs: bool,
    pub cap: usize,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            max_cycle: 24,
            bfs_len: 6,
            allow_bfs: true,
            cap: 400,
        }
    }
}

impl Strategy {
    pub fn cycles_only(max_cycle: usize) -> Self {
        Strategy {
            max_cycle,
            allow_bfs: false,
            ..Strategy::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Identity,
    Cycle,
    Bfs,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds { word: ReducedWord, source: WitnessSource },
    Unknown,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn word(&self) -> Option<&ReducedWord> {
        match self {
            Verdict::Holds { word, .. } => Some(word),
            Verdict::Unknown => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    C,
    CTilde,
}

/// State of `wλ`, `w*μ`, the companions and the singular orbit for the word
/// applied so far.
#[derive(Clone, Debug)]
struct Tracker {
    lambda: Multipartition,
    mu: Option<Multipartition>,
    companions: CompanionSet,
    singulars: Vec<Multipartition>,
    kind: Kind,
}

impl Tracker {
    fn new(lambda: &Multipartition, mu: Option<&Multipartition>, ctx: &Multicharge, kind: Kind) -> Result<Self> {
        let (companions, singulars) = match kind {
            Kind::C => (CompanionSet::default(), Vec::new()),
            Kind::CTilde => (companions_initial(lambda, ctx)?, singulars_in_block(lambda, ctx)),
        };
        Ok(Tracker {
            lambda: lambda.clone(),
            mu: mu.cloned(),
            companions,
            singulars,
            kind,
        })
    }

    fn word(&self) -> &ReducedWord {
        &self.companions.word
    }

    /// Applies `σ_i`; `Ok(None)` if the degree cap is hit.
    fn step(&self, i: i64, ctx: &Multicharge, cap: usize) -> Result<Option<Tracker>> {
        let go = || -> Result<Tracker> {
            let not_defined = |step| FockError::WellDefinedness { residue: i, step };
            let n = self.word().len();
            let lambda = sigma(&self.lambda, ctx, i, cap)?.ok_or_else(|| not_defined(n))?;
            let mu = match &self.mu {
                Some(m) => Some(sigma_star(m, ctx, i, cap)?.ok_or_else(|| not_defined(n))?),
                None => None,
            };
            let (companions, singulars) = match self.kind {
                Kind::C => (
                    CompanionSet {
                        word: self.word().then(i, ctx.e()),
                        elements: Vec::new(),
                    },
                    Vec::new(),
                ),
                Kind::CTilde => {
                    let singulars = self
                        .singulars
                        .iter()
                        .map(|s| sigma(s, ctx, i, cap)?.ok_or_else(|| not_defined(n)))
                        .collect::<Result<Vec<_>>>()?;
                    let excluded: BTreeSet<Multipartition> = singulars.iter().cloned().collect();
                    (companions_step(&self.lambda, &self.companions, i, ctx, &excluded, cap)?, singulars)
                }
            };
            Ok(Tracker {
                lambda,
                mu,
                companions,
                singulars,
                kind: self.kind,
            })
        };
        match go() {
            Ok(t) => Ok(Some(t)),
            Err(FockError::DegreeCapExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn satisfied(&self, ctx: &Multicharge) -> bool {
        let Some(mu) = &self.mu else { return false };
        if mp_preceq(&self.lambda, mu, ctx) {
            return false;
        }
        match self.kind {
            Kind::C => true,
            Kind::CTilde => {
                self.companions.multipartitions().all(|c| !mp_preceq(c, mu, ctx)) && self.singulars.iter().all(|s| !mp_preceq(s, mu, ctx))
            }
        }
    }
}

fn check_pair(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge) -> Result<()> {
    lambda.check_level(ctx)?;
    mu.check_level(ctx)?;
    if !is_singular(lambda, ctx) {
        return Err(FockError::Precondition(format!("{lambda} is not singular")));
    }
    if !is_cosingular(mu, ctx) {
        return Err(FockError::Precondition(format!("{mu} is not cosingular")));
    }
    if !same_block(lambda, mu, ctx) {
        return Err(FockError::Precondition(format!("{lambda} and {mu} lie in different blocks")));
    }
    Ok(())
}

/// Length of an element of the affine symmetric group from its window.
fn affine_length(window: &[i64]) -> i64 {
    let e = window.len() as i64;
    let mut len = 0;
    for a in 0..window.len() {
        for b in a + 1..window.len() {
            len += (window[b] - window[a]).div_euclid(e).abs();
        }
    }
    len
}

/// Window of `w s_i` given the window of `w`.
fn times_simple(window: &[i64], i: i64) -> Vec<i64> {
    let e = window.len() as i64;
    let mut out = window.to_vec();
    let i = i.rem_euclid(e);
    if i == 0 {
        // s_0 swaps positions 0 and 1 of Z, i.e. window slots e and 1
        let (first, last) = (out[0], out[(e - 1) as usize]);
        out[0] = last - e;
        out[(e - 1) as usize] = first + e;
    } else {
        out.swap((i - 1) as usize, i as usize);
    }
    out
}

/// Whether a word, read in application order, is a reduced expression.
pub fn is_reduced(w: &ReducedWord, e: i64) -> bool {
    let mut window: Vec<i64> = (1..=e).collect();
    let mut len = 0;
    for i in w.application_order() {
        window = times_simple(&window, i);
        let next = affine_length(&window);
        if next != len + 1 {
            return false;
        }
        len = next;
    }
    true
}

fn search(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge, strategy: Strategy, kind: Kind) -> Result<Verdict> {
    check_pair(lambda, mu, ctx)?;
    let root = Tracker::new(lambda, Some(mu), ctx, kind)?;
    if root.satisfied(ctx) {
        return Ok(Verdict::Holds {
            word: ReducedWord::identity(),
            source: WitnessSource::Identity,
        });
    }
    for c in 0..ctx.e() {
        let mut t = root.clone();
        for k in 0..strategy.max_cycle as i64 {
            match t.step(c - k, ctx, strategy.cap)? {
                Some(next) => t = next,
                None => break,
            }
            if t.satisfied(ctx) {
                return Ok(Verdict::Holds {
                    word: t.word().clone(),
                    source: WitnessSource::Cycle,
                });
            }
        }
    }
    if strategy.allow_bfs {
        let mut layer = vec![root];
        for _ in 0..strategy.bfs_len {
            let mut next_layer = Vec::new();
            for t in &layer {
                for i in 0..ctx.e() {
                    if t.word().letters().first() == Some(&i) {
                        continue;
                    }
                    let w = t.word().then(i, ctx.e());
                    if kind == Kind::CTilde && !is_reduced(&w, ctx.e()) {
                        continue;
                    }
                    if let Some(n) = t.step(i, ctx, strategy.cap)? {
                        if n.satisfied(ctx) {
                            return Ok(Verdict::Holds {
                                word: n.word().clone(),
                                source: WitnessSource::Bfs,
                            });
                        }
                        next_layer.push(n);
                    }
                }
            }
            layer = next_layer;
        }
    }
    Ok(Verdict::Unknown)
}

/// 𝔠_{λ,μ}: some `w` with `wλ ⋠ w*μ`.
pub fn check_c(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge, strategy: Strategy) -> Result<Verdict> {
    search(lambda, mu, ctx, strategy, Kind::C)
}

/// 𝔠̃_{λ,μ}: one reduced expression separating `w*μ` from `wλ`, from every
/// companion of `wλ` and from `wλ_0` for every singular `λ_0` of the block.
pub fn check_ctilde(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge, strategy: Strategy) -> Result<Verdict> {
    search(lambda, mu, ctx, strategy, Kind::CTilde)
}

/// Re-checks a claimed 𝔠 witness from scratch.
pub fn c_witness_valid(w: &ReducedWord, lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge, cap: usize) -> Result<bool> {
    let (Some(a), Some(b)) = (apply_word(w, lambda, ctx, false, cap)?, apply_word(w, mu, ctx, true, cap)?) else {
        return Ok(false);
    };
    Ok(!mp_preceq(&a, &b, ctx))
}

/// Companion sets along `w`, one per prefix (including the empty one).
pub fn companion_track(
    w: &ReducedWord,
    lambda: &Multipartition,
    ctx: &Multicharge,
    cap: usize,
) -> Result<Vec<(Multipartition, CompanionSet)>> {
    let mut t = Tracker::new(lambda, None, ctx, Kind::CTilde)?;
    let mut out = vec![(t.lambda.clone(), t.companions.clone())];
    for i in w.application_order() {
        t = t.step(i, ctx, cap)?.ok_or(FockError::DegreeCapExceeded { cap, reached: cap + 1 })?;
        out.push((t.lambda.clone(), t.companions.clone()));
    }
    Ok(out)
}

/// Case of a level-two pair in the analysis of `Λ_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level2Case {
    /// Neither component is (co)singular on its own.
    Analyzed,
    /// `λ^{(2)}` singular or `μ^{(2)}` cosingular.
    Easier,
}

#[derive(Clone, Debug, Serialize)]
pub struct Level2Pair {
    pub lambda: String,
    pub mu: String,
    pub case: Level2Case,
    /// `(row, column)` of the lone `-` box in the second component.
    pub b_lambda: Option<(i64, i64)>,
    pub b_mu: Option<(i64, i64)>,
    pub dagger: bool,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub verdict: Verdict,
    pub fallback: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Level2Report {
    pub e: i64,
    pub s: Vec<i64>,
    pub max_degree: usize,
    pub pairs: Vec<Level2Pair>,
    pub analyzed: usize,
    pub analyzed_fallbacks: usize,
    pub easier: usize,
    pub easier_fallbacks: usize,
    pub unknown: usize,
}

/// The single `-` of the (dual) reduced `r`-signature of component `k`, read
/// as a level-one partition with charge `s_k`.
fn lone_minus(m: &Multipartition, ctx: &Multicharge, k: usize, r: i64, dual: bool) -> Option<Cell> {
    let single = Multicharge::new(ctx.e(), vec![ctx.charges()[k]]).expect("valid");
    let part = Multipartition::new(vec![m.component(k).clone()]);
    let sig = signature(&part, &single, r);
    let red = if dual { reduce_dual(&sig.signs()) } else { reduce(&sig.signs()) };
    match red.minus.as_slice() {
        [j] => Some(sig.entries[*j].cell),
        _ => None,
    }
}

fn component_extremal(m: &Multipartition, ctx: &Multicharge, k: usize, dual: bool) -> bool {
    let single = Multicharge::new(ctx.e(), vec![ctx.charges()[k]]).expect("valid");
    let part = Multipartition::new(vec![m.component(k).clone()]);
    if dual {
        is_cosingular(&part, &single)
    } else {
        is_singular(&part, &single)
    }
}

/// The witness `C_{a,b+1}` for an analyzed pair whose nonempty component is
/// `k`; `None` when `b < 0`.
fn closed_form_witness(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge, k: usize) -> (i64, i64, Option<ReducedWord>) {
    let s = ctx.charges()[k];
    let a = s - mu.component(k).len() as i64;
    let b = a - (s - lambda.component(k).len() as i64);
    let w = (b >= 0).then(|| ReducedWord::cycle(a, (b + 1) as usize, ctx.e()));
    (a, b, w)
}

/// Verifies 𝔠 for singular/cosingular same-block pairs of
/// `Λ_0 = {ν : ν^{(1)} = ∅}` with `0 < |λ| ≤ max_degree`.
pub fn check_level2_lambda0(ctx: &Multicharge, max_degree: usize, fallback: Strategy) -> Result<Level2Report> {
    if ctx.level() != 2 {
        return Err(FockError::LevelMismatch {
            expected: 2,
            got: ctx.level(),
        });
    }
    let mut pairs = Vec::new();
    for n in 1..=max_degree {
        let lam0: Vec<Multipartition> = multipartitions_of(2, n).into_iter().filter(|m| m.component(0).is_empty()).collect();
        let singular: Vec<&Multipartition> = lam0.iter().filter(|m| is_singular(m, ctx)).collect();
        let cosingular: Vec<&Multipartition> = lam0.iter().filter(|m| is_cosingular(m, ctx)).collect();
        for lambda in &singular {
            for mu in cosingular.iter().filter(|mu| same_block(lambda, mu, ctx)) {
                pairs.push(level2_pair(lambda, mu, ctx, fallback)?);
            }
        }
    }
    let count = |case: Level2Case, fb: bool| pairs.iter().filter(|p| p.case == case && (!fb || p.fallback)).count();
    Ok(Level2Report {
        e: ctx.e(),
        s: ctx.charges().to_vec(),
        max_degree,
        analyzed: count(Level2Case::Analyzed, false),
        analyzed_fallbacks: count(Level2Case::Analyzed, true),
        easier: count(Level2Case::Easier, false),
        easier_fallbacks: count(Level2Case::Easier, true),
        unknown: pairs.iter().filter(|p| !p.verdict.holds()).count(),
        pairs,
    })
}

fn level2_pair(lambda: &Multipartition, mu: &Multipartition, ctx: &Multicharge, fallback: Strategy) -> Result<Level2Pair> {
    let r = ctx.residue(ctx.charges()[0]);
    let lb = lone_minus(lambda, ctx, 1, r, false);
    let mb = lone_minus(mu, ctx, 1, r, true);
    let analyzed = !component_extremal(lambda, ctx, 1, false) && !component_extremal(mu, ctx, 1, true) && lb.is_some() && mb.is_some();
    let mut out = Level2Pair {
        lambda: lambda.to_string(),
        mu: mu.to_string(),
        case: if analyzed { Level2Case::Analyzed } else { Level2Case::Easier },
        b_lambda: lb.map(|c| (c.row, c.col)),
        b_mu: mb.map(|c| (c.row, c.col)),
        dagger: false,
        a: None,
        b: None,
        verdict: Verdict::Unknown,
        fallback: false,
    };
    if analyzed {
        let (xl, xm) = (lb.expect("analyzed").row, mb.expect("analyzed").row);
        // frame where x_μ > x_λ; † swaps the roles of λ and μ
        let (fl, fm, fctx, k) = if xm > xl {
            (lambda.clone(), mu.clone(), ctx.clone(), 1)
        } else {
            out.dagger = true;
            let (md, cd) = mu.dagger(ctx);
            let (ld, _) = lambda.dagger(ctx);
            (md, ld, cd, 0)
        };
        let (a, b, w) = closed_form_witness(&fl, &fm, &fctx, k);
        out.a = Some(a);
        out.b = Some(b);
        let candidate = match w {
            Some(w) if out.dagger => w.negated(ctx.e()),
            Some(w) => w,
            None => ReducedWord::identity(),
        };
        if c_witness_valid(&candidate, lambda, mu, ctx, fallback.cap)? {
            out.verdict = Verdict::Holds {
                word: candidate,
                source: WitnessSource::ClosedForm,
            };
            return Ok(out);
        }
    }
    out.fallback = true;
    out.verdict = check_c(lambda, mu, ctx, fallback)?;
    Ok(out)
}
