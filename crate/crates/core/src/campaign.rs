//! Campaign plumbing shared by the CLI: configuration, versioned reports,
//! crystal graph export and the golden example replay.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::conditions::{check_ctilde, check_level2_lambda0, companion_track, Level2Case, Strategy};
use crate::crystal::{self, f_star, f_tilde, is_cosingular, is_singular, parse_signs, reduce, reduce_dual, same_block};
use crate::error::{FockError, Result};
use crate::hierarchy::{family_of, splitting_classify, LevelOrder, SplitClass};
use crate::multipartition::{box_leq, multipartitions_of, multipartitions_up_to, Cell, Multicharge, Multipartition, Partition};
use crate::order::mp_preceq;
use crate::virtual_mp::{a_empty, descent_step, Root, ZsElement};
use crate::weyl::{apply_word, level1_dual_cycle_closed_form, nu_n, par1_membership, special_nu, ReducedWord};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Dot,
    Tsv,
}

impl FromStr for OutputFormat {
    type Err = FockError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            "tsv" => Ok(OutputFormat::Tsv),
            _ => Err(FockError::Parse(format!("format: expected json, dot or tsv, got '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionKind {
    C,
    CTilde,
}

impl FromStr for ConditionKind {
    type Err = FockError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(ConditionKind::C),
            "Ctilde" | "ctilde" | "CTilde" => Ok(ConditionKind::CTilde),
            _ => Err(FockError::Parse(format!("check: expected C or Ctilde, got '{s}'"))),
        }
    }
}

/// Word length and degree budgets for the condition search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_len: usize,
    pub max_degree: usize,
}

impl FromStr for Budget {
    type Err = FockError;
    /// `L,N`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || FockError::Parse(format!("budget: expected L,N, got '{s}'"));
        let (l, n) = s.split_once(',').ok_or_else(bad)?;
        Ok(Budget {
            max_len: l.trim().parse().map_err(|_| bad())?,
            max_degree: n.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl Budget {
    pub fn strategy(&self) -> Strategy {
        Strategy {
            max_cycle: self.max_len.max(Strategy::default().max_cycle),
            bfs_len: self.max_len,
            allow_bfs: true,
            cap: self.max_degree,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignConfig {
    pub e: i64,
    pub s: Vec<i64>,
    pub min_degree: usize,
    pub max_degree: usize,
    pub residues: Vec<i64>,
    pub condition: Option<ConditionKind>,
    pub budget: Budget,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub threads: Option<usize>,
    pub seed: u64,
}

impl CampaignConfig {
    pub fn new(e: i64, s: Vec<i64>, max_degree: usize) -> Self {
        CampaignConfig {
            e,
            s,
            min_degree: 0,
            max_degree,
            residues: Vec::new(),
            condition: None,
            budget: Budget {
                max_len: 6,
                max_degree: 400,
            },
            output: None,
            format: OutputFormat::Json,
            threads: None,
            seed: 0,
        }
    }

    pub fn multicharge(&self) -> Result<Multicharge> {
        Multicharge::new(self.e, self.s.clone())
    }

    /// Residues to visit; all of `Z/e` when none were requested.
    pub fn residue_list(&self) -> Vec<i64> {
        if self.residues.is_empty() {
            (0..self.e).collect()
        } else {
            self.residues
                .iter()
                .map(|r| r.rem_euclid(self.e))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.multicharge()?;
        if self.budget.max_len == 0 || self.budget.max_degree == 0 {
            return Err(FockError::Parse("budget: both bounds must be positive".into()));
        }
        if self.min_degree > self.max_degree {
            return Err(FockError::Parse(format!(
                "min-degree: {} exceeds max-degree {}",
                self.min_degree, self.max_degree
            )));
        }
        if self.threads == Some(0) {
            return Err(FockError::Parse("threads: must be positive".into()));
        }
        Ok(())
    }
}

/// Envelope for every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: u32,
    pub kind: String,
    pub passed: bool,
    /// Set when some verdict is unknown; does not affect `passed`.
    pub unknown: bool,
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(kind: &str, passed: bool, unknown: bool, body: T) -> Self {
        Report {
            schema: SCHEMA,
            kind: kind.to_string(),
            passed,
            unknown,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Caps the global rayon pool at `FOCK_THREADS` (or `threads`).
pub fn init_thread_pool(threads: Option<usize>) {
    let from_env = std::env::var("FOCK_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    if let Some(n) = threads.or(from_env).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationRow {
    pub mp: String,
    pub size: usize,
    pub singular: bool,
    pub cosingular: bool,
    pub residue_counts: Vec<usize>,
}

pub fn enumerate(ctx: &Multicharge, min_degree: usize, max_degree: usize) -> Vec<EnumerationRow> {
    (min_degree..=max_degree)
        .flat_map(|n| multipartitions_of(ctx.level(), n))
        .map(|m| EnumerationRow {
            size: m.size(),
            singular: is_singular(&m, ctx),
            cosingular: is_cosingular(&m, ctx),
            residue_counts: m.residue_counts(ctx),
            mp: m.to_string(),
        })
        .collect()
}

pub fn enumeration_tsv(rows: &[EnumerationRow]) -> String {
    let mut out = String::from("mp\tsize\tsingular\tcosingular\tresidue_counts\n");
    for r in rows {
        let counts: Vec<String> = r.residue_counts.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", r.mp, r.size, r.singular, r.cosingular, counts.join(","));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Usual,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub residue: i64,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrystalGraph {
    pub e: i64,
    pub s: Vec<i64>,
    pub max_degree: usize,
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

/// `f̃_i` and `f̃*_i` edges inside `P_ℓ(≤ max_degree)`.
pub fn crystal_graph(ctx: &Multicharge, max_degree: usize, dual: bool) -> CrystalGraph {
    let nodes = multipartitions_up_to(ctx.level(), max_degree);
    let mut edges = Vec::new();
    for m in nodes.iter().filter(|m| m.size() < max_degree) {
        for i in 0..ctx.e() {
            if let Some(t) = f_tilde(m, ctx, i) {
                edges.push(Edge {
                    from: m.to_string(),
                    to: t.to_string(),
                    residue: i,
                    kind: EdgeKind::Usual,
                });
            }
            if dual {
                if let Some(t) = f_star(m, ctx, i) {
                    edges.push(Edge {
                        from: m.to_string(),
                        to: t.to_string(),
                        residue: i,
                        kind: EdgeKind::Dual,
                    });
                }
            }
        }
    }
    CrystalGraph {
        e: ctx.e(),
        s: ctx.charges().to_vec(),
        max_degree,
        nodes: nodes.iter().map(|m| m.to_string()).collect(),
        edges,
    }
}

impl CrystalGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph crystal {\n");
        for n in &self.nodes {
            let _ = writeln!(out, "  \"{n}\";");
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Usual => "solid",
                EdgeKind::Dual => "dashed",
            };
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\", style={style}];", e.from, e.to, e.residue);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldenResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn golden(name: &str, run: impl FnOnce() -> Result<(bool, String)>) -> GoldenResult {
    let (passed, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
    GoldenResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn mc(e: i64, s: &[i64]) -> Result<Multicharge> {
    Multicharge::new(e, s.to_vec())
}

fn mp(s: &str) -> Result<Multipartition> {
    s.parse()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// Replays the worked examples of the source text.
pub fn replay_examples() -> Vec<GoldenResult> {
    vec![
        golden("box order: equal content, smaller component is smaller", || {
            let ctx = mc(3, &[0, 0])?;
            let (b, b2) = (Cell::new(1, 1, 0), Cell::new(1, 1, 1));
            Ok((box_leq(&b, &b2, &ctx) && !box_leq(&b2, &b, &ctx), format!("{b} vs {b2}")))
        }),
        golden("A_empty for s=(3)", || {
            let a = a_empty(&mc(2, &[3])?)?;
            Ok((a.entries() == [3, 2, 1], format!("{:?}", a.entries())))
        }),
        golden("no descent when a_i - a_j - ne <= 0", || {
            let ctx = mc(2, &[1, 1])?;
            let z = ZsElement::new(vec![3, 0], &ctx)?;
            let mut checked = 0;
            for n in 0..=3 {
                let beta = Root { i: 1, j: 2, n };
                if 3 - 2 * n <= 0 {
                    checked += 1;
                    if descent_step(&z, beta, &ctx)?.is_some() {
                        return Ok((false, format!("descent found for n={n}")));
                    }
                }
            }
            Ok((checked > 0, format!("{checked} roots checked")))
        }),
        golden("reduction of +++-++---", || {
            let t = parse_signs("+++-++---").expect("signs");
            let (r, d) = (reduce(&t), reduce_dual(&t));
            let got = (one_based(&r.plus), one_based(&r.minus), one_based(&d.plus), one_based(&d.minus));
            let ok = got == (vec![1, 2, 3, 6], vec![7, 8, 9], vec![1], vec![]);
            Ok((ok, format!("{got:?}")))
        }),
        golden("marked pairs of -+--++", || {
            let t = parse_signs("-+--++").expect("signs");
            let mut pairs: Vec<(usize, usize)> = reduce(&t).marked_pairs.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
            pairs.sort();
            Ok((pairs == [(1, 2), (3, 6), (4, 5)], format!("{pairs:?}")))
        }),
        golden("singular one-box multipartitions for e=3, s=(0,0,4,1)", || {
            let ctx = mc(3, &[0, 0, 4, 1])?;
            let got: BTreeSet<String> = multipartitions_of(4, 1)
                .into_iter()
                .filter(|m| is_singular(m, &ctx))
                .map(|m| m.to_string())
                .collect();
            let want: BTreeSet<String> = ["-|1|-|-", "-|-|1|-"].iter().map(|s| s.to_string()).collect();
            Ok((got == want, format!("{got:?}")))
        }),
        golden("e=2: (2) singular and (1,1) cosingular", || {
            let ctx = mc(2, &[0])?;
            Ok((is_singular(&mp("2")?, &ctx) && is_cosingular(&mp("1.1")?, &ctx), String::new()))
        }),
        golden("nu_n values", || {
            let got = [nu_n(2, 3), nu_n(4, 3), nu_n(3, 2)];
            let want = [
                Partition::new(vec![1, 1])?,
                Partition::new(vec![2, 2, 1, 1])?,
                Partition::new(vec![3, 2, 1])?,
            ];
            Ok((got == want, format!("{} {} {}", got[0], got[1], got[2])))
        }),
        golden("C_{0,n} of the empty partition is nu_n", || {
            for e in 2..=4 {
                let ctx = mc(e, &[0])?;
                for n in 0..=8 {
                    let got = apply_word(&ReducedWord::cycle(0, n, e), &Multipartition::empty(1), &ctx, false, 200)?;
                    let want = Multipartition::new(vec![nu_n(n, e)]);
                    if got.as_ref() != Some(&want) {
                        return Ok((false, format!("e={e} n={n}: {got:?}")));
                    }
                }
            }
            Ok((true, "e in 2..=4, n <= 8".into()))
        }),
        golden("dual cycles on cosingular partitions", || {
            for e in 2..=4 {
                let ctx = mc(e, &[0])?;
                for mu in multipartitions_up_to(1, 8).into_iter().filter(|m| is_cosingular(m, &ctx)) {
                    let cols = mu.component(0).row(1) as usize;
                    for n in cols..=cols + 4 {
                        let got = apply_word(&ReducedWord::cycle(0, n, e), &mu, &ctx, true, 200)?;
                        let want = level1_dual_cycle_closed_form(&mu, &ctx, n)?;
                        if got.as_ref() != Some(&want) {
                            return Ok((false, format!("e={e} mu={mu} n={n}")));
                        }
                    }
                }
            }
            Ok((true, "e in 2..=4, |mu| <= 8".into()))
        }),
        golden("special nu for s=(2,3,0,1)", || {
            let nu = special_nu(&mc(2, &[2, 3, 0, 1])?)?;
            Ok((nu.to_string() == "-|-|2|-", nu.to_string()))
        }),
        golden("special nu for s=(2,3,1,0)", || {
            let nu = special_nu(&mc(2, &[2, 3, 1, 0])?)?;
            Ok((nu.to_string() == "-|-|1|1", nu.to_string()))
        }),
        golden("special nu lies in Par^1", || {
            for s in [[2, 3, 0, 1], [2, 3, 1, 0]] {
                let ctx = mc(2, &s)?;
                if !par1_membership(&special_nu(&ctx)?, &ctx) {
                    return Ok((false, format!("s={s:?}")));
                }
            }
            Ok((true, String::new()))
        }),
        golden("family members classify by their rightmost slot", || {
            let ctx = mc(3, &[0, 1])?;
            let mut checked = 0;
            for lambda in multipartitions_up_to(2, 5) {
                for i in 0..3 {
                    let fam = family_of(&lambda, &ctx, i);
                    for m in fam.members(5) {
                        let t = crate::hierarchy::sigma_a_inv(&m, &ctx, i);
                        let want = match t.last() {
                            Some(crystal::Sign::Plus) => SplitClass::Plus,
                            Some(crystal::Sign::Minus) => SplitClass::Minus,
                            None => continue,
                        };
                        checked += 1;
                        if splitting_classify(&fam, &m, &ctx, LevelOrder::default()) != want {
                            return Ok((false, format!("{m} in family of {lambda}, residue {i}")));
                        }
                    }
                }
            }
            Ok((checked > 0, format!("{checked} members")))
        }),
        golden("companions of C_{0,n}(e) have first row at least ceil(n/(e-1))", || {
            let mut checked = 0;
            for e in 2..=3i64 {
                let ctx = mc(e, &[0])?;
                let lambda = Multipartition::new(vec![Partition::new(vec![e as u32])?]);
                for n in 1..=10usize {
                    let track = companion_track(&ReducedWord::cycle(0, n, e), &lambda, &ctx, 200)?;
                    let (_, last) = track.last().expect("nonempty track");
                    let bound = n.div_ceil((e - 1) as usize) as u32;
                    for c in last.multipartitions() {
                        checked += 1;
                        if c.component(0).row(1) < bound {
                            return Ok((false, format!("e={e} n={n}: {c}")));
                        }
                    }
                }
            }
            Ok((checked > 0, format!("{checked} companions")))
        }),
        golden("level-one thresholds: Ctilde holds above r", || {
            let mut pairs = 0;
            for (e, r) in [(3i64, 0usize), (2, 2)] {
                let ctx = mc(e, &[0])?;
                for n in r + 1..=8 {
                    let all = multipartitions_of(1, n);
                    for lambda in all.iter().filter(|m| is_singular(m, &ctx)) {
                        for mu in all.iter().filter(|m| is_cosingular(m, &ctx) && same_block(lambda, m, &ctx)) {
                            pairs += 1;
                            if !check_ctilde(lambda, mu, &ctx, Strategy::cycles_only(40))?.holds() {
                                return Ok((false, format!("e={e}: {lambda} vs {mu}")));
                            }
                        }
                    }
                }
            }
            Ok((pairs > 0, format!("{pairs} pairs")))
        }),
        golden("level-two lone boxes sit on the right side of s_1", || {
            let mut checked = 0;
            for (e, s) in level2_grid() {
                let ctx = mc(e, &s)?;
                let report = check_level2_lambda0(&ctx, 6, Strategy::default())?;
                for p in report.pairs.iter().filter(|p| p.case == Level2Case::Analyzed) {
                    let cont = |(row, col): (i64, i64)| col - row + s[1];
                    let (bl, bm) = (p.b_lambda.expect("analyzed"), p.b_mu.expect("analyzed"));
                    checked += 1;
                    if cont(bl) < s[0] || cont(bm) >= s[0] {
                        return Ok((false, format!("s={s:?}: {} vs {}", p.lambda, p.mu)));
                    }
                }
            }
            Ok((checked > 0, format!("{checked} pairs")))
        }),
        golden("level-two pairs with b < 0 are separated by the identity", || {
            let mut checked = 0;
            for (e, s) in level2_grid() {
                let ctx = mc(e, &s)?;
                let report = check_level2_lambda0(&ctx, 6, Strategy::default())?;
                for p in report.pairs.iter().filter(|p| p.b.is_some_and(|b| b < 0)) {
                    checked += 1;
                    if mp_preceq(&mp(&p.lambda)?, &mp(&p.mu)?, &ctx) {
                        return Ok((false, format!("s={s:?}: {} vs {}", p.lambda, p.mu)));
                    }
                }
            }
            Ok((true, format!("{checked} pairs")))
        }),
    ]
}

/// Multicharges `(s_1, s_2)` with `s_1 - s_2 ∈ eZ` used by the level-two campaign.
pub fn level2_grid() -> Vec<(i64, Vec<i64>)> {
    let mut out = Vec::new();
    for e in [2i64, 3] {
        for s2 in 0..=1 {
            for k in [-1i64, 0, 1, 2] {
                out.push((e, vec![s2 + k * e, s2]));
            }
        }
    }
    out
}

/// Outcome of an exhaustive property sweep.
#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_FAILURES: usize = 20;

fn sweep<F>(name: &str, items: &[Multipartition], check: F) -> CheckSummary
where
    F: Fn(&Multipartition) -> (usize, Vec<String>) + Sync,
{
    use rayon::prelude::*;
    let rows: Vec<(usize, Vec<String>)> = items.par_iter().map(&check).collect();
    let checked = rows.iter().map(|r| r.0).sum();
    let failures = rows.into_iter().flat_map(|r| r.1).take(MAX_FAILURES).collect();
    CheckSummary {
        name: name.to_string(),
        checked,
        failures,
    }
}

/// `[e_i, f_j] = δ_ij h_i` on basis vectors of degree `< max_degree`.
pub fn verify_commutators(ctx: &Multicharge, max_degree: usize) -> CheckSummary {
    use crate::k0::{e_op, f_op, h_eigenvalue, FockVector};
    let items = multipartitions_up_to(ctx.level(), max_degree.saturating_sub(1));
    sweep("commutators", &items, |m| {
        let v = FockVector::basis(m.clone());
        let mut fails = Vec::new();
        let mut n = 0;
        for i in 0..ctx.e() {
            for j in 0..ctx.e() {
                n += 1;
                let ef = e_op(&f_op(&v, ctx, j, max_degree).expect("within cap"), ctx, i);
                let fe = f_op(&e_op(&v, ctx, i), ctx, j, max_degree).expect("within cap");
                let want = if i == j {
                    v.scale(h_eigenvalue(m, ctx, i))
                } else {
                    FockVector::zero()
                };
                if &ef - &fe != want {
                    fails.push(format!("[e_{i}, f_{j}] on {m}"));
                }
            }
        }
        (n, fails)
    })
}

/// `(ẽ*_i λ)† = ẽ_{-i}(λ†)` and `(f̃*_i λ)† = f̃_{-i}(λ†)`.
pub fn verify_duality(ctx: &Multicharge, max_degree: usize) -> CheckSummary {
    use crate::crystal::e_star;
    let items = multipartitions_up_to(ctx.level(), max_degree);
    let dctx = ctx.dagger();
    sweep("duality", &items, |m| {
        let md = m.dagger_shape();
        let mut fails = Vec::new();
        for i in 0..ctx.e() {
            let lhs_e = e_star(m, ctx, i).map(|x| x.dagger_shape());
            let lhs_f = f_star(m, ctx, i).map(|x| x.dagger_shape());
            if lhs_e != crystal::e_tilde(&md, &dctx, -i) {
                fails.push(format!("e*_{i} on {m}"));
            }
            if lhs_f != f_tilde(&md, &dctx, -i) {
                fails.push(format!("f*_{i} on {m}"));
            }
        }
        (2 * ctx.e() as usize, fails)
    })
}
