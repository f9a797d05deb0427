use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fock::campaign::{
    crystal_graph, enumerate, enumeration_tsv, init_thread_pool, level2_grid, replay_examples, verify_commutators, verify_duality, Budget,
    CampaignConfig, ConditionKind, OutputFormat, Report,
};
use fock::conditions::{check_c, check_ctilde, check_level2_lambda0, Strategy, Verdict};
use fock::crystal::{is_cosingular, is_singular, same_block};
use fock::hierarchy::{verify_splitting_axioms, LevelOrder};
use fock::k0::{operator_matrix, Operator};
use fock::multipartition::{multipartitions_of, MultipartitionJson};
use fock::virtual_mp::{descent_step, linkage_verdict, truncation_embed, LinkageWindow, Root, ZsJson};
use fock::weyl::{apply_word, ReducedWord};
use fock::{FockError, Multicharge, Multipartition};

#[derive(Parser)]
#[command(name = "fock", version, about = "Crystals and straightening on higher level Fock spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ChargeArgs {
    #[arg(short = 'e', long, default_value_t = 2)]
    e: i64,
    /// Comma-separated multicharge, e.g. `0,1`.
    #[arg(short = 's', long, default_value = "0", allow_hyphen_values = true)]
    s: String,
}

#[derive(Args, Clone)]
struct OutArgs {
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Blocks,
    Diagonal,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Hierarchy,
    Commutators,
    Duality,
    Thresholds,
    Level2,
}

#[derive(Subcommand)]
enum Command {
    /// List multipartitions with their singularity flags.
    Enumerate {
        #[command(flatten)]
        charge: ChargeArgs,
        #[arg(long, default_value_t = 0)]
        min_degree: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Crystal graph export.
    Crystal {
        #[command(flatten)]
        charge: ChargeArgs,
        #[arg(long)]
        graph: bool,
        /// Include the dual edges.
        #[arg(long)]
        dual: bool,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Elements of Z^s: descent steps, linkage and truncation.
    Virtual {
        /// ZsElement JSON (inline or path) to descend from.
        #[arg(long)]
        descent: Option<String>,
        /// Root `i,j,n` for `--descent`.
        #[arg(long, allow_hyphen_values = true)]
        root: Option<String>,
        /// Two ZsElements `LOWER UPPER`.
        #[arg(long, num_args = 2)]
        linkage: Option<Vec<String>>,
        /// Multipartition JSON (inline or path) to embed.
        #[arg(long)]
        embed: Option<String>,
        #[arg(long, default_value_t = 0)]
        rows: usize,
    },
    /// Apply a cycle `C_{j,n}` to a multipartition.
    Weyl {
        /// `j,n`.
        #[arg(long, allow_hyphen_values = true)]
        cycle: String,
        /// Multipartition JSON (inline or path).
        #[arg(long)]
        apply: String,
        #[arg(long)]
        dual: bool,
        #[arg(long, default_value_t = 400)]
        cap: usize,
    },
    /// Splitting axioms for one residue.
    Hierarchy {
        #[command(flatten)]
        charge: ChargeArgs,
        #[arg(long)]
        verify: bool,
        #[arg(long, allow_hyphen_values = true)]
        residue: Option<i64>,
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
        #[arg(long, value_enum, default_value = "blocks")]
        order: OrderArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Semi-decision of the separation conditions.
    Conditions {
        #[command(flatten)]
        charge: ChargeArgs,
        /// `C` or `Ctilde`.
        #[arg(long)]
        check: Option<String>,
        /// Degree of the pairs to check, or an explicit pair `LAMBDA:MU`.
        #[arg(long)]
        block: Option<String>,
        /// `L,N`: word length and degree cap.
        #[arg(long, default_value = "6,400")]
        budget: String,
        /// Level-two campaign on multipartitions with empty first component.
        #[arg(long)]
        level2: bool,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sparse matrices of the Chevalley operators.
    K0 {
        #[command(flatten)]
        charge: ChargeArgs,
        /// `f,i` or `e,i`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Replay the worked examples.
    ReplayPaper {
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive verification campaigns.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        #[command(flatten)]
        charge: ChargeArgs,
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        residue: Option<i64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

enum Failure {
    Usage(String),
    Check,
}

impl From<FockError> for Failure {
    fn from(e: FockError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn usage(field: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{field}: {msg}"))
}

fn parse_list(field: &str, s: &str) -> std::result::Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| usage(field, format!("expected integers, got '{s}'")))
        })
        .collect()
}

fn config(charge: &ChargeArgs, max_degree: usize, out: &OutArgs) -> std::result::Result<CampaignConfig, Failure> {
    let mut cfg = CampaignConfig::new(charge.e, parse_list("s", &charge.s)?, max_degree);
    cfg.output = out.output.clone();
    cfg.format = out.format.parse()?;
    cfg.seed = out.seed;
    cfg.validate()?;
    Ok(cfg)
}

fn read_json_arg(field: &str, arg: &str) -> std::result::Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(field, format!("{arg}: {e}")))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(field: &str, arg: &str) -> std::result::Result<T, Failure> {
    let text = read_json_arg(field, arg)?;
    serde_json::from_str(&text).map_err(|e| usage(field, e))
}

fn emit(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| usage("output", format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(usage("output", e)),
                _ => Ok(()),
            }
        }
    }
}

fn emit_report<T: Serialize>(report: &Report<T>, output: Option<&Path>) -> Outcome {
    emit(&report.to_json(), output)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct PairReport {
    lambda: String,
    mu: String,
    verdict: Verdict,
    wall_ms: u128,
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Enumerate {
            charge,
            min_degree,
            max_degree,
            out,
        } => {
            let mut cfg = config(&charge, max_degree, &out)?;
            cfg.min_degree = min_degree;
            cfg.validate()?;
            let rows = enumerate(&cfg.multicharge()?, cfg.min_degree, cfg.max_degree);
            match cfg.format {
                OutputFormat::Tsv => emit(&enumeration_tsv(&rows), cfg.output.as_deref()),
                OutputFormat::Json => emit_report(&Report::new("enumerate", true, false, rows), cfg.output.as_deref()),
                OutputFormat::Dot => Err(usage("format", "enumerate supports json or tsv")),
            }
        }
        Command::Crystal {
            charge,
            graph,
            dual,
            max_degree,
            out,
        } => {
            if !graph {
                return Err(usage("graph", "nothing to do without --graph"));
            }
            let mut cfg = config(&charge, max_degree, &out)?;
            if cfg.format == OutputFormat::Json && cfg.output.as_ref().is_some_and(|p| p.extension().is_some_and(|x| x == "dot")) {
                cfg.format = OutputFormat::Dot;
            }
            let g = crystal_graph(&cfg.multicharge()?, max_degree, dual);
            match cfg.format {
                OutputFormat::Dot => emit(&g.to_dot(), cfg.output.as_deref()),
                OutputFormat::Json => emit_report(&Report::new("crystal_graph", true, false, g), cfg.output.as_deref()),
                OutputFormat::Tsv => Err(usage("format", "crystal graphs support json or dot")),
            }
        }
        Command::Virtual {
            descent,
            root,
            linkage,
            embed,
            rows,
        } => {
            if let Some(d) = descent {
                let (z, ctx) = parse_json::<ZsJson>("descent", &d)?.decode()?;
                let r = parse_list("root", root.as_deref().ok_or_else(|| usage("root", "required with --descent"))?)?;
                let [i, j, n] = r[..] else {
                    return Err(usage("root", "expected i,j,n"));
                };
                if i < 1 || j < 1 {
                    return Err(usage("root", "indices are 1-based"));
                }
                let beta = Root {
                    i: i as usize,
                    j: j as usize,
                    n,
                };
                let next = descent_step(&z, beta, &ctx)?.map(|x| ZsJson::encode(&x, &ctx));
                return emit_report(&Report::new("descent", true, false, next), None);
            }
            if let Some(pair) = linkage {
                let (lo, ctx) = parse_json::<ZsJson>("linkage", &pair[0])?.decode()?;
                let (hi, ctx2) = parse_json::<ZsJson>("linkage", &pair[1])?.decode()?;
                if ctx != ctx2 {
                    return Err(usage("linkage", "both elements need the same multicharge"));
                }
                let window = LinkageWindow::default_for(&hi, ctx.e());
                let v = linkage_verdict(&lo, &hi, &ctx, window)?;
                let unknown = v == fock::virtual_mp::LinkageVerdict::UnknownWithinWindow;
                return emit_report(&Report::new("linkage", true, unknown, v), None);
            }
            if let Some(m) = embed {
                let (lambda, ctx) = parse_json::<MultipartitionJson>("embed", &m)?.decode()?;
                let z = truncation_embed(&lambda, &ctx, rows)?;
                return emit_report(&Report::new("embed", true, false, ZsJson::encode(&z, &ctx)), None);
            }
            Err(usage("virtual", "one of --descent, --linkage, --embed is required"))
        }
        Command::Weyl { cycle, apply, dual, cap } => {
            let c = parse_list("cycle", &cycle)?;
            let [j, n] = c[..] else {
                return Err(usage("cycle", "expected j,n"));
            };
            if n < 0 {
                return Err(usage("cycle", "n must be non-negative"));
            }
            let (lambda, ctx) = parse_json::<MultipartitionJson>("apply", &apply)?.decode()?;
            let w = ReducedWord::cycle(j, n as usize, ctx.e());
            let image = apply_word(&w, &lambda, &ctx, dual, cap)?.map(|m| m.to_json(&ctx));
            emit_report(&Report::new("weyl", true, false, image), None)
        }
        Command::Hierarchy {
            charge,
            verify,
            residue,
            max_degree,
            order,
            out,
        } => {
            if !verify {
                return Err(usage("verify", "nothing to do without --verify"));
            }
            let cfg = config(&charge, max_degree, &out)?;
            let order = match order {
                OrderArg::Blocks => LevelOrder::Blocks,
                OrderArg::Diagonal => LevelOrder::Diagonal,
            };
            hierarchy_report(&cfg, residue, order)
        }
        Command::Conditions {
            charge,
            check,
            block,
            budget,
            level2,
            max_degree,
            out,
        } => {
            let mut cfg = config(&charge, max_degree, &out)?;
            cfg.budget = budget.parse::<Budget>()?;
            cfg.condition = check.as_deref().map(str::parse).transpose()?;
            cfg.validate()?;
            let ctx = cfg.multicharge()?;
            if level2 {
                let r = check_level2_lambda0(&ctx, max_degree, cfg.budget.strategy())?;
                let passed = r.unknown == 0 && r.analyzed_fallbacks == 0;
                return emit_report(&Report::new("level2", passed, r.unknown > 0, r), cfg.output.as_deref());
            }
            let kind = cfg.condition.ok_or_else(|| usage("check", "required unless --level2"))?;
            let block = block.ok_or_else(|| usage("block", "required with --check"))?;
            conditions_report(&ctx, kind, &block, cfg.budget.strategy(), cfg.output.as_deref())
        }
        Command::K0 {
            charge,
            matrix,
            degree,
            out,
        } => {
            let cfg = config(&charge, degree, &out)?;
            let (op, i) = matrix.split_once(',').ok_or_else(|| usage("matrix", "expected f,i or e,i"))?;
            let op = match op.trim() {
                "f" => Operator::F,
                "e" => Operator::E,
                other => return Err(usage("matrix", format!("unknown operator '{other}'"))),
            };
            let i: i64 = i.trim().parse().map_err(|_| usage("matrix", "residue must be an integer"))?;
            let t = operator_matrix(&cfg.multicharge()?, op, i, degree);
            emit_report(&Report::new("k0_matrix", true, false, t), cfg.output.as_deref())
        }
        Command::ReplayPaper { out } => {
            let results = replay_examples();
            for g in &results {
                eprintln!("{} {}", if g.passed { "PASS" } else { "FAIL" }, g.name);
            }
            let passed = results.iter().all(|g| g.passed);
            emit_report(&Report::new("replay_examples", passed, false, results), out.output.as_deref())
        }
        Command::Verify {
            kind,
            charge,
            max_degree,
            residue,
            out,
        } => {
            let cfg = config(&charge, max_degree, &out)?;
            let ctx = cfg.multicharge()?;
            let dest = cfg.output.as_deref();
            match kind {
                VerifyKind::Hierarchy => hierarchy_report(&cfg, residue, LevelOrder::Blocks),
                VerifyKind::Commutators => {
                    let r = verify_commutators(&ctx, max_degree);
                    emit_report(&Report::new("commutators", r.passed(), false, r), dest)
                }
                VerifyKind::Duality => {
                    let r = verify_duality(&ctx, max_degree);
                    emit_report(&Report::new("duality", r.passed(), false, r), dest)
                }
                VerifyKind::Thresholds => thresholds_report(&ctx, max_degree, dest),
                VerifyKind::Level2 => {
                    let mut reports = Vec::new();
                    for (e, s) in level2_grid().into_iter().filter(|(e, _)| *e == ctx.e()) {
                        let c = Multicharge::new(e, s)?;
                        reports.push(check_level2_lambda0(&c, max_degree, Strategy::default())?);
                    }
                    let passed = reports.iter().all(|r| r.unknown == 0 && r.analyzed_fallbacks == 0);
                    let unknown = reports.iter().any(|r| r.unknown > 0);
                    emit_report(&Report::new("level2", passed, unknown, reports), dest)
                }
            }
        }
    }
}

fn hierarchy_report(cfg: &CampaignConfig, residue: Option<i64>, order: LevelOrder) -> Outcome {
    use rayon::prelude::*;
    let ctx = cfg.multicharge()?;
    let residues = match residue {
        Some(i) => vec![ctx.residue(i)],
        None => cfg.residue_list(),
    };
    let reports: Vec<_> = residues
        .par_iter()
        .map(|&i| verify_splitting_axioms(&ctx, i, cfg.max_degree, order))
        .collect();
    let passed = reports.iter().all(|r| r.all_passed());
    emit_report(&Report::new("hierarchy", passed, false, reports), cfg.output.as_deref())
}

fn conditions_report(ctx: &Multicharge, kind: ConditionKind, block: &str, strategy: Strategy, output: Option<&Path>) -> Outcome {
    use rayon::prelude::*;
    let pairs: Vec<(Multipartition, Multipartition)> = if let Some((l, m)) = block.split_once(':') {
        let (lambda, mu): (Multipartition, Multipartition) = (l.parse()?, m.parse()?);
        lambda.check_level(ctx)?;
        mu.check_level(ctx)?;
        vec![(lambda, mu)]
    } else {
        let n: usize = block
            .parse()
            .map_err(|_| usage("block", format!("expected a degree or LAMBDA:MU, got '{block}'")))?;
        let all = multipartitions_of(ctx.level(), n);
        let mut out = Vec::new();
        for lambda in all.iter().filter(|m| is_singular(m, ctx)) {
            for mu in all.iter().filter(|m| is_cosingular(m, ctx) && same_block(lambda, m, ctx)) {
                out.push((lambda.clone(), mu.clone()));
            }
        }
        out
    };
    let rows: Vec<fock::Result<PairReport>> = pairs
        .par_iter()
        .map(|(lambda, mu)| {
            let start = Instant::now();
            let verdict = match kind {
                ConditionKind::C => check_c(lambda, mu, ctx, strategy)?,
                ConditionKind::CTilde => check_ctilde(lambda, mu, ctx, strategy)?,
            };
            Ok(PairReport {
                lambda: lambda.to_string(),
                mu: mu.to_string(),
                verdict,
                wall_ms: start.elapsed().as_millis(),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<fock::Result<Vec<_>>>()?;
    let unknown = rows.iter().any(|r| !r.verdict.holds());
    emit_report(&Report::new("conditions", true, unknown, rows), output)
}

fn thresholds_report(ctx: &Multicharge, max_degree: usize, output: Option<&Path>) -> Outcome {
    if ctx.level() != 1 {
        return Err(usage("s", "threshold campaign is level one"));
    }
    let r = if ctx.e() == 2 { 2 } else { 0 };
    let mut rows = Vec::new();
    for n in r + 1..=max_degree {
        let all = multipartitions_of(1, n);
        for lambda in all.iter().filter(|m| is_singular(m, ctx)) {
            for mu in all.iter().filter(|m| is_cosingular(m, ctx) && same_block(lambda, m, ctx)) {
                let start = Instant::now();
                let verdict = check_ctilde(lambda, mu, ctx, Strategy::cycles_only(40))?;
                rows.push(PairReport {
                    lambda: lambda.to_string(),
                    mu: mu.to_string(),
                    verdict,
                    wall_ms: start.elapsed().as_millis(),
                });
            }
        }
    }
    let passed = rows.iter().all(|p| p.verdict.holds());
    emit_report(&Report::new("thresholds", passed, false, rows), output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool(None);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
