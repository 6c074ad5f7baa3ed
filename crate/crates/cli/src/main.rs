use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nomrw::alpha::{check_alpha, check_fresh};
use nomrw::equational::{e_match, e_unify, TheoryE, UnifProblem};
use nomrw::frontend::{load_theory, parse_context, parse_judgement_with, parse_term_with, Loaded, SymbolTable};
use nomrw::narrowing::{Mode, NarrowingNode, NarrowingTree, TreeConfig};
use nomrw::rewriting::{
    closed_rewrite_steps_with, normalize_with, rewrite_steps, DerivationStep, Strategy, TheoryPresentation,
};
use nomrw::syntax::{FreshCtx, NameSupply, Position, Subst, Term, TermInCtx};
use nomrw::unify::{t_unify, verify_solution, TUnifConfig, TUnifProblem, Verdict, DEFAULT_FUEL};

#[derive(Parser)]
#[command(name = "nomrw", version, about = "Nominal rewriting, narrowing and unification modulo theories")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Innermost,
    Outermost,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide CTX |- S ≈α T.
    CheckAlpha {
        #[arg(long)]
        theory: Option<String>,
        ctx: String,
        s: String,
        t: String,
    },
    /// Decide CTX |- A # T.
    Fresh {
        #[arg(long)]
        theory: Option<String>,
        ctx: String,
        atom: String,
        t: String,
    },
    /// Match PATTERN against SUBJECT (both judgements) modulo the theory.
    Match {
        #[arg(long)]
        theory: Option<String>,
        pattern: String,
        subject: String,
    },
    /// Enumerate unifiers of LEFT and RIGHT (both judgements) modulo the theory.
    Unify {
        #[arg(long)]
        theory: Option<String>,
        #[arg(long, default_value_t = 2)]
        fp_budget: usize,
        #[arg(long)]
        max_solutions: Option<usize>,
        left: String,
        right: String,
    },
    /// Rewrite T under CTX, following the first step each time.
    Rewrite {
        #[arg(long)]
        theory: String,
        #[arg(long)]
        closed: bool,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// List every one-step rewrite instead of following a path.
        #[arg(long)]
        all: bool,
        ctx: String,
        t: String,
    },
    /// Closed rewriting to normal form.
    Normalize {
        #[arg(long)]
        theory: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Innermost)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        ctx: String,
        t: String,
    },
    /// Breadth-first narrowing tree from CTX |- T.
    Narrow {
        #[arg(long)]
        theory: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        closed: bool,
        #[arg(long)]
        basic: bool,
        #[arg(long, default_value_t = 2)]
        fp_budget: usize,
        #[arg(long)]
        max_nodes: Option<usize>,
        ctx: String,
        t: String,
    },
    /// T-unification by closed narrowing.
    TUnify {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long)]
        basic: bool,
        #[arg(long, default_value_t = 1)]
        fp_budget: usize,
        #[arg(long, default_value_t = 1)]
        max_solutions: usize,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Expand reducible nodes by every narrowing step, not only their rewrite step.
        #[arg(long)]
        no_normalize: bool,
        left: String,
        right: String,
    },
    /// Report which rules and axioms of a theory are closed.
    CheckClosed {
        #[arg(long)]
        theory: String,
    },
}

/// A command's result: whether it produced an answer, and both renderings.
struct Output {
    answer: bool,
    json: Value,
    text: String,
}

fn load(path: &str) -> Result<Loaded> {
    let loaded = load_theory(path).with_context(|| format!("loading theory {path}"))?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    Ok(loaded)
}

fn load_opt(path: &Option<String>) -> Result<(SymbolTable, TheoryPresentation)> {
    match path {
        Some(p) => {
            let l = load(p)?;
            Ok((l.file.table(), l.presentation))
        }
        None => Ok((SymbolTable::new(), TheoryPresentation::new(Default::default(), Vec::new(), TheoryE::Empty))),
    }
}

/// Closed-mode commands refuse theories with non-closed rules.
fn require_closed(l: &Loaded) -> Result<()> {
    if !l.warnings.is_empty() {
        bail!("closed mode needs closed rules: {}", l.warnings.join(", "));
    }
    Ok(())
}

fn term(text: &str, table: &SymbolTable) -> Result<Term> {
    parse_term_with(text, table).with_context(|| format!("parsing term `{text}`"))
}

fn ctx(text: &str) -> Result<FreshCtx> {
    parse_context(text).with_context(|| format!("parsing context `{text}`"))
}

fn judgement(text: &str, table: &SymbolTable) -> Result<TermInCtx> {
    parse_judgement_with(text, table).with_context(|| format!("parsing `{text}`"))
}

fn j_ctx(c: &FreshCtx) -> Value {
    Value::Array(c.iter().map(|(a, x)| Value::String(format!("{a}#{x}"))).collect())
}

fn j_subst(s: &Subst) -> Value {
    Value::Object(s.iter().map(|(x, t)| (x.to_string(), Value::String(t.to_string()))).collect())
}

fn j_pos(p: &Position) -> Value {
    json!(p.0)
}

fn j_step(s: &DerivationStep) -> Value {
    json!({
        "rule": s.rule,
        "position": j_pos(&s.position),
        "substitution": j_subst(&s.solution.subst),
        "context": j_ctx(&s.context),
        "result": s.result.to_string(),
    })
}

fn j_node(n: &NarrowingNode) -> Value {
    json!({
        "id": n.id,
        "parent": n.parent,
        "depth": n.depth,
        "context": j_ctx(&n.context),
        "term": n.term.to_string(),
        "accumulated": j_subst(&n.accumulated_subst),
        "step": n.step.as_ref().map(|s| json!({
            "rule": s.rule,
            "position": j_pos(&s.position),
            "substitution": j_subst(&s.solution.subst),
            "rewrite": s.by_rewriting,
        })),
        "truncated": n.truncated,
    })
}

fn boolean(b: bool) -> Output {
    Output { answer: b, json: json!({ "result": b }), text: format!("{b}\n") }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.cmd {
        Cmd::CheckAlpha { theory, ctx: c, s, t } => {
            let (table, _) = load_opt(theory)?;
            Ok(boolean(check_alpha(&ctx(c)?, &term(s, &table)?, &term(t, &table)?)))
        }
        Cmd::Fresh { theory, ctx: c, atom, t } => {
            let (table, _) = load_opt(theory)?;
            let a = match term(atom, &SymbolTable::new())? {
                Term::Atom(a) => a,
                other => bail!("`{other}` is not an atom"),
            };
            Ok(boolean(check_fresh(&ctx(c)?, a, &term(t, &table)?)))
        }
        Cmd::Match { theory, pattern, subject } => {
            let (table, pres) = load_opt(theory)?;
            let p = judgement(pattern, &table)?;
            let s = judgement(subject, &table)?;
            let mut supply = NameSupply::above(p.max_dis().max(s.max_dis()));
            let found = e_match(&pres.theory, &p, &s, &mut supply);
            let mut text = String::new();
            for m in &found {
                writeln!(text, "{} |- {}", m.solution.context, m.solution.subst)?;
            }
            if found.is_empty() {
                text.push_str("no match\n");
            }
            let sols: Vec<Value> = found
                .iter()
                .map(|m| json!({ "context": j_ctx(&m.solution.context), "substitution": j_subst(&m.solution.subst) }))
                .collect();
            Ok(Output { answer: !found.is_empty(), json: json!({ "solutions": sols }), text })
        }
        Cmd::Unify { theory, fp_budget, max_solutions, left, right } => {
            let (table, pres) = load_opt(theory)?;
            let problem = UnifProblem::single(judgement(left, &table)?, judgement(right, &table)?);
            let mut supply = NameSupply::above(problem.max_dis());
            let mut it = e_unify(&pres.theory, &problem, *fp_budget, &mut supply);
            let found: Vec<_> = it.by_ref().take(max_solutions.unwrap_or(usize::MAX)).collect();
            let mut text = String::new();
            for s in &found {
                writeln!(text, "{} |- {}", s.context, s.subst)?;
            }
            if found.is_empty() {
                text.push_str("no unifier\n");
            }
            if it.truncated() {
                text.push_str("(fixed-point budget reached; the list may be incomplete)\n");
            }
            let sols: Vec<Value> = found
                .iter()
                .map(|s| json!({ "context": j_ctx(&s.context), "substitution": j_subst(&s.subst) }))
                .collect();
            Ok(Output {
                answer: !found.is_empty(),
                json: json!({ "solutions": sols, "truncated": it.truncated() }),
                text,
            })
        }
        Cmd::Rewrite { theory, closed, steps, all, ctx: c, t } => {
            let l = load(theory)?;
            if *closed {
                require_closed(&l)?;
            }
            let table = l.file.table();
            let pres = &l.presentation;
            let delta = ctx(c)?;
            let start = term(t, &table)?;
            let mut supply = NameSupply::above(delta.max_dis().max(start.max_dis()).max(pres.max_dis()));
            let successors = |d: &FreshCtx, s: &Term, supply: &mut NameSupply| {
                if *closed {
                    closed_rewrite_steps_with(d, s, pres, supply)
                } else {
                    rewrite_steps(d, s, pres)
                }
            };
            let trace: Vec<DerivationStep> = if *all {
                successors(&delta, &start, &mut supply)
            } else {
                let mut trace = Vec::new();
                let (mut d, mut s) = (delta.clone(), start.clone());
                for _ in 0..*steps {
                    let Some(step) = successors(&d, &s, &mut supply).into_iter().next() else { break };
                    d = step.context.clone();
                    s = step.result.clone();
                    trace.push(step);
                }
                trace
            };
            let mut text = String::new();
            for st in &trace {
                writeln!(text, "{} at {} {} : {} |- {}", st.rule, st.position, st.solution.subst, st.context, st.result)?;
            }
            if trace.is_empty() {
                text.push_str("no step\n");
            }
            let steps: Vec<Value> = trace.iter().map(j_step).collect();
            Ok(Output { answer: !trace.is_empty(), json: json!({ "steps": steps }), text })
        }
        Cmd::Normalize { theory, strategy, fuel, ctx: c, t } => {
            let l = load(theory)?;
            require_closed(&l)?;
            let table = l.file.table();
            let delta = ctx(c)?;
            let s = term(t, &table)?;
            let strategy = match strategy {
                StrategyArg::Innermost => Strategy::LeftmostInnermost,
                StrategyArg::Outermost => Strategy::LeftmostOutermost,
            };
            let mut supply = NameSupply::above(delta.max_dis().max(s.max_dis()).max(l.presentation.max_dis()));
            let n = normalize_with(&delta, &s, &l.presentation, strategy, *fuel, &mut supply);
            let mut text = String::new();
            for st in &n.trace {
                writeln!(text, "  {} at {} -> {}", st.rule, st.position, st.result)?;
            }
            writeln!(text, "{} |- {}", n.context, n.term)?;
            if n.exhausted {
                text.push_str("(fuel exhausted)\n");
            }
            Ok(Output {
                answer: !n.exhausted,
                json: json!({
                    "term": n.term.to_string(),
                    "context": j_ctx(&n.context),
                    "trace": n.trace.iter().map(j_step).collect::<Vec<_>>(),
                    "exhausted": n.exhausted,
                }),
                text,
            })
        }
        Cmd::Narrow { theory, depth, closed, basic, fp_budget, max_nodes, ctx: c, t } => {
            let l = load(theory)?;
            if *closed {
                require_closed(&l)?;
            }
            let table = l.file.table();
            let root = TermInCtx::new(ctx(c)?, term(t, &table)?);
            let config = TreeConfig {
                mode: if *closed { Mode::Closed } else { Mode::Plain },
                basic: *basic,
                max_depth: *depth,
                fp_budget: *fp_budget,
                max_nodes: *max_nodes,
                normalize: false,
            };
            let mut tree = NarrowingTree::new(&l.presentation, &root, config);
            let nodes: Vec<NarrowingNode> = tree.by_ref().collect();
            let report = tree.report();
            let mut text = String::new();
            for n in &nodes {
                let via = match &n.step {
                    Some(s) => format!("{} at {} {}", s.rule, s.position, s.solution.subst),
                    None => "root".to_string(),
                };
                writeln!(text, "#{} d{} [{via}] {} |- {}", n.id, n.depth, n.context, n.term)?;
            }
            writeln!(
                text,
                "{} nodes; depth limited: {}; budget truncated: {}; node limit: {}",
                nodes.len(),
                report.depth_limited,
                report.budget_truncated,
                report.node_limit_hit
            )?;
            Ok(Output {
                answer: true,
                json: json!({
                    "nodes": nodes.iter().map(j_node).collect::<Vec<_>>(),
                    "depth_limited": report.depth_limited,
                    "budget_truncated": report.budget_truncated,
                    "node_limit_hit": report.node_limit_hit,
                }),
                text,
            })
        }
        Cmd::TUnify { theory, depth, basic, fp_budget, max_solutions, max_nodes, no_normalize, left, right } => {
            let l = load(theory)?;
            require_closed(&l)?;
            let table = l.file.table();
            let pres = &l.presentation;
            let problem = TUnifProblem::new(judgement(left, &table)?, judgement(right, &table)?);
            let config = TUnifConfig {
                max_depth: *depth,
                fp_budget: *fp_budget,
                max_solutions: Some(*max_solutions),
                basic: *basic,
                max_nodes: max_nodes.or(TUnifConfig::default().max_nodes),
                normalize: !*no_normalize,
            };
            let mut it = t_unify(pres, &problem, config);
            let sols: Vec<_> = it.by_ref().collect();
            let report = it.report();
            let mut text = String::new();
            let mut records = Vec::new();
            for s in &sols {
                let verdict = verify_solution(pres, &problem, &s.context, &s.subst, DEFAULT_FUEL);
                let verdict = match verdict {
                    Verdict::Valid => "valid",
                    Verdict::Invalid => "invalid",
                    Verdict::Indeterminate => "indeterminate",
                };
                writeln!(text, "solution: {} |- {}  ({verdict})", s.context, s.subst)?;
                let derivation: Vec<Value> = s.derivation.iter().map(j_node).collect();
                for n in s.derivation.iter().skip(1) {
                    let step = n.step.as_ref().expect("non-root step");
                    writeln!(text, "  {} at {} ~> {}", step.rule, step.position, n.term)?;
                }
                records.push(json!({
                    "context": j_ctx(&s.context),
                    "substitution": j_subst(&s.subst),
                    "verified": verdict,
                    "derivation": derivation,
                    "closing": { "context": j_ctx(&s.closing.context), "substitution": j_subst(&s.closing.subst) },
                }));
            }
            if sols.is_empty() {
                text.push_str("no solution\n");
            }
            writeln!(
                text,
                "{} nodes; depth limited: {}; budget truncated: {}; node limit: {}",
                it.nodes_seen(),
                report.depth_limited,
                report.budget_truncated,
                report.node_limit_hit
            )?;
            Ok(Output {
                answer: !sols.is_empty(),
                json: json!({
                    "solutions": records,
                    "nodes": it.nodes_seen(),
                    "depth_limited": report.depth_limited,
                    "budget_truncated": report.budget_truncated,
                    "node_limit_hit": report.node_limit_hit,
                }),
                text,
            })
        }
        Cmd::CheckClosed { theory } => {
            let l = load(theory)?;
            let bad = l.file.non_closed();
            let mut text = String::new();
            let mut entries = Vec::new();
            let names = l.file.rules.iter().map(|r| r.name.clone()).chain(l.file.axioms.iter().map(|a| a.name.clone()));
            for name in names {
                let closed = !bad.contains(&name);
                writeln!(text, "{name}: {}", if closed { "closed" } else { "not closed" })?;
                entries.push(json!({ "name": name, "closed": closed }));
            }
            Ok(Output { answer: bad.is_empty(), json: json!({ "rules": entries, "all_closed": bad.is_empty() }), text })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.answer { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
