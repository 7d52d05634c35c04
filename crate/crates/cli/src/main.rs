use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use algen::algebra::FiniteAlgebra;
use algen::kleene::{dual_poset, is_exact_by_quasieq, is_projective_by_duality};
use algen::solver::{
    classification_json, compare_generality, solve, Classification, Context, Generality, SymbolicProblem,
    TypeVerdict, Verdict, DEFAULT_BOUND,
};
use algen::term::{lgg_syntactic, parse_term, parse_term_unchecked, Signature, Term};
use algen::variety::{Variety, DEFAULT_BUDGET};
use algen::varfile::load_variety;
use algen::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "algen", version, about = "Equational generalization over finitely generated varieties")]
struct Cli {
    /// Maximum number of table cells any construction may allocate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
#[group(multiple = false)]
struct Format {
    #[arg(long)]
    json: bool,
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a variety file and check its tables.
    Validate { file: PathBuf },
    /// List the elements of the free algebra on N generators.
    Free {
        file: PathBuf,
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Congruences of F(z) and their classification.
    Con {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Solve a generalization problem.
    Solve {
        file: PathBuf,
        #[arg(required = true)]
        terms: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Compare two terms by generality modulo the variety.
    Compare { file: PathBuf, s: String, t: String },
    /// Syntactic least general generalization.
    Lgg {
        #[arg(required = true)]
        terms: Vec<String>,
    },
    /// Dual poset of a Kleene algebra and its projectivity conditions.
    KleeneDual {
        file: PathBuf,
        /// A generating algebra of the file, or `F(z)`.
        algebra: String,
        #[arg(long)]
        dot: bool,
    },
    /// 1EP and 1ESP verdicts.
    Props {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
}

enum Failure {
    Core(Error),
    Term { err: Error, src: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, inconclusive)) => {
            print!("{out}");
            ExitCode::from(if inconclusive { 3 } else { 0 })
        }
        Err(f) => {
            let err = match &f {
                Failure::Core(e) | Failure::Term { err: e, .. } => e,
            };
            eprintln!("error: {err}");
            if let Failure::Term { src, .. } = &f {
                if let Some(offset) = offset_of(err) {
                    let col = src[..offset.min(src.len())].chars().count();
                    eprintln!("  {src}\n  {}^", " ".repeat(col));
                }
            }
            ExitCode::from(if err.is_budget() { 2 } else { 1 })
        }
    }
}

fn offset_of(e: &Error) -> Option<usize> {
    match e {
        Error::Syntax { offset, .. }
        | Error::UnknownOperation { offset, .. }
        | Error::ArityMismatch { offset, .. } => Some(*offset),
        _ => None,
    }
}

fn load(file: &PathBuf, budget: u128) -> Result<Variety, Failure> {
    Ok(load_variety(file)?.with_budget(budget))
}

fn parse_one(src: &str, sig: &Signature) -> Result<Term, Failure> {
    parse_term(src, sig).map_err(|err| Failure::Term { err, src: src.to_string() })
}

fn parse_all(srcs: &[String], sig: &Signature) -> Result<Vec<Term>, Failure> {
    srcs.iter().map(|s| parse_one(s, sig)).collect()
}

fn json_out(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Validate { file } => validate(&load(file, cli.budget)?),
        Cmd::Free { file, n, json } => free(&load(file, cli.budget)?, *n, *json),
        Cmd::Con { file, bound, dot, json } => con(&load(file, cli.budget)?, *bound, *dot, *json),
        Cmd::Solve { file, terms, bound, format } => {
            let v = load(file, cli.budget)?;
            let ts = parse_all(terms, v.sig())?;
            let ctx = Context::new(&v, *bound)?;
            let report = solve(&ctx, &SymbolicProblem::new(v.sig(), ts)?)?;
            let out = if format.json {
                json_out(&report.to_json_value())
            } else if format.dot {
                report.to_dot()
            } else {
                report.to_text()
            };
            Ok((out, matches!(report.kind, TypeVerdict::Inconclusive(_))))
        }
        Cmd::Compare { file, s, t } => {
            let v = load(file, cli.budget)?;
            let (a, b) = (parse_one(s, v.sig())?, parse_one(t, v.sig())?);
            let word = match compare_generality(&v, &a, &b)? {
                Generality::Less => "less: the first term is a proper instance of the second",
                Generality::Greater => "greater: the second term is a proper instance of the first",
                Generality::Equal => "equal: each term is an instance of the other",
                Generality::Incomparable => "incomparable",
            };
            Ok((format!("{word}\n"), false))
        }
        Cmd::Lgg { terms } => {
            let ts = terms
                .iter()
                .map(|s| parse_term_unchecked(s).map_err(|err| Failure::Term { err, src: s.clone() }))
                .collect::<Result<Vec<_>, _>>()?;
            let g = lgg_syntactic(&ts);
            let mut out = format!("{}\n", g.term);
            for (t, w) in ts.iter().zip(&g.witnesses) {
                let _ = writeln!(out, "  {t}  via {w}");
            }
            Ok((out, false))
        }
        Cmd::KleeneDual { file, algebra, dot } => kleene_dual(&load(file, cli.budget)?, algebra, *dot),
        Cmd::Props { file, bound } => {
            let v = load(file, cli.budget)?;
            let ctx = Context::new(&v, *bound)?;
            let (ep, ep_at) = ctx.one_ep();
            let (esp, esp_at) = ctx.one_esp();
            let mut out = String::new();
            let _ = writeln!(out, "variety: {}", v.name());
            let _ = writeln!(out, "1EP: {ep}");
            if let Some(i) = ep_at {
                let c = &ctx.classifications()[i];
                let _ = writeln!(out, "  exact but not projective: {}", c.name);
            }
            let _ = writeln!(out, "1ESP: {esp}");
            if let Some(i) = esp_at {
                let c = &ctx.classifications()[i];
                let _ = writeln!(out, "  exact but not strongly projective: {}", c.name);
                if let Some(w) = &c.non_retractable {
                    let _ = writeln!(out, "  embedding without retraction into F({}): z -> {}", w.k, w.term);
                }
            }
            Ok((out, matches!(ep, Verdict::Yes { bound: Some(_) })))
        }
    }
}

fn validate(v: &Variety) -> Outcome {
    let mut out = String::new();
    let _ = writeln!(out, "variety: {}", v.name());
    let ops: Vec<String> = v.sig().ops().iter().map(|o| format!("{}/{}", o.name, o.arity)).collect();
    let _ = writeln!(out, "signature: {}", ops.join(", "));
    for a in v.generators() {
        let _ = writeln!(out, "algebra {}: {} elements", a.name(), a.size());
    }
    out.push_str("valid\n");
    Ok((out, false))
}

fn free(v: &Variety, n: usize, json: bool) -> Outcome {
    let vars = if n == 1 { vec!["z".to_string()] } else { Variety::standard_vars(n) };
    let f = v.free_algebra_over(&vars)?;
    if json {
        let v = json!({
            "variety": v.name(),
            "variables": vars,
            "size": f.size(),
            "elements": f.reps().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        });
        return Ok((json_out(&v), false));
    }
    let mut out = format!("F({}) in {}: {} elements\n", vars.join(","), v.name(), f.size());
    for (i, t) in f.reps().iter().enumerate() {
        let _ = writeln!(out, "  {i:>4}  {t}");
    }
    Ok((out, false))
}

fn describe(c: &Classification, labels: &[String], out: &mut String) {
    let _ = writeln!(out, "{}", c.name);
    let _ = writeln!(out, "  blocks: {}", c.theta.format_blocks(labels));
    let _ = writeln!(out, "  quotient size: {}", c.quotient_size);
    let _ = write!(out, "  exact: {}", c.exact);
    if let Some(w) = &c.exact_witness {
        let _ = write!(out, ", kernel of z -> {} in F({})", w.term, w.k);
    }
    if let Some(r) = &c.exact_refutation {
        let _ = write!(out, ", {r}");
    }
    out.push('\n');
    let _ = write!(out, "  projective: {}", c.projective);
    if let Some(r) = &c.retract {
        let _ = write!(out, ", section z -> {}", r.section);
    }
    out.push('\n');
    for a in &c.section_attempts {
        let _ = writeln!(
            out,
            "    z -> {} fails: identifies {} and {}",
            a.candidate, a.pair.0, a.pair.1
        );
    }
    let _ = write!(out, "  strongly projective: {}", c.strongly_projective);
    if let Some(w) = &c.non_retractable {
        let _ = write!(out, ", z -> {} embeds into F({}) without retraction", w.term, w.k);
    }
    out.push('\n');
}

fn con(v: &Variety, bound: usize, dot: bool, json: bool) -> Outcome {
    let ctx = Context::new(v, bound)?;
    let labels = ctx.f1().algebra().labels().to_vec();
    let lattice = ctx.lattice();
    let (ep, _) = ctx.one_ep();
    let (esp, _) = ctx.one_esp();
    if dot {
        let mut out = String::from("digraph Con {\n  rankdir=BT;\n  node [shape=ellipse];\n");
        for (i, c) in ctx.classifications().iter().enumerate() {
            let mut attrs = vec![format!("label=\"{}\"", c.name.replace('"', "\\\""))];
            if c.projective.is_yes() {
                attrs.push("style=filled".into());
                attrs.push("fillcolor=lightgrey".into());
            } else if c.exact.is_yes() {
                attrs.push("style=dashed".into());
            }
            let _ = writeln!(out, "  c{i} [{}];", attrs.join(", "));
        }
        for (lo, hi) in &lattice.covers {
            let _ = writeln!(out, "  c{lo} -> c{hi} [arrowhead=none];");
        }
        out.push_str("}\n");
        return Ok((out, false));
    }
    if json {
        let v = json!({
            "variety": v.name(),
            "bound": bound,
            "f1": labels,
            "congruences": ctx.classifications().iter().map(|c| classification_json(c, &labels)).collect::<Vec<_>>(),
            "covers": lattice.covers.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "one_ep": ep.to_string(),
            "one_esp": esp.to_string(),
        });
        return Ok((json_out(&v), false));
    }
    let mut out = String::new();
    let _ = writeln!(out, "variety: {}", v.name());
    let _ = writeln!(out, "F(z): {} elements: {}", labels.len(), labels.join(", "));
    let _ = writeln!(out, "Con(F(z)): {} congruences", lattice.len());
    for c in ctx.classifications() {
        describe(c, &labels, &mut out);
    }
    out.push_str("covers:\n");
    for (lo, hi) in &lattice.covers {
        let _ = writeln!(out, "  {} < {}", lattice.names[*lo], lattice.names[*hi]);
    }
    let _ = writeln!(out, "1EP: {ep}");
    let _ = writeln!(out, "1ESP: {esp}");
    Ok((out, false))
}

fn kleene_dual(v: &Variety, name: &str, dot: bool) -> Outcome {
    let a: Arc<FiniteAlgebra> = if name == "F(z)" {
        v.free_algebra_over(&["z".to_string()])?.algebra().clone()
    } else {
        v.generators()
            .iter()
            .find(|a| a.name() == name)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("no algebra named `{name}`")))?
    };
    let p = dual_poset(&a)?;
    if dot {
        return Ok((p.to_dot(), false));
    }
    let verdict = is_projective_by_duality(&p)?;
    let exact = is_exact_by_quasieq(&a)?;
    let mut out = String::new();
    let _ = writeln!(out, "algebra: {} ({} elements)", a.name(), a.size());
    let _ = writeln!(out, "dual points: {}", p.labels.join(", "));
    out.push_str("covers:\n");
    for (lo, hi) in p.covers() {
        let _ = writeln!(out, "  {} < {}", p.labels[lo], p.labels[hi]);
    }
    out.push_str("involution:\n");
    for (x, &y) in p.iota.iter().enumerate() {
        let _ = writeln!(out, "  {} -> {}", p.labels[x], p.labels[y]);
    }
    match verdict.failed {
        None => out.push_str("projective: yes\n"),
        Some(c) => {
            let _ = writeln!(out, "projective: no, condition {} fails: {}", c as u8, verdict.detail);
        }
    }
    let _ = writeln!(out, "exact: {}, {}", if exact.exact { "yes" } else { "no" }, exact.reason);
    Ok((out, false))
}
