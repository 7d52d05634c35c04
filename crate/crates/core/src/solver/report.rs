use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::algebra::Congruence;
use crate::term::{Substitution, Term};

use super::{Classification, GStatus, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceEntry {
    pub name: String,
    pub theta: Congruence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McsgEntry {
    /// A generalizer in the single variable `z`.
    pub term: Term,
    pub theta: Congruence,
    /// One substitution per input term, in input order.
    pub witnesses: Vec<Substitution>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeVerdict {
    Unitary,
    Finitary(usize),
    Inconclusive(String),
}

impl std::fmt::Display for TypeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TypeVerdict::Unitary => f.write_str("unitary"),
            TypeVerdict::Finitary(n) => write!(f, "finitary({n})"),
            TypeVerdict::Inconclusive(_) => f.write_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneralizationReport {
    pub variety: String,
    pub terms: Vec<Term>,
    pub vars: Vec<String>,
    pub bound: usize,
    /// Element labels of `F(z)`, for printing congruence blocks.
    pub f1_labels: Vec<String>,
    pub factor_sizes: Vec<usize>,
    pub kernel: CongruenceEntry,
    pub one_ep: Verdict,
    pub one_esp: Verdict,
    pub g_status: GStatus,
    pub g_lower: Vec<CongruenceEntry>,
    pub g_upper: Vec<CongruenceEntry>,
    pub classifications: Vec<Classification>,
    pub mcsg: Vec<McsgEntry>,
    pub kind: TypeVerdict,
    /// `None` when the product was too large to test.
    pub product_projective: Option<bool>,
    pub caveats: Vec<String>,
}

fn blocks_json(theta: &Congruence, labels: &[String]) -> Value {
    theta
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&e| labels[e].clone()).collect::<Vec<_>>())
        .collect()
}

pub fn classification_json(c: &Classification, labels: &[String]) -> Value {
    let mut v = json!({
        "name": c.name,
        "blocks": blocks_json(&c.theta, labels),
        "quotient_size": c.quotient_size,
        "exact": c.exact.to_string(),
        "projective": c.projective.to_string(),
        "strongly_projective": c.strongly_projective.to_string(),
    });
    let obj = v.as_object_mut().expect("object");
    if let Some(w) = &c.exact_witness {
        obj.insert("embedding".into(), json!({ "k": w.k, "generator": w.term.to_string() }));
    }
    if let Some(r) = &c.exact_refutation {
        obj.insert("not_exact_because".into(), json!(r));
    }
    if let Some(r) = &c.retract {
        obj.insert("section".into(), json!(r.section.to_string()));
    }
    if !c.section_attempts.is_empty() {
        let attempts: Vec<Value> = c
            .section_attempts
            .iter()
            .map(|a| {
                json!({
                    "candidate": a.candidate.to_string(),
                    "related": [a.pair.0.to_string(), a.pair.1.to_string()],
                })
            })
            .collect();
        obj.insert("failed_sections".into(), Value::Array(attempts));
    }
    if let Some(w) = &c.non_retractable {
        obj.insert("embedding_without_retraction".into(), json!({ "k": w.k, "generator": w.term.to_string() }));
    }
    v
}

impl GeneralizationReport {
    fn entries_json(&self, es: &[CongruenceEntry]) -> Value {
        es.iter()
            .map(|e| json!({ "name": e.name, "blocks": blocks_json(&e.theta, &self.f1_labels) }))
            .collect()
    }

    pub fn to_json_value(&self) -> Value {
        let mcsg: Vec<Value> = self
            .mcsg
            .iter()
            .map(|m| {
                json!({
                    "term": m.term.to_string(),
                    "witnesses": m.witnesses.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut v = json!({
            "variety": self.variety,
            "terms": self.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "variables": self.vars,
            "bound": self.bound,
            "factor_sizes": self.factor_sizes,
            "kernel": { "name": self.kernel.name, "blocks": blocks_json(&self.kernel.theta, &self.f1_labels) },
            "one_ep": self.one_ep.to_string(),
            "one_esp": self.one_esp.to_string(),
            "g_status": match self.g_status { GStatus::Exact => "exact", GStatus::Approximate => "approximate" },
            "g_congruences": self.entries_json(&self.g_lower),
        });
        let obj = v.as_object_mut().expect("object");
        if self.g_status == GStatus::Approximate {
            obj.insert("g_upper_bound".into(), self.entries_json(&self.g_upper));
        }
        obj.insert(
            "classifications".into(),
            self.classifications
                .iter()
                .map(|c| classification_json(c, &self.f1_labels))
                .collect(),
        );
        obj.insert("mcsg".into(), Value::Array(mcsg));
        obj.insert("type".into(), json!(self.kind.to_string()));
        if let TypeVerdict::Inconclusive(reason) = &self.kind {
            obj.insert("reason".into(), json!(reason));
        }
        obj.insert(
            "product_projective".into(),
            json!(match self.product_projective {
                Some(true) => "yes",
                Some(false) => "no",
                None => "skipped",
            }),
        );
        obj.insert("caveats".into(), json!(self.caveats));
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let terms: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(out, "variety: {}", self.variety);
        let _ = writeln!(out, "problem: {{{}}}", terms.join(", "));
        let _ = writeln!(
            out,
            "kernel: {} {}",
            self.kernel.name,
            self.kernel.theta.format_blocks(&self.f1_labels)
        );
        let _ = writeln!(out, "1EP: {}", self.one_ep);
        let _ = writeln!(out, "1ESP: {}", self.one_esp);
        let names: Vec<&str> = self.g_lower.iter().map(|e| e.name.as_str()).collect();
        match self.g_status {
            GStatus::Exact => {
                let _ = writeln!(out, "G(h): {{{}}}", names.join(", "));
            }
            GStatus::Approximate => {
                let upper: Vec<&str> = self.g_upper.iter().map(|e| e.name.as_str()).collect();
                let _ = writeln!(out, "G(h) contains: {{{}}}", names.join(", "));
                let _ = writeln!(out, "G(h) within: {{{}}}", upper.join(", "));
            }
        }
        let _ = writeln!(out, "mcsg:");
        for m in &self.mcsg {
            let ws: Vec<String> = m.witnesses.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "  {}  via {}", m.term, ws.join(", "));
        }
        let _ = writeln!(out, "type: {}", self.kind);
        if let TypeVerdict::Inconclusive(reason) = &self.kind {
            let _ = writeln!(out, "reason: {reason}");
        }
        for c in &self.caveats {
            let _ = writeln!(out, "note: {c}");
        }
        out
    }

    /// The congruence lattice of `F(z)` with `ker(h)` doubled, G-congruences
    /// filled and the maximal ones (one per generalizer) boxed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n  rankdir=BT;\n  node [shape=ellipse];\n");
        let in_g = |t: &Congruence| self.g_lower.iter().any(|e| &e.theta == t);
        for (i, c) in self.classifications.iter().enumerate() {
            let mut attrs = vec![format!("label=\"{}\"", c.name.replace('"', "\\\""))];
            if c.theta == self.kernel.theta {
                attrs.push("peripheries=2".into());
            }
            if in_g(&c.theta) {
                attrs.push("style=filled".into());
                attrs.push("fillcolor=lightgrey".into());
            }
            if self.mcsg.iter().any(|m| m.theta == c.theta) {
                attrs.push("shape=box".into());
            }
            let _ = writeln!(out, "  c{i} [{}];", attrs.join(", "));
        }
        let n = self.classifications.len();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&self.classifications[i].theta, &self.classifications[j].theta);
                if i != j
                    && a.is_subset_of(b)
                    && !(0..n).any(|m| {
                        let c = &self.classifications[m].theta;
                        m != i && m != j && a.is_subset_of(c) && c.is_subset_of(b)
                    })
                {
                    let _ = writeln!(out, "  c{i} -> c{j} [arrowhead=none];");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
