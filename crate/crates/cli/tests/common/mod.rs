#![allow(dead_code)]

use std::path::{Path, PathBuf};

use algen::term::{Signature, Term};
use algen::variety::Variety;
use algen::varfile::load_variety;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

pub fn load(name: &str) -> Variety {
    load_variety(example(name)).unwrap()
}

pub fn random_term(rng: &mut impl Rng, sig: &Signature, vars: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        let constants: Vec<&str> = sig.ops().iter().filter(|o| o.arity == 0).map(|o| o.name.as_str()).collect();
        if !constants.is_empty() && rng.gen_bool(0.2) {
            return Term::constant(*constants.choose(rng).unwrap());
        }
        return Term::var(*vars.choose(rng).unwrap());
    }
    let ops: Vec<_> = sig.ops().iter().filter(|o| o.arity > 0).collect();
    let op = ops.choose(rng).unwrap();
    let args = (0..op.arity).map(|_| random_term(rng, sig, vars, depth - 1)).collect();
    Term::app(op.name.as_str(), args)
}

/// Words over {a, b} of length at most `max`, concatenation truncated to a sink.
pub fn truncated_monoid(max: usize) -> String {
    let mut words = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max {
        frontier = frontier.iter().flat_map(|w| [format!("{w}a"), format!("{w}b")]).collect();
        words.extend(frontier.iter().cloned());
    }
    let label = |w: &str| if w.is_empty() { "1".to_string() } else { w.to_string() };
    let mut labels: Vec<String> = words.iter().map(|w| label(w)).collect();
    labels.push("sink".into());
    let n = labels.len();
    let concat = |i: usize, j: usize| -> String {
        if i == n - 1 || j == n - 1 {
            return "sink".into();
        }
        let w = format!("{}{}", words[i], words[j]);
        if w.len() > max { "sink".into() } else { label(&w) }
    };
    let table: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| concat(i, j)).collect()).collect();
    serde_json::json!({
        "name": "truncated free monoid",
        "signature": [{"name": "mul", "arity": 2}, {"name": "e", "arity": 0}],
        "algebras": [{"name": "W", "universe": labels, "ops": {"mul": table, "e": "1"}}],
    })
    .to_string()
}
