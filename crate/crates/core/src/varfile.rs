//! Variety files: JSON documents listing a signature and finite generating
//! algebras.
//!
//! ```json
//! {
//!   "name": "Kleene",
//!   "signature": [{"name": "not", "arity": 1}, {"name": "zero", "arity": 0}],
//!   "algebras": [{
//!     "name": "K3",
//!     "universe": ["0", "a", "1"],
//!     "ops": {"not": ["1", "a", "0"], "zero": "0"}
//!   }]
//! }
//! ```
//!
//! A table of arity n is a list nested n deep, indexed by the first argument
//! at the outermost level; a nullary table is a single label.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{for_each_tuple, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::term::{OpSymbol, Signature};
use crate::variety::Variety;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    name: String,
    signature: Vec<OpSymbol>,
    algebras: Vec<AlgebraDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    name: String,
    universe: Vec<String>,
    ops: serde_json::Map<String, Value>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::VarietyFile(msg.into())
}

fn lookup_cell<'v>(table: &'v Value, args: &[usize], where_: &str) -> Result<&'v Value> {
    let mut cur = table;
    for (depth, &a) in args.iter().enumerate() {
        let row = cur
            .as_array()
            .ok_or_else(|| bad(format!("{where_}: expected a list at depth {depth}")))?;
        cur = row
            .get(a)
            .ok_or_else(|| bad(format!("{where_}: row at depth {depth} is too short")))?;
    }
    Ok(cur)
}

fn check_shape(table: &Value, arity: usize, size: usize, where_: &str) -> Result<()> {
    if arity == 0 {
        return if table.is_string() {
            Ok(())
        } else {
            Err(bad(format!("{where_}: expected an element label")))
        };
    }
    let rows = table
        .as_array()
        .ok_or_else(|| bad(format!("{where_}: expected a list")))?;
    if rows.len() != size {
        return Err(bad(format!(
            "{where_}: expected {size} entries, found {}",
            rows.len()
        )));
    }
    rows.iter().try_for_each(|r| check_shape(r, arity - 1, size, where_))
}

fn build_algebra(sig: &Arc<Signature>, doc: &AlgebraDoc) -> Result<FiniteAlgebra> {
    if doc.universe.is_empty() {
        return Err(bad(format!("algebra `{}` has an empty universe", doc.name)));
    }
    for name in doc.ops.keys() {
        if sig.index_of(name).is_none() {
            return Err(bad(format!(
                "algebra `{}` defines `{name}`, which is not in the signature",
                doc.name
            )));
        }
    }
    let n = doc.universe.len();
    let index = |label: &str, where_: &str| -> Result<usize> {
        doc.universe
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| bad(format!("{where_}: `{label}` is not in the universe")))
    };
    let mut tables = Vec::with_capacity(sig.len());
    for op in sig.ops() {
        let where_ = format!("algebra `{}`, operation `{}`", doc.name, op.name);
        let table = doc
            .ops
            .get(&op.name)
            .ok_or_else(|| bad(format!("{where_}: missing table")))?;
        check_shape(table, op.arity, n, &where_)?;
        let mut flat = Vec::new();
        let mut failure = None;
        for_each_tuple(n, op.arity, |args| {
            if failure.is_some() {
                return;
            }
            let cell = lookup_cell(table, args, &where_).and_then(|v| {
                v.as_str()
                    .ok_or_else(|| bad(format!("{where_}: cells must be element labels")))
                    .and_then(|l| index(l, &where_))
            });
            match cell {
                Ok(e) => flat.push(e),
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        tables.push(flat);
    }
    FiniteAlgebra::new(doc.name.clone(), sig.clone(), doc.universe.clone(), tables)
}

pub fn parse_variety(src: &str) -> Result<Variety> {
    let doc: FileDoc = serde_json::from_str(src).map_err(|e| bad(e.to_string()))?;
    let sig = Arc::new(Signature::new(
        doc.signature.iter().map(|o| (o.name.clone(), o.arity)),
    )?);
    if doc.algebras.is_empty() {
        return Err(bad("at least one algebra is required"));
    }
    let algebras = doc
        .algebras
        .iter()
        .map(|a| build_algebra(&sig, a).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    Variety::new(doc.name, algebras)
}

pub fn load_variety(path: impl AsRef<Path>) -> Result<Variety> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)
        .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    parse_variety(&src)
}

fn table_json(a: &FiniteAlgebra, op: usize, prefix: &mut Vec<usize>, arity: usize) -> Value {
    if prefix.len() == arity {
        return Value::String(a.label(a.apply(op, prefix)).to_string());
    }
    let rows = (0..a.size())
        .map(|e| {
            prefix.push(e);
            let v = table_json(a, op, prefix, arity);
            prefix.pop();
            v
        })
        .collect();
    Value::Array(rows)
}

/// Serializes algebras sharing one signature into the file format.
pub fn variety_to_json(name: &str, algebras: &[Arc<FiniteAlgebra>]) -> Result<String> {
    let first = algebras.first().ok_or_else(|| bad("at least one algebra is required"))?;
    let sig = first.sig();
    let docs = algebras
        .iter()
        .map(|a| {
            let mut ops = serde_json::Map::new();
            for (i, op) in sig.ops().iter().enumerate() {
                ops.insert(op.name.clone(), table_json(a, i, &mut Vec::new(), op.arity));
            }
            AlgebraDoc {
                name: a.name().to_string(),
                universe: a.labels().to_vec(),
                ops,
            }
        })
        .collect();
    let doc = FileDoc {
        name: name.to_string(),
        signature: sig.ops().to_vec(),
        algebras: docs,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| bad(e.to_string()))
}
