//! Signatures, first-order terms and substitutions.

mod lgg;
mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lgg::{lgg_syntactic, Generalization};
pub use parse::{parse_term, parse_term_unchecked};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols. The order is significant: it drives
/// table layout, representative ranking and every deterministic tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    ops: Vec<OpSymbol>,
    index: HashMap<String, usize>,
}

impl Signature {
    pub fn new<I, S>(ops: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for (name, arity) in ops {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(Error::InvalidSignature(format!(
                    "`{name}` is not a valid operation name"
                )));
            }
            if index.insert(name.clone(), list.len()).is_some() {
                return Err(Error::InvalidSignature(format!(
                    "duplicate operation `{name}`"
                )));
            }
            list.push(OpSymbol { name, arity });
        }
        Ok(Signature { ops: list, index })
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn op(&self, idx: usize) -> &OpSymbol {
        &self.ops[idx]
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.ops[i].arity)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.arity).max().unwrap_or(0)
    }

    pub fn constants(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, o)| o.arity == 0)
            .map(|(i, _)| i)
    }

    /// Checks that every application in `t` names a known operation with the
    /// right number of arguments.
    pub fn check(&self, t: &Term) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let arity = self.arity_of(op).ok_or_else(|| Error::UnknownOperation {
                    name: op.clone(),
                    offset: 0,
                })?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        name: op.clone(),
                        expected: arity,
                        found: args.len(),
                        offset: 0,
                    });
                }
                args.iter().try_for_each(|a| self.check(a))
            }
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<String>) -> Term {
        Term::App(op.into(), Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) if args.is_empty() => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// All distinct subterms, smallest first (ties by printed form).
    pub fn subterms(&self) -> Vec<Term> {
        let mut all = Vec::new();
        self.collect_subterms(&mut all);
        all.sort_by_cached_key(|t| (t.size(), t.to_string()));
        all.dedup();
        all
    }

    fn collect_subterms(&self, out: &mut Vec<Term>) {
        out.push(self.clone());
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.collect_subterms(out));
        }
    }

    /// Bottom-up evaluation; `var` resolves variables, `app` combines already
    /// evaluated arguments.
    pub fn fold<T, V, A>(&self, var: &mut V, app: &mut A) -> Result<T>
    where
        V: FnMut(&str) -> Result<T>,
        A: FnMut(&str, Vec<T>) -> Result<T>,
    {
        match self {
            Term::Var(v) => var(v),
            Term::App(op, args) => {
                let vals = args
                    .iter()
                    .map(|a| a.fold(var, app))
                    .collect::<Result<Vec<T>>>()?;
                app(op, vals)
            }
        }
    }

    /// Simultaneous renaming/replacement of a single variable.
    pub fn replace_var(&self, name: &str, with: &Term) -> Term {
        match self {
            Term::Var(v) if v == name => with.clone(),
            Term::Var(_) => self.clone(),
            Term::App(op, args) => Term::App(
                op.clone(),
                args.iter().map(|a| a.replace_var(name, with)).collect(),
            ),
        }
    }
}

/// Canonical prefix printer: `op(a,b)`, bare nullary operations, no spaces.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) => {
                f.write_str(op)?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A finite map from variables to terms; unbound variables are left alone.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(var: impl Into<String>, t: Term) -> Self {
        let mut s = Self::new();
        s.bind(var, t);
        s
    }

    pub fn bind(&mut self, var: impl Into<String>, t: Term) {
        self.bindings.insert(var.into(), t);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// `self.compose(other)` applies `other` first, then `self`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &other.bindings {
            out.bind(v.clone(), self.apply(t));
        }
        for (v, t) in &self.bindings {
            if !other.bindings.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

pub fn apply_subst(s: &Substitution, t: &Term) -> Term {
    s.apply(t)
}
