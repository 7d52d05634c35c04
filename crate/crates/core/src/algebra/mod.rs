//! Finite algebras given by total operation tables, and the basic
//! constructions on them: products, generated subalgebras, quotients.

mod congruence;
mod hom;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::term::{Signature, Term};

pub use congruence::{
    congruence_generated, congruence_lattice, join, principal_congruence, Congruence,
    CongruenceLattice,
};
pub use hom::{enumerate_homs, find_isomorphism, find_section, HomIter, Homomorphism};

/// Row-major position of an argument tuple in a table over `size` elements.
pub(crate) fn tuple_index(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// Calls `f` on every tuple in `{0..size}^len`, in lexicographic order.
pub(crate) fn for_each_tuple(size: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if len == 0 {
        f(&[]);
        return;
    }
    if size == 0 {
        return;
    }
    let mut tuple = vec![0; len];
    loop {
        f(&tuple);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < size {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

pub(crate) fn table_cells(sig: &Signature, size: usize) -> u128 {
    sig.ops()
        .iter()
        .map(|o| (size as u128).saturating_pow(o.arity as u32))
        .fold(0u128, |a, b| a.saturating_add(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    sig: Arc<Signature>,
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// Builds an algebra from flat row-major tables, one per operation in
    /// signature order.
    pub fn new(
        name: impl Into<String>,
        sig: Arc<Signature>,
        labels: Vec<String>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |message: String| Error::InvalidAlgebra {
            algebra: name.clone(),
            message,
        };
        let mut label_index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(invalid(format!("duplicate element label `{l}`")));
            }
        }
        if tables.len() != sig.len() {
            return Err(invalid(format!(
                "{} tables for {} operations",
                tables.len(),
                sig.len()
            )));
        }
        let n = labels.len();
        for (op, table) in sig.ops().iter().zip(&tables) {
            let expected = n.checked_pow(op.arity as u32).ok_or_else(|| {
                invalid(format!("table of `{}` too large", op.name))
            })?;
            if table.len() != expected {
                return Err(invalid(format!(
                    "table of `{}` has {} entries, expected {expected}",
                    op.name,
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&v| v >= n) {
                return Err(invalid(format!(
                    "table of `{}` refers to element {bad} outside the universe",
                    op.name
                )));
            }
        }
        Ok(FiniteAlgebra {
            name,
            sig,
            labels,
            label_index,
            tables,
        })
    }

    /// Builds the tables by calling `f(op, args)` for every argument tuple.
    pub fn from_fn(
        name: impl Into<String>,
        sig: Arc<Signature>,
        labels: Vec<String>,
        mut f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let n = labels.len();
        let tables = sig
            .ops()
            .iter()
            .enumerate()
            .map(|(op, sym)| {
                let mut table = Vec::with_capacity(n.pow(sym.arity as u32));
                for_each_tuple(n, sym.arity, |args| table.push(f(op, args)));
                table
            })
            .collect();
        Self::new(name, sig, labels, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][tuple_index(self.size(), args)]
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.sig.index_of(name)
    }

    /// Evaluates `t` with variables resolved by `env`.
    pub fn eval(&self, t: &Term, env: &dyn Fn(&str) -> Option<usize>) -> Result<usize> {
        t.fold(
            &mut |v| env(v).ok_or_else(|| Error::UnknownVariable(v.to_string())),
            &mut |op, args| {
                let idx = self.sig.index_of(op).ok_or_else(|| Error::UnknownOperation {
                    name: op.to_string(),
                    offset: 0,
                })?;
                Ok(self.apply(idx, &args))
            },
        )
    }

    /// Smallest subset containing `gens` and closed under every operation
    /// (so it includes all constants). Returned sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.size();
        let mut member = vec![false; n];
        let mut elems: Vec<usize> = Vec::new();
        for &g in gens {
            if !member[g] {
                member[g] = true;
                elems.push(g);
            }
        }
        loop {
            let before = elems.len();
            for (op, sym) in self.sig.ops().iter().enumerate() {
                let current = elems.clone();
                for_each_tuple(current.len(), sym.arity, |pos| {
                    let args: Vec<usize> = pos.iter().map(|&p| current[p]).collect();
                    let v = self.apply(op, &args);
                    if !member[v] {
                        member[v] = true;
                        elems.push(v);
                    }
                });
            }
            if elems.len() == before {
                break;
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Restriction of the tables to a subset that is closed under the
    /// operations. `elems` must be sorted.
    pub fn restrict(&self, elems: &[usize], name: impl Into<String>) -> Result<FiniteAlgebra> {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        let mut missing = None;
        let sub = FiniteAlgebra::from_fn(name, self.sig.clone(), labels, |op, args| {
            let full: Vec<usize> = args.iter().map(|&a| elems[a]).collect();
            let v = self.apply(op, &full);
            match pos.get(&v) {
                Some(&p) => p,
                None => {
                    missing = Some(v);
                    0
                }
            }
        })?;
        match missing {
            Some(v) => Err(Error::InvalidAlgebra {
                algebra: self.name.clone(),
                message: format!("subset not closed, produces `{}`", self.labels[v]),
            }),
            None => Ok(sub),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{{}}}", self.name, self.labels.join(", "))
    }
}

/// A direct product together with its factors; elements are tuples in
/// lexicographic order (first factor most significant).
#[derive(Debug, Clone)]
pub struct Product {
    pub algebra: Arc<FiniteAlgebra>,
    pub factors: Vec<Arc<FiniteAlgebra>>,
}

impl Product {
    pub fn decode(&self, mut e: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            out[k] = e % f.size();
            e /= f.size();
        }
        out
    }

    pub fn encode(&self, parts: &[usize]) -> usize {
        parts
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&p, f)| acc * f.size() + p)
    }

    pub fn projection(&self, k: usize) -> Homomorphism {
        let map = (0..self.algebra.size()).map(|e| self.decode(e)[k]).collect();
        Homomorphism::new_unchecked(self.algebra.clone(), self.factors[k].clone(), map)
    }
}

pub fn direct_product(factors: &[Arc<FiniteAlgebra>]) -> Result<Product> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Precondition("empty direct product".into()))?;
    let sig = first.sig().clone();
    if let Some(bad) = factors.iter().find(|a| a.sig() != &sig) {
        return Err(Error::SignatureMismatch(format!(
            "`{}` and `{}` have different signatures",
            first.name(),
            bad.name()
        )));
    }
    let mut product = Product {
        algebra: first.clone(),
        factors: factors.to_vec(),
    };
    let size: usize = factors.iter().map(|a| a.size()).product();
    let labels = (0..size)
        .map(|e| {
            let parts = product.decode(e);
            let inner: Vec<&str> = parts
                .iter()
                .zip(factors)
                .map(|(&p, a)| a.label(p))
                .collect();
            format!("({})", inner.join(","))
        })
        .collect();
    let name = factors
        .iter()
        .map(|a| a.name())
        .collect::<Vec<_>>()
        .join(" x ");
    let decoded: Vec<Vec<usize>> = (0..size).map(|e| product.decode(e)).collect();
    let algebra = FiniteAlgebra::from_fn(name, sig, labels, |op, args| {
        let parts: Vec<usize> = (0..factors.len())
            .map(|k| {
                let comp: Vec<usize> = args.iter().map(|&a| decoded[a][k]).collect();
                factors[k].apply(op, &comp)
            })
            .collect();
        product.encode(&parts)
    })?;
    product.algebra = Arc::new(algebra);
    Ok(product)
}

/// The subalgebra generated by `gens` together with its inclusion map.
pub fn subalgebra_generated(
    a: &Arc<FiniteAlgebra>,
    gens: &[usize],
) -> Result<(Arc<FiniteAlgebra>, Homomorphism)> {
    let elems = a.closure(gens);
    let sub = Arc::new(a.restrict(&elems, format!("Sg({})", a.name()))?);
    let incl = Homomorphism::new_unchecked(sub.clone(), a.clone(), elems);
    Ok((sub, incl))
}

/// Quotient by a congruence, with the natural epimorphism. Classes are listed
/// in order of their least member and labelled by it.
pub fn quotient(a: &Arc<FiniteAlgebra>, theta: &Congruence) -> Result<(Arc<FiniteAlgebra>, Homomorphism)> {
    if theta.len() != a.size() || !theta.is_compatible(a) {
        return Err(Error::Precondition(format!("not a congruence of `{}`", a.name())));
    }
    let reps = theta.representatives();
    let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let labels = reps.iter().map(|&r| a.label(r).to_string()).collect();
    let q = FiniteAlgebra::from_fn(format!("{}/θ", a.name()), a.sig().clone(), labels, |op, args| {
        let full: Vec<usize> = args.iter().map(|&c| reps[c]).collect();
        pos[&theta.class_of(a.apply(op, &full))]
    })?;
    let q = Arc::new(q);
    let map = (0..a.size()).map(|e| pos[&theta.class_of(e)]).collect();
    Ok((q.clone(), Homomorphism::new_unchecked(a.clone(), q, map)))
}

/// Smallest generating set, found by exhaustive search in increasing size;
/// the first witness in lexicographic element order wins.
pub fn min_generators(a: &FiniteAlgebra) -> (usize, Vec<usize>) {
    let n = a.size();
    for k in 0..=n {
        let mut found = None;
        for_each_subset(n, k, |subset| {
            if found.is_none() && a.closure(subset).len() == n {
                found = Some(subset.to_vec());
            }
        });
        if let Some(gens) = found {
            return (k, gens);
        }
    }
    unreachable!("the whole universe generates the algebra")
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut f);
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn lattice_sig() -> Arc<Signature> {
        Arc::new(
            Signature::new([("and", 2), ("or", 2), ("not", 1), ("zero", 0), ("one", 0)]).unwrap(),
        )
    }

    fn chain_labels(labels: &[&str]) -> Vec<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    /// A Kleene chain whose negation reverses the order.
    pub fn kleene_chain(labels: &[&str]) -> Arc<FiniteAlgebra> {
        let n = labels.len();
        Arc::new(
            FiniteAlgebra::from_fn(format!("K{n}"), lattice_sig(), chain_labels(labels), |op, a| {
                match op {
                    0 => a[0].min(a[1]),
                    1 => a[0].max(a[1]),
                    2 => n - 1 - a[0],
                    3 => 0,
                    _ => n - 1,
                }
            })
            .unwrap(),
        )
    }

    pub fn boolean2() -> Arc<FiniteAlgebra> {
        Arc::new(kleene_chain(&["0", "1"]).as_ref().clone().with_name("2"))
    }

    pub fn boolean4() -> Arc<FiniteAlgebra> {
        // bit vectors over two atoms
        Arc::new(
            FiniteAlgebra::from_fn("4", lattice_sig(), chain_labels(&["0", "a", "b", "1"]), |op, x| {
                match op {
                    0 => x[0] & x[1],
                    1 => x[0] | x[1],
                    2 => 3 - x[0],
                    3 => 0,
                    _ => 3,
                }
            })
            .unwrap(),
        )
    }

    pub fn n3() -> Arc<FiniteAlgebra> {
        let sig = Arc::new(Signature::new([("plus", 2), ("zero", 0)]).unwrap());
        Arc::new(
            FiniteAlgebra::from_fn("N3", sig, chain_labels(&["0", "1", "2", "3"]), |op, a| match op {
                0 => (a[0] + a[1]).min(3),
                _ => 0,
            })
            .unwrap(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn products() {
        let p = direct_product(&[boolean2(), boolean2()]).unwrap();
        assert_eq!(p.algebra.size(), 4);
        assert_eq!(p.algebra.labels(), ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        let k3 = kleene_chain(&["0", "a", "1"]);
        let p = direct_product(&[k3.clone(), k3.clone()]).unwrap();
        assert_eq!(p.algebra.size(), 9);
        for k in 0..2 {
            assert!(Homomorphism::new(p.algebra.clone(), k3.clone(), p.projection(k).map().to_vec()).is_ok());
        }
        assert!(direct_product(&[]).is_err());
        assert!(matches!(
            direct_product(&[boolean2(), n3()]),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn generated_subalgebras() {
        let k3 = kleene_chain(&["0", "a", "1"]);
        let (s, _) = subalgebra_generated(&k3, &[1]).unwrap();
        assert_eq!(s.size(), 3);

        let n3 = n3();
        let (s, incl) = subalgebra_generated(&n3, &[2]).unwrap();
        assert_eq!(s.labels(), ["0", "2", "3"]);
        assert_eq!(incl.map(), [0, 2, 3]);

        let (s, _) = subalgebra_generated(&n3, &[0, 1, 2, 3]).unwrap();
        assert_eq!(s.as_ref().clone().with_name("N3"), *n3);
    }

    #[test]
    fn quotients() {
        let b4 = boolean4();
        let (q, _) = quotient(&b4, &Congruence::delta(4)).unwrap();
        assert_eq!(q.size(), 4);
        let (q, nat) = quotient(&b4, &Congruence::nabla(4)).unwrap();
        assert_eq!(q.size(), 1);
        assert_eq!(nat.map(), [0, 0, 0, 0]);
    }

    #[test]
    fn generators() {
        assert_eq!(min_generators(&boolean4()), (1, vec![1]));
        assert_eq!(min_generators(&boolean2()), (0, vec![]));
        assert_eq!(min_generators(&n3()), (1, vec![1]));
        let k3 = kleene_chain(&["0", "a", "1"]);
        let p = direct_product(&[k3.clone(), k3]).unwrap();
        assert_eq!(min_generators(&p.algebra).0, 2);
    }
}
