#![allow(dead_code)]

use std::sync::Arc;

use algen::algebra::FiniteAlgebra;
use algen::term::{Signature, Term};
use algen::variety::Variety;
use rand::seq::SliceRandom;
use rand::Rng;

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

pub fn de_morgan_sig() -> Arc<Signature> {
    Arc::new(Signature::new([("and", 2), ("or", 2), ("not", 1), ("zero", 0), ("one", 0)]).unwrap())
}

/// A chain `0 < ... < n-1` with order-reversing negation.
pub fn chain(name: &str, ls: &[&str]) -> Arc<FiniteAlgebra> {
    let n = ls.len();
    Arc::new(
        FiniteAlgebra::from_fn(name, de_morgan_sig(), labels(ls), |op, a| match op {
            0 => a[0].min(a[1]),
            1 => a[0].max(a[1]),
            2 => n - 1 - a[0],
            3 => 0,
            _ => n - 1,
        })
        .unwrap(),
    )
}

pub fn boolean() -> Variety {
    Variety::new("Boolean algebras", vec![chain("2", &["0", "1"])]).unwrap()
}

pub fn k3() -> Arc<FiniteAlgebra> {
    chain("K3", &["0", "a", "1"])
}

pub fn kleene() -> Variety {
    Variety::new("Kleene algebras", vec![k3()]).unwrap()
}

pub fn godel_chain(name: &str, ls: &[&str]) -> Arc<FiniteAlgebra> {
    let sig = Arc::new(Signature::new([("and", 2), ("or", 2), ("imp", 2), ("zero", 0), ("one", 0)]).unwrap());
    let n = ls.len();
    Arc::new(
        FiniteAlgebra::from_fn(name, sig, labels(ls), |op, a| match op {
            0 => a[0].min(a[1]),
            1 => a[0].max(a[1]),
            2 => {
                if a[0] <= a[1] {
                    n - 1
                } else {
                    a[1]
                }
            }
            3 => 0,
            _ => n - 1,
        })
        .unwrap(),
    )
}

pub fn g3() -> Arc<FiniteAlgebra> {
    godel_chain("G3", &["0", "x", "1"])
}

pub fn g4() -> Arc<FiniteAlgebra> {
    godel_chain("G4", &["0", "a", "b", "1"])
}

pub fn n3() -> Arc<FiniteAlgebra> {
    let sig = Arc::new(Signature::new([("plus", 2), ("zero", 0)]).unwrap());
    Arc::new(
        FiniteAlgebra::from_fn("N3", sig, labels(&["0", "1", "2", "3"]), |op, a| match op {
            0 => (a[0] + a[1]).min(3),
            _ => 0,
        })
        .unwrap(),
    )
}

pub fn semilattice() -> Variety {
    let sig = Arc::new(Signature::new([("join", 2)]).unwrap());
    let s2 = FiniteAlgebra::from_fn("S2", sig, labels(&["0", "1"]), |_, a| a[0].max(a[1])).unwrap();
    Variety::new("Semilattices", vec![Arc::new(s2)]).unwrap()
}

pub fn lattice() -> Variety {
    let sig = Arc::new(Signature::new([("meet", 2), ("join", 2)]).unwrap());
    let l2 = FiniteAlgebra::from_fn("L2", sig, labels(&["0", "1"]), |op, a| {
        if op == 0 {
            a[0].min(a[1])
        } else {
            a[0].max(a[1])
        }
    })
    .unwrap();
    Variety::new("Distributive lattices", vec![Arc::new(l2)]).unwrap()
}

/// A random term of depth at most `depth` over `vars` and the signature.
pub fn random_term(rng: &mut impl Rng, sig: &Signature, vars: &[&str], depth: usize) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        let constants: Vec<&str> = sig
            .ops()
            .iter()
            .filter(|o| o.arity == 0)
            .map(|o| o.name.as_str())
            .collect();
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
