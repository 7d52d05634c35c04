//! Plotkin-style syntactic anti-unification, the baseline the equational
//! engine is compared against.

use std::collections::HashMap;

use super::{Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generalization {
    pub term: Term,
    /// One witness per input term: `witnesses[k].apply(&term) == inputs[k]`.
    pub witnesses: Vec<Substitution>,
}

struct AntiUnifier<'a> {
    reserved: Vec<String>,
    minted: HashMap<Vec<&'a Term>, String>,
    order: Vec<(String, Vec<&'a Term>)>,
    counter: usize,
}

impl<'a> AntiUnifier<'a> {
    fn fresh(&mut self) -> String {
        loop {
            self.counter += 1;
            let name = format!("g{}", self.counter);
            if !self.reserved.contains(&name) {
                return name;
            }
        }
    }

    fn run(&mut self, column: Vec<&'a Term>) -> Term {
        let first = column[0];
        if column.iter().all(|t| *t == first) {
            return first.clone();
        }
        if let Term::App(op, args) = first {
            let same_head = column.iter().all(|t| match t {
                Term::App(o, a) => o == op && a.len() == args.len(),
                Term::Var(_) => false,
            });
            if same_head {
                let sub = (0..args.len())
                    .map(|i| {
                        let col = column
                            .iter()
                            .map(|t| match t {
                                Term::App(_, a) => &a[i],
                                Term::Var(_) => unreachable!(),
                            })
                            .collect();
                        self.run(col)
                    })
                    .collect();
                return Term::App(op.clone(), sub);
            }
        }
        if let Some(name) = self.minted.get(&column) {
            return Term::Var(name.clone());
        }
        let name = self.fresh();
        self.minted.insert(column.clone(), name.clone());
        self.order.push((name.clone(), column));
        Term::Var(name)
    }
}

/// Least general generalization of a nonempty list of terms.
///
/// Fresh variables are named `g1, g2, ...` in first-occurrence order, skipping
/// any name already used by an input. Identical columns of disagreeing
/// subterms share one variable.
pub fn lgg_syntactic(ts: &[Term]) -> Generalization {
    assert!(!ts.is_empty(), "lgg of an empty list");
    let mut reserved = Vec::new();
    for t in ts {
        for v in t.vars() {
            if !reserved.contains(&v) {
                reserved.push(v);
            }
        }
    }
    let mut au = AntiUnifier {
        reserved,
        minted: HashMap::new(),
        order: Vec::new(),
        counter: 0,
    };
    let term = au.run(ts.iter().collect());
    let witnesses = (0..ts.len())
        .map(|k| {
            let mut s = Substitution::new();
            for (name, column) in &au.order {
                s.bind(name.clone(), column[k].clone());
            }
            s
        })
        .collect();
    Generalization { term, witnesses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_term, Signature};

    fn sig() -> Signature {
        Signature::new([("f", 2), ("h", 1), ("g", 1), ("a", 0), ("b", 0)]).unwrap()
    }

    fn p(s: &str) -> Term {
        parse_term(s, &sig()).unwrap()
    }

    #[test]
    fn shared_variable_for_repeated_pairs() {
        let g = lgg_syntactic(&[p("f(a,a)"), p("f(b,b)")]);
        assert_eq!(g.term.to_string(), "f(g1,g1)");
        assert_eq!(g.witnesses[0].to_string(), "{g1 -> a}");
        assert_eq!(g.witnesses[1].to_string(), "{g1 -> b}");
    }

    #[test]
    fn single_term() {
        let t = p("f(x,h(a))");
        let g = lgg_syntactic(std::slice::from_ref(&t));
        assert_eq!(g.term, t);
        assert!(g.witnesses[0].is_empty());
    }

    #[test]
    fn head_clash() {
        let g = lgg_syntactic(&[p("h(a)"), p("g(a)")]);
        assert_eq!(g.term.to_string(), "g1");
    }

    #[test]
    fn avoids_user_names() {
        let g = lgg_syntactic(&[p("f(g1,a)"), p("f(g1,b)")]);
        assert_eq!(g.term.to_string(), "f(g1,g2)");
    }

    #[test]
    fn three_terms() {
        let ts = [p("f(a,h(x))"), p("f(b,h(x))"), p("f(a,h(y))")];
        let g = lgg_syntactic(&ts);
        assert_eq!(g.term.to_string(), "f(g1,h(g2))");
        for (w, t) in g.witnesses.iter().zip(&ts) {
            assert_eq!(&w.apply(&g.term), t);
        }
    }
}
