use std::sync::Arc;

use algen::term::{apply_subst, lgg_syntactic, parse_term, parse_term_unchecked, Signature, Substitution, Term};
use algen::Error;
use proptest::prelude::*;

fn kleene_sig() -> Arc<Signature> {
    Arc::new(Signature::new([("and", 2), ("or", 2), ("not", 1), ("zero", 0), ("one", 0)]).unwrap())
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["x", "y", "z", "w1"]).prop_map(Term::var),
        prop::sample::select(vec!["zero", "one"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("not", vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("and", vec![a, b])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("or", vec![a, b])),
        ]
    })
}

fn subst_strategy() -> impl Strategy<Value = Substitution> {
    prop::collection::vec((prop::sample::select(vec!["x", "y", "z"]), term_strategy()), 0..3).prop_map(|bs| {
        let mut s = Substitution::new();
        for (v, t) in bs {
            s.bind(v, t);
        }
        s
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(t in term_strategy()) {
        let sig = kleene_sig();
        prop_assert_eq!(parse_term(&t.to_string(), &sig).unwrap(), t);
    }

    #[test]
    fn composition_applies_right_to_left(s in subst_strategy(), r in subst_strategy(), t in term_strategy()) {
        prop_assert_eq!(s.compose(&r).apply(&t), s.apply(&r.apply(&t)));
    }

    #[test]
    fn lgg_witnesses_recover_inputs(ts in prop::collection::vec(term_strategy(), 1..4)) {
        let g = lgg_syntactic(&ts);
        prop_assert_eq!(g.witnesses.len(), ts.len());
        for (s, t) in g.witnesses.iter().zip(&ts) {
            prop_assert_eq!(&s.apply(&g.term), t);
        }
    }
}

#[test]
fn parser_examples() {
    let sig = kleene_sig();
    let t = parse_term("and(x,not(x))", &sig).unwrap();
    assert_eq!(t, Term::app("and", vec![Term::var("x"), Term::app("not", vec![Term::var("x")])]));
    assert_eq!(parse_term("1", &sig).unwrap(), Term::constant("one"));
    assert_eq!(parse_term(" x ∧ ¬ x ", &sig).unwrap(), t);
    let f = Signature::new([("f", 2)]).unwrap();
    match parse_term("f(x", &f) {
        Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    assert!(matches!(parse_term("g(x)", &f), Err(Error::UnknownOperation { .. })));
    assert!(matches!(parse_term("f(x)", &f), Err(Error::ArityMismatch { .. })));
}

#[test]
fn substitution_examples() {
    let sig = kleene_sig();
    let and_xy = parse_term("and(x,y)", &sig).unwrap();
    assert_eq!(apply_subst(&Substitution::single("z", and_xy.clone()), &Term::var("z")), and_xy);
    let t = parse_term("and(z,not(z))", &sig).unwrap();
    assert_eq!(apply_subst(&Substitution::new(), &t), t);
    assert_eq!(
        apply_subst(&Substitution::single("z", Term::var("x")), &t),
        parse_term("and(x,not(x))", &sig).unwrap()
    );
}

/// `general` matches `t` syntactically: some substitution maps one onto the other.
fn matches(general: &Term, t: &Term, s: &mut Substitution) -> bool {
    match (general, t) {
        (Term::Var(v), _) => match s.get(v) {
            Some(bound) => bound == t,
            None => {
                s.bind(v.clone(), t.clone());
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| matches(x, y, s))
        }
        _ => false,
    }
}

/// All terms over `f/2, g/1, a, b` and two variables up to the given depth.
fn all_terms(depth: usize) -> Vec<Term> {
    let mut out: Vec<Term> = vec![Term::var("v1"), Term::var("v2"), Term::constant("a"), Term::constant("b")];
    for _ in 0..depth {
        let prev = out.clone();
        for x in &prev {
            out.push(Term::app("g", vec![x.clone()]));
            for y in &prev {
                out.push(Term::app("f", vec![x.clone(), y.clone()]));
            }
        }
        out.sort_by_key(|t| t.to_string());
        out.dedup();
    }
    out
}

#[test]
fn lgg_is_least_general_by_brute_force() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["f(a,a)", "f(b,b)"],
        vec!["f(a)", "g(a)"],
        vec!["f(a,b)", "f(b,a)"],
        vec!["f(g(a),a)", "f(g(b),b)", "f(g(a),a)"],
        vec!["g(f(a,b))", "g(f(b,b))"],
    ];
    let candidates = all_terms(2);
    for srcs in cases {
        let ts: Vec<Term> = srcs.iter().map(|s| parse_term_unchecked(s).unwrap()).collect();
        let g = lgg_syntactic(&ts);
        for (s, t) in g.witnesses.iter().zip(&ts) {
            assert_eq!(&s.apply(&g.term), t);
        }
        for u in &candidates {
            if ts.iter().all(|t| matches(u, t, &mut Substitution::new())) {
                assert!(
                    matches(u, &g.term, &mut Substitution::new()),
                    "{u} generalizes {srcs:?} but is not more general than {}",
                    g.term
                );
            }
        }
    }
}

#[test]
fn lgg_examples() {
    let ts = vec![parse_term_unchecked("f(a,a)").unwrap(), parse_term_unchecked("f(b,b)").unwrap()];
    let g = lgg_syntactic(&ts);
    assert_eq!(g.term.to_string(), "f(g1,g1)");
    assert_eq!(g.witnesses[0].to_string(), "{g1 -> a}");
    assert_eq!(g.witnesses[1].to_string(), "{g1 -> b}");

    let t = parse_term_unchecked("f(x,a)").unwrap();
    let g = lgg_syntactic(std::slice::from_ref(&t));
    assert_eq!(g.term, t);
    assert!(g.witnesses[0].is_empty());

    let g = lgg_syntactic(&[parse_term_unchecked("f(a)").unwrap(), parse_term_unchecked("g(a)").unwrap()]);
    assert_eq!(g.term, Term::var("g1"));

    // minted names avoid input variables
    let g = lgg_syntactic(&[parse_term_unchecked("f(g1,a)").unwrap(), parse_term_unchecked("f(g1,b)").unwrap()]);
    assert_eq!(g.term.to_string(), "f(g1,g2)");
}
