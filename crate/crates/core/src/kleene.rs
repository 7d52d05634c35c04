//! Finite duality for Kleene algebras: involutive posets of join-irreducible
//! elements, and the dual criteria for projectivity and exactness.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::term::Term;
use crate::variety::Variety;

/// Operation indices of a Kleene algebra, resolved by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KleeneOps {
    pub and: usize,
    pub or: usize,
    pub not: usize,
    pub zero: usize,
    pub one: usize,
}

const NAMES: [(&str, &[&str], usize); 5] = [
    ("meet", &["and", "meet"], 2),
    ("join", &["or", "join"], 2),
    ("negation", &["not", "neg"], 1),
    ("bottom", &["zero", "bot"], 0),
    ("top", &["one", "top"], 0),
];

fn resolve(a: &FiniteAlgebra) -> Result<(KleeneOps, [String; 5])> {
    let mut idx = [0usize; 5];
    let mut names: [String; 5] = Default::default();
    for (k, (role, aliases, arity)) in NAMES.iter().enumerate() {
        let found = aliases
            .iter()
            .find_map(|n| a.op_index(n).map(|i| (i, *n)))
            .filter(|&(i, _)| a.sig().op(i).arity == *arity)
            .ok_or_else(|| {
                Error::NotKleene(format!(
                    "`{}` has no {role} operation (expected one of {})",
                    a.name(),
                    aliases.join(", ")
                ))
            })?;
        idx[k] = found.0;
        names[k] = found.1.to_string();
    }
    let ops = KleeneOps {
        and: idx[0],
        or: idx[1],
        not: idx[2],
        zero: idx[3],
        one: idx[4],
    };
    Ok((ops, names))
}

/// Checks the Kleene algebra axioms and returns the resolved operations.
/// The error names the first axiom that fails.
pub fn verify_kleene(a: &Arc<FiniteAlgebra>) -> Result<KleeneOps> {
    let (ops, [and, or, not, zero, one]) = resolve(a)?;
    let x = || Term::var("x");
    let y = || Term::var("y");
    let z = || Term::var("z");
    let m = |p: Term, q: Term| Term::app(and.as_str(), vec![p, q]);
    let j = |p: Term, q: Term| Term::app(or.as_str(), vec![p, q]);
    let n = |p: Term| Term::app(not.as_str(), vec![p]);
    let axioms: Vec<(&str, Term, Term)> = vec![
        ("meet is associative", m(x(), m(y(), z())), m(m(x(), y()), z())),
        ("meet is commutative", m(x(), y()), m(y(), x())),
        ("join is associative", j(x(), j(y(), z())), j(j(x(), y()), z())),
        ("join is commutative", j(x(), y()), j(y(), x())),
        ("absorption", m(x(), j(x(), y())), x()),
        ("absorption", j(x(), m(x(), y())), x()),
        ("distributivity", m(x(), j(y(), z())), j(m(x(), y()), m(x(), z()))),
        ("bottom", m(x(), Term::constant(zero.as_str())), Term::constant(zero.as_str())),
        ("top", j(x(), Term::constant(one.as_str())), Term::constant(one.as_str())),
        ("involution", n(n(x())), x()),
        ("De Morgan", n(m(x(), y())), j(n(x()), n(y()))),
        ("Kleene identity", m(m(x(), n(x())), j(y(), n(y()))), m(x(), n(x()))),
    ];
    let v = Variety::new(a.name(), vec![a.clone()])?;
    for (name, s, t) in axioms {
        if !v.holds_identity(&s, &t)? {
            return Err(Error::NotKleene(format!(
                "`{}` violates {name}: {s} = {t}",
                a.name()
            )));
        }
    }
    Ok(ops)
}

/// A finite poset with an order-reversing involution `ι` such that every
/// point is comparable with its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutivePoset {
    pub labels: Vec<String>,
    /// `leq[i][j]` iff point i ≤ point j.
    pub leq: Vec<Vec<bool>>,
    pub iota: Vec<usize>,
}

impl InvolutivePoset {
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>, iota: Vec<usize>) -> Result<Self> {
        let p = InvolutivePoset { labels, leq, iota };
        p.validate()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        let bad = |m: String| Err(Error::Verification(m));
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) || self.iota.len() != n {
            return bad("order or involution has the wrong size".into());
        }
        if self.iota.iter().any(|&i| i >= n) {
            return bad("involution leaves the poset".into());
        }
        for x in 0..n {
            if !self.leq(x, x) {
                return bad(format!("order is not reflexive at {}", self.labels[x]));
            }
            let ix = self.iota[x];
            if self.iota[ix] != x {
                return bad(format!("ι is not an involution at {}", self.labels[x]));
            }
            if !self.leq(x, ix) && !self.leq(ix, x) {
                return bad(format!("{} is incomparable with its image", self.labels[x]));
            }
            for y in 0..n {
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return bad("order is not antisymmetric".into());
                }
                if self.leq(x, y) && !self.leq(self.iota[y], ix) {
                    return bad(format!(
                        "ι does not reverse {} ≤ {}",
                        self.labels[x], self.labels[y]
                    ));
                }
                for w in 0..n {
                    if self.leq(x, y) && self.leq(y, w) && !self.leq(x, w) {
                        return bad("order is not transitive".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairs `(x, y)` with `y` covering `x`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && self.leq(x, y)
                    && !(0..n).any(|w| w != x && w != y && self.leq(x, w) && self.leq(w, y))
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// An order- and involution-preserving bijection onto `other`, if any.
    pub fn isomorphism(&self, other: &InvolutivePoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        fn extend(a: &InvolutivePoset, b: &InvolutivePoset, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
            let x = map.len();
            if x == a.len() {
                return (0..x).all(|i| map[a.iota[i]] == b.iota[map[i]]);
            }
            for y in 0..b.len() {
                if used[y] || (0..x).any(|i| a.leq(i, x) != b.leq(map[i], y) || a.leq(x, i) != b.leq(y, map[i])) {
                    continue;
                }
                used[y] = true;
                map.push(y);
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[y] = false;
            }
            false
        }
        let mut map = Vec::with_capacity(n);
        extend(self, other, &mut map, &mut vec![false; n]).then_some(map)
    }

    /// Covers as plain edges, `ι` as dashed arcs (fixpoints double-circled).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph P {\n  rankdir=BT;\n");
        for (i, l) in self.labels.iter().enumerate() {
            let shape = if self.iota[i] == i { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  p{i} [label=\"{}\", shape={shape}];", l.replace('"', "\\\""));
        }
        for (x, y) in self.covers() {
            let _ = writeln!(out, "  p{x} -> p{y} [arrowhead=none];");
        }
        for (x, &ix) in self.iota.iter().enumerate() {
            if x < ix {
                let _ = writeln!(out, "  p{x} -> p{ix} [style=dashed, dir=both, constraint=false];");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn order<'a>(a: &'a FiniteAlgebra, ops: &KleeneOps) -> impl Fn(usize, usize) -> bool + 'a {
    let and = ops.and;
    move |x, y| a.apply(and, &[x, y]) == x
}

/// Elements that are not the join of the elements strictly below them.
pub fn join_irreducibles(a: &FiniteAlgebra, ops: &KleeneOps) -> Vec<usize> {
    let le = order(a, ops);
    let bottom = a.apply(ops.zero, &[]);
    (0..a.size())
        .filter(|&x| {
            let below = (0..a.size())
                .filter(|&y| y != x && le(y, x))
                .fold(bottom, |acc, y| a.apply(ops.or, &[acc, y]));
            below != x
        })
        .collect()
}

/// The dual of a finite Kleene algebra: its join-irreducible elements with
/// `ι(x) = ⋀ (A − {¬a : x ≤ a})`.
pub fn dual_poset(a: &Arc<FiniteAlgebra>) -> Result<InvolutivePoset> {
    let ops = verify_kleene(a)?;
    let le = order(a, &ops);
    let points = join_irreducibles(a, &ops);
    let top = a.apply(ops.one, &[]);
    let mut iota = Vec::with_capacity(points.len());
    for &x in &points {
        let excluded: Vec<usize> = (0..a.size())
            .filter(|&y| le(x, y))
            .map(|y| a.apply(ops.not, &[y]))
            .collect();
        let v = (0..a.size())
            .filter(|e| !excluded.contains(e))
            .fold(top, |acc, e| a.apply(ops.and, &[acc, e]));
        let i = points.iter().position(|&p| p == v).ok_or_else(|| {
            Error::Verification(format!("ι({}) = {} is not join irreducible", a.label(x), a.label(v)))
        })?;
        iota.push(i);
    }
    let leq = points
        .iter()
        .map(|&x| points.iter().map(|&y| le(x, y)).collect())
        .collect();
    let labels = points.iter().map(|&x| a.label(x).to_string()).collect();
    InvolutivePoset::new(labels, leq, iota)
}

/// The four dual conditions for projectivity, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Every `x ≤ ι(x)` lies below a fixpoint of ι.
    FixpointAbove = 1,
    /// `{x : x ≤ ι(x)}` is 3-complete.
    ThreeComplete = 2,
    /// `{x : x ≤ ι(x)}` is a non-empty meet-semilattice.
    MeetSemilattice = 3,
    /// Points below each other's images have a common upper bound `w ≤ ι(w)`.
    CommonUpperBound = 4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityVerdict {
    pub projective: bool,
    pub failed: Option<Condition>,
    pub detail: String,
}

const MAX_SUBSET_POINTS: usize = 20;

/// Checks the dual characterization of projective Kleene algebras; reports the
/// first condition that fails.
pub fn is_projective_by_duality(p: &InvolutivePoset) -> Result<DualityVerdict> {
    let n = p.len();
    let lab = |x: usize| p.labels[x].as_str();
    let neg: Vec<usize> = (0..n).filter(|&x| p.leq(x, p.iota[x])).collect();
    let fail = |c: Condition, detail: String| {
        Ok(DualityVerdict {
            projective: false,
            failed: Some(c),
            detail,
        })
    };

    for &x in &neg {
        if !(0..n).any(|y| p.leq(x, y) && p.iota[y] == y) {
            return fail(
                Condition::FixpointAbove,
                format!("no fixpoint of ι lies above {}", lab(x)),
            );
        }
    }

    if neg.len() > MAX_SUBSET_POINTS {
        return Err(Error::Budget {
            what: "checking 3-completeness".into(),
            needed: 1u128 << neg.len(),
            limit: 1u128 << MAX_SUBSET_POINTS,
        });
    }
    let upper_in_neg = |xs: &[usize]| -> Vec<usize> {
        neg.iter()
            .copied()
            .filter(|&u| xs.iter().all(|&x| p.leq(x, u)))
            .collect()
    };
    let least = |set: &[usize]| set.iter().copied().find(|&l| set.iter().all(|&u| p.leq(l, u)));
    for mask in 1u64..(1u64 << neg.len()) {
        let xs: Vec<usize> = (0..neg.len()).filter(|i| mask & (1 << i) != 0).map(|i| neg[i]).collect();
        let pairwise = xs
            .iter()
            .enumerate()
            .all(|(i, &a)| xs[i + 1..].iter().all(|&b| !upper_in_neg(&[a, b]).is_empty()));
        if pairwise && least(&upper_in_neg(&xs)).is_none() {
            let names: Vec<&str> = xs.iter().map(|&x| lab(x)).collect();
            return fail(
                Condition::ThreeComplete,
                format!("{{{}}} is pairwise bounded but has no join", names.join(", ")),
            );
        }
    }

    if neg.is_empty() {
        return fail(Condition::MeetSemilattice, "no point lies below its image".into());
    }
    for (i, &a) in neg.iter().enumerate() {
        for &b in &neg[i + 1..] {
            let lower: Vec<usize> = neg
                .iter()
                .copied()
                .filter(|&l| p.leq(l, a) && p.leq(l, b))
                .collect();
            let greatest = lower.iter().copied().find(|&g| lower.iter().all(|&l| p.leq(l, g)));
            if greatest.is_none() {
                return fail(
                    Condition::MeetSemilattice,
                    format!("{} and {} have no meet", lab(a), lab(b)),
                );
            }
        }
    }

    for x in 0..n {
        for y in 0..n {
            let (ix, iy) = (p.iota[x], p.iota[y]);
            if p.leq(x, ix) && p.leq(x, iy) && p.leq(y, ix) && p.leq(y, iy)
                && !(0..n).any(|w| p.leq(x, w) && p.leq(y, w) && p.leq(w, p.iota[w]))
            {
                return fail(
                    Condition::CommonUpperBound,
                    format!("{} and {} have no common upper bound w ≤ ι(w)", lab(x), lab(y)),
                );
            }
        }
    }

    Ok(DualityVerdict {
        projective: true,
        failed: None,
        detail: "all four conditions hold".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiEqVerdict {
    pub exact: bool,
    pub reason: String,
}

/// A Kleene algebra is exact iff it is non-trivial, 1 is join irreducible,
/// and `¬x ≤ x, x ∧ ¬y ≤ ¬x ∨ y` imply `¬y ≤ y`.
pub fn is_exact_by_quasieq(a: &Arc<FiniteAlgebra>) -> Result<QuasiEqVerdict> {
    let ops = verify_kleene(a)?;
    let verdict = |exact: bool, reason: String| Ok(QuasiEqVerdict { exact, reason });
    if a.is_trivial() {
        return verdict(false, "the algebra is trivial".into());
    }
    let top = a.apply(ops.one, &[]);
    if !join_irreducibles(a, &ops).contains(&top) {
        return verdict(false, "1 is not join irreducible".into());
    }
    let le = order(a, &ops);
    let not = |x: usize| a.apply(ops.not, &[x]);
    for x in 0..a.size() {
        for y in 0..a.size() {
            let lhs = a.apply(ops.and, &[x, not(y)]);
            let rhs = a.apply(ops.or, &[not(x), y]);
            if le(not(x), x) && le(lhs, rhs) && !le(not(y), y) {
                return verdict(
                    false,
                    format!(
                        "the quasi-equation fails at x = {}, y = {}",
                        a.label(x),
                        a.label(y)
                    ),
                );
            }
        }
    }
    verdict(true, "non-trivial, 1 join irreducible, quasi-equation holds".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{boolean2, boolean4, kleene_chain, n3};

    fn poset(labels: &[&str], le: &[(usize, usize)], iota: &[usize]) -> InvolutivePoset {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(x, y) in le {
            leq[x][y] = true;
        }
        InvolutivePoset::new(labels.iter().map(|s| s.to_string()).collect(), leq, iota.to_vec()).unwrap()
    }

    #[test]
    fn k3_dual_fails_fixpoint_condition() {
        let k3 = kleene_chain(&["0", "a", "1"]);
        let p = dual_poset(&k3).unwrap();
        assert_eq!(p.labels, vec!["a", "1"]);
        assert_eq!(p.iota, vec![1, 0]);
        let v = is_projective_by_duality(&p).unwrap();
        assert_eq!(v.failed, Some(Condition::FixpointAbove));
        assert!(!is_exact_by_quasieq(&k3).unwrap().exact);
    }

    #[test]
    fn k4_dual_is_three_point_chain() {
        let k4 = kleene_chain(&["0", "b", "c", "1"]);
        let p = dual_poset(&k4).unwrap();
        let expected = poset(&["nz", "z", "1"], &[(0, 1), (0, 2), (1, 2)], &[2, 1, 0]);
        assert!(p.isomorphism(&expected).is_some());
        assert!(is_projective_by_duality(&p).unwrap().projective);
        assert!(is_exact_by_quasieq(&k4).unwrap().exact);
    }

    #[test]
    fn boolean_algebras() {
        let two = boolean2();
        let p = dual_poset(&two).unwrap();
        assert_eq!((p.len(), p.iota.clone()), (1, vec![0]));
        assert!(is_projective_by_duality(&p).unwrap().projective);
        let four = boolean4();
        let p = dual_poset(&four).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(is_projective_by_duality(&p).unwrap().failed, Some(Condition::MeetSemilattice));
        let q = is_exact_by_quasieq(&four).unwrap();
        assert!(!q.exact);
        assert_eq!(q.reason, "1 is not join irreducible");
    }

    #[test]
    fn rejects_non_kleene() {
        assert!(matches!(dual_poset(&n3()), Err(Error::NotKleene(_))));
        // a 3-chain with the identity as negation breaks involution-compatible De Morgan
        let k3 = kleene_chain(&["0", "a", "1"]);
        let bad = FiniteAlgebra::from_fn("bad", k3.sig().clone(), k3.labels().to_vec(), |op, x| {
            if op == 2 {
                x[0]
            } else {
                k3.apply(op, x)
            }
        })
        .unwrap();
        let err = verify_kleene(&Arc::new(bad)).unwrap_err().to_string();
        assert!(err.contains("Kleene identity") || err.contains("De Morgan"), "{err}");
    }

    #[test]
    fn invalid_posets_are_rejected() {
        let labels = vec!["p".to_string(), "q".to_string()];
        let antichain = vec![vec![true, false], vec![false, true]];
        // p and q incomparable but swapped by ι
        assert!(InvolutivePoset::new(labels.clone(), antichain.clone(), vec![1, 0]).is_err());
        assert!(InvolutivePoset::new(labels, antichain, vec![0, 1]).is_ok());
    }

    #[test]
    fn three_completeness_failure() {
        // {a, b} has upper bounds u, v, f below their images but no least one
        let names = ["a", "b", "u", "v", "f", "iu", "iv", "ia", "ib"];
        let layers: [&[usize]; 5] = [&[0, 1], &[2, 3], &[4], &[5, 6], &[7, 8]];
        let mut le = Vec::new();
        for (i, lo) in layers.iter().enumerate() {
            for hi in &layers[i + 1..] {
                le.extend(lo.iter().flat_map(|&x| hi.iter().map(move |&y| (x, y))));
            }
        }
        let p = poset(&names, &le, &[7, 8, 5, 6, 4, 2, 3, 0, 1]);
        let v = is_projective_by_duality(&p).unwrap();
        assert_eq!(v.failed, Some(Condition::ThreeComplete), "{}", v.detail);
    }
}
